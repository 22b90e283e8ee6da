#include "txlab/fitting.hpp"

#include <algorithm>
#include <cmath>

#include "txlab/constants.hpp"

namespace txlab {

Eigen::VectorXd gauss_newton(
    const std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&, Eigen::MatrixXd&)>& model,
    Eigen::VectorXd p, const GaussNewtonOptions& opts) {
    Eigen::VectorXd r;
    Eigen::MatrixXd j;
    model(p, r, j);
    double cost = r.squaredNorm();

    for (int it = 0; it < opts.max_iterations; ++it) {
        const Eigen::MatrixXd jtj = j.transpose() * j;
        const Eigen::VectorXd g = j.transpose() * r;
        Eigen::VectorXd step = jtj.ldlt().solve(-g);
        if (!step.allFinite()) throw NumericError("gauss_newton: singular normal equations");

        // Damping: halve the step until the cost decreases.
        double alpha = 1.0;
        Eigen::VectorXd p_next;
        Eigen::VectorXd r_next;
        Eigen::MatrixXd j_next;
        double cost_next = cost;
        bool improved = false;
        for (int h = 0; h < opts.max_halvings; ++h) {
            p_next = p + alpha * step;
            model(p_next, r_next, j_next);
            cost_next = r_next.squaredNorm();
            if (std::isfinite(cost_next) && cost_next <= cost) {
                improved = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!improved) {
            // No descent direction left; accept the current point if the
            // remaining step is already negligible.
            if (step.norm() <= opts.rel_step_tol * std::max(1.0, p.norm())) return p;
            throw NumericError("gauss_newton: failed to find a descending step");
        }

        const double rel_step = (alpha * step).norm() / std::max(1.0, p.norm());
        p = p_next;
        r = r_next;
        j = j_next;
        cost = cost_next;
        if (rel_step < opts.rel_step_tol) return p;
    }
    throw NumericError("gauss_newton: no convergence within iteration budget");
}

double LorentzianFit::area() const { return constants::pi * peak * fwhm_Hz / 2.0; }

namespace {

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

} // namespace

LorentzianFit lorentzian_fit(const std::vector<double>& freq_hz,
                             const std::vector<double>& values) {
    const std::size_t n = freq_hz.size();
    if (n != values.size()) throw DeclarationError("lorentzian_fit: array size mismatch");
    if (n < 5) throw DeclarationError("lorentzian_fit: need at least 5 points");
    for (std::size_t i = 1; i < n; ++i)
        if (!(freq_hz[i] > freq_hz[i - 1]))
            throw DeclarationError("lorentzian_fit: grid not strictly increasing");

    // Initializer: offset from the outer 20% of samples, sign from the larger
    // excursion, center at the extremal sample, width from the half-max span.
    const std::size_t edge = std::max<std::size_t>(1, n / 10);
    std::vector<double> outer;
    for (std::size_t i = 0; i < edge; ++i) outer.push_back(values[i]);
    for (std::size_t i = n - edge; i < n; ++i) outer.push_back(values[i]);
    const double offset0 = median(outer);

    double up = 0.0, down = 0.0;
    std::size_t i_up = 0, i_down = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (values[i] - offset0 > up) {
            up = values[i] - offset0;
            i_up = i;
        }
        if (offset0 - values[i] > down) {
            down = offset0 - values[i];
            i_down = i;
        }
    }
    const double sign = up >= down ? 1.0 : -1.0;
    const double amp0 = sign > 0 ? up : down;
    const std::size_t i_peak = sign > 0 ? i_up : i_down;

    double scale = 0.0;
    for (double v : values) scale = std::max(scale, std::abs(v));
    if (!(amp0 > 1e-12 * std::max(1.0, scale)))
        throw NumericError("lorentzian_fit: flat data, line not resolvable");

    const double half_level = 0.5 * amp0;
    std::size_t lo = i_peak, hi = i_peak;
    while (lo > 0 && sign * (values[lo - 1] - offset0) > half_level) --lo;
    while (hi + 1 < n && sign * (values[hi + 1] - offset0) > half_level) ++hi;
    double fwhm0 = freq_hz[hi] - freq_hz[lo];
    const double min_spacing = (freq_hz.back() - freq_hz.front()) / static_cast<double>(n - 1);
    if (hi - lo < 2 || fwhm0 < 2.0 * min_spacing)
        throw NumericError("lorentzian_fit: FWHM not resolvable by the grid");
    if (freq_hz.back() - freq_hz.front() < 2.0 * fwhm0)
        throw DeclarationError("lorentzian_fit: grid must span >= 2 estimated FWHM");

    const double f0 = freq_hz[i_peak];
    const double fscale = std::max(std::abs(f0), fwhm0);

    // Parameters scaled to O(1): [center/fscale, fwhm/fscale, peak/amp0, offset/amp0].
    auto model = [&](const Eigen::VectorXd& p, Eigen::VectorXd& r, Eigen::MatrixXd& j) {
        const double c = p(0) * fscale;
        const double w = p(1) * fscale;
        const double pk = p(2) * amp0;
        const double off = p(3) * amp0;
        r.resize(static_cast<Eigen::Index>(n));
        j.resize(static_cast<Eigen::Index>(n), 4);
        const double hw2 = 0.25 * w * w;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = freq_hz[i] - c;
            const double den = d * d + hw2;
            const double shape = hw2 / den;
            r(static_cast<Eigen::Index>(i)) = off + pk * shape - values[i];
            const double dshape_dc = hw2 * 2.0 * d / (den * den);
            const double dshape_dw = 0.5 * w * (den - hw2) / (den * den);
            j(static_cast<Eigen::Index>(i), 0) = pk * dshape_dc * fscale;
            j(static_cast<Eigen::Index>(i), 1) = pk * dshape_dw * fscale;
            j(static_cast<Eigen::Index>(i), 2) = shape * amp0;
            j(static_cast<Eigen::Index>(i), 3) = amp0;
        }
    };

    Eigen::VectorXd p0(4);
    p0 << f0 / fscale, fwhm0 / fscale, sign, offset0 / amp0;
    const Eigen::VectorXd p = gauss_newton(model, p0);

    LorentzianFit fit;
    fit.center_Hz = p(0) * fscale;
    fit.fwhm_Hz = std::abs(p(1)) * fscale;
    fit.peak = p(2) * amp0;
    fit.offset = p(3) * amp0;
    if (!(fit.fwhm_Hz > 0.0)) throw NumericError("lorentzian_fit: collapsed width");

    Eigen::VectorXd r;
    Eigen::MatrixXd j;
    model(p, r, j);
    fit.residual_rms = std::sqrt(r.squaredNorm() / static_cast<double>(n));
    return fit;
}

LorentzianFit lorentzian_fit(const Spectrum& spectrum) {
    spectrum.validate();
    return lorentzian_fit(spectrum.freq_hz, spectrum.values);
}

} // namespace txlab
