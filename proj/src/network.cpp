#include "txlab/network.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <Eigen/Eigenvalues>

#include "txlab/constants.hpp"

namespace txlab {

namespace {

using constants::two_pi;
using cplx = std::complex<double>;
constexpr cplx I{0.0, 1.0};

int find_label(const std::vector<std::string>& labels, const std::string& label) {
    auto it = std::find(labels.begin(), labels.end(), label);
    return it == labels.end() ? -1 : static_cast<int>(it - labels.begin());
}

} // namespace

void Spectrum::validate() const {
    if (freq_hz.size() != values.size())
        throw DeclarationError("spectrum: frequency and value arrays differ in length");
    for (std::size_t i = 1; i < freq_hz.size(); ++i)
        if (!(freq_hz[i] > freq_hz[i - 1]))
            throw DeclarationError("spectrum: frequency grid not strictly increasing");
}

void ComplexSpectrum::validate() const {
    if (freq_hz.size() != values.size())
        throw DeclarationError("spectrum: frequency and value arrays differ in length");
    for (std::size_t i = 1; i < freq_hz.size(); ++i)
        if (!(freq_hz[i] > freq_hz[i - 1]))
            throw DeclarationError("spectrum: frequency grid not strictly increasing");
}

std::vector<double> linear_grid(double center_hz, double half_span_hz, std::size_t n) {
    if (n < 2) throw DeclarationError("linear_grid: need at least 2 points");
    std::vector<double> g(n);
    const double lo = center_hz - half_span_hz;
    const double step = 2.0 * half_span_hz / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) g[i] = lo + step * static_cast<double>(i);
    return g;
}

double trapezoid(const std::vector<double>& freq_hz, const std::vector<double>& values) {
    if (freq_hz.size() != values.size() || freq_hz.size() < 2)
        throw DeclarationError("trapezoid: need matching arrays of >= 2 samples");
    double acc = 0.0;
    for (std::size_t i = 1; i < freq_hz.size(); ++i)
        acc += 0.5 * (values[i] + values[i - 1]) * (freq_hz[i] - freq_hz[i - 1]);
    return acc;
}

int LinearSystem::mode_index(const std::string& label) const {
    int i = find_label(mode_labels, label);
    if (i < 0) throw DeclarationError("unknown mode '" + label + "'");
    return i;
}

int LinearSystem::input_index(const std::string& label) const {
    int i = find_label(input_labels, label);
    if (i < 0) throw DeclarationError("unknown bath '" + label + "'");
    return i;
}

int LinearSystem::output_index(const std::string& label) const {
    int i = find_label(output_labels, label);
    if (i < 0) throw DeclarationError("unknown port '" + label + "'");
    return i;
}

std::vector<double> LinearSystem::occupancy_vector(
    const std::map<std::string, double>& occ) const {
    std::vector<double> n(input_labels.size(), 0.0);
    for (const auto& [label, value] : occ) {
        int k = input_index(label); // rejects unknown bath labels
        if (value < 0.0 || !std::isfinite(value))
            throw DeclarationError("bath '" + label + "': invalid occupancy");
        n[static_cast<std::size_t>(k)] = value;
    }
    return n;
}

std::map<std::string, double> LinearSystem::default_occupancies() const {
    std::map<std::string, double> occ;
    for (std::size_t k = 0; k < input_labels.size(); ++k)
        occ[input_labels[k]] = input_occupancies[k];
    return occ;
}

LinearSystem build_system(const std::vector<ModeDecl>& modes,
                          const std::vector<CouplingDecl>& couplings,
                          const std::vector<BathDecl>& baths) {
    LinearSystem sys;

    std::set<std::string> seen;
    for (const auto& m : modes) {
        if (!seen.insert(m.label).second)
            throw DeclarationError("mode '" + m.label + "': duplicate label");
        if (!std::isfinite(m.frequency_hz) || m.frequency_hz < 0.0)
            throw DeclarationError("mode '" + m.label + "': frequency must be finite and >= 0");
        sys.mode_labels.push_back(m.label);
    }
    if (sys.mode_labels.empty()) throw DeclarationError("network has no modes");

    seen.clear();
    for (const auto& b : baths) {
        if (!seen.insert(b.label).second)
            throw DeclarationError("bath '" + b.label + "': duplicate label");
        if (find_label(sys.mode_labels, b.attached_mode) < 0)
            throw DeclarationError("bath '" + b.label + "': unknown mode '" + b.attached_mode + "'");
        if (!std::isfinite(b.rate_hz) || b.rate_hz < 0.0)
            throw DeclarationError("bath '" + b.label + "': negative or non-finite rate");
        if (!std::isfinite(b.occupancy) || b.occupancy < 0.0)
            throw DeclarationError("bath '" + b.label + "': negative or non-finite occupancy");
        sys.input_labels.push_back(b.label);
        sys.input_occupancies.push_back(b.occupancy);
        if (b.is_port) sys.output_labels.push_back(b.label);
    }

    for (const auto& c : couplings) {
        if (c.mode_a == c.mode_b)
            throw DeclarationError("coupling '" + c.mode_a + "'-'" + c.mode_b +
                                   "': modes must differ");
        if (find_label(sys.mode_labels, c.mode_a) < 0)
            throw DeclarationError("coupling: unknown mode '" + c.mode_a + "'");
        if (find_label(sys.mode_labels, c.mode_b) < 0)
            throw DeclarationError("coupling: unknown mode '" + c.mode_b + "'");
        if (!std::isfinite(c.rate_hz))
            throw DeclarationError("coupling '" + c.mode_a + "'-'" + c.mode_b +
                                   "': non-finite rate");
    }

    const int M = sys.n_modes();
    const int K = sys.n_inputs();
    const int P = sys.n_outputs();

    sys.A = Eigen::MatrixXcd::Zero(2 * M, 2 * M);
    sys.B = Eigen::MatrixXcd::Zero(2 * M, 2 * K);
    sys.C = Eigen::MatrixXcd::Zero(2 * P, 2 * M);
    sys.D = Eigen::MatrixXcd::Zero(2 * P, 2 * K);

    // Annihilation block of A: diag -(i*omega_j + kappa_j/2), beam-splitter
    // couplings as symmetric -iG. Creation block is the elementwise conjugate.
    Eigen::MatrixXcd Aa = Eigen::MatrixXcd::Zero(M, M);
    for (int j = 0; j < M; ++j) Aa(j, j) = -I * (two_pi * modes[j].frequency_hz);
    for (const auto& b : baths) {
        int j = find_label(sys.mode_labels, b.attached_mode);
        Aa(j, j) -= 0.5 * two_pi * b.rate_hz;
    }
    for (const auto& c : couplings) {
        int a = find_label(sys.mode_labels, c.mode_a);
        int b = find_label(sys.mode_labels, c.mode_b);
        const cplx g = -I * (two_pi * c.rate_hz);
        Aa(a, b) += g;
        Aa(b, a) += g;
    }
    sys.A.topLeftCorner(M, M) = Aa;
    sys.A.bottomRightCorner(M, M) = Aa.conjugate();

    int p = 0;
    for (int k = 0; k < K; ++k) {
        const auto& b = baths[static_cast<std::size_t>(k)];
        const int j = find_label(sys.mode_labels, b.attached_mode);
        const double sq = std::sqrt(two_pi * b.rate_hz);
        sys.B(j, k) = sq;
        sys.B(M + j, K + k) = sq;
        if (b.is_port) {
            sys.C(p, j) = sq;
            sys.C(P + p, M + j) = sq;
            sys.D(p, k) = -1.0;
            sys.D(P + p, K + k) = -1.0;
            ++p;
        }
    }

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(sys.A, /*computeEigenvectors=*/false);
    sys.max_re_eig = es.eigenvalues().real().maxCoeff();

    return sys;
}

namespace {

// Reusable factorization workspace: one per thread in grid sweeps, so the
// per-frequency hot loop does not touch the heap.
struct SolveWorkspace {
    Eigen::MatrixXcd resolvent; // (-i w I - A)
    Eigen::MatrixXcd modes_in;  // (-i w I - A)^-1 B
    Eigen::MatrixXcd xi;        // C modes_in + D
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu;

    void factorize(const LinearSystem& sys, double omega_rad) {
        resolvent = -sys.A;
        resolvent.diagonal().array() -= I * omega_rad;
        lu.compute(resolvent);
        modes_in = lu.solve(sys.B);
    }

    void transfer(const LinearSystem& sys, double freq_hz) {
        factorize(sys, two_pi * freq_hz);
        xi.noalias() = sys.C * modes_in;
        xi += sys.D;
        if (!xi.allFinite())
            throw NumericError("transfer matrix singular or degenerate at " +
                               std::to_string(freq_hz) + " Hz");
    }
};

void require_stable(const LinearSystem& sys) {
    if (!sys.stable())
        throw NumericError("system unstable: max Re eig(A) = " +
                           std::to_string(sys.max_re_eig) + " rad/s");
}

// Partition a grid across the OpenMP team with one workspace per thread.
// Each index is computed by the same serial kernel, so results are bitwise
// independent of the partitioning.
template <typename Fn>
void parallel_grid(std::size_t n, Fn&& body) {
    std::exception_ptr err;
#pragma omp parallel
    {
        SolveWorkspace ws;
#pragma omp for schedule(static)
        for (long long i = 0; i < static_cast<long long>(n); ++i) {
            try {
                body(static_cast<std::size_t>(i), ws);
            } catch (...) {
#pragma omp critical
                if (!err) err = std::current_exception();
            }
        }
    }
    if (err) std::rethrow_exception(err);
}

template <typename Fn>
void serial_grid(std::size_t n, Fn&& body) {
    SolveWorkspace ws;
    for (std::size_t i = 0; i < n; ++i) body(i, ws);
}

std::vector<double> psd_row_values(const LinearSystem& sys, const std::vector<double>& occ,
                                   int port_row, const std::vector<double>& freq_hz,
                                   bool parallel) {
    const int K = sys.n_inputs();
    std::vector<double> values(freq_hz.size(), 0.0);
    auto eval = [&](std::size_t i, SolveWorkspace& ws) {
        ws.transfer(sys, freq_hz[i]);
        double v = 0.0;
        for (int k = 0; k < K; ++k)
            v += std::norm(ws.xi(port_row, k)) * occ[static_cast<std::size_t>(k)];
        values[i] = v;
    };
    if (parallel) {
        parallel_grid(freq_hz.size(), eval);
    } else {
        serial_grid(freq_hz.size(), eval);
    }
    return values;
}

} // namespace

Eigen::MatrixXcd transfer_matrix(const LinearSystem& sys, double freq_hz) {
    require_stable(sys);
    SolveWorkspace ws;
    ws.transfer(sys, freq_hz);
    return ws.xi;
}

std::vector<Eigen::MatrixXcd> transfer_matrix_sweep_serial(const LinearSystem& sys,
                                                           std::span<const double> freq_hz) {
    require_stable(sys);
    std::vector<Eigen::MatrixXcd> out(freq_hz.size());
    serial_grid(freq_hz.size(), [&](std::size_t i, SolveWorkspace& ws) {
        ws.transfer(sys, freq_hz[i]);
        out[i] = ws.xi;
    });
    return out;
}

std::vector<Eigen::MatrixXcd> transfer_matrix_sweep(const LinearSystem& sys,
                                                    std::span<const double> freq_hz) {
    require_stable(sys);
    std::vector<Eigen::MatrixXcd> out(freq_hz.size());
    for (auto& m : out) m.resize(sys.D.rows(), sys.D.cols());
    parallel_grid(freq_hz.size(), [&](std::size_t i, SolveWorkspace& ws) {
        ws.transfer(sys, freq_hz[i]);
        out[i] = ws.xi;
    });
    return out;
}

Spectrum output_flux_psd(const LinearSystem& sys,
                         const std::map<std::string, double>& bath_occupancies,
                         const std::string& port, const std::vector<double>& freq_hz) {
    require_stable(sys);
    const int row = sys.output_index(port);
    const std::vector<double> occ = sys.occupancy_vector(bath_occupancies);
    Spectrum s;
    s.freq_hz = freq_hz;
    s.values = psd_row_values(sys, occ, row, freq_hz, /*parallel=*/true);
    s.kind = SpectrumKind::flux_psd;
    s.validate();
    return s;
}

Spectrum output_flux_psd_serial(const LinearSystem& sys,
                                const std::map<std::string, double>& bath_occupancies,
                                const std::string& port,
                                const std::vector<double>& freq_hz) {
    require_stable(sys);
    const int row = sys.output_index(port);
    const std::vector<double> occ = sys.occupancy_vector(bath_occupancies);
    Spectrum s;
    s.freq_hz = freq_hz;
    s.values = psd_row_values(sys, occ, row, freq_hz, /*parallel=*/false);
    s.kind = SpectrumKind::flux_psd;
    s.validate();
    return s;
}

namespace {

// Adaptive trapezoid on [a,b] with Richardson acceptance against a global
// scale. f is the internal-mode PSD in angular measure.
template <typename F>
double adaptive_panel(F&& f, double a, double b, double fa, double fb, double scale_tol,
                      int depth, int max_depth) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    const double coarse = 0.5 * (b - a) * (fa + fb);
    const double fine = 0.25 * (b - a) * (fa + 2.0 * fm + fb);
    const double err = (fine - coarse) / 3.0;
    if (std::abs(err) <= scale_tol * std::max(1.0, std::abs(fine)) || depth >= max_depth)
        return fine + err;
    return adaptive_panel(f, a, m, fa, fm, scale_tol, depth + 1, max_depth) +
           adaptive_panel(f, m, b, fm, fb, scale_tol, depth + 1, max_depth);
}

} // namespace

OccupancyResult mode_occupancy_numeric(const LinearSystem& sys,
                                       const std::map<std::string, double>& bath_occupancies,
                                       const std::string& mode,
                                       const OccupancyQuadratureOptions& opts) {
    require_stable(sys);
    const int row = sys.mode_index(mode);
    const std::vector<double> occ = sys.occupancy_vector(bath_occupancies);
    const int M = sys.n_modes();
    const int K = sys.n_inputs();

    bool any = false;
    for (double n : occ) any = any || n > 0.0;
    if (!any) return {0.0, 0.0};

    // Internal PSD of the mode: row of (-i w I - A)^-1 B weighted by bath
    // occupancies, annihilation sector.
    SolveWorkspace ws;
    auto psd = [&](double omega_rad) {
        ws.factorize(sys, omega_rad);
        if (!ws.modes_in.allFinite())
            throw NumericError("occupancy quadrature hit a singular solve at omega = " +
                               std::to_string(omega_rad / two_pi) + " Hz");
        double v = 0.0;
        for (int k = 0; k < K; ++k)
            v += std::norm(ws.modes_in(row, k)) * occ[static_cast<std::size_t>(k)];
        return v;
    };

    // Hybridized resonance of this mode: the eigenvalue of the annihilation
    // block whose imaginary part lies closest to -omega_mode. Its real part
    // sets the narrowest linewidth the quadrature has to resolve.
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(sys.A.topLeftCorner(M, M), false);
    const double omega_mode = -std::imag(sys.A(row, row));
    double best = std::numeric_limits<double>::max();
    double center = omega_mode, width = -2.0 * std::real(sys.A(row, row));
    for (int j = 0; j < M; ++j) {
        const auto lam = es.eigenvalues()(j);
        const double d = std::abs(std::imag(lam) + omega_mode);
        if (d < best) {
            best = d;
            center = -std::imag(lam);
            width = -2.0 * std::real(lam);
        }
    }
    if (!(width > 0.0)) throw NumericError("mode '" + mode + "' has no damping");

    const double half = opts.window_linewidths * width;
    const double lo = center - half;
    const double hi = center + half;

    // Seed breakpoints at every mode resonance and a few of its linewidths so
    // narrow features inside a wide window cannot be stepped over.
    std::vector<double> knots{lo, hi, center};
    static constexpr double fan[] = {0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0};
    for (int j = 0; j < M; ++j) {
        const double wj = -std::imag(sys.A(j, j));
        const double gj = std::max(width, -2.0 * std::real(sys.A(j, j)));
        if (wj > lo && wj < hi) knots.push_back(wj);
        for (double s : fan) {
            if (wj + s * gj > lo && wj + s * gj < hi) knots.push_back(wj + s * gj);
            if (wj - s * gj > lo && wj - s * gj < hi) knots.push_back(wj - s * gj);
        }
        for (double s : fan) {
            if (center + s * width > lo && center + s * width < hi)
                knots.push_back(center + s * width);
            if (center - s * width > lo && center - s * width < hi)
                knots.push_back(center - s * width);
        }
    }
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

    std::vector<double> fk(knots.size());
    for (std::size_t i = 0; i < knots.size(); ++i) fk[i] = psd(knots[i]);

    double peak = 0.0;
    for (double v : fk) peak = std::max(peak, v);
    const double scale_tol = opts.rel_tol;

    double integral = 0.0;
    for (std::size_t i = 1; i < knots.size(); ++i)
        integral += adaptive_panel(psd, knots[i - 1], knots[i], fk[i - 1], fk[i], scale_tol, 0,
                                   opts.max_depth);

    // The integrand decays as 1/delta^2 beyond the window; for that decay the
    // exact tail is f(edge) * distance(edge, center), per side.
    const double tail = fk.front() * (center - lo) + fk.back() * (hi - center);

    const double occ_value = (integral + tail) / two_pi;
    const double tail_occ = tail / two_pi;
    if (occ_value > 0.0 && tail_occ > 0.05 * occ_value)
        throw NumericError("occupancy quadrature window too narrow: tail estimate " +
                           std::to_string(tail_occ) + " of " + std::to_string(occ_value) +
                           " quanta");
    return {occ_value, tail_occ};
}

double check_passivity(const LinearSystem& sys, double freq_hz) {
    require_stable(sys);
    SolveWorkspace ws;
    ws.transfer(sys, freq_hz);
    const int P = sys.n_outputs();
    const int K = sys.n_inputs();
    const Eigen::MatrixXcd u = ws.xi.topLeftCorner(P, K);
    // Row form tests output orthonormality, column form input-flux
    // conservation; a bath missing from the port set shows up as the
    // absorbed fraction in the column form.
    const double row_dev =
        (u * u.adjoint() - Eigen::MatrixXcd::Identity(P, P)).cwiseAbs().maxCoeff();
    const double col_dev =
        (u.adjoint() * u - Eigen::MatrixXcd::Identity(K, K)).cwiseAbs().maxCoeff();
    return std::max(row_dev, col_dev);
}

} // namespace txlab
