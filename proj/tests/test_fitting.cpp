#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "txlab/constants.hpp"
#include "txlab/fitting.hpp"

using namespace txlab;
namespace tt = txlab::testing;

namespace {

std::vector<double> lorentzian_samples(const std::vector<double>& f, double c, double w,
                                       double peak, double offset) {
    std::vector<double> v(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double d = f[i] - c;
        v[i] = offset + peak * 0.25 * w * w / (d * d + 0.25 * w * w);
    }
    return v;
}

} // namespace

TEST_CASE("recovers a narrow line on a gigahertz carrier") {
    const auto f = linear_grid(5.0745e9, 4000.0, 641);
    const auto v = lorentzian_samples(f, 5.0745e9, 892.0, 3.2e-3, 1.1e-4);
    const auto fit = lorentzian_fit(f, v);
    CHECK(fit.center_Hz == doctest::Approx(5.0745e9).epsilon(1e-12));
    CHECK(fit.fwhm_Hz == doctest::Approx(892.0).epsilon(1e-3));
    CHECK(fit.peak == doctest::Approx(3.2e-3).epsilon(1e-6));
    CHECK(fit.offset == doctest::Approx(1.1e-4).epsilon(1e-6));
    CHECK(fit.residual_rms < 1e-12);
}

TEST_CASE("recovers an off-center line with noise") {
    auto g = tt::rng(1234);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const auto f = linear_grid(1e6, 5e4, 501);
    auto v = lorentzian_samples(f, 1.012e6, 1.3e4, 8.0, 2.0);
    for (double& x : v) x += 0.02 * gauss(g);
    const auto fit = lorentzian_fit(f, v);
    CHECK(fit.center_Hz == doctest::Approx(1.012e6).epsilon(1e-4));
    CHECK(fit.fwhm_Hz == doctest::Approx(1.3e4).epsilon(2e-2));
    CHECK(fit.peak == doctest::Approx(8.0).epsilon(2e-2));
}

TEST_CASE("fits dips with a negative peak") {
    const auto f = linear_grid(0.0, 1e5, 301);
    const auto v = lorentzian_samples(f, 2e3, 2.5e4, -4.0, 10.0);
    const auto fit = lorentzian_fit(f, v);
    CHECK(fit.peak == doctest::Approx(-4.0).epsilon(1e-8));
    CHECK(fit.fwhm_Hz == doctest::Approx(2.5e4).epsilon(1e-6));
    CHECK(fit.area() ==
          doctest::Approx(-4.0 * 2.5e4 * txlab::constants::pi / 2).epsilon(1e-6));
}

TEST_CASE("flat data is rejected") {
    const auto f = linear_grid(0.0, 1e3, 101);
    std::vector<double> v(f.size(), 7.25);
    CHECK_THROWS_AS(lorentzian_fit(f, v), NumericError);
}

TEST_CASE("degenerate inputs are rejected") {
    // Too few points.
    CHECK_THROWS_AS(lorentzian_fit({1.0, 2.0, 3.0, 4.0},
                                    {0.0, 1.0, 0.5, 0.2}),
                    DeclarationError);
    // Line much wider than the scanned span.
    const auto f = linear_grid(0.0, 1e3, 101);
    const auto v = lorentzian_samples(f, 0.0, 5e4, 1.0, 0.0);
    CHECK_THROWS_AS(lorentzian_fit(f, v), Error);
    // Line far narrower than the grid spacing.
    const auto coarse = linear_grid(0.0, 1e6, 101);
    const auto narrow = lorentzian_samples(coarse, 0.0, 10.0, 1.0, 0.0);
    CHECK_THROWS_AS(lorentzian_fit(coarse, narrow), NumericError);
}

TEST_CASE("gauss-newton solves a plain exponential fit") {
    // y = a * exp(-b x) sampled exactly.
    std::vector<double> xs, ys;
    for (int i = 0; i < 30; ++i) {
        xs.push_back(0.1 * i);
        ys.push_back(2.5 * std::exp(-0.7 * 0.1 * i));
    }
    auto model = [&](const Eigen::VectorXd& p, Eigen::VectorXd& r, Eigen::MatrixXd& j) {
        r.resize(static_cast<Eigen::Index>(xs.size()));
        j.resize(static_cast<Eigen::Index>(xs.size()), 2);
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double e = std::exp(-p(1) * xs[i]);
            r(static_cast<Eigen::Index>(i)) = p(0) * e - ys[i];
            j(static_cast<Eigen::Index>(i), 0) = e;
            j(static_cast<Eigen::Index>(i), 1) = -p(0) * xs[i] * e;
        }
    };
    Eigen::VectorXd p0(2);
    p0 << 1.0, 0.2;
    const auto p = gauss_newton(model, p0);
    CHECK(p(0) == doctest::Approx(2.5).epsilon(1e-9));
    CHECK(p(1) == doctest::Approx(0.7).epsilon(1e-9));
}
