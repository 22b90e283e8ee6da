#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "txlab/spectrum.hpp"

namespace txlab {

struct GaussNewtonOptions {
    int max_iterations = 200;
    double rel_step_tol = 1e-10;
    int max_halvings = 40;
};

// Damped Gauss-Newton least squares. `model` fills residuals r(p) and the
// Jacobian dr/dp. Throws NumericError when the iteration fails to converge
// within the bounded budget.
Eigen::VectorXd gauss_newton(
    const std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&, Eigen::MatrixXd&)>& model,
    Eigen::VectorXd initial, const GaussNewtonOptions& opts = {});

struct LorentzianFit {
    double center_Hz = 0.0;
    double fwhm_Hz = 0.0;
    double peak = 0.0; // height above offset; negative for a dip
    double offset = 0.0;
    double residual_rms = 0.0;

    // Integrated area of the fitted line over frequency (signed), pi*peak*fwhm/2.
    double area() const;
};

// Least-squares fit of offset + peak*(w/2)^2 / ((f-c)^2 + (w/2)^2).
// Deterministic initializer: center at the extremal sample, width from the
// half-maximum span, offset from the median of the outer 20% of samples.
// Dips are detected and fitted with negative peak.
LorentzianFit lorentzian_fit(const std::vector<double>& freq_hz,
                             const std::vector<double>& values);
LorentzianFit lorentzian_fit(const Spectrum& spectrum);

} // namespace txlab
