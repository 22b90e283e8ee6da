#pragma once

#include <complex>
#include <string>
#include <vector>

#include "txlab/errors.hpp"

namespace txlab {

enum class SpectrumKind {
    scattering_amplitude,
    flux_psd,        // photon flux spectral density, photons/s/Hz (dimensionless)
    symmetrized_psd, // S(omega)/(hbar*omega), quanta units, amplifier gain included
};

// Real-valued sampled spectrum on a strictly increasing frequency grid.
struct Spectrum {
    std::vector<double> freq_hz;
    std::vector<double> values;
    SpectrumKind kind = SpectrumKind::flux_psd;

    void validate() const;
};

// Complex-valued variant, used for scattering amplitudes such as s_oe(omega).
struct ComplexSpectrum {
    std::vector<double> freq_hz;
    std::vector<std::complex<double>> values;

    void validate() const;
};

// Uniform grid of n points covering center +/- half_span.
std::vector<double> linear_grid(double center_hz, double half_span_hz, std::size_t n);

// Trapezoid integral of a sampled spectrum over its grid (per-Hz measure).
double trapezoid(const std::vector<double>& freq_hz, const std::vector<double>& values);

} // namespace txlab
