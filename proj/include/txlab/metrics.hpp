#pragma once

#include <complex>

#include "txlab/device.hpp"

namespace txlab {

// Weak-coupling transmission amplitude around the mechanical mode:
//   s_oe(omega) = -sqrt(eta_e eta_o Gamma_em Gamma_om)
//                 / (i (omega_m - omega) + Gamma_tot/2).
// Valid for Gamma_em << kappa_e, Gamma_om << kappa_o (caller's regime).
std::complex<double> s_oe_analytic(const DerivedRates& rates, double freq_hz,
                                   double omega_m_Hz);

// Exact three-mode transmission amplitude in terms of the resonator
// susceptibilities; reduces to s_oe_analytic near the mechanical mode in the
// weak-coupling limit and exactly at resonance.
std::complex<double> s_oe_exact(const DeviceParams& dev, const DerivedRates& rates,
                                double omega_e_Hz, double delta_o_Hz, double freq_hz);

// Peak external efficiency eta_e eta_o 4 Gamma_em Gamma_om / Gamma_tot^2.
double eta_ext(const DerivedRates& rates);
// Internal efficiency eta_ext / (eta_e eta_o).
double eta_int(const DerivedRates& rates);
// eta_ext evaluated off-peak, |s_oe(omega)|^2.
double eta_ext_at(const DerivedRates& rates, double freq_hz, double omega_m_Hz);

// Conversion bandwidth, the total mechanical linewidth (Hz).
double bandwidth_Hz(const DerivedRates& rates);

enum class OccupancyVariant {
    full,       // includes the Gamma_em * n_mw back-channel term
    simplified, // hot-bath term only
};

struct Occupancies {
    double n_mw = 0.0;
    double n_m = 0.0;
};

// Microwave and mechanical steady-state thermal occupancies.
Occupancies occupancies(const DerivedRates& rates, const ThermalBaths& baths,
                        OccupancyVariant variant = OccupancyVariant::full);

// Input-referred added noise for upconversion, two algebraically identical
// routes. Referral is undefined at Gamma_em = 0 and raises UnphysicalError.
double added_noise_bath_form(const DerivedRates& rates, const ThermalBaths& baths);
double added_noise_from_n_m(const DerivedRates& rates, double n_m);
// Measured-noise route: output optical noise divided by the efficiency.
double added_noise_optical_route(double n_o_out, double eta_ext_value);

// Thermal photon flux spectral density at the optical output (three-term
// Lorentzian sum), photons/s/Hz.
double optical_output_noise(const DerivedRates& rates, const ThermalBaths& baths,
                            double freq_hz, double omega_m_Hz);

// Efficiency-bandwidth-duty-cycle product (Hz).
double throughput_Hz(double eta_ext_value, double bandwidth_hz, double duty_cycle);

// Scalar figures of merit at one operating point.
struct MetricsReport {
    DerivedRates rates;
    double eta_ext = 0.0;
    double eta_int = 0.0;
    double bandwidth_Hz = 0.0;
    double n_mw = 0.0;
    double n_m = 0.0;
    double n_add = 0.0; // NaN when Gamma_em = 0 (referral undefined)
    double throughput_Hz = 0.0;
};

MetricsReport metrics_report(const DeviceParams& dev, const OperatingPoint& op);

} // namespace txlab
