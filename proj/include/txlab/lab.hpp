#pragma once

#include <random>
#include <utility>
#include <vector>

#include "txlab/device.hpp"
#include "txlab/fitting.hpp"
#include "txlab/metrics.hpp"
#include "txlab/network.hpp"
#include "txlab/spectrum.hpp"

namespace txlab {

// Measurement-chain gains and losses. Losses are power fractions in (0,1],
// beta gains are linear power factors, amplifier gains are in dB.
struct ChainGains {
    double alpha_e = 1.0; // microwave input loss
    double beta_e = 1.0;  // microwave detection gain
    double alpha_o = 1.0; // optical input loss
    double beta_o = 1.0;  // optical detection gain
    double gain_a_dB = 0.0; // electrical amplification chain gain
    double gain_o_dB = 0.0; // optical detection gain
    double n_amp = 0.0;     // amplifier added noise, photons
    double f_if_Hz = 1.0;   // integration bandwidth

    void validate() const;
};

struct FourPortResult {
    double T_oe = 0.0;
    double T_eo = 0.0;
    double R_ee = 0.0;
    double R_oo = 0.0;
    double eta_ext_est = 0.0;
    double alpha_e_beta_o = 0.0; // recovered microwave-loss x optical-gain product
    double probe_Hz = 0.0;
    double offres_e_Hz = 0.0; // selected off-resonance reflection points
    double offres_o_Hz = 0.0;
    double offres_e_refl = 0.0; // true |xi_ee|^2 there (diagnostic, ~1)
    double offres_o_refl = 0.0;
};

// Simulate the four-port efficiency measurement: transmittances synthesized
// from the true scattering elements at the transduction peak, reflectances
// from the chain factors at points >= 10 linewidths off resonance. The
// estimator sqrt(T_eo T_oe / (R_ee R_oo)) cancels every chain factor.
FourPortResult four_port_run(const LinearSystem& sys, const ChainGains& chain,
                             double probe_Hz, const std::string& port_e = "e_ext",
                             const std::string& port_o = "o_ext");

enum class ThermometryRegime {
    detuned,      // Gamma_em << Gamma_i via large microwave-mechanics detuning
    on_resonance, // omega_e = omega_m, noise squashing included
};

struct ElectricalPsdParams {
    DerivedRates rates;
    ThermalBaths baths;
    double omega_e_Hz = 0.0;
    double omega_m_Hz = 0.0;
    ThermometryRegime regime = ThermometryRegime::detuned;
};

// Amplified symmetrized output noise spectral density S(omega)/(hbar omega)
// in quanta, as seen by the spectrum analyzer.
Spectrum electrical_psd(const ElectricalPsdParams& params, const ChainGains& chain,
                        const std::vector<double>& freq_hz);

struct MicrowaveOccupancyResult {
    double n_e_int = 0.0;
    double n_mw = 0.0;
    LorentzianFit fit;
};

// Thermometry at V_DC = 0: fit the bare microwave resonator line and invert
// its contrast against the amplifier floor. Gain-independent by construction.
MicrowaveOccupancyResult extract_microwave_occupancy(const Spectrum& spectrum,
                                                     const ChainGains& chain,
                                                     double kappa_e_ext_Hz,
                                                     double kappa_e_int_Hz);

struct MechanicalOccupancyResult {
    double n_m = 0.0;
    double heating_rate_Hz = 0.0; // Gamma_f n_f + Gamma_p n_p
    LorentzianFit fit;
};

// Mechanical thermometry: area of the mechanical line gives the intrinsic
// heating rate; in the on-resonance regime the noise-squashing term
// proportional to n_mw is removed before the area is converted.
MechanicalOccupancyResult extract_mechanical_occupancy(const Spectrum& spectrum,
                                                       const ChainGains& chain,
                                                       const DerivedRates& rates,
                                                       double n_mw,
                                                       ThermometryRegime regime);

struct GainCalResult {
    double gain_a_dB = 0.0;
    double n_amp = 0.0;
};

// Fit P = f_IF hbar omega 10^(G/10) (n_bose(T) + n_amp) over a mixing-chamber
// temperature sweep.
GainCalResult gain_cal_temperature_sweep(const std::vector<std::pair<double, double>>& t_k_p_w,
                                         double freq_hz, double f_if_Hz);

// Sideband-asymmetry thermometer: 1/n_m = integral(S_b)/integral(S_r) - 1.
// Both spectra must be background-subtracted and share one grid.
double sideband_asymmetry(const Spectrum& s_red, const Spectrum& s_blue);

// Companion calibration: refer an electrically measured thermal-emission
// spectrum to an independently known n_m to recover the output-line gain.
double gain_from_thermal_emission(const Spectrum& spectrum, const DerivedRates& rates,
                                  double n_mw, double n_m_reference,
                                  ThermometryRegime regime);

// Refer detected optical noise power to the transducer input. The optical
// detection gain cancels between numerator and denominator.
double optical_noise_referral(double p_o_noise_W, double p_oe_W, double p_e_W,
                              double f_if_Hz, double freq_o_Hz, double freq_e_Hz);

// ---- synthetic data generators (seeded, for round-trip and robustness tests)

// Multiplicative Gaussian noise: v -> v * (1 + sigma_rel * N(0,1)).
Spectrum add_relative_noise(const Spectrum& s, double sigma_rel, std::mt19937_64& rng);

// Matched red/blue sideband Lorentzian pair with area ratio (n_m + 1)/n_m.
std::pair<Spectrum, Spectrum> synth_sideband_pair(double n_m, double center_hz,
                                                  double fwhm_hz, double flux_scale,
                                                  const std::vector<double>& freq_hz);

// Temperature-sweep data for the gain calibration.
std::vector<std::pair<double, double>> synth_gaincal_data(double gain_a_dB, double n_amp,
                                                          double freq_hz, double f_if_Hz,
                                                          const std::vector<double>& temps_K);

} // namespace txlab
