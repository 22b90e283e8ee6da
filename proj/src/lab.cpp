#include "txlab/lab.hpp"

#include <cmath>

#include "txlab/constants.hpp"

namespace txlab {

using constants::h_planck;
using constants::k_boltzmann;
using constants::pi;
using constants::two_pi;

void ChainGains::validate() const {
    if (!(alpha_e > 0.0) || alpha_e > 1.0 || !(alpha_o > 0.0) || alpha_o > 1.0)
        throw DeclarationError("chain: losses alpha must lie in (0, 1]");
    if (!(beta_e > 0.0) || !(beta_o > 0.0))
        throw DeclarationError("chain: gains beta must be > 0");
    if (!(f_if_Hz > 0.0)) throw DeclarationError("chain: f_IF must be > 0");
    if (n_amp < 0.0) throw DeclarationError("chain: n_amp must be >= 0");
}

namespace {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double lorentzian(double f, double center, double fwhm) {
    const double d = center - f;
    return 1.0 / (d * d + 0.25 * fwhm * fwhm);
}

} // namespace

FourPortResult four_port_run(const LinearSystem& sys, const ChainGains& chain,
                             double probe_Hz, const std::string& port_e,
                             const std::string& port_o) {
    chain.validate();
    const int row_o = sys.output_index(port_o);
    const int row_e = sys.output_index(port_e);
    const int col_e = sys.input_index(port_e);
    const int col_o = sys.input_index(port_o);

    const Eigen::MatrixXcd xi = transfer_matrix(sys, probe_Hz);
    const double eta_true = std::norm(xi(row_o, col_e));

    // Off-resonance reflection points, 10 linewidths out from each resonator.
    auto resonator_of_port = [&](const std::string& port) {
        // A port bath attaches to exactly one mode; its linewidth is the
        // mode's total damping.
        const int mode = [&] {
            for (int j = 0; j < sys.n_modes(); ++j)
                if (std::abs(sys.B(j, sys.input_index(port))) > 0.0) return j;
            throw DeclarationError("port '" + port + "' attaches to no mode");
        }();
        const double freq = -std::imag(sys.A(mode, mode)) / two_pi;
        const double linewidth = -2.0 * std::real(sys.A(mode, mode)) / two_pi;
        return std::pair<double, double>{freq, linewidth};
    };
    const auto [f_e, lw_e] = resonator_of_port(port_e);
    const auto [f_o, lw_o] = resonator_of_port(port_o);

    FourPortResult res;
    res.probe_Hz = probe_Hz;
    res.offres_e_Hz = f_e + 10.0 * lw_e;
    res.offres_o_Hz = f_o + 10.0 * lw_o;
    res.offres_e_refl = std::norm(transfer_matrix(sys, res.offres_e_Hz)(row_e, col_e));
    res.offres_o_refl = std::norm(transfer_matrix(sys, res.offres_o_Hz)(row_o, col_o));

    // Observables the four-port scheme actually records: transmitted powers
    // carry the conversion efficiency, off-resonance reflected powers only
    // the chain factors.
    res.T_oe = chain.alpha_e * eta_true * chain.beta_o;
    res.T_eo = chain.alpha_o * eta_true * chain.beta_e;
    res.R_ee = chain.alpha_e * chain.beta_e;
    res.R_oo = chain.alpha_o * chain.beta_o;
    if (!(res.R_ee > 0.0) || !(res.R_oo > 0.0))
        throw UnphysicalError("four-port: zero reflectance denominator");
    res.eta_ext_est = std::sqrt(res.T_eo * res.T_oe / (res.R_ee * res.R_oo));
    res.alpha_e_beta_o = res.eta_ext_est > 0.0 ? res.T_oe / res.eta_ext_est
                                               : chain.alpha_e * chain.beta_o;
    return res;
}

Spectrum electrical_psd(const ElectricalPsdParams& p, const ChainGains& chain,
                        const std::vector<double>& freq_hz) {
    chain.validate();
    const double g = db_to_linear(chain.gain_a_dB);
    const auto& r = p.rates;
    const auto& b = p.baths;
    const double heat = b.Gamma_f_Hz * b.n_f + b.Gamma_p_Hz * b.n_p;
    const double n_mw = b.kappa_e_int_Hz * b.n_e_int / b.kappa_e_Hz;
    const double eta_e = b.kappa_e_ext_Hz() / b.kappa_e_Hz;

    Spectrum s;
    s.freq_hz = freq_hz;
    s.values.resize(freq_hz.size());
    s.kind = SpectrumKind::symmetrized_psd;

    for (std::size_t i = 0; i < freq_hz.size(); ++i) {
        const double f = freq_hz[i];
        double v = chain.n_amp + 0.5;
        switch (p.regime) {
        case ThermometryRegime::detuned:
            // Mechanical emission plus the bare microwave resonator line;
            // the two features live at well-separated frequencies here.
            v += eta_e * r.Gamma_em_Hz * heat * lorentzian(f, p.omega_m_Hz, r.Gamma_tot_Hz);
            v += b.kappa_e_ext_Hz() * b.kappa_e_int_Hz * b.n_e_int *
                 lorentzian(f, p.omega_e_Hz, b.kappa_e_Hz);
            break;
        case ThermometryRegime::on_resonance:
            // omega_e = omega_m: mechanical feature with the noise-squashing
            // correction on n_mw, flat 4 eta_e n_mw resonator background.
            v += eta_e * r.Gamma_em_Hz *
                 (heat + (r.Gamma_em_Hz - 2.0 * r.Gamma_tot_Hz) * n_mw) *
                 lorentzian(f, p.omega_m_Hz, r.Gamma_tot_Hz);
            v += 4.0 * eta_e * n_mw;
            break;
        }
        s.values[i] = g * v;
    }
    s.validate();
    return s;
}

MicrowaveOccupancyResult extract_microwave_occupancy(const Spectrum& spectrum,
                                                     const ChainGains& chain,
                                                     double kappa_e_ext_Hz,
                                                     double kappa_e_int_Hz) {
    chain.validate();
    MicrowaveOccupancyResult out;
    try {
        out.fit = lorentzian_fit(spectrum);
    } catch (const NumericError&) {
        // Flat spectrum: no resonator line, cold bath.
        double lo = spectrum.values.front(), hi = lo;
        for (double v : spectrum.values) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        if (hi - lo <= 1e-9 * std::max(1.0, std::abs(hi))) {
            out.fit.offset = 0.5 * (hi + lo);
            out.n_e_int = 0.0;
            out.n_mw = 0.0;
            return out;
        }
        throw;
    }
    if (!(out.fit.offset > 0.0))
        throw NumericError("microwave thermometry: non-positive amplifier floor");
    // (peak/floor) * (n_amp + 1/2) is gain-free; peak height of the resonator
    // line is kappa_ext kappa_int n_e_int / (kappa_e/2)^2.
    const double kappa_e = kappa_e_ext_Hz + kappa_e_int_Hz;
    const double contrast = out.fit.peak / out.fit.offset;
    const double line_peak = contrast * (chain.n_amp + 0.5);
    out.n_e_int = line_peak * 0.25 * kappa_e * kappa_e / (kappa_e_ext_Hz * kappa_e_int_Hz);
    if (out.n_e_int < 0.0)
        throw UnphysicalError("microwave thermometry: negative inferred occupancy");
    out.n_mw = kappa_e_int_Hz * out.n_e_int / kappa_e;
    return out;
}

MechanicalOccupancyResult extract_mechanical_occupancy(const Spectrum& spectrum,
                                                       const ChainGains& chain,
                                                       const DerivedRates& rates,
                                                       double n_mw,
                                                       ThermometryRegime regime) {
    chain.validate();
    if (!(rates.Gamma_em_Hz > 0.0))
        throw UnphysicalError("mechanical thermometry: Gamma_em = 0, no readout channel");
    const double g = db_to_linear(chain.gain_a_dB);

    MechanicalOccupancyResult out;
    out.fit = lorentzian_fit(spectrum);
    const double gamma_tot = out.fit.fwhm_Hz;

    // Area of the mechanical line in unamplified quanta*Hz, then back to the
    // apparent heating rate.
    const double area = out.fit.area() / g;
    double heat_apparent = area * gamma_tot / (two_pi * rates.eta_e * rates.Gamma_em_Hz);
    if (regime == ThermometryRegime::on_resonance)
        heat_apparent -= (rates.Gamma_em_Hz - 2.0 * gamma_tot) * n_mw;
    if (heat_apparent < 0.0)
        throw UnphysicalError("mechanical thermometry: negative inferred heating rate");
    out.heating_rate_Hz = heat_apparent;
    out.n_m = (rates.Gamma_em_Hz * n_mw + heat_apparent) / gamma_tot;
    return out;
}

GainCalResult gain_cal_temperature_sweep(const std::vector<std::pair<double, double>>& data,
                                         double freq_hz, double f_if_Hz) {
    if (data.size() < 3)
        throw DeclarationError("gain calibration: need >= 3 temperature points");
    double t_min = data.front().first, t_max = data.front().first;
    for (const auto& [t, pw] : data) {
        if (!(t > 0.0)) throw DeclarationError("gain calibration: temperatures must be > 0");
        t_min = std::min(t_min, t);
        t_max = std::max(t_max, t);
    }
    if (!(t_max > t_min))
        throw DeclarationError("gain calibration: degenerate design, all temperatures equal");
    if (!(f_if_Hz > 0.0) || !(freq_hz > 0.0))
        throw DeclarationError("gain calibration: need positive frequency and bandwidth");

    const double quantum = f_if_Hz * h_planck * freq_hz; // f_IF * hbar * omega
    auto bose = [&](double t) {
        return 1.0 / std::expm1(h_planck * freq_hz / (k_boltzmann * t));
    };

    // The model P = quantum * g * (bose + n_amp) is linear in (g, g*n_amp);
    // solve that exactly, then polish in (G_dB, n_amp) coordinates.
    double s_bb = 0.0, s_b1 = 0.0, s_11 = 0.0, s_pb = 0.0, s_p1 = 0.0;
    for (const auto& [t, pw] : data) {
        const double x = quantum * bose(t);
        const double y = quantum;
        s_bb += x * x;
        s_b1 += x * y;
        s_11 += y * y;
        s_pb += pw * x;
        s_p1 += pw * y;
    }
    const double det = s_bb * s_11 - s_b1 * s_b1;
    if (!(std::abs(det) > 0.0))
        throw NumericError("gain calibration: singular design");
    const double u = (s_pb * s_11 - s_p1 * s_b1) / det; // g
    const double v = (s_bb * s_p1 - s_b1 * s_pb) / det; // g * n_amp
    if (!(u > 0.0)) throw NumericError("gain calibration: non-positive fitted gain");

    auto model = [&](const Eigen::VectorXd& p, Eigen::VectorXd& r, Eigen::MatrixXd& j) {
        const double g = db_to_linear(p(0));
        const double na = p(1);
        r.resize(static_cast<Eigen::Index>(data.size()));
        j.resize(static_cast<Eigen::Index>(data.size()), 2);
        const double dg_dp = g * std::log(10.0) / 10.0;
        for (std::size_t i = 0; i < data.size(); ++i) {
            const double nb = bose(data[i].first);
            r(static_cast<Eigen::Index>(i)) = quantum * g * (nb + na) - data[i].second;
            j(static_cast<Eigen::Index>(i), 0) = quantum * dg_dp * (nb + na);
            j(static_cast<Eigen::Index>(i), 1) = quantum * g;
        }
    };
    Eigen::VectorXd p0(2);
    p0 << 10.0 * std::log10(u), v / u;
    const Eigen::VectorXd p = gauss_newton(model, p0);

    GainCalResult res;
    res.gain_a_dB = p(0);
    res.n_amp = p(1);
    return res;
}

double sideband_asymmetry(const Spectrum& s_red, const Spectrum& s_blue) {
    s_red.validate();
    s_blue.validate();
    if (s_red.freq_hz != s_blue.freq_hz)
        throw DeclarationError("sideband asymmetry: spectra must share one grid");
    const double a_r = trapezoid(s_red.freq_hz, s_red.values);
    const double a_b = trapezoid(s_blue.freq_hz, s_blue.values);
    if (!(a_r > 0.0))
        throw UnphysicalError("sideband asymmetry: red-sideband area must be > 0");
    const double ratio = a_b / a_r;
    if (!(ratio > 1.0))
        throw UnphysicalError("sideband asymmetry: blue area must exceed red area");
    return 1.0 / (ratio - 1.0);
}

double gain_from_thermal_emission(const Spectrum& spectrum, const DerivedRates& rates,
                                  double n_mw, double n_m_reference,
                                  ThermometryRegime regime) {
    if (!(rates.Gamma_em_Hz > 0.0))
        throw UnphysicalError("gain referral: Gamma_em = 0, no readout channel");
    if (!(n_m_reference > 0.0))
        throw UnphysicalError("gain referral: reference occupancy must be > 0");
    const LorentzianFit fit = lorentzian_fit(spectrum);
    const double gamma_tot = fit.fwhm_Hz;
    const double eta_e = rates.eta_e;

    double heat = n_m_reference * gamma_tot - rates.Gamma_em_Hz * n_mw;
    if (regime == ThermometryRegime::on_resonance)
        heat += (rates.Gamma_em_Hz - 2.0 * gamma_tot) * n_mw;
    const double area_pred = two_pi * eta_e * rates.Gamma_em_Hz * heat / gamma_tot;
    if (!(area_pred > 0.0))
        throw UnphysicalError("gain referral: predicted emission is not positive");
    const double g = fit.area() / area_pred;
    if (!(g > 0.0)) throw NumericError("gain referral: non-positive gain estimate");
    return 10.0 * std::log10(g);
}

double optical_noise_referral(double p_o_noise_W, double p_oe_W, double p_e_W,
                              double f_if_Hz, double freq_o_Hz, double freq_e_Hz) {
    if (!(p_e_W > 0.0) || !(p_oe_W > 0.0))
        throw UnphysicalError("optical referral: zero coherent-transduction power");
    if (p_o_noise_W < 0.0)
        throw DeclarationError("optical referral: negative noise power");
    if (!(f_if_Hz > 0.0)) throw DeclarationError("optical referral: f_IF must be > 0");
    const double n_noise = p_o_noise_W / (f_if_Hz * h_planck * freq_o_Hz);
    const double eta_tot =
        (p_oe_W / (f_if_Hz * h_planck * freq_o_Hz)) / (p_e_W / (f_if_Hz * h_planck * freq_e_Hz));
    return n_noise / eta_tot;
}

Spectrum add_relative_noise(const Spectrum& s, double sigma_rel, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Spectrum out = s;
    for (double& v : out.values) v *= 1.0 + sigma_rel * gauss(rng);
    return out;
}

std::pair<Spectrum, Spectrum> synth_sideband_pair(double n_m, double center_hz,
                                                  double fwhm_hz, double flux_scale,
                                                  const std::vector<double>& freq_hz) {
    if (!(n_m > 0.0)) throw DeclarationError("sideband pair: n_m must be > 0");
    Spectrum red, blue;
    red.freq_hz = blue.freq_hz = freq_hz;
    red.kind = blue.kind = SpectrumKind::flux_psd;
    red.values.resize(freq_hz.size());
    blue.values.resize(freq_hz.size());
    for (std::size_t i = 0; i < freq_hz.size(); ++i) {
        const double shape = 0.25 * fwhm_hz * fwhm_hz * lorentzian(freq_hz[i], center_hz, fwhm_hz);
        red.values[i] = flux_scale * n_m * shape;
        blue.values[i] = flux_scale * (n_m + 1.0) * shape;
    }
    return {red, blue};
}

std::vector<std::pair<double, double>> synth_gaincal_data(double gain_a_dB, double n_amp,
                                                          double freq_hz, double f_if_Hz,
                                                          const std::vector<double>& temps_K) {
    std::vector<std::pair<double, double>> data;
    data.reserve(temps_K.size());
    const double g = db_to_linear(gain_a_dB);
    for (double t : temps_K) {
        const double nb = 1.0 / std::expm1(h_planck * freq_hz / (k_boltzmann * t));
        data.emplace_back(t, f_if_Hz * h_planck * freq_hz * g * (nb + n_amp));
    }
    return data;
}

} // namespace txlab
