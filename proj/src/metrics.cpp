#include "txlab/metrics.hpp"

#include <cmath>
#include <limits>

namespace txlab {

namespace {
using cplx = std::complex<double>;
constexpr cplx I{0.0, 1.0};
} // namespace

std::complex<double> s_oe_analytic(const DerivedRates& r, double freq_hz, double omega_m_Hz) {
    const double num = std::sqrt(r.eta_e * r.eta_o * r.Gamma_em_Hz * r.Gamma_om_Hz);
    return -num / (I * (omega_m_Hz - freq_hz) + 0.5 * r.Gamma_tot_Hz);
}

std::complex<double> s_oe_exact(const DeviceParams& dev, const DerivedRates& r,
                                double omega_e_Hz, double delta_o_Hz, double freq_hz) {
    const double kappa_e = dev.kappa_e_Hz();
    const double kappa_o = dev.kappa_o_Hz();
    const cplx chi_e = 1.0 / (I * (omega_e_Hz - freq_hz) + 0.5 * kappa_e);
    const cplx chi_o = 1.0 / (I * (delta_o_Hz - freq_hz) + 0.5 * kappa_o);
    const cplx chi_m_inv = I * (dev.omega_m_Hz - freq_hz) + 0.5 * r.Gamma_i_Hz;
    const double num =
        std::sqrt(r.eta_e * r.eta_o * kappa_e * kappa_o) * r.G_em_Hz * r.G_om_Hz;
    return -num * chi_e * chi_o /
           (r.G_em_Hz * r.G_em_Hz * chi_e + r.G_om_Hz * r.G_om_Hz * chi_o + chi_m_inv);
}

double eta_ext(const DerivedRates& r) {
    return r.eta_e * r.eta_o * 4.0 * r.Gamma_em_Hz * r.Gamma_om_Hz /
           (r.Gamma_tot_Hz * r.Gamma_tot_Hz);
}

double eta_int(const DerivedRates& r) {
    return 4.0 * r.Gamma_em_Hz * r.Gamma_om_Hz / (r.Gamma_tot_Hz * r.Gamma_tot_Hz);
}

double eta_ext_at(const DerivedRates& r, double freq_hz, double omega_m_Hz) {
    return std::norm(s_oe_analytic(r, freq_hz, omega_m_Hz));
}

double bandwidth_Hz(const DerivedRates& r) { return r.Gamma_tot_Hz; }

Occupancies occupancies(const DerivedRates& r, const ThermalBaths& b,
                        OccupancyVariant variant) {
    Occupancies o;
    o.n_mw = b.kappa_e_int_Hz * b.n_e_int / b.kappa_e_Hz;
    const double heat = b.Gamma_f_Hz * b.n_f + b.Gamma_p_Hz * b.n_p;
    const double back_channel =
        variant == OccupancyVariant::full ? r.Gamma_em_Hz * o.n_mw : 0.0;
    o.n_m = (back_channel + heat) / r.Gamma_tot_Hz;
    return o;
}

double added_noise_bath_form(const DerivedRates& r, const ThermalBaths& b) {
    if (!(r.Gamma_em_Hz > 0.0))
        throw UnphysicalError("added noise undefined: Gamma_em = 0 (no input channel)");
    return b.kappa_e_int_Hz / b.kappa_e_ext_Hz() * b.n_e_int +
           (b.Gamma_f_Hz * b.n_f + b.Gamma_p_Hz * b.n_p) / (r.eta_e * r.Gamma_em_Hz);
}

double added_noise_from_n_m(const DerivedRates& r, double n_m) {
    if (!(r.Gamma_em_Hz > 0.0))
        throw UnphysicalError("added noise undefined: Gamma_em = 0 (no input channel)");
    return n_m * r.Gamma_tot_Hz / (r.eta_e * r.Gamma_em_Hz);
}

double added_noise_optical_route(double n_o_out, double eta_ext_value) {
    if (!(eta_ext_value > 0.0))
        throw UnphysicalError("added noise undefined: eta_ext = 0");
    return n_o_out / eta_ext_value;
}

double optical_output_noise(const DerivedRates& r, const ThermalBaths& b, double freq_hz,
                            double omega_m_Hz) {
    const double d = omega_m_Hz - freq_hz;
    const double lorentz = 1.0 / (d * d + 0.25 * r.Gamma_tot_Hz * r.Gamma_tot_Hz);
    const double mw_term = r.eta_e * r.eta_o * r.Gamma_em_Hz * r.Gamma_om_Hz *
                           (b.kappa_e_int_Hz / b.kappa_e_ext_Hz()) * b.n_e_int;
    const double mech_term =
        r.eta_o * r.Gamma_om_Hz * (b.Gamma_f_Hz * b.n_f + b.Gamma_p_Hz * b.n_p);
    return (mw_term + mech_term) * lorentz;
}

double throughput_Hz(double eta_ext_value, double bandwidth_hz, double duty_cycle) {
    if (!(duty_cycle > 0.0) || duty_cycle > 1.0)
        throw DeclarationError("throughput: duty cycle must lie in (0, 1]");
    return eta_ext_value * bandwidth_hz * duty_cycle;
}

MetricsReport metrics_report(const DeviceParams& dev, const OperatingPoint& op) {
    MetricsReport m;
    m.rates = derive_rates(dev, op);
    const ThermalBaths baths = derive_baths(dev, op);
    m.eta_ext = eta_ext(m.rates);
    m.eta_int = eta_int(m.rates);
    m.bandwidth_Hz = bandwidth_Hz(m.rates);
    const Occupancies occ = occupancies(m.rates, baths);
    m.n_mw = occ.n_mw;
    m.n_m = occ.n_m;
    m.n_add = m.rates.Gamma_em_Hz > 0.0 ? added_noise_from_n_m(m.rates, occ.n_m)
                                        : std::numeric_limits<double>::quiet_NaN();
    m.throughput_Hz = throughput_Hz(m.eta_ext, m.bandwidth_Hz, op.duty.d);
    return m;
}

} // namespace txlab
