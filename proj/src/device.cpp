#include "txlab/device.hpp"

#include <cmath>
#include <string>

#include "txlab/constants.hpp"

namespace txlab {

using constants::h_planck;
using constants::two_pi;

void DeviceParams::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw DeclarationError(std::string("device: ") + name + " must be > 0");
    };
    positive(omega_e_Hz, "omega_e_Hz");
    positive(kappa_e_ext_Hz, "kappa_e_ext_Hz");
    positive(kappa_e_int_Hz, "kappa_e_int_Hz");
    positive(omega_o_Hz, "omega_o_Hz");
    positive(kappa_o_ext_Hz, "kappa_o_ext_Hz");
    positive(kappa_o_int_Hz, "kappa_o_int_Hz");
    positive(omega_m_Hz, "omega_m_Hz");
    positive(Gamma_i_sat_Hz, "Gamma_i_sat_Hz");
    positive(g_em_Hz_per_V, "g_em_Hz_per_V");
    positive(g_om_Hz, "g_om_Hz");
    if (!(eta_f > 0.0) || eta_f > 1.0)
        throw DeclarationError("device: eta_f must lie in (0, 1]");
}

HotBathModel HotBathModel::constant(double Gamma_p_Hz, double n_p) {
    HotBathModel m;
    m.kind = Kind::constant;
    m.Gamma_p0_Hz = Gamma_p_Hz;
    m.n_p0 = n_p;
    return m;
}

HotBathModel HotBathModel::power_law(double Gamma_p0_Hz, double n_p0, double alpha,
                                     double beta) {
    HotBathModel m;
    m.kind = Kind::power_law;
    m.Gamma_p0_Hz = Gamma_p0_Hz;
    m.n_p0 = n_p0;
    m.alpha = alpha;
    m.beta = beta;
    return m;
}

HotBathModel::Evaluation HotBathModel::evaluate(double n_c) const {
    if (n_c < 0.0 || !std::isfinite(n_c))
        throw DeclarationError("hot bath: invalid n_c");
    switch (kind) {
    case Kind::constant:
        return {Gamma_p0_Hz, n_p0};
    case Kind::power_law: {
        const double g = Gamma_p0_Hz * std::pow(n_c, alpha);
        const double n = n_p0 * std::pow(n_c, beta);
        if (!std::isfinite(g) || !std::isfinite(n) || g < 0.0 || n < 0.0)
            throw DeclarationError("hot bath: power law evaluates to an invalid value");
        return {g, n};
    }
    case Kind::table: {
        const auto& xs = table_n_c;
        if (xs.size() < 2 || table_Gamma_p_Hz.size() != xs.size() ||
            table_n_p.size() != xs.size())
            throw DeclarationError("hot bath: table needs >= 2 aligned samples");
        for (std::size_t i = 1; i < xs.size(); ++i)
            if (!(xs[i] > xs[i - 1]))
                throw DeclarationError("hot bath: table n_c grid not strictly increasing");
        if (n_c < xs.front() || n_c > xs.back())
            throw DeclarationError("hot bath: n_c = " + std::to_string(n_c) +
                                   " outside table range [" + std::to_string(xs.front()) +
                                   ", " + std::to_string(xs.back()) + "]");
        std::size_t hi = 1;
        while (hi + 1 < xs.size() && xs[hi] < n_c) ++hi;
        const double t = (n_c - xs[hi - 1]) / (xs[hi] - xs[hi - 1]);
        const double g =
            table_Gamma_p_Hz[hi - 1] + t * (table_Gamma_p_Hz[hi] - table_Gamma_p_Hz[hi - 1]);
        const double n = table_n_p[hi - 1] + t * (table_n_p[hi] - table_n_p[hi - 1]);
        return {g, n};
    }
    }
    throw DeclarationError("hot bath: unknown kind");
}

DutyCycle DutyCycle::pulsed(double t_d_s, double r_p_Hz) {
    DutyCycle d;
    d.t_d_s = t_d_s;
    d.r_p_Hz = r_p_Hz;
    d.d = t_d_s * r_p_Hz;
    d.validate();
    return d;
}

void DutyCycle::validate() const {
    if (!(d > 0.0) || d > 1.0)
        throw DeclarationError("duty cycle must lie in (0, 1]");
    if (t_d_s.has_value() != r_p_Hz.has_value())
        throw DeclarationError("duty cycle: pulse duration and repetition rate come as a pair");
    if (t_d_s) {
        if (!(*t_d_s > 0.0) || !(*r_p_Hz > 0.0))
            throw DeclarationError("duty cycle: pulse duration and repetition rate must be > 0");
        if (std::abs(d - *t_d_s * *r_p_Hz) >= 1e-12 * d)
            throw DeclarationError("duty cycle: D does not equal T_d * R_p");
    }
}

void OperatingPoint::validate() const {
    if (v_dc_V < 0.0 || !std::isfinite(v_dc_V))
        throw DeclarationError("operating point: V_DC must be >= 0");
    if (n_c.has_value() == p_in_W.has_value())
        throw DeclarationError("operating point: specify exactly one of n_c or p_in_W");
    if (n_c && (*n_c < 0.0 || !std::isfinite(*n_c)))
        throw DeclarationError("operating point: n_c must be >= 0");
    if (p_in_W && (*p_in_W < 0.0 || !std::isfinite(*p_in_W)))
        throw DeclarationError("operating point: p_in_W must be >= 0");
    if (n_f < 0.0 || n_e_int < 0.0)
        throw DeclarationError("operating point: bath occupancies must be >= 0");
    duty.validate();
}

std::pair<double, double> coupling_rates(const DeviceParams& dev, const OperatingPoint& op) {
    const double n_c = resolve_n_c(dev, op);
    return {dev.g_em_Hz_per_V * op.v_dc_V, dev.g_om_Hz * std::sqrt(n_c)};
}

double mediated_damping(double g_Hz, double kappa_Hz, double delta_Hz) {
    if (!(kappa_Hz > 0.0)) throw DeclarationError("mediated_damping: kappa must be > 0");
    const double half = 0.5 * kappa_Hz;
    return g_Hz * g_Hz * kappa_Hz / (delta_Hz * delta_Hz + half * half);
}

double intracavity_photons(const DeviceParams& dev, double p_in_W, double delta_l_Hz) {
    if (p_in_W < 0.0) throw DeclarationError("intracavity_photons: power must be >= 0");
    const double f_laser = dev.omega_o_Hz - delta_l_Hz;
    const double photon_flux = p_in_W / (h_planck * f_laser);
    const double half = 0.5 * dev.kappa_o_Hz();
    return photon_flux * dev.kappa_o_ext_Hz /
           (two_pi * (delta_l_Hz * delta_l_Hz + half * half));
}

double resolve_n_c(const DeviceParams& dev, const OperatingPoint& op) {
    op.validate();
    if (op.n_c) return *op.n_c;
    const double delta = op.delta_o_Hz.value_or(dev.omega_m_Hz);
    return intracavity_photons(dev, *op.p_in_W, delta);
}

DerivedRates derive_rates(const DeviceParams& dev, const OperatingPoint& op) {
    dev.validate();
    const auto [g_em, g_om] = coupling_rates(dev, op);
    const double n_c = resolve_n_c(dev, op);
    const auto hot = op.hot_bath.evaluate(n_c);

    const double omega_e = op.omega_e_tuned_Hz.value_or(dev.omega_e_Hz);
    const double delta_o = op.delta_o_Hz.value_or(dev.omega_m_Hz);

    DerivedRates r;
    r.G_em_Hz = g_em;
    r.G_om_Hz = g_om;
    r.Gamma_em_Hz = mediated_damping(g_em, dev.kappa_e_Hz(), omega_e - dev.omega_m_Hz);
    r.Gamma_om_Hz = mediated_damping(g_om, dev.kappa_o_Hz(), delta_o - dev.omega_m_Hz);
    r.Gamma_i_Hz = dev.Gamma_i_sat_Hz + hot.Gamma_p_Hz;
    r.Gamma_tot_Hz = r.Gamma_i_Hz + r.Gamma_em_Hz + r.Gamma_om_Hz;
    r.eta_e = dev.eta_e();
    r.eta_o = dev.eta_o();
    return r;
}

ThermalBaths derive_baths(const DeviceParams& dev, const OperatingPoint& op) {
    const double n_c = resolve_n_c(dev, op);
    const auto hot = op.hot_bath.evaluate(n_c);
    ThermalBaths b;
    b.n_e_int = op.n_e_int;
    b.n_f = op.n_f;
    b.n_p = hot.n_p;
    b.Gamma_f_Hz = dev.Gamma_i_sat_Hz;
    b.Gamma_p_Hz = hot.Gamma_p_Hz;
    b.kappa_e_int_Hz = dev.kappa_e_int_Hz;
    b.kappa_e_Hz = dev.kappa_e_Hz();
    return b;
}

AssembledSystem assemble(const DeviceParams& dev, const OperatingPoint& op) {
    dev.validate();
    const auto [g_em, g_om] = coupling_rates(dev, op);
    const ThermalBaths baths = derive_baths(dev, op);

    const double omega_e = op.omega_e_tuned_Hz.value_or(dev.omega_e_Hz);
    const double delta_o = op.delta_o_Hz.value_or(dev.omega_m_Hz);

    const std::vector<ModeDecl> modes = {
        {"e", omega_e},
        {"o", delta_o},
        {"m", dev.omega_m_Hz},
    };
    const std::vector<CouplingDecl> couplings = {
        {"e", "m", g_em},
        {"o", "m", g_om},
    };
    // Waveguide and optical baths are taken cold; thermal content lives in
    // e_int, f and the laser-power-dependent hot bath.
    const std::vector<BathDecl> baths_decl = {
        {"e_ext", "e", dev.kappa_e_ext_Hz, 0.0, true},
        {"e_int", "e", dev.kappa_e_int_Hz, op.n_e_int, false},
        {"o_ext", "o", dev.kappa_o_ext_Hz, 0.0, true},
        {"o_int", "o", dev.kappa_o_int_Hz, 0.0, false},
        {"f", "m", baths.Gamma_f_Hz, op.n_f, false},
        {"p", "m", baths.Gamma_p_Hz, baths.n_p, false},
    };

    AssembledSystem out;
    out.system = build_system(modes, couplings, baths_decl);
    out.rates = derive_rates(dev, op);
    out.baths = baths;
    return out;
}

} // namespace txlab
