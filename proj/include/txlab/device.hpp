#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "txlab/network.hpp"

namespace txlab {

// Fixed hardware parameters of an electro-optomechanical transducer.
// All frequencies/rates in Hz (the /2pi values).
struct DeviceParams {
    double omega_e_Hz = 0.0;       // microwave resonator frequency
    double kappa_e_ext_Hz = 0.0;   // microwave extrinsic linewidth
    double kappa_e_int_Hz = 0.0;   // microwave intrinsic linewidth
    double omega_o_Hz = 0.0;       // optical resonator frequency
    double kappa_o_ext_Hz = 0.0;   // optical extrinsic linewidth
    double kappa_o_int_Hz = 0.0;   // optical intrinsic linewidth
    double omega_m_Hz = 0.0;       // mechanical resonator frequency
    double Gamma_i_sat_Hz = 0.0;   // saturated mechanical intrinsic linewidth
    double g_em_Hz_per_V = 0.0;    // electromechanical coupling per volt
    double g_om_Hz = 0.0;          // optomechanical single-photon coupling
    double eta_f = 1.0;            // fiber-waveguide power coupling efficiency

    double kappa_e_Hz() const { return kappa_e_ext_Hz + kappa_e_int_Hz; }
    double kappa_o_Hz() const { return kappa_o_ext_Hz + kappa_o_int_Hz; }
    double eta_e() const { return kappa_e_ext_Hz / kappa_e_Hz(); }
    double eta_o() const { return kappa_o_ext_Hz / kappa_o_Hz(); }
    double q_m() const { return omega_m_Hz / Gamma_i_sat_Hz; }

    void validate() const;
};

// Laser-power-dependent mechanical hot bath: Gamma_p(n_c), n_p(n_c).
struct HotBathModel {
    enum class Kind { constant, power_law, table };
    Kind kind = Kind::constant;

    // constant: Gamma_p = Gamma_p0, n_p = n_p0
    // power_law: Gamma_p = Gamma_p0 * n_c^alpha, n_p = n_p0 * n_c^beta
    double Gamma_p0_Hz = 0.0;
    double n_p0 = 0.0;
    double alpha = 0.0;
    double beta = 0.0;

    // table: monotone n_c grid, linear interpolation, no extrapolation
    std::vector<double> table_n_c;
    std::vector<double> table_Gamma_p_Hz;
    std::vector<double> table_n_p;

    struct Evaluation {
        double Gamma_p_Hz;
        double n_p;
    };
    Evaluation evaluate(double n_c) const;

    static HotBathModel constant(double Gamma_p_Hz, double n_p);
    static HotBathModel power_law(double Gamma_p0_Hz, double n_p0, double alpha, double beta);
};

// Duty cycle D in (0,1], optionally derived from a pulse duration and
// repetition rate; if all three are given they must agree.
struct DutyCycle {
    double d = 1.0;
    std::optional<double> t_d_s;
    std::optional<double> r_p_Hz;

    void validate() const;
    static DutyCycle continuous() { return {}; }
    static DutyCycle pulsed(double t_d_s, double r_p_Hz);
};

// Tunable knobs of one experiment.
struct OperatingPoint {
    double v_dc_V = 0.0;
    std::optional<double> n_c;      // intracavity photons, or
    std::optional<double> p_in_W;   // pump power at the optical waveguide
    std::optional<double> delta_o_Hz;        // pump detuning; default omega_m
    std::optional<double> omega_e_tuned_Hz;  // flux-tuned; default omega_e
    double n_f = 0.0;     // fridge bath occupancy
    double n_e_int = 0.0; // microwave intrinsic bath occupancy
    HotBathModel hot_bath;
    DutyCycle duty;

    void validate() const;
};

// Coupling/decay rates and port efficiencies derived from a device and an
// operating point. All rates in Hz.
struct DerivedRates {
    double G_em_Hz = 0.0;
    double G_om_Hz = 0.0;
    double Gamma_em_Hz = 0.0;
    double Gamma_om_Hz = 0.0;
    double Gamma_i_Hz = 0.0;
    double Gamma_tot_Hz = 0.0;
    double eta_e = 0.0;
    double eta_o = 0.0;
};

// Bath rates and occupancies entering the closed-form occupancy and noise
// expressions.
struct ThermalBaths {
    double n_e_int = 0.0;
    double n_f = 0.0;
    double n_p = 0.0;
    double Gamma_f_Hz = 0.0;
    double Gamma_p_Hz = 0.0;
    double kappa_e_int_Hz = 0.0;
    double kappa_e_Hz = 0.0;

    double kappa_e_ext_Hz() const { return kappa_e_Hz - kappa_e_int_Hz; }
};

// Pump-enhanced coupling rates G_em = g_em * V_DC, G_om = g_om * sqrt(n_c).
std::pair<double, double> coupling_rates(const DeviceParams& dev, const OperatingPoint& op);

// Resonator-mediated mechanical damping Gamma = G^2 kappa / (Delta^2 + (kappa/2)^2).
double mediated_damping(double g_Hz, double kappa_Hz, double delta_Hz);

// Steady-state intracavity photon number of the driven optical cavity.
double intracavity_photons(const DeviceParams& dev, double p_in_W, double delta_l_Hz);

// Resolve n_c from the operating point (direct value or pump power).
double resolve_n_c(const DeviceParams& dev, const OperatingPoint& op);

struct AssembledSystem {
    LinearSystem system;
    DerivedRates rates;
    ThermalBaths baths;
};

// Build the three-mode/six-bath network for one operating point. Bath labels:
// e_ext, e_int (microwave), o_ext, o_int (optical), f (fridge), p (hot bath);
// e_ext and o_ext are ports. Mode labels: e, o, m.
AssembledSystem assemble(const DeviceParams& dev, const OperatingPoint& op);

// Rates/baths only, without compiling the network (cheap path for sweeps).
DerivedRates derive_rates(const DeviceParams& dev, const OperatingPoint& op);
ThermalBaths derive_baths(const DeviceParams& dev, const OperatingPoint& op);

} // namespace txlab
