#pragma once

#include <random>

#include "txlab/device.hpp"

namespace txlab::testing {

// Reference transducer used across the suite (microwave/mechanics at
// 5.0745 GHz, 1550 nm optics, silicon nanobeam scale rates).
inline DeviceParams make_device() {
    DeviceParams d;
    d.omega_e_Hz = 5.0745e9;
    d.kappa_e_ext_Hz = 1.33e6;
    d.kappa_e_int_Hz = 0.33e6;
    d.omega_o_Hz = 192.9263e12;
    d.kappa_o_ext_Hz = 1.35e9;
    d.kappa_o_int_Hz = 404e6;
    d.omega_m_Hz = 5.0745e9;
    d.Gamma_i_sat_Hz = 892.0;
    d.g_em_Hz_per_V = 3.81e3;
    d.g_om_Hz = 343e3;
    d.eta_f = 0.35;
    return d;
}

// On-resonance operating point (microwave tuned to the mechanics, pump on the
// red sideband) with a cold hot-bath unless configured otherwise.
inline OperatingPoint make_op(double v_dc, double n_c) {
    OperatingPoint op;
    op.v_dc_V = v_dc;
    op.n_c = n_c;
    op.delta_o_Hz = 5.0745e9;        // = omega_m
    op.omega_e_tuned_Hz = 5.0745e9;  // = omega_m
    return op;
}

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline double uniform(std::mt19937_64& g, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(g);
}

} // namespace txlab::testing
