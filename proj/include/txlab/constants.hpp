#pragma once

// Physical constants used throughout the project. SI defining constants
// (2019 redefinition); hbar is derived from h at full double precision.
namespace txlab::constants {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

// Planck constant, J*s (exact by definition)
inline constexpr double h_planck = 6.62607015e-34;

// Reduced Planck constant, J*s
inline constexpr double hbar = h_planck / two_pi;

// Boltzmann constant, J/K (exact by definition)
inline constexpr double k_boltzmann = 1.380649e-23;

} // namespace txlab::constants
