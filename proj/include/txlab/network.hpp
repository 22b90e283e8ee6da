#pragma once

#include <complex>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "txlab/spectrum.hpp"

namespace txlab {

// A bosonic mode of the network. `frequency_hz` is the rotating-frame
// frequency that enters the diagonal of the dynamics matrix: the lab
// frequency for microwave/mechanical modes, the pump detuning for an
// optical mode driven in a rotating frame.
struct ModeDecl {
    std::string label;
    double frequency_hz = 0.0;
};

// A thermal bath attached to one mode. Every bath is a noise input of the
// network; baths with `is_port` additionally appear as scattering outputs.
struct BathDecl {
    std::string label;
    std::string attached_mode;
    double rate_hz = 0.0;   // kappa_ext, kappa_int, Gamma_f, Gamma_p, ...
    double occupancy = 0.0; // thermal occupancy, photons
    bool is_port = false;
};

// Beam-splitter (excitation-conserving) coupling between two modes.
struct CouplingDecl {
    std::string mode_a;
    std::string mode_b;
    double rate_hz = 0.0;
};

// Compiled state-space model
//
//   da/dt  = A a + B a_in
//   a_out  = C a + D a_in
//
// in the doubled basis [a_1..a_M, a_1^dag..a_M^dag]. Inputs are all baths in
// declaration order followed by their daggered copies; outputs are the
// is_port baths in declaration order followed by their daggered copies.
// Matrix entries are angular rates (rad/s); every public interface of this
// module speaks ordinary frequency (Hz).
struct LinearSystem {
    Eigen::MatrixXcd A; // 2M x 2M
    Eigen::MatrixXcd B; // 2M x 2K
    Eigen::MatrixXcd C; // 2P x 2M
    Eigen::MatrixXcd D; // 2P x 2K

    std::vector<std::string> mode_labels;   // M
    std::vector<std::string> input_labels;  // K (bath order)
    std::vector<std::string> output_labels; // P (port order)

    // Default bath occupancies captured from the declarations, in input order.
    std::vector<double> input_occupancies;

    double max_re_eig = 0.0; // largest real part over eigenvalues of A

    int n_modes() const { return static_cast<int>(mode_labels.size()); }
    int n_inputs() const { return static_cast<int>(input_labels.size()); }
    int n_outputs() const { return static_cast<int>(output_labels.size()); }
    bool stable() const { return max_re_eig < 0.0; }

    int mode_index(const std::string& label) const;
    int input_index(const std::string& label) const;
    int output_index(const std::string& label) const;

    // Occupancy vector (input order) from a label->occupancy map. Missing
    // baths default to 0; unknown labels are rejected.
    std::vector<double> occupancy_vector(const std::map<std::string, double>& occ) const;
    std::map<std::string, double> default_occupancies() const;
};

// Compile declarations into the state-space model. Rejects unknown/duplicate
// labels and negative rates, identifying the offending declaration.
LinearSystem build_system(const std::vector<ModeDecl>& modes,
                          const std::vector<CouplingDecl>& couplings,
                          const std::vector<BathDecl>& baths);

// Scattering matrix xi(omega) = C (-i*omega*I - A)^-1 B + D at one frequency,
// evaluated by a dense partial-pivot LU solve. Requires a stable system.
Eigen::MatrixXcd transfer_matrix(const LinearSystem& sys, double freq_hz);

// Grid evaluation of the transfer matrix. The parallel version partitions the
// grid across OpenMP threads; results are assembled in grid order and are
// bitwise identical to the serial version.
std::vector<Eigen::MatrixXcd> transfer_matrix_sweep(const LinearSystem& sys,
                                                    std::span<const double> freq_hz);
std::vector<Eigen::MatrixXcd> transfer_matrix_sweep_serial(const LinearSystem& sys,
                                                           std::span<const double> freq_hz);

// Normal-ordered photon flux spectral density at a named output port:
// sum_k |xi_{port,k}(omega)|^2 n_k over the annihilation-sector noise inputs.
Spectrum output_flux_psd(const LinearSystem& sys,
                         const std::map<std::string, double>& bath_occupancies,
                         const std::string& port, const std::vector<double>& freq_hz);
Spectrum output_flux_psd_serial(const LinearSystem& sys,
                                const std::map<std::string, double>& bath_occupancies,
                                const std::string& port,
                                const std::vector<double>& freq_hz);

struct OccupancyQuadratureOptions {
    double window_linewidths = 50.0; // +/- W * (hybridized mode linewidth)
    double rel_tol = 1e-7;           // Richardson acceptance per panel
    int max_depth = 36;              // panel bisection depth cap
};

struct OccupancyResult {
    double occupancy = 0.0;     // includes the power-law tail correction
    double tail_estimate = 0.0; // contribution added for the out-of-window tails
};

// Steady-state <a^dag a> of one mode by adaptive-trapezoid quadrature of its
// internal noise spectrum, with a 1/delta^2 tail correction at the window
// edges. Serves as the brute-force cross-check for closed-form occupancies.
OccupancyResult mode_occupancy_numeric(const LinearSystem& sys,
                                       const std::map<std::string, double>& bath_occupancies,
                                       const std::string& mode,
                                       const OccupancyQuadratureOptions& opts = {});

// max |xi xi^dag - I| over the annihilation block at one frequency. Equals 0
// (to solver precision) when every bath is declared a port; with baths left
// out it reports the absorbed fraction.
double check_passivity(const LinearSystem& sys, double freq_hz);

} // namespace txlab
