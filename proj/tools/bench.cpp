// Benchmark: serial vs OpenMP-parallel frequency-grid kernels on the
// three-mode transducer network, verifying bit-identical results.
#include <chrono>
#include <cstdio>
#include <cstring>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "txlab/device.hpp"
#include "txlab/network.hpp"
#include "txlab/sweep.hpp"

using namespace txlab;

namespace {

DeviceParams bench_device() {
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

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

int main(int argc, char** argv) {
    std::size_t n_freq = 20000;
    std::size_t n_rows = 4096;
    if (argc > 1) n_freq = std::strtoull(argv[1], nullptr, 10);
    if (argc > 2) n_rows = std::strtoull(argv[2], nullptr, 10);

#ifdef _OPENMP
    const int threads = omp_get_max_threads();
#else
    const int threads = 1;
#endif
    std::printf("threads: %d, grid points: %zu, sweep rows: %zu\n", threads, n_freq, n_rows);

    const auto dev = bench_device();
    OperatingPoint op;
    op.v_dc_V = 50.0;
    op.n_c = 232.0;
    op.delta_o_Hz = dev.omega_m_Hz;
    op.omega_e_tuned_Hz = dev.omega_m_Hz;
    op.n_e_int = 0.12;
    op.n_f = 0.3;
    op.hot_bath = HotBathModel::constant(446.0, 40.0);
    const auto as = assemble(dev, op);
    const auto grid = linear_grid(dev.omega_m_Hz, 5.0 * as.rates.Gamma_tot_Hz, n_freq);

    // Warm up the thread pool so the timed regions do not pay its startup.
    (void)transfer_matrix_sweep(as.system, linear_grid(dev.omega_m_Hz, 1e6, 256));

    // Transfer-matrix sweep.
    auto t0 = std::chrono::steady_clock::now();
    const auto serial = transfer_matrix_sweep_serial(as.system, grid);
    const double t_serial = seconds_since(t0);
    t0 = std::chrono::steady_clock::now();
    const auto parallel = transfer_matrix_sweep(as.system, grid);
    const double t_parallel = seconds_since(t0);
    bool identical = serial.size() == parallel.size();
    for (std::size_t i = 0; identical && i < serial.size(); ++i)
        identical = std::memcmp(serial[i].data(), parallel[i].data(),
                                sizeof(std::complex<double>) * serial[i].size()) == 0;
    std::printf("transfer_matrix_sweep   serial %8.3f ms  parallel %8.3f ms  speedup %5.2fx  identical %s\n",
                1e3 * t_serial, 1e3 * t_parallel, t_serial / t_parallel,
                identical ? "yes" : "NO");

    // Output-noise PSD sweep.
    const auto occ = as.system.default_occupancies();
    t0 = std::chrono::steady_clock::now();
    const auto psd_s = output_flux_psd_serial(as.system, occ, "o_ext", grid);
    const double t_psd_s = seconds_since(t0);
    t0 = std::chrono::steady_clock::now();
    const auto psd_p = output_flux_psd(as.system, occ, "o_ext", grid);
    const double t_psd_p = seconds_since(t0);
    std::printf("output_flux_psd         serial %8.3f ms  parallel %8.3f ms  speedup %5.2fx  identical %s\n",
                1e3 * t_psd_s, 1e3 * t_psd_p, t_psd_s / t_psd_p,
                psd_s.values == psd_p.values ? "yes" : "NO");

    // Metrics sweep over a voltage x photon-number grid.
    SweepConfig cfg;
    cfg.device = dev;
    cfg.base = op;
    std::vector<double> vs(64), ns(n_rows / 64);
    for (std::size_t i = 0; i < vs.size(); ++i) vs[i] = 50.0 * double(i) / double(vs.size());
    for (std::size_t i = 0; i < ns.size(); ++i) ns[i] = 1.0 + double(i);
    cfg.axes = {{AxisPath::v_dc, vs}, {AxisPath::n_c, ns}};
    t0 = std::chrono::steady_clock::now();
    const auto table_s = run_sweep_serial(cfg);
    const double t_sw_s = seconds_since(t0);
    t0 = std::chrono::steady_clock::now();
    const auto table_p = run_sweep(cfg);
    const double t_sw_p = seconds_since(t0);
    std::printf("run_sweep               serial %8.3f ms  parallel %8.3f ms  speedup %5.2fx  identical %s\n",
                1e3 * t_sw_s, 1e3 * t_sw_p, t_sw_s / t_sw_p,
                table_s.to_csv() == table_p.to_csv() ? "yes" : "NO");

    return identical && psd_s.values == psd_p.values &&
                   table_s.to_csv() == table_p.to_csv()
               ? 0
               : 1;
}
