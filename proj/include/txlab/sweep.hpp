#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "txlab/device.hpp"
#include "txlab/lab.hpp"
#include "txlab/metrics.hpp"
#include "txlab/table.hpp"

namespace txlab {

// Sweepable parameter paths.
enum class AxisPath { v_dc, n_c, delta_o, omega_e_tuned, omega };

AxisPath parse_axis_path(const std::string& name);
std::string axis_column_name(AxisPath path);

struct SweepAxis {
    AxisPath path;
    std::vector<double> grid;
};

struct SweepConfig {
    DeviceParams device;
    OperatingPoint base;
    std::vector<SweepAxis> axes;
    std::vector<std::string> outputs; // empty = all metric columns
    ChainGains chain;
    std::uint64_t seed = 0;
};

// Cartesian-product evaluation over the axes, one row per grid point in
// row-major order over the declared axes. Rows echo the axis values and the
// derived rates, then the requested metrics. `workers` caps the OpenMP team
// (0 = runtime default); the result is identical for any worker count.
Table run_sweep(const SweepConfig& config, int workers = 0);
Table run_sweep_serial(const SweepConfig& config);

// One entry of the transducer comparison table. A row is recomputed from its
// ingredients when they are present: either efficiency x bandwidth x duty, or
// a per-pulse efficiency x repetition rate.
struct ComparisonRow {
    std::string label;
    double n_add = 0.0;
    double throughput_Hz = 0.0;
    double duty_cycle = 1.0;
    std::string source_note;

    std::optional<double> eta_ext;
    std::optional<double> bandwidth_Hz;
    std::optional<double> pulse_efficiency;
    std::optional<double> rep_rate_Hz;
};

struct ComparisonEntry {
    ComparisonRow row;
    double recomputed_Hz = 0.0; // NaN when not derivable
    double mismatch = 0.0;      // |recomputed - stored| / stored, NaN if not derivable
    bool flagged = false;       // mismatch > 10%
};

struct ComparisonReport {
    std::vector<ComparisonEntry> entries;
    std::string to_text() const;
    std::string to_csv() const;
    std::string to_json() const;
};

ComparisonReport comparison_report(const std::vector<ComparisonRow>& rows);

// The built-in literature comparison set.
std::vector<ComparisonRow> builtin_comparison_rows();

} // namespace txlab
