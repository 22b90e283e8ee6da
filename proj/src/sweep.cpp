#include "txlab/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <json.hpp>

namespace txlab {

namespace {
constexpr double nan_v = std::numeric_limits<double>::quiet_NaN();
}

AxisPath parse_axis_path(const std::string& name) {
    if (name == "v_dc") return AxisPath::v_dc;
    if (name == "n_c") return AxisPath::n_c;
    if (name == "delta_o") return AxisPath::delta_o;
    if (name == "omega_e_tuned") return AxisPath::omega_e_tuned;
    if (name == "omega") return AxisPath::omega;
    throw ConfigError("sweep: unresolvable parameter path '" + name + "'");
}

std::string axis_column_name(AxisPath path) {
    switch (path) {
    case AxisPath::v_dc: return "axes.v_dc_V";
    case AxisPath::n_c: return "axes.n_c";
    case AxisPath::delta_o: return "axes.delta_o_Hz";
    case AxisPath::omega_e_tuned: return "axes.omega_e_tuned_Hz";
    case AxisPath::omega: return "axes.omega_Hz";
    }
    throw ConfigError("sweep: unknown axis");
}

namespace {

const std::vector<std::string> kRateColumns = {
    "rates.G_em_Hz",     "rates.G_om_Hz",  "rates.Gamma_em_Hz", "rates.Gamma_om_Hz",
    "rates.Gamma_i_Hz",  "rates.Gamma_tot_Hz", "rates.eta_e",   "rates.eta_o",
};

const std::vector<std::string> kScalarMetrics = {
    "eta_ext", "eta_int", "bandwidth_Hz", "n_mw", "n_m", "n_add", "throughput_Hz",
};

const std::vector<std::string> kOmegaMetrics = {"eta_ext_at_omega", "s_oe_abs_at_omega"};

struct Plan {
    std::vector<SweepAxis> axes;
    bool has_omega = false;
    std::vector<std::string> metrics;
    std::vector<std::string> columns;
    std::size_t n_rows = 1;
};

Plan make_plan(const SweepConfig& cfg) {
    if (cfg.axes.empty()) throw ConfigError("sweep: axes must be non-empty");
    Plan plan;
    plan.axes = cfg.axes;
    for (const auto& axis : plan.axes) {
        if (axis.grid.empty()) throw ConfigError("sweep: empty axis grid");
        for (double v : axis.grid)
            if (!std::isfinite(v)) throw ConfigError("sweep: non-finite grid value");
        if (!std::is_sorted(axis.grid.begin(), axis.grid.end()))
            throw ConfigError("sweep: axis grids must be sorted ascending");
        if (axis.path == AxisPath::omega) plan.has_omega = true;
        plan.n_rows *= axis.grid.size();
    }

    std::vector<std::string> available = kScalarMetrics;
    if (plan.has_omega)
        available.insert(available.end(), kOmegaMetrics.begin(), kOmegaMetrics.end());
    if (cfg.outputs.empty()) {
        plan.metrics = available;
    } else {
        for (const auto& name : cfg.outputs) {
            if (std::find(available.begin(), available.end(), name) == available.end())
                throw ConfigError("sweep: requested output '" + name +
                                  "' is not computable for this axis set");
            plan.metrics.push_back(name);
        }
    }

    for (const auto& axis : plan.axes) plan.columns.push_back(axis_column_name(axis.path));
    plan.columns.insert(plan.columns.end(), kRateColumns.begin(), kRateColumns.end());
    for (const auto& m : plan.metrics) plan.columns.push_back("metrics." + m);
    return plan;
}

std::vector<double> evaluate_row(const SweepConfig& cfg, const Plan& plan,
                                 std::size_t flat_index) {
    // Decode the row-major flat index into per-axis indices.
    std::vector<std::size_t> idx(plan.axes.size());
    std::size_t rem = flat_index;
    for (std::size_t a = plan.axes.size(); a-- > 0;) {
        idx[a] = rem % plan.axes[a].grid.size();
        rem /= plan.axes[a].grid.size();
    }

    OperatingPoint op = cfg.base;
    std::optional<double> omega;
    std::vector<double> row;
    row.reserve(plan.columns.size());
    for (std::size_t a = 0; a < plan.axes.size(); ++a) {
        const double v = plan.axes[a].grid[idx[a]];
        row.push_back(v);
        switch (plan.axes[a].path) {
        case AxisPath::v_dc: op.v_dc_V = v; break;
        case AxisPath::n_c:
            op.n_c = v;
            op.p_in_W.reset();
            break;
        case AxisPath::delta_o: op.delta_o_Hz = v; break;
        case AxisPath::omega_e_tuned: op.omega_e_tuned_Hz = v; break;
        case AxisPath::omega: omega = v; break;
        }
    }

    const MetricsReport m = metrics_report(cfg.device, op);
    row.insert(row.end(), {m.rates.G_em_Hz, m.rates.G_om_Hz, m.rates.Gamma_em_Hz,
                           m.rates.Gamma_om_Hz, m.rates.Gamma_i_Hz, m.rates.Gamma_tot_Hz,
                           m.rates.eta_e, m.rates.eta_o});

    for (const auto& name : plan.metrics) {
        double v = nan_v;
        if (name == "eta_ext") v = m.eta_ext;
        else if (name == "eta_int") v = m.eta_int;
        else if (name == "bandwidth_Hz") v = m.bandwidth_Hz;
        else if (name == "n_mw") v = m.n_mw;
        else if (name == "n_m") v = m.n_m;
        else if (name == "n_add") v = m.n_add;
        else if (name == "throughput_Hz") v = m.throughput_Hz;
        else if (name == "eta_ext_at_omega")
            v = eta_ext_at(m.rates, *omega, cfg.device.omega_m_Hz);
        else if (name == "s_oe_abs_at_omega")
            v = std::abs(s_oe_analytic(m.rates, *omega, cfg.device.omega_m_Hz));
        row.push_back(v);
    }
    return row;
}

Table assemble_table(const SweepConfig& cfg, const Plan& plan,
                     std::vector<std::vector<double>> rows) {
    Table t;
    t.columns = plan.columns;
    t.rows = std::move(rows);
    (void)cfg;
    return t;
}

} // namespace

Table run_sweep(const SweepConfig& cfg, int workers) {
    const Plan plan = make_plan(cfg);
    std::vector<std::vector<double>> rows(plan.n_rows);
    std::exception_ptr err;
#ifdef _OPENMP
    const int team = workers > 0 ? workers : omp_get_max_threads();
#else
    const int team = 1;
    (void)team;
#endif
#pragma omp parallel for schedule(static) num_threads(team)
    for (long long i = 0; i < static_cast<long long>(plan.n_rows); ++i) {
        try {
            rows[static_cast<std::size_t>(i)] =
                evaluate_row(cfg, plan, static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical
            if (!err) err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);
    return assemble_table(cfg, plan, std::move(rows));
}

Table run_sweep_serial(const SweepConfig& cfg) {
    const Plan plan = make_plan(cfg);
    std::vector<std::vector<double>> rows(plan.n_rows);
    for (std::size_t i = 0; i < plan.n_rows; ++i) rows[i] = evaluate_row(cfg, plan, i);
    return assemble_table(cfg, plan, std::move(rows));
}

ComparisonReport comparison_report(const std::vector<ComparisonRow>& rows) {
    ComparisonReport report;
    for (const auto& row : rows) {
        ComparisonEntry e;
        e.row = row;
        if (row.throughput_Hz < 0.0)
            throw DeclarationError("comparison row '" + row.label +
                                   "': throughput must be >= 0");
        if (row.eta_ext && row.bandwidth_Hz) {
            e.recomputed_Hz = *row.eta_ext * *row.bandwidth_Hz * row.duty_cycle;
        } else if (row.pulse_efficiency && row.rep_rate_Hz) {
            e.recomputed_Hz = *row.pulse_efficiency * *row.rep_rate_Hz;
        } else {
            e.recomputed_Hz = nan_v;
        }
        if (std::isnan(e.recomputed_Hz)) {
            e.mismatch = nan_v;
            e.flagged = false;
        } else {
            e.mismatch = std::abs(e.recomputed_Hz - row.throughput_Hz) / row.throughput_Hz;
            e.flagged = e.mismatch > 0.10;
        }
        report.entries.push_back(std::move(e));
    }
    return report;
}

std::string ComparisonReport::to_text() const {
    std::ostringstream os;
    os << "label                                | n_add  | stored Hz  | recomputed Hz | mismatch\n";
    for (const auto& e : entries) {
        char buf[160];
        if (std::isnan(e.recomputed_Hz)) {
            std::snprintf(buf, sizeof(buf), "%-36s | %6.3g | %10.4g | %13s | %s\n",
                          e.row.label.c_str(), e.row.n_add, e.row.throughput_Hz, "-",
                          "(not derivable)");
        } else {
            std::snprintf(buf, sizeof(buf), "%-36s | %6.3g | %10.4g | %13.4g | %5.1f%%%s\n",
                          e.row.label.c_str(), e.row.n_add, e.row.throughput_Hz,
                          e.recomputed_Hz, 100.0 * e.mismatch,
                          e.flagged ? "  << MISMATCH" : "");
        }
        os << buf;
    }
    return os.str();
}

std::string ComparisonReport::to_csv() const {
    std::ostringstream os;
    os << "label,n_add,throughput_Hz,duty_cycle,recomputed_Hz,mismatch,flagged,source_note\n";
    for (const auto& e : entries) {
        os << '"' << e.row.label << "\"," << format_value(e.row.n_add) << ','
           << format_value(e.row.throughput_Hz) << ',' << format_value(e.row.duty_cycle)
           << ',' << format_value(e.recomputed_Hz) << ',' << format_value(e.mismatch) << ','
           << (e.flagged ? 1 : 0) << ",\"" << e.row.source_note << "\"\n";
    }
    return os.str();
}

std::string ComparisonReport::to_json() const {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& e : entries) {
        nlohmann::json rec;
        rec["label"] = e.row.label;
        rec["n_add"] = e.row.n_add;
        rec["throughput_Hz"] = e.row.throughput_Hz;
        if (std::isnan(e.row.duty_cycle))
            rec["duty_cycle"] = nullptr;
        else
            rec["duty_cycle"] = e.row.duty_cycle;
        if (std::isnan(e.recomputed_Hz)) {
            rec["recomputed_Hz"] = nullptr;
            rec["mismatch"] = nullptr;
        } else {
            rec["recomputed_Hz"] = e.recomputed_Hz;
            rec["mismatch"] = e.mismatch;
        }
        rec["flagged"] = e.flagged;
        rec["source_note"] = e.row.source_note;
        out.push_back(std::move(rec));
    }
    return out.dump(2) + "\n";
}

std::vector<ComparisonRow> builtin_comparison_rows() {
    std::vector<ComparisonRow> rows;

    ComparisonRow r;
    r.label = "this device (high efficiency)";
    r.n_add = 0.94;
    r.throughput_Hz = 1900.0;
    r.duty_cycle = 1.0;
    r.eta_ext = 0.022;
    r.bandwidth_Hz = 88.9e3;
    r.source_note = "continuous operation, eta x B x D";
    rows.push_back(r);

    r = {};
    r.label = "this device (low noise)";
    r.n_add = 0.58;
    r.throughput_Hz = 470.0;
    r.duty_cycle = 1.0;
    r.source_note = "continuous operation; throughput quoted directly";
    rows.push_back(r);

    r = {};
    r.label = "Weaver 2024 (Nat. Nanotech.)";
    r.n_add = 6.2;
    r.throughput_Hz = 5.2;
    r.duty_cycle = nan_v;
    r.pulse_efficiency = 5.2e-5;
    r.rep_rate_Hz = 100e3;
    r.source_note = "pulsed, eta_p x R_p";
    rows.push_back(r);

    r = {};
    r.label = "Brubaker 2022 (PRX)";
    r.n_add = 3.2;
    r.throughput_Hz = 130.0;
    r.duty_cycle = 1.0;
    r.eta_ext = 0.59;
    r.bandwidth_Hz = 220.0;
    r.source_note = "continuous operation; mode-mismatch loss excluded";
    rows.push_back(r);

    r = {};
    r.label = "Jiang 2023 (Nat. Phys.)";
    r.n_add = 1.6;
    r.throughput_Hz = 1100.0;
    r.duty_cycle = nan_v;
    r.pulse_efficiency = 0.036 * 0.35 * 0.5 * 0.993;
    r.rep_rate_Hz = 170e3;
    r.source_note = "pulsed, scattering x conversion x coupling efficiencies x R_p";
    rows.push_back(r);

    r = {};
    r.label = "Mirhosseini 2020 (Nature)";
    r.n_add = 0.57;
    r.throughput_Hz = 0.075;
    r.duty_cycle = nan_v;
    r.pulse_efficiency = 7.5e-4;
    r.rep_rate_Hz = 100.0;
    r.source_note = "pulsed, eta_p x R_p";
    rows.push_back(r);

    r = {};
    r.label = "Sahu 2022 (Nat. Comm.)";
    r.n_add = 0.4;
    r.throughput_Hz = 5.4;
    r.duty_cycle = 300e-9 * 4.0;
    r.eta_ext = 0.25;
    r.bandwidth_Hz = 18e6;
    r.source_note = "pulsed, T_d = 300 ns at R_p = 4 Hz; mode-mismatch loss excluded";
    rows.push_back(r);

    r = {};
    r.label = "Meesala 2024 (Nat. Phys.)";
    r.n_add = 0.14;
    r.throughput_Hz = 3.1;
    r.duty_cycle = nan_v;
    r.pulse_efficiency = 1.8e-4 * 0.5 * 0.68;
    r.rep_rate_Hz = 50e3;
    r.source_note = "pulsed, scattering x coupling efficiencies x R_p";
    rows.push_back(r);

    return rows;
}

} // namespace txlab
