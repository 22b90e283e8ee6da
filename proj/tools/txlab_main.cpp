// Command-line front end: spectra, single-point metrics, parameter sweeps,
// and the synthetic calibration protocols, driven by a JSON config.
#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "txlab/config.hpp"
#include "txlab/constants.hpp"
#include "txlab/fitting.hpp"
#include "txlab/lab.hpp"
#include "txlab/metrics.hpp"
#include "txlab/network.hpp"
#include "txlab/sweep.hpp"
#include "txlab/table.hpp"

using namespace txlab;
using nlohmann::json;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_path;
    std::string format; // "", "csv" or "json"
    int workers = 0;
    std::int64_t seed = -1; // -1: use the config seed
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool config_required = true) {
    auto* c = cmd->add_option("--config", opts.config_path, "configuration file (JSON)");
    if (config_required) c->required();
    cmd->add_option("--out", opts.out_path, "output path (default: stdout)");
    cmd->add_option("--format", opts.format, "output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--workers", opts.workers, "worker threads for grid evaluation");
    cmd->add_option("--seed", opts.seed, "override the config seed");
}

void emit(const CommonOpts& opts, const std::string& text) {
    if (opts.out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(opts.out_path, std::ios::binary);
    if (!out) throw IoError("cannot open output file '" + opts.out_path + "'");
    out << text;
}

std::string pick_format(const CommonOpts& opts, const std::string& fallback) {
    return opts.format.empty() ? fallback : opts.format;
}

Config load(const CommonOpts& opts) {
    Config cfg = parse_config_file(opts.config_path);
    if (opts.seed >= 0) cfg.seed = static_cast<std::uint64_t>(opts.seed);
    return cfg;
}

const DeviceParams& need_device(const Config& cfg) {
    if (!cfg.device) throw ConfigError("config: 'device' section required");
    return *cfg.device;
}

const OperatingPoint& need_op(const Config& cfg) {
    if (!cfg.operating_point)
        throw ConfigError("config: 'operating_point' section required");
    return *cfg.operating_point;
}

json rates_json(const DerivedRates& r) {
    return json{{"G_em_Hz", r.G_em_Hz},         {"G_om_Hz", r.G_om_Hz},
                {"Gamma_em_Hz", r.Gamma_em_Hz}, {"Gamma_om_Hz", r.Gamma_om_Hz},
                {"Gamma_i_Hz", r.Gamma_i_Hz},   {"Gamma_tot_Hz", r.Gamma_tot_Hz},
                {"eta_e", r.eta_e},             {"eta_o", r.eta_o}};
}

json fit_json(const LorentzianFit& f) {
    return json{{"center_Hz", f.center_Hz},
                {"fwhm_Hz", f.fwhm_Hz},
                {"peak", f.peak},
                {"offset", f.offset},
                {"residual_rms", f.residual_rms}};
}

json finite_or_null(double v) {
    if (std::isnan(v)) return nullptr;
    return v;
}

// ---- subcommands ----------------------------------------------------------

int cmd_spectrum(const CommonOpts& opts) {
    const Config cfg = load(opts);
    const auto& dev = need_device(cfg);
    const auto& op = need_op(cfg);
    const Config::SpectrumRequest req = cfg.spectrum.value_or(Config::SpectrumRequest{});

    const auto as = assemble(dev, op);
    const double center = req.center_Hz > 0.0 ? req.center_Hz : dev.omega_m_Hz;
    const double half_span =
        req.span_Hz.value_or(req.span_linewidths * as.rates.Gamma_tot_Hz);
    const auto grid = linear_grid(center, half_span, req.points);

    Table t;
    t.columns = {"freq_Hz"};
    const bool want_scatter =
        std::count(req.kinds.begin(), req.kinds.end(), "scattering") > 0;
    const bool want_optical =
        std::count(req.kinds.begin(), req.kinds.end(), "optical_noise") > 0;
    const bool want_electrical =
        std::count(req.kinds.begin(), req.kinds.end(), "electrical") > 0;
    if (want_scatter)
        t.columns.insert(t.columns.end(), {"s_oe_abs", "s_oe_arg_rad", "eta_ext_at_omega"});
    if (want_optical) t.columns.push_back("n_o_out_quanta");
    if (want_electrical) t.columns.push_back("S_elec_quanta");

    std::vector<Eigen::MatrixXcd> xi;
    if (want_scatter) xi = transfer_matrix_sweep(as.system, grid);
    Spectrum optical;
    if (want_optical)
        optical = output_flux_psd(as.system, as.system.default_occupancies(), "o_ext", grid);
    Spectrum electrical;
    if (want_electrical) {
        ElectricalPsdParams p;
        p.rates = as.rates;
        p.baths = as.baths;
        p.omega_e_Hz = op.omega_e_tuned_Hz.value_or(dev.omega_e_Hz);
        p.omega_m_Hz = dev.omega_m_Hz;
        p.regime = req.regime;
        electrical = electrical_psd(p, cfg.chain.value_or(ChainGains{}), grid);
    }

    const int row_o = as.system.output_index("o_ext");
    const int col_e = as.system.input_index("e_ext");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        std::vector<double> row = {grid[i]};
        if (want_scatter) {
            const auto s = xi[i](row_o, col_e);
            row.push_back(std::abs(s));
            row.push_back(std::arg(s));
            row.push_back(std::norm(s));
        }
        if (want_optical) row.push_back(optical.values[i]);
        if (want_electrical) row.push_back(electrical.values[i]);
        t.append_row(std::move(row));
    }

    emit(opts, pick_format(opts, "csv") == "csv" ? t.to_csv() : t.to_json());
    return 0;
}

int cmd_metrics(const CommonOpts& opts) {
    const Config cfg = load(opts);
    const auto m = metrics_report(need_device(cfg), need_op(cfg));
    if (pick_format(opts, "json") == "csv") {
        Table t;
        t.columns = {"rates.G_em_Hz",     "rates.G_om_Hz",        "rates.Gamma_em_Hz",
                     "rates.Gamma_om_Hz", "rates.Gamma_i_Hz",     "rates.Gamma_tot_Hz",
                     "rates.eta_e",       "rates.eta_o",          "metrics.eta_ext",
                     "metrics.eta_int",   "metrics.bandwidth_Hz", "metrics.n_mw",
                     "metrics.n_m",       "metrics.n_add",        "metrics.throughput_Hz"};
        t.append_row({m.rates.G_em_Hz, m.rates.G_om_Hz, m.rates.Gamma_em_Hz,
                      m.rates.Gamma_om_Hz, m.rates.Gamma_i_Hz, m.rates.Gamma_tot_Hz,
                      m.rates.eta_e, m.rates.eta_o, m.eta_ext, m.eta_int, m.bandwidth_Hz,
                      m.n_mw, m.n_m, m.n_add, m.throughput_Hz});
        emit(opts, t.to_csv());
    } else {
        json out;
        out["rates"] = rates_json(m.rates);
        out["eta_ext"] = m.eta_ext;
        out["eta_int"] = m.eta_int;
        out["bandwidth_Hz"] = m.bandwidth_Hz;
        out["n_mw"] = m.n_mw;
        out["n_m"] = m.n_m;
        out["n_add"] = finite_or_null(m.n_add);
        out["throughput_Hz"] = m.throughput_Hz;
        emit(opts, out.dump(2) + "\n");
    }
    return 0;
}

int cmd_sweep(const CommonOpts& opts) {
    const Config cfg = load(opts);
    const auto t = run_sweep(cfg.sweep_config(), opts.workers);
    emit(opts, pick_format(opts, "csv") == "csv" ? t.to_csv() : t.to_json());
    return 0;
}

int cmd_fourport(const CommonOpts& opts) {
    const Config cfg = load(opts);
    const auto& dev = need_device(cfg);
    const auto as = assemble(dev, need_op(cfg));

    // Probe at the transduction peak; detunings pull it off the bare
    // mechanical frequency by a fraction of a linewidth.
    const auto scan = linear_grid(dev.omega_m_Hz, 3.0 * as.rates.Gamma_tot_Hz, 601);
    const auto xi = transfer_matrix_sweep(as.system, scan);
    const int row_o = as.system.output_index("o_ext");
    const int col_e = as.system.input_index("e_ext");
    std::size_t best = 0;
    for (std::size_t i = 1; i < scan.size(); ++i)
        if (std::norm(xi[i](row_o, col_e)) > std::norm(xi[best](row_o, col_e))) best = i;

    const auto res =
        four_port_run(as.system, cfg.chain.value_or(ChainGains{}), scan[best]);
    json out;
    out["T_oe"] = res.T_oe;
    out["T_eo"] = res.T_eo;
    out["R_ee"] = res.R_ee;
    out["R_oo"] = res.R_oo;
    out["eta_ext_est"] = res.eta_ext_est;
    out["alpha_e_beta_o"] = res.alpha_e_beta_o;
    out["probe_Hz"] = res.probe_Hz;
    out["offres_e_Hz"] = res.offres_e_Hz;
    out["offres_o_Hz"] = res.offres_o_Hz;
    out["offres_e_refl"] = res.offres_e_refl;
    out["offres_o_refl"] = res.offres_o_refl;
    out["eta_ext_closed_form"] = eta_ext(as.rates);
    emit(opts, out.dump(2) + "\n");
    return 0;
}

int cmd_thermometry(const CommonOpts& opts) {
    const Config cfg = load(opts);
    const auto& dev = need_device(cfg);
    const auto& op = need_op(cfg);
    const Config::ThermometryRequest req =
        cfg.thermometry.value_or(Config::ThermometryRequest{});
    const ChainGains chain = cfg.chain.value_or(ChainGains{});
    std::mt19937_64 rng(cfg.seed);

    // Stage 1: microwave thermometry at V_DC = 0 around the resonator line.
    auto op0 = op;
    op0.v_dc_V = 0.0;
    const auto as0 = assemble(dev, op0);
    const double omega_e = op.omega_e_tuned_Hz.value_or(dev.omega_e_Hz);
    ElectricalPsdParams p0;
    p0.rates = as0.rates;
    p0.baths = as0.baths;
    p0.omega_e_Hz = omega_e;
    p0.omega_m_Hz = dev.omega_m_Hz;
    p0.regime = ThermometryRegime::detuned;
    auto mw_spectrum =
        electrical_psd(p0, chain, linear_grid(omega_e, 4.0 * dev.kappa_e_Hz(), req.points));
    if (req.noise_rel > 0.0)
        mw_spectrum = add_relative_noise(mw_spectrum, req.noise_rel, rng);
    const auto mw = extract_microwave_occupancy(mw_spectrum, chain, dev.kappa_e_ext_Hz,
                                                dev.kappa_e_int_Hz);

    // Stage 2: mechanical emission around the mechanical line.
    const auto as = assemble(dev, op);
    ElectricalPsdParams p1 = p0;
    p1.rates = as.rates;
    p1.baths = as.baths;
    p1.regime = req.regime;
    auto mech_spectrum = electrical_psd(
        p1, chain,
        linear_grid(dev.omega_m_Hz, req.span_linewidths * as.rates.Gamma_tot_Hz, req.points));
    if (req.noise_rel > 0.0)
        mech_spectrum = add_relative_noise(mech_spectrum, req.noise_rel, rng);
    const auto mech =
        extract_mechanical_occupancy(mech_spectrum, chain, as.rates, mw.n_mw, req.regime);

    const auto truth = occupancies(as.rates, as.baths);
    json out;
    out["seed"] = cfg.seed;
    out["regime"] = req.regime == ThermometryRegime::detuned ? "detuned" : "on_resonance";
    out["noise_rel"] = req.noise_rel;
    out["truth"] = {{"n_e_int", op.n_e_int},
                    {"n_mw", truth.n_mw},
                    {"n_m", truth.n_m},
                    {"n_add", finite_or_null(as.rates.Gamma_em_Hz > 0.0
                                                 ? added_noise_from_n_m(as.rates, truth.n_m)
                                                 : std::nan(""))}};
    out["recovered"] = {
        {"n_e_int", mw.n_e_int},
        {"n_mw", mw.n_mw},
        {"n_m", mech.n_m},
        {"n_add", finite_or_null(as.rates.Gamma_em_Hz > 0.0
                                     ? added_noise_from_n_m(as.rates, mech.n_m)
                                     : std::nan(""))}};
    out["fits"] = {{"microwave", fit_json(mw.fit)}, {"mechanical", fit_json(mech.fit)}};
    emit(opts, out.dump(2) + "\n");
    return 0;
}

int cmd_gaincal(const CommonOpts& opts) {
    const Config cfg = load(opts);
    if (!cfg.gaincal) throw ConfigError("config: 'gaincal' section required");
    const auto& req = *cfg.gaincal;
    const double f = cfg.device ? cfg.device->omega_e_Hz : 5.0745e9;
    const double f_if = cfg.chain ? cfg.chain->f_if_Hz : 2e3;
    std::mt19937_64 rng(cfg.seed);

    auto data = synth_gaincal_data(req.gain_a_dB, req.n_amp, f, f_if, req.temperatures_K);
    if (req.noise_rel > 0.0) {
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (auto& [t, p] : data) p *= 1.0 + req.noise_rel * gauss(rng);
    }
    const auto res = gain_cal_temperature_sweep(data, f, f_if);

    json out;
    out["seed"] = cfg.seed;
    out["freq_Hz"] = f;
    out["f_if_Hz"] = f_if;
    out["noise_rel"] = req.noise_rel;
    out["truth"] = {{"gain_a_dB", req.gain_a_dB}, {"n_amp", req.n_amp}};
    out["recovered"] = {{"gain_a_dB", res.gain_a_dB}, {"n_amp", res.n_amp}};
    out["error_dB"] = res.gain_a_dB - req.gain_a_dB;
    emit(opts, out.dump(2) + "\n");
    return 0;
}

int cmd_sideband(const CommonOpts& opts) {
    const Config cfg = load(opts);
    if (!cfg.sideband) throw ConfigError("config: 'sideband' section required");
    const auto& req = *cfg.sideband;
    std::mt19937_64 rng(cfg.seed);

    double center = 5.0745e9, fwhm = 3.5e3;
    if (cfg.device && cfg.operating_point) {
        const auto rates = derive_rates(*cfg.device, *cfg.operating_point);
        center = cfg.device->omega_m_Hz;
        fwhm = rates.Gamma_tot_Hz;
    }
    const auto grid = linear_grid(center, req.span_linewidths * fwhm, req.points);
    auto [red, blue] = synth_sideband_pair(req.n_m, center, fwhm, 1.0e3, grid);
    if (req.noise_rel > 0.0) {
        red = add_relative_noise(red, req.noise_rel, rng);
        blue = add_relative_noise(blue, req.noise_rel, rng);
    }
    const double n_est = sideband_asymmetry(red, blue);

    json out;
    out["seed"] = cfg.seed;
    out["noise_rel"] = req.noise_rel;
    out["truth"] = {{"n_m", req.n_m}};
    out["recovered"] = {{"n_m", n_est}};
    out["line"] = {{"center_Hz", center}, {"fwhm_Hz", fwhm}};
    emit(opts, out.dump(2) + "\n");
    return 0;
}

int cmd_compare(const CommonOpts& opts) {
    std::vector<ComparisonRow> rows;
    if (!opts.config_path.empty()) {
        const Config cfg = load(opts);
        rows = cfg.compare_rows;
    }
    if (rows.empty()) rows = builtin_comparison_rows();
    const auto report = comparison_report(rows);
    const std::string fmt = pick_format(opts, "text");
    if (fmt == "csv")
        emit(opts, report.to_csv());
    else if (fmt == "json")
        emit(opts, report.to_json());
    else
        emit(opts, report.to_text());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"electro-optomechanical transducer simulator and virtual measurement lab"};
    app.require_subcommand(1);

    CommonOpts opts;
    auto* spectrum =
        app.add_subcommand("spectrum", "scattering and noise spectra over a frequency grid");
    add_common(spectrum, opts);
    auto* metrics =
        app.add_subcommand("metrics", "scalar figures of merit at one operating point");
    add_common(metrics, opts);
    auto* sweep = app.add_subcommand("sweep", "Cartesian parameter sweep to a table");
    add_common(sweep, opts);
    auto* fourport =
        app.add_subcommand("fourport", "four-port efficiency measurement on synthetic data");
    add_common(fourport, opts);
    auto* thermometry = app.add_subcommand(
        "thermometry", "generate and invert electrical thermometry spectra");
    add_common(thermometry, opts);
    auto* gaincal =
        app.add_subcommand("gaincal", "temperature-sweep amplifier gain calibration");
    add_common(gaincal, opts);
    auto* sideband = app.add_subcommand(
        "sideband", "sideband-asymmetry thermometry on synthetic spectra");
    add_common(sideband, opts);
    auto* compare = app.add_subcommand("compare", "transducer throughput comparison table");
    add_common(compare, opts, /*config_required=*/false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (spectrum->parsed()) return cmd_spectrum(opts);
        if (metrics->parsed()) return cmd_metrics(opts);
        if (sweep->parsed()) return cmd_sweep(opts);
        if (fourport->parsed()) return cmd_fourport(opts);
        if (thermometry->parsed()) return cmd_thermometry(opts);
        if (gaincal->parsed()) return cmd_gaincal(opts);
        if (sideband->parsed()) return cmd_sideband(opts);
        if (compare->parsed()) return cmd_compare(opts);
    } catch (const Error& e) {
        json err{{"error", e.error_class()}, {"message", e.what()}};
        std::cerr << err.dump() << "\n";
        if (e.error_class() == "config_error") return 2;
        if (e.error_class() == "declaration_error") return 3;
        if (e.error_class() == "numeric_error") return 4;
        if (e.error_class() == "unphysical_error") return 5;
        if (e.error_class() == "io_error") return 6;
        return 1;
    } catch (const std::exception& e) {
        json err{{"error", "internal_error"}, {"message", e.what()}};
        std::cerr << err.dump() << "\n";
        return 1;
    }
    return 0;
}
