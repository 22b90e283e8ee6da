#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "helpers.hpp"
#include "txlab/config.hpp"
#include "txlab/fitting.hpp"
#include "txlab/metrics.hpp"
#include "txlab/sweep.hpp"

using namespace txlab;
namespace tt = txlab::testing;

namespace {

SweepConfig base_config() {
    SweepConfig cfg;
    cfg.device = tt::make_device();
    cfg.base = tt::make_op(50.0, 2.3);
    cfg.base.n_e_int = 0.12;
    cfg.base.n_f = 0.3;
    cfg.base.hot_bath = HotBathModel::constant(446.0, 40.0);
    return cfg;
}

std::size_t column(const Table& t, const std::string& name) {
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        if (t.columns[i] == name) return i;
    throw std::runtime_error("column not found: " + name);
}

} // namespace

TEST_CASE("voltage sweep reproduces the cooling curve shape") {
    auto cfg = base_config();
    cfg.axes = {{AxisPath::v_dc, {0.0, 10.0, 20.0, 30.0, 40.0, 50.0}}};
    const auto t = run_sweep(cfg);
    REQUIRE(t.rows.size() == 6);

    const auto n_m = column(t, "metrics.n_m");
    const auto n_add = column(t, "metrics.n_add");
    double prev = 1e300;
    bool crossed = false;
    for (const auto& row : t.rows) {
        CHECK(row[n_m] < prev);
        prev = row[n_m];
        if (row[n_m] < 1.0) crossed = true;
    }
    CHECK(crossed);
    //

    CHECK(std::isnan(t.rows[0][n_add])); // V = 0: referral undefined, not infinite
    CHECK(std::isfinite(t.rows[5][n_add]));
}

TEST_CASE("single-point sweep equals the direct metric calls") {
    auto cfg = base_config();
    cfg.axes = {{AxisPath::n_c, {232.0}}};
    const auto t = run_sweep(cfg);
    REQUIRE(t.rows.size() == 1);

    auto op = cfg.base;
    op.n_c = 232.0;
    const auto m = metrics_report(cfg.device, op);
    CHECK(t.rows[0][column(t, "rates.Gamma_em_Hz")] == m.rates.Gamma_em_Hz);
    CHECK(t.rows[0][column(t, "metrics.eta_ext")] == m.eta_ext);
    CHECK(t.rows[0][column(t, "metrics.n_m")] == m.n_m);
    CHECK(t.rows[0][column(t, "metrics.throughput_Hz")] == m.throughput_Hz);
}

TEST_CASE("probe-frequency axis traces a Lorentzian of width Gamma_tot") {
    auto cfg = base_config();
    const auto rates = derive_rates(cfg.device, cfg.base);
    const auto grid = linear_grid(5.0745e9, 5.0 * rates.Gamma_tot_Hz, 201);
    cfg.axes = {{AxisPath::omega, grid}};
    cfg.outputs = {"eta_ext_at_omega"};
    const auto t = run_sweep(cfg);

    std::vector<double> freq, vals;
    for (const auto& row : t.rows) {
        freq.push_back(row[column(t, "axes.omega_Hz")]);
        vals.push_back(row[column(t, "metrics.eta_ext_at_omega")]);
    }
    const auto fit = lorentzian_fit(freq, vals);
    CHECK(fit.fwhm_Hz == doctest::Approx(rates.Gamma_tot_Hz).epsilon(1e-6));
    CHECK(fit.center_Hz == doctest::Approx(5.0745e9).epsilon(1e-12));
}

TEST_CASE("sweep output is deterministic and partition-independent") {
    auto cfg = base_config();
    cfg.axes = {{AxisPath::v_dc, {0.0, 12.5, 25.0, 37.5, 50.0}},
                {AxisPath::n_c, {1.0, 2.3, 10.0, 100.0}}};
    const auto serial = run_sweep_serial(cfg);
    const auto one = run_sweep(cfg, 1);
    const auto many = run_sweep(cfg, 4);
    CHECK(serial.to_csv() == one.to_csv());
    CHECK(serial.to_csv() == many.to_csv());
    CHECK(run_sweep(cfg).to_csv() == serial.to_csv());

    // Row-major ordering over the declared axes.
    REQUIRE(serial.rows.size() == 20);
    CHECK(serial.rows[0][0] == 0.0);
    CHECK(serial.rows[0][1] == 1.0);
    CHECK(serial.rows[3][1] == 100.0);
    CHECK(serial.rows[4][0] == 12.5);
}

TEST_CASE("sweep validation") {
    auto cfg = base_config();
    cfg.axes = {};
    CHECK_THROWS_AS(run_sweep(cfg), ConfigError);

    cfg.axes = {{AxisPath::v_dc, {10.0, 5.0}}}; // unsorted
    CHECK_THROWS_AS(run_sweep(cfg), ConfigError);

    cfg.axes = {{AxisPath::v_dc, {0.0, 10.0}}};
    cfg.outputs = {"not_a_metric"};
    CHECK_THROWS_AS(run_sweep(cfg), ConfigError);

    cfg.outputs = {"eta_ext_at_omega"}; // needs an omega axis
    CHECK_THROWS_AS(run_sweep(cfg), ConfigError);

    CHECK_THROWS_AS(parse_axis_path("voltage"), ConfigError);
}

TEST_CASE("hot-bath table range violations propagate from the sweep") {
    auto cfg = base_config();
    cfg.base.hot_bath.kind = HotBathModel::Kind::table;
    cfg.base.hot_bath.table_n_c = {1.0, 100.0};
    cfg.base.hot_bath.table_Gamma_p_Hz = {100.0, 1000.0};
    cfg.base.hot_bath.table_n_p = {1.0, 30.0};
    cfg.axes = {{AxisPath::n_c, {10.0, 500.0}}}; // 500 outside the table
    CHECK_THROWS_WITH_AS(run_sweep(cfg), doctest::Contains("outside table range"),
                         DeclarationError);
}

TEST_CASE("csv cells carry 17 significant digits") {
    Table t;
    t.columns = {"a", "b"};
    t.append_row({1.0 / 3.0, std::numeric_limits<double>::quiet_NaN()});
    const auto csv = t.to_csv();
    CHECK(csv == "a,b\n0.33333333333333331,nan\n");

    // Round trip through the printed representation is exact.
    const double parsed = std::strtod("0.33333333333333331", nullptr);
    CHECK(parsed == 1.0 / 3.0);
}

TEST_CASE("comparison report recomputes every derivable row") {
    const auto report = comparison_report(builtin_comparison_rows());
    REQUIRE(report.entries.size() == 8);
    int derivable = 0;
    for (const auto& e : report.entries) {
        if (std::isnan(e.recomputed_Hz)) continue;
        ++derivable;
        INFO(e.row.label);
        CHECK(e.mismatch <= 0.10);
        CHECK_FALSE(e.flagged);
    }
    CHECK(derivable == 7);

    // A corrupted stored throughput gets flagged.
    auto rows = builtin_comparison_rows();
    rows[0].throughput_Hz = 5000.0;
    const auto bad = comparison_report(rows);
    CHECK(bad.entries[0].flagged);
}

TEST_CASE("config parsing is strict") {
    const std::string good = R"({
        // comments are allowed
        "device": {
            "omega_e_Hz": 5.0745e9, "kappa_e_ext_Hz": 1.33e6, "kappa_e_int_Hz": 3.3e5,
            "omega_o_Hz": 1.929263e14, "kappa_o_ext_Hz": 1.35e9, "kappa_o_int_Hz": 4.04e8,
            "omega_m_Hz": 5.0745e9, "Gamma_i_sat_Hz": 892.0,
            "g_em_Hz_per_V": 3810.0, "g_om_Hz": 3.43e5, "eta_f": 0.35
        },
        "operating_point": {
            "v_dc_V": 50.0, "n_c": 232.0,
            "delta_o_Hz": 5.0745e9, "omega_e_tuned_Hz": 5.0745e9,
            "n_f": 0.3, "n_e_int": 0.12,
            "hot_bath": {"kind": "constant", "Gamma_p_Hz": 446.0, "n_p": 40.0},
            "duty_cycle": 1.0
        },
        "sweep": {"axes": [{"path": "v_dc", "grid": [0, 25, 50]}], "outputs": ["n_m"]},
        "seed": 7
    })";
    const auto cfg = parse_config_text(good);
    CHECK(cfg.device->g_om_Hz == 3.43e5);
    CHECK(cfg.operating_point->n_c == 232.0);
    CHECK(cfg.seed == 7);
    const auto t = run_sweep(cfg.sweep_config());
    CHECK(t.rows.size() == 3);

    SUBCASE("unknown top-level key") {
        CHECK_THROWS_WITH_AS(parse_config_text(R"({"devices": {}})"),
                             doctest::Contains("unknown key"), ConfigError);
    }
    SUBCASE("unknown nested key") {
        std::string bad = good;
        bad.replace(bad.find("\"n_f\""), 5, "\"n_g\"");
        CHECK_THROWS_WITH_AS(parse_config_text(bad), doctest::Contains("unknown key"),
                             ConfigError);
    }
    SUBCASE("missing required device key") {
        CHECK_THROWS_WITH_AS(
            parse_config_text(R"({"device": {"omega_e_Hz": 1.0}})"),
            doctest::Contains("missing required key"), ConfigError);
    }
    SUBCASE("malformed json") {
        CHECK_THROWS_AS(parse_config_text("{"), ConfigError);
    }
    SUBCASE("pulsed duty cycle") {
        std::string pulsed = good;
        pulsed.replace(pulsed.find("\"duty_cycle\": 1.0"), 17,
                       "\"duty_cycle\": {\"t_d_s\": 300e-9, \"r_p_Hz\": 4.0}");
        const auto c = parse_config_text(pulsed);
        CHECK(c.operating_point->duty.d == doctest::Approx(1.2e-6));
    }
}
