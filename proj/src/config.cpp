#include "txlab/config.hpp"

#include <fstream>
#include <limits>
#include <set>

namespace txlab {

namespace {

using nlohmann::json;

// Strict object reader: every consumed key is recorded, leftovers are errors.
class ObjectReader {
public:
    ObjectReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
        if (!obj.is_object()) throw ConfigError(path_ + ": expected an object");
    }

    ~ObjectReader() = default;

    bool has(const std::string& key) {
        if (!obj_.contains(key)) return false;
        if (obj_.at(key).is_null()) {
            consumed_.insert(key); // explicit null reads as absent
            return false;
        }
        return true;
    }

    const json& get(const std::string& key) {
        consumed_.insert(key);
        return obj_.at(key);
    }

    double number(const std::string& key) {
        consumed_.insert(key);
        const json& v = obj_.at(key);
        if (!v.is_number()) throw ConfigError(path_ + "." + key + ": expected a number");
        return v.get<double>();
    }

    double number_or(const std::string& key, double fallback) {
        if (!has(key)) {
            consumed_.insert(key);
            return fallback;
        }
        return number(key);
    }

    std::optional<double> optional_number(const std::string& key) {
        if (!has(key)) {
            consumed_.insert(key);
            return std::nullopt;
        }
        return number(key);
    }

    std::string string(const std::string& key) {
        consumed_.insert(key);
        const json& v = obj_.at(key);
        if (!v.is_string()) throw ConfigError(path_ + "." + key + ": expected a string");
        return v.get<std::string>();
    }

    std::string string_or(const std::string& key, const std::string& fallback) {
        if (!has(key)) {
            consumed_.insert(key);
            return fallback;
        }
        return string(key);
    }

    std::vector<double> number_array(const std::string& key) {
        consumed_.insert(key);
        const json& v = obj_.at(key);
        if (!v.is_array()) throw ConfigError(path_ + "." + key + ": expected an array");
        std::vector<double> out;
        for (const auto& e : v) {
            if (!e.is_number())
                throw ConfigError(path_ + "." + key + ": expected numbers");
            out.push_back(e.get<double>());
        }
        return out;
    }

    void require(const std::string& key) {
        if (!obj_.contains(key))
            throw ConfigError(path_ + ": missing required key '" + key + "'");
    }

    void finish() {
        for (auto it = obj_.begin(); it != obj_.end(); ++it)
            if (!consumed_.count(it.key()))
                throw ConfigError(path_ + ": unknown key '" + it.key() + "'");
    }

    const std::string& path() const { return path_; }

private:
    const json& obj_;
    std::string path_;
    std::set<std::string> consumed_;
};

DeviceParams parse_device(const json& j) {
    ObjectReader r(j, "device");
    for (const char* key :
         {"omega_e_Hz", "kappa_e_ext_Hz", "kappa_e_int_Hz", "omega_o_Hz", "kappa_o_ext_Hz",
          "kappa_o_int_Hz", "omega_m_Hz", "Gamma_i_sat_Hz", "g_em_Hz_per_V", "g_om_Hz"})
        r.require(key);
    DeviceParams d;
    d.omega_e_Hz = r.number("omega_e_Hz");
    d.kappa_e_ext_Hz = r.number("kappa_e_ext_Hz");
    d.kappa_e_int_Hz = r.number("kappa_e_int_Hz");
    d.omega_o_Hz = r.number("omega_o_Hz");
    d.kappa_o_ext_Hz = r.number("kappa_o_ext_Hz");
    d.kappa_o_int_Hz = r.number("kappa_o_int_Hz");
    d.omega_m_Hz = r.number("omega_m_Hz");
    d.Gamma_i_sat_Hz = r.number("Gamma_i_sat_Hz");
    d.g_em_Hz_per_V = r.number("g_em_Hz_per_V");
    d.g_om_Hz = r.number("g_om_Hz");
    d.eta_f = r.number_or("eta_f", 1.0);
    r.finish();
    d.validate();
    return d;
}

HotBathModel parse_hot_bath(const json& j) {
    ObjectReader r(j, "operating_point.hot_bath");
    const std::string kind = r.string("kind");
    HotBathModel m;
    if (kind == "constant") {
        m = HotBathModel::constant(r.number_or("Gamma_p_Hz", 0.0), r.number_or("n_p", 0.0));
    } else if (kind == "power_law") {
        m = HotBathModel::power_law(r.number("Gamma_p0_Hz"), r.number("n_p0"),
                                    r.number("alpha"), r.number("beta"));
    } else if (kind == "table") {
        m.kind = HotBathModel::Kind::table;
        m.table_n_c = r.number_array("n_c");
        m.table_Gamma_p_Hz = r.number_array("Gamma_p_Hz");
        m.table_n_p = r.number_array("n_p");
    } else {
        throw ConfigError("operating_point.hot_bath.kind: unknown kind '" + kind + "'");
    }
    r.finish();
    return m;
}

OperatingPoint parse_operating_point(const json& j) {
    ObjectReader r(j, "operating_point");
    OperatingPoint op;
    op.v_dc_V = r.number_or("v_dc_V", 0.0);
    op.n_c = r.optional_number("n_c");
    op.p_in_W = r.optional_number("p_in_W");
    op.delta_o_Hz = r.optional_number("delta_o_Hz");
    op.omega_e_tuned_Hz = r.optional_number("omega_e_tuned_Hz");
    op.n_f = r.number_or("n_f", 0.0);
    op.n_e_int = r.number_or("n_e_int", 0.0);
    if (r.has("hot_bath")) op.hot_bath = parse_hot_bath(r.get("hot_bath"));
    if (r.has("duty_cycle")) {
        const json& d = r.get("duty_cycle");
        if (d.is_number()) {
            op.duty.d = d.get<double>();
        } else {
            ObjectReader dr(d, "operating_point.duty_cycle");
            const auto td = dr.optional_number("t_d_s");
            const auto rp = dr.optional_number("r_p_Hz");
            const auto dd = dr.optional_number("d");
            dr.finish();
            if (td && rp) {
                op.duty.t_d_s = td;
                op.duty.r_p_Hz = rp;
                op.duty.d = dd.value_or(*td * *rp);
            } else if (dd) {
                op.duty.d = *dd;
            } else {
                throw ConfigError("operating_point.duty_cycle: give d or (t_d_s, r_p_Hz)");
            }
        }
    }
    r.finish();
    op.validate();
    return op;
}

ChainGains parse_chain(const json& j) {
    ObjectReader r(j, "chain");
    ChainGains c;
    c.alpha_e = r.number_or("alpha_e", 1.0);
    c.beta_e = r.number_or("beta_e", 1.0);
    c.alpha_o = r.number_or("alpha_o", 1.0);
    c.beta_o = r.number_or("beta_o", 1.0);
    c.gain_a_dB = r.number_or("gain_a_dB", 0.0);
    c.gain_o_dB = r.number_or("gain_o_dB", 0.0);
    c.n_amp = r.number_or("n_amp", 0.0);
    c.f_if_Hz = r.number_or("f_if_Hz", 1.0);
    r.finish();
    c.validate();
    return c;
}

std::vector<SweepAxis> parse_axes(const json& j, std::vector<std::string>& outputs) {
    ObjectReader r(j, "sweep");
    const json& axes = r.get("axes");
    if (!axes.is_array() || axes.empty())
        throw ConfigError("sweep.axes: expected a non-empty array");
    std::vector<SweepAxis> out;
    for (std::size_t i = 0; i < axes.size(); ++i) {
        ObjectReader ar(axes[i], "sweep.axes[" + std::to_string(i) + "]");
        SweepAxis axis;
        axis.path = parse_axis_path(ar.string("path"));
        axis.grid = ar.number_array("grid");
        ar.finish();
        out.push_back(std::move(axis));
    }
    if (r.has("outputs")) {
        const json& o = r.get("outputs");
        if (!o.is_array()) throw ConfigError("sweep.outputs: expected an array");
        for (const auto& e : o) {
            if (!e.is_string()) throw ConfigError("sweep.outputs: expected strings");
            outputs.push_back(e.get<std::string>());
        }
    }
    r.finish();
    return out;
}

ThermometryRegime parse_regime(const std::string& s, const std::string& path) {
    if (s == "detuned") return ThermometryRegime::detuned;
    if (s == "on_resonance") return ThermometryRegime::on_resonance;
    throw ConfigError(path + ": unknown regime '" + s + "'");
}

Config::SpectrumRequest parse_spectrum(const json& j) {
    ObjectReader r(j, "spectrum");
    Config::SpectrumRequest s;
    s.center_Hz = r.number_or("center_Hz", 0.0);
    s.span_linewidths = r.number_or("span_linewidths", 10.0);
    s.span_Hz = r.optional_number("span_Hz");
    s.points = static_cast<std::size_t>(r.number_or("points", 401));
    if (r.has("kinds")) {
        const json& k = r.get("kinds");
        if (!k.is_array()) throw ConfigError("spectrum.kinds: expected an array");
        for (const auto& e : k) s.kinds.push_back(e.get<std::string>());
    } else {
        s.kinds = {"scattering", "optical_noise"};
    }
    for (const auto& k : s.kinds)
        if (k != "scattering" && k != "optical_noise" && k != "electrical")
            throw ConfigError("spectrum.kinds: unknown kind '" + k + "'");
    s.regime = parse_regime(r.string_or("regime", "on_resonance"), "spectrum.regime");
    r.finish();
    return s;
}

Config::ThermometryRequest parse_thermometry(const json& j) {
    ObjectReader r(j, "thermometry");
    Config::ThermometryRequest t;
    t.regime = parse_regime(r.string_or("regime", "detuned"), "thermometry.regime");
    t.noise_rel = r.number_or("noise_rel", 0.0);
    t.points = static_cast<std::size_t>(r.number_or("points", 801));
    t.span_linewidths = r.number_or("span_linewidths", 10.0);
    r.finish();
    return t;
}

Config::GainCalRequest parse_gaincal(const json& j) {
    ObjectReader r(j, "gaincal");
    Config::GainCalRequest g;
    g.gain_a_dB = r.number("gain_a_dB");
    g.n_amp = r.number("n_amp");
    g.temperatures_K = r.number_array("temperatures_K");
    g.noise_rel = r.number_or("noise_rel", 0.0);
    r.finish();
    return g;
}

Config::SidebandRequest parse_sideband(const json& j) {
    ObjectReader r(j, "sideband");
    Config::SidebandRequest s;
    s.n_m = r.number("n_m");
    s.noise_rel = r.number_or("noise_rel", 0.0);
    s.points = static_cast<std::size_t>(r.number_or("points", 801));
    s.span_linewidths = r.number_or("span_linewidths", 10.0);
    r.finish();
    return s;
}

std::vector<ComparisonRow> parse_compare(const json& j) {
    ObjectReader r(j, "compare");
    std::vector<ComparisonRow> rows;
    const json& arr = r.get("rows");
    if (!arr.is_array()) throw ConfigError("compare.rows: expected an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
        ObjectReader rr(arr[i], "compare.rows[" + std::to_string(i) + "]");
        ComparisonRow row;
        row.label = rr.string("label");
        row.n_add = rr.number("n_add");
        row.throughput_Hz = rr.number("throughput_Hz");
        row.duty_cycle = rr.number_or("duty_cycle",
                                      std::numeric_limits<double>::quiet_NaN());
        row.source_note = rr.string_or("source_note", "");
        row.eta_ext = rr.optional_number("eta_ext");
        row.bandwidth_Hz = rr.optional_number("bandwidth_Hz");
        row.pulse_efficiency = rr.optional_number("pulse_efficiency");
        row.rep_rate_Hz = rr.optional_number("rep_rate_Hz");
        rr.finish();
        rows.push_back(std::move(row));
    }
    r.finish();
    return rows;
}

} // namespace

SweepConfig Config::sweep_config() const {
    if (!device) throw ConfigError("config: 'device' section required");
    if (!operating_point) throw ConfigError("config: 'operating_point' section required");
    if (axes.empty()) throw ConfigError("config: 'sweep' section with axes required");
    SweepConfig cfg;
    cfg.device = *device;
    cfg.base = *operating_point;
    cfg.axes = axes;
    cfg.outputs = outputs;
    cfg.chain = chain.value_or(ChainGains{});
    cfg.seed = seed;
    return cfg;
}

Config parse_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config: top level must be an object");

    Config cfg;
    cfg.raw = j;
    std::set<std::string> known = {"device",  "operating_point", "chain",   "sweep",
                                   "spectrum", "thermometry",    "gaincal", "sideband",
                                   "compare",  "seed"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.count(it.key()))
            throw ConfigError("config: unknown key '" + it.key() + "'");

    if (j.contains("device")) cfg.device = parse_device(j.at("device"));
    if (j.contains("operating_point"))
        cfg.operating_point = parse_operating_point(j.at("operating_point"));
    if (j.contains("chain")) cfg.chain = parse_chain(j.at("chain"));
    if (j.contains("sweep")) cfg.axes = parse_axes(j.at("sweep"), cfg.outputs);
    if (j.contains("spectrum")) cfg.spectrum = parse_spectrum(j.at("spectrum"));
    if (j.contains("thermometry")) cfg.thermometry = parse_thermometry(j.at("thermometry"));
    if (j.contains("gaincal")) cfg.gaincal = parse_gaincal(j.at("gaincal"));
    if (j.contains("sideband")) cfg.sideband = parse_sideband(j.at("sideband"));
    if (j.contains("compare")) cfg.compare_rows = parse_compare(j.at("compare"));
    if (j.contains("seed")) {
        const json& s = j.at("seed");
        if (!s.is_number_integer() || s.get<std::int64_t>() < 0)
            throw ConfigError("config: seed must be a non-negative integer");
        cfg.seed = s.get<std::uint64_t>();
    }
    return cfg;
}

Config parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_config_text(text);
}

} // namespace txlab
