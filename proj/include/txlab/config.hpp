#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "txlab/device.hpp"
#include "txlab/lab.hpp"
#include "txlab/sweep.hpp"

namespace txlab {

// Parsed configuration file. Sections are independent; each subcommand
// requires the sections it consumes. Unknown keys anywhere are errors.
struct Config {
    nlohmann::json raw;

    std::optional<DeviceParams> device;
    std::optional<OperatingPoint> operating_point;
    std::optional<ChainGains> chain;
    std::uint64_t seed = 0;

    // sweep section
    std::vector<SweepAxis> axes;
    std::vector<std::string> outputs;

    // spectrum section
    struct SpectrumRequest {
        double center_Hz = 0.0;       // 0 = mechanical frequency
        double span_linewidths = 10.0; // half-span in units of Gamma_tot
        std::optional<double> span_Hz; // explicit half-span overrides
        std::size_t points = 401;
        std::vector<std::string> kinds; // scattering | optical_noise | electrical
        ThermometryRegime regime = ThermometryRegime::on_resonance;
    };
    std::optional<SpectrumRequest> spectrum;

    // thermometry section
    struct ThermometryRequest {
        ThermometryRegime regime = ThermometryRegime::detuned;
        double noise_rel = 0.0;
        std::size_t points = 801;
        double span_linewidths = 10.0;
    };
    std::optional<ThermometryRequest> thermometry;

    // gaincal section
    struct GainCalRequest {
        double gain_a_dB = 0.0;
        double n_amp = 0.0;
        std::vector<double> temperatures_K;
        double noise_rel = 0.0;
    };
    std::optional<GainCalRequest> gaincal;

    // sideband section
    struct SidebandRequest {
        double n_m = 0.0;
        double noise_rel = 0.0;
        std::size_t points = 801;
        double span_linewidths = 10.0;
    };
    std::optional<SidebandRequest> sideband;

    // compare section (empty -> built-in rows)
    std::vector<ComparisonRow> compare_rows;

    SweepConfig sweep_config() const;
};

Config parse_config_file(const std::string& path);
Config parse_config_text(const std::string& text);

} // namespace txlab
