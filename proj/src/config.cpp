#include "omsim/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "omsim/errors.hpp"

namespace omsim {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct DoubleKey {
    const char* name;
    double RunConfig::* member;
};

constexpr DoubleKey kDoubleKeys[] = {
    {"cavity.length_m", &RunConfig::cavity_length_m},
    {"cavity.finesse", &RunConfig::cavity_finesse},
    {"cavity.wavelength_m", &RunConfig::cavity_wavelength_m},
    {"mirror.f_m_hz", &RunConfig::mirror_f_m_hz},
    {"mirror.mass_kg", &RunConfig::mirror_mass_kg},
    {"mirror.q", &RunConfig::mirror_q},
    {"drive.power_w", &RunConfig::drive_power_w},
    {"drive.detuning_over_gamma", &RunConfig::drive_detuning_over_gamma},
    {"bath.temperature_k", &RunConfig::bath_temperature_k},
    {"run.grid_start_hz", &RunConfig::grid_start_hz},
    {"run.grid_stop_hz", &RunConfig::grid_stop_hz},
    {"run.signal_level_db", &RunConfig::signal_level_db},
    {"run.drift_hz_per_min", &RunConfig::drift_hz_per_min},
};

constexpr const char* kGridPointsKey = "run.grid_points";
constexpr const char* kSeedKey = "run.seed";

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_double(std::string_view token, int line) {
    double value = 0.0;
    const auto* begin = token.data();
    const auto* end = token.data() + token.size();
    const auto [ptr, err] = std::from_chars(begin, end, value);
    if (err != std::errc{} || ptr != end)
        throw config_error("line " + std::to_string(line) +
                           ": cannot parse number '" + std::string(token) +
                           "'");
    if (!std::isfinite(value))
        throw config_error("line " + std::to_string(line) +
                           ": value must be finite");
    return value;
}

void require(bool ok, const std::string& message) {
    if (!ok) throw config_error(message);
}

void validate(const RunConfig& c) {
    require(c.cavity_length_m > 0.0, "cavity.length_m must be > 0");
    require(c.cavity_finesse >= 100.0, "cavity.finesse must be >= 100");
    require(c.cavity_wavelength_m > 0.0, "cavity.wavelength_m must be > 0");
    require(c.mirror_f_m_hz > 0.0, "mirror.f_m_hz must be > 0");
    require(c.mirror_mass_kg > 0.0, "mirror.mass_kg must be > 0");
    require(c.mirror_q > 1.0, "mirror.q must be > 1");
    require(c.drive_power_w >= 0.0, "drive.power_w must be >= 0");
    require(c.bath_temperature_k > 0.0, "bath.temperature_k must be > 0");
    require(c.grid_start_hz > 0.0, "run.grid_start_hz must be > 0");
    require(c.grid_stop_hz > c.grid_start_hz,
            "run.grid_stop_hz must exceed run.grid_start_hz");
    require(c.grid_points >= 16, "run.grid_points must be >= 16");
}

}  // namespace

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto& key : kDoubleKeys) k.emplace_back(key.name);
        k.emplace_back(kGridPointsKey);
        k.emplace_back(kSeedKey);
        std::sort(k.begin(), k.end());
        return k;
    }();
    return keys;
}

RunConfig parse_config(std::string_view text) {
    std::map<std::string, std::pair<std::string, int>> raw;

    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto eol = text.find('\n', pos);
        std::string_view line = text.substr(
            pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw config_error("line " + std::to_string(line_no) +
                               ": expected 'key = value'");
        const std::string key{trim(line.substr(0, eq))};
        const std::string value{trim(line.substr(eq + 1))};
        if (key.empty() || value.empty())
            throw config_error("line " + std::to_string(line_no) +
                               ": expected 'key = value'");
        const auto& keys = config_keys();
        if (!std::binary_search(keys.begin(), keys.end(), key))
            throw config_error("line " + std::to_string(line_no) +
                               ": unknown key '" + key + "'");
        if (!raw.emplace(key, std::make_pair(value, line_no)).second)
            throw config_error("line " + std::to_string(line_no) +
                               ": duplicate key '" + key + "'");
    }

    std::string missing;
    for (const auto& key : config_keys()) {
        if (raw.find(key) == raw.end()) {
            if (!missing.empty()) missing += ", ";
            missing += key;
        }
    }
    if (!missing.empty())
        throw config_error("missing required keys: " + missing);

    RunConfig c;
    for (const auto& key : kDoubleKeys) {
        const auto& [token, line] = raw.at(key.name);
        c.*key.member = parse_double(token, line);
    }
    {
        const auto& [token, line] = raw.at(kGridPointsKey);
        const double v = parse_double(token, line);
        if (v != std::floor(v) || std::abs(v) > 1e9)
            throw config_error("line " + std::to_string(line) + ": " +
                               kGridPointsKey + " must be an integer");
        c.grid_points = static_cast<long>(v);
    }
    {
        const auto& [token, line] = raw.at(kSeedKey);
        std::uint64_t seed = 0;
        const auto* begin = token.data();
        const auto* end = token.data() + token.size();
        const auto [ptr, err] = std::from_chars(begin, end, seed);
        if (err != std::errc{} || ptr != end)
            throw config_error("line " + std::to_string(line) + ": " +
                               kSeedKey + " must be an unsigned integer");
        c.seed = seed;
    }

    validate(c);
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw config_error("cannot read config file " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

std::string serialize_config(const RunConfig& config) {
    std::ostringstream out;
    const auto emit = [&out](const char* key, double value) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g", value);
        out << key << " = " << buf << "\n";
    };
    for (const auto& key : kDoubleKeys) emit(key.name, config.*key.member);
    out << kGridPointsKey << " = " << config.grid_points << "\n";
    out << kSeedKey << " = " << config.seed << "\n";
    return out.str();
}

RunConfig with_key_value(const RunConfig& config, const std::string& key,
                         double value) {
    RunConfig c = config;
    bool found = false;
    for (const auto& k : kDoubleKeys) {
        if (key == k.name) {
            if (!std::isfinite(value))
                throw config_error(key + " must be finite");
            c.*k.member = value;
            found = true;
            break;
        }
    }
    if (!found && key == kGridPointsKey) {
        if (value != std::floor(value) || std::abs(value) > 1e9)
            throw config_error(std::string(kGridPointsKey) +
                               " must be an integer");
        c.grid_points = static_cast<long>(value);
        found = true;
    }
    if (!found && key == kSeedKey) {
        if (value != std::floor(value) || value < 0.0 || value > 1e18)
            throw config_error(std::string(kSeedKey) +
                               " must be an unsigned integer");
        c.seed = static_cast<std::uint64_t>(value);
        found = true;
    }
    if (!found) throw config_error("unknown config key '" + key + "'");
    validate(c);
    return c;
}

OpticalParams optical_from(const RunConfig& config) {
    return derive_optical_params(config.cavity_length_m, config.cavity_finesse,
                                 config.cavity_wavelength_m);
}

MechanicalParams mechanical_from(const RunConfig& config) {
    return derive_mechanical_params(kTwoPi * config.mirror_f_m_hz,
                                    config.mirror_mass_kg, config.mirror_q);
}

DriveState drive_from(const RunConfig& config, const OpticalParams& optical) {
    return derive_drive_state(optical, config.drive_power_w,
                              config.drive_detuning_over_gamma);
}

BathParams bath_from(const RunConfig& config) {
    return derive_bath_params(config.bath_temperature_k);
}

std::vector<double> grid_from(const RunConfig& config) {
    return make_linear_grid(kTwoPi * config.grid_start_hz,
                            kTwoPi * config.grid_stop_hz,
                            static_cast<std::size_t>(config.grid_points));
}

ProtocolConfig protocol_from(const RunConfig& config) {
    ProtocolConfig p;
    p.optical = optical_from(config);
    p.mech = mechanical_from(config);
    p.drive = drive_from(config, p.optical);
    p.bath = bath_from(config);
    p.sweep_grid = grid_from(config);
    p.signal_level_db = config.signal_level_db;
    p.drift_hz_per_min = config.drift_hz_per_min;
    return p;
}

}  // namespace omsim
