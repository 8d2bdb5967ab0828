#ifndef OMSIM_CONFIG_HPP
#define OMSIM_CONFIG_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "omsim/lab.hpp"
#include "omsim/params.hpp"

namespace omsim {

// Flat key-value run configuration. All keys are required; units are
// spelled out in the key names and converted to internal angular SI at
// this boundary only.
struct RunConfig {
    double cavity_length_m = 0.0;
    double cavity_finesse = 0.0;
    double cavity_wavelength_m = 0.0;
    double mirror_f_m_hz = 0.0;
    double mirror_mass_kg = 0.0;
    double mirror_q = 0.0;
    double drive_power_w = 0.0;
    double drive_detuning_over_gamma = 0.0;
    double bath_temperature_k = 0.0;
    double grid_start_hz = 0.0;
    double grid_stop_hz = 0.0;
    long grid_points = 0;
    std::uint64_t seed = 0;
    double signal_level_db = 0.0;
    double drift_hz_per_min = 0.0;

    bool operator==(const RunConfig&) const = default;
};

// Strict parser: one `key = value` per line, `#` comments, unknown and
// duplicate keys rejected with line numbers, missing keys reported all
// at once, range violations named per key.
RunConfig parse_config(std::string_view text);

RunConfig load_config(const std::string& path);

// Canonical text form; parse(serialize(c)) == c for any valid config.
std::string serialize_config(const RunConfig& config);

// List of recognized keys, usable as sweep targets.
const std::vector<std::string>& config_keys();

// Overwrites one key in a config, re-validating the result.
RunConfig with_key_value(const RunConfig& config, const std::string& key,
                         double value);

OpticalParams optical_from(const RunConfig& config);
MechanicalParams mechanical_from(const RunConfig& config);
DriveState drive_from(const RunConfig& config, const OpticalParams& optical);
BathParams bath_from(const RunConfig& config);
std::vector<double> grid_from(const RunConfig& config);
ProtocolConfig protocol_from(const RunConfig& config);

}  // namespace omsim

#endif
