#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "round/attack.hpp"
#include "round/beaconing.hpp"
#include "round/detection.hpp"
#include "round/mobility.hpp"

namespace roundsim {

/// Full experiment description. Loaded from flat key=value text; every field
/// has a validated default. Speeds enter in mph and are stored in m/s.
struct ScenarioConfig {
    ScenarioKind scenario = ScenarioKind::Urban;
    double road_length_m = 6000.0;
    int lanes = 2;
    std::uint32_t n_vehicles = 500;
    double speed_min = mph_to_mps(30.0);  // m/s
    double speed_max = mph_to_mps(45.0);  // m/s
    double s_max = mph_to_mps(45.0);      // m/s
    double rho_max = 0.15;                // vehicles per meter per lane
    double beacon_interval_ms = 100.0;
    std::uint32_t beacon_size_bytes = 300;
    double sim_time_s = 700.0;
    double density_window_m = 1000.0;
    double accel_limit_mps2 = 3.0;
    double epsilon_sigma = 1e-6;  // m/s; below this sigma the test degenerates to all-accept
    std::uint32_t warmup_rounds = 2;
    AttackConfig attack;
    ChannelModel channel;
    FogModel fog;
    std::uint64_t seed = 1;

    RoadNetwork road() const;
    double beacon_interval_s() const { return beacon_interval_ms / 1000.0; }
    std::uint32_t rounds() const {
        return static_cast<std::uint32_t>(sim_time_s / beacon_interval_s() + 1e-9);
    }

    void validate() const;  // throws ConfigError
};

/// Highway preset: 60-70 mph band, 70 mph free flow, slightly lossier channel.
ScenarioConfig highway_defaults();
ScenarioConfig urban_defaults();

/// Parse flat key=value text ('#' starts a comment). Unknown keys, malformed
/// values, and range violations raise ConfigError naming the key. An empty
/// file yields the all-defaults urban scenario.
ScenarioConfig parse_config(std::string_view text);

/// parse_config over the contents of a file. Throws ConfigError when the
/// file cannot be read.
ScenarioConfig load_config(const std::string& path);

const char* to_string(ScenarioKind kind);

}  // namespace roundsim
