#include "round/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <vector>

#include "round/errors.hpp"

namespace roundsim {

RoadNetwork ScenarioConfig::road() const {
    RoadNetwork r;
    r.length_m = road_length_m;
    r.lanes = lanes;
    r.kind = scenario;
    r.s_max = s_max;
    r.rho_max = rho_max;
    return r;
}

void ScenarioConfig::validate() const {
    const auto fail = [](const std::string& msg) { throw ConfigError(msg); };
    try {
        road().validate();
        attack.validate();
        channel.validate();
        fog.validate();
    } catch (const InvalidParameter& e) {
        fail(e.what());
    }
    if (n_vehicles < 1) fail("n_vehicles: must be at least 1");
    if (!(speed_min >= 0.0 && speed_min <= speed_max)) {
        fail("speed band: need 0 <= speed_min_mph <= speed_max_mph");
    }
    if (speed_max > s_max + 1e-9) fail("speed band: speed_max_mph exceeds s_max_mph");
    if (!(std::isfinite(beacon_interval_ms) && beacon_interval_ms > 0.0)) {
        fail("beacon_interval_ms: must be positive");
    }
    if (beacon_size_bytes != kBeaconFrameBytes) {
        fail("beacon_size_bytes: the frame is fixed at 300 bytes");
    }
    if (!(std::isfinite(sim_time_s) && sim_time_s > 0.0)) fail("sim_time_s: must be positive");
    if (!(std::isfinite(density_window_m) && density_window_m > 0.0)) {
        fail("density_window_m: must be positive");
    }
    if (!(std::isfinite(accel_limit_mps2) && accel_limit_mps2 > 0.0)) {
        fail("accel_limit_mps2: must be positive");
    }
    if (!(std::isfinite(epsilon_sigma) && epsilon_sigma >= 0.0)) {
        fail("epsilon_sigma: must be non-negative");
    }
}

ScenarioConfig urban_defaults() { return {}; }

ScenarioConfig highway_defaults() {
    ScenarioConfig cfg;
    cfg.scenario = ScenarioKind::Highway;
    cfg.speed_min = mph_to_mps(60.0);
    cfg.speed_max = mph_to_mps(70.0);
    cfg.s_max = mph_to_mps(70.0);
    cfg.channel.base_loss_prob = 0.01;  // high mobility costs a few more packets
    return cfg;
}

const char* to_string(ScenarioKind kind) {
    return kind == ScenarioKind::Urban ? "urban" : "highway";
}

namespace {

struct KeyValue {
    std::string key;
    std::string value;
    int line;
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return "";
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<KeyValue> tokenize(std::string_view text) {
    std::vector<KeyValue> pairs;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) {
            raw.erase(hash);
        }
        const std::string line = trim(raw);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        }
        KeyValue kv{trim(line.substr(0, eq)), trim(line.substr(eq + 1)), line_no};
        if (kv.key.empty()) {
            throw ConfigError("line " + std::to_string(line_no) + ": empty key");
        }
        pairs.push_back(std::move(kv));
    }
    return pairs;
}

double parse_double(const KeyValue& kv) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(kv.value, &used);
    } catch (const std::exception&) {
        throw ConfigError(kv.key + ": not a number: '" + kv.value + "'");
    }
    if (used != kv.value.size()) {
        throw ConfigError(kv.key + ": not a number: '" + kv.value + "'");
    }
    return v;
}

std::uint64_t parse_u64(const KeyValue& kv) {
    if (!kv.value.empty() && kv.value[0] == '-') {
        throw ConfigError(kv.key + ": must be non-negative");
    }
    std::size_t used = 0;
    std::uint64_t v = 0;
    try {
        v = std::stoull(kv.value, &used);
    } catch (const std::exception&) {
        throw ConfigError(kv.key + ": not an integer: '" + kv.value + "'");
    }
    if (used != kv.value.size()) {
        throw ConfigError(kv.key + ": not an integer: '" + kv.value + "'");
    }
    return v;
}

bool parse_bool(const KeyValue& kv) {
    if (kv.value == "true" || kv.value == "1") return true;
    if (kv.value == "false" || kv.value == "0") return false;
    throw ConfigError(kv.key + ": expected true/false");
}

}  // namespace

ScenarioConfig parse_config(std::string_view text) {
    const std::vector<KeyValue> pairs = tokenize(text);

    // The scenario key decides the preset first; remaining keys override it
    // regardless of their position in the file.
    ScenarioConfig cfg = urban_defaults();
    for (const auto& kv : pairs) {
        if (kv.key == "scenario") {
            if (kv.value == "urban") {
                cfg = urban_defaults();
            } else if (kv.value == "highway") {
                cfg = highway_defaults();
            } else {
                throw ConfigError("scenario: expected urban or highway");
            }
        }
    }

    using Setter = std::function<void(ScenarioConfig&, const KeyValue&)>;
    static const std::map<std::string, Setter> setters = {
        {"scenario", [](ScenarioConfig&, const KeyValue&) { /* handled above */ }},
        {"road_length_m", [](ScenarioConfig& c, const KeyValue& kv) { c.road_length_m = parse_double(kv); }},
        {"lanes", [](ScenarioConfig& c, const KeyValue& kv) { c.lanes = static_cast<int>(parse_u64(kv)); }},
        {"n_vehicles", [](ScenarioConfig& c, const KeyValue& kv) { c.n_vehicles = static_cast<std::uint32_t>(parse_u64(kv)); }},
        {"speed_min_mph", [](ScenarioConfig& c, const KeyValue& kv) { c.speed_min = mph_to_mps(parse_double(kv)); }},
        {"speed_max_mph", [](ScenarioConfig& c, const KeyValue& kv) { c.speed_max = mph_to_mps(parse_double(kv)); }},
        {"s_max_mph", [](ScenarioConfig& c, const KeyValue& kv) { c.s_max = mph_to_mps(parse_double(kv)); }},
        {"rho_max", [](ScenarioConfig& c, const KeyValue& kv) { c.rho_max = parse_double(kv); }},
        {"beacon_interval_ms", [](ScenarioConfig& c, const KeyValue& kv) { c.beacon_interval_ms = parse_double(kv); }},
        {"beacon_size_bytes", [](ScenarioConfig& c, const KeyValue& kv) { c.beacon_size_bytes = static_cast<std::uint32_t>(parse_u64(kv)); }},
        {"tx_range_m", [](ScenarioConfig& c, const KeyValue& kv) { c.channel.tx_range_m = parse_double(kv); }},
        {"channel_capacity_per_slot", [](ScenarioConfig& c, const KeyValue& kv) { c.channel.capacity_per_slot = static_cast<std::uint32_t>(parse_u64(kv)); }},
        {"base_loss_prob", [](ScenarioConfig& c, const KeyValue& kv) { c.channel.base_loss_prob = parse_double(kv); }},
        {"sch_reserve_per_slot", [](ScenarioConfig& c, const KeyValue& kv) { c.channel.sch_reserve_per_slot = static_cast<std::uint32_t>(parse_u64(kv)); }},
        {"sim_time_s", [](ScenarioConfig& c, const KeyValue& kv) { c.sim_time_s = parse_double(kv); }},
        {"density_window_m", [](ScenarioConfig& c, const KeyValue& kv) { c.density_window_m = parse_double(kv); }},
        {"accel_limit_mps2", [](ScenarioConfig& c, const KeyValue& kv) { c.accel_limit_mps2 = parse_double(kv); }},
        {"epsilon_sigma", [](ScenarioConfig& c, const KeyValue& kv) { c.epsilon_sigma = parse_double(kv); }},
        {"warmup_rounds", [](ScenarioConfig& c, const KeyValue& kv) { c.warmup_rounds = static_cast<std::uint32_t>(parse_u64(kv)); }},
        {"seed", [](ScenarioConfig& c, const KeyValue& kv) { c.seed = parse_u64(kv); }},
        {"rogue_fraction", [](ScenarioConfig& c, const KeyValue& kv) { c.attack.rogue_fraction = parse_double(kv); }},
        {"false_speed_mph", [](ScenarioConfig& c, const KeyValue& kv) { c.attack.false_speed = mph_to_mps(parse_double(kv)); }},
        {"attack_onset_s", [](ScenarioConfig& c, const KeyValue& kv) { c.attack.onset_s = parse_double(kv); }},
        {"attack_coordinated", [](ScenarioConfig& c, const KeyValue& kv) { c.attack.coordinated = parse_bool(kv); }},
        {"attack_jitter_s", [](ScenarioConfig& c, const KeyValue& kv) { c.attack.jitter_s = parse_double(kv); }},
        {"attack_ramp_s", [](ScenarioConfig& c, const KeyValue& kv) { c.attack.ramp_s = parse_double(kv); }},
        {"fog_per_obu_rate", [](ScenarioConfig& c, const KeyValue& kv) { c.fog.per_obu_rate = parse_double(kv); }},
        {"fog_gamma", [](ScenarioConfig& c, const KeyValue& kv) { c.fog.gamma = parse_double(kv); }},
        {"fog_alpha_s", [](ScenarioConfig& c, const KeyValue& kv) { c.fog.alpha_s = parse_double(kv); }},
    };

    for (const auto& kv : pairs) {
        const auto it = setters.find(kv.key);
        if (it == setters.end()) {
            throw ConfigError("unknown key '" + kv.key + "' (line " + std::to_string(kv.line) + ")");
        }
        it->second(cfg, kv);
    }
    cfg.validate();
    return cfg;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open config file: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

}  // namespace roundsim
