#pragma once

#include <cstdint>

#include "round/mobility.hpp"

namespace roundsim {

struct BeaconMessage;

/// False-information attack: rogues keep driving normally but broadcast a
/// low speed to fake congestion or an accident ahead.
struct AttackConfig {
    double rogue_fraction = 0.1;
    double false_speed = 4.5;  // m/s, roughly 10 mph
    double onset_s = 0.0;
    bool coordinated = true;  // all rogues switch at onset_s
    double jitter_s = 0.0;    // per-rogue onset spread when uncoordinated
    double ramp_s = 0.0;      // 0 = sudden drop; > 0 ramps linearly to false_speed

    void validate() const;  // throws InvalidParameter
};

/// Effective onset for one rogue: onset_s, plus a deterministic per-id
/// jitter in [0, jitter_s) when the attack is uncoordinated.
double attack_onset_for(const AttackConfig& cfg, std::uint32_t vehicle_id);

/// Falsify the speed field of a rogue's beacon once its onset has passed.
/// Honest beacons pass through untouched; no other field changes. Pure and
/// idempotent (the falsified value is recomputed from the vehicle's true
/// speed, never from the beacon).
BeaconMessage apply_attack(const VehicleState& vehicle, const BeaconMessage& beacon,
                           const AttackConfig& cfg, double t_s);

}  // namespace roundsim
