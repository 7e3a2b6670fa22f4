#include "round/attack.hpp"

#include <cmath>

#include "round/beaconing.hpp"
#include "round/errors.hpp"

namespace roundsim {

void AttackConfig::validate() const {
    if (!(rogue_fraction >= 0.0 && rogue_fraction <= 1.0)) {
        throw InvalidParameter("rogue fraction must lie in [0, 1]");
    }
    if (!(std::isfinite(false_speed) && false_speed >= 0.0)) {
        throw InvalidParameter("false speed must be non-negative");
    }
    if (!(std::isfinite(onset_s) && onset_s >= 0.0)) {
        throw InvalidParameter("attack onset must be non-negative");
    }
    if (!(std::isfinite(jitter_s) && jitter_s >= 0.0)) {
        throw InvalidParameter("attack jitter must be non-negative");
    }
    if (!(std::isfinite(ramp_s) && ramp_s >= 0.0)) {
        throw InvalidParameter("attack ramp must be non-negative");
    }
}

double attack_onset_for(const AttackConfig& cfg, std::uint32_t vehicle_id) {
    if (cfg.coordinated || cfg.jitter_s <= 0.0) {
        return cfg.onset_s;
    }
    // Keyed off the vehicle id only, so the schedule is stable across rounds.
    const std::uint64_t h = splitmix64(0x61747461636bULL ^ vehicle_id);
    const double u = static_cast<double>(h >> 11) * 0x1.0p-53;
    return cfg.onset_s + u * cfg.jitter_s;
}

BeaconMessage apply_attack(const VehicleState& vehicle, const BeaconMessage& beacon,
                           const AttackConfig& cfg, double t_s) {
    if (!vehicle.is_rogue) {
        return beacon;
    }
    const double onset = attack_onset_for(cfg, vehicle.id);
    if (t_s < onset) {
        return beacon;
    }
    BeaconMessage out = beacon;
    if (cfg.ramp_s > 0.0 && t_s < onset + cfg.ramp_s) {
        // Gradual mode: slide from the true speed down to the false value.
        const double w = (t_s - onset) / cfg.ramp_s;
        out.speed = static_cast<float>(vehicle.speed + (cfg.false_speed - vehicle.speed) * w);
    } else {
        out.speed = static_cast<float>(cfg.false_speed);
    }
    return out;
}

}  // namespace roundsim
