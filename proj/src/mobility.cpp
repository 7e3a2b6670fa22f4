#include "round/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "round/errors.hpp"
#include "round/kernels.hpp"

namespace roundsim {

void RoadNetwork::validate() const {
    if (!(std::isfinite(length_m) && length_m > 0.0)) {
        throw InvalidParameter("road length must be positive");
    }
    if (lanes < 1) {
        throw InvalidParameter("lane count must be at least 1");
    }
    if (!(std::isfinite(s_max) && s_max > 0.0)) {
        throw InvalidParameter("free-flow speed must be positive");
    }
    if (!(std::isfinite(rho_max) && rho_max > 0.0)) {
        throw InvalidParameter("jam density must be positive");
    }
}

RoadNetwork urban_road() {
    RoadNetwork r;
    r.kind = ScenarioKind::Urban;
    r.s_max = mph_to_mps(45.0);
    return r;
}

RoadNetwork highway_road() {
    RoadNetwork r;
    r.kind = ScenarioKind::Highway;
    r.s_max = mph_to_mps(70.0);
    return r;
}

std::size_t World::index_of(std::uint32_t id) const {
    const auto it = std::lower_bound(vehicles.begin(), vehicles.end(), id,
                                     [](const VehicleState& v, std::uint32_t x) { return v.id < x; });
    if (it == vehicles.end() || it->id != id) {
        throw NotFound("unknown vehicle id " + std::to_string(id));
    }
    return static_cast<std::size_t>(it - vehicles.begin());
}

double ring_distance(double a, double b, double length) {
    const double d = std::fabs(a - b);
    return std::min(d, length - d);
}

double greenshield_speed(double rho, double s_max, double rho_max) {
    if (!(std::isfinite(rho) && rho >= 0.0)) {
        throw InvalidParameter("density must be finite and non-negative");
    }
    if (!(std::isfinite(s_max) && s_max > 0.0) || !(std::isfinite(rho_max) && rho_max > 0.0)) {
        throw InvalidParameter("s_max and rho_max must be finite and positive");
    }
    const double s = s_max - (rho / rho_max) * s_max;
    return std::min(s_max, std::max(0.0, s));
}

namespace {

std::vector<double> positions_of(const World& world) {
    std::vector<double> pos(world.vehicles.size());
    for (std::size_t i = 0; i < world.vehicles.size(); ++i) {
        pos[i] = world.vehicles[i].pos;
    }
    return pos;
}

double density_from_count(std::size_t count, double window_m, int lanes) {
    return static_cast<double>(count) / (window_m * static_cast<double>(lanes));
}

}  // namespace

double local_density(std::uint32_t vehicle_id, const World& world, double window_m) {
    if (!(std::isfinite(window_m) && window_m > 0.0)) {
        throw InvalidParameter("density window must be positive");
    }
    const std::size_t idx = world.index_of(vehicle_id);
    const std::vector<double> pos = positions_of(world);
    const std::size_t count = kernels::active().count_within(
        pos.data(), pos.size(), pos[idx], world.road.length_m, window_m / 2.0);
    return density_from_count(count, window_m, world.road.lanes);
}

void step(World& world, double dt, double accel_limit, double density_window_m) {
    if (!(std::isfinite(dt) && dt > 0.0)) {
        throw InvalidParameter("dt must be positive");
    }
    if (!(std::isfinite(accel_limit) && accel_limit > 0.0)) {
        throw InvalidParameter("acceleration limit must be positive");
    }
    world.road.validate();

    const std::size_t n = world.vehicles.size();
    const double length = world.road.length_m;
    const std::vector<double> pos = positions_of(world);

    // Target speeds from the density snapshot at the start of the step.
    std::vector<double> rho(n);
    const auto& ops = kernels::active();
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t count =
            ops.count_within(pos.data(), n, pos[i], length, density_window_m / 2.0);
        rho[i] = density_from_count(count, density_window_m, world.road.lanes);
    }
    std::vector<double> target(n);
    ops.greenshield(rho.data(), n, world.road.s_max, world.road.rho_max, target.data());

    const double dv_cap = accel_limit * dt;
    for (std::size_t i = 0; i < n; ++i) {
        VehicleState& v = world.vehicles[i];
        // Move with the speed carried into the step, then relax it.
        double p = std::fmod(v.pos + v.speed * dt, length);
        if (p < 0.0) {
            p += length;
        }
        v.pos = p;
        const double dv = std::clamp(target[i] - v.speed, -dv_cap, dv_cap);
        const double new_speed = std::clamp(v.speed + dv, 0.0, world.road.s_max);
        v.accel = (new_speed - v.speed) / dt;
        v.speed = new_speed;
    }
    world.clock += dt;
}

World spawn_vehicles(const RoadNetwork& road, std::uint32_t n, double speed_lo, double speed_hi,
                     double rogue_fraction, Rng& rng) {
    road.validate();
    if (n < 1) {
        throw InvalidParameter("vehicle count must be at least 1");
    }
    if (!(rogue_fraction >= 0.0 && rogue_fraction <= 1.0)) {
        throw InvalidParameter("rogue fraction must lie in [0, 1]");
    }
    if (!(std::isfinite(speed_lo) && std::isfinite(speed_hi)) || speed_lo < 0.0 ||
        speed_hi < speed_lo || speed_hi > road.s_max) {
        throw InvalidParameter("speed band must satisfy 0 <= lo <= hi <= s_max");
    }

    World world;
    world.road = road;
    world.vehicles.resize(n);

    // Stratified placement: one vehicle per equal slice, jittered inside it.
    const double slice = road.length_m / static_cast<double>(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        VehicleState& v = world.vehicles[i];
        v.id = i + 1;
        double p = (static_cast<double>(i) + rng.uniform01()) * slice;
        if (p >= road.length_m) {
            p = 0.0;
        }
        v.pos = p;
        v.lane = static_cast<std::uint8_t>(i % static_cast<std::uint32_t>(road.lanes));
    }
    for (auto& v : world.vehicles) {
        v.speed = rng.uniform(speed_lo, speed_hi);
    }

    const auto n_rogue =
        static_cast<std::uint32_t>(std::llround(rogue_fraction * static_cast<double>(n)));
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    for (std::uint32_t i = 0; i < n_rogue; ++i) {
        const auto j = i + static_cast<std::uint32_t>(rng.below(n - i));
        std::swap(order[i], order[j]);
        world.vehicles[order[i]].is_rogue = true;
    }
    return world;
}

}  // namespace roundsim
