#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "round/rng.hpp"
#include "round/units.hpp"

namespace roundsim {

enum class ScenarioKind { Urban, Highway };

/// Ring road. Vehicles live on a closed loop of `length_m` meters so the
/// population stays constant over a run; there is no entry or exit.
struct RoadNetwork {
    double length_m = 6000.0;
    int lanes = 2;
    ScenarioKind kind = ScenarioKind::Urban;
    double s_max = mph_to_mps(45.0);  // free-flow speed, m/s
    double rho_max = 0.15;            // jam density, vehicles per meter per lane

    void validate() const;  // throws InvalidParameter
};

RoadNetwork urban_road();
RoadNetwork highway_road();

struct VehicleState {
    std::uint32_t id = 0;
    double pos = 0.0;  // meters along the ring, [0, length)
    std::uint8_t lane = 0;
    double speed = 0.0;  // m/s
    double accel = 0.0;  // m/s^2
    bool is_rogue = false;  // ground truth, never visible to the detector
};

struct World {
    RoadNetwork road;
    std::vector<VehicleState> vehicles;  // ascending id
    double clock = 0.0;                  // seconds

    /// Index of the vehicle with the given id. Throws NotFound.
    std::size_t index_of(std::uint32_t id) const;
};

/// Shortest distance between two ring coordinates.
double ring_distance(double a, double b, double length);

/// Linear speed-density law: max(0, s_max - (rho / rho_max) * s_max),
/// clamped to [0, s_max]. Throws InvalidParameter on non-finite or negative
/// arguments.
double greenshield_speed(double rho, double s_max, double rho_max);

/// Vehicles per meter per lane inside the subject's communication window
/// (window/2 ahead plus window/2 behind, subject included, all lanes).
double local_density(std::uint32_t vehicle_id, const World& world, double window_m = 1000.0);

/// Advance one time step: every vehicle relaxes its speed toward the
/// Greenshield target for its local density, with acceleration bounded by
/// +-accel_limit; position advances by the speed the vehicle carried into
/// the step, wrapped around the ring. Rogues move exactly like honest
/// vehicles; the attack falsifies beacons, not motion.
void step(World& world, double dt, double accel_limit = 3.0, double density_window_m = 1000.0);

/// Populate a world: jittered-uniform (stratified) positions, round-robin
/// lanes, speeds uniform in [speed_lo, speed_hi] m/s, and exactly
/// round(rogue_fraction * n) vehicles marked rogue by a seeded draw.
World spawn_vehicles(const RoadNetwork& road, std::uint32_t n, double speed_lo, double speed_hi,
                     double rogue_fraction, Rng& rng);

}  // namespace roundsim
