#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "round/beaconing.hpp"
#include "round/mobility.hpp"
#include "round/rng.hpp"

namespace roundsim {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

/// Width used when unrolling lanes into the plane for election geometry.
inline constexpr double kLaneWidthM = 3.5;

/// Outcome of guard election: the honest vehicle closest to the regional
/// centroid, with ties broken by a seeded draw.
struct GuardSelection {
    std::uint32_t guard_id = 0;
    Point2 centroid;
    bool tie_broken = false;
};

/// Mean density, mean speed, and population standard deviation of one
/// round's received speeds.
struct SpeedAggregate {
    std::size_t n = 0;
    double rho_avg = 0.0;
    double s_avg = 0.0;
    double sigma = 0.0;
};

enum class Verdict : std::uint8_t { Accept, Reject };

struct DetectionReport {
    std::uint32_t guard_id = 0;
    SpeedAggregate aggregate;
    std::vector<std::pair<std::uint32_t, Verdict>> verdicts;  // ascending sender id
    std::vector<std::uint32_t> flagged_ids;                   // ascending; the REJECT senders
    std::uint8_t rlt = 0;  // 1 iff flagged_ids is non-empty
    double processing_time_s = 0.0;
};

/// Processing-latency model of the dynamic fog layer: pooling every OBU
/// gives the guard throughput that grows with the vehicle count.
struct FogModel {
    double per_obu_rate = 1000.0;  // messages per second one OBU can process
    double gamma = 0.8;            // pooling efficiency exponent, (0, 1]
    double alpha_s = 0.0;          // fixed overhead

    void validate() const;  // throws InvalidParameter
};

/// Per-axis arithmetic mean. Throws InvalidParameter on an empty list.
Point2 centroid(std::span<const Point2> points);

/// Maps a ring coordinate onto the circle the ring road describes in the
/// plane, with a small radial offset per lane.
Point2 ring_to_plane(const RoadNetwork& road, double pos, std::uint8_t lane);

/// Indices of all points at the minimum squared distance from c (exact
/// float ties), ascending.
std::vector<std::size_t> nearest_indices(std::span<const Point2> points, Point2 c);

/// Elect the guard: centroid over every vehicle, argmin over honest
/// vehicles, seeded uniform tie-break. Throws NoQuorum when fewer than two
/// vehicles exist and NoEligibleGuard when every vehicle is rogue.
GuardSelection select_guard(const World& world, Rng& rng);

/// Eqs. of the speed/density aggregation: mean density, mean speed, and the
/// population (1/N) standard deviation over the deduplicated senders.
/// Duplicate senders collapse to their latest timestamp. Throws NoQuorum
/// when fewer than two distinct senders remain.
SpeedAggregate aggregate(std::span<const BeaconMessage> beacons);

/// Accept sender i iff s_avg - sigma < S_i < s_avg + sigma (strict bounds;
/// boundary speeds reject). When sigma < epsilon_sigma there is no
/// dispersion, hence no outliers: everyone is accepted.
std::vector<std::pair<std::uint32_t, Verdict>> hypothesis_test(
    std::span<const std::pair<std::uint32_t, double>> speeds, const SpeedAggregate& agg,
    double epsilon_sigma = 1e-6);

/// One full detection round over the guard's inbox: aggregate, test each
/// sender, collect flagged ids, set the result bit, and model the fog
/// processing time for |inbox| messages.
DetectionReport detect(const World& world, const GuardSelection& guard,
                       std::span<const BeaconMessage> inbox, const FogModel& fog,
                       double epsilon_sigma = 1e-6);

/// alpha + m / (per_obu_rate * n^gamma): non-decreasing in the message
/// count, sublinear in the vehicle count when gamma < 1.
double fog_processing_time(std::size_t m, std::size_t n_vehicles, const FogModel& fog);

/// The guard's next beacon: kinematics from the guard's state, payload from
/// the report. Throws CodecError when the flagged list exceeds the frame cap.
BeaconMessage build_guard_beacon(const DetectionReport& report, const VehicleState& guard_state,
                                 double t_s);

}  // namespace roundsim
