#include "round/detection.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "round/errors.hpp"
#include "round/kernels.hpp"

namespace roundsim {

void FogModel::validate() const {
    if (!(std::isfinite(per_obu_rate) && per_obu_rate > 0.0)) {
        throw InvalidParameter("per-OBU rate must be positive");
    }
    if (!(gamma > 0.0 && gamma <= 1.0)) {
        throw InvalidParameter("fog scaling exponent must lie in (0, 1]");
    }
    if (!(std::isfinite(alpha_s) && alpha_s >= 0.0)) {
        throw InvalidParameter("fog fixed overhead must be non-negative");
    }
}

Point2 centroid(std::span<const Point2> points) {
    if (points.empty()) {
        throw InvalidParameter("centroid of an empty point set");
    }
    std::vector<double> xs(points.size());
    std::vector<double> ys(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        xs[i] = points[i].x;
        ys[i] = points[i].y;
    }
    const auto& ops = kernels::active();
    const auto n = static_cast<double>(points.size());
    return {ops.sum(xs.data(), xs.size()) / n, ops.sum(ys.data(), ys.size()) / n};
}

Point2 ring_to_plane(const RoadNetwork& road, double pos, std::uint8_t lane) {
    const double r = road.length_m / (2.0 * std::numbers::pi) + lane * kLaneWidthM;
    const double theta = 2.0 * std::numbers::pi * pos / road.length_m;
    return {r * std::cos(theta), r * std::sin(theta)};
}

std::vector<std::size_t> nearest_indices(std::span<const Point2> points, Point2 c) {
    if (points.empty()) {
        throw InvalidParameter("argmin over an empty point set");
    }
    std::vector<double> xs(points.size());
    std::vector<double> ys(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        xs[i] = points[i].x;
        ys[i] = points[i].y;
    }
    std::vector<double> d2(points.size());
    kernels::active().dist2(xs.data(), ys.data(), points.size(), c.x, c.y, d2.data());

    const double best = *std::min_element(d2.begin(), d2.end());
    std::vector<std::size_t> ties;
    for (std::size_t i = 0; i < d2.size(); ++i) {
        if (d2[i] == best) {
            ties.push_back(i);
        }
    }
    return ties;
}

GuardSelection select_guard(const World& world, Rng& rng) {
    if (world.vehicles.size() < 2) {
        throw NoQuorum("guard election needs at least two vehicles");
    }
    std::vector<Point2> all(world.vehicles.size());
    for (std::size_t i = 0; i < world.vehicles.size(); ++i) {
        all[i] = ring_to_plane(world.road, world.vehicles[i].pos, world.vehicles[i].lane);
    }
    const Point2 c = centroid(all);

    // The guard is assumed trustworthy, so rogues are not candidates.
    std::vector<Point2> eligible;
    std::vector<std::uint32_t> eligible_ids;
    for (std::size_t i = 0; i < world.vehicles.size(); ++i) {
        if (!world.vehicles[i].is_rogue) {
            eligible.push_back(all[i]);
            eligible_ids.push_back(world.vehicles[i].id);
        }
    }
    if (eligible.empty()) {
        throw NoEligibleGuard("no honest vehicle available for guard duty");
    }

    const std::vector<std::size_t> ties = nearest_indices(eligible, c);
    std::size_t pick = ties.front();
    if (ties.size() > 1) {
        pick = ties[rng.below(ties.size())];
    }
    return {eligible_ids[pick], c, ties.size() > 1};
}

namespace {

struct SenderSample {
    std::uint32_t id;
    std::uint64_t timestamp_ms;
    double speed;
    double density;
};

// Collapse duplicates to the latest timestamp (later list position wins a
// timestamp tie) and order by sender id.
std::vector<SenderSample> dedupe_by_sender(std::span<const BeaconMessage> beacons) {
    std::vector<SenderSample> samples;
    samples.reserve(beacons.size());
    for (const auto& b : beacons) {
        samples.push_back({b.sender_id, b.timestamp_ms, static_cast<double>(b.speed),
                           static_cast<double>(b.density)});
    }
    std::stable_sort(samples.begin(), samples.end(), [](const auto& a, const auto& b) {
        if (a.id != b.id) return a.id < b.id;
        return a.timestamp_ms < b.timestamp_ms;
    });
    std::vector<SenderSample> out;
    for (const auto& s : samples) {
        if (!out.empty() && out.back().id == s.id) {
            out.back() = s;
        } else {
            out.push_back(s);
        }
    }
    return out;
}

SpeedAggregate aggregate_samples(const std::vector<SenderSample>& samples) {
    if (samples.size() < 2) {
        throw NoQuorum("speed aggregation needs at least two distinct senders");
    }
    std::vector<double> speeds(samples.size());
    std::vector<double> densities(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        speeds[i] = samples[i].speed;
        densities[i] = samples[i].density;
    }
    const auto& ops = kernels::active();
    const auto n = static_cast<double>(samples.size());
    SpeedAggregate agg;
    agg.n = samples.size();
    agg.rho_avg = ops.sum(densities.data(), densities.size()) / n;
    agg.s_avg = ops.sum(speeds.data(), speeds.size()) / n;
    agg.sigma = std::sqrt(ops.sum_sq_dev(speeds.data(), speeds.size(), agg.s_avg) / n);
    return agg;
}

}  // namespace

SpeedAggregate aggregate(std::span<const BeaconMessage> beacons) {
    return aggregate_samples(dedupe_by_sender(beacons));
}

std::vector<std::pair<std::uint32_t, Verdict>> hypothesis_test(
    std::span<const std::pair<std::uint32_t, double>> speeds, const SpeedAggregate& agg,
    double epsilon_sigma) {
    std::vector<std::pair<std::uint32_t, Verdict>> verdicts;
    verdicts.reserve(speeds.size());
    if (agg.sigma < epsilon_sigma) {
        // No dispersion means no outliers; H0 stands for everyone.
        for (const auto& [id, s] : speeds) {
            verdicts.emplace_back(id, Verdict::Accept);
        }
        return verdicts;
    }
    std::vector<double> values(speeds.size());
    for (std::size_t i = 0; i < speeds.size(); ++i) {
        values[i] = speeds[i].second;
    }
    std::vector<std::uint8_t> accept(speeds.size());
    kernels::active().band_accept(values.data(), values.size(), agg.s_avg - agg.sigma,
                                  agg.s_avg + agg.sigma, accept.data());
    for (std::size_t i = 0; i < speeds.size(); ++i) {
        verdicts.emplace_back(speeds[i].first, accept[i] ? Verdict::Accept : Verdict::Reject);
    }
    return verdicts;
}

DetectionReport detect(const World& world, const GuardSelection& guard,
                       std::span<const BeaconMessage> inbox, const FogModel& fog,
                       double epsilon_sigma) {
    const auto samples = dedupe_by_sender(inbox);
    DetectionReport report;
    report.guard_id = guard.guard_id;
    report.aggregate = aggregate_samples(samples);

    std::vector<std::pair<std::uint32_t, double>> speeds;
    speeds.reserve(samples.size());
    for (const auto& s : samples) {
        speeds.emplace_back(s.id, s.speed);
    }
    report.verdicts = hypothesis_test(speeds, report.aggregate, epsilon_sigma);
    for (const auto& [id, v] : report.verdicts) {
        if (v == Verdict::Reject) {
            report.flagged_ids.push_back(id);
        }
    }
    report.rlt = report.flagged_ids.empty() ? 0 : 1;
    report.processing_time_s = fog_processing_time(inbox.size(), world.vehicles.size(), fog);
    return report;
}

double fog_processing_time(std::size_t m, std::size_t n_vehicles, const FogModel& fog) {
    fog.validate();
    if (n_vehicles < 1) {
        throw InvalidParameter("fog layer needs at least one vehicle");
    }
    return fog.alpha_s + static_cast<double>(m) /
                             (fog.per_obu_rate * std::pow(static_cast<double>(n_vehicles), fog.gamma));
}

BeaconMessage build_guard_beacon(const DetectionReport& report, const VehicleState& guard_state,
                                 double t_s) {
    if (report.flagged_ids.size() > kMaxRogueIds) {
        throw CodecError("flagged id list exceeds the fixed frame cap of 64");
    }
    BeaconMessage b;
    b.sender_id = guard_state.id;
    b.timestamp_ms = static_cast<std::uint64_t>(std::llround(t_s * 1000.0));
    b.speed = static_cast<float>(guard_state.speed);
    b.pos = guard_state.pos;
    b.lane = guard_state.lane;
    b.accel = static_cast<float>(guard_state.accel);
    b.guard_payload = GuardPayload{report.rlt, report.flagged_ids};
    return b;
}

}  // namespace roundsim
