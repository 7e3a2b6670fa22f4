#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "round/beaconing.hpp"
#include "round/mobility.hpp"

namespace roundsim {

/// Rogue/honest split of the vehicle population. The sets are disjoint and
/// together cover every id.
struct GroundTruth {
    std::vector<std::uint32_t> rogue_ids;   // ascending
    std::vector<std::uint32_t> honest_ids;  // ascending
};

GroundTruth ground_truth(const World& world);

struct MetricsReport {
    std::optional<double> tpr;  // undefined when no rogues exist
    std::optional<double> fpr;  // undefined when no honest vehicles exist
    double plr = 0.0;
    double avg_throughput_bps = 0.0;
    std::uint64_t overhead_bytes = 0;
    double overhead_ratio = 0.0;
    double processing_time_s = 0.0;  // mean modeled detection latency per round
};

/// Fraction of true rogues flagged. Undefined (not zero) without rogues.
std::optional<double> tpr(std::span<const std::uint32_t> flagged, const GroundTruth& truth);

/// Fraction of honest vehicles wrongly flagged. Undefined without honest
/// vehicles.
std::optional<double> fpr(std::span<const std::uint32_t> flagged, const GroundTruth& truth);

/// Lost over eligible offered messages; out-of-range pairs never enter the
/// denominator. Zero when nothing was offered.
double plr(const SlotLedger& ledger);

/// delivered * beacon_bytes * 8 / sim_time.
double avg_throughput(const SlotLedger& ledger, double sim_time_s,
                      std::size_t beacon_bytes = kBeaconFrameBytes);

struct OverheadResult {
    std::uint64_t bytes = 0;
    double ratio = 0.0;
};

/// Detection overhead: the guard-payload bytes (1 rlt + 2 count + 4 per id)
/// summed over the guard beacons, as absolute bytes and as a fraction of all
/// beacon bytes sent.
OverheadResult overhead(std::span<const BeaconMessage> guard_beacons,
                        std::uint64_t total_beacons_sent);

/// Upper tail P(X >= k_threshold) of X ~ Binomial(n_vehicles * t_max, d_f),
/// evaluated with log-space terms. k_threshold = 0 recovers the full-support
/// sum, which is exactly 1.
double p_sysfail(std::uint64_t n_vehicles, std::uint64_t t_max, double d_f,
                 std::uint64_t k_threshold);

}  // namespace roundsim
