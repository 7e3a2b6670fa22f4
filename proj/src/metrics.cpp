#include "round/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "round/errors.hpp"

namespace roundsim {

GroundTruth ground_truth(const World& world) {
    GroundTruth truth;
    for (const auto& v : world.vehicles) {
        (v.is_rogue ? truth.rogue_ids : truth.honest_ids).push_back(v.id);
    }
    return truth;
}

namespace {

std::size_t count_in(std::span<const std::uint32_t> flagged,
                     const std::vector<std::uint32_t>& sorted_ids) {
    std::size_t hits = 0;
    for (const auto id : flagged) {
        hits += std::binary_search(sorted_ids.begin(), sorted_ids.end(), id) ? 1 : 0;
    }
    return hits;
}

}  // namespace

std::optional<double> tpr(std::span<const std::uint32_t> flagged, const GroundTruth& truth) {
    if (truth.rogue_ids.empty()) {
        return std::nullopt;
    }
    return static_cast<double>(count_in(flagged, truth.rogue_ids)) /
           static_cast<double>(truth.rogue_ids.size());
}

std::optional<double> fpr(std::span<const std::uint32_t> flagged, const GroundTruth& truth) {
    if (truth.honest_ids.empty()) {
        return std::nullopt;
    }
    return static_cast<double>(count_in(flagged, truth.honest_ids)) /
           static_cast<double>(truth.honest_ids.size());
}

double plr(const SlotLedger& ledger) {
    const std::uint64_t eligible = ledger.eligible();
    if (eligible == 0) {
        return 0.0;
    }
    return static_cast<double>(ledger.lost()) / static_cast<double>(eligible);
}

double avg_throughput(const SlotLedger& ledger, double sim_time_s, std::size_t beacon_bytes) {
    if (!(std::isfinite(sim_time_s) && sim_time_s > 0.0)) {
        throw InvalidParameter("simulation time must be positive");
    }
    return static_cast<double>(ledger.delivered) * static_cast<double>(beacon_bytes) * 8.0 /
           sim_time_s;
}

OverheadResult overhead(std::span<const BeaconMessage> guard_beacons,
                        std::uint64_t total_beacons_sent) {
    OverheadResult out;
    for (const auto& b : guard_beacons) {
        if (!b.guard_payload.has_value()) {
            continue;
        }
        out.bytes += 1 + 2 + 4 * static_cast<std::uint64_t>(b.guard_payload->rogue_ids.size());
    }
    const std::uint64_t total_bytes = total_beacons_sent * kBeaconFrameBytes;
    out.ratio = total_bytes == 0 ? 0.0 : static_cast<double>(out.bytes) / static_cast<double>(total_bytes);
    return out;
}

double p_sysfail(std::uint64_t n_vehicles, std::uint64_t t_max, double d_f,
                 std::uint64_t k_threshold) {
    if (!(std::isfinite(d_f) && d_f >= 0.0 && d_f <= 1.0)) {
        throw InvalidParameter("per-trial failure probability must lie in [0, 1]");
    }
    if (n_vehicles == 0 || t_max == 0) {
        throw InvalidParameter("trial count basis must be at least 1");
    }
    const std::uint64_t n = n_vehicles * t_max;
    if (k_threshold > n) {
        throw InvalidParameter("threshold exceeds the trial count");
    }
    if (k_threshold == 0) {
        return 1.0;  // full-support sum
    }
    if (d_f == 0.0) {
        return 0.0;
    }
    if (d_f == 1.0) {
        return 1.0;
    }

    const auto nd = static_cast<double>(n);
    const double log_p = std::log(d_f);
    const double log_q = std::log1p(-d_f);
    const auto log_pmf = [&](std::uint64_t i) {
        const auto id = static_cast<double>(i);
        return std::lgamma(nd + 1.0) - std::lgamma(id + 1.0) - std::lgamma(nd - id + 1.0) +
               id * log_p + (nd - id) * log_q;
    };

    // Sum whichever tail is shorter; both stay in log space until the end.
    double tail = 0.0;
    if (n - k_threshold + 1 <= k_threshold) {
        for (std::uint64_t i = k_threshold; i <= n; ++i) {
            tail += std::exp(log_pmf(i));
        }
    } else {
        double lower = 0.0;
        for (std::uint64_t i = 0; i < k_threshold; ++i) {
            lower += std::exp(log_pmf(i));
        }
        tail = 1.0 - lower;
    }
    return std::clamp(tail, 0.0, 1.0);
}

}  // namespace roundsim
