#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "round/config.hpp"
#include "round/detection.hpp"
#include "round/metrics.hpp"

namespace roundsim {

/// One post-warm-up round of the run: who guarded, what the test said, and
/// the channel accounting for the slot.
struct RoundTrace {
    std::uint32_t round = 0;  // 0-based round index within the run
    bool quorum = false;      // detection ran (guard elected, >= 2 senders)
    std::uint32_t guard_id = 0;
    double s_avg = 0.0;
    double sigma = 0.0;
    std::vector<std::uint32_t> flagged;
    double processing_time_s = 0.0;
    std::uint64_t app_ignored = 0;  // delivered beacons dropped at the application layer
    SlotLedger slot;
};

struct RunResult {
    ScenarioConfig config;
    MetricsReport metrics;
    std::vector<RoundTrace> trace;  // rounds() - warmup_rounds entries
};

/// Run one scenario end to end. Fully deterministic in (config, seed).
/// Throws NoQuorum only when the world starts with fewer than two vehicles.
RunResult run_scenario(const ScenarioConfig& config);

enum class SweepAxis { NVehicles, RogueFraction };

SweepAxis sweep_axis_from_name(const std::string& name);  // throws ConfigError

/// Metrics averaged over the repeats of one sweep point. Rates that were
/// undefined in every repeat stay undefined.
struct MeanMetrics {
    std::optional<double> tpr;
    std::optional<double> fpr;
    double plr = 0.0;
    double avg_throughput_bps = 0.0;
    double overhead_bytes = 0.0;
    double overhead_ratio = 0.0;
    double processing_time_s = 0.0;
};

struct SweepPoint {
    double value = 0.0;
    ScenarioConfig config;               // config of the first repeat (its seed included)
    std::vector<MetricsReport> repeats;  // one report per repeat
    MeanMetrics mean;
};

/// One point per axis value, ordered by value. Repeat r of point i runs with
/// seed mix_seed(mix_seed(base_seed, i), r), where i indexes the caller's
/// value order, so appending values or repeats never changes earlier runs.
std::vector<SweepPoint> sweep(const ScenarioConfig& base, SweepAxis axis,
                              std::span<const double> values, int repeats = 1);

enum class EmitFormat { Csv, Json };

/// CSV columns: scenario,n_vehicles,rogue_fraction,seed,tpr,fpr,plr,
/// throughput_bps,overhead_bytes,overhead_ratio,processing_time_s.
/// Undefined rates serialize as empty cells. JSON mirrors the same keys.
void emit_run(const RunResult& result, EmitFormat format, std::ostream& out);
void emit_sweep(std::span<const SweepPoint> points, EmitFormat format, std::ostream& out);

std::string run_to_string(const RunResult& result, EmitFormat format);
std::string sweep_to_string(std::span<const SweepPoint> points, EmitFormat format);

}  // namespace roundsim
