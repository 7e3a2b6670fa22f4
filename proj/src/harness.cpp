#include "round/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "round/errors.hpp"

namespace roundsim {

namespace {

using Json = nlohmann::ordered_json;

std::vector<BeaconMessage> materialize_inbox(const Delivery& delivery, std::size_t receiver_idx,
                                             std::span<const BeaconMessage> beacons) {
    std::vector<BeaconMessage> inbox;
    inbox.reserve(delivery.inbox[receiver_idx].size() + 1);
    for (const auto idx : delivery.inbox[receiver_idx]) {
        inbox.push_back(beacons[idx]);
    }
    return inbox;
}

}  // namespace

RunResult run_scenario(const ScenarioConfig& config) {
    config.validate();

    Rng rng(config.seed);
    World world = spawn_vehicles(config.road(), config.n_vehicles, config.speed_min,
                                 config.speed_max, config.attack.rogue_fraction, rng);
    if (world.vehicles.size() < 2) {
        throw NoQuorum("a run needs at least two vehicles");
    }

    const GroundTruth truth = ground_truth(world);
    const double interval_s = config.beacon_interval_s();
    const std::uint32_t rounds = config.rounds();
    const std::size_t n = world.vehicles.size();

    RunResult result;
    result.config = config;
    if (rounds > config.warmup_rounds) {
        result.trace.reserve(rounds - config.warmup_rounds);
    }

    // Receiver-side containment state: senders each vehicle has been told to
    // ignore. The guard's detector keeps reading the raw channel inbox so it
    // can re-validate flagged vehicles every round.
    std::vector<std::vector<bool>> ignoring(n, std::vector<bool>(n, false));

    GuardBroadcast pending;  // latest completed detection, rides the next guard beacon
    bool have_pending = false;

    SlotLedger total;
    std::set<std::uint32_t> flagged_union;
    double processing_sum = 0.0;
    std::uint64_t detection_rounds = 0;
    std::uint64_t guard_payload_bytes = 0;
    std::uint64_t beacons_sent = 0;
    std::uint32_t counted_rounds = 0;

    for (std::uint32_t k = 0; k < rounds; ++k) {
        step(world, interval_s, config.accel_limit_mps2, config.density_window_m);
        const double t = static_cast<double>(k + 1) * interval_s;

        const std::vector<BeaconMessage> beacons =
            emit_beacons(world, t, config.attack, interval_s, have_pending ? &pending : nullptr,
                         config.density_window_m);
        Delivery delivery = deliver(beacons, world, config.channel, rng);

        const SlotLedger& slot = delivery.ledger;
        if (slot.sent != slot.delivered + slot.lost() + slot.out_of_range) {
            throw Error("slot conservation violated");  // internal invariant
        }

        // Application layer: drop beacons from ignored senders, then learn
        // new flags from any guard beacon heard this slot.
        std::uint64_t app_ignored = 0;
        std::vector<std::uint32_t> announced;
        for (std::size_t r = 0; r < n; ++r) {
            for (const auto idx : delivery.inbox[r]) {
                const BeaconMessage& b = beacons[idx];
                const std::size_t sender_idx = world.index_of(b.sender_id);
                if (ignoring[r][sender_idx]) {
                    ++app_ignored;
                    continue;
                }
                if (b.guard_payload.has_value()) {
                    for (const auto rid : b.guard_payload->rogue_ids) {
                        announced.push_back(static_cast<std::uint32_t>(r));
                        announced.push_back(rid);
                    }
                }
            }
        }
        for (std::size_t i = 0; i + 1 < announced.size(); i += 2) {
            try {
                ignoring[announced[i]][world.index_of(announced[i + 1])] = true;
            } catch (const NotFound&) {
                // a stale id in a payload is ignored
            }
        }

        RoundTrace row;
        row.round = k;
        row.slot = slot;
        row.app_ignored = app_ignored;

        try {
            const GuardSelection sel = select_guard(world, rng);
            std::vector<BeaconMessage> inbox =
                materialize_inbox(delivery, world.index_of(sel.guard_id), beacons);
            inbox.push_back(beacons[world.index_of(sel.guard_id)]);  // the guard hears itself
            const DetectionReport report =
                detect(world, sel, inbox, config.fog, config.epsilon_sigma);

            row.quorum = true;
            row.guard_id = report.guard_id;
            row.s_avg = report.aggregate.s_avg;
            row.sigma = report.aggregate.sigma;
            row.flagged = report.flagged_ids;
            row.processing_time_s = report.processing_time_s;

            pending.guard_id = report.guard_id;
            pending.payload = GuardPayload{report.rlt, report.flagged_ids};
            have_pending = true;
        } catch (const NoQuorum&) {
            row.quorum = false;
        } catch (const NoEligibleGuard&) {
            row.quorum = false;
        }

        if (k >= config.warmup_rounds) {
            ++counted_rounds;
            total += slot;
            beacons_sent += beacons.size();
            for (const auto& b : beacons) {
                if (b.guard_payload.has_value()) {
                    guard_payload_bytes +=
                        1 + 2 + 4 * static_cast<std::uint64_t>(b.guard_payload->rogue_ids.size());
                }
            }
            if (row.quorum) {
                ++detection_rounds;
                processing_sum += row.processing_time_s;
                flagged_union.insert(row.flagged.begin(), row.flagged.end());
            }
            result.trace.push_back(std::move(row));
        }
    }

    const std::vector<std::uint32_t> flagged(flagged_union.begin(), flagged_union.end());
    MetricsReport& m = result.metrics;
    m.tpr = tpr(flagged, truth);
    m.fpr = fpr(flagged, truth);
    m.plr = plr(total);
    const double counted_time = counted_rounds * interval_s;
    m.avg_throughput_bps = counted_time > 0.0 ? avg_throughput(total, counted_time) : 0.0;
    m.overhead_bytes = guard_payload_bytes;
    const std::uint64_t total_bytes = beacons_sent * kBeaconFrameBytes;
    m.overhead_ratio =
        total_bytes == 0 ? 0.0
                         : static_cast<double>(guard_payload_bytes) / static_cast<double>(total_bytes);
    m.processing_time_s = detection_rounds == 0 ? 0.0 : processing_sum / detection_rounds;
    return result;
}

SweepAxis sweep_axis_from_name(const std::string& name) {
    if (name == "n_vehicles") {
        return SweepAxis::NVehicles;
    }
    if (name == "rogue_fraction") {
        return SweepAxis::RogueFraction;
    }
    throw ConfigError("unknown sweep axis '" + name + "' (expected n_vehicles or rogue_fraction)");
}

namespace {

ScenarioConfig config_for_point(const ScenarioConfig& base, SweepAxis axis, double value) {
    ScenarioConfig cfg = base;
    switch (axis) {
        case SweepAxis::NVehicles: {
            const double r = std::round(value);
            if (!(std::fabs(value - r) < 1e-9) || r < 1.0) {
                throw ConfigError("n_vehicles sweep values must be positive integers");
            }
            cfg.n_vehicles = static_cast<std::uint32_t>(r);
            break;
        }
        case SweepAxis::RogueFraction:
            if (!(value >= 0.0 && value <= 1.0)) {
                throw ConfigError("rogue_fraction sweep values must lie in [0, 1]");
            }
            cfg.attack.rogue_fraction = value;
            break;
    }
    return cfg;
}

MeanMetrics average(const std::vector<MetricsReport>& reports) {
    MeanMetrics mean;
    double tpr_sum = 0.0;
    double fpr_sum = 0.0;
    std::size_t tpr_n = 0;
    std::size_t fpr_n = 0;
    for (const auto& r : reports) {
        if (r.tpr.has_value()) {
            tpr_sum += *r.tpr;
            ++tpr_n;
        }
        if (r.fpr.has_value()) {
            fpr_sum += *r.fpr;
            ++fpr_n;
        }
        mean.plr += r.plr;
        mean.avg_throughput_bps += r.avg_throughput_bps;
        mean.overhead_bytes += static_cast<double>(r.overhead_bytes);
        mean.overhead_ratio += r.overhead_ratio;
        mean.processing_time_s += r.processing_time_s;
    }
    const auto n = static_cast<double>(reports.size());
    if (n > 0) {
        mean.plr /= n;
        mean.avg_throughput_bps /= n;
        mean.overhead_bytes /= n;
        mean.overhead_ratio /= n;
        mean.processing_time_s /= n;
    }
    if (tpr_n > 0) {
        mean.tpr = tpr_sum / static_cast<double>(tpr_n);
    }
    if (fpr_n > 0) {
        mean.fpr = fpr_sum / static_cast<double>(fpr_n);
    }
    return mean;
}

}  // namespace

std::vector<SweepPoint> sweep(const ScenarioConfig& base, SweepAxis axis,
                              std::span<const double> values, int repeats) {
    if (repeats < 1) {
        throw ConfigError("repeats must be at least 1");
    }
    std::vector<SweepPoint> points;
    points.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        SweepPoint point;
        point.value = values[i];
        const std::uint64_t point_seed = mix_seed(base.seed, i);
        for (int r = 0; r < repeats; ++r) {
            ScenarioConfig cfg = config_for_point(base, axis, values[i]);
            cfg.seed = mix_seed(point_seed, static_cast<std::uint64_t>(r));
            if (r == 0) {
                point.config = cfg;
            }
            point.repeats.push_back(run_scenario(cfg).metrics);
        }
        point.mean = average(point.repeats);
        points.push_back(std::move(point));
    }
    std::stable_sort(points.begin(), points.end(),
                     [](const SweepPoint& a, const SweepPoint& b) { return a.value < b.value; });
    return points;
}

namespace {

constexpr const char* kCsvHeader =
    "scenario,n_vehicles,rogue_fraction,seed,tpr,fpr,plr,throughput_bps,overhead_bytes,"
    "overhead_ratio,processing_time_s\n";

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

std::string fmt_rate(const std::optional<double>& v) {
    return v.has_value() ? fmt_double(*v) : std::string{};
}

void csv_row(std::ostream& out, const ScenarioConfig& cfg, const std::optional<double>& tpr_v,
             const std::optional<double>& fpr_v, double plr_v, double throughput,
             const std::string& overhead_bytes, double overhead_ratio_v, double processing) {
    out << to_string(cfg.scenario) << ',' << cfg.n_vehicles << ','
        << fmt_double(cfg.attack.rogue_fraction) << ',' << cfg.seed << ',' << fmt_rate(tpr_v)
        << ',' << fmt_rate(fpr_v) << ',' << fmt_double(plr_v) << ',' << fmt_double(throughput)
        << ',' << overhead_bytes << ',' << fmt_double(overhead_ratio_v) << ','
        << fmt_double(processing) << '\n';
}

Json config_json(const ScenarioConfig& cfg) {
    Json j;
    j["scenario"] = to_string(cfg.scenario);
    j["road_length_m"] = cfg.road_length_m;
    j["lanes"] = cfg.lanes;
    j["n_vehicles"] = cfg.n_vehicles;
    j["speed_min_mph"] = mps_to_mph(cfg.speed_min);
    j["speed_max_mph"] = mps_to_mph(cfg.speed_max);
    j["s_max_mph"] = mps_to_mph(cfg.s_max);
    j["rho_max"] = cfg.rho_max;
    j["beacon_interval_ms"] = cfg.beacon_interval_ms;
    j["beacon_size_bytes"] = cfg.beacon_size_bytes;
    j["tx_range_m"] = cfg.channel.tx_range_m;
    j["channel_capacity_per_slot"] = cfg.channel.capacity_per_slot;
    j["base_loss_prob"] = cfg.channel.base_loss_prob;
    j["sch_reserve_per_slot"] = cfg.channel.sch_reserve_per_slot;
    j["sim_time_s"] = cfg.sim_time_s;
    j["density_window_m"] = cfg.density_window_m;
    j["accel_limit_mps2"] = cfg.accel_limit_mps2;
    j["epsilon_sigma"] = cfg.epsilon_sigma;
    j["warmup_rounds"] = cfg.warmup_rounds;
    j["seed"] = cfg.seed;
    j["rogue_fraction"] = cfg.attack.rogue_fraction;
    j["false_speed_mph"] = mps_to_mph(cfg.attack.false_speed);
    j["attack_onset_s"] = cfg.attack.onset_s;
    j["attack_coordinated"] = cfg.attack.coordinated;
    j["attack_jitter_s"] = cfg.attack.jitter_s;
    j["attack_ramp_s"] = cfg.attack.ramp_s;
    j["fog_per_obu_rate"] = cfg.fog.per_obu_rate;
    j["fog_gamma"] = cfg.fog.gamma;
    j["fog_alpha_s"] = cfg.fog.alpha_s;
    return j;
}

void metrics_json(Json& j, const ScenarioConfig& cfg, const std::optional<double>& tpr_v,
                  const std::optional<double>& fpr_v, double plr_v, double throughput,
                  const Json& overhead_bytes, double overhead_ratio_v, double processing) {
    j["scenario"] = to_string(cfg.scenario);
    j["n_vehicles"] = cfg.n_vehicles;
    j["rogue_fraction"] = cfg.attack.rogue_fraction;
    j["seed"] = cfg.seed;
    j["tpr"] = tpr_v.has_value() ? Json(*tpr_v) : Json(nullptr);
    j["fpr"] = fpr_v.has_value() ? Json(*fpr_v) : Json(nullptr);
    j["plr"] = plr_v;
    j["throughput_bps"] = throughput;
    j["overhead_bytes"] = overhead_bytes;
    j["overhead_ratio"] = overhead_ratio_v;
    j["processing_time_s"] = processing;
}

Json slot_json(const SlotLedger& slot) {
    Json j;
    j["sent"] = slot.sent;
    j["delivered"] = slot.delivered;
    j["lost_base"] = slot.lost_base;
    j["lost_congestion"] = slot.lost_congestion;
    j["out_of_range"] = slot.out_of_range;
    return j;
}

Json trace_json(const RoundTrace& row) {
    Json j;
    j["round"] = row.round;
    j["quorum"] = row.quorum;
    if (row.quorum) {
        j["guard_id"] = row.guard_id;
        j["s_avg"] = row.s_avg;
        j["sigma"] = row.sigma;
        j["flagged"] = row.flagged;
        j["processing_time_s"] = row.processing_time_s;
    } else {
        j["guard_id"] = nullptr;
        j["s_avg"] = nullptr;
        j["sigma"] = nullptr;
        j["flagged"] = Json::array();
        j["processing_time_s"] = nullptr;
    }
    j["app_ignored"] = row.app_ignored;
    j["slot"] = slot_json(row.slot);
    return j;
}

}  // namespace

void emit_run(const RunResult& result, EmitFormat format, std::ostream& out) {
    const MetricsReport& m = result.metrics;
    if (format == EmitFormat::Csv) {
        out << kCsvHeader;
        csv_row(out, result.config, m.tpr, m.fpr, m.plr, m.avg_throughput_bps,
                std::to_string(m.overhead_bytes), m.overhead_ratio, m.processing_time_s);
        return;
    }
    Json j;
    metrics_json(j, result.config, m.tpr, m.fpr, m.plr, m.avg_throughput_bps,
                 Json(m.overhead_bytes), m.overhead_ratio, m.processing_time_s);
    j["config"] = config_json(result.config);
    Json trace = Json::array();
    for (const auto& row : result.trace) {
        trace.push_back(trace_json(row));
    }
    j["trace"] = std::move(trace);
    out << j.dump(2) << '\n';
}

void emit_sweep(std::span<const SweepPoint> points, EmitFormat format, std::ostream& out) {
    if (format == EmitFormat::Csv) {
        out << kCsvHeader;
        for (const auto& p : points) {
            csv_row(out, p.config, p.mean.tpr, p.mean.fpr, p.mean.plr, p.mean.avg_throughput_bps,
                    fmt_double(p.mean.overhead_bytes), p.mean.overhead_ratio,
                    p.mean.processing_time_s);
        }
        return;
    }
    Json rows = Json::array();
    for (const auto& p : points) {
        Json j;
        metrics_json(j, p.config, p.mean.tpr, p.mean.fpr, p.mean.plr, p.mean.avg_throughput_bps,
                     Json(p.mean.overhead_bytes), p.mean.overhead_ratio, p.mean.processing_time_s);
        Json reps = Json::array();
        for (const auto& r : p.repeats) {
            Json rj;
            rj["tpr"] = r.tpr.has_value() ? Json(*r.tpr) : Json(nullptr);
            rj["fpr"] = r.fpr.has_value() ? Json(*r.fpr) : Json(nullptr);
            rj["plr"] = r.plr;
            rj["throughput_bps"] = r.avg_throughput_bps;
            rj["overhead_bytes"] = r.overhead_bytes;
            rj["overhead_ratio"] = r.overhead_ratio;
            rj["processing_time_s"] = r.processing_time_s;
            reps.push_back(std::move(rj));
        }
        j["repeats"] = std::move(reps);
        rows.push_back(std::move(j));
    }
    out << rows.dump(2) << '\n';
}

std::string run_to_string(const RunResult& result, EmitFormat format) {
    std::ostringstream out;
    emit_run(result, format, out);
    return out.str();
}

std::string sweep_to_string(std::span<const SweepPoint> points, EmitFormat format) {
    std::ostringstream out;
    emit_sweep(points, format, out);
    return out.str();
}

}  // namespace roundsim
