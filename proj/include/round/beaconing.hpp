#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "round/attack.hpp"
#include "round/mobility.hpp"
#include "round/rng.hpp"

namespace roundsim {

inline constexpr std::size_t kBeaconFrameBytes = 300;  // fixed frame, both message types
inline constexpr std::size_t kMaxRogueIds = 64;        // rogue-id list cap within the frame

/// Extra fields carried only by the guard's beacon: the hypothesis-test
/// outcome bit and the flagged vehicle ids. rlt is 1 iff rogue_ids is
/// non-empty.
struct GuardPayload {
    std::uint8_t rlt = 0;
    std::vector<std::uint32_t> rogue_ids;

    bool operator==(const GuardPayload&) const = default;
};

struct BeaconMessage {
    std::uint32_t sender_id = 0;
    std::uint64_t timestamp_ms = 0;
    float speed = 0.0f;  // m/s, possibly falsified
    double pos = 0.0;    // meters along the ring
    std::uint8_t lane = 0;
    float accel = 0.0f;    // m/s^2
    float density = 0.0f;  // vehicles per meter per lane, sender-local window
    std::optional<GuardPayload> guard_payload;

    bool operator==(const BeaconMessage&) const = default;
};

/// Range- and capacity-limited broadcast channel.
struct ChannelModel {
    double tx_range_m = 500.0;
    std::uint32_t capacity_per_slot = 125;  // messages per 100 ms slot per receiver
    double base_loss_prob = 0.005;
    std::uint32_t sch_reserve_per_slot = 0;  // capacity withheld for SCH/IP background traffic

    void validate() const;  // throws InvalidParameter
};

/// The payload the current guard piggybacks on its next regular beacon.
struct GuardBroadcast {
    std::uint32_t guard_id = 0;
    GuardPayload payload;
};

/// One beacon per vehicle at time t (must be a multiple of the beacon
/// interval, else ContractViolation). Rogue beacons pass through
/// apply_attack; the guard's beacon carries the latest completed payload.
std::vector<BeaconMessage> emit_beacons(const World& world, double t_s, const AttackConfig& attack,
                                        double beacon_interval_s = 0.1,
                                        const GuardBroadcast* guard = nullptr,
                                        double density_window_m = 1000.0);

/// Per-slot channel accounting over sender-receiver pair opportunities.
/// sent = delivered + lost + out_of_range holds for every slot; out-of-range
/// pairs are geometry, not loss events.
struct SlotLedger {
    std::uint64_t sent = 0;
    std::uint64_t delivered = 0;
    std::uint64_t lost_base = 0;        // random channel loss
    std::uint64_t lost_congestion = 0;  // receiver inbox capacity exhausted
    std::uint64_t out_of_range = 0;

    std::uint64_t lost() const { return lost_base + lost_congestion; }
    std::uint64_t eligible() const { return sent - out_of_range; }

    SlotLedger& operator+=(const SlotLedger& o) {
        sent += o.sent;
        delivered += o.delivered;
        lost_base += o.lost_base;
        lost_congestion += o.lost_congestion;
        out_of_range += o.out_of_range;
        return *this;
    }
};

struct Delivery {
    /// Per receiver (world order): indices into the offered beacon list.
    std::vector<std::vector<std::uint32_t>> inbox;
    SlotLedger ledger;
};

/// Broadcast one slot: a beacon reaches receiver r iff the ring distance
/// sender->r is within tx_range, the sender is not r, the seeded loss coin
/// passes, and r's inbox still has capacity (excess counts as congestion).
Delivery deliver(std::span<const BeaconMessage> beacons, const World& world,
                 const ChannelModel& channel, Rng& rng);

/// Fixed 300-byte little-endian frame; see README for the layout. Throws
/// CodecError when the rogue-id list exceeds the frame cap or the payload
/// bit is inconsistent.
std::array<std::uint8_t, kBeaconFrameBytes> encode_beacon(const BeaconMessage& b);

/// Inverse of encode_beacon on its image. Throws CodecError on wrong length,
/// bad magic or type byte, an oversized id list, or an inconsistent rlt bit.
BeaconMessage decode_beacon(std::span<const std::uint8_t> bytes);

}  // namespace roundsim
