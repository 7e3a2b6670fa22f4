#include "round/beaconing.hpp"

#include <bit>
#include <cmath>
#include <cstring>

#include "round/errors.hpp"
#include "round/kernels.hpp"

namespace roundsim {

void ChannelModel::validate() const {
    if (!(std::isfinite(tx_range_m) && tx_range_m > 0.0)) {
        throw InvalidParameter("transmission range must be positive");
    }
    if (capacity_per_slot < 1) {
        throw InvalidParameter("channel capacity must be at least 1 message per slot");
    }
    if (!(base_loss_prob >= 0.0 && base_loss_prob <= 1.0)) {
        throw InvalidParameter("base loss probability must lie in [0, 1]");
    }
    if (sch_reserve_per_slot >= capacity_per_slot) {
        throw InvalidParameter("SCH reserve must leave beacon capacity");
    }
}

std::vector<BeaconMessage> emit_beacons(const World& world, double t_s, const AttackConfig& attack,
                                        double beacon_interval_s, const GuardBroadcast* guard,
                                        double density_window_m) {
    if (!(std::isfinite(beacon_interval_s) && beacon_interval_s > 0.0)) {
        throw InvalidParameter("beacon interval must be positive");
    }
    const double slots = t_s / beacon_interval_s;
    if (std::fabs(slots - std::round(slots)) > 1e-6) {
        throw ContractViolation("beacons are emitted only on beacon-interval boundaries");
    }

    const std::size_t n = world.vehicles.size();
    std::vector<double> pos(n);
    for (std::size_t i = 0; i < n; ++i) {
        pos[i] = world.vehicles[i].pos;
    }

    const auto& ops = kernels::active();
    const auto t_ms = static_cast<std::uint64_t>(std::llround(t_s * 1000.0));

    std::vector<BeaconMessage> beacons(n);
    for (std::size_t i = 0; i < n; ++i) {
        const VehicleState& v = world.vehicles[i];
        BeaconMessage b;
        b.sender_id = v.id;
        b.timestamp_ms = t_ms;
        b.speed = static_cast<float>(v.speed);
        b.pos = v.pos;
        b.lane = v.lane;
        b.accel = static_cast<float>(v.accel);
        const std::size_t count = ops.count_within(pos.data(), n, v.pos, world.road.length_m,
                                                   density_window_m / 2.0);
        b.density = static_cast<float>(static_cast<double>(count) /
                                       (density_window_m * world.road.lanes));
        b = apply_attack(v, b, attack, t_s);
        if (guard != nullptr && guard->guard_id == v.id) {
            b.guard_payload = guard->payload;
        }
        beacons[i] = std::move(b);
    }
    return beacons;
}

Delivery deliver(std::span<const BeaconMessage> beacons, const World& world,
                 const ChannelModel& channel, Rng& rng) {
    channel.validate();

    const std::size_t n_rx = world.vehicles.size();
    const std::size_t n_tx = beacons.size();
    const std::uint32_t capacity = channel.capacity_per_slot - channel.sch_reserve_per_slot;

    std::vector<double> tx_pos(n_tx);
    for (std::size_t i = 0; i < n_tx; ++i) {
        tx_pos[i] = world.vehicles[world.index_of(beacons[i].sender_id)].pos;
    }

    Delivery out;
    out.inbox.resize(n_rx);
    std::vector<std::uint8_t> in_range(n_tx);
    const auto& ops = kernels::active();

    for (std::size_t r = 0; r < n_rx; ++r) {
        const VehicleState& rx = world.vehicles[r];
        ops.within_mask(tx_pos.data(), n_tx, rx.pos, world.road.length_m, channel.tx_range_m,
                        in_range.data());
        auto& inbox = out.inbox[r];
        for (std::size_t i = 0; i < n_tx; ++i) {
            if (beacons[i].sender_id == rx.id) {
                continue;  // a radio does not receive itself
            }
            out.ledger.sent += 1;
            if (in_range[i] == 0) {
                out.ledger.out_of_range += 1;
                continue;
            }
            if (channel.base_loss_prob > 0.0 && rng.bernoulli(channel.base_loss_prob)) {
                out.ledger.lost_base += 1;
                continue;
            }
            if (inbox.size() >= capacity) {
                out.ledger.lost_congestion += 1;
                continue;
            }
            inbox.push_back(static_cast<std::uint32_t>(i));
            out.ledger.delivered += 1;
        }
    }
    return out;
}

namespace {

// Frame layout (little-endian):
//   0       magic 0xB5
//   1       msg_type: 0 = vehicle, 1 = guard
//   2..5    sender_id   u32
//   6..13   timestamp   u64 (ms)
//   14..17  speed       f32
//   18..25  pos         f64
//   26      lane        u8
//   27..30  accel       f32
//   31..34  density     f32
//   guard only:
//   35      rlt         u8
//   36..37  rogue count u16
//   38..    rogue ids   u32 each
//   zero padding to byte 299

constexpr std::uint8_t kMagic = 0xB5;

void put_u16(std::uint8_t* p, std::uint16_t v) {
    p[0] = static_cast<std::uint8_t>(v);
    p[1] = static_cast<std::uint8_t>(v >> 8);
}

void put_u32(std::uint8_t* p, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) {
        p[i] = static_cast<std::uint8_t>(v >> (8 * i));
    }
}

void put_u64(std::uint8_t* p, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
        p[i] = static_cast<std::uint8_t>(v >> (8 * i));
    }
}

void put_f32(std::uint8_t* p, float v) { put_u32(p, std::bit_cast<std::uint32_t>(v)); }
void put_f64(std::uint8_t* p, double v) { put_u64(p, std::bit_cast<std::uint64_t>(v)); }

std::uint16_t get_u16(const std::uint8_t* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t get_u32(const std::uint8_t* p) {
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) {
        v = (v << 8) | p[i];
    }
    return v;
}

std::uint64_t get_u64(const std::uint8_t* p) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) {
        v = (v << 8) | p[i];
    }
    return v;
}

float get_f32(const std::uint8_t* p) { return std::bit_cast<float>(get_u32(p)); }
double get_f64(const std::uint8_t* p) { return std::bit_cast<double>(get_u64(p)); }

}  // namespace

std::array<std::uint8_t, kBeaconFrameBytes> encode_beacon(const BeaconMessage& b) {
    std::array<std::uint8_t, kBeaconFrameBytes> frame{};
    frame[0] = kMagic;
    frame[1] = b.guard_payload.has_value() ? 1 : 0;
    put_u32(&frame[2], b.sender_id);
    put_u64(&frame[6], b.timestamp_ms);
    put_f32(&frame[14], b.speed);
    put_f64(&frame[18], b.pos);
    frame[26] = b.lane;
    put_f32(&frame[27], b.accel);
    put_f32(&frame[31], b.density);
    if (b.guard_payload.has_value()) {
        const GuardPayload& gp = *b.guard_payload;
        if (gp.rogue_ids.size() > kMaxRogueIds) {
            throw CodecError("rogue id list exceeds the fixed frame cap of 64");
        }
        if ((gp.rlt == 1) != !gp.rogue_ids.empty() || gp.rlt > 1) {
            throw CodecError("rlt bit inconsistent with the rogue id list");
        }
        frame[35] = gp.rlt;
        put_u16(&frame[36], static_cast<std::uint16_t>(gp.rogue_ids.size()));
        for (std::size_t i = 0; i < gp.rogue_ids.size(); ++i) {
            put_u32(&frame[38 + 4 * i], gp.rogue_ids[i]);
        }
    }
    return frame;
}

BeaconMessage decode_beacon(std::span<const std::uint8_t> bytes) {
    if (bytes.size() != kBeaconFrameBytes) {
        throw CodecError("beacon frame must be exactly 300 bytes");
    }
    if (bytes[0] != kMagic) {
        throw CodecError("bad beacon magic byte");
    }
    const std::uint8_t msg_type = bytes[1];
    if (msg_type > 1) {
        throw CodecError("unknown beacon message type");
    }
    BeaconMessage b;
    b.sender_id = get_u32(&bytes[2]);
    b.timestamp_ms = get_u64(&bytes[6]);
    b.speed = get_f32(&bytes[14]);
    b.pos = get_f64(&bytes[18]);
    b.lane = bytes[26];
    b.accel = get_f32(&bytes[27]);
    b.density = get_f32(&bytes[31]);
    if (msg_type == 1) {
        GuardPayload gp;
        gp.rlt = bytes[35];
        if (gp.rlt > 1) {
            throw CodecError("rlt byte must be 0 or 1");
        }
        const std::uint16_t count = get_u16(&bytes[36]);
        if (count > kMaxRogueIds) {
            throw CodecError("rogue id count exceeds the fixed frame cap of 64");
        }
        if ((gp.rlt == 1) != (count > 0)) {
            throw CodecError("rlt bit inconsistent with the rogue id list");
        }
        gp.rogue_ids.resize(count);
        for (std::uint16_t i = 0; i < count; ++i) {
            gp.rogue_ids[i] = get_u32(&bytes[38 + 4 * i]);
        }
        b.guard_payload = std::move(gp);
    }
    return b;
}

}  // namespace roundsim
