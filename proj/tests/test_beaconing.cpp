#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "round/beaconing.hpp"
#include "round/errors.hpp"
#include "round/mobility.hpp"

using namespace roundsim;

namespace {

BeaconMessage random_beacon(std::mt19937_64& gen, bool guard) {
    const auto u01 = [&gen] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
    BeaconMessage b;
    b.sender_id = static_cast<std::uint32_t>(gen());
    b.timestamp_ms = gen() % 1000000;
    b.speed = static_cast<float>(u01() * 40.0);
    b.pos = u01() * 6000.0;
    b.lane = static_cast<std::uint8_t>(gen() % 4);
    b.accel = static_cast<float>(u01() * 6.0 - 3.0);
    b.density = static_cast<float>(u01() * 0.15);
    if (guard) {
        GuardPayload gp;
        const auto count = static_cast<std::size_t>(gen() % (kMaxRogueIds + 1));
        for (std::size_t i = 0; i < count; ++i) {
            gp.rogue_ids.push_back(static_cast<std::uint32_t>(gen()));
        }
        gp.rlt = gp.rogue_ids.empty() ? 0 : 1;
        b.guard_payload = std::move(gp);
    }
    return b;
}

World cluster_world(std::size_t n, double spacing, double length = 10000.0) {
    World w;
    w.road.length_m = length;
    w.road.lanes = 2;
    w.road.s_max = 31.3;
    for (std::size_t i = 0; i < n; ++i) {
        w.vehicles.push_back({static_cast<std::uint32_t>(i + 1), spacing * i,
                              static_cast<std::uint8_t>(i % 2), 20.0, 0.0, false});
    }
    return w;
}

}  // namespace

TEST_CASE("every encoding is exactly 300 bytes and round-trips") {
    std::mt19937_64 gen(99);
    for (int i = 0; i < 1000; ++i) {
        const BeaconMessage b = random_beacon(gen, i % 3 == 0);
        const auto frame = encode_beacon(b);
        static_assert(frame.size() == 300);
        CHECK(decode_beacon(frame) == b);
    }
}

TEST_CASE("guard payload region matches the declared layout") {
    BeaconMessage b;
    b.sender_id = 42;
    b.guard_payload = GuardPayload{1, {7, 9, 11}};
    const auto frame = encode_beacon(b);

    CHECK(frame[0] == 0xB5);
    CHECK(frame[1] == 1);
    CHECK(frame[35] == 1);                       // rlt
    CHECK((frame[36] | (frame[37] << 8)) == 3);  // count
    CHECK(frame[38] == 7);
    CHECK(frame[42] == 9);
    CHECK(frame[46] == 11);
    // 1 + 2 + 12 = 15 payload bytes starting at 35; all zero afterwards.
    for (std::size_t i = 50; i < frame.size(); ++i) {
        CHECK(frame[i] == 0);
    }
}

TEST_CASE("decode rejects malformed frames") {
    const BeaconMessage b;
    auto frame = encode_beacon(b);

    std::vector<std::uint8_t> short_frame(frame.begin(), frame.end() - 1);
    CHECK_THROWS_AS(decode_beacon(short_frame), CodecError);

    auto bad_magic = frame;
    bad_magic[0] = 0x00;
    CHECK_THROWS_AS(decode_beacon(bad_magic), CodecError);

    auto bad_type = frame;
    bad_type[1] = 7;
    CHECK_THROWS_AS(decode_beacon(bad_type), CodecError);

    BeaconMessage g;
    g.guard_payload = GuardPayload{1, {1, 2}};
    auto guard_frame = encode_beacon(g);
    guard_frame[36] = 65;  // count beyond the cap
    guard_frame[37] = 0;
    CHECK_THROWS_AS(decode_beacon(guard_frame), CodecError);

    auto bad_rlt = encode_beacon(g);
    bad_rlt[35] = 0;  // rlt says clean but ids are present
    CHECK_THROWS_AS(decode_beacon(bad_rlt), CodecError);
}

TEST_CASE("encode rejects oversized or inconsistent payloads") {
    BeaconMessage b;
    GuardPayload gp;
    gp.rlt = 1;
    gp.rogue_ids.assign(65, 1);
    b.guard_payload = gp;
    CHECK_THROWS_AS(encode_beacon(b), CodecError);

    b.guard_payload = GuardPayload{0, {3}};
    CHECK_THROWS_AS(encode_beacon(b), CodecError);
}

TEST_CASE("emit produces one beacon per vehicle on the interval") {
    const World w = cluster_world(5, 100.0);
    AttackConfig attack;
    const auto beacons = emit_beacons(w, 0.1, attack);
    REQUIRE(beacons.size() == 5);
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(beacons[i].sender_id == w.vehicles[i].id);
        CHECK(beacons[i].speed == 20.0f);
        CHECK(beacons[i].timestamp_ms == 100);
        CHECK_FALSE(beacons[i].guard_payload.has_value());
    }
    CHECK_THROWS_AS(emit_beacons(w, 0.05, attack), ContractViolation);
}

TEST_CASE("emit falsifies rogue beacons and tags the guard") {
    World w = cluster_world(4, 50.0);
    w.vehicles[2].is_rogue = true;
    w.vehicles[2].speed = 28.0;
    AttackConfig attack;
    attack.false_speed = 4.5;

    GuardBroadcast guard;
    guard.guard_id = w.vehicles[1].id;
    guard.payload = GuardPayload{1, {w.vehicles[2].id}};

    const auto beacons = emit_beacons(w, 0.2, attack, 0.1, &guard);
    CHECK(beacons[2].speed == 4.5f);
    CHECK(beacons[2].pos == w.vehicles[2].pos);
    REQUIRE(beacons[1].guard_payload.has_value());
    CHECK(beacons[1].guard_payload->rogue_ids == std::vector<std::uint32_t>{w.vehicles[2].id});
    CHECK_FALSE(beacons[0].guard_payload.has_value());
}

TEST_CASE("out of range is not a loss event") {
    World w = cluster_world(2, 600.0);  // 600 m apart on a 10 km ring
    ChannelModel ch;
    ch.tx_range_m = 500.0;
    ch.base_loss_prob = 0.0;
    ch.capacity_per_slot = 1000;
    Rng rng(1);
    const auto beacons = emit_beacons(w, 0.1, AttackConfig{});
    const Delivery d = deliver(beacons, w, ch, rng);
    CHECK(d.inbox[0].empty());
    CHECK(d.inbox[1].empty());
    CHECK(d.ledger.sent == 2);
    CHECK(d.ledger.out_of_range == 2);
    CHECK(d.ledger.lost() == 0);
    CHECK(d.ledger.delivered == 0);
}

TEST_CASE("in range with a clean channel always delivers") {
    World w = cluster_world(2, 100.0);
    ChannelModel ch;
    ch.base_loss_prob = 0.0;
    ch.capacity_per_slot = 1000;
    Rng rng(1);
    const Delivery d = deliver(emit_beacons(w, 0.1, AttackConfig{}), w, ch, rng);
    CHECK(d.ledger.delivered == 2);
    CHECK(d.ledger.lost() == 0);
    REQUIRE(d.inbox[0].size() == 1);
    CHECK(d.inbox[0][0] == 1);  // index of the other vehicle's beacon
}

TEST_CASE("capacity overflow counts as congestion loss") {
    // 201 vehicles packed together: every receiver is offered 200 beacons.
    World w = cluster_world(201, 2.0);
    ChannelModel ch;
    ch.base_loss_prob = 0.0;
    ch.capacity_per_slot = 150;
    Rng rng(7);
    const Delivery d = deliver(emit_beacons(w, 0.1, AttackConfig{}), w, ch, rng);
    for (const auto& inbox : d.inbox) {
        CHECK(inbox.size() == 150);
    }
    CHECK(d.ledger.lost_congestion == 201ull * 50);
    CHECK(d.ledger.delivered == 201ull * 150);
    CHECK(d.ledger.sent == 201ull * 200);
    CHECK(d.ledger.out_of_range == 0);
}

TEST_CASE("frame conservation holds for random channels") {
    std::mt19937_64 gen(2024);
    for (int iter = 0; iter < 30; ++iter) {
        const std::size_t n = 2 + gen() % 60;
        World w = cluster_world(n, 90.0, 4000.0);
        ChannelModel ch;
        ch.tx_range_m = 200.0 + static_cast<double>(gen() % 2000);
        ch.capacity_per_slot = 1 + static_cast<std::uint32_t>(gen() % 64);
        ch.base_loss_prob = static_cast<double>(gen() % 100) / 200.0;
        Rng rng(gen());
        const Delivery d = deliver(emit_beacons(w, 0.1, AttackConfig{}), w, ch, rng);

        CHECK(d.ledger.sent == n * (n - 1));
        CHECK(d.ledger.sent ==
              d.ledger.delivered + d.ledger.lost() + d.ledger.out_of_range);
        CHECK(d.ledger.delivered + d.ledger.lost() == d.ledger.eligible());
        for (const auto& inbox : d.inbox) {
            CHECK(inbox.size() <= ch.capacity_per_slot);
        }
    }
}

TEST_CASE("sch reserve shrinks the usable capacity") {
    World w = cluster_world(10, 5.0);
    ChannelModel ch;
    ch.base_loss_prob = 0.0;
    ch.capacity_per_slot = 8;
    ch.sch_reserve_per_slot = 5;
    Rng rng(3);
    const Delivery d = deliver(emit_beacons(w, 0.1, AttackConfig{}), w, ch, rng);
    for (const auto& inbox : d.inbox) {
        CHECK(inbox.size() == 3);
    }

    ch.sch_reserve_per_slot = 8;
    CHECK_THROWS_AS(ch.validate(), InvalidParameter);
}

TEST_CASE("channel model validation") {
    ChannelModel ch;
    ch.tx_range_m = 0.0;
    CHECK_THROWS_AS(ch.validate(), InvalidParameter);
    ch = {};
    ch.capacity_per_slot = 0;
    CHECK_THROWS_AS(ch.validate(), InvalidParameter);
    ch = {};
    ch.base_loss_prob = 1.5;
    CHECK_THROWS_AS(ch.validate(), InvalidParameter);
}
