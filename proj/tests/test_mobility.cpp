#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "round/errors.hpp"
#include "round/mobility.hpp"

using namespace roundsim;

namespace {

World line_world(std::initializer_list<double> positions, double speed = 0.0, int lanes = 2,
                 double length = 6000.0) {
    World w;
    w.road.length_m = length;
    w.road.lanes = lanes;
    w.road.s_max = 31.3;
    std::uint32_t id = 1;
    for (const double p : positions) {
        w.vehicles.push_back({id++, p, 0, speed, 0.0, false});
    }
    return w;
}

}  // namespace

TEST_CASE("greenshield endpoints and midpoint") {
    CHECK(greenshield_speed(0.0, 31.3, 0.2) == 31.3);
    CHECK(greenshield_speed(0.2, 31.3, 0.2) == 0.0);
    CHECK(greenshield_speed(0.1, 31.3, 0.2) == doctest::Approx(15.65));
    CHECK(greenshield_speed(0.5, 31.3, 0.2) == 0.0);  // clamped past jam density
}

TEST_CASE("greenshield rejects bad parameters") {
    CHECK_THROWS_AS(greenshield_speed(-0.1, 31.3, 0.2), InvalidParameter);
    CHECK_THROWS_AS(greenshield_speed(0.1, 0.0, 0.2), InvalidParameter);
    CHECK_THROWS_AS(greenshield_speed(0.1, 31.3, -0.2), InvalidParameter);
    CHECK_THROWS_AS(greenshield_speed(std::nan(""), 31.3, 0.2), InvalidParameter);
}

TEST_CASE("greenshield is non-increasing in density over a grid") {
    for (int si = 1; si <= 10; ++si) {
        for (int ri = 1; ri <= 10; ++ri) {
            const double s_max = 5.0 * si;
            const double rho_max = 0.05 * ri;
            double prev = greenshield_speed(0.0, s_max, rho_max);
            CHECK(prev == s_max);
            for (int k = 1; k <= 60; ++k) {
                const double rho = rho_max * 1.2 * k / 60.0;
                const double s = greenshield_speed(rho, s_max, rho_max);
                CHECK(s <= prev);
                prev = s;
            }
            CHECK(greenshield_speed(rho_max, s_max, rho_max) == 0.0);
        }
    }
}

TEST_CASE("local density counts the window including the subject") {
    // Two vehicles 2000 m apart: each window holds only the subject.
    World w = line_world({0.0, 2000.0});
    CHECK(local_density(1, w) == doctest::Approx(1.0 / 2000.0));

    // 20 vehicles packed into 100 m: all inside +-500 m.
    World packed;
    packed.road.lanes = 2;
    for (std::uint32_t i = 0; i < 20; ++i) {
        packed.vehicles.push_back({i + 1, 5.0 * i, 0, 0.0, 0.0, false});
    }
    CHECK(local_density(1, packed) == doctest::Approx(20.0 / 2000.0));

    CHECK_THROWS_AS(local_density(99, w), NotFound);
    CHECK_THROWS_AS(local_density(1, w, 0.0), InvalidParameter);
}

TEST_CASE("local density on a uniform ring approximates N over road area") {
    Rng rng(11);
    World w = spawn_vehicles(urban_road(), 500, 10.0, 12.0, 0.0, rng);
    // Brute-force count as the oracle for the sampled instant.
    const auto& subject = w.vehicles[123];
    std::size_t count = 0;
    for (const auto& v : w.vehicles) {
        count += ring_distance(v.pos, subject.pos, 6000.0) <= 500.0 ? 1 : 0;
    }
    const double expect = static_cast<double>(count) / 2000.0;
    CHECK(local_density(subject.id, w) == expect);
    CHECK(local_density(subject.id, w) == doctest::Approx(500.0 / 12000.0).epsilon(0.05));
}

TEST_CASE("density is bounded by N over window area") {
    Rng rng(3);
    World w = spawn_vehicles(urban_road(), 200, 10.0, 15.0, 0.2, rng);
    for (const auto& v : w.vehicles) {
        const double rho = local_density(v.id, w);
        CHECK(rho >= 0.0);
        CHECK(rho <= 200.0 / 2000.0);
    }
}

TEST_CASE("step advances position with the speed carried into the step") {
    World w = line_world({100.0}, 20.0);
    step(w, 0.1);
    CHECK(w.vehicles[0].pos == doctest::Approx(102.0).epsilon(1e-12));
    CHECK(w.clock == doctest::Approx(0.1));
}

TEST_CASE("step wraps around the ring") {
    World w = line_world({5999.0}, 20.0);
    step(w, 0.1);
    CHECK(w.vehicles[0].pos == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("step keeps every position in range and conserves the count") {
    Rng rng(5);
    World w = spawn_vehicles(urban_road(), 150, 5.0, 20.0, 0.3, rng);
    for (int k = 0; k < 50; ++k) {
        step(w, 0.1);
        REQUIRE(w.vehicles.size() == 150);
        for (const auto& v : w.vehicles) {
            CHECK(v.pos >= 0.0);
            CHECK(v.pos < 6000.0);
            CHECK(v.speed >= 0.0);
            CHECK(v.speed <= w.road.s_max);
        }
    }
    CHECK(w.clock == doctest::Approx(5.0));
}

TEST_CASE("step rejects a non-positive dt") {
    World w = line_world({0.0});
    CHECK_THROWS_AS(step(w, 0.0), InvalidParameter);
    CHECK_THROWS_AS(step(w, -0.1), InvalidParameter);
}

TEST_CASE("denser platoons settle on lower speeds") {
    const auto mean_speed = [](const World& w) {
        double s = 0.0;
        for (const auto& v : w.vehicles) {
            s += v.speed;
        }
        return s / static_cast<double>(w.vehicles.size());
    };
    RoadNetwork dense_road = urban_road();
    dense_road.length_m = 500.0;
    Rng rng_a(9);
    Rng rng_b(9);
    World dense = spawn_vehicles(dense_road, 50, 8.0, 10.0, 0.0, rng_a);
    World sparse = spawn_vehicles(urban_road(), 50, 8.0, 10.0, 0.0, rng_b);
    for (int k = 0; k < 100; ++k) {
        step(dense, 0.1);
        step(sparse, 0.1);
    }
    CHECK(mean_speed(dense) < mean_speed(sparse));
}

TEST_CASE("spawn marks exactly round(fraction * N) rogues") {
    Rng rng(1);
    const World w = spawn_vehicles(urban_road(), 100, 14.0, 20.0, 0.10, rng);
    std::size_t rogues = 0;
    for (const auto& v : w.vehicles) {
        rogues += v.is_rogue ? 1 : 0;
    }
    CHECK(rogues == 10);

    Rng rng2(1);
    const World none = spawn_vehicles(urban_road(), 100, 14.0, 20.0, 0.0, rng2);
    for (const auto& v : none.vehicles) {
        CHECK_FALSE(v.is_rogue);
    }
}

TEST_CASE("spawn rejects an out-of-range rogue fraction or speed band") {
    Rng rng(1);
    CHECK_THROWS_AS(spawn_vehicles(urban_road(), 10, 14.0, 20.0, 1.5, rng), InvalidParameter);
    CHECK_THROWS_AS(spawn_vehicles(urban_road(), 10, 14.0, 20.0, -0.1, rng), InvalidParameter);
    CHECK_THROWS_AS(spawn_vehicles(urban_road(), 10, -1.0, 20.0, 0.1, rng), InvalidParameter);
    CHECK_THROWS_AS(spawn_vehicles(urban_road(), 10, 14.0, 99.0, 0.1, rng), InvalidParameter);
    CHECK_THROWS_AS(spawn_vehicles(urban_road(), 0, 14.0, 20.0, 0.1, rng), InvalidParameter);
}

TEST_CASE("spawn and step sequences are bit-reproducible per seed") {
    const auto simulate = [] {
        Rng rng(1234);
        World w = spawn_vehicles(highway_road(), 80, 26.0, 31.0, 0.25, rng);
        for (int k = 0; k < 30; ++k) {
            step(w, 0.1);
        }
        return w;
    };
    const World a = simulate();
    const World b = simulate();
    REQUIRE(a.vehicles.size() == b.vehicles.size());
    for (std::size_t i = 0; i < a.vehicles.size(); ++i) {
        CHECK(a.vehicles[i].id == b.vehicles[i].id);
        CHECK(a.vehicles[i].pos == b.vehicles[i].pos);
        CHECK(a.vehicles[i].speed == b.vehicles[i].speed);
        CHECK(a.vehicles[i].accel == b.vehicles[i].accel);
        CHECK(a.vehicles[i].lane == b.vehicles[i].lane);
        CHECK(a.vehicles[i].is_rogue == b.vehicles[i].is_rogue);
    }
}

TEST_CASE("road presets keep speeds inside the scenario band") {
    CHECK(urban_road().s_max == doctest::Approx(mph_to_mps(45.0)));
    CHECK(highway_road().s_max == doctest::Approx(mph_to_mps(70.0)));
    CHECK_THROWS_AS(
        [] {
            RoadNetwork r;
            r.length_m = -1.0;
            r.validate();
        }(),
        InvalidParameter);
}
