#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "landair/errors.hpp"
#include "landair/evaluation.hpp"

using namespace landair;
using evaluation::FleetRecord;
using evaluation::WeightSet;

namespace {

FleetRecord record(const std::string& name, double t_f, double p, double v_f, double s_land) {
    FleetRecord r;
    r.name = name;
    r.hover_duration_min = t_f;
    r.payload_kg = p;
    r.fly_speed_mps = v_f;
    r.flight_area_m2 = s_land;
    r.drive_mileage_km = 1.0;
    r.obstacle_height_mm = 1.0;
    r.drive_speed_mps = 1.0;
    r.drive_area_m2 = 1.0;
    r.switch_time_s = 1.0;
    r.weight_kg = 1.0;
    return r;
}

FleetRecord random_record(std::mt19937& rng, const std::string& name) {
    std::uniform_real_distribution<double> u(0.1, 50.0);
    FleetRecord r;
    r.name = name;
    r.hover_duration_min = u(rng);
    r.payload_kg = u(rng);
    r.fly_speed_mps = u(rng);
    r.drive_mileage_km = u(rng);
    r.obstacle_height_mm = u(rng);
    r.drive_speed_mps = u(rng);
    r.flight_area_m2 = u(rng);
    r.drive_area_m2 = u(rng);
    r.switch_time_s = u(rng);
    r.weight_kg = u(rng);
    return r;
}

}  // namespace

TEST_CASE("normalize") {
    CHECK(evaluation::normalize(3.0, 3.0, 9.0) == 0.0);
    CHECK(evaluation::normalize(9.0, 3.0, 9.0) == 1.0);
    CHECK(evaluation::normalize(6.0, 3.0, 9.0) == 0.5);
    CHECK(evaluation::normalize(5.0, 5.0, 5.0) == 0.5);  // degenerate column
    CHECK_THROWS_AS(evaluation::normalize(2.9, 3.0, 9.0), DomainError);
    CHECK_THROWS_AS(evaluation::normalize(9.1, 3.0, 9.0), DomainError);
}

TEST_CASE("flight_index") {
    const WeightSet w;
    SUBCASE("two-robot hand example") {
        const std::vector<FleetRecord> fleet{record("A", 20, 4, 12, 0.5),
                                             record("B", 10, 2, 10, 1.5)};
        const auto f = evaluation::flight_index(fleet, w);
        CHECK(f[0] == 3.0);
        CHECK(f[1] == -1.0);
    }
    SUBCASE("identical records fall back to the degenerate value") {
        const std::vector<FleetRecord> fleet{record("A", 20, 4, 12, 0.5),
                                             record("A2", 20, 4, 12, 0.5)};
        const auto f = evaluation::flight_index(fleet, w);
        CHECK(f[0] == 1.0);  // 3 * 0.5 - 0.5
        CHECK(f[1] == 1.0);
    }
    SUBCASE("weights scale linearly") {
        const std::vector<FleetRecord> fleet{record("A", 20, 4, 12, 0.5),
                                             record("B", 10, 2, 10, 1.5),
                                             record("C", 15, 3, 11, 1.0)};
        WeightSet tripled;
        tripled.hover_duration = tripled.payload = tripled.fly_speed = 3.0;
        tripled.area_penalty = 3.0;
        const auto f1 = evaluation::flight_index(fleet, w);
        const auto f3 = evaluation::flight_index(fleet, tripled);
        for (size_t i = 0; i < fleet.size(); ++i)
            CHECK(f3[i] == doctest::Approx(3.0 * f1[i]).epsilon(1e-12));
        CHECK(std::distance(f1.begin(), std::max_element(f1.begin(), f1.end())) ==
              std::distance(f3.begin(), std::max_element(f3.begin(), f3.end())));
    }
    SUBCASE("fewer than two records") {
        const std::vector<FleetRecord> one{record("A", 20, 4, 12, 0.5)};
        CHECK_THROWS_AS(evaluation::flight_index(one, w), DomainError);
    }
}

TEST_CASE("ground_index") {
    const WeightSet w;
    std::vector<FleetRecord> fleet(2);
    fleet[0].name = "A";
    fleet[1].name = "B";
    fleet[0].drive_mileage_km = 30;
    fleet[0].obstacle_height_mm = 150;
    fleet[0].drive_speed_mps = 8;
    fleet[0].drive_area_m2 = 1.2;
    fleet[1].drive_mileage_km = 10;
    fleet[1].obstacle_height_mm = 80;
    fleet[1].drive_speed_mps = 5;
    fleet[1].drive_area_m2 = 0.8;

    const auto g = evaluation::ground_index(fleet, w);
    CHECK(g[0] == 2.0);  // maximal in all three gains, maximal area penalty
    CHECK(g[1] == 0.0);

    SUBCASE("dominant robot reaches the weight sum") {
        fleet[0].drive_area_m2 = 0.5;  // now also minimal in the penalty
        const auto g2 = evaluation::ground_index(fleet, w);
        CHECK(g2[0] == 3.0);
        CHECK(g2[1] == -1.0);
    }
    SUBCASE("identical records score alike") {
        fleet[1] = fleet[0];
        fleet[1].name = "B";
        const auto g3 = evaluation::ground_index(fleet, w);
        CHECK(g3[0] == g3[1]);
    }
}

TEST_CASE("duration_index") {
    WeightSet w;
    std::vector<FleetRecord> fleet(2);
    fleet[0].name = "A";
    fleet[1].name = "B";
    fleet[0].drive_mileage_km = 20;
    fleet[0].hover_duration_min = 20;
    fleet[0].weight_kg = 10;
    fleet[1].drive_mileage_km = 10;
    fleet[1].hover_duration_min = 10;
    fleet[1].weight_kg = 20;

    const auto d = evaluation::duration_index(fleet, w);
    CHECK(d[0] == 2.0);
    CHECK(d[1] == -1.0);

    SUBCASE("zero weight penalty removes the mass term") {
        w.weight_penalty = 0.0;
        const auto d2 = evaluation::duration_index(fleet, w);
        CHECK(d2[0] == 2.0);
        CHECK(d2[1] == 0.0);
    }
}

TEST_CASE("footprint_reduction") {
    CHECK(evaluation::footprint_reduction_pct(1.0, 1.0, 1.0, 1.0) == 0.0);
    CHECK(evaluation::footprint_reduction_pct(1.25, 1.25, 0.585, 0.670) ==
          doctest::Approx(74.9152).epsilon(1e-4));
    CHECK(evaluation::footprint_reduction_pct(2.0, 2.0, 2.0, 1.0) == 50.0);
    CHECK_THROWS_AS(evaluation::footprint_reduction_pct(0.0, 1.0, 1.0, 1.0), DomainError);
}

TEST_CASE("energy_saving") {
    CHECK(evaluation::energy_saving_pct(2840.0, 6276.0) == doctest::Approx(54.75).epsilon(2e-4));
    CHECK(evaluation::energy_saving_pct(1234.0, 1234.0) == 0.0);
    CHECK(evaluation::energy_saving_pct(0.0, 777.0) == 100.0);
    CHECK_THROWS_AS(evaluation::energy_saving_pct(100.0, 0.0), DomainError);
}

TEST_CASE("evaluate_fleet") {
    const WeightSet w;
    std::mt19937 rng(31);

    SUBCASE("report rows match the standalone index calls") {
        const std::vector<FleetRecord> fleet{random_record(rng, "A"), random_record(rng, "B")};
        const auto report = evaluation::evaluate_fleet(fleet, w);
        const auto f = evaluation::flight_index(fleet, w);
        const auto g = evaluation::ground_index(fleet, w);
        const auto d = evaluation::duration_index(fleet, w);
        REQUIRE(report.scores.size() == 2);
        for (size_t i = 0; i < 2; ++i) {
            CHECK(report.scores[i].name == fleet[i].name);
            CHECK(report.scores[i].flight == f[i]);
            CHECK(report.scores[i].ground == g[i]);
            CHECK(report.scores[i].duration == d[i]);
            CHECK(report.scores[i].switch_time_s == fleet[i].switch_time_s);
        }
    }
    SUBCASE("permuting the fleet permutes rows but not values") {
        std::vector<FleetRecord> fleet{random_record(rng, "A"), random_record(rng, "B"),
                                       random_record(rng, "C")};
        const auto before = evaluation::evaluate_fleet(fleet, w);
        std::rotate(fleet.begin(), fleet.begin() + 1, fleet.end());
        const auto after = evaluation::evaluate_fleet(fleet, w);
        for (const auto& row : before.scores) {
            const auto it = std::find_if(after.scores.begin(), after.scores.end(),
                                         [&](const auto& s) { return s.name == row.name; });
            REQUIRE(it != after.scores.end());
            CHECK(it->flight == doctest::Approx(row.flight).epsilon(1e-12));
            CHECK(it->ground == doctest::Approx(row.ground).epsilon(1e-12));
            CHECK(it->duration == doctest::Approx(row.duration).epsilon(1e-12));
        }
        CHECK(before.ranking_flight == after.ranking_flight);
    }
    SUBCASE("rankings match an exhaustive recomputation") {
        std::vector<FleetRecord> fleet;
        for (int i = 0; i < 4; ++i) fleet.push_back(random_record(rng, "R" + std::to_string(i)));
        const auto report = evaluation::evaluate_fleet(fleet, w);
        const auto f = evaluation::flight_index(fleet, w);
        std::vector<size_t> order{0, 1, 2, 3};
        std::stable_sort(order.begin(), order.end(),
                         [&](size_t a, size_t b) { return f[a] > f[b]; });
        REQUIRE(report.ranking_flight.size() == 4);
        for (size_t i = 0; i < 4; ++i) CHECK(report.ranking_flight[i] == fleet[order[i]].name);
    }
    SUBCASE("single-robot fleets are rejected") {
        const std::vector<FleetRecord> one{random_record(rng, "A")};
        CHECK_THROWS_AS(evaluation::evaluate_fleet(one, w), DomainError);
    }
}

TEST_CASE("min-max properties") {
    std::mt19937 rng(47);
    const WeightSet w;

    SUBCASE("affine transforms of a metric column leave indexes unchanged") {
        std::uniform_real_distribution<double> a_d(0.1, 5.0), b_d(-10.0, 10.0);
        for (int trial = 0; trial < 300; ++trial) {
            std::vector<FleetRecord> fleet;
            const int n = 2 + trial % 4;
            for (int i = 0; i < n; ++i) fleet.push_back(random_record(rng, "r" + std::to_string(i)));
            const auto before = evaluation::flight_index(fleet, w);
            const double a = a_d(rng), b = b_d(rng);
            for (auto& r : fleet) r.hover_duration_min = a * r.hover_duration_min + b;
            const auto after = evaluation::flight_index(fleet, w);
            for (size_t i = 0; i < fleet.size(); ++i)
                CHECK(after[i] == doctest::Approx(before[i]).epsilon(1e-9));
        }
    }
    SUBCASE("indexes stay inside [-penalty, sum of gain weights]") {
        for (int trial = 0; trial < 300; ++trial) {
            std::vector<FleetRecord> fleet;
            const int n = 2 + trial % 5;
            for (int i = 0; i < n; ++i) fleet.push_back(random_record(rng, "r" + std::to_string(i)));
            for (const double v : evaluation::flight_index(fleet, w)) {
                CHECK(v >= -w.area_penalty - 1e-12);
                CHECK(v <= w.hover_duration + w.payload + w.fly_speed + 1e-12);
            }
            for (const double v : evaluation::duration_index(fleet, w)) {
                CHECK(v >= -w.weight_penalty - 1e-12);
                CHECK(v <= w.drive_mileage + w.hover_duration + 1e-12);
            }
        }
    }
    SUBCASE("a new maximum cannot raise anyone else's normalized metric") {
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<FleetRecord> fleet;
            for (int i = 0; i < 3; ++i) fleet.push_back(random_record(rng, "r" + std::to_string(i)));
            double lo = fleet[0].payload_kg, hi = fleet[0].payload_kg;
            for (const auto& r : fleet) {
                lo = std::min(lo, r.payload_kg);
                hi = std::max(hi, r.payload_kg);
            }
            std::vector<double> before;
            for (const auto& r : fleet) before.push_back(evaluation::normalize(r.payload_kg, lo, hi));

            auto bigger = random_record(rng, "max");
            bigger.payload_kg = hi * 2.0 + 1.0;
            fleet.push_back(bigger);
            const double hi2 = bigger.payload_kg;
            for (size_t i = 0; i + 1 < fleet.size(); ++i) {
                const double after = evaluation::normalize(fleet[i].payload_kg, lo, hi2);
                CHECK(after <= before[i] + 1e-12);
            }
        }
    }
}
