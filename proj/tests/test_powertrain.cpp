#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <fstream>
#include <random>

#include "landair/errors.hpp"
#include "landair/powertrain.hpp"
#include "test_support.hpp"

using namespace landair;
using powertrain::CurveKind;
using powertrain::Point;

namespace {

/// Independent 2x2 normal-equations solve for a line fit.
std::pair<double, double> normal_equations_line(const std::vector<Point>& pts) {
    double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [x, y] : pts) {
        n += 1;
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double det = n * sxx - sx * sx;
    const double slope = (n * sxy - sx * sy) / det;
    const double intercept = (sy * sxx - sx * sxy) / det;
    return {slope, intercept};
}

/// Independent 3x3 Vandermonde solve (Cramer) for an exact quadratic.
std::array<double, 3> vandermonde3(const std::array<Point, 3>& p) {
    const auto det3 = [](std::array<std::array<double, 3>, 3> m) {
        return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
               m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
               m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    };
    std::array<std::array<double, 3>, 3> a;
    std::array<double, 3> b;
    for (int i = 0; i < 3; ++i) {
        a[i] = {1.0, p[i].first, p[i].first * p[i].first};
        b[i] = p[i].second;
    }
    const double d = det3(a);
    std::array<double, 3> out;
    for (int c = 0; c < 3; ++c) {
        auto m = a;
        for (int i = 0; i < 3; ++i) m[i][c] = b[i];
        out[c] = det3(m) / d;
    }
    return out;
}

powertrain::ThrustCurve line_curve(double slope, double lo, double hi) {
    powertrain::ThrustCurve c;
    c.kind = CurveKind::current;
    c.coefficients = {0.0, slope};
    c.thrust_min_n = lo;
    c.thrust_max_n = hi;
    c.max_thrust_n = hi;
    return c;
}

powertrain::PowerTrainModel candidate(const std::string& name, double max_thrust, double eff) {
    powertrain::PowerTrainModel m;
    m.motor_name = name;
    m.kv_rpm_per_v = 170;
    m.current_curve = line_curve(0.3, 0.0, max_thrust);
    powertrain::ThrustCurve e;
    e.kind = CurveKind::efficiency;
    e.coefficients = {eff};
    e.thrust_min_n = 0.0;
    e.thrust_max_n = max_thrust;
    e.max_thrust_n = max_thrust;
    m.efficiency_curve = e;
    return m;
}

}  // namespace

TEST_CASE("fit_linear exact line through origin") {
    const std::vector<Point> pts{{1, 200}, {2, 400}};
    const auto fit = powertrain::fit_linear(pts);
    CHECK(fit.model.slope_wh_per_kg == doctest::Approx(200.0).epsilon(1e-12));
    CHECK(fit.model.intercept_wh == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(fit.residual_rms < 1e-9);
    CHECK(fit.model.energy_density_wh_per_kg == fit.model.slope_wh_per_kg);
}

TEST_CASE("fit_linear offset line matches the normal-equations oracle") {
    const std::vector<Point> pts{{1, 210}, {2, 400}, {3, 590}};
    const auto fit = powertrain::fit_linear(pts);
    CHECK(fit.model.slope_wh_per_kg == doctest::Approx(190.0).epsilon(1e-12));
    CHECK(fit.model.intercept_wh == doctest::Approx(20.0).epsilon(1e-10));
    CHECK(fit.residual_rms < 1e-9);

    const auto [slope, intercept] = normal_equations_line(pts);
    CHECK(fit.model.slope_wh_per_kg == doctest::Approx(slope).epsilon(1e-12));
    CHECK(fit.model.intercept_wh == doctest::Approx(intercept).epsilon(1e-9));
}

TEST_CASE("fit_linear rejects degenerate input") {
    CHECK_THROWS_AS(powertrain::fit_linear(std::vector<Point>{{5.74, 1440}}), DomainError);
    CHECK_THROWS_AS(powertrain::fit_linear(std::vector<Point>{{2, 300}, {2, 310}}), DomainError);
    CHECK_THROWS_AS(powertrain::fit_linear(std::vector<Point>{}), DomainError);
}

TEST_CASE("fit_linear reproduces collinear points exactly") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> slope_d(10.0, 400.0), icpt_d(-50.0, 150.0);
    for (int trial = 0; trial < 50; ++trial) {
        const double slope = slope_d(rng), icpt = icpt_d(rng);
        std::vector<Point> pts;
        for (int i = 0; i < 6; ++i) {
            const double x = 0.5 + i * 1.7;
            pts.emplace_back(x, slope * x + icpt);
        }
        const auto fit = powertrain::fit_linear(pts);
        CHECK(fit.residual_rms < 1e-9);
        for (const auto& [x, y] : pts)
            CHECK(fit.model.capacity_wh(x) == doctest::Approx(y).epsilon(1e-10));
    }
}

TEST_CASE("fit_poly exact line") {
    const std::vector<Point> pts{{0, 0}, {10, 1}, {20, 2}};
    const auto fit = powertrain::fit_poly(pts, 1, CurveKind::current);
    REQUIRE(fit.curve.coefficients.size() == 2);
    CHECK(fit.curve.coefficients[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(fit.curve.coefficients[1] == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(fit.curve.thrust_min_n == 0.0);
    CHECK(fit.curve.thrust_max_n == 20.0);
    CHECK(fit.monotone_non_decreasing);
}

TEST_CASE("fit_poly exact quadratic matches the Vandermonde oracle") {
    const std::array<Point, 3> pts{{{0, 0}, {10, 2}, {20, 8}}};
    const auto fit =
        powertrain::fit_poly(std::vector<Point>(pts.begin(), pts.end()), 2, CurveKind::current);
    const auto oracle = vandermonde3(pts);
    REQUIRE(fit.curve.coefficients.size() == 3);
    for (int i = 0; i < 3; ++i)
        CHECK(fit.curve.coefficients[static_cast<size_t>(i)] ==
              doctest::Approx(oracle[static_cast<size_t>(i)]).epsilon(1e-9));
    CHECK(fit.curve.coefficients[2] == doctest::Approx(0.02).epsilon(1e-9));
}

TEST_CASE("fit_poly preconditions") {
    const std::vector<Point> two{{0, 0}, {10, 1}};
    CHECK_THROWS_AS(powertrain::fit_poly(two, 2, CurveKind::current), DomainError);
    const std::vector<Point> four{{0, 0}, {1, 1}, {2, 2}, {3, 3}};
    CHECK_THROWS_AS(powertrain::fit_poly(four, 0, CurveKind::current), DomainError);
    CHECK_THROWS_AS(powertrain::fit_poly(four, 4, CurveKind::current), DomainError);
    const std::vector<Point> dup{{0, 0}, {0, 1}, {10, 2}};
    CHECK_THROWS_AS(powertrain::fit_poly(dup, 2, CurveKind::current), DomainError);
}

TEST_CASE("fit_poly with degree n-1 interpolates n points") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> coeff(-2.0, 2.0);
    for (int trial = 0; trial < 60; ++trial) {
        const int degree = 1 + trial % 3;
        std::vector<double> target;
        for (int i = 0; i <= degree; ++i) target.push_back(coeff(rng));
        std::vector<Point> pts;
        for (int i = 0; i <= degree; ++i) {
            const double x = 5.0 + 13.0 * i;
            double y = 0.0;
            for (size_t j = target.size(); j-- > 0;) y = y * x + target[j];
            pts.emplace_back(x, y);
        }
        const auto fit = powertrain::fit_poly(pts, degree, CurveKind::current);
        double scale = 0.0;
        for (const auto& [x, y] : pts) scale = std::max(scale, std::abs(y));
        for (const auto& [x, y] : pts)
            CHECK(std::abs(powertrain::eval_curve(fit.curve, x) - y) <=
                  1e-9 * std::max(1.0, scale));
    }
}

TEST_CASE("fit_poly reports non-monotone fits") {
    // hump: rises then falls
    const std::vector<Point> hump{{0, 0}, {5, 5}, {10, 1}};
    const auto fit = powertrain::fit_poly(hump, 2, CurveKind::current);
    CHECK_FALSE(fit.monotone_non_decreasing);
}

TEST_CASE("eval_curve evaluates inside the range and rejects outside") {
    const auto curve = line_curve(0.1, 0.0, 100.0);
    CHECK(powertrain::eval_curve(curve, 60.4) == doctest::Approx(6.04).epsilon(1e-12));
    CHECK(powertrain::eval_curve(curve, curve.thrust_min_n) == 0.0);  // boundary inclusive
    CHECK(powertrain::eval_curve(curve, curve.thrust_max_n) == doctest::Approx(10.0));
    CHECK_THROWS_AS(powertrain::eval_curve(curve, 100.0001), DomainError);
    CHECK_THROWS_AS(powertrain::eval_curve(curve, -0.0001), DomainError);
}

TEST_CASE("eval_curve is deterministic") {
    const auto curve = line_curve(0.37, 0.0, 90.0);
    const double a = powertrain::eval_curve(curve, 41.7);
    const double b = powertrain::eval_curve(curve, 41.7);
    CHECK(a == b);
}

TEST_CASE("select_powertrain filters and ranks") {
    SUBCASE("single infeasible candidate") {
        const std::vector<powertrain::PowerTrainModel> cands{candidate("weak", 50.0, 3.0)};
        const auto sel = powertrain::select_powertrain(cands, 60.0, 1.0);
        CHECK(sel.feasible.empty());
        REQUIRE(sel.infeasible.size() == 1);
        CHECK(sel.infeasible[0].model.motor_name == "weak");
        CHECK_FALSE(sel.infeasible[0].reason.empty());
    }
    SUBCASE("efficiency decides the order") {
        const std::vector<powertrain::PowerTrainModel> cands{candidate("a", 100.0, 2.5),
                                                             candidate("b", 100.0, 3.0)};
        const auto sel = powertrain::select_powertrain(cands, 60.0, 1.0);
        REQUIRE(sel.feasible.size() == 2);
        CHECK(sel.feasible[0].model.motor_name == "b");
        CHECK(sel.feasible[1].model.motor_name == "a");
    }
    SUBCASE("mixed feasibility matches pairwise comparison") {
        const std::vector<powertrain::PowerTrainModel> cands{
            candidate("low", 40.0, 9.0), candidate("mid", 80.0, 2.2), candidate("high", 90.0, 3.1)};
        const auto sel = powertrain::select_powertrain(cands, 60.0, 1.2);
        REQUIRE(sel.feasible.size() == 2);
        for (size_t i = 0; i + 1 < sel.feasible.size(); ++i)
            CHECK(sel.feasible[i].efficiency_at_hover >= sel.feasible[i + 1].efficiency_at_hover);
        CHECK(sel.infeasible.size() == 1);
        CHECK(sel.infeasible[0].model.motor_name == "low");
    }
    SUBCASE("feasible plus infeasible is a permutation of the input") {
        std::mt19937 rng(3);
        std::uniform_real_distribution<double> thr(30.0, 120.0), eff(1.0, 9.0);
        for (int trial = 0; trial < 30; ++trial) {
            std::vector<powertrain::PowerTrainModel> cands;
            for (int i = 0; i < 6; ++i)
                cands.push_back(candidate("m" + std::to_string(i), thr(rng), eff(rng)));
            const auto sel = powertrain::select_powertrain(cands, 60.0, 1.0);
            CHECK(sel.feasible.size() + sel.infeasible.size() == cands.size());
            std::vector<std::string> names;
            for (const auto& c : sel.feasible) names.push_back(c.model.motor_name);
            for (const auto& c : sel.infeasible) names.push_back(c.model.motor_name);
            std::sort(names.begin(), names.end());
            CHECK(std::adjacent_find(names.begin(), names.end()) == names.end());
        }
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(
            powertrain::select_powertrain(std::vector<powertrain::PowerTrainModel>{}, 60.0, 1.0),
            DomainError);
        const std::vector<powertrain::PowerTrainModel> one{candidate("a", 100.0, 3.0)};
        CHECK_THROWS_AS(powertrain::select_powertrain(one, 60.0, 0.9), DomainError);
    }
}

TEST_CASE("CSV ingestion") {
    const auto dir = testsupport::temp_dir("powertrain");

    SUBCASE("battery CSV round trip") {
        const auto path = dir / "bat.csv";
        std::ofstream(path) << "mass_kg,capacity_wh\n1,210\n2,400\n";
        const auto pts = powertrain::load_battery_csv(path);
        REQUIRE(pts.size() == 2);
        CHECK(pts[1].first == 2.0);
        CHECK(pts[1].second == 400.0);
    }
    SUBCASE("motor CSV round trip") {
        const auto path = dir / "motor.csv";
        std::ofstream(path) << "thrust_n,current_a,efficiency_g_per_w\n10,2,8\n20,5,7\n";
        const auto table = powertrain::load_motor_csv(path);
        REQUIRE(table.current_points.size() == 2);
        CHECK(table.current_points[1] == Point{20, 5});
        CHECK(table.efficiency_points[0] == Point{10, 8});
    }
    SUBCASE("wrong header is rejected") {
        const auto path = dir / "bad.csv";
        std::ofstream(path) << "mass,capacity\n1,210\n";
        CHECK_THROWS_AS(powertrain::load_battery_csv(path), ParseError);
    }
    SUBCASE("non-numeric cell is rejected") {
        const auto path = dir / "junk.csv";
        std::ofstream(path) << "mass_kg,capacity_wh\n1,two hundred\n";
        CHECK_THROWS_AS(powertrain::load_battery_csv(path), ParseError);
    }
}

TEST_CASE("fixture motor table reproduces the embedded coefficients") {
    const auto table =
        powertrain::load_motor_csv(std::filesystem::path(FIXTURES_DIR) / "motor_170kv.csv");
    const auto fit = powertrain::fit_poly(table.current_points, 3, CurveKind::current);
    const std::vector<double> expected{-13.736909386089216, 1.9423617218009728,
                                       -0.0646183565450299, 0.0007171271960102149};
    REQUIRE(fit.curve.coefficients.size() == 4);
    for (size_t i = 0; i < 4; ++i)
        CHECK(fit.curve.coefficients[i] == doctest::Approx(expected[i]).epsilon(1e-6));
    CHECK(fit.monotone_non_decreasing);
    CHECK(fit.curve.thrust_max_n == 75.0);

    const auto battery =
        powertrain::load_battery_csv(std::filesystem::path(FIXTURES_DIR) / "battery_packs.csv");
    const auto lin = powertrain::fit_linear(battery);
    CHECK(lin.model.slope_wh_per_kg == doctest::Approx(240.0).epsilon(1e-9));
    CHECK(lin.model.intercept_wh == doctest::Approx(62.4).epsilon(1e-7));
}
