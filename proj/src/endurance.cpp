#include "landair/endurance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "landair/errors.hpp"
#include "landair/io.hpp"

namespace landair::endurance {

double total_weight_kg(const WeightBreakdown& w) {
    return w.frame_kg + w.battery_kg + w.deform_module_kg + w.avionics_kg + w.payload_kg;
}

double flight_duration_min(double energy_wh, int rotor_count, double voltage_v,
                           double current_a, double constant_power_w) {
    if (energy_wh < 0.0) throw DomainError("battery energy must be non-negative");
    const double denom = rotor_count * voltage_v * current_a + constant_power_w;
    if (denom <= 0.0) throw DomainError("total electrical power must be positive");
    return energy_wh / denom * 60.0;
}

double hover_thrust_per_rotor_n(const EnduranceConfig& config, double battery_mass_kg) {
    if (battery_mass_kg < 0.0) throw DomainError("battery mass must be non-negative");
    return (config.fixed_mass_kg + battery_mass_kg) * config.gravity_mps2 / config.rotor_count;
}

double hover_current_a(const EnduranceConfig& config, double battery_mass_kg) {
    const double thrust = hover_thrust_per_rotor_n(config, battery_mass_kg);
    const auto& curve = config.power_train.current_curve;
    if (thrust > curve.thrust_max_n)
        throw NoFlyError("hover thrust " + io::format_number(thrust) +
                         " N per rotor exceeds the powertrain maximum " +
                         io::format_number(curve.thrust_max_n) + " N (no-fly)");
    return powertrain::eval_curve(curve, thrust);
}

std::optional<double> duration_at(const EnduranceConfig& config, double battery_mass_kg) {
    double current;
    try {
        current = hover_current_a(config, battery_mass_kg);
    } catch (const DomainError&) {
        return std::nullopt;
    }
    const double energy = config.battery.capacity_wh(battery_mass_kg);
    const double denom =
        config.rotor_count * config.nominal_voltage_v * current + config.power_budget.total_w();
    if (denom <= 0.0 || energy < 0.0) return std::nullopt;
    return flight_duration_min(energy, config.rotor_count, config.nominal_voltage_v, current,
                               config.power_budget.total_w());
}

namespace {

std::vector<double> sweep_masses(double mass_lo_kg, double mass_hi_kg, double step_kg) {
    if (step_kg <= 0.0) throw DomainError("mass step must be positive");
    if (mass_hi_kg < mass_lo_kg) throw DomainError("empty battery mass range");
    std::vector<double> masses;
    const double span = mass_hi_kg - mass_lo_kg;
    const auto count = static_cast<size_t>(std::floor(span / step_kg * (1.0 + 1e-12))) + 1;
    masses.reserve(count);
    for (size_t i = 0; i < count; ++i) masses.push_back(mass_lo_kg + static_cast<double>(i) * step_kg);
    return masses;
}

DurationPoint evaluate_point(const EnduranceConfig& config, double mass) {
    DurationPoint p;
    p.battery_mass_kg = mass;
    const auto d = duration_at(config, mass);
    p.feasible = d.has_value();
    p.duration_min = d.value_or(std::numeric_limits<double>::quiet_NaN());
    return p;
}

}  // namespace

std::vector<DurationPoint> duration_curve(const EnduranceConfig& config, double mass_lo_kg,
                                          double mass_hi_kg, double step_kg) {
    const auto masses = sweep_masses(mass_lo_kg, mass_hi_kg, step_kg);
    std::vector<DurationPoint> points(masses.size());
    const auto n = static_cast<int64_t>(masses.size());
#pragma omp parallel for schedule(static)
    for (int64_t i = 0; i < n; ++i)
        points[static_cast<size_t>(i)] = evaluate_point(config, masses[static_cast<size_t>(i)]);
    return points;
}

namespace reference {

std::vector<DurationPoint> duration_curve(const EnduranceConfig& config, double mass_lo_kg,
                                          double mass_hi_kg, double step_kg) {
    const auto masses = sweep_masses(mass_lo_kg, mass_hi_kg, step_kg);
    std::vector<DurationPoint> points(masses.size());
    for (size_t i = 0; i < masses.size(); ++i) points[i] = evaluate_point(config, masses[i]);
    return points;
}

}  // namespace reference

double no_fly_boundary_kg(const EnduranceConfig& config) {
    const double max_thrust = config.power_train.max_thrust_n();
    double boundary =
        config.rotor_count * max_thrust / config.gravity_mps2 - config.fixed_mass_kg;
    if (boundary < 0.0)
        throw DomainError("robot cannot fly even without a battery: fixed mass " +
                          io::format_number(config.fixed_mass_kg) + " kg needs more than " +
                          io::format_number(max_thrust) + " N per rotor");
    // The closed form can land one ulp past the curve maximum; nudge down
    // until the boundary itself hovers.
    while (boundary > 0.0 &&
           hover_thrust_per_rotor_n(config, boundary) > max_thrust)
        boundary = std::nextafter(boundary, 0.0);
    return boundary;
}

OptimumResult optimize_battery_mass(const EnduranceConfig& config, double mass_lo_kg,
                                    double mass_hi_kg, double coarse_step_kg,
                                    double refine_tol_kg) {
    if (mass_hi_kg < mass_lo_kg) throw DomainError("empty battery mass range");
    if (coarse_step_kg <= 0.0 || refine_tol_kg <= 0.0)
        throw DomainError("optimizer steps must be positive");

    double feasible_hi = mass_hi_kg;
    try {
        feasible_hi = std::min(mass_hi_kg, no_fly_boundary_kg(config));
    } catch (const DomainError&) {
        throw DomainError("entire battery mass range is infeasible");
    }

    const auto evaluate_best = [&](const std::vector<double>& masses) {
        double best_mass = std::numeric_limits<double>::quiet_NaN();
        double best_duration = -std::numeric_limits<double>::infinity();
        for (const double m : masses) {
            const auto d = duration_at(config, m);
            if (d && *d > best_duration) {
                best_duration = *d;
                best_mass = m;
            }
        }
        return std::pair{best_mass, best_duration};
    };

    // Coarse scan; the clipped upper bound always participates so monotone
    // curves resolve to it exactly.
    std::vector<double> grid;
    for (double m = mass_lo_kg; m < feasible_hi; m += coarse_step_kg) grid.push_back(m);
    if (feasible_hi >= mass_lo_kg) grid.push_back(feasible_hi);
    auto [best_mass, best_duration] = evaluate_best(grid);
    if (!std::isfinite(best_duration)) {
        throw DomainError("entire battery mass range is infeasible; no-fly boundary at " +
                          io::format_number(no_fly_boundary_kg(config)) + " kg");
    }

    double lo = std::max(mass_lo_kg, best_mass - coarse_step_kg);
    double hi = std::min(feasible_hi, best_mass + coarse_step_kg);
    while (hi - lo > refine_tol_kg) {
        constexpr int kPoints = 11;
        std::vector<double> bracket(kPoints);
        for (int i = 0; i < kPoints; ++i)
            bracket[static_cast<size_t>(i)] = lo + (hi - lo) * i / (kPoints - 1);
        bracket.back() = hi;          // keep the endpoint exact
        bracket.push_back(best_mass);  // never regress below the running best
        auto [m, d] = evaluate_best(bracket);
        if (d > best_duration) {
            best_mass = m;
            best_duration = d;
        }
        const double width = (hi - lo) / (kPoints - 1);
        lo = std::max(lo, best_mass - width);
        hi = std::min(hi, best_mass + width);
    }

    return {best_mass, best_duration};
}

}  // namespace landair::endurance
