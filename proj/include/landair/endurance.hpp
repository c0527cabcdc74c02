#pragma once

#include <optional>
#include <vector>

#include "landair/powertrain.hpp"

namespace landair::endurance {

/// Component masses whose sum the hover thrust must carry.
struct WeightBreakdown {
    double frame_kg = 0.0;
    double battery_kg = 0.0;
    double deform_module_kg = 0.0;
    double avionics_kg = 0.0;
    double payload_kg = 0.0;
};

double total_weight_kg(const WeightBreakdown& w);

/// Constant electrical loads besides the motors.
struct PowerBudget {
    double avionics_w = 0.0;
    double perception_w = 0.0;
    double deform_w = 0.0;

    double total_w() const { return avionics_w + perception_w + deform_w; }
};

struct EnduranceConfig {
    int rotor_count = 4;
    double nominal_voltage_v = 0.0;
    powertrain::BatteryModel battery;
    powertrain::PowerTrainModel power_train;
    double fixed_mass_kg = 0.0;  // robot mass excluding the battery
    PowerBudget power_budget;
    double gravity_mps2 = 9.81;
};

/// Hover endurance in minutes for a pack holding `energy_wh`:
///
///   t = energy / (rotor_count * voltage * current + constant_power)
///
/// with the quotient in hours, converted to minutes.
double flight_duration_min(double energy_wh, int rotor_count, double voltage_v,
                           double current_a, double constant_power_w);

/// Thrust each rotor must produce to hover at the given battery mass.
double hover_thrust_per_rotor_n(const EnduranceConfig& config, double battery_mass_kg);

/// Per-rotor current at hover, read from the fitted current curve.
/// Throws NoFlyError when the required thrust exceeds the curve's range.
double hover_current_a(const EnduranceConfig& config, double battery_mass_kg);

struct DurationPoint {
    double battery_mass_kg = 0.0;
    double duration_min = 0.0;  // NaN when infeasible
    bool feasible = false;
};

/// Hover duration at one battery mass, or nullopt when the configuration
/// cannot fly at that mass.
std::optional<double> duration_at(const EnduranceConfig& config, double battery_mass_kg);

/// Duration versus battery mass over [mass_lo, mass_hi] at the given step.
/// Infeasible masses stay in the series, flagged, so the no-fly region can be
/// plotted. Points are independent and evaluated in parallel.
std::vector<DurationPoint> duration_curve(const EnduranceConfig& config, double mass_lo_kg,
                                          double mass_hi_kg, double step_kg);

namespace reference {
/// Single-threaded counterpart of duration_curve, kept for testing and
/// benchmarking. Must produce bit-identical output.
std::vector<DurationPoint> duration_curve(const EnduranceConfig& config, double mass_lo_kg,
                                          double mass_hi_kg, double step_kg);
}  // namespace reference

struct OptimumResult {
    double battery_mass_kg = 0.0;
    double duration_min = 0.0;
};

/// Argmax of hover duration over the feasible part of [mass_lo, mass_hi]:
/// coarse grid scan, then repeated bracket refinement around the best point
/// until the bracket is narrower than refine_tol. The feasible upper bound
/// (no-fly boundary clipped to the range) is always among the candidates, so
/// a monotone duration curve returns it exactly.
OptimumResult optimize_battery_mass(const EnduranceConfig& config, double mass_lo_kg,
                                    double mass_hi_kg, double coarse_step_kg,
                                    double refine_tol_kg);

/// Largest battery mass the rotors can still lift, in closed form from the
/// powertrain's maximum thrust. Throws when the robot cannot fly even with no
/// battery.
double no_fly_boundary_kg(const EnduranceConfig& config);

}  // namespace landair::endurance
