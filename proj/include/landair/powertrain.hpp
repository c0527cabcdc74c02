#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace landair::powertrain {

/// A data point of (x, y) used by the fitting routines.
using Point = std::pair<double, double>;

/// Linear battery model: capacity grows linearly with pack mass.
struct BatteryModel {
    double slope_wh_per_kg = 0.0;    // marginal energy density
    double intercept_wh = 0.0;
    double energy_density_wh_per_kg = 0.0;  // equals slope for a zero-intercept fit
    double nominal_voltage_v = 0.0;

    double capacity_wh(double mass_kg) const {
        return slope_wh_per_kg * mass_kg + intercept_wh;
    }
};

struct LinearFit {
    BatteryModel model;
    double residual_rms = 0.0;
};

enum class CurveKind { current, efficiency };

/// Polynomial over thrust [N], valid only inside the tabulated range.
/// Evaluation outside [thrust_min_n, thrust_max_n] is an error rather than an
/// extrapolation; a fit is only trusted where data existed.
struct ThrustCurve {
    CurveKind kind = CurveKind::current;
    std::vector<double> coefficients;  // ascending powers: c0 + c1*T + c2*T^2 + ...
    double thrust_min_n = 0.0;
    double thrust_max_n = 0.0;
    double max_thrust_n = 0.0;
};

struct PolyFit {
    ThrustCurve curve;
    double residual_rms = 0.0;
    bool monotone_non_decreasing = false;  // informational; never enforced
};

struct PowerTrainModel {
    std::string motor_name;
    double kv_rpm_per_v = 0.0;
    ThrustCurve current_curve;
    ThrustCurve efficiency_curve;
    double propeller_diameter_in = 0.0;

    double max_thrust_n() const { return current_curve.max_thrust_n; }
};

/// Least-squares line through (mass, capacity) points.
/// Requires at least two points with distinct masses.
LinearFit fit_linear(std::span<const Point> points);

/// Least-squares polynomial of the given degree (1..3) through
/// (thrust, value) points. Needs degree+1 points with distinct thrusts.
PolyFit fit_poly(std::span<const Point> points, int degree, CurveKind kind);

/// Evaluates the fitted polynomial. Thrust must lie inside the valid range
/// (bounds inclusive).
double eval_curve(const ThrustCurve& curve, double thrust_n);

struct RankedCandidate {
    PowerTrainModel model;
    double efficiency_at_hover;
};

struct RejectedCandidate {
    PowerTrainModel model;
    std::string reason;
};

/// Feasible candidates sorted by descending hover efficiency, plus the
/// rejects with the reason each failed.
struct Selection {
    std::vector<RankedCandidate> feasible;
    std::vector<RejectedCandidate> infeasible;
};

Selection select_powertrain(std::span<const PowerTrainModel> candidates,
                            double required_hover_thrust_n, double margin);

/// Motor test table: `thrust_n,current_a,efficiency_g_per_w`.
struct MotorTable {
    std::vector<Point> current_points;     // (thrust N, current A)
    std::vector<Point> efficiency_points;  // (thrust N, efficiency g/W)
};

MotorTable load_motor_csv(const std::filesystem::path& path);

/// Battery test table: `mass_kg,capacity_wh`.
std::vector<Point> load_battery_csv(const std::filesystem::path& path);

}  // namespace landair::powertrain
