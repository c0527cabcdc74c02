#pragma once

#include <span>
#include <string>
#include <vector>

namespace landair::evaluation {

/// One robot's raw comparison metrics.
struct FleetRecord {
    std::string name;
    double hover_duration_min = 0.0;   // t_f
    double payload_kg = 0.0;           // p
    double fly_speed_mps = 0.0;        // v_f
    double drive_mileage_km = 0.0;     // m_d
    double obstacle_height_mm = 0.0;   // h_o
    double drive_speed_mps = 0.0;      // v_d
    double flight_area_m2 = 0.0;       // projection area, arms deployed
    double drive_area_m2 = 0.0;        // projection area, folded
    double switch_time_s = 0.0;        // T_s
    double weight_kg = 0.0;            // G
};

/// Per-metric weights. All default to 1.
struct WeightSet {
    double hover_duration = 1.0;
    double payload = 1.0;
    double fly_speed = 1.0;
    double drive_mileage = 1.0;
    double obstacle_height = 1.0;
    double drive_speed = 1.0;
    double area_penalty = 1.0;    // w_s
    double weight_penalty = 1.0;  // w_G
};

/// Min-max normalization to [0, 1]. A constant column (x_min == x_max) maps
/// to 0.5 so a degenerate metric cannot sink the whole evaluation.
double normalize(double x, double x_min, double x_max);

/// Flight capability: weighted normalized hover duration, payload and flight
/// speed, minus the deployed-footprint penalty.
std::vector<double> flight_index(std::span<const FleetRecord> fleet, const WeightSet& weights);

/// Ground capability: mileage, obstacle height and drive speed, minus the
/// folded-footprint penalty.
std::vector<double> ground_index(std::span<const FleetRecord> fleet, const WeightSet& weights);

/// Combined duration: mileage and hover duration, minus the weight penalty.
std::vector<double> duration_index(std::span<const FleetRecord> fleet, const WeightSet& weights);

/// Percentage shrink of the rectangular footprint when folding.
double footprint_reduction_pct(double unfolded_width_m, double unfolded_depth_m,
                               double folded_width_m, double folded_depth_m);

/// How much cheaper driving is than flying, in percent of the flying power.
double energy_saving_pct(double drive_power_w, double fly_power_w);

struct RobotScore {
    std::string name;
    double flight = 0.0;
    double ground = 0.0;
    double duration = 0.0;
    double switch_time_s = 0.0;
    double switch_time_norm = 0.0;
};

struct FleetReport {
    std::vector<RobotScore> scores;             // in input order
    std::vector<std::string> ranking_flight;    // names, best first
    std::vector<std::string> ranking_ground;
    std::vector<std::string> ranking_duration;
};

FleetReport evaluate_fleet(std::span<const FleetRecord> fleet, const WeightSet& weights);

}  // namespace landair::evaluation
