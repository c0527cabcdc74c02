#include "landair/evaluation.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "landair/errors.hpp"
#include "landair/io.hpp"

namespace landair::evaluation {

double normalize(double x, double x_min, double x_max) {
    if (x < x_min || x > x_max)
        throw DomainError("value " + io::format_number(x) + " outside [" +
                          io::format_number(x_min) + ", " + io::format_number(x_max) + "]");
    if (x_min == x_max) return 0.5;
    return (x - x_min) / (x_max - x_min);
}

namespace {

using Metric = double FleetRecord::*;

std::vector<double> normalized_column(std::span<const FleetRecord> fleet, Metric metric) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& r : fleet) {
        lo = std::min(lo, r.*metric);
        hi = std::max(hi, r.*metric);
    }
    std::vector<double> out;
    out.reserve(fleet.size());
    for (const auto& r : fleet) out.push_back(normalize(r.*metric, lo, hi));
    return out;
}

void require_fleet(std::span<const FleetRecord> fleet) {
    if (fleet.size() < 2)
        throw DomainError("fleet evaluation needs at least 2 records, got " +
                          std::to_string(fleet.size()));
}

std::vector<double> composite(std::span<const FleetRecord> fleet,
                              std::initializer_list<std::pair<Metric, double>> gains,
                              Metric penalty_metric, double penalty_weight) {
    require_fleet(fleet);
    std::vector<double> index(fleet.size(), 0.0);
    for (const auto& [metric, weight] : gains) {
        const auto n = normalized_column(fleet, metric);
        for (size_t i = 0; i < index.size(); ++i) index[i] += weight * n[i];
    }
    const auto p = normalized_column(fleet, penalty_metric);
    for (size_t i = 0; i < index.size(); ++i) index[i] -= penalty_weight * p[i];
    return index;
}

std::vector<std::string> ranking(std::span<const FleetRecord> fleet,
                                 const std::vector<double>& index) {
    std::vector<size_t> order(fleet.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return index[a] > index[b]; });
    std::vector<std::string> names;
    names.reserve(order.size());
    for (const size_t i : order) names.push_back(fleet[i].name);
    return names;
}

}  // namespace

std::vector<double> flight_index(std::span<const FleetRecord> fleet, const WeightSet& w) {
    return composite(fleet,
                     {{&FleetRecord::hover_duration_min, w.hover_duration},
                      {&FleetRecord::payload_kg, w.payload},
                      {&FleetRecord::fly_speed_mps, w.fly_speed}},
                     &FleetRecord::flight_area_m2, w.area_penalty);
}

std::vector<double> ground_index(std::span<const FleetRecord> fleet, const WeightSet& w) {
    return composite(fleet,
                     {{&FleetRecord::drive_mileage_km, w.drive_mileage},
                      {&FleetRecord::obstacle_height_mm, w.obstacle_height},
                      {&FleetRecord::drive_speed_mps, w.drive_speed}},
                     &FleetRecord::drive_area_m2, w.area_penalty);
}

std::vector<double> duration_index(std::span<const FleetRecord> fleet, const WeightSet& w) {
    return composite(fleet,
                     {{&FleetRecord::drive_mileage_km, w.drive_mileage},
                      {&FleetRecord::hover_duration_min, w.hover_duration}},
                     &FleetRecord::weight_kg, w.weight_penalty);
}

double footprint_reduction_pct(double unfolded_width_m, double unfolded_depth_m,
                               double folded_width_m, double folded_depth_m) {
    if (unfolded_width_m <= 0.0 || unfolded_depth_m <= 0.0 || folded_width_m <= 0.0 ||
        folded_depth_m <= 0.0)
        throw DomainError("footprint dimensions must be positive");
    const double unfolded = unfolded_width_m * unfolded_depth_m;
    const double folded = folded_width_m * folded_depth_m;
    return 100.0 * (1.0 - folded / unfolded);
}

double energy_saving_pct(double drive_power_w, double fly_power_w) {
    if (fly_power_w <= 0.0) throw DomainError("flying power must be positive");
    return 100.0 * (fly_power_w - drive_power_w) / fly_power_w;
}

FleetReport evaluate_fleet(std::span<const FleetRecord> fleet, const WeightSet& weights) {
    require_fleet(fleet);
    const auto f = flight_index(fleet, weights);
    const auto g = ground_index(fleet, weights);
    const auto d = duration_index(fleet, weights);
    const auto ts = normalized_column(fleet, &FleetRecord::switch_time_s);

    FleetReport report;
    report.scores.reserve(fleet.size());
    for (size_t i = 0; i < fleet.size(); ++i)
        report.scores.push_back(
            {fleet[i].name, f[i], g[i], d[i], fleet[i].switch_time_s, ts[i]});
    report.ranking_flight = ranking(fleet, f);
    report.ranking_ground = ranking(fleet, g);
    report.ranking_duration = ranking(fleet, d);
    return report;
}

}  // namespace landair::evaluation
