#pragma once

/// Energy-aware hybrid drive/fly planning on a 2.5D raster map.
///
/// The search space is (cell, layer): layer 0 is the ground, layers 1..n sit
/// at fixed altitudes. Driving is 8-connected on the ground layer, flying is
/// 26-connected across air layers, and a mode switch (fold/unfold) connects a
/// ground cell to an air layer straight above it when the column between is
/// free. Edge energy is power * distance / speed; the A* heuristic uses the
/// cheapest energy-per-meter over the horizontal distance, which never
/// overestimates.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace landair::planner {

/// 2.5D rasterized world: ground traversability + elevation, plus any number
/// of air layers with their own occupancy. Altitudes strictly increase.
struct GridWorld {
    int width = 0;
    int height = 0;
    double resolution_m = 1.0;
    std::vector<uint8_t> ground_blocked;            // row-major, y * width + x
    std::vector<double> elevation_m;                // row-major
    std::vector<double> air_altitudes_m;            // one per air layer
    std::vector<std::vector<uint8_t>> air_blocked;  // [layer][cell]

    int air_layer_count() const { return static_cast<int>(air_altitudes_m.size()); }
    bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
    size_t cell(int x, int y) const { return static_cast<size_t>(y) * width + x; }

    /// layer 0 = ground, 1..n = air layer (index-1).
    bool blocked(int layer, int x, int y) const {
        return layer == 0 ? ground_blocked[cell(x, y)] != 0
                          : air_blocked[static_cast<size_t>(layer) - 1][cell(x, y)] != 0;
    }

    void validate() const;  // throws ParseError on broken invariants
};

GridWorld load_grid(const std::filesystem::path& path);
GridWorld parse_grid(const std::string& text);
std::string serialize_grid(const GridWorld& world);
void save_grid(const GridWorld& world, const std::filesystem::path& path);

/// Costs and kinematic limits of the hybrid platform.
struct CostModel {
    double drive_power_w = 2840.0;
    double fly_power_w = 6276.0;
    double drive_speed_mps = 10.06;
    double fly_speed_mps = 7.47;
    double switch_time_s = 5.0;
    double switch_power_w = 2840.0;
    double max_step_height_m = 0.1;
    double max_slope_deg = 30.0;

    double drive_energy_per_m() const { return drive_power_w / drive_speed_mps; }
    double fly_energy_per_m() const { return fly_power_w / fly_speed_mps; }
    double switch_energy_j() const { return switch_power_w * switch_time_s; }
};

inline constexpr int kGroundLayer = 0;

/// One node of the hybrid search space. Mode is implied: layer 0 drives,
/// everything above flies.
struct HybridState {
    int x = 0;
    int y = 0;
    int layer = kGroundLayer;

    bool drives() const { return layer == kGroundLayer; }
    bool operator==(const HybridState&) const = default;
};

std::string layer_name(int layer);
int parse_layer_name(const std::string& name, int air_layer_count);

struct HybridPath {
    std::vector<HybridState> states;
    std::vector<double> segment_times_s;  // states.size()-1 entries
    std::vector<double> segment_energies_j;
    double total_energy_j = 0.0;
    double total_time_s = 0.0;
    int switch_count = 0;
    // copied from the world so the path can be re-scored on its own
    double resolution_m = 1.0;
    std::vector<double> layer_altitudes_m;
};

/// Optional instrumentation: every expanded state with its g and h values.
struct PlanTrace {
    struct Expansion {
        HybridState state;
        double g_j;
        double h_j;
    };
    std::vector<Expansion> expansions;
};

/// Minimal-energy hybrid path from start to goal. Deterministic: equal-cost
/// expansions prefer driving, then the lower layer, then lexicographic (x, y).
/// Throws DomainError when start/goal is blocked or no path exists.
HybridPath plan(const GridWorld& world, const HybridState& start, const HybridState& goal,
                const CostModel& cost, PlanTrace* trace = nullptr);

/// Inflates blocked cells by a Euclidean radius (meters), each layer
/// independently. Evaluated in parallel per cell.
GridWorld inflate(const GridWorld& world, double radius_m);

namespace reference {
/// Single-threaded counterpart of inflate (testing/benchmarks).
GridWorld inflate(const GridWorld& world, double radius_m);
}  // namespace reference

/// Greedy line-of-sight shortcutting inside each constant-layer run of the
/// path; mode switches are never crossed. Shortcuts are collision-checked by
/// supersampled ray traversal (drive shortcuts also re-check step height and
/// slope). Never increases energy.
HybridPath smooth(const HybridPath& path, const GridWorld& world, const CostModel& cost);

struct EnergyTime {
    double energy_j = 0.0;
    double time_s = 0.0;
};

/// Recomputes totals from the states alone; the cross-check for the
/// planner's own bookkeeping. Accepts shortcut (non-adjacent) segments as
/// long as each stays in one mode; a segment that changes mode and cell at
/// once is inconsistent.
EnergyTime path_energy(const HybridPath& path, const CostModel& cost);

}  // namespace landair::planner
