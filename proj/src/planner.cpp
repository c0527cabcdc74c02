#include "landair/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

#include "landair/errors.hpp"
#include "landair/io.hpp"

namespace landair::planner {

void GridWorld::validate() const {
    if (width < 1 || height < 1) throw ParseError("grid dimensions must be at least 1x1");
    if (resolution_m <= 0.0) throw ParseError("grid resolution must be positive");
    const size_t cells = static_cast<size_t>(width) * height;
    if (ground_blocked.size() != cells || elevation_m.size() != cells)
        throw ParseError("ground matrices do not match the grid dimensions");
    if (air_blocked.size() != air_altitudes_m.size())
        throw ParseError("air layer count mismatch");
    for (const auto& layer : air_blocked)
        if (layer.size() != cells) throw ParseError("air matrix does not match the grid dimensions");
    for (size_t i = 1; i < air_altitudes_m.size(); ++i)
        if (air_altitudes_m[i] <= air_altitudes_m[i - 1])
            throw ParseError("air layer altitudes must be strictly increasing");
}

namespace {

struct TokenReader {
    std::istringstream in;
    explicit TokenReader(const std::string& text) : in(text) {}

    double number(const char* what) {
        double v;
        if (!(in >> v)) throw ParseError(std::string("grid file ended while reading ") + what);
        return v;
    }
    int integer(const char* what) {
        const double v = number(what);
        if (v != std::floor(v)) throw ParseError(std::string("expected an integer for ") + what);
        return static_cast<int>(v);
    }
};

std::vector<uint8_t> read_flag_matrix(TokenReader& r, int width, int height, const char* what) {
    std::vector<uint8_t> m(static_cast<size_t>(width) * height);
    for (auto& cell : m) {
        const int v = r.integer(what);
        if (v != 0 && v != 1) throw ParseError(std::string(what) + " cells must be 0 or 1");
        cell = static_cast<uint8_t>(v);
    }
    return m;
}

constexpr double kSqrt2 = 1.41421356237309514547462185873883;
constexpr double kRadToDeg = 180.0 / 3.14159265358979323846;

}  // namespace

GridWorld parse_grid(const std::string& text) {
    TokenReader r(text);
    GridWorld w;
    w.width = r.integer("width");
    w.height = r.integer("height");
    if (w.width < 1 || w.height < 1) throw ParseError("grid dimensions must be at least 1x1");
    w.resolution_m = r.number("resolution");
    const int layers = r.integer("air layer count");
    if (layers < 0) throw ParseError("air layer count must be non-negative");
    for (int i = 0; i < layers; ++i) w.air_altitudes_m.push_back(r.number("air altitude"));

    w.ground_blocked = read_flag_matrix(r, w.width, w.height, "ground occupancy");
    w.elevation_m.resize(static_cast<size_t>(w.width) * w.height);
    for (auto& e : w.elevation_m) e = r.number("elevation");
    for (int i = 0; i < layers; ++i)
        w.air_blocked.push_back(read_flag_matrix(r, w.width, w.height, "air occupancy"));

    double trailing;
    if (r.in >> trailing) throw ParseError("trailing data after the grid body");
    w.validate();
    return w;
}

GridWorld load_grid(const std::filesystem::path& path) {
    return parse_grid(io::read_text_file(path));
}

std::string serialize_grid(const GridWorld& world) {
    std::ostringstream out;
    out << world.width << ' ' << world.height << ' ' << io::format_number(world.resolution_m) << ' '
        << world.air_altitudes_m.size();
    for (const double a : world.air_altitudes_m) out << ' ' << io::format_number(a);
    out << '\n';

    const auto write_flags = [&](const std::vector<uint8_t>& m) {
        for (int y = 0; y < world.height; ++y) {
            for (int x = 0; x < world.width; ++x) {
                if (x) out << ' ';
                out << static_cast<int>(m[world.cell(x, y)]);
            }
            out << '\n';
        }
    };

    write_flags(world.ground_blocked);
    for (int y = 0; y < world.height; ++y) {
        for (int x = 0; x < world.width; ++x) {
            if (x) out << ' ';
            out << io::format_number(world.elevation_m[world.cell(x, y)]);
        }
        out << '\n';
    }
    for (const auto& layer : world.air_blocked) write_flags(layer);
    return out.str();
}

void save_grid(const GridWorld& world, const std::filesystem::path& path) {
    io::write_text_file(path, serialize_grid(world));
}

std::string layer_name(int layer) {
    if (layer == kGroundLayer) return "ground";
    return "air" + std::to_string(layer - 1);
}

int parse_layer_name(const std::string& name, int air_layer_count) {
    if (name == "ground") return kGroundLayer;
    if (name.rfind("air", 0) == 0) {
        try {
            const int idx = std::stoi(name.substr(3));
            if (idx >= 0 && idx < air_layer_count) return idx + 1;
        } catch (const std::exception&) {
        }
    }
    throw ParseError("unknown layer '" + name + "'; expected ground or air0..air" +
                     std::to_string(std::max(0, air_layer_count - 1)));
}

namespace {

struct Neighbor {
    HybridState state;
    double energy_j;
    double time_s;
};

/// Edge semantics of the hybrid search space. Ground moves are 8-connected
/// with step-height and slope limits and no corner cutting; air moves are
/// 26-connected across layers; a mode switch connects a ground cell to an
/// air layer straight above it through a free column.
class HybridGraph {
public:
    HybridGraph(const GridWorld& world, const CostModel& cost) : world_(world), cost_(cost) {}

    bool ground_step_ok(int x0, int y0, int x1, int y1) const {
        const double dz =
            std::abs(world_.elevation_m[world_.cell(x1, y1)] - world_.elevation_m[world_.cell(x0, y0)]);
        if (dz > cost_.max_step_height_m) return false;
        const double run = step_m(x1 - x0, y1 - y0);
        return std::atan2(dz, run) * kRadToDeg <= cost_.max_slope_deg;
    }

    bool column_free(int x, int y, int layer) const {
        for (int k = 1; k <= layer; ++k)
            if (world_.blocked(k, x, y)) return false;
        return true;
    }

    /// Distance of a single-cell move: resolution or resolution * sqrt(2).
    double step_m(int dx, int dy) const {
        return (dx != 0 && dy != 0) ? world_.resolution_m * kSqrt2 : world_.resolution_m;
    }

    double altitude(int layer) const { return world_.air_altitudes_m[static_cast<size_t>(layer) - 1]; }

    template <typename Fn>
    void for_each_neighbor(const HybridState& u, Fn&& fn) const {
        if (u.layer == kGroundLayer) {
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    if (dx == 0 && dy == 0) continue;
                    const int x = u.x + dx, y = u.y + dy;
                    if (!world_.in_bounds(x, y) || world_.blocked(kGroundLayer, x, y)) continue;
                    if (dx != 0 && dy != 0 &&
                        (world_.blocked(kGroundLayer, u.x + dx, u.y) ||
                         world_.blocked(kGroundLayer, u.x, u.y + dy)))
                        continue;  // no corner cutting
                    if (!ground_step_ok(u.x, u.y, x, y)) continue;
                    const double dist = step_m(dx, dy);
                    fn(Neighbor{{x, y, kGroundLayer}, cost_.drive_energy_per_m() * dist,
                                dist / cost_.drive_speed_mps});
                }
            for (int k = 1; k <= world_.air_layer_count(); ++k) {
                if (!column_free(u.x, u.y, k)) continue;
                fn(Neighbor{{u.x, u.y, k}, cost_.switch_energy_j(), cost_.switch_time_s});
            }
        } else {
            for (int dl = -1; dl <= 1; ++dl) {
                const int layer = u.layer + dl;
                if (layer < 1 || layer > world_.air_layer_count()) continue;
                for (int dy = -1; dy <= 1; ++dy)
                    for (int dx = -1; dx <= 1; ++dx) {
                        if (dx == 0 && dy == 0 && dl == 0) continue;
                        const int x = u.x + dx, y = u.y + dy;
                        if (!world_.in_bounds(x, y) || world_.blocked(layer, x, y)) continue;
                        const double h = (dx == 0 && dy == 0) ? 0.0 : step_m(dx, dy);
                        const double dz = dl == 0 ? 0.0 : altitude(layer) - altitude(u.layer);
                        const double dist = dl == 0 ? h : std::sqrt(h * h + dz * dz);
                        fn(Neighbor{{x, y, layer}, cost_.fly_energy_per_m() * dist,
                                    dist / cost_.fly_speed_mps});
                    }
            }
            if (!world_.blocked(kGroundLayer, u.x, u.y) && column_free(u.x, u.y, u.layer))
                fn(Neighbor{{u.x, u.y, kGroundLayer}, cost_.switch_energy_j(), cost_.switch_time_s});
        }
    }

private:
    const GridWorld& world_;
    const CostModel& cost_;
};

void attach_metadata(HybridPath& path, const GridWorld& world) {
    path.resolution_m = world.resolution_m;
    path.layer_altitudes_m = world.air_altitudes_m;
}

}  // namespace

HybridPath plan(const GridWorld& world, const HybridState& start, const HybridState& goal,
                const CostModel& cost, PlanTrace* trace) {
    world.validate();
    const auto check = [&](const HybridState& s, const char* what) {
        if (!world.in_bounds(s.x, s.y) || s.layer < 0 || s.layer > world.air_layer_count())
            throw DomainError(std::string(what) + " is outside the map");
        if (world.blocked(s.layer, s.x, s.y))
            throw DomainError(std::string(what) + " cell is blocked");
    };
    check(start, "start");
    check(goal, "goal");

    const HybridGraph graph(world, cost);
    const size_t per_layer = static_cast<size_t>(world.width) * world.height;
    const size_t total = per_layer * (1 + static_cast<size_t>(world.air_layer_count()));
    const auto index = [&](const HybridState& s) {
        return static_cast<size_t>(s.layer) * per_layer + world.cell(s.x, s.y);
    };
    const auto state_of = [&](size_t id) {
        const int layer = static_cast<int>(id / per_layer);
        const size_t c = id % per_layer;
        return HybridState{static_cast<int>(c % static_cast<size_t>(world.width)),
                           static_cast<int>(c / static_cast<size_t>(world.width)), layer};
    };

    // Admissible heuristic: any move pays at least the cheaper energy rate
    // per horizontal meter, and switches cost extra; the altitude component
    // is left out because switch edges teleport it.
    const double min_rate = std::min(cost.drive_energy_per_m(), cost.fly_energy_per_m());
    const auto heuristic = [&](const HybridState& s) {
        const double dx = static_cast<double>(s.x - goal.x);
        const double dy = static_cast<double>(s.y - goal.y);
        return std::sqrt(dx * dx + dy * dy) * world.resolution_m * min_rate;
    };

    // Equal f resolves to drive first (layer 0), then lower layers, then
    // lexicographic (x, y): deterministic and ground-preferring.
    struct QueueEntry {
        double f;
        int layer;
        int x;
        int y;
        size_t id;
        bool operator>(const QueueEntry& o) const {
            if (f != o.f) return f > o.f;
            if (layer != o.layer) return layer > o.layer;
            if (x != o.x) return x > o.x;
            return y > o.y;
        }
    };

    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> g(total, kInf);
    std::vector<size_t> parent(total, std::numeric_limits<size_t>::max());
    std::vector<uint8_t> closed(total, 0);
    std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<>> open;

    const size_t start_id = index(start);
    const size_t goal_id = index(goal);
    g[start_id] = 0.0;
    open.push({heuristic(start), start.layer, start.x, start.y, start_id});

    bool found = start_id == goal_id;
    while (!found && !open.empty()) {
        const auto top = open.top();
        open.pop();
        if (closed[top.id]) continue;
        closed[top.id] = 1;
        const HybridState u = state_of(top.id);
        if (trace) trace->expansions.push_back({u, g[top.id], heuristic(u)});
        if (top.id == goal_id) {
            found = true;
            break;
        }
        graph.for_each_neighbor(u, [&](const Neighbor& nb) {
            const size_t v = index(nb.state);
            if (closed[v]) return;
            const double cand = g[top.id] + nb.energy_j;
            if (cand < g[v]) {
                g[v] = cand;
                parent[v] = top.id;
                open.push({cand + heuristic(nb.state), nb.state.layer, nb.state.x, nb.state.y, v});
            }
        });
    }

    if (!found) throw DomainError("no hybrid path from start to goal");

    HybridPath path;
    attach_metadata(path, world);
    for (size_t id = goal_id;; id = parent[id]) {
        path.states.push_back(state_of(id));
        if (id == start_id) break;
    }
    std::reverse(path.states.begin(), path.states.end());

    const HybridGraph scorer(world, cost);
    for (size_t i = 0; i + 1 < path.states.size(); ++i) {
        const auto& a = path.states[i];
        const auto& b = path.states[i + 1];
        double energy, time;
        if (a.drives() != b.drives()) {
            energy = cost.switch_energy_j();
            time = cost.switch_time_s;
            ++path.switch_count;
        } else if (a.drives()) {
            const double dist = scorer.step_m(b.x - a.x, b.y - a.y);
            energy = cost.drive_energy_per_m() * dist;
            time = dist / cost.drive_speed_mps;
        } else {
            const double h = (a.x == b.x && a.y == b.y) ? 0.0 : scorer.step_m(b.x - a.x, b.y - a.y);
            const double dz =
                a.layer == b.layer ? 0.0 : scorer.altitude(b.layer) - scorer.altitude(a.layer);
            const double dist = a.layer == b.layer ? h : std::sqrt(h * h + dz * dz);
            energy = cost.fly_energy_per_m() * dist;
            time = dist / cost.fly_speed_mps;
        }
        path.segment_energies_j.push_back(energy);
        path.segment_times_s.push_back(time);
        path.total_energy_j += energy;
        path.total_time_s += time;
    }
    return path;
}

namespace {

GridWorld inflate_impl(const GridWorld& world, double radius_m, bool parallel) {
    if (radius_m < 0.0) throw DomainError("inflation radius must be non-negative");
    world.validate();
    GridWorld out = world;
    if (radius_m == 0.0) return out;

    const double radius_cells = radius_m / world.resolution_m;
    const int reach = static_cast<int>(std::floor(radius_cells));
    const double limit_sq = radius_cells * radius_cells;

    const auto dilate = [&](const std::vector<uint8_t>& src, std::vector<uint8_t>& dst) {
        const int64_t cells = static_cast<int64_t>(world.width) * world.height;
#pragma omp parallel for schedule(static) if (parallel)
        for (int64_t i = 0; i < cells; ++i) {
            const int x = static_cast<int>(i % world.width);
            const int y = static_cast<int>(i / world.width);
            uint8_t hit = src[static_cast<size_t>(i)];
            for (int dy = -reach; dy <= reach && !hit; ++dy) {
                const int yy = y + dy;
                if (yy < 0 || yy >= world.height) continue;
                for (int dx = -reach; dx <= reach; ++dx) {
                    const int xx = x + dx;
                    if (xx < 0 || xx >= world.width) continue;
                    if (static_cast<double>(dx) * dx + static_cast<double>(dy) * dy > limit_sq)
                        continue;
                    if (src[world.cell(xx, yy)]) {
                        hit = 1;
                        break;
                    }
                }
            }
            dst[static_cast<size_t>(i)] = hit;
        }
    };

    dilate(world.ground_blocked, out.ground_blocked);
    for (size_t k = 0; k < world.air_blocked.size(); ++k)
        dilate(world.air_blocked[k], out.air_blocked[k]);
    return out;
}

}  // namespace

GridWorld inflate(const GridWorld& world, double radius_m) {
    return inflate_impl(world, radius_m, true);
}

namespace reference {

GridWorld inflate(const GridWorld& world, double radius_m) {
    return inflate_impl(world, radius_m, false);
}

}  // namespace reference

namespace {

/// Supersampled ray walk between two cell centers on one layer. Every
/// touched cell must be free; drive rays also re-check the step/slope limits
/// between consecutive distinct cells.
bool line_of_sight(const GridWorld& world, const CostModel& cost, const HybridState& a,
                   const HybridState& b) {
    const double ax = a.x + 0.5, ay = a.y + 0.5;
    const double bx = b.x + 0.5, by = b.y + 0.5;
    const int steps = std::max(1, static_cast<int>(std::ceil(std::hypot(bx - ax, by - ay) * 4.0)));

    int px = a.x, py = a.y;
    for (int i = 0; i <= steps; ++i) {
        const double t = static_cast<double>(i) / steps;
        const int cx = std::clamp(static_cast<int>(std::floor(ax + (bx - ax) * t)), 0, world.width - 1);
        const int cy = std::clamp(static_cast<int>(std::floor(ay + (by - ay) * t)), 0, world.height - 1);
        if (world.blocked(a.layer, cx, cy)) return false;
        if (a.layer == kGroundLayer && (cx != px || cy != py)) {
            const double dz = std::abs(world.elevation_m[world.cell(cx, cy)] -
                                       world.elevation_m[world.cell(px, py)]);
            if (dz > cost.max_step_height_m) return false;
            const double run = std::hypot(static_cast<double>(cx - px), static_cast<double>(cy - py)) *
                               world.resolution_m;
            if (std::atan2(dz, run) * kRadToDeg > cost.max_slope_deg) return false;
        }
        px = cx;
        py = cy;
    }
    return true;
}

}  // namespace

HybridPath smooth(const HybridPath& path, const GridWorld& world, const CostModel& cost) {
    if (path.states.size() <= 2) return path;

    std::vector<HybridState> kept;
    size_t i = 0;
    while (i < path.states.size()) {
        size_t j = i;  // maximal run on one layer
        while (j + 1 < path.states.size() && path.states[j + 1].layer == path.states[i].layer) ++j;

        kept.push_back(path.states[i]);
        size_t k = i;
        while (k < j) {
            size_t best = k + 1;
            for (size_t l = j; l > k + 1; --l) {
                if (line_of_sight(world, cost, path.states[k], path.states[l])) {
                    best = l;
                    break;
                }
            }
            kept.push_back(path.states[best]);
            k = best;
        }
        i = j + 1;
    }

    HybridPath out;
    attach_metadata(out, world);
    out.states = std::move(kept);
    for (size_t s = 0; s + 1 < out.states.size(); ++s) {
        HybridPath pair;
        attach_metadata(pair, world);
        pair.states = {out.states[s], out.states[s + 1]};
        const auto et = path_energy(pair, cost);
        out.segment_energies_j.push_back(et.energy_j);
        out.segment_times_s.push_back(et.time_s);
        out.total_energy_j += et.energy_j;
        out.total_time_s += et.time_s;
        if (out.states[s].drives() != out.states[s + 1].drives()) ++out.switch_count;
    }
    return out;
}

EnergyTime path_energy(const HybridPath& path, const CostModel& cost) {
    EnergyTime out;
    for (size_t i = 0; i + 1 < path.states.size(); ++i) {
        const auto& a = path.states[i];
        const auto& b = path.states[i + 1];
        double energy, time;
        if (a.drives() != b.drives()) {
            if (a.x != b.x || a.y != b.y)
                throw Error("inconsistent path: a mode switch must stay on one cell");
            energy = cost.switch_energy_j();
            time = cost.switch_time_s;
        } else {
            const double h = std::hypot(static_cast<double>(b.x - a.x),
                                        static_cast<double>(b.y - a.y)) *
                             path.resolution_m;
            double dist = h;
            if (!a.drives() && a.layer != b.layer) {
                const double dz = path.layer_altitudes_m[static_cast<size_t>(b.layer) - 1] -
                                  path.layer_altitudes_m[static_cast<size_t>(a.layer) - 1];
                dist = std::sqrt(h * h + dz * dz);
            }
            const double rate = a.drives() ? cost.drive_energy_per_m() : cost.fly_energy_per_m();
            const double speed = a.drives() ? cost.drive_speed_mps : cost.fly_speed_mps;
            energy = rate * dist;
            time = dist / speed;
        }
        out.energy_j += energy;
        out.time_s += time;
    }
    return out;
}

}  // namespace landair::planner
