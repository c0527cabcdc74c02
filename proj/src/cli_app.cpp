#include "landair/cli_app.hpp"

#include <algorithm>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "landair/config.hpp"
#include "landair/dynamics.hpp"
#include "landair/endurance.hpp"
#include "landair/errors.hpp"
#include "landair/evaluation.hpp"
#include "landair/io.hpp"
#include "landair/planner.hpp"
#include "landair/powertrain.hpp"

namespace landair::cli {

namespace {

using config::json;

constexpr const char* kFormatHelp = R"(File formats:
  battery CSV    header `mass_kg,capacity_wh`; '.' decimals, UTF-8, no
                 thousands separators.
  motor CSV      header `thrust_n,current_a,efficiency_g_per_w`.
  robot spec     JSON with sections: weights {frame_kg, battery_kg,
                 deform_module_kg, avionics_kg, payload_kg}, power_budget
                 {avionics_w, perception_w, deform_w}, endurance
                 {rotor_count, nominal_voltage_v, fixed_mass_kg,
                 gravity_mps2}, battery_model {slope_wh_per_kg,
                 intercept_wh, nominal_voltage_v}, powertrain {motor_name,
                 kv_rpm_per_v, propeller_diameter_in, current_curve,
                 efficiency_curve}, dynamics {arms[4], rotor, inertia,
                 total_mass_kg, profile}, dimensions, cost_model.
  curve          {kind, coefficients (ascending powers), valid_range_n
                 [min,max], max_thrust_n}.
  map file       text: `width height resolution_m n_air_layers altitudes...`
                 then a height x width 0/1 ground matrix, an elevation
                 matrix in meters, and one 0/1 matrix per air layer.
  fleet          JSON array of records: name, hover_duration_min,
                 payload_kg, fly_speed_mps, drive_mileage_km,
                 obstacle_height_mm, drive_speed_mps, flight_area_m2,
                 drive_area_m2, switch_time_s, weight_kg.
Outputs:
  duration CSV   `battery_mass_kg,duration_min,feasible`
  torque CSV     `t_s,arm_id,torque_nmm` sorted by (t, arm)
  path CSV       `x,y,layer,mode,t_s,e_j` with cumulative time and energy
  radar CSV      `name,f_e,g_e,d_e,t_s_norm`
)";

void emit_json(const json& doc, const std::string& out_path) {
    const std::string text = doc.dump(2) + "\n";
    if (out_path.empty())
        std::cout << text;
    else
        io::write_text_file(out_path, text);
}

json load_config(const std::string& path, const std::vector<std::string>& overrides) {
    json doc = config::load_json(path);
    config::apply_overrides(doc, overrides);
    return doc;
}

std::string fmt(double v) { return io::format_number(v); }

// ---------------------------------------------------------------- fit ----

struct FitArgs {
    std::string battery_csv;
    std::vector<std::string> motor_csvs;
    int current_degree = 2;
    int efficiency_degree = 2;
    double rank_thrust_n = -1.0;
    double margin = 1.0;
    std::string out;
};

int run_fit(const FitArgs& args) {
    json report;

    if (!args.battery_csv.empty()) {
        const auto points = powertrain::load_battery_csv(args.battery_csv);
        const auto fit = powertrain::fit_linear(points);
        report["battery"] = {{"slope_wh_per_kg", fit.model.slope_wh_per_kg},
                             {"intercept_wh", fit.model.intercept_wh},
                             {"energy_density_wh_per_kg", fit.model.energy_density_wh_per_kg},
                             {"residual_rms_wh", fit.residual_rms},
                             {"points", points.size()}};
    }

    std::vector<powertrain::PowerTrainModel> models;
    if (!args.motor_csvs.empty()) report["motors"] = json::array();
    for (const auto& path : args.motor_csvs) {
        const auto table = powertrain::load_motor_csv(path);
        const auto current =
            powertrain::fit_poly(table.current_points, args.current_degree,
                                 powertrain::CurveKind::current);
        const auto efficiency =
            powertrain::fit_poly(table.efficiency_points, args.efficiency_degree,
                                 powertrain::CurveKind::efficiency);

        powertrain::PowerTrainModel model;
        model.motor_name = std::filesystem::path(path).stem().string();
        model.current_curve = current.curve;
        model.efficiency_curve = efficiency.curve;
        models.push_back(model);

        json m;
        m["motor_name"] = model.motor_name;
        m["current_curve"] = config::curve_to_json(current.curve);
        m["current_residual_rms_a"] = current.residual_rms;
        m["current_monotone_non_decreasing"] = current.monotone_non_decreasing;
        m["efficiency_curve"] = config::curve_to_json(efficiency.curve);
        m["efficiency_residual_rms"] = efficiency.residual_rms;
        report["motors"].push_back(m);
    }

    if (args.rank_thrust_n >= 0.0) {
        const auto sel = powertrain::select_powertrain(models, args.rank_thrust_n, args.margin);
        json s;
        s["required_hover_thrust_n"] = args.rank_thrust_n;
        s["margin"] = args.margin;
        s["feasible"] = json::array();
        for (const auto& c : sel.feasible)
            s["feasible"].push_back({{"motor_name", c.model.motor_name},
                                     {"efficiency_at_hover_g_per_w", c.efficiency_at_hover}});
        s["infeasible"] = json::array();
        for (const auto& c : sel.infeasible)
            s["infeasible"].push_back({{"motor_name", c.model.motor_name}, {"reason", c.reason}});
        report["selection"] = s;
    }

    if (report.empty()) throw ParseError("fit: nothing to do; give --battery-csv or --motor-csv");
    emit_json(report, args.out);
    return 0;
}

// ---------------------------------------------------------- endurance ----

struct EnduranceArgs {
    std::string config_path;
    std::vector<std::string> overrides;
    double mass_min = 0.5;
    double mass_max = 16.0;
    double step = 0.05;
    std::string out_csv;
    std::string out;
};

int run_endurance(const EnduranceArgs& args) {
    const json doc = load_config(args.config_path, args.overrides);
    const auto cfg = config::endurance_config_from_json(doc);

    const auto series = endurance::duration_curve(cfg, args.mass_min, args.mass_max, args.step);

    if (!args.out_csv.empty()) {
        std::vector<std::vector<std::string>> rows;
        rows.reserve(series.size());
        for (const auto& p : series)
            rows.push_back({fmt(p.battery_mass_kg),
                            p.feasible ? fmt(p.duration_min) : "nan",
                            p.feasible ? "1" : "0"});
        io::write_csv(args.out_csv, {"battery_mass_kg", "duration_min", "feasible"}, rows);
    }

    json report;
    report["no_fly_boundary_kg"] = endurance::no_fly_boundary_kg(cfg);

    const auto best = std::max_element(series.begin(), series.end(),
                                       [](const auto& a, const auto& b) {
                                           const double da = a.feasible ? a.duration_min : -1.0;
                                           const double db = b.feasible ? b.duration_min : -1.0;
                                           return da < db;
                                       });
    if (best != series.end() && best->feasible) {
        report["series_peak"] = {{"battery_mass_kg", best->battery_mass_kg},
                                 {"duration_min", best->duration_min}};
    }

    if (doc.contains("weights")) {
        const auto w = config::weights_from_json(doc["weights"]);
        report["total_weight_kg"] = endurance::total_weight_kg(w);
        report["hover_duration_at_spec_battery_min"] =
            endurance::duration_at(cfg, w.battery_kg).value_or(-1.0);
    }
    if (doc.contains("dimensions")) {
        const auto& dims = doc["dimensions"];
        const double reduction = evaluation::footprint_reduction_pct(
            dims["unfolded_width_m"].get<double>(), dims["unfolded_depth_m"].get<double>(),
            dims["folded_width_m"].get<double>(), dims["folded_depth_m"].get<double>());
        report["footprint_reduction_pct"] = reduction;
        if (dims.contains("quoted_footprint_reduction_pct")) {
            // the rectangular model and the manufacturer silhouette figure
            // disagree; report both rather than pick one
            report["quoted_footprint_reduction_pct"] =
                dims["quoted_footprint_reduction_pct"].get<double>();
        }
    }
    if (doc.contains("cost_model")) {
        const auto cost = config::cost_model_from_json(doc["cost_model"]);
        report["energy_saving_drive_vs_fly_pct"] =
            evaluation::energy_saving_pct(cost.drive_power_w, cost.fly_power_w);
    }

    emit_json(report, args.out);
    return 0;
}

// --------------------------------------------------- optimize-battery ----

struct OptimizeArgs {
    std::string config_path;
    std::vector<std::string> overrides;
    double mass_min = 0.5;
    double mass_max = 16.0;
    double coarse_step = 0.25;
    double refine_tol = 0.001;
    std::string out;
};

int run_optimize(const OptimizeArgs& args) {
    const json doc = load_config(args.config_path, args.overrides);
    const auto cfg = config::endurance_config_from_json(doc);

    const auto best = endurance::optimize_battery_mass(cfg, args.mass_min, args.mass_max,
                                                       args.coarse_step, args.refine_tol);
    json report;
    report["battery_mass_kg"] = best.battery_mass_kg;
    report["duration_min"] = best.duration_min;
    report["no_fly_boundary_kg"] = endurance::no_fly_boundary_kg(cfg);
    emit_json(report, args.out);
    return 0;
}

// -------------------------------------------------------- simulate-arm ----

struct SimulateArgs {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string profile = "speed_sweep";
    double duration = 20.0;
    double dt = 0.01;
    std::string out_csv;
};

int run_simulate(const SimulateArgs& args) {
    const json doc = load_config(args.config_path, args.overrides);
    const auto spec = config::simulation_spec_from_json(doc);
    const auto profile = dynamics::profile_from_name(args.profile);

    const auto samples = dynamics::simulate_profile(profile, spec, args.duration, args.dt);

    std::vector<std::vector<std::string>> rows;
    rows.reserve(samples.size());
    for (const auto& s : samples)
        rows.push_back({fmt(s.t_s), dynamics::arm_name(s.arm_id), fmt(s.torque_nmm)});
    io::write_csv(args.out_csv, {"t_s", "arm_id", "torque_nmm"}, rows);
    return 0;
}

// ---------------------------------------------------------------- plan ----

struct PlanArgs {
    std::string map_path;
    std::string config_path;
    std::vector<std::string> overrides;
    std::string start;
    std::string goal;
    double inflate_radius = 0.0;
    bool no_smooth = false;
    std::string out_csv;
};

planner::HybridState parse_state(const std::string& text, const planner::GridWorld& world) {
    std::vector<std::string> parts;
    std::string token;
    std::istringstream ss(text);
    while (std::getline(ss, token, ',')) parts.push_back(token);
    if (parts.size() != 3)
        throw ParseError("state must be 'x,y,layer' (layer: ground or airN), got '" + text + "'");
    planner::HybridState s;
    try {
        s.x = std::stoi(parts[0]);
        s.y = std::stoi(parts[1]);
    } catch (const std::exception&) {
        throw ParseError("bad cell coordinates in '" + text + "'");
    }
    s.layer = planner::parse_layer_name(parts[2], world.air_layer_count());
    return s;
}

int run_plan(const PlanArgs& args) {
    planner::GridWorld world = planner::load_grid(args.map_path);

    planner::CostModel cost;
    if (!args.config_path.empty()) {
        const json doc = load_config(args.config_path, args.overrides);
        if (doc.contains("cost_model")) cost = config::cost_model_from_json(doc["cost_model"]);
    } else if (!args.overrides.empty()) {
        json doc;
        doc["cost_model"] = json::object();
        config::apply_overrides(doc, args.overrides);
        cost = config::cost_model_from_json(doc["cost_model"]);
    }

    if (args.inflate_radius > 0.0) world = planner::inflate(world, args.inflate_radius);

    const auto start = parse_state(args.start, world);
    const auto goal = parse_state(args.goal, world);

    planner::HybridPath path = planner::plan(world, start, goal, cost);
    if (!args.no_smooth) path = planner::smooth(path, world, cost);

    std::vector<std::vector<std::string>> rows;
    rows.reserve(path.states.size());
    double t = 0.0, e = 0.0;
    for (size_t i = 0; i < path.states.size(); ++i) {
        if (i > 0) {
            t += path.segment_times_s[i - 1];
            e += path.segment_energies_j[i - 1];
        }
        const auto& s = path.states[i];
        rows.push_back({std::to_string(s.x), std::to_string(s.y), planner::layer_name(s.layer),
                        s.drives() ? "drive" : "fly", fmt(t), fmt(e)});
    }
    io::write_csv(args.out_csv, {"x", "y", "layer", "mode", "t_s", "e_j"}, rows);

    std::cerr << "path: " << path.states.size() << " states, " << fmt(path.total_energy_j)
              << " J, " << fmt(path.total_time_s) << " s, " << path.switch_count
              << " mode switches\n";
    return 0;
}

// ------------------------------------------------------------ evaluate ----

struct EvaluateArgs {
    std::string fleet_path;
    std::string weights_path;
    std::vector<std::string> overrides;
    std::string out;
    std::string out_csv;
};

int run_evaluate(const EvaluateArgs& args) {
    const auto fleet = config::fleet_from_json(config::load_json(args.fleet_path));

    json weights_doc = json::object();
    if (!args.weights_path.empty()) weights_doc = config::load_json(args.weights_path);
    config::apply_overrides(weights_doc, args.overrides);
    const auto weights = config::weight_set_from_json(weights_doc);

    const auto report = evaluation::evaluate_fleet(fleet, weights);

    if (!args.out_csv.empty()) {
        std::vector<std::vector<std::string>> rows;
        for (const auto& s : report.scores)
            rows.push_back({s.name, fmt(s.flight), fmt(s.ground), fmt(s.duration),
                            fmt(s.switch_time_norm)});
        io::write_csv(args.out_csv, {"name", "f_e", "g_e", "d_e", "t_s_norm"}, rows);
    }

    json out;
    out["robots"] = json::array();
    for (const auto& s : report.scores)
        out["robots"].push_back({{"name", s.name},
                                 {"flight_index", s.flight},
                                 {"ground_index", s.ground},
                                 {"duration_index", s.duration},
                                 {"switch_time_s", s.switch_time_s},
                                 {"switch_time_norm", s.switch_time_norm}});
    out["ranking_flight"] = report.ranking_flight;
    out["ranking_ground"] = report.ranking_ground;
    out["ranking_duration"] = report.ranking_duration;
    emit_json(out, args.out);
    return 0;
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"Design analysis and mission planning for hybrid land-air robots"};
    app.require_subcommand(0, 1);
    app.footer(kFormatHelp);

    FitArgs fit_args;
    auto* fit = app.add_subcommand("fit", "Fit battery and motor curves from CSV tables");
    fit->add_option("--battery-csv", fit_args.battery_csv, "battery table: mass_kg,capacity_wh");
    fit->add_option("--motor-csv", fit_args.motor_csvs,
                    "motor table: thrust_n,current_a,efficiency_g_per_w (repeatable)");
    fit->add_option("--current-degree", fit_args.current_degree, "current fit degree (1..3)")
        ->default_val(2);
    fit->add_option("--efficiency-degree", fit_args.efficiency_degree,
                    "efficiency fit degree (1..3)")
        ->default_val(2);
    fit->add_option("--rank-thrust", fit_args.rank_thrust_n,
                    "rank motors by efficiency at this hover thrust [N]");
    fit->add_option("--margin", fit_args.margin, "required max-thrust margin")->default_val(1.0);
    fit->add_option("--out", fit_args.out, "report JSON path (default: stdout)");

    EnduranceArgs end_args;
    auto* endur = app.add_subcommand("endurance", "Duration-vs-battery-mass analysis");
    endur->add_option("--config", end_args.config_path, "robot spec JSON")->required();
    endur->add_option("--set", end_args.overrides, "override config: section.key=value");
    endur->add_option("--mass-min", end_args.mass_min, "sweep start [kg]")->default_val(0.5);
    endur->add_option("--mass-max", end_args.mass_max, "sweep end [kg]")->default_val(16.0);
    endur->add_option("--step", end_args.step, "sweep step [kg]")->default_val(0.05);
    endur->add_option("--out-csv", end_args.out_csv, "duration series CSV path");
    endur->add_option("--out", end_args.out, "report JSON path (default: stdout)");

    OptimizeArgs opt_args;
    auto* opt = app.add_subcommand("optimize-battery", "Find the battery mass maximizing hover time");
    opt->add_option("--config", opt_args.config_path, "robot spec JSON")->required();
    opt->add_option("--set", opt_args.overrides, "override config: section.key=value");
    opt->add_option("--mass-min", opt_args.mass_min, "search start [kg]")->default_val(0.5);
    opt->add_option("--mass-max", opt_args.mass_max, "search end [kg]")->default_val(16.0);
    opt->add_option("--coarse-step", opt_args.coarse_step, "coarse scan step [kg]")->default_val(0.25);
    opt->add_option("--refine-tol", opt_args.refine_tol, "refinement tolerance [kg]")
        ->default_val(0.001);
    opt->add_option("--out", opt_args.out, "report JSON path (default: stdout)");

    SimulateArgs sim_args;
    auto* sim = app.add_subcommand("simulate-arm", "Servo torque time series for a motion profile");
    sim->add_option("--config", sim_args.config_path, "robot spec JSON")->required();
    sim->add_option("--set", sim_args.overrides, "override config: section.key=value");
    sim->add_option("--profile", sim_args.profile,
                    "accel_x_15deg | accel_y_15deg | sinusoid | speed_sweep")
        ->required();
    sim->add_option("--duration", sim_args.duration, "simulated time [s]")->default_val(20.0);
    sim->add_option("--dt", sim_args.dt, "time step [s]")->default_val(0.01);
    sim->add_option("--out-csv", sim_args.out_csv, "torque CSV path")->required();

    PlanArgs plan_args;
    auto* planc = app.add_subcommand("plan", "Energy-minimal hybrid drive/fly path");
    planc->add_option("--map", plan_args.map_path, "grid map file")->required();
    planc->add_option("--config", plan_args.config_path, "robot spec JSON with cost_model");
    planc->add_option("--set", plan_args.overrides, "override config: cost_model.key=value");
    planc->add_option("--start", plan_args.start, "x,y,layer (e.g. 0,0,ground)")->required();
    planc->add_option("--goal", plan_args.goal, "x,y,layer")->required();
    planc->add_option("--inflate-radius", plan_args.inflate_radius,
                      "obstacle inflation radius [m]")
        ->default_val(0.0);
    planc->add_flag("--no-smooth", plan_args.no_smooth, "emit the raw grid path");
    planc->add_option("--out-csv", plan_args.out_csv, "path CSV")->required();

    EvaluateArgs eval_args;
    auto* eval = app.add_subcommand("evaluate", "Score and rank a fleet of robot designs");
    eval->add_option("--fleet", eval_args.fleet_path, "fleet JSON array")->required();
    eval->add_option("--weights", eval_args.weights_path, "metric weights JSON");
    eval->add_option("--set", eval_args.overrides, "override weights: key=value");
    eval->add_option("--out", eval_args.out, "report JSON path (default: stdout)");
    eval->add_option("--out-csv", eval_args.out_csv, "radar rows CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (fit->parsed()) return run_fit(fit_args);
        if (endur->parsed()) return run_endurance(end_args);
        if (opt->parsed()) return run_optimize(opt_args);
        if (sim->parsed()) return run_simulate(sim_args);
        if (planc->parsed()) return run_plan(plan_args);
        if (eval->parsed()) return run_evaluate(eval_args);
        std::cerr << app.help() << std::flush;
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace landair::cli
