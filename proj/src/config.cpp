#include "landair/config.hpp"

#include <fstream>

#include "landair/errors.hpp"

namespace landair::config {

json load_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open JSON file: " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

void apply_override(json& document, const std::string& key_value) {
    const auto eq = key_value.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ParseError("override must look like section.key=value, got '" + key_value + "'");
    const std::string dotted = key_value.substr(0, eq);
    const std::string raw = key_value.substr(eq + 1);

    json value;
    try {
        value = json::parse(raw);
    } catch (const json::parse_error&) {
        value = raw;  // plain string
    }

    json* node = &document;
    size_t pos = 0;
    while (true) {
        const auto dot = dotted.find('.', pos);
        const std::string key = dotted.substr(pos, dot == std::string::npos ? dot : dot - pos);
        if (key.empty()) throw ParseError("empty key segment in override '" + key_value + "'");
        if (dot == std::string::npos) {
            (*node)[key] = value;
            return;
        }
        node = &(*node)[key];
        pos = dot + 1;
    }
}

void apply_overrides(json& document, const std::vector<std::string>& overrides) {
    for (const auto& kv : overrides) apply_override(document, kv);
}

namespace {

double need_number(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number())
        throw ParseError(std::string("missing or non-numeric config key: ") + key);
    return j[key].get<double>();
}

double number_or(const json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number()) throw ParseError(std::string("non-numeric config key: ") + key);
    return j[key].get<double>();
}

const json& need_section(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_object())
        throw ParseError(std::string("missing config section: ") + key);
    return j[key];
}

}  // namespace

endurance::WeightBreakdown weights_from_json(const json& j) {
    endurance::WeightBreakdown w;
    w.frame_kg = need_number(j, "frame_kg");
    w.battery_kg = need_number(j, "battery_kg");
    w.deform_module_kg = need_number(j, "deform_module_kg");
    w.avionics_kg = need_number(j, "avionics_kg");
    w.payload_kg = need_number(j, "payload_kg");
    return w;
}

endurance::PowerBudget power_budget_from_json(const json& j) {
    endurance::PowerBudget p;
    p.avionics_w = need_number(j, "avionics_w");
    p.perception_w = need_number(j, "perception_w");
    p.deform_w = need_number(j, "deform_w");
    return p;
}

powertrain::BatteryModel battery_from_json(const json& j) {
    powertrain::BatteryModel b;
    b.slope_wh_per_kg = need_number(j, "slope_wh_per_kg");
    b.intercept_wh = number_or(j, "intercept_wh", 0.0);
    b.energy_density_wh_per_kg = number_or(j, "energy_density_wh_per_kg", b.slope_wh_per_kg);
    b.nominal_voltage_v = number_or(j, "nominal_voltage_v", 0.0);
    return b;
}

powertrain::ThrustCurve curve_from_json(const json& j) {
    powertrain::ThrustCurve c;
    const std::string kind = j.value("kind", "current");
    if (kind == "current")
        c.kind = powertrain::CurveKind::current;
    else if (kind == "efficiency")
        c.kind = powertrain::CurveKind::efficiency;
    else
        throw ParseError("curve kind must be 'current' or 'efficiency', got '" + kind + "'");

    if (!j.contains("coefficients") || !j["coefficients"].is_array())
        throw ParseError("curve needs a 'coefficients' array");
    for (const auto& v : j["coefficients"]) c.coefficients.push_back(v.get<double>());

    if (!j.contains("valid_range_n") || !j["valid_range_n"].is_array() ||
        j["valid_range_n"].size() != 2)
        throw ParseError("curve needs valid_range_n: [min, max]");
    c.thrust_min_n = j["valid_range_n"][0].get<double>();
    c.thrust_max_n = j["valid_range_n"][1].get<double>();
    c.max_thrust_n = number_or(j, "max_thrust_n", c.thrust_max_n);
    return c;
}

json curve_to_json(const powertrain::ThrustCurve& curve) {
    json j;
    j["kind"] = curve.kind == powertrain::CurveKind::current ? "current" : "efficiency";
    j["coefficients"] = curve.coefficients;
    j["valid_range_n"] = {curve.thrust_min_n, curve.thrust_max_n};
    j["max_thrust_n"] = curve.max_thrust_n;
    return j;
}

powertrain::PowerTrainModel powertrain_from_json(const json& j) {
    powertrain::PowerTrainModel m;
    m.motor_name = j.value("motor_name", "");
    m.kv_rpm_per_v = need_number(j, "kv_rpm_per_v");
    m.propeller_diameter_in = number_or(j, "propeller_diameter_in", 0.0);
    m.current_curve = curve_from_json(need_section(j, "current_curve"));
    m.efficiency_curve = curve_from_json(need_section(j, "efficiency_curve"));
    return m;
}

endurance::EnduranceConfig endurance_config_from_json(const json& robot_spec) {
    endurance::EnduranceConfig cfg;
    const auto& e = need_section(robot_spec, "endurance");
    cfg.rotor_count = static_cast<int>(need_number(e, "rotor_count"));
    cfg.nominal_voltage_v = need_number(e, "nominal_voltage_v");
    cfg.fixed_mass_kg = need_number(e, "fixed_mass_kg");
    cfg.gravity_mps2 = number_or(e, "gravity_mps2", 9.81);
    cfg.battery = battery_from_json(need_section(robot_spec, "battery_model"));
    cfg.power_train = powertrain_from_json(need_section(robot_spec, "powertrain"));
    cfg.power_budget = power_budget_from_json(need_section(robot_spec, "power_budget"));
    if (cfg.rotor_count < 1) throw ParseError("rotor_count must be at least 1");
    if (cfg.nominal_voltage_v <= 0.0) throw ParseError("nominal_voltage_v must be positive");
    if (cfg.fixed_mass_kg <= 0.0) throw ParseError("fixed_mass_kg must be positive");
    return cfg;
}

dynamics::SimulationSpec simulation_spec_from_json(const json& robot_spec) {
    const auto& d = need_section(robot_spec, "dynamics");

    dynamics::SimulationSpec spec;
    if (!d.contains("arms") || !d["arms"].is_array() || d["arms"].size() != 4)
        throw ParseError("dynamics.arms must list exactly 4 arms");
    for (size_t i = 0; i < 4; ++i) {
        const auto& a = d["arms"][i];
        dynamics::ArmGeometry arm;
        const std::string id = a.value("arm_id", "");
        if (id == "fl")
            arm.arm_id = dynamics::ArmId::fl;
        else if (id == "fr")
            arm.arm_id = dynamics::ArmId::fr;
        else if (id == "rl")
            arm.arm_id = dynamics::ArmId::rl;
        else if (id == "rr")
            arm.arm_id = dynamics::ArmId::rr;
        else
            throw ParseError("arm_id must be one of fl, fr, rl, rr");
        arm.mass_kg = need_number(a, "mass_kg");
        arm.length_m = need_number(a, "length_m");
        arm.tilt_rad = geometry::deg_to_rad(need_number(a, "tilt_deg"));
        arm.fold_angle_rad = geometry::deg_to_rad(number_or(a, "fold_angle_deg", 135.0));
        arm.yaw_rad = geometry::deg_to_rad(need_number(a, "yaw_deg"));
        spec.arms[i] = arm;
    }

    const auto& rotor = need_section(d, "rotor");
    spec.rotor.thrust_coefficient = need_number(rotor, "thrust_coefficient");
    spec.rotor.drag_coefficient = need_number(rotor, "drag_coefficient");
    spec.max_speed_rad_s = need_number(rotor, "max_speed_rpm") * 2.0 * geometry::kPi / 60.0;

    const auto& inertia = need_section(d, "inertia");
    const auto vec3 = [&](const char* key) {
        if (!inertia.contains(key) || !inertia[key].is_array() || inertia[key].size() != 3)
            throw ParseError(std::string("dynamics.inertia.") + key + " must be [x, y, z]");
        return geometry::Vec3{inertia[key][0].get<double>(), inertia[key][1].get<double>(),
                              inertia[key][2].get<double>()};
    };
    spec.inertia.body_diag_kgm2 = vec3("body_kgm2");
    spec.inertia.rotor_diag_kgm2 = vec3("rotor_kgm2");
    spec.inertia.damping_nms = vec3("damping_nms");

    spec.total_mass_kg = need_number(d, "total_mass_kg");
    spec.gravity_mps2 = number_or(d, "gravity_mps2", 9.81);

    if (d.contains("profile")) {
        const auto& p = d["profile"];
        spec.tilt_rad = geometry::deg_to_rad(number_or(p, "tilt_deg", 15.0));
        spec.sine_amplitude_m = number_or(p, "sin_amplitude_m", 1.0);
        spec.sine_period_s = number_or(p, "sin_period_s", 4.0);
        spec.forward_speed_mps = number_or(p, "forward_speed_mps", 3.0);
    }
    return spec;
}

planner::CostModel cost_model_from_json(const json& j) {
    planner::CostModel c;
    c.drive_power_w = number_or(j, "drive_power_w", c.drive_power_w);
    c.fly_power_w = number_or(j, "fly_power_w", c.fly_power_w);
    c.drive_speed_mps = number_or(j, "drive_speed_mps", c.drive_speed_mps);
    c.fly_speed_mps = number_or(j, "fly_speed_mps", c.fly_speed_mps);
    c.switch_time_s = number_or(j, "switch_time_s", c.switch_time_s);
    c.switch_power_w = number_or(j, "switch_power_w", c.switch_power_w);
    c.max_step_height_m = number_or(j, "max_step_height_m", c.max_step_height_m);
    c.max_slope_deg = number_or(j, "max_slope_deg", c.max_slope_deg);
    return c;
}

std::vector<evaluation::FleetRecord> fleet_from_json(const json& j) {
    if (!j.is_array()) throw ParseError("fleet file must be a JSON array of records");
    std::vector<evaluation::FleetRecord> fleet;
    for (const auto& r : j) {
        evaluation::FleetRecord rec;
        rec.name = r.value("name", "");
        if (rec.name.empty()) throw ParseError("every fleet record needs a name");
        rec.hover_duration_min = need_number(r, "hover_duration_min");
        rec.payload_kg = need_number(r, "payload_kg");
        rec.fly_speed_mps = need_number(r, "fly_speed_mps");
        rec.drive_mileage_km = need_number(r, "drive_mileage_km");
        rec.obstacle_height_mm = need_number(r, "obstacle_height_mm");
        rec.drive_speed_mps = need_number(r, "drive_speed_mps");
        rec.flight_area_m2 = need_number(r, "flight_area_m2");
        rec.drive_area_m2 = need_number(r, "drive_area_m2");
        rec.switch_time_s = need_number(r, "switch_time_s");
        rec.weight_kg = need_number(r, "weight_kg");
        fleet.push_back(std::move(rec));
    }
    return fleet;
}

evaluation::WeightSet weight_set_from_json(const json& j) {
    evaluation::WeightSet w;
    w.hover_duration = number_or(j, "hover_duration", 1.0);
    w.payload = number_or(j, "payload", 1.0);
    w.fly_speed = number_or(j, "fly_speed", 1.0);
    w.drive_mileage = number_or(j, "drive_mileage", 1.0);
    w.obstacle_height = number_or(j, "obstacle_height", 1.0);
    w.drive_speed = number_or(j, "drive_speed", 1.0);
    w.area_penalty = number_or(j, "area_penalty", 1.0);
    w.weight_penalty = number_or(j, "weight_penalty", 1.0);
    return w;
}

}  // namespace landair::config
