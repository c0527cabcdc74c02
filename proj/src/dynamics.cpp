#include "landair/dynamics.hpp"

#include <cmath>
#include <string>

#include "landair/errors.hpp"

namespace landair::dynamics {

const char* arm_name(ArmId id) {
    switch (id) {
        case ArmId::fl: return "fl";
        case ArmId::fr: return "fr";
        case ArmId::rl: return "rl";
        case ArmId::rr: return "rr";
    }
    return "?";
}

Vec3 gyroscopic_torque(const Vec3& angular_velocity, const Vec3& rotor_inertia_diag,
                       const std::array<double, 4>& rotor_speeds_rad_s) {
    Vec3 total;
    for (int i = 0; i < 4; ++i) {
        const double sign = (i % 2 == 0) ? 1.0 : -1.0;
        const Vec3 momentum{0.0, 0.0, rotor_inertia_diag.z * sign * rotor_speeds_rad_s[static_cast<size_t>(i)]};
        total = total + angular_velocity.cross(momentum);
    }
    return total;
}

Vec3 friction_torque(const Vec3& damping_nms, const Vec3& attitude_rates_rad_s) {
    return {damping_nms.x * attitude_rates_rad_s.x, damping_nms.y * attitude_rates_rad_s.y,
            damping_nms.z * attitude_rates_rad_s.z};
}

Vec3 body_torque(const Vec3& body_inertia_diag, const Vec3& angular_acceleration,
                 const Vec3& angular_velocity, const Vec3& gyroscopic, const Vec3& friction) {
    const Vec3 j_alpha{body_inertia_diag.x * angular_acceleration.x,
                       body_inertia_diag.y * angular_acceleration.y,
                       body_inertia_diag.z * angular_acceleration.z};
    const Vec3 j_omega{body_inertia_diag.x * angular_velocity.x,
                       body_inertia_diag.y * angular_velocity.y,
                       body_inertia_diag.z * angular_velocity.z};
    return j_alpha + angular_velocity.cross(j_omega) + gyroscopic + friction;
}

double arm_inertia_kgm2(double mass_kg, double length_m, double tilt_rad, bool is_front) {
    if (mass_kg <= 0.0 || length_m <= 0.0) throw DomainError("arm mass and length must be positive");
    const double rod = mass_kg / 12.0 * length_m * length_m;
    return is_front ? rod * std::cos(tilt_rad) : rod;
}

Mat3 rotate_inertia(const Mat3& inertia, double yaw_rad) {
    const Mat3 r = geometry::rotation_z(yaw_rad);
    return r * inertia * r.transpose();
}

std::array<Vec3, 4> arm_forces(const std::array<ArmGeometry, 4>& arms, const Vec3& accel_mps2) {
    std::array<Vec3, 4> forces;
    for (size_t i = 0; i < 4; ++i) {
        const Vec3 body_force = arms[i].mass_kg * accel_mps2;
        forces[i] = geometry::rotation_z(arms[i].yaw_rad).transpose() * body_force;
    }
    return forces;
}

double servo_torque_nmm(const ArmGeometry& arm, const RotorCommand& rotor,
                        double rotor_speed_rad_s, const Vec3& accel_mps2, double gravity_mps2) {
    if (std::abs(arm.fold_angle_rad - kDeployedFoldAngleRad) > 1e-9)
        throw DomainError(std::string("servo torque undefined while arm '") + arm_name(arm.arm_id) +
                          "' is mid-deformation (fold angle must be 135 deg)");

    const double cos_tilt = std::cos(arm.tilt_rad);
    const double sin_tilt = std::sin(arm.tilt_rad);
    const double speed_sq = rotor_speed_rad_s * rotor_speed_rad_s;

    const double gravity_nm = arm.mass_kg * gravity_mps2 * (arm.length_m / 2.0) * cos_tilt;
    const double thrust_nm = rotor.thrust_coefficient * speed_sq * arm.length_m * sin_tilt *
                             std::abs(std::sin(arm.yaw_rad));
    const double drag_nm = rotor.drag_coefficient * speed_sq * cos_tilt;

    // Transverse acceleration in the arm frame drives the inertial reaction.
    const Vec3 local = geometry::rotation_z(arm.yaw_rad).transpose() * (arm.mass_kg * accel_mps2);
    const double transverse = std::abs(local.y) / arm.mass_kg;
    const bool is_front = arm.arm_id == ArmId::fl || arm.arm_id == ArmId::fr;
    const double inertial_nm = arm_inertia_kgm2(arm.mass_kg, arm.length_m, arm.tilt_rad, is_front) *
                               (6.0 * transverse / arm.length_m);

    return (gravity_nm + thrust_nm + drag_nm + inertial_nm) * 1000.0;
}

MotionProfile profile_from_name(std::string_view name) {
    if (name == "accel_x_15deg") return MotionProfile::accel_x_15deg;
    if (name == "accel_y_15deg") return MotionProfile::accel_y_15deg;
    if (name == "sinusoid") return MotionProfile::sinusoid;
    if (name == "speed_sweep") return MotionProfile::speed_sweep;
    throw ParseError("unknown motion profile: '" + std::string(name) +
                     "' (accel_x_15deg, accel_y_15deg, sinusoid, speed_sweep)");
}

const char* profile_name(MotionProfile profile) {
    switch (profile) {
        case MotionProfile::accel_x_15deg: return "accel_x_15deg";
        case MotionProfile::accel_y_15deg: return "accel_y_15deg";
        case MotionProfile::sinusoid: return "sinusoid";
        case MotionProfile::speed_sweep: return "speed_sweep";
    }
    return "?";
}

namespace {

Vec3 profile_position(MotionProfile profile, const SimulationSpec& spec, double t) {
    switch (profile) {
        case MotionProfile::accel_x_15deg: {
            const double a = spec.gravity_mps2 * std::tan(spec.tilt_rad);
            return {0.5 * a * t * t, 0.0, 0.0};
        }
        case MotionProfile::accel_y_15deg: {
            const double a = spec.gravity_mps2 * std::tan(spec.tilt_rad);
            return {0.0, 0.5 * a * t * t, 0.0};
        }
        case MotionProfile::sinusoid:
            return {spec.forward_speed_mps * t,
                    spec.sine_amplitude_m *
                        std::sin(2.0 * geometry::kPi * t / spec.sine_period_s),
                    0.0};
        case MotionProfile::speed_sweep:
            return {0.0, 0.0, 0.0};
    }
    return {};
}

/// One simulation step: acceleration from a centered second difference of
/// the prescribed positions, rotor speed from quasi-static altitude hold at
/// the implied tilt.
void evaluate_step(MotionProfile profile, const SimulationSpec& spec, size_t step, size_t last,
                   double dt_s, std::vector<TorqueSample>& out) {
    const double t = static_cast<double>(step) * dt_s;

    Vec3 accel;
    double speed = 0.0;
    if (profile == MotionProfile::speed_sweep) {
        speed = spec.max_speed_rad_s * (static_cast<double>(step) / static_cast<double>(last));
    } else {
        const size_t c = std::min(std::max<size_t>(step, 1), last - 1);
        const double tc = static_cast<double>(c) * dt_s;
        const Vec3 prev = profile_position(profile, spec, tc - dt_s);
        const Vec3 here = profile_position(profile, spec, tc);
        const Vec3 next = profile_position(profile, spec, tc + dt_s);
        accel = (next - 2.0 * here + prev) * (1.0 / (dt_s * dt_s));

        const double lateral = std::hypot(accel.x, accel.y);
        const double tilt = std::atan2(lateral, spec.gravity_mps2);
        const double per_rotor =
            spec.total_mass_kg * spec.gravity_mps2 / (4.0 * std::cos(tilt));
        speed = std::sqrt(per_rotor / spec.rotor.thrust_coefficient);
    }

    for (size_t a = 0; a < 4; ++a) {
        TorqueSample s;
        s.t_s = t;
        s.arm_id = spec.arms[a].arm_id;
        s.torque_nmm = servo_torque_nmm(spec.arms[a], spec.rotor, speed, accel, spec.gravity_mps2);
        out[step * 4 + a] = s;
    }
}

std::vector<TorqueSample> run_profile(MotionProfile profile, const SimulationSpec& spec,
                                      double duration_s, double dt_s, bool parallel) {
    if (dt_s <= 0.0) throw DomainError("time step must be positive");
    if (duration_s <= dt_s) throw DomainError("duration must exceed the time step");

    const auto last = static_cast<size_t>(std::llround(duration_s / dt_s));
    std::vector<TorqueSample> out((last + 1) * 4);

    if (parallel) {
        const auto n = static_cast<int64_t>(last);
#pragma omp parallel for schedule(static)
        for (int64_t i = 0; i <= n; ++i)
            evaluate_step(profile, spec, static_cast<size_t>(i), last, dt_s, out);
    } else {
        for (size_t i = 0; i <= last; ++i) evaluate_step(profile, spec, i, last, dt_s, out);
    }
    return out;
}

}  // namespace

std::vector<TorqueSample> simulate_profile(MotionProfile profile, const SimulationSpec& spec,
                                           double duration_s, double dt_s) {
    return run_profile(profile, spec, duration_s, dt_s, true);
}

namespace reference {

std::vector<TorqueSample> simulate_profile(MotionProfile profile, const SimulationSpec& spec,
                                           double duration_s, double dt_s) {
    return run_profile(profile, spec, duration_s, dt_s, false);
}

}  // namespace reference

}  // namespace landair::dynamics
