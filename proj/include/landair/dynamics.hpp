#pragma once

/// Rigid-body torque stack for a quad-rotor with deformable arms.
///
/// Body torque (Newton-Euler):
///   M_b = J_b * dw/dt + w x (J_b * w) + M_g + M_d
/// Gyroscopic torque of the four rotors (alternating spin directions):
///   M_g = sum_i  w x (J_r * [0, 0, (-1)^(i+1) * W_i]^T)
/// Aerodynamic friction torque:
///   M_d = diag(d_roll, d_pitch, d_yaw) * attitude_rates
///
/// Arm inertia about the steering-gear axis (uniform rod, front arms tilted
/// down by gamma):
///   front: J = m/12 * L^2 * cos(gamma)      rear: J = m/12 * L^2
///
/// The servo load model combines gravity, the thrust moment component leaked
/// onto the tilted hinge axis, rotor drag, and the inertial reaction to base
/// acceleration; see servo_torque_nmm.

#include <array>
#include <string_view>
#include <vector>

#include "landair/geometry.hpp"

namespace landair::dynamics {

using geometry::Mat3;
using geometry::Vec3;

/// Instantaneous rotational state of the airframe.
struct BodyState {
    Vec3 angular_velocity_rad_s;      // body frame
    Vec3 angular_acceleration_rad_s2;
    Vec3 attitude_rates_rad_s;        // roll, pitch, yaw rates
};

/// Inertia and damping constants. Body and rotor inertias are diagonal;
/// damping applies to the attitude rates.
struct InertiaSet {
    Vec3 body_diag_kgm2;
    Vec3 rotor_diag_kgm2;
    Vec3 damping_nms;
};

enum class ArmId { fl, fr, rl, rr };

const char* arm_name(ArmId id);

struct ArmGeometry {
    ArmId arm_id = ArmId::fl;
    double mass_kg = 0.0;
    double length_m = 0.0;
    double tilt_rad = 0.0;        // 20 deg downward for front arms, 0 for rear
    double fold_angle_rad = 0.0;  // 0 folded, 3*pi/4 fully deployed
    double yaw_rad = 0.0;         // deployed azimuth of the arm
};

inline constexpr double kDeployedFoldAngleRad = 135.0 * geometry::kPi / 180.0;

/// Commanded rotor speeds plus the propeller constants mapping speed to
/// thrust (k_T * W^2) and drag torque (k_Q * W^2).
struct RotorCommand {
    std::array<double, 4> speeds_rad_s{};
    double thrust_coefficient = 0.0;  // N / (rad/s)^2
    double drag_coefficient = 0.0;    // N*m / (rad/s)^2
};

/// Net gyroscopic torque of four rotors with alternating spin signs.
Vec3 gyroscopic_torque(const Vec3& angular_velocity, const Vec3& rotor_inertia_diag,
                       const std::array<double, 4>& rotor_speeds_rad_s);

Vec3 friction_torque(const Vec3& damping_nms, const Vec3& attitude_rates_rad_s);

/// Full body torque with gyroscopic and friction terms supplied by the
/// caller, so the pieces can be checked independently.
Vec3 body_torque(const Vec3& body_inertia_diag, const Vec3& angular_acceleration,
                 const Vec3& angular_velocity, const Vec3& gyroscopic, const Vec3& friction);

double arm_inertia_kgm2(double mass_kg, double length_m, double tilt_rad, bool is_front);

/// Similarity transform of an arm inertia tensor by a z rotation:
/// R_z(yaw) * J * R_z(yaw)^T.
Mat3 rotate_inertia(const Mat3& inertia, double yaw_rad);

/// Per-arm reaction force of a rigid body acceleration, expressed in each
/// arm's own frame (body force m*a rotated by R_z(yaw)^T).
std::array<Vec3, 4> arm_forces(const std::array<ArmGeometry, 4>& arms, const Vec3& accel_mps2);

/// Load on the steering gear of one deployed arm, in N*mm.
///
/// Terms, all taken as co-directional worst case:
///   gravity   m*g*(L/2)*cos(tilt)  (lever shortened by the downward tilt)
///   thrust    k_T*W^2 * L * sin(tilt) * |sin(yaw)|
///             (projection of the thrust moment onto a hinge axis tilted
///              from vertical in the body x-z plane; zero for level arms)
///   drag      k_Q*W^2 * cos(tilt)
///   inertial  J_arm * (6*|a_t|/L) with a_t the transverse in-plane
///             acceleration; equivalent to the rod reaction m*a_t*L/2
///
/// Throws for a folded arm: the load model is only defined when deployed.
double servo_torque_nmm(const ArmGeometry& arm, const RotorCommand& rotor,
                        double rotor_speed_rad_s, const Vec3& accel_mps2, double gravity_mps2);

enum class MotionProfile { accel_x_15deg, accel_y_15deg, sinusoid, speed_sweep };

MotionProfile profile_from_name(std::string_view name);
const char* profile_name(MotionProfile profile);

/// Everything the open-loop profile simulations need.
struct SimulationSpec {
    std::array<ArmGeometry, 4> arms{};
    RotorCommand rotor;
    InertiaSet inertia;
    double total_mass_kg = 0.0;
    double gravity_mps2 = 9.81;
    double tilt_rad = 15.0 * geometry::kPi / 180.0;  // accel profiles
    double sine_amplitude_m = 1.0;
    double sine_period_s = 4.0;
    double forward_speed_mps = 3.0;
    double max_speed_rad_s = 0.0;  // top of the speed sweep
};

struct TorqueSample {
    double t_s = 0.0;
    ArmId arm_id = ArmId::fl;
    double torque_nmm = 0.0;
};

/// Runs one kinematic motion profile and returns the servo torque of every
/// arm at every step, ordered by (t, arm). Trajectories are prescribed in
/// closed form, accelerations recovered by numerical differentiation, and
/// rotor speed set for quasi-static altitude hold (except the speed sweep,
/// which ramps the rotors at zero acceleration). Steps are independent and
/// evaluated in parallel.
std::vector<TorqueSample> simulate_profile(MotionProfile profile, const SimulationSpec& spec,
                                           double duration_s, double dt_s);

namespace reference {
/// Single-threaded counterpart of simulate_profile (testing/benchmarks).
std::vector<TorqueSample> simulate_profile(MotionProfile profile, const SimulationSpec& spec,
                                           double duration_s, double dt_s);
}  // namespace reference

}  // namespace landair::dynamics
