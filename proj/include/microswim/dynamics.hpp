#pragma once

// Planar 3-DOF rigid-body dynamics for single- and dual-propulsor swimmers.
//
// State integration is semi-implicit Euler on a fixed grid: velocities first,
// then pose from the updated velocities. The body-frame velocity is
// transported to the new body frame by an exact rotation, which preserves
// kinetic energy; the per-step drag impulse is clamped so drag can never
// reverse a velocity component within one step. Together these make kinetic
// energy nonincreasing whenever thrust and disturbance are zero.

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

#include "microswim/actuation.hpp"
#include "microswim/hydro.hpp"

namespace microswim {

enum class Configuration { Single, Dual };

struct RobotGeometry {
    Configuration configuration = Configuration::Dual;
    double mass_kg = 9.0e-5;
    double yaw_inertia_kg_m2 = 1.7e-8;
    double body_length_m = 0.046;          // including the tail
    double propulsor_separation_m = 0.006;  // 0 for single

    void validate() const {
        require(mass_kg > 0.0, "RobotGeometry: mass must be > 0");
        require(yaw_inertia_kg_m2 > 0.0, "RobotGeometry: yaw inertia must be > 0");
        require(body_length_m > 0.0, "RobotGeometry: body length must be > 0");
        require(propulsor_separation_m >= 0.0, "RobotGeometry: separation must be >= 0");
        if (configuration == Configuration::Dual)
            require(propulsor_separation_m > 0.0, "RobotGeometry: dual requires separation > 0");
    }
};

struct RobotState {
    Vec2 position;        // inertial frame (m)
    double yaw = 0.0;     // rad, wrapped to (-pi, pi]
    Vec2 velocity;        // body frame (m/s): x along b1, y along b2
    double yaw_rate = 0.0;  // rad/s
    double t = 0.0;       // s

    bool finite() const {
        return is_finite(position.x) && is_finite(position.y) && is_finite(yaw) &&
               is_finite(velocity.x) && is_finite(velocity.y) && is_finite(yaw_rate) &&
               is_finite(t);
    }
};

// Generic lateral disturbance standing in for tether pull and gusts: a
// constant inertial-frame lateral force plus seeded zero-mean Gaussian
// noise, both applied at a configurable offset along b1 from the center of
// mass (a stern attachment point turns lateral pull into yaw torque).
struct Disturbance {
    double lateral_bias_n = 0.0;
    double noise_amplitude_n = 0.0;
    double application_offset_m = 0.0;  // along b1; negative = aft of the CM
    std::uint64_t seed = 0;
};

// Draws per-step disturbance wrenches; deterministic for a given seed.
class DisturbanceStream {
  public:
    explicit DisturbanceStream(const Disturbance& d) : params_(d), rng_(d.seed) {}

    const Disturbance& params() const { return params_; }

    // Disturbance wrench for a robot at yaw psi. The force is defined in the
    // inertial frame and rotated into the body frame before the lever arm is
    // applied.
    Wrench sample(double yaw) {
        double fx = 0.0, fy = params_.lateral_bias_n;
        if (params_.noise_amplitude_n > 0.0) {
            std::normal_distribution<double> n(0.0, params_.noise_amplitude_n);
            fx += n(rng_);
            fy += n(rng_);
        }
        const Vec2 body_force = rotate({fx, fy}, -yaw);
        return {body_force.x, body_force.y, params_.application_offset_m * body_force.y};
    }

  private:
    Disturbance params_;
    std::mt19937_64 rng_;
};

// Net wrench of the two propulsors: forward thrust along b1 plus the torque
// of the thrust differential over the separation lever arm. Higher right
// thrust turns the robot left (positive torque).
inline Wrench propulsor_wrench(double thrust_left_n, double thrust_right_n,
                               const RobotGeometry& geom) {
    geom.validate();
    require(geom.configuration == Configuration::Dual, "propulsor_wrench: geometry must be dual");
    require(thrust_left_n >= 0.0 && thrust_right_n >= 0.0,
            "propulsor_wrench: thrusts must be >= 0");
    return {thrust_left_n + thrust_right_n, 0.0,
            (thrust_right_n - thrust_left_n) * geom.propulsor_separation_m / 2.0};
}

// Steering torque of an asymmetric stroke envelope: a left-biased envelope
// (positive mean angle) yields a positive torque, a right-biased one a
// negative torque. Zero for a symmetric envelope. `gain` is an effective
// lever arm; the effect is weak and demonstration-only.
inline double envelope_torque(const StrokeEnvelope& env, double thrust_n, double gain_m) {
    return gain_m * thrust_n * env.mean_angle_rad;
}

// One fixed-step update. `external` carries thrust and steering torques;
// drag is evaluated internally so its impulse can be clamped per component
// (drag may stop a component within a step but never reverse it).
inline RobotState step(const RobotState& state, const Wrench& external,
                       const RobotGeometry& geom, const DragModel& drag,
                       DisturbanceStream& disturbance, double dt) {
    require(dt > 0.0, "step: dt must be > 0");
    geom.validate();
    if (!state.finite() || !is_finite(external.f1) || !is_finite(external.f2) ||
        !is_finite(external.tau))
        throw std::domain_error("step: non-finite state or wrench");

    const Wrench dist = disturbance.sample(state.yaw);
    const Wrench d = drag_wrench(state.velocity.x, state.velocity.y, state.yaw_rate, drag);
    const double m = geom.mass_kg;
    const double inertia = geom.yaw_inertia_kg_m2;

    auto clamp_impulse = [](double impulse, double momentum) {
        if (momentum >= 0.0) return std::max(impulse, -momentum);
        return std::min(impulse, -momentum);
    };

    RobotState next = state;
    next.velocity.x += (external.f1 + dist.f1) / m * dt +
                       clamp_impulse(d.f1 * dt, m * state.velocity.x) / m;
    next.velocity.y += (external.f2 + dist.f2) / m * dt +
                       clamp_impulse(d.f2 * dt, m * state.velocity.y) / m;
    next.yaw_rate += (external.tau + dist.tau) / inertia * dt +
                     clamp_impulse(d.tau * dt, inertia * state.yaw_rate) / inertia;

    const double dpsi = next.yaw_rate * dt;
    next.yaw = wrap_angle(state.yaw + dpsi);
    // Transport the body-frame velocity into the rotated frame; the exact
    // rotation keeps |v| unchanged.
    if (dpsi != 0.0) next.velocity = rotate(next.velocity, -dpsi);
    next.position = state.position + rotate(next.velocity, next.yaw) * dt;
    next.t = state.t + dt;

    if (!next.finite()) throw std::domain_error("step: produced non-finite state");
    return next;
}

}  // namespace microswim
