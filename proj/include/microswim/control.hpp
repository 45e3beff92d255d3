#pragma once

// Planar tracking cascade: lateral-position PI -> desired heading,
// proportional heading loop -> steering signal, actuator mapping -> left and
// right duty cycles.
//
//   psi_d = k_p2 * r_e2 + k_i2 * integral(r_e2)         (saturated to +-pi/2)
//   u_psi = k_p_psi * wrap(psi_d - psi)
//   u_l   = k_l * (u_v - u_psi),  u_r = k_r * (u_v + u_psi)   (clamped)
//
// Sign convention (stated here, fixed project-wide): positive u_psi raises
// the right duty, which raises right thrust and yields a positive (left)
// turn. The integral accumulates by forward Euler at the loop rate and is
// clamped so its heading contribution never exceeds pi/4 (anti-windup).

#include <algorithm>
#include <cmath>
#include <utility>

#include "microswim/planar.hpp"
#include "microswim/sensing.hpp"

namespace microswim {

struct ControllerGains {
    double k_p2 = 2.0;       // rad/m
    double k_i2 = 0.1;       // rad/(m*s)
    double k_p_psi = 0.2;    // 1/rad
    double u_v = 0.11;       // constant forward duty
    double k_l = 1.0;
    double k_r = 1.0;
    double duty_max = 0.15;
    double psi_d_max = M_PI / 2.0;
    double integral_clamp_rad = M_PI / 4.0;  // bound on |k_i2 * integral|

    void validate() const {
        require(k_p2 > 0.0, "ControllerGains: k_p2 must be > 0");
        require(k_i2 >= 0.0, "ControllerGains: k_i2 must be >= 0");
        require(k_p_psi > 0.0, "ControllerGains: k_p_psi must be > 0");
        require(k_l > 0.0 && k_r > 0.0, "ControllerGains: k_l, k_r must be > 0");
        require(duty_max > 0.0, "ControllerGains: duty_max must be > 0");
        require(u_v >= 0.0 && u_v <= duty_max, "ControllerGains: u_v must be in [0, duty_max]");
    }
};

struct ControllerState {
    double integral_m_s = 0.0;  // integral of the lateral error
    double last_psi_d = 0.0;
};

struct ControlOutput {
    double u_l = 0.0;
    double u_r = 0.0;
    double psi_d = 0.0;  // logged controller internals
    double u_psi = 0.0;
};

// Lateral-position PI loop. Returns the desired heading and the updated
// controller state.
inline std::pair<double, ControllerState> lateral_controller(double r_d2, double r_2,
                                                             const ControllerState& cs,
                                                             const ControllerGains& g, double dt) {
    require(dt > 0.0, "lateral_controller: dt must be > 0");
    const double error = r_d2 - r_2;
    ControllerState next = cs;
    next.integral_m_s += error * dt;
    if (g.k_i2 > 0.0) {
        const double bound = g.integral_clamp_rad / g.k_i2;
        next.integral_m_s = std::clamp(next.integral_m_s, -bound, bound);
    }
    double psi_d = g.k_p2 * error + g.k_i2 * next.integral_m_s;
    psi_d = std::clamp(psi_d, -g.psi_d_max, g.psi_d_max);
    next.last_psi_d = psi_d;
    return {psi_d, next};
}

// Proportional heading loop; the error is wrapped before the gain.
inline double heading_controller(double psi_d, double psi, const ControllerGains& g) {
    return g.k_p_psi * wrap_angle(psi_d - psi);
}

// Duty-cycle mapping with saturation.
inline ControlOutput actuator_mapping(double u_v, double u_psi, const ControllerGains& g) {
    ControlOutput out;
    out.u_psi = u_psi;
    out.u_l = std::clamp(g.k_l * (u_v - u_psi), 0.0, g.duty_max);
    out.u_r = std::clamp(g.k_r * (u_v + u_psi), 0.0, g.duty_max);
    return out;
}

// A straight reference line: origin plus heading. Poses are projected into
// the line frame, where the controller regulates the lateral coordinate to
// zero.
struct TrackingReference {
    Vec2 origin;
    double heading = 0.0;

    // (along-track, lateral) coordinates of an inertial point.
    Vec2 project(const Vec2& p) const { return rotate(p - origin, -heading); }

    double lateral_of(const Vec2& p) const { return project(p).y; }
    double along_of(const Vec2& p) const { return project(p).x; }
    double yaw_in_frame(double psi) const { return wrap_angle(psi - heading); }
};

// Full cascade for one control period: lateral PI -> heading P -> actuator
// mapping, all in the frame of the active reference segment. While either
// duty sits on a clamp the integral update is discarded, so the lateral loop
// cannot wind up during saturated maneuvers.
inline std::pair<ControlOutput, ControllerState> control_step(const MocapSample& sample,
                                                              const TrackingReference& ref,
                                                              const ControllerState& cs,
                                                              const ControllerGains& g, double dt) {
    const double lateral = ref.lateral_of({sample.r1, sample.r2});
    auto [psi_d, next] = lateral_controller(0.0, lateral, cs, g, dt);
    const double u_psi = heading_controller(psi_d, ref.yaw_in_frame(sample.psi), g);
    ControlOutput out = actuator_mapping(g.u_v, u_psi, g);
    out.psi_d = psi_d;
    const bool saturated = out.u_l <= 0.0 || out.u_l >= g.duty_max || out.u_r <= 0.0 ||
                           out.u_r >= g.duty_max;
    if (saturated) next.integral_m_s = cs.integral_m_s;
    return {out, next};
}

}  // namespace microswim
