#pragma once

// Planar kinematics primitives shared across the library.
//
// Conventions (fixed project-wide):
// - Inertial frame {n1, n2}: n1 forward along the nominal swim direction,
//   n2 to the left, yaw psi positive counter-clockwise.
// - Body frame {b1, b2}: b1 along the hull axis (thrust direction),
//   b2 to port. Body velocity components are (v1, v2).
// - Angles in radians, wrapped to (-pi, pi].
// - SI units throughout (m, s, kg, N); CSV interfaces use mm where the
//   column name says so.

#include <cmath>
#include <stdexcept>

namespace microswim {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double norm() const { return std::hypot(x, y); }
};

// Planar force + yaw torque, force components in the body frame.
struct Wrench {
    double f1 = 0.0;   // along b1 (N)
    double f2 = 0.0;   // along b2 (N)
    double tau = 0.0;  // yaw torque (N*m), positive = left turn

    Wrench operator+(const Wrench& o) const { return {f1 + o.f1, f2 + o.f2, tau + o.tau}; }
};

// Wrap an angle to (-pi, pi].
inline double wrap_angle(double a) {
    a = std::remainder(a, 2.0 * M_PI);  // lands in [-pi, pi]
    if (a <= -M_PI) a = M_PI;
    return a;
}

// Rotate a vector by angle a (counter-clockwise).
inline Vec2 rotate(const Vec2& v, double a) {
    const double c = std::cos(a), s = std::sin(a);
    return {c * v.x - s * v.y, s * v.x + c * v.y};
}

inline bool is_finite(double v) { return std::isfinite(v); }

inline void require(bool cond, const char* msg) {
    if (!cond) throw std::domain_error(msg);
}

}  // namespace microswim
