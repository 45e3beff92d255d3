#pragma once

// Fluid environment, tail geometry, and the quadratic drag model.
//
// The tail outline is either a parabolic segment with a fixed aspect ratio
// AR = h^2 / A (height becomes a function of length) or a rectangle with a
// fixed height. The parabolic segment area is A = (2/3) * l * h, which makes
// the aspect-ratio relation exactly invertible: h = (2/3) * AR * l.

#include <cmath>
#include <stdexcept>
#include <string>

#include "microswim/planar.hpp"

namespace microswim {

struct FluidEnvironment {
    double density = 998.2;             // kg/m^3
    double dynamic_viscosity = 1.002e-3;  // Pa*s
    double temperature_c = 20.0;        // informational

    void validate() const {
        require(density > 0.0, "FluidEnvironment: density must be > 0");
        require(dynamic_viscosity > 0.0, "FluidEnvironment: viscosity must be > 0");
    }
};

inline FluidEnvironment water_at_20c() { return {}; }

// Re = l * v * rho / mu, with l the swimmer length including the tail.
inline double reynolds_number(double length_m, double speed_m_s, const FluidEnvironment& env) {
    env.validate();
    require(length_m > 0.0, "reynolds_number: length must be > 0");
    require(speed_m_s >= 0.0, "reynolds_number: speed must be >= 0");
    return length_m * speed_m_s * env.density / env.dynamic_viscosity;
}

// Height of a parabolic tail of length l and aspect ratio AR = h^2 / A,
// A = (2/3) * l * h  =>  h = (2/3) * AR * l.
inline double parabolic_height(double length_m, double aspect_ratio) {
    require(length_m > 0.0, "parabolic_height: length must be > 0");
    require(aspect_ratio > 0.0, "parabolic_height: aspect ratio must be > 0");
    return (2.0 / 3.0) * aspect_ratio * length_m;
}

enum class TailFamily { Parabolic, Rectangular };

inline const char* to_string(TailFamily f) {
    return f == TailFamily::Parabolic ? "parabolic" : "rectangular";
}

inline TailFamily tail_family_from_string(const std::string& s) {
    if (s == "parabolic") return TailFamily::Parabolic;
    if (s == "rectangular") return TailFamily::Rectangular;
    throw std::invalid_argument("unknown tail family: " + s);
}

// Undulating-tail outline. Parabolic tails are parameterized by (length,
// aspect ratio); rectangular tails by (length, height).
struct TailGeometry {
    TailFamily family = TailFamily::Parabolic;
    double length_m = 0.026;
    double aspect_ratio = 0.41;  // parabolic only
    double height_rect_m = 0.004;  // rectangular only

    static TailGeometry parabolic(double length_m, double aspect_ratio) {
        require(length_m > 0.0, "TailGeometry: length must be > 0");
        require(aspect_ratio > 0.0, "TailGeometry: aspect ratio must be > 0");
        TailGeometry t;
        t.family = TailFamily::Parabolic;
        t.length_m = length_m;
        t.aspect_ratio = aspect_ratio;
        return t;
    }

    static TailGeometry rectangular(double length_m, double height_m) {
        require(length_m > 0.0, "TailGeometry: length must be > 0");
        require(height_m > 0.0, "TailGeometry: height must be > 0");
        TailGeometry t;
        t.family = TailFamily::Rectangular;
        t.length_m = length_m;
        t.height_rect_m = height_m;
        return t;
    }

    double height_m() const {
        return family == TailFamily::Parabolic ? parabolic_height(length_m, aspect_ratio)
                                               : height_rect_m;
    }

    double area_m2() const {
        return family == TailFamily::Parabolic ? (2.0 / 3.0) * length_m * height_m()
                                               : length_m * height_rect_m;
    }

    // Film mass from areal density (default: 25 um fluoropolymer film).
    double mass_kg(double areal_density_kg_m2 = 0.05375) const {
        require(areal_density_kg_m2 > 0.0, "TailGeometry: areal density must be > 0");
        return area_m2() * areal_density_kg_m2;
    }
};

// Quadratic drag: force components oppose the body-frame velocity, torque
// opposes the yaw rate. The keel makes lateral drag much larger than
// longitudinal drag.
struct DragModel {
    double c_long = 0.02;    // N*s^2/m^2, along b1
    double c_lat = 0.08;     // N*s^2/m^2, along b2
    double c_rot = 1.0e-7;   // N*m*s^2/rad^2

    void validate() const {
        require(c_long > 0.0, "DragModel: longitudinal coefficient must be > 0");
        require(c_lat > 0.0, "DragModel: lateral coefficient must be > 0");
        require(c_rot > 0.0, "DragModel: rotational coefficient must be > 0");
        require(c_lat >= c_long, "DragModel: lateral coefficient must be >= longitudinal");
    }
};

// Drag wrench for a body-frame twist (v1, v2, omega). Exactly zero at rest,
// odd under velocity negation.
inline Wrench drag_wrench(double v1, double v2, double omega, const DragModel& m) {
    return {-m.c_long * v1 * std::abs(v1),
            -m.c_lat * v2 * std::abs(v2),
            -m.c_rot * omega * std::abs(omega)};
}

// Speed at which longitudinal drag balances a constant thrust.
inline double steady_state_speed(double thrust_n, const DragModel& m) {
    m.validate();
    require(thrust_n >= 0.0, "steady_state_speed: thrust must be >= 0");
    return std::sqrt(thrust_n / m.c_long);
}

}  // namespace microswim
