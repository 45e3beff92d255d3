#pragma once

// PWM excitation, actuator steady-state bias, and the transmission that
// turns both into the stroke envelope at the tail root.
//
// The SMA wires do not fully cool within an actuation cycle above a
// threshold PWM frequency, so the actuator accumulates a steady-state bias.
// The transmission is installed with a fixed bias displacement d_b that
// bends the tail the opposite way; the bias angle is phi_b = T * d_b with
// transmission ratio T = 1/delta. When the accumulated bias equals phi_b the
// stroke envelope is symmetric about the b1-b3 plane (mean angle 0).
//
// Sign convention: positive mean angle = envelope biased to port (left).

#include <algorithm>
#include <cmath>

#include "microswim/planar.hpp"

namespace microswim {

struct PwmSignal {
    double frequency_hz = 5.0;
    double duty = 0.10;        // fraction of the period at the on voltage
    double on_voltage = 22.0;  // informational
    double on_current = 0.25;  // informational

    void validate() const {
        require(frequency_hz > 0.0, "PwmSignal: frequency must be > 0");
        require(duty >= 0.0 && duty <= 1.0, "PwmSignal: duty must be in [0, 1]");
    }
};

struct TransmissionModel {
    double delta_m = 1.0e-3;   // offset between fixed and free ends
    double d_bias_m = 0.0;     // installed bias displacement

    double ratio() const {
        require(delta_m > 0.0, "TransmissionModel: delta must be > 0");
        return 1.0 / delta_m;
    }
};

// Phenomenological steady-state bias: zero at or below the threshold
// frequency, then linear in the excess frequency.
struct ActuatorBiasModel {
    double bias_gain_rad_per_hz = 0.05;
    double threshold_hz = 1.0;

    void validate() const {
        require(bias_gain_rad_per_hz >= 0.0, "ActuatorBiasModel: gain must be >= 0");
        require(threshold_hz > 0.0, "ActuatorBiasModel: threshold must be > 0");
    }
};

// Angular sweep of the tail root. mean_angle = 0 means symmetric about the
// body b1-b3 plane; amplitude is the half-sweep.
struct StrokeEnvelope {
    double mean_angle_rad = 0.0;
    double amplitude_rad = 0.0;
};

// Stroke amplitude model: linear in duty with saturation. Amplitude feeds
// only the untuned-envelope steering torque, never thrust.
struct StrokeAmplitudeModel {
    double gain_rad_per_duty = 3.0;
    double saturation_rad = 0.6;
};

// phi_b = T * d_b = d_b / delta.
inline double bias_angle(const TransmissionModel& tr) {
    require(tr.delta_m > 0.0, "bias_angle: delta must be > 0");
    return tr.d_bias_m / tr.delta_m;
}

inline double accumulated_bias(const ActuatorBiasModel& model, const PwmSignal& pwm) {
    model.validate();
    pwm.validate();
    if (pwm.frequency_hz <= model.threshold_hz) return 0.0;
    return model.bias_gain_rad_per_hz * (pwm.frequency_hz - model.threshold_hz);
}

inline StrokeEnvelope stroke_envelope(const PwmSignal& pwm, const TransmissionModel& tr,
                                      const ActuatorBiasModel& bias,
                                      const StrokeAmplitudeModel& amp = {}) {
    require(tr.delta_m > 0.0, "stroke_envelope: delta must be > 0");
    StrokeEnvelope env;
    // Evaluated as (acc*delta - d_b)/delta so a transmission tuned with
    // d_b = delta*acc cancels to exactly zero.
    env.mean_angle_rad = (accumulated_bias(bias, pwm) * tr.delta_m - tr.d_bias_m) / tr.delta_m;
    env.amplitude_rad = std::min(std::max(amp.gain_rad_per_duty * pwm.duty, 0.0), amp.saturation_rad);
    return env;
}

// Choose d_b so the envelope is symmetric at the given frequency. Tuning at
// one frequency leaves a nonzero mean at any other frequency above threshold.
inline TransmissionModel tune_bias(const PwmSignal& pwm, const ActuatorBiasModel& bias,
                                   const TransmissionModel& tr) {
    require(tr.delta_m > 0.0, "tune_bias: delta must be > 0");
    TransmissionModel tuned = tr;
    tuned.d_bias_m = tr.delta_m * accumulated_bias(bias, pwm);
    return tuned;
}

}  // namespace microswim
