#pragma once

// Emulated motion-capture stream and the measurement post-processing
// pipeline: first-difference differentiation followed by a linear-phase
// windowed-sinc low-pass FIR filter (Hamming window), delay-compensated by
// order/2 samples. Series edges are handled by sample replication, which
// keeps the DC response exact everywhere.

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "microswim/dynamics.hpp"
#include "microswim/planar.hpp"

namespace microswim {

struct MocapSample {
    double t = 0.0;
    double r1 = 0.0;   // m, inertial
    double r2 = 0.0;   // m, inertial
    double psi = 0.0;  // rad
};

struct FirSpec {
    int order = 1000;          // taps - 1; must be even for integer group delay
    double cutoff_hz = 40.0;
    double sample_rate_hz = 250.0;

    void validate() const {
        require(order > 0, "FirSpec: order must be > 0");
        require(order % 2 == 0, "FirSpec: order must be even");
        require(cutoff_hz > 0.0 && cutoff_hz < sample_rate_hz / 2.0,
                "FirSpec: cutoff must be in (0, sample_rate/2)");
    }
};

// Noisy pose measurements at the capture rate; deterministic per seed.
class MocapSensor {
  public:
    MocapSensor(double sigma_pos_m, double sigma_yaw_rad, std::uint64_t seed)
        : sigma_pos_(sigma_pos_m), sigma_yaw_(sigma_yaw_rad), rng_(seed) {
        require(sigma_pos_m >= 0.0 && sigma_yaw_rad >= 0.0,
                "MocapSensor: noise sigmas must be >= 0");
    }

    MocapSample sample(const RobotState& state) {
        MocapSample s{state.t, state.position.x, state.position.y, state.yaw};
        if (sigma_pos_ > 0.0) {
            std::normal_distribution<double> n(0.0, sigma_pos_);
            s.r1 += n(rng_);
            s.r2 += n(rng_);
        }
        if (sigma_yaw_ > 0.0) {
            std::normal_distribution<double> n(0.0, sigma_yaw_);
            s.psi = wrap_angle(s.psi + n(rng_));
        }
        return s;
    }

  private:
    double sigma_pos_;
    double sigma_yaw_;
    std::mt19937_64 rng_;
};

namespace detail {
inline void check_uniform_spacing(const std::vector<MocapSample>& series) {
    if (series.size() < 2) throw std::invalid_argument("differentiate: need >= 2 samples");
    const double dt = series[1].t - series[0].t;
    require(dt > 0.0, "differentiate: nonpositive sample spacing");
    for (std::size_t i = 2; i < series.size(); ++i) {
        const double d = series[i].t - series[i - 1].t;
        if (std::abs(d - dt) > 1e-9)
            throw std::invalid_argument("differentiate: non-uniform sample spacing");
    }
}
}  // namespace detail

struct VelocitySample {
    double t = 0.0;
    double v1 = 0.0;     // m/s, inertial
    double v2 = 0.0;     // m/s, inertial
    double omega = 0.0;  // rad/s
};

// First differences scaled by the sample rate; yaw differences are wrapped
// before scaling so constant rotation through +-pi stays spike-free. The
// first element is duplicated so output length equals input length.
inline std::vector<VelocitySample> differentiate(const std::vector<MocapSample>& series) {
    detail::check_uniform_spacing(series);
    const double dt = series[1].t - series[0].t;
    std::vector<VelocitySample> out(series.size());
    for (std::size_t i = 1; i < series.size(); ++i) {
        out[i].t = series[i].t;
        out[i].v1 = (series[i].r1 - series[i - 1].r1) / dt;
        out[i].v2 = (series[i].r2 - series[i - 1].r2) / dt;
        out[i].omega = wrap_angle(series[i].psi - series[i - 1].psi) / dt;
    }
    out[0] = out[1];
    out[0].t = series[0].t;
    return out;
}

// Hamming-windowed sinc taps, normalized to unit DC gain. Symmetric by
// construction (linear phase, group delay order/2).
inline std::vector<double> fir_taps(const FirSpec& spec) {
    spec.validate();
    const int n = spec.order + 1;
    const int mid = spec.order / 2;
    const double fc = spec.cutoff_hz / spec.sample_rate_hz;  // cycles/sample
    std::vector<double> h(n);
    double sum = 0.0;
    for (int k = 0; k < n; ++k) {
        const int m = k - mid;
        const double sinc = m == 0 ? 2.0 * fc : std::sin(2.0 * M_PI * fc * m) / (M_PI * m);
        const double window = 0.54 - 0.46 * std::cos(2.0 * M_PI * k / spec.order);
        h[k] = sinc * window;
        sum += h[k];
    }
    for (double& v : h) v /= sum;
    return h;
}

// Complex magnitude of the filter response at frequency f (Hz).
inline double fir_response_magnitude(const std::vector<double>& taps, double freq_hz,
                                     double sample_rate_hz) {
    const double w = 2.0 * M_PI * freq_hz / sample_rate_hz;
    double re = 0.0, im = 0.0;
    for (std::size_t k = 0; k < taps.size(); ++k) {
        re += taps[k] * std::cos(w * static_cast<double>(k));
        im -= taps[k] * std::sin(w * static_cast<double>(k));
    }
    return std::hypot(re, im);
}

// Zero-delay low-pass filtering: the convolution is shifted by the group
// delay (order/2) so output sample n is aligned with input sample n. Edges
// use replicated samples.
inline std::vector<double> fir_lowpass(const std::vector<double>& series, const FirSpec& spec) {
    spec.validate();
    const std::vector<double> h = fir_taps(spec);
    const std::ptrdiff_t len = static_cast<std::ptrdiff_t>(series.size());
    if (len < static_cast<std::ptrdiff_t>(h.size()))
        throw std::invalid_argument("fir_lowpass: series shorter than order + 1");
    const std::ptrdiff_t delay = spec.order / 2;
    std::vector<double> out(series.size());
    for (std::ptrdiff_t n = 0; n < len; ++n) {
        double acc = 0.0;
        for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(h.size()); ++k) {
            std::ptrdiff_t idx = n + delay - k;
            if (idx < 0) idx = 0;
            if (idx >= len) idx = len - 1;
            acc += h[static_cast<std::size_t>(k)] * series[static_cast<std::size_t>(idx)];
        }
        out[static_cast<std::size_t>(n)] = acc;
    }
    return out;
}

}  // namespace microswim
