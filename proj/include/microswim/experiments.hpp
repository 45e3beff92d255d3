#pragma once

// Experiment drivers for the desk-scale protocols: tail characterization
// sweeps, open-loop straight swims, closed-loop straight tracking, and
// 90-degree turns, plus the metrics computed from each log.
//
// Every trial owns its simulator, controller, and RNG streams; trial seeds
// are derived from the run seed with a splitmix64 mix, so identical config +
// seed reproduce byte-identical outputs regardless of trial order.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "microswim/config.hpp"
#include "microswim/control.hpp"
#include "microswim/dynamics.hpp"
#include "microswim/sensing.hpp"
#include "microswim/thrust_map.hpp"

namespace microswim {

// ---------------------------------------------------------------------------
// Seeding

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(seed ^ splitmix64(stream));
}

// ---------------------------------------------------------------------------
// Trajectory logs

struct TrajectoryRow {
    double t = 0.0;
    double r1 = 0.0, r2 = 0.0;  // m
    double psi = 0.0;
    double v1 = 0.0, v2 = 0.0;  // body frame, m/s
    double omega = 0.0;
    double u_l = 0.0, u_r = 0.0;
    double psi_d = 0.0, u_psi = 0.0;
};

struct TrajectoryLog {
    std::vector<TrajectoryRow> rows;
    double sample_rate_hz = 250.0;
    bool has_control = false;

    double duration_s() const {
        return rows.empty() ? 0.0 : static_cast<double>(rows.size()) / sample_rate_hz;
    }
};

inline std::vector<MocapSample> poses_of(const TrajectoryLog& log) {
    std::vector<MocapSample> out;
    out.reserve(log.rows.size());
    for (const TrajectoryRow& r : log.rows) out.push_back({r.t, r.r1, r.r2, r.psi});
    return out;
}

// ---------------------------------------------------------------------------
// Path references

// Piecewise-straight reference. Segment i hands over to i+1 once the
// along-track coordinate passes switch_along[i]; the handover latches.
struct PathReference {
    std::vector<TrackingReference> segments;
    std::vector<double> switch_along;  // size = segments.size() - 1

    static PathReference straight(const Vec2& origin, double heading) {
        return {{TrackingReference{origin, heading}}, {}};
    }

    // Two perpendicular segments meeting at the corner. `lead_m` anticipates
    // the handover by roughly one turn radius so the turning arc lands on the
    // second line instead of overshooting it.
    static PathReference turn(const Vec2& origin, double heading, double leg_length_m, bool left,
                              double lead_m = 0.0) {
        require(lead_m >= 0.0 && lead_m < leg_length_m, "PathReference: lead must be in [0, leg)");
        const double turn_heading = heading + (left ? M_PI / 2.0 : -M_PI / 2.0);
        const Vec2 corner = origin + rotate({leg_length_m, 0.0}, heading);
        return {{TrackingReference{origin, heading}, TrackingReference{corner, turn_heading}},
                {leg_length_m - lead_m}};
    }

    double final_heading() const { return segments.back().heading; }
};

class ReferenceTracker {
  public:
    explicit ReferenceTracker(const PathReference& ref) : ref_(ref) {
        require(!ref.segments.empty(), "ReferenceTracker: empty reference");
    }

    const TrackingReference& active(const Vec2& position) {
        while (index_ + 1 < ref_.segments.size() &&
               ref_.segments[index_].along_of(position) >= ref_.switch_along[index_]) {
            ++index_;
        }
        return ref_.segments[index_];
    }

    std::size_t index() const { return index_; }

  private:
    const PathReference& ref_;
    std::size_t index_ = 0;
};

// ---------------------------------------------------------------------------
// Metrics

struct TrialSummary {
    double mean_speed_m_s = 0.0;
    double max_window_speed_m_s = 0.0;  // 1 s window
    double rms_lateral_m = 0.0;
    double max_window_turn_rate_rad_s = 0.0;  // 1 s window
    double speed_bl_s = 0.0;  // max windowed speed over body length
    std::vector<double> rms_lateral_by_segment_m;  // one entry per reference segment
};

namespace detail {

inline std::vector<double> window_means(const std::vector<double>& x, std::size_t w) {
    std::vector<double> out;
    if (x.size() < w || w == 0) return out;
    out.reserve(x.size() - w + 1);
    double acc = 0.0;
    for (std::size_t i = 0; i < w; ++i) acc += x[i];
    out.push_back(acc / static_cast<double>(w));
    for (std::size_t i = w; i < x.size(); ++i) {
        acc += x[i] - x[i - w];
        out.push_back(acc / static_cast<double>(w));
    }
    return out;
}

}  // namespace detail

// Post-processing metrics over a trajectory log: speeds from the measurement
// pipeline (first difference + FIR), lateral error against the active
// reference segment, 1 s windowed extrema, and body-length normalization.
inline TrialSummary metrics(const TrajectoryLog& log, const PathReference& reference,
                            double body_length_m, const FirSpec& fir) {
    if (log.duration_s() < 1.0) throw std::invalid_argument("metrics: log shorter than 1 s");
    require(body_length_m > 0.0, "metrics: body length must be > 0");

    const std::vector<MocapSample> poses = poses_of(log);
    const std::vector<VelocitySample> vel = differentiate(poses);
    std::vector<double> v1(vel.size()), v2(vel.size()), om(vel.size());
    for (std::size_t i = 0; i < vel.size(); ++i) {
        v1[i] = vel[i].v1;
        v2[i] = vel[i].v2;
        om[i] = vel[i].omega;
    }
    FirSpec spec = fir;
    spec.sample_rate_hz = log.sample_rate_hz;
    const std::vector<double> f1 = fir_lowpass(v1, spec);
    const std::vector<double> f2 = fir_lowpass(v2, spec);
    const std::vector<double> fo = fir_lowpass(om, spec);

    std::vector<double> speed(f1.size());
    for (std::size_t i = 0; i < f1.size(); ++i) speed[i] = std::hypot(f1[i], f2[i]);

    TrialSummary s;
    double acc = 0.0;
    for (double v : speed) acc += v;
    s.mean_speed_m_s = acc / static_cast<double>(speed.size());

    const std::size_t w = static_cast<std::size_t>(std::lround(log.sample_rate_hz));
    for (double v : detail::window_means(speed, w))
        s.max_window_speed_m_s = std::max(s.max_window_speed_m_s, v);
    for (double v : detail::window_means(fo, w))
        s.max_window_turn_rate_rad_s = std::max(s.max_window_turn_rate_rad_s, std::abs(v));

    ReferenceTracker tracker(reference);
    double sq = 0.0;
    std::vector<double> seg_sq(reference.segments.size(), 0.0);
    std::vector<std::size_t> seg_n(reference.segments.size(), 0);
    for (const TrajectoryRow& r : log.rows) {
        const double lat = tracker.active({r.r1, r.r2}).lateral_of({r.r1, r.r2});
        sq += lat * lat;
        seg_sq[tracker.index()] += lat * lat;
        ++seg_n[tracker.index()];
    }
    s.rms_lateral_m = std::sqrt(sq / static_cast<double>(log.rows.size()));
    s.rms_lateral_by_segment_m.resize(reference.segments.size(), 0.0);
    for (std::size_t k = 0; k < reference.segments.size(); ++k)
        s.rms_lateral_by_segment_m[k] =
            seg_n[k] > 0 ? std::sqrt(seg_sq[k] / static_cast<double>(seg_n[k])) : 0.0;
    s.speed_bl_s = s.max_window_speed_m_s / body_length_m;
    return s;
}

// Mean body speed over the final `window_s` seconds of a log (path speed,
// no filtering). Used by the calibration-fidelity checks.
inline double final_window_speed(const TrajectoryLog& log, double window_s = 1.0) {
    const std::size_t w = static_cast<std::size_t>(std::lround(window_s * log.sample_rate_hz));
    require(w >= 1 && w <= log.rows.size(), "final_window_speed: window longer than log");
    double acc = 0.0;
    for (std::size_t i = log.rows.size() - w; i < log.rows.size(); ++i)
        acc += std::hypot(log.rows[i].v1, log.rows[i].v2);
    return acc / static_cast<double>(w);
}

// ---------------------------------------------------------------------------
// Simulation drivers

// One single-propulsor straight swim at fixed excitation. The transmission
// is tuned for the excitation frequency before the run, as in the
// characterization protocol. `from_steady` starts the run at the steady swim
// speed (a recording that begins mid-swim) instead of from rest.
struct SingleRunParams {
    TailGeometry tail;
    double freq_hz = 5.0;
    double duty = 0.10;
    double duration_s = 20.0;
    bool from_steady = false;
    std::uint64_t dist_seed = 0;
};

inline TrajectoryLog simulate_single(const RunConfig& cfg, const ThrustMap& map,
                                     const SingleRunParams& p) {
    const double dt = cfg.dt();
    const PwmSignal pwm{p.freq_hz, p.duty};
    const TransmissionModel tuned = tune_bias(pwm, cfg.actuation.bias, cfg.actuation.transmission);
    const StrokeEnvelope env = stroke_envelope(pwm, tuned, cfg.actuation.bias, cfg.actuation.amplitude);

    DisturbanceStream dist(Disturbance{cfg.disturbance.lateral_bias_n,
                                       cfg.disturbance.noise_amplitude_n,
                                       cfg.disturbance.application_offset_m, p.dist_seed});
    RobotState state;
    TrajectoryLog log;
    log.sample_rate_hz = cfg.sample_rate_hz;
    const std::size_t steps = static_cast<std::size_t>(std::lround(p.duration_s / dt));
    log.rows.reserve(steps);
    const double thrust = map.mean_thrust(p.tail, p.freq_hz, p.duty);
    if (p.from_steady) state.velocity.x = steady_state_speed(thrust, cfg.drag_single);
    for (std::size_t i = 0; i < steps; ++i) {
        const Wrench wrench{thrust, 0.0, envelope_torque(env, thrust, cfg.actuation.envelope_torque_gain_m)};
        log.rows.push_back({state.t, state.position.x, state.position.y, state.yaw,
                            state.velocity.x, state.velocity.y, state.yaw_rate, p.duty, p.duty,
                            0.0, 0.0});
        state = step(state, wrench, cfg.geometry_single, cfg.drag_single, dist, dt);
    }
    return log;
}

enum class DualMode { OpenLoop, ClosedLoop };

struct DualRunParams {
    double freq_hz = 5.0;
    double duration_s = 20.0;
    DualMode mode = DualMode::OpenLoop;
    double open_loop_duty = 0.12;
    PathReference reference = PathReference::straight({0.0, 0.0}, 0.0);
    Vec2 start_position;
    double start_yaw = 0.0;
    bool from_steady = true;  // recordings begin with the robot already swimming
    std::uint64_t dist_seed = 0;
    std::uint64_t mocap_seed = 0;
};

struct DualRunOutput {
    TrajectoryLog log;
    std::vector<MocapSample> measured;
};

inline DualRunOutput simulate_dual(const RunConfig& cfg, const ThrustMap& map,
                                   const DualRunParams& p) {
    const double dt = cfg.dt();
    const TransmissionModel& transmission = cfg.actuation.transmission;

    DisturbanceStream dist(Disturbance{cfg.disturbance.lateral_bias_n,
                                       cfg.disturbance.noise_amplitude_n,
                                       cfg.disturbance.application_offset_m, p.dist_seed});
    MocapSensor sensor(cfg.sensing.position_noise_m, cfg.sensing.yaw_noise_rad, p.mocap_seed);
    ReferenceTracker tracker(p.reference);
    ControllerState cs;

    RobotState state;
    state.position = p.start_position;
    state.yaw = wrap_angle(p.start_yaw);
    if (p.from_steady) {
        const double duty0 = p.mode == DualMode::OpenLoop ? p.open_loop_duty : cfg.control.u_v;
        const double thrust0 = map.mean_thrust(cfg.tail, p.freq_hz, duty0);
        state.velocity.x = steady_state_speed(2.0 * thrust0, cfg.drag_dual);
    }

    DualRunOutput out;
    out.log.sample_rate_hz = cfg.sample_rate_hz;
    out.log.has_control = p.mode == DualMode::ClosedLoop;
    const std::size_t steps = static_cast<std::size_t>(std::lround(p.duration_s / dt));
    out.log.rows.reserve(steps);
    out.measured.reserve(steps);

    for (std::size_t i = 0; i < steps; ++i) {
        const MocapSample meas = sensor.sample(state);
        out.measured.push_back(meas);

        double u_l = p.open_loop_duty, u_r = p.open_loop_duty, psi_d = 0.0, u_psi = 0.0;
        if (p.mode == DualMode::ClosedLoop) {
            const TrackingReference& ref = tracker.active({meas.r1, meas.r2});
            const auto [cmd, next_cs] = control_step(meas, ref, cs, cfg.control, dt);
            cs = next_cs;
            u_l = cmd.u_l;
            u_r = cmd.u_r;
            psi_d = cmd.psi_d;
            u_psi = cmd.u_psi;
        }

        const double thrust_l = map.mean_thrust(cfg.tail, p.freq_hz, u_l);
        const double thrust_r = map.mean_thrust(cfg.tail, p.freq_hz, u_r);
        const StrokeEnvelope env_l = stroke_envelope({p.freq_hz, u_l}, transmission,
                                                     cfg.actuation.bias, cfg.actuation.amplitude);
        const StrokeEnvelope env_r = stroke_envelope({p.freq_hz, u_r}, transmission,
                                                     cfg.actuation.bias, cfg.actuation.amplitude);
        const double tau_env =
            envelope_torque(env_l, thrust_l, cfg.actuation.envelope_torque_gain_m) +
            envelope_torque(env_r, thrust_r, cfg.actuation.envelope_torque_gain_m);
        const Wrench wrench = propulsor_wrench(thrust_l, thrust_r, cfg.geometry_dual) +
                              Wrench{0.0, 0.0, tau_env};

        out.log.rows.push_back({state.t, state.position.x, state.position.y, state.yaw,
                                state.velocity.x, state.velocity.y, state.yaw_rate, u_l, u_r,
                                psi_d, u_psi});
        state = step(state, wrench, cfg.geometry_dual, cfg.drag_dual, dist, dt);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Experiments

struct TrialResult {
    int trial = 0;
    TrajectoryLog log;
    std::vector<MocapSample> measured;
    TrialSummary summary;
};

struct ExperimentResult {
    std::vector<TrialResult> trials;
    PathReference reference;
    std::vector<std::string> warnings;
};

inline std::optional<std::string> tail_mass_warning(const RunConfig& cfg, const TailGeometry& tail,
                                                    const RobotGeometry& geom, int propulsors) {
    const double tail_mass = tail.mass_kg(cfg.film_areal_density_kg_m2) * propulsors;
    const double fraction = tail_mass / geom.mass_kg;
    if (fraction <= cfg.tail_mass_fraction_warn) return std::nullopt;
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "warning: %s tail %.1f mm: tail mass fraction %.3f exceeds %.3f; "
                  "heavy tails tend to pull the robot under the surface",
                  to_string(tail.family), tail.length_m * 1e3, fraction,
                  cfg.tail_mass_fraction_warn);
    return std::string(buf);
}

inline ExperimentResult run_open_loop(const RunConfig& cfg, const ThrustMap& map) {
    cfg.validate();
    ExperimentResult result;
    result.reference = PathReference::straight({0.0, 0.0}, 0.0);
    if (auto w = tail_mass_warning(cfg, cfg.tail, cfg.geometry_dual, 2)) result.warnings.push_back(*w);
    for (int trial = 0; trial < cfg.trials; ++trial) {
        DualRunParams p;
        p.freq_hz = cfg.experiment.pwm_freq_hz;
        p.duration_s = cfg.experiment.duration_s;
        p.mode = DualMode::OpenLoop;
        p.open_loop_duty = cfg.experiment.open_loop_duty;
        p.reference = result.reference;
        p.dist_seed = mix_seed(cfg.seed, 2 * static_cast<std::uint64_t>(trial));
        p.mocap_seed = mix_seed(cfg.seed, 2 * static_cast<std::uint64_t>(trial) + 1);
        DualRunOutput run = simulate_dual(cfg, map, p);
        TrialSummary s = metrics(run.log, result.reference, cfg.geometry_dual.body_length_m,
                                 cfg.sensing.fir);
        result.trials.push_back({trial, std::move(run.log), std::move(run.measured), s});
    }
    return result;
}

inline ExperimentResult run_closed_loop(const RunConfig& cfg, const ThrustMap& map) {
    cfg.validate();
    ExperimentResult result;
    result.reference = PathReference::straight({0.0, 0.0}, 0.0);
    if (auto w = tail_mass_warning(cfg, cfg.tail, cfg.geometry_dual, 2)) result.warnings.push_back(*w);
    for (int trial = 0; trial < cfg.trials; ++trial) {
        DualRunParams p;
        p.freq_hz = cfg.experiment.pwm_freq_hz;
        p.duration_s = cfg.experiment.duration_s;
        p.mode = DualMode::ClosedLoop;
        p.reference = result.reference;
        p.start_position = {0.0, cfg.experiment.initial_lateral_offset_m};
        p.dist_seed = mix_seed(cfg.seed, 2 * static_cast<std::uint64_t>(trial));
        p.mocap_seed = mix_seed(cfg.seed, 2 * static_cast<std::uint64_t>(trial) + 1);
        DualRunOutput run = simulate_dual(cfg, map, p);
        TrialSummary s = metrics(run.log, result.reference, cfg.geometry_dual.body_length_m,
                                 cfg.sensing.fir);
        result.trials.push_back({trial, std::move(run.log), std::move(run.measured), s});
    }
    return result;
}

enum class TurnDirection { Left, Right };

inline ExperimentResult run_turn(const RunConfig& cfg, const ThrustMap& map, TurnDirection dir) {
    cfg.validate();
    ExperimentResult result;
    result.reference = PathReference::turn({0.0, 0.0}, 0.0, cfg.experiment.turn_leg_length_m,
                                           dir == TurnDirection::Left, cfg.experiment.turn_lead_m);
    if (auto w = tail_mass_warning(cfg, cfg.tail, cfg.geometry_dual, 2)) result.warnings.push_back(*w);
    for (int trial = 0; trial < cfg.trials; ++trial) {
        DualRunParams p;
        p.freq_hz = cfg.experiment.pwm_freq_hz;
        p.duration_s = cfg.experiment.turn_duration_s;
        p.mode = DualMode::ClosedLoop;
        p.reference = result.reference;
        p.dist_seed = mix_seed(cfg.seed, 2 * static_cast<std::uint64_t>(trial));
        p.mocap_seed = mix_seed(cfg.seed, 2 * static_cast<std::uint64_t>(trial) + 1);
        DualRunOutput run = simulate_dual(cfg, map, p);
        TrialSummary s = metrics(run.log, result.reference, cfg.geometry_dual.body_length_m,
                                 cfg.sensing.fir);
        result.trials.push_back({trial, std::move(run.log), std::move(run.measured), s});
    }
    return result;
}

// ---------------------------------------------------------------------------
// Characterization sweep

struct SweepCell {
    TailGeometry tail;
    double freq_hz = 0.0;
    double duty = 0.0;
    double mean_speed_m_s = 0.0;  // mean over trials
    double esd_m_s = 0.0;         // empirical standard deviation over trials
    int n_trials = 0;
    double reynolds = 0.0;        // at the mean speed, swimmer length incl. tail
};

struct SweepResult {
    std::vector<SweepCell> cells;
    std::vector<std::string> warnings;
};

// Simulates N seeded trials for every calibrated (tail, frequency) knot at
// its calibration duty. The per-trial average speed is the path speed over
// the measurement window (the settle interval is excluded).
inline SweepResult run_sweep(const RunConfig& cfg, const ThrustMap& map) {
    cfg.validate();
    if (map.empty()) throw std::invalid_argument("run_sweep: calibrated thrust map required");
    SweepResult result;
    const double dt = cfg.dt();
    const std::size_t settle_steps =
        static_cast<std::size_t>(std::lround(cfg.experiment.settle_s / dt));

    std::uint64_t cell_index = 0;
    for (const ThrustMap::Entry& entry : map.entries()) {
        SweepCell cell;
        cell.tail = entry.tail;
        cell.freq_hz = entry.freq_hz;
        cell.duty = entry.duty;
        cell.n_trials = cfg.trials;
        if (auto w = tail_mass_warning(cfg, entry.tail, cfg.geometry_single, 1)) {
            bool seen = false;
            for (const std::string& prev : result.warnings) seen = seen || prev == *w;
            if (!seen) result.warnings.push_back(*w);
        }

        std::vector<double> speeds;
        speeds.reserve(static_cast<std::size_t>(cfg.trials));
        const std::uint64_t cell_seed = mix_seed(cfg.seed, cell_index++);
        for (int trial = 0; trial < cfg.trials; ++trial) {
            SingleRunParams p;
            p.tail = entry.tail;
            p.freq_hz = entry.freq_hz;
            p.duty = entry.duty;
            p.duration_s = cfg.experiment.settle_s + cfg.experiment.duration_s;
            p.from_steady = true;  // the 20 s recording starts mid-swim
            p.dist_seed = mix_seed(cell_seed, static_cast<std::uint64_t>(trial));
            const TrajectoryLog log = simulate_single(cfg, map, p);
            double acc = 0.0;
            std::size_t count = 0;
            for (std::size_t i = settle_steps; i < log.rows.size(); ++i) {
                acc += std::hypot(log.rows[i].v1, log.rows[i].v2);
                ++count;
            }
            require(count > 0, "run_sweep: measurement window is empty");
            speeds.push_back(acc / static_cast<double>(count));
        }

        double mean = 0.0;
        for (double v : speeds) mean += v;
        mean /= static_cast<double>(speeds.size());
        const bool all_equal =
            std::all_of(speeds.begin(), speeds.end(), [&](double v) { return v == speeds[0]; });
        double var = 0.0;
        for (double v : speeds) var += (v - mean) * (v - mean);
        cell.mean_speed_m_s = all_equal ? speeds[0] : mean;
        cell.esd_m_s = speeds.size() > 1 && !all_equal
                           ? std::sqrt(var / static_cast<double>(speeds.size() - 1))
                           : 0.0;
        cell.reynolds = reynolds_number(cfg.geometry_single.body_length_m, mean, cfg.fluid);
        result.cells.push_back(cell);
    }
    return result;
}

// ---------------------------------------------------------------------------
// CSV persistence

namespace detail {

inline void append_num(std::string& line, double v, bool first = false) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    if (!first) line += ',';
    line += buf;
}

}  // namespace detail

inline void write_trajectory_csv(const std::string& path, const TrajectoryLog& log) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_trajectory_csv: cannot write " + path);
    out << "t,r1_mm,r2_mm,psi_rad,v1_mm_s,v2_mm_s,omega_rad_s,u_l,u_r";
    if (log.has_control) out << ",psi_d,u_psi";
    out << "\n";
    for (const TrajectoryRow& r : log.rows) {
        std::string line;
        detail::append_num(line, r.t, true);
        detail::append_num(line, r.r1 * 1e3);
        detail::append_num(line, r.r2 * 1e3);
        detail::append_num(line, r.psi);
        detail::append_num(line, r.v1 * 1e3);
        detail::append_num(line, r.v2 * 1e3);
        detail::append_num(line, r.omega);
        detail::append_num(line, r.u_l);
        detail::append_num(line, r.u_r);
        if (log.has_control) {
            detail::append_num(line, r.psi_d);
            detail::append_num(line, r.u_psi);
        }
        out << line << "\n";
    }
}

// Trajectory log plus the filtered measurement pipeline: velocities are
// derived from the measured poses (first difference + FIR), converted to the
// body frame with the measured yaw.
inline void write_filtered_telemetry_csv(const std::string& path, const TrajectoryLog& log,
                                         const std::vector<MocapSample>& measured,
                                         const FirSpec& fir) {
    require(measured.size() == log.rows.size(),
            "write_filtered_telemetry_csv: measurement/log size mismatch");
    const std::vector<VelocitySample> vel = differentiate(measured);
    std::vector<double> v1(vel.size()), v2(vel.size()), om(vel.size());
    for (std::size_t i = 0; i < vel.size(); ++i) {
        v1[i] = vel[i].v1;
        v2[i] = vel[i].v2;
        om[i] = vel[i].omega;
    }
    FirSpec spec = fir;
    spec.sample_rate_hz = log.sample_rate_hz;
    const std::vector<double> f1 = fir_lowpass(v1, spec);
    const std::vector<double> f2 = fir_lowpass(v2, spec);
    const std::vector<double> fo = fir_lowpass(om, spec);

    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_filtered_telemetry_csv: cannot write " + path);
    out << "t,r1_mm,r2_mm,psi_rad,v1_mm_s,v2_mm_s,omega_rad_s,u_l,u_r";
    if (log.has_control) out << ",psi_d,u_psi";
    out << ",v1_mm_s_filt,v2_mm_s_filt,omega_rad_s_filt\n";
    for (std::size_t i = 0; i < log.rows.size(); ++i) {
        const TrajectoryRow& r = log.rows[i];
        const Vec2 body = rotate({f1[i], f2[i]}, -measured[i].psi);
        std::string line;
        detail::append_num(line, r.t, true);
        detail::append_num(line, r.r1 * 1e3);
        detail::append_num(line, r.r2 * 1e3);
        detail::append_num(line, r.psi);
        detail::append_num(line, r.v1 * 1e3);
        detail::append_num(line, r.v2 * 1e3);
        detail::append_num(line, r.omega);
        detail::append_num(line, r.u_l);
        detail::append_num(line, r.u_r);
        if (log.has_control) {
            detail::append_num(line, r.psi_d);
            detail::append_num(line, r.u_psi);
        }
        detail::append_num(line, body.x * 1e3);
        detail::append_num(line, body.y * 1e3);
        detail::append_num(line, fo[i]);
        out << line << "\n";
    }
}

inline void write_summary_csv(const std::string& path, const ExperimentResult& result) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_summary_csv: cannot write " + path);
    const std::size_t segments = result.reference.segments.size();
    out << "trial,mean_speed_mm_s,max_window_speed_mm_s,speed_bl_s,rms_lateral_mm,"
           "max_window_turn_rate_rad_s";
    if (segments > 1)
        for (std::size_t k = 0; k < segments; ++k) out << ",rms_segment" << k << "_mm";
    out << "\n";
    for (const TrialResult& t : result.trials) {
        std::string line = std::to_string(t.trial);
        detail::append_num(line, t.summary.mean_speed_m_s * 1e3);
        detail::append_num(line, t.summary.max_window_speed_m_s * 1e3);
        detail::append_num(line, t.summary.speed_bl_s);
        detail::append_num(line, t.summary.rms_lateral_m * 1e3);
        detail::append_num(line, t.summary.max_window_turn_rate_rad_s);
        if (segments > 1)
            for (std::size_t k = 0; k < segments; ++k)
                detail::append_num(line, k < t.summary.rms_lateral_by_segment_m.size()
                                             ? t.summary.rms_lateral_by_segment_m[k] * 1e3
                                             : 0.0);
        out << line << "\n";
    }
}

inline void write_sweep_csv(const std::string& path, const SweepResult& result) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_sweep_csv: cannot write " + path);
    out << "family,length_mm,height_mm,aspect_ratio,freq_hz,duty,mean_speed_mm_s,esd_mm_s,"
           "n_trials,reynolds\n";
    for (const SweepCell& c : result.cells) {
        std::string line = to_string(c.tail.family);
        detail::append_num(line, c.tail.length_m * 1e3);
        detail::append_num(line, c.tail.height_m() * 1e3);
        detail::append_num(line, c.tail.family == TailFamily::Parabolic
                                     ? c.tail.aspect_ratio
                                     : c.tail.height_rect_m / c.tail.length_m);
        detail::append_num(line, c.freq_hz);
        detail::append_num(line, c.duty);
        detail::append_num(line, c.mean_speed_m_s * 1e3);
        detail::append_num(line, c.esd_m_s * 1e3);
        line += ',' + std::to_string(c.n_trials);
        detail::append_num(line, c.reynolds);
        out << line << "\n";
    }
}

}  // namespace microswim
