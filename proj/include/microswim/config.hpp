#pragma once

// Run configuration: one JSON document describing fluid, tail, robot
// geometry, actuation, drag, disturbance, sensing, control, and experiment
// parameters. Every field has a default; a config file only overrides the
// keys it names. Unknown keys are rejected so typos fail loudly.

#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "microswim/actuation.hpp"
#include "microswim/control.hpp"
#include "microswim/dynamics.hpp"
#include "microswim/hydro.hpp"
#include "microswim/sensing.hpp"

namespace microswim {

struct SensingConfig {
    double position_noise_m = 1.0e-4;
    double yaw_noise_rad = 0.002;
    FirSpec fir;
};

struct ActuationConfig {
    TransmissionModel transmission{1.0e-3, 0.2e-3};  // tuned for 5 Hz by default
    ActuatorBiasModel bias;
    StrokeAmplitudeModel amplitude;
    double envelope_torque_gain_m = 0.002;
};

struct ExperimentConfig {
    double duration_s = 20.0;
    double settle_s = 2.0;            // sweep-only: excluded from averaging
    double pwm_freq_hz = 5.0;
    double pwm_on_voltage_v = 22.0;   // informational, echoed into run.json
    double pwm_on_current_a = 0.25;   // informational
    double open_loop_duty = 0.12;
    double initial_lateral_offset_m = 0.0;
    double turn_leg_length_m = 0.06;  // along-track distance to the corner
    double turn_lead_m = 0.045;       // handover anticipation, about one turn radius
    double turn_duration_s = 18.0;
};

struct RunConfig {
    FluidEnvironment fluid;
    TailGeometry tail = TailGeometry::parabolic(0.026, 0.41);
    RobotGeometry geometry_single{Configuration::Single, 4.5e-5, 8.0e-9, 0.0458, 0.0};
    RobotGeometry geometry_dual{Configuration::Dual, 9.0e-5, 1.7e-8, 0.046, 0.006};
    DragModel drag_single{0.02, 0.08, 1.0e-7};
    DragModel drag_dual{0.0592, 0.2368, 3.28e-7};
    Disturbance disturbance{8.0e-9, 4.0e-10, -0.023, 0};
    SensingConfig sensing;
    ActuationConfig actuation;
    ControllerGains control;
    ExperimentConfig experiment;
    std::string calibration_csv = "data/tail_speeds.csv";
    double sample_rate_hz = 250.0;
    double tail_mass_fraction_warn = 0.16;
    double film_areal_density_kg_m2 = 0.05375;  // 25 um fluoropolymer film
    int trials = 10;
    std::uint64_t seed = 12345;

    double dt() const { return 1.0 / sample_rate_hz; }

    void validate() const {
        fluid.validate();
        geometry_single.validate();
        geometry_dual.validate();
        drag_single.validate();
        drag_dual.validate();
        sensing.fir.validate();
        control.validate();
        actuation.bias.validate();
        require(sample_rate_hz > 0.0, "RunConfig: sample rate must be > 0");
        require(experiment.duration_s > 0.0, "RunConfig: duration must be > 0");
        require(experiment.turn_duration_s > 0.0, "RunConfig: turn duration must be > 0");
        require(experiment.turn_leg_length_m > 0.0, "RunConfig: turn leg length must be > 0");
        require(experiment.turn_lead_m >= 0.0 &&
                    experiment.turn_lead_m < experiment.turn_leg_length_m,
                "RunConfig: turn lead must be in [0, leg length)");
        require(experiment.settle_s >= 0.0, "RunConfig: settle time must be >= 0");
        require(trials >= 1, "RunConfig: trials must be >= 1");
        require(experiment.open_loop_duty >= 0.0 &&
                    experiment.open_loop_duty <= control.duty_max,
                "RunConfig: open-loop duty must be in [0, duty_max]");
    }
};

namespace detail {

inline void check_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed,
                       const std::string& section) {
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const char* a : allowed)
            if (key == a) ok = true;
        if (!ok) throw std::invalid_argument("config: unknown key '" + key + "' in " + section);
    }
}

template <typename T>
void get_if(const nlohmann::json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

inline void parse_tail(const nlohmann::json& j, TailGeometry& tail) {
    check_keys(j, {"family", "length_mm", "aspect_ratio", "height_mm"}, "tail");
    std::string family = to_string(tail.family);
    get_if(j, "family", family);
    double length_mm = tail.length_m * 1e3;
    get_if(j, "length_mm", length_mm);
    if (tail_family_from_string(family) == TailFamily::Parabolic) {
        double ar = tail.aspect_ratio;
        get_if(j, "aspect_ratio", ar);
        tail = TailGeometry::parabolic(length_mm * 1e-3, ar);
    } else {
        double height_mm = tail.height_rect_m * 1e3;
        get_if(j, "height_mm", height_mm);
        tail = TailGeometry::rectangular(length_mm * 1e-3, height_mm * 1e-3);
    }
}

inline void parse_geometry(const nlohmann::json& j, RobotGeometry& g) {
    check_keys(j, {"mass_mg", "yaw_inertia_kg_m2", "body_length_mm", "propulsor_separation_mm"},
               "geometry");
    double mass_mg = g.mass_kg * 1e6;
    double body_length_mm = g.body_length_m * 1e3;
    double separation_mm = g.propulsor_separation_m * 1e3;
    get_if(j, "mass_mg", mass_mg);
    get_if(j, "yaw_inertia_kg_m2", g.yaw_inertia_kg_m2);
    get_if(j, "body_length_mm", body_length_mm);
    get_if(j, "propulsor_separation_mm", separation_mm);
    g.mass_kg = mass_mg * 1e-6;
    g.body_length_m = body_length_mm * 1e-3;
    g.propulsor_separation_m = separation_mm * 1e-3;
}

inline void parse_drag(const nlohmann::json& j, DragModel& d) {
    check_keys(j, {"longitudinal_n_s2_m2", "lateral_n_s2_m2", "rotational_n_m_s2_rad2"}, "drag");
    get_if(j, "longitudinal_n_s2_m2", d.c_long);
    get_if(j, "lateral_n_s2_m2", d.c_lat);
    get_if(j, "rotational_n_m_s2_rad2", d.c_rot);
}

}  // namespace detail

inline void apply_json_overrides(RunConfig& cfg, const nlohmann::json& j) {
    using detail::check_keys;
    using detail::get_if;
    check_keys(j,
               {"fluid", "tail", "geometry", "drag", "disturbance", "sensing", "actuation",
                "control", "experiment", "calibration_csv", "sample_rate_hz",
                "tail_mass_fraction_warn", "film_areal_density_kg_m2", "trials", "seed"},
               "top level");

    if (j.contains("fluid")) {
        const auto& f = j.at("fluid");
        check_keys(f, {"density_kg_m3", "dynamic_viscosity_pa_s", "temperature_c"}, "fluid");
        get_if(f, "density_kg_m3", cfg.fluid.density);
        get_if(f, "dynamic_viscosity_pa_s", cfg.fluid.dynamic_viscosity);
        get_if(f, "temperature_c", cfg.fluid.temperature_c);
    }
    if (j.contains("tail")) detail::parse_tail(j.at("tail"), cfg.tail);
    if (j.contains("geometry")) {
        const auto& g = j.at("geometry");
        check_keys(g, {"single", "dual"}, "geometry");
        if (g.contains("single")) detail::parse_geometry(g.at("single"), cfg.geometry_single);
        if (g.contains("dual")) detail::parse_geometry(g.at("dual"), cfg.geometry_dual);
    }
    if (j.contains("drag")) {
        const auto& d = j.at("drag");
        check_keys(d, {"single", "dual"}, "drag");
        if (d.contains("single")) detail::parse_drag(d.at("single"), cfg.drag_single);
        if (d.contains("dual")) detail::parse_drag(d.at("dual"), cfg.drag_dual);
    }
    if (j.contains("disturbance")) {
        const auto& d = j.at("disturbance");
        check_keys(d, {"lateral_bias_n", "noise_amplitude_n", "application_offset_mm"},
                   "disturbance");
        get_if(d, "lateral_bias_n", cfg.disturbance.lateral_bias_n);
        get_if(d, "noise_amplitude_n", cfg.disturbance.noise_amplitude_n);
        double offset_mm = cfg.disturbance.application_offset_m * 1e3;
        get_if(d, "application_offset_mm", offset_mm);
        cfg.disturbance.application_offset_m = offset_mm * 1e-3;
    }
    if (j.contains("sensing")) {
        const auto& s = j.at("sensing");
        check_keys(s, {"position_noise_mm", "yaw_noise_rad", "fir_order", "fir_cutoff_hz"},
                   "sensing");
        double pos_mm = cfg.sensing.position_noise_m * 1e3;
        get_if(s, "position_noise_mm", pos_mm);
        cfg.sensing.position_noise_m = pos_mm * 1e-3;
        get_if(s, "yaw_noise_rad", cfg.sensing.yaw_noise_rad);
        get_if(s, "fir_order", cfg.sensing.fir.order);
        get_if(s, "fir_cutoff_hz", cfg.sensing.fir.cutoff_hz);
    }
    if (j.contains("actuation")) {
        const auto& a = j.at("actuation");
        check_keys(a,
                   {"delta_mm", "bias_displacement_mm", "bias_gain_rad_per_hz",
                    "bias_threshold_hz", "amplitude_gain_rad_per_duty", "amplitude_saturation_rad",
                    "envelope_torque_gain_m"},
                   "actuation");
        double delta_mm = cfg.actuation.transmission.delta_m * 1e3;
        double d_bias_mm = cfg.actuation.transmission.d_bias_m * 1e3;
        get_if(a, "delta_mm", delta_mm);
        get_if(a, "bias_displacement_mm", d_bias_mm);
        cfg.actuation.transmission.delta_m = delta_mm * 1e-3;
        cfg.actuation.transmission.d_bias_m = d_bias_mm * 1e-3;
        get_if(a, "bias_gain_rad_per_hz", cfg.actuation.bias.bias_gain_rad_per_hz);
        get_if(a, "bias_threshold_hz", cfg.actuation.bias.threshold_hz);
        get_if(a, "amplitude_gain_rad_per_duty", cfg.actuation.amplitude.gain_rad_per_duty);
        get_if(a, "amplitude_saturation_rad", cfg.actuation.amplitude.saturation_rad);
        get_if(a, "envelope_torque_gain_m", cfg.actuation.envelope_torque_gain_m);
    }
    if (j.contains("control")) {
        const auto& c = j.at("control");
        check_keys(c,
                   {"k_p2_rad_m", "k_i2_rad_m", "k_p_psi_rad_inv", "u_v", "k_l", "k_r",
                    "duty_max", "psi_d_max_rad", "integral_clamp_rad"},
                   "control");
        get_if(c, "k_p2_rad_m", cfg.control.k_p2);
        get_if(c, "k_i2_rad_m", cfg.control.k_i2);
        get_if(c, "k_p_psi_rad_inv", cfg.control.k_p_psi);
        get_if(c, "u_v", cfg.control.u_v);
        get_if(c, "k_l", cfg.control.k_l);
        get_if(c, "k_r", cfg.control.k_r);
        get_if(c, "duty_max", cfg.control.duty_max);
        get_if(c, "psi_d_max_rad", cfg.control.psi_d_max);
        get_if(c, "integral_clamp_rad", cfg.control.integral_clamp_rad);
    }
    if (j.contains("experiment")) {
        const auto& e = j.at("experiment");
        check_keys(e,
                   {"duration_s", "settle_s", "pwm_freq_hz", "pwm_on_voltage_v",
                    "pwm_on_current_a", "open_loop_duty", "initial_lateral_offset_mm",
                    "turn_leg_length_mm", "turn_lead_mm", "turn_duration_s"},
                   "experiment");
        get_if(e, "duration_s", cfg.experiment.duration_s);
        get_if(e, "settle_s", cfg.experiment.settle_s);
        get_if(e, "pwm_freq_hz", cfg.experiment.pwm_freq_hz);
        get_if(e, "pwm_on_voltage_v", cfg.experiment.pwm_on_voltage_v);
        get_if(e, "pwm_on_current_a", cfg.experiment.pwm_on_current_a);
        get_if(e, "open_loop_duty", cfg.experiment.open_loop_duty);
        double offset_mm = cfg.experiment.initial_lateral_offset_m * 1e3;
        get_if(e, "initial_lateral_offset_mm", offset_mm);
        cfg.experiment.initial_lateral_offset_m = offset_mm * 1e-3;
        double leg_mm = cfg.experiment.turn_leg_length_m * 1e3;
        get_if(e, "turn_leg_length_mm", leg_mm);
        cfg.experiment.turn_leg_length_m = leg_mm * 1e-3;
        double lead_mm = cfg.experiment.turn_lead_m * 1e3;
        get_if(e, "turn_lead_mm", lead_mm);
        cfg.experiment.turn_lead_m = lead_mm * 1e-3;
        get_if(e, "turn_duration_s", cfg.experiment.turn_duration_s);
    }
    get_if(j, "calibration_csv", cfg.calibration_csv);
    get_if(j, "sample_rate_hz", cfg.sample_rate_hz);
    get_if(j, "tail_mass_fraction_warn", cfg.tail_mass_fraction_warn);
    get_if(j, "film_areal_density_kg_m2", cfg.film_areal_density_kg_m2);
    get_if(j, "trials", cfg.trials);
    get_if(j, "seed", cfg.seed);
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot read " + path);
    nlohmann::json j;
    in >> j;
    RunConfig cfg;
    apply_json_overrides(cfg, j);
    cfg.validate();
    return cfg;
}

// Full echo of the resolved configuration (written as run.json next to the
// experiment outputs).
inline nlohmann::json to_json(const RunConfig& cfg) {
    nlohmann::json j;
    j["fluid"] = {{"density_kg_m3", cfg.fluid.density},
                  {"dynamic_viscosity_pa_s", cfg.fluid.dynamic_viscosity},
                  {"temperature_c", cfg.fluid.temperature_c}};
    nlohmann::json tail = {{"family", to_string(cfg.tail.family)},
                           {"length_mm", cfg.tail.length_m * 1e3}};
    if (cfg.tail.family == TailFamily::Parabolic) {
        tail["aspect_ratio"] = cfg.tail.aspect_ratio;
    } else {
        tail["height_mm"] = cfg.tail.height_rect_m * 1e3;
    }
    j["tail"] = tail;
    auto geom_json = [](const RobotGeometry& g) {
        return nlohmann::json{{"mass_mg", g.mass_kg * 1e6},
                              {"yaw_inertia_kg_m2", g.yaw_inertia_kg_m2},
                              {"body_length_mm", g.body_length_m * 1e3},
                              {"propulsor_separation_mm", g.propulsor_separation_m * 1e3}};
    };
    j["geometry"] = {{"single", geom_json(cfg.geometry_single)},
                     {"dual", geom_json(cfg.geometry_dual)}};
    auto drag_json = [](const DragModel& d) {
        return nlohmann::json{{"longitudinal_n_s2_m2", d.c_long},
                              {"lateral_n_s2_m2", d.c_lat},
                              {"rotational_n_m_s2_rad2", d.c_rot}};
    };
    j["drag"] = {{"single", drag_json(cfg.drag_single)}, {"dual", drag_json(cfg.drag_dual)}};
    j["disturbance"] = {{"lateral_bias_n", cfg.disturbance.lateral_bias_n},
                        {"noise_amplitude_n", cfg.disturbance.noise_amplitude_n},
                        {"application_offset_mm", cfg.disturbance.application_offset_m * 1e3}};
    j["sensing"] = {{"position_noise_mm", cfg.sensing.position_noise_m * 1e3},
                    {"yaw_noise_rad", cfg.sensing.yaw_noise_rad},
                    {"fir_order", cfg.sensing.fir.order},
                    {"fir_cutoff_hz", cfg.sensing.fir.cutoff_hz}};
    j["actuation"] = {{"delta_mm", cfg.actuation.transmission.delta_m * 1e3},
                      {"bias_displacement_mm", cfg.actuation.transmission.d_bias_m * 1e3},
                      {"bias_gain_rad_per_hz", cfg.actuation.bias.bias_gain_rad_per_hz},
                      {"bias_threshold_hz", cfg.actuation.bias.threshold_hz},
                      {"amplitude_gain_rad_per_duty", cfg.actuation.amplitude.gain_rad_per_duty},
                      {"amplitude_saturation_rad", cfg.actuation.amplitude.saturation_rad},
                      {"envelope_torque_gain_m", cfg.actuation.envelope_torque_gain_m}};
    j["control"] = {{"k_p2_rad_m", cfg.control.k_p2},
                    {"k_i2_rad_m", cfg.control.k_i2},
                    {"k_p_psi_rad_inv", cfg.control.k_p_psi},
                    {"u_v", cfg.control.u_v},
                    {"k_l", cfg.control.k_l},
                    {"k_r", cfg.control.k_r},
                    {"duty_max", cfg.control.duty_max},
                    {"psi_d_max_rad", cfg.control.psi_d_max},
                    {"integral_clamp_rad", cfg.control.integral_clamp_rad}};
    j["experiment"] = {{"duration_s", cfg.experiment.duration_s},
                       {"settle_s", cfg.experiment.settle_s},
                       {"pwm_freq_hz", cfg.experiment.pwm_freq_hz},
                       {"pwm_on_voltage_v", cfg.experiment.pwm_on_voltage_v},
                       {"pwm_on_current_a", cfg.experiment.pwm_on_current_a},
                       {"open_loop_duty", cfg.experiment.open_loop_duty},
                       {"initial_lateral_offset_mm", cfg.experiment.initial_lateral_offset_m * 1e3},
                       {"turn_leg_length_mm", cfg.experiment.turn_leg_length_m * 1e3},
                       {"turn_lead_mm", cfg.experiment.turn_lead_m * 1e3},
                       {"turn_duration_s", cfg.experiment.turn_duration_s}};
    j["calibration_csv"] = cfg.calibration_csv;
    j["sample_rate_hz"] = cfg.sample_rate_hz;
    j["tail_mass_fraction_warn"] = cfg.tail_mass_fraction_warn;
    j["film_areal_density_kg_m2"] = cfg.film_areal_density_kg_m2;
    j["trials"] = cfg.trials;
    j["seed"] = cfg.seed;
    return j;
}

}  // namespace microswim
