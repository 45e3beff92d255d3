// Command-line experiment driver: thrust-map calibration, characterization
// sweeps, and open-loop / closed-loop / turning runs, with CSV + JSON
// outputs suitable for offline analysis.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "microswim/config.hpp"
#include "microswim/experiments.hpp"
#include "microswim/thrust_map.hpp"

namespace {

using namespace microswim;

struct CliOptions {
    std::string config_path;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
};

RunConfig resolve_config(const CliOptions& opt) {
    RunConfig cfg;
    if (!opt.config_path.empty()) cfg = load_config(opt.config_path);
    if (opt.seed) cfg.seed = *opt.seed;
    if (opt.trials) cfg.trials = *opt.trials;
    cfg.validate();
    return cfg;
}

std::filesystem::path prepare_out_dir(const CliOptions& opt, const RunConfig& cfg,
                                      const std::string& command) {
    const std::filesystem::path dir(opt.out_dir);
    std::filesystem::create_directories(dir);
    nlohmann::json echo = to_json(cfg);
    echo["command"] = command;
    std::ofstream out(dir / "run.json");
    out << echo.dump(2) << "\n";
    return dir;
}

ThrustMap calibrated_map(const RunConfig& cfg) {
    const auto table = load_speed_table(cfg.calibration_csv);
    return calibrate_thrust_map(table, cfg.drag_single);
}

void print_warnings(const std::vector<std::string>& warnings) {
    for (const std::string& w : warnings) std::cerr << w << "\n";
}

void persist_experiment(const std::filesystem::path& dir, const RunConfig& cfg,
                        const ExperimentResult& result) {
    write_summary_csv((dir / "summary.csv").string(), result);
    for (const TrialResult& t : result.trials) {
        const std::string stem = "trial_" + std::to_string(t.trial);
        write_trajectory_csv((dir / (stem + ".csv")).string(), t.log);
        write_filtered_telemetry_csv((dir / (stem + "_filt.csv")).string(), t.log, t.measured,
                                     cfg.sensing.fir);
    }
    print_warnings(result.warnings);
    for (const TrialResult& t : result.trials) {
        std::printf("trial %d: mean %.2f mm/s, max 1s window %.2f mm/s (%.2f Bl/s), "
                    "RMS lateral %.2f mm, max 1s turn rate %.3f rad/s",
                    t.trial, t.summary.mean_speed_m_s * 1e3, t.summary.max_window_speed_m_s * 1e3,
                    t.summary.speed_bl_s, t.summary.rms_lateral_m * 1e3,
                    t.summary.max_window_turn_rate_rad_s);
        if (t.summary.rms_lateral_by_segment_m.size() > 1) {
            std::printf(" [per segment:");
            for (double rms : t.summary.rms_lateral_by_segment_m)
                std::printf(" %.2f mm", rms * 1e3);
            std::printf("]");
        }
        std::printf("\n");
    }
}

int cmd_calibrate(const CliOptions& opt) {
    const RunConfig cfg = resolve_config(opt);
    const auto dir = prepare_out_dir(opt, cfg, "calibrate");
    const ThrustMap map = calibrated_map(cfg);
    map.save((dir / "thrust_map.json").string());
    std::printf("calibrated %zu entries from %s -> %s\n", map.entries().size(),
                cfg.calibration_csv.c_str(), (dir / "thrust_map.json").c_str());
    return 0;
}

int cmd_sweep(const CliOptions& opt) {
    const RunConfig cfg = resolve_config(opt);
    const auto dir = prepare_out_dir(opt, cfg, "sweep");
    const ThrustMap map = calibrated_map(cfg);
    const SweepResult result = run_sweep(cfg, map);
    write_sweep_csv((dir / "sweep.csv").string(), result);
    print_warnings(result.warnings);
    double best = 0.0;
    const SweepCell* best_cell = nullptr;
    for (const SweepCell& c : result.cells) {
        if (c.mean_speed_m_s > best) {
            best = c.mean_speed_m_s;
            best_cell = &c;
        }
    }
    std::printf("swept %zu (tail, frequency) cells x %d trials -> %s\n", result.cells.size(),
                cfg.trials, (dir / "sweep.csv").c_str());
    if (best_cell) {
        std::printf("best cell: %s %.0f mm at %.0f Hz: %.2f mm/s (Re %.0f)\n",
                    to_string(best_cell->tail.family), best_cell->tail.length_m * 1e3,
                    best_cell->freq_hz, best * 1e3, best_cell->reynolds);
    }
    return 0;
}

int cmd_open_loop(const CliOptions& opt) {
    const RunConfig cfg = resolve_config(opt);
    const auto dir = prepare_out_dir(opt, cfg, "open-loop");
    const ExperimentResult result = run_open_loop(cfg, calibrated_map(cfg));
    persist_experiment(dir, cfg, result);
    return 0;
}

int cmd_closed_loop(const CliOptions& opt) {
    const RunConfig cfg = resolve_config(opt);
    const auto dir = prepare_out_dir(opt, cfg, "closed-loop");
    const ExperimentResult result = run_closed_loop(cfg, calibrated_map(cfg));
    persist_experiment(dir, cfg, result);
    return 0;
}

int cmd_turn(const CliOptions& opt, const std::string& direction) {
    const RunConfig cfg = resolve_config(opt);
    const auto dir = prepare_out_dir(opt, cfg, "turn");
    const TurnDirection d = direction == "left" ? TurnDirection::Left : TurnDirection::Right;
    const ExperimentResult result = run_turn(cfg, calibrated_map(cfg), d);
    persist_experiment(dir, cfg, result);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Surface-microswimmer simulator and 2D tracking control experiments"};
    app.require_subcommand(1);

    CliOptions opt;
    std::string direction = "left";

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opt.config_path, "Run-configuration JSON")
            ->check(CLI::ExistingFile);
        sub->add_option("--out", opt.out_dir, "Output directory (created if missing)");
        sub->add_option("--seed", opt.seed, "Override the run seed");
        sub->add_option("--trials", opt.trials, "Override the number of trials");
    };

    CLI::App* calibrate = app.add_subcommand("calibrate", "Fit the thrust map from the speed table");
    CLI::App* sweep = app.add_subcommand("sweep", "Tail-characterization sweep over calibrated knots");
    CLI::App* open_loop = app.add_subcommand("open-loop", "Straight swim at fixed equal duties");
    CLI::App* closed_loop = app.add_subcommand("closed-loop", "Straight-line tracking with the control cascade");
    CLI::App* turn = app.add_subcommand("turn", "90-degree turn maneuver");
    for (CLI::App* sub : {calibrate, sweep, open_loop, closed_loop, turn}) add_common(sub);
    turn->add_option("--direction", direction, "Turn direction")
        ->check(CLI::IsMember({"left", "right"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (calibrate->parsed()) return cmd_calibrate(opt);
        if (sweep->parsed()) return cmd_sweep(opt);
        if (open_loop->parsed()) return cmd_open_loop(opt);
        if (closed_loop->parsed()) return cmd_closed_loop(opt);
        if (turn->parsed()) return cmd_turn(opt, direction);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
