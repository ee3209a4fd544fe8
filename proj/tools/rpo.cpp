#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "rpo/artifacts.hpp"
#include "rpo/scenario.hpp"

namespace fs = std::filesystem;
using namespace rpo;

namespace {

enum ExitCode { kOk = 0, kConfigError = 2, kMissionAbort = 3, kIoError = 4 };

fs::path output_dir(const std::optional<std::string>& flag, const ScenarioConfig& config) {
    if (flag) return *flag;
    if (config.output_dir) return *config.output_dir;
    if (const char* env = std::getenv("RPO_OUT_DIR"); env != nullptr && *env != '\0') return env;
    return "out";
}

void print_elements(const char* label, const RelativeElements& d) {
    std::printf("%s: da_km=%s de=%s di_deg=%s draan_deg=%s du_deg=%s\n", label, format_number(d.da).c_str(),
                format_number(d.de).c_str(), format_number(rad2deg(d.di)).c_str(),
                format_number(rad2deg(d.draan)).c_str(), format_number(rad2deg(d.du)).c_str());
}

int run_mission_command(const std::string& config_path, const std::optional<std::string>& out) {
    const ScenarioConfig config = load_config(config_path);
    const MissionConfig mission = mission_config(config);
    const MissionReport report = run_mission(mission);
    const fs::path dir = output_dir(out, config);
    write_mission_artifacts(report, mission, dir);

    std::printf("status: %s\n", report.completed ? "completed" : "aborted");
    for (const PhaseRecord& p : report.phases) {
        if (p.phase == Phase::done) continue;
        std::printf("  %-16s %9.3f -> %9.3f d\n", std::string(to_string(p.phase)).c_str(), p.start / kSecondsPerDay,
                    p.end / kSecondsPerDay);
    }
    for (const PhaseDeltaV& entry : delta_v_ledger(report)) {
        std::printf("  dv %-16s %s m/s\n", std::string(to_string(entry.phase)).c_str(),
                    format_number(entry.delta_v).c_str());
    }
    std::printf("total dv: %s m/s of %s\n", format_number(report.delta_v_used).c_str(),
                format_number(mission.spacecraft.delta_v_capacity()).c_str());
    std::printf("artifacts: %s\n", dir.string().c_str());
    if (!report.completed) {
        std::fprintf(stderr, "mission aborted: %s\n", report.abort_reason.c_str());
        return kMissionAbort;
    }
    return kOk;
}

int propagate_command(const std::string& config_path, double days, bool no_thrust,
                      const std::optional<std::string>& out) {
    const ScenarioConfig config = load_config(config_path);
    MissionConfig mission = mission_config(config);
    const fs::path dir = output_dir(out, config);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());

    std::vector<EciState> target, chaser;
    std::vector<std::string> labels;
    if (no_thrust) {
        mission.commissioning = std::numeric_limits<double>::infinity();
    }
    mission.stop_time = days * kSecondsPerDay;
    const MissionReport report = run_mission(mission);
    for (std::size_t k = 0; k < report.time.size(); ++k) {
        target.push_back(report.target[k]);
        chaser.push_back(report.chaser[k]);
        labels.emplace_back(to_string(report.sample_phase[k]));
    }
    {
        const fs::path path = dir / "elements.csv";
        std::ofstream f(path, std::ios::binary);
        if (!f) throw IoError("cannot write '" + path.string() + "'");
        write_elements(f, target, chaser, labels, mission.forces.gravity);
        if (!f.flush()) throw IoError("failed writing '" + path.string() + "'");
    }
    {
        const fs::path path = dir / "states.csv";
        std::ofstream f(path, std::ios::binary);
        if (!f) throw IoError("cannot write '" + path.string() + "'");
        write_states(f, target, chaser, labels);
        if (!f.flush()) throw IoError("failed writing '" + path.string() + "'");
    }
    if (!no_thrust) {
        const fs::path path = dir / "schedule.csv";
        std::ofstream f(path, std::ios::binary);
        if (!f) throw IoError("cannot write '" + path.string() + "'");
        write_schedule(f, report.blocks);
        if (!f.flush()) throw IoError("failed writing '" + path.string() + "'");
    }
    std::printf("propagated %s days, %zu samples -> %s\n", format_number(days).c_str(), target.size(),
                dir.string().c_str());
    if (!report.completed && !report.truncated) {
        std::fprintf(stderr, "mission aborted: %s\n", report.abort_reason.c_str());
        return kMissionAbort;
    }
    return kOk;
}

int plan_block_command(const std::string& config_path, const std::string& block, double delta, bool execute) {
    const ScenarioConfig config = load_config(config_path);
    const MissionConfig mission = mission_config(config);
    const GravityConstants& g = mission.forces.gravity;

    PlanningState state;
    state.target = osc_to_mean(mission.target, g);
    state.chaser = state.target;
    state.chaser_mass = mission.spacecraft.wet_mass;
    state.gravity = g;

    FiringSchedule plan;
    if (block == "raan") {
        plan = plan_raan_correction(state, mission.spacecraft, mission.raan_options, mission.deadbands, deg2rad(delta));
    } else if (block == "u") {
        plan = plan_arglat_correction(state, mission.spacecraft, mission.approach_options,
                                      state.target.a * deg2rad(delta), mission.deadbands);
    } else if (block == "i") {
        plan = plan_inclination_correction(state, mission.spacecraft, deg2rad(delta), mission.deadbands);
    } else {
        plan = plan_eccentricity_correction(state, mission.spacecraft, delta, AlongTrackBias::none, mission.deadbands);
    }

    if (plan.empty()) {
        std::printf("%s: empty schedule, correction is inside the deadband\n", std::string(to_string(plan.label)).c_str());
        return kOk;
    }
    std::printf("%s: %zu firings, block ends at %s s\n", std::string(to_string(plan.label)).c_str(),
                plan.segments.size(), format_number(plan.end_time).c_str());
    std::printf("  segment,t_start_s,duration_s,axis\n");
    for (std::size_t k = 0; k < plan.segments.size(); ++k) {
        const ThrustSegment& s = plan.segments[k];
        std::printf("  %zu,%s,%s,%s\n", k, format_number(s.t_start).c_str(), format_number(s.duration()).c_str(),
                    std::string(to_string(s.direction)).c_str());
    }
    print_elements("predicted", plan.predicted_final);

    if (execute) {
        const EciState t0 = elements_to_cart(mean_to_osc(state.target, g), g, 0.0, state.chaser_mass);
        EciState c0 = t0;
        PropagationOptions options;
        options.step = mission.step;
        options.sample_interval = plan.end_time + 1.0;
        const PropagationResult r =
            propagate(t0, c0, plan.segments, mission.forces, mission.spacecraft, plan.end_time, options);
        const RelativeElements measured = relative_elements(osc_to_mean(cart_to_elements(r.final_chaser, g), g),
                                                            osc_to_mean(cart_to_elements(r.final_target, g), g));
        print_elements("measured", measured);
        std::printf("delta_v_mps: %s\n", format_number(r.delta_v_used).c_str());
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"CubeSat rendezvous and proximity operations with a duty-cycled electric thruster"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::string> out;

    auto* run = app.add_subcommand("run-mission", "Run the full scenario and write the artifacts");
    run->add_option("--config", config_path, "Scenario JSON")->required();
    run->add_option("--out", out, "Output directory");

    double days = 0.0;
    bool no_thrust = false;
    auto* prop = app.add_subcommand("propagate", "Propagate the scenario for a number of days");
    prop->add_option("--config", config_path, "Scenario JSON")->required();
    prop->add_option("--days", days, "Days to propagate")->required()->check(CLI::NonNegativeNumber);
    prop->add_flag("--no-thrust", no_thrust, "Coast both spacecraft without controller firings");
    prop->add_option("--out", out, "Output directory");

    std::string block;
    double delta = 0.0;
    bool execute = false;
    auto* plan = app.add_subcommand("plan-block", "Plan one maneuver block from a coincident start");
    plan->add_option("--block", block, "raan, u, i, or e")->required()->check(CLI::IsMember({"raan", "u", "i", "e"}));
    plan->add_option("--config", config_path, "Scenario JSON")->required();
    plan->add_option("--delta", delta, "Correction: degrees for raan/u/i, dimensionless for e")->required();
    plan->add_flag("--execute", execute, "Propagate the schedule and report the measured change");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        if (*run) return run_mission_command(config_path, out);
        if (*prop) return propagate_command(config_path, days, no_thrust, out);
        return plan_block_command(config_path, block, delta, execute);
    } catch (const ConfigError& e) {
        std::cerr << e.what() << '\n';
        return kConfigError;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIoError;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kMissionAbort;
    }
}
