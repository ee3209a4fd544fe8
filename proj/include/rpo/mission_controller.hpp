#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "rpo/maneuver_blocks.hpp"
#include "rpo/propagator.hpp"
#include "rpo/relative_motion.hpp"

namespace rpo {

/// Formation the controller steers toward. Only de and di are free.
struct DesiredRelativeElements {
    double da = 0.0;
    double draan = 0.0;
    double du = 0.0;
    double de = 0.001;
    double di = 0.02 * kDeg;
};

struct NavUpdate {
    double epoch = 0.0;
    OrbitalElements target;  ///< mean
    OrbitalElements chaser;  ///< mean
    double next_due = 0.0;

    [[nodiscard]] RelativeElements relative() const { return relative_elements(chaser, target); }
};

/// Uplink schedule of processed orbit information.
struct NavModel {
    double period = 175.0 * 60.0;  ///< [s]
    double jitter = 0.0;  ///< half-width of the uniform jitter [s]
    std::uint64_t seed = 1;
};

/// Deterministic sequence of update epochs drawn from a NavModel.
class NavClock {
public:
    explicit NavClock(const NavModel& model);
    /// Epoch following `t`.
    double next(double t);

private:
    NavModel model_;
    std::mt19937_64 rng_;
};

/// Mean elements of both spacecraft from their truth states, valid at the
/// states' common epoch.
NavUpdate navigation(const EciState& target, const EciState& chaser, double next_due, const GravityConstants& g = {});

enum class Phase { commissioning, raan, approach, ellipse_setup, circumnavigation, done };
inline constexpr std::array<Phase, 6> kPhases{Phase::commissioning, Phase::raan, Phase::approach,
                                              Phase::ellipse_setup, Phase::circumnavigation, Phase::done};

std::string_view to_string(Phase phase);

enum class SetupStage { inclination, eccentricity };

struct MissionEvent {
    double time = 0.0;
    /// Epoch of the navigation data the decision used.
    double nav_epoch = 0.0;
    Phase phase = Phase::commissioning;
    std::string text;
};

struct MissionState {
    Phase phase = Phase::commissioning;
    SetupStage stage = SetupStage::inclination;
    double phase_start = 0.0;
    RelativeElements estimate;
    double chaser_mass = 4.0;
    double delta_v_used = 0.0;  ///< [m/s]
    double impulse_used = 0.0;  ///< [N s]
    double last_firing_end = -std::numeric_limits<double>::infinity();
    std::vector<MissionEvent> events;
};

struct PhaseLimits {
    double raan = 120.0 * kSecondsPerDay;
    double approach = 40.0 * kSecondsPerDay;
    double ellipse_setup = 30.0 * kSecondsPerDay;
};

struct MissionConfig {
    /// Initial osculating elements of the target.
    OrbitalElements target;
    /// Separation impulse in the target RSW frame [m/s], applied at t = 0.
    Vec3 separation_dv = Vec3(1.375, 1.452, 0.0);
    /// Overrides the impulse: chaser mean elements = target mean + offset.
    std::optional<RelativeElements> separation_offset;
    double commissioning = 30.0 * kSecondsPerDay;
    double circumnavigation = 30.0 * kSecondsPerDay;
    SpacecraftParams spacecraft;
    ForceModelConfig forces;
    DesiredRelativeElements desired;
    Deadbands deadbands;
    /// Along-track separation that ends the approach [km].
    double approach_threshold = 50.0;
    /// Along-track center the approach aims for, kept on the current side [km].
    double reserved_offset = 30.0;
    /// Along-track center tolerance closing the ellipse setup [km].
    double center_tolerance = 3.0;
    AltitudeBlockOptions raan_options{5, 20.0 * kSecondsPerDay, 60.0 * kSecondsPerDay};
    AltitudeBlockOptions approach_options{5, 5.0 * kSecondsPerDay, 10.0 * kSecondsPerDay};
    NavModel nav;
    PhaseLimits limits;
    double step = 30.0;  ///< integrator step [s]
    double output_interval = 600.0;  ///< time-series sampling [s]
    /// Sampling of the circumnavigation relative trajectory [s].
    double geometry_interval = 60.0;
    /// Ends the run early at this time; the report is then marked truncated.
    std::optional<double> stop_time;
};

struct PhaseStep {
    MissionState next;
    std::optional<FiringSchedule> schedule;
};

/// One controller decision from the latest navigation update.
PhaseStep step_phase(const MissionState& mission, const NavUpdate& nav, const MissionConfig& config);

struct PhaseRecord {
    Phase phase = Phase::commissioning;
    double start = 0.0;
    double end = 0.0;
    /// Truth mean relative elements when the phase ended.
    RelativeElements exit_elements;
};

struct ExecutedBlock {
    Phase phase = Phase::raan;
    double nav_epoch = 0.0;
    FiringSchedule schedule;
};

struct PhaseDeltaV {
    Phase phase = Phase::commissioning;
    double delta_v = 0.0;  ///< [m/s]
};

struct MissionReport {
    bool completed = false;
    bool truncated = false;
    std::string abort_reason;
    double end_time = 0.0;

    // time series on the output grid
    std::vector<double> time;
    std::vector<EciState> target;
    std::vector<EciState> chaser;
    std::vector<Phase> sample_phase;

    std::vector<PhaseRecord> phases;
    std::vector<ExecutedBlock> blocks;
    std::vector<SegmentRecord> firings;
    /// Phase owning each entry of `firings`.
    std::vector<Phase> firing_phase;
    std::vector<MissionEvent> events;

    double delta_v_used = 0.0;
    double impulse_used = 0.0;
    double initial_mass = 0.0;
    double final_mass = 0.0;
    /// Largest truth |du| seen on output samples during the ellipse setup [rad].
    double max_abs_du_setup = 0.0;

    RelativeElements final_elements;
    /// Relative trajectory through the circumnavigation phase.
    std::vector<RelativeState> circumnavigation;
    CwContext cw;
    /// Measured over the first and the last circumnavigation period.
    EllipseGeometry nominal_geometry;
    EllipseGeometry final_geometry;
    /// Navigation estimate when the circumnavigation began.
    RelativeElements nominal_elements;
    OrbitalElements nominal_target;
};

/// Runs the whole scenario on the truth propagator. Budget or phase-duration
/// violations end the run with `completed = false` and a reason.
MissionReport run_mission(const MissionConfig& config);

/// Per-phase delta-v, control phases in order.
std::vector<PhaseDeltaV> delta_v_ledger(const MissionReport& report);

/// Rocket-equation delta-v between the initial and final mass [m/s].
double rocket_equation_delta_v(const MissionReport& report, const SpacecraftParams& params);

}  // namespace rpo
