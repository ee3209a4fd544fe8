#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "rpo/orbital_core.hpp"
#include "rpo/propagator.hpp"

namespace rpo {

enum class BlockLabel { raan_cor, u_cor, i_cor, e_cor };

std::string_view to_string(BlockLabel label);

/// Planned thruster firings of one maneuver block.
struct FiringSchedule {
    BlockLabel label = BlockLabel::raan_cor;
    std::vector<ThrustSegment> segments;
    /// First-order change of the chaser's mean elements caused by the firings.
    RelativeElements predicted_effect;
    /// Predicted mean relative elements when the block completes.
    RelativeElements predicted_final;
    double planned_at = 0.0;
    /// Block completion time (end of the last firing, or of the coast).
    double end_time = 0.0;

    [[nodiscard]] bool empty() const { return segments.empty(); }
};

/// Mean-element snapshot the planners work from.
struct PlanningState {
    double epoch = 0.0;
    OrbitalElements target;
    OrbitalElements chaser;
    double chaser_mass = 4.0;
    /// No firing may start before this time.
    double earliest_start = 0.0;
    GravityConstants gravity;

    [[nodiscard]] RelativeElements relative() const { return relative_elements(chaser, target); }
    /// Charging interval required between firings (one target period).
    [[nodiscard]] double charging_period() const { return target.period(gravity); }
};

struct Deadbands {
    double da = 0.5;  ///< [km]
    double draan = 0.02 * kDeg;
    double du = 0.1 * kDeg;
    double di = 0.002 * kDeg;
    double de = 1.0e-4;
};

/// Sizing of the along-track altitude blocks (raan_cor, u_cor).
struct AltitudeBlockOptions {
    int max_firings = 5;
    /// The planner uses the fewest firings whose coast fits in this time.
    double preferred_coast = 20.0 * kSecondsPerDay;
    /// Longest acceptable coast before the plan is rejected.
    double max_coast = 60.0 * kSecondsPerDay;
};

/// Eccentricity-block operation durations. Operation 1 fires at perigee with
/// compensating quadrature firings, operation 2 at apogee.
struct EccOpParams {
    double t_e1 = 900.0;
    double t_e2 = 900.0;
    bool include_op1 = true;
    bool include_op2 = true;
    /// +1 raises eccentricity; -1 reverses every firing of the operation.
    double op1_sign = 1.0;
    double op2_sign = 1.0;
};

/// Which operation of the eccentricity block to favour. `positive` shifts the
/// along-track center toward +y, `negative` toward -y.
enum class AlongTrackBias { none, positive, negative };

/// First-order change of the chaser's mean elements produced by `schedule`,
/// relative to the same chaser coasting without firings until the schedule
/// ends. `chaser` are mean elements valid at `epoch`.
RelativeElements predict_effect(std::span<const ThrustSegment> schedule, const OrbitalElements& chaser, double epoch,
                                double chaser_mass, const SpacecraftParams& params, const GravityConstants& g = {});

/// Predicted mean relative elements at `t_final` after flying `schedule`,
/// using J2 secular rates plus first-order impulsive firing effects.
RelativeElements predict_relative(const PlanningState& state, std::span<const ThrustSegment> schedule,
                                  const SpacecraftParams& params, double t_final);

/// Altitude change / J2 differential-drift / altitude restore sequence driving
/// the RAAN difference to `desired_draan`.
FiringSchedule plan_raan_correction(const PlanningState& state, const SpacecraftParams& params,
                                    const AltitudeBlockOptions& options, const Deadbands& deadbands = {},
                                    double desired_draan = 0.0);

/// Altitude change / phasing coast / restore sequence that moves the mean
/// along-track center a (du + draan cos i) to `desired_center_y` [km].
FiringSchedule plan_arglat_correction(const PlanningState& state, const SpacecraftParams& params,
                                      const AltitudeBlockOptions& options, double desired_center_y,
                                      const Deadbands& deadbands = {});

/// Node-centered cross-track firings changing the inclination by `di_correction`.
FiringSchedule plan_inclination_correction(const PlanningState& state, const SpacecraftParams& params,
                                           double di_correction, const Deadbands& deadbands = {});

/// Eccentricity operations with explicit durations, flown as consecutive pairs.
FiringSchedule plan_eccentricity_ops(const PlanningState& state, const SpacecraftParams& params,
                                     std::span<const EccOpParams> pairs);

/// Eccentricity correction from full-length operations, the last one
/// shortened to the residual. Without a bias the operations alternate.
FiringSchedule plan_eccentricity_correction(const PlanningState& state, const SpacecraftParams& params,
                                            double de_correction, AlongTrackBias bias,
                                            const Deadbands& deadbands = {}, int max_operations = 6);

/// Sizes one operation pair that changes eccentricity by `de_correction` and
/// shifts the along-track center by `dy_correction` [km]. Durations are
/// scaled down together when either exceeds the firing limit.
EccOpParams size_eccentricity_pair(const PlanningState& state, const SpacecraftParams& params, double de_correction,
                                   double dy_correction, double min_firing = 20.0);

/// Mean along-track center a (du + draan cos i) [km].
double along_track_center(const RelativeElements& delta, const OrbitalElements& target);

}  // namespace rpo
