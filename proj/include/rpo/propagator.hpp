#pragma once

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rpo/orbital_core.hpp"

namespace rpo {

/// Exponential atmosphere with a flat-plate ballistic model.
struct DragModel {
    double cd = 2.2;
    double area = 0.03;  ///< [m^2]
    double rho0 = 2.0e-13;  ///< density at reference altitude [kg/m^3]
    double h0 = 550.0;  ///< reference altitude [km]
    double scale_height = 60.0;  ///< [km]
};

/// Flat-plate solar radiation pressure with an analytic mean Sun and a
/// cylindrical Earth shadow.
struct SrpModel {
    double cr = 1.3;
    double area = 0.03;  ///< [m^2]
    double p0 = 4.56e-6;  ///< pressure at 1 AU [N/m^2]
    bool shadow = true;
    double sun_longitude0 = 0.0;  ///< ecliptic longitude of the Sun at t = 0 [rad]
};

struct ForceModelConfig {
    GravityConstants gravity;
    bool j2_enabled = true;
    std::optional<DragModel> drag;
    std::optional<SrpModel> srp;
};

/// Body-fixed thrust axis expressed in the chaser's own RSW frame.
enum class ThrustAxis { plus_r, minus_r, plus_s, minus_s, plus_w, minus_w };

Vec3 axis_unit_vector(ThrustAxis axis);
std::string_view to_string(ThrustAxis axis);
std::optional<ThrustAxis> parse_thrust_axis(std::string_view text);
ThrustAxis reversed(ThrustAxis axis);

/// Constant thrust along one RSW axis over [t_start, t_end].
struct ThrustSegment {
    double t_start = 0.0;
    double t_end = 0.0;
    ThrustAxis direction = ThrustAxis::plus_s;
    double thrust = 0.0;  ///< [N]

    [[nodiscard]] double duration() const { return t_end - t_start; }
    [[nodiscard]] double impulse() const { return thrust * duration(); }
};

struct SpacecraftParams {
    double wet_mass = 4.0;  ///< [kg]
    double thrust = 6.0e-3;  ///< [N]
    double isp = 100.0;  ///< [s]
    double total_impulse = 270.0;  ///< [N s]
    double max_firing_duration = 900.0;  ///< [s]

    [[nodiscard]] double exhaust_velocity() const { return isp * kG0; }
    [[nodiscard]] double mass_flow() const { return thrust / exhaust_velocity(); }
    /// Budget quoted as total impulse over wet mass [m/s].
    [[nodiscard]] double delta_v_capacity() const { return total_impulse / wet_mass; }
};

struct FiringEvent {
    double time = 0.0;
    int segment = 0;
    bool start = true;
};

/// Accounting for one executed segment.
struct SegmentRecord {
    int segment = 0;
    double delta_v = 0.0;  ///< [m/s]
    double impulse = 0.0;  ///< [N s]
    double mass_start = 0.0;
    double mass_end = 0.0;
};

struct PropagationResult {
    std::vector<double> time;
    std::vector<EciState> target;
    std::vector<EciState> chaser;
    EciState final_target;
    EciState final_chaser;
    double delta_v_used = 0.0;  ///< [m/s]
    double impulse_used = 0.0;  ///< [N s]
    std::vector<FiringEvent> events;
    std::vector<SegmentRecord> segments;
};

struct PropagationOptions {
    double step = 30.0;  ///< RK4 step [s]
    /// Record states on multiples of this interval; 0 records every step.
    double sample_interval = 0.0;
    bool record_initial = true;
    /// Remaining impulse the schedule may consume; defaults to the full budget.
    std::optional<double> impulse_budget;
};

/// Total acceleration [km/s^2]: two-body, optional J2, drag, SRP, and thrust
/// resolved from the spacecraft's RSW axis into ECI.
Vec3 acceleration(const EciState& state, const ForceModelConfig& config,
                  const ThrustSegment* active_thrust = nullptr);

/// Fixed-step RK4 propagation of target and chaser from their common epoch to
/// `t_end`. Steps land on segment boundaries. Thrust applies to the chaser.
PropagationResult propagate(const EciState& target, const EciState& chaser, std::span<const ThrustSegment> schedule,
                            const ForceModelConfig& config, const SpacecraftParams& params, double t_end,
                            const PropagationOptions& options = {});

enum class ViolationKind { firing_limit, charging_gap, overlap, non_positive_duration, impulse_budget };

std::string_view to_string(ViolationKind kind);

struct ScheduleViolation {
    int segment = 0;
    ViolationKind kind = ViolationKind::firing_limit;
    std::string message;
};

struct ScheduleValidation {
    std::vector<ScheduleViolation> violations;
    [[nodiscard]] bool ok() const { return violations.empty(); }
};

/// Checks the thruster duty constraints: each firing at most the firing limit,
/// consecutive firings separated by at least one orbital period of charging,
/// and total impulse within budget. `previous_end` is the end of the last
/// firing already flown, if any.
ScheduleValidation validate_schedule(std::span<const ThrustSegment> schedule, const SpacecraftParams& params,
                                     double target_period,
                                     double previous_end = -std::numeric_limits<double>::infinity(),
                                     std::optional<double> impulse_budget = std::nullopt);

}  // namespace rpo
