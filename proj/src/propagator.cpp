#include "rpo/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rpo {

namespace {

constexpr double kTimeEps = 1e-6;
constexpr double kEarthRotation = 7.292115e-5;  // [rad/s]
constexpr double kObliquity = 23.4393 * kDeg;
constexpr double kSunRate = kTwoPi / (365.25 * kSecondsPerDay);

using TargetVec = Eigen::Matrix<double, 6, 1>;
// r, v, mass, accumulated delta-v [m/s]
using ChaserVec = Eigen::Matrix<double, 8, 1>;

Vec3 gravity_acceleration(const Vec3& r, const ForceModelConfig& config) {
    const GravityConstants& g = config.gravity;
    const double rm = r.norm();
    Vec3 a = -g.mu / (rm * rm * rm) * r;
    if (config.j2_enabled && g.j2 != 0.0) {
        const double factor = 1.5 * g.j2 * g.mu * g.re * g.re / std::pow(rm, 5);
        const double z2 = 5.0 * r.z() * r.z() / (rm * rm);
        a += factor * Vec3(r.x() * (z2 - 1.0), r.y() * (z2 - 1.0), r.z() * (z2 - 3.0));
    }
    return a;
}

Vec3 sun_direction(double t, double longitude0) {
    const double lon = longitude0 + kSunRate * t;
    return {std::cos(lon), std::cos(kObliquity) * std::sin(lon), std::sin(kObliquity) * std::sin(lon)};
}

Vec3 perturbations(double t, const Vec3& r, const Vec3& v, double mass, const ForceModelConfig& config) {
    Vec3 a = Vec3::Zero();
    if (config.drag) {
        const DragModel& d = *config.drag;
        const double altitude = r.norm() - config.gravity.re;
        const double rho = d.rho0 * std::exp(-(altitude - d.h0) / d.scale_height);
        const Vec3 v_rel = v - Vec3(0.0, 0.0, kEarthRotation).cross(r);
        // km^2/s^2 -> m^2/s^2 is 1e6, m/s^2 -> km/s^2 is 1e-3
        a += -0.5 * d.cd * d.area / mass * rho * v_rel.norm() * v_rel * 1.0e3;
    }
    if (config.srp) {
        const SrpModel& s = *config.srp;
        const Vec3 sun = sun_direction(t, s.sun_longitude0);
        const double along = r.dot(sun);
        const bool eclipsed = s.shadow && along < 0.0 && (r - along * sun).norm() < config.gravity.re;
        if (!eclipsed) a += -s.p0 * s.cr * s.area / mass * sun * 1.0e-3;
    }
    return a;
}

Vec3 thrust_acceleration(const Vec3& r, const Vec3& v, double mass, const ThrustSegment& seg) {
    const Vec3 dir = rsw_basis(r, v) * axis_unit_vector(seg.direction);
    return seg.thrust / mass * dir * 1.0e-3;
}

void check_altitude(const Vec3& r, const ForceModelConfig& config) {
    if (r.norm() < config.gravity.re) throw DomainError("spacecraft decayed below the Earth radius");
}

TargetVec target_derivative(double t, const TargetVec& s, double mass, const ForceModelConfig& config) {
    const Vec3 r = s.head<3>();
    const Vec3 v = s.tail<3>();
    TargetVec d;
    d.head<3>() = v;
    d.tail<3>() = gravity_acceleration(r, config) + perturbations(t, r, v, mass, config);
    return d;
}

ChaserVec chaser_derivative(double t, const ChaserVec& s, const ForceModelConfig& config, const SpacecraftParams& params,
                            const ThrustSegment* seg) {
    const Vec3 r = s.segment<3>(0);
    const Vec3 v = s.segment<3>(3);
    const double mass = s(6);
    ChaserVec d = ChaserVec::Zero();
    d.segment<3>(0) = v;
    Vec3 a = gravity_acceleration(r, config) + perturbations(t, r, v, mass, config);
    if (seg != nullptr) {
        a += thrust_acceleration(r, v, mass, *seg);
        d(6) = -seg->thrust / params.exhaust_velocity();
        d(7) = seg->thrust / mass;
    }
    d.segment<3>(3) = a;
    return d;
}

template <typename Vec, typename Deriv>
Vec rk4_step(double t, const Vec& s, double h, Deriv&& f) {
    const Vec k1 = f(t, s);
    const Vec k2 = f(t + 0.5 * h, Vec(s + 0.5 * h * k1));
    const Vec k3 = f(t + 0.5 * h, Vec(s + 0.5 * h * k2));
    const Vec k4 = f(t + h, Vec(s + h * k3));
    return s + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

bool on_grid(double t, double interval) {
    if (interval <= 0.0) return true;
    return std::abs(std::remainder(t, interval)) < kTimeEps;
}

std::string describe(const ThrustSegment& s, int index) {
    std::ostringstream os;
    os << "segment " << index << " [" << s.t_start << ", " << s.t_end << "] " << to_string(s.direction);
    return os.str();
}

}  // namespace

Vec3 axis_unit_vector(ThrustAxis axis) {
    switch (axis) {
        case ThrustAxis::plus_r: return Vec3::UnitX();
        case ThrustAxis::minus_r: return -Vec3::UnitX();
        case ThrustAxis::plus_s: return Vec3::UnitY();
        case ThrustAxis::minus_s: return -Vec3::UnitY();
        case ThrustAxis::plus_w: return Vec3::UnitZ();
        case ThrustAxis::minus_w: return -Vec3::UnitZ();
    }
    return Vec3::Zero();
}

std::string_view to_string(ThrustAxis axis) {
    switch (axis) {
        case ThrustAxis::plus_r: return "+R";
        case ThrustAxis::minus_r: return "-R";
        case ThrustAxis::plus_s: return "+S";
        case ThrustAxis::minus_s: return "-S";
        case ThrustAxis::plus_w: return "+W";
        case ThrustAxis::minus_w: return "-W";
    }
    return "?";
}

std::optional<ThrustAxis> parse_thrust_axis(std::string_view text) {
    for (ThrustAxis a : {ThrustAxis::plus_r, ThrustAxis::minus_r, ThrustAxis::plus_s, ThrustAxis::minus_s,
                         ThrustAxis::plus_w, ThrustAxis::minus_w}) {
        if (to_string(a) == text) return a;
    }
    return std::nullopt;
}

ThrustAxis reversed(ThrustAxis axis) {
    switch (axis) {
        case ThrustAxis::plus_r: return ThrustAxis::minus_r;
        case ThrustAxis::minus_r: return ThrustAxis::plus_r;
        case ThrustAxis::plus_s: return ThrustAxis::minus_s;
        case ThrustAxis::minus_s: return ThrustAxis::plus_s;
        case ThrustAxis::plus_w: return ThrustAxis::minus_w;
        case ThrustAxis::minus_w: return ThrustAxis::plus_w;
    }
    return axis;
}

std::string_view to_string(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::firing_limit: return "firing limit";
        case ViolationKind::charging_gap: return "charging gap";
        case ViolationKind::overlap: return "overlap";
        case ViolationKind::non_positive_duration: return "non-positive duration";
        case ViolationKind::impulse_budget: return "impulse budget";
    }
    return "?";
}

Vec3 acceleration(const EciState& state, const ForceModelConfig& config, const ThrustSegment* active_thrust) {
    check_altitude(state.r, config);
    Vec3 a = gravity_acceleration(state.r, config) + perturbations(state.epoch, state.r, state.v, state.mass, config);
    if (active_thrust != nullptr) a += thrust_acceleration(state.r, state.v, state.mass, *active_thrust);
    return a;
}

ScheduleValidation validate_schedule(std::span<const ThrustSegment> schedule, const SpacecraftParams& params,
                                     double target_period, double previous_end, std::optional<double> impulse_budget) {
    ScheduleValidation out;
    auto add = [&](int index, ViolationKind kind, std::string msg) {
        out.violations.push_back({index, kind, std::move(msg)});
    };
    double impulse = 0.0;
    double last_end = previous_end;
    for (std::size_t k = 0; k < schedule.size(); ++k) {
        const ThrustSegment& s = schedule[k];
        const int idx = static_cast<int>(k);
        if (!(s.duration() > 0.0)) add(idx, ViolationKind::non_positive_duration, describe(s, idx) + " has no duration");
        if (s.duration() > params.max_firing_duration + kTimeEps) {
            add(idx, ViolationKind::firing_limit, describe(s, idx) + " exceeds the continuous firing limit");
        }
        if (s.t_start < last_end - kTimeEps) {
            add(idx, ViolationKind::overlap, describe(s, idx) + " overlaps the previous firing");
        } else if (s.t_start - last_end < target_period - kTimeEps) {
            add(idx, ViolationKind::charging_gap, describe(s, idx) + " starts before a full charging orbit elapsed");
        }
        last_end = std::max(last_end, s.t_end);
        impulse += s.impulse();
        if (impulse > impulse_budget.value_or(params.total_impulse) + 1e-9) {
            add(idx, ViolationKind::impulse_budget, describe(s, idx) + " exceeds the total impulse budget");
        }
    }
    return out;
}

PropagationResult propagate(const EciState& target, const EciState& chaser, std::span<const ThrustSegment> schedule,
                            const ForceModelConfig& config, const SpacecraftParams& params, double t_end,
                            const PropagationOptions& options) {
    if (std::abs(target.epoch - chaser.epoch) > kTimeEps) throw DomainError("target and chaser epochs differ");
    if (!(options.step > 0.0)) throw DomainError("integration step must be positive");
    const double t0 = target.epoch;
    if (t_end < t0 - kTimeEps) throw DomainError("propagation end precedes the initial epoch");

    double impulse = 0.0;
    for (std::size_t k = 0; k < schedule.size(); ++k) {
        const ThrustSegment& s = schedule[k];
        const int idx = static_cast<int>(k);
        if (!(s.duration() > 0.0)) throw ScheduleError(describe(s, idx) + " has no duration", idx);
        if (s.duration() > params.max_firing_duration + kTimeEps) {
            throw ScheduleError(describe(s, idx) + " exceeds the continuous firing limit", idx);
        }
        if (k > 0 && s.t_start < schedule[k - 1].t_end - kTimeEps) {
            throw ScheduleError(describe(s, idx) + " overlaps the previous segment", idx);
        }
        if (s.t_start < t0 - kTimeEps || s.t_end > t_end + kTimeEps) {
            throw ScheduleError(describe(s, idx) + " lies outside the propagation span", idx);
        }
        impulse += s.impulse();
        if (impulse > options.impulse_budget.value_or(params.total_impulse) + 1e-9) {
            throw ScheduleError(describe(s, idx) + " exceeds the total impulse budget", idx);
        }
    }

    PropagationResult result;
    TargetVec ts;
    ts << target.r, target.v;
    ChaserVec cs;
    cs << chaser.r, chaser.v, chaser.mass, 0.0;
    const double target_mass = target.mass;

    auto record = [&](double t) {
        result.time.push_back(t);
        result.target.push_back({t, ts.head<3>(), ts.tail<3>(), target_mass});
        result.chaser.push_back({t, cs.segment<3>(0), cs.segment<3>(3), cs(6)});
    };
    if (options.record_initial) record(t0);

    std::vector<double> breaks;
    for (const auto& s : schedule) {
        breaks.push_back(s.t_start);
        breaks.push_back(s.t_end);
    }
    std::sort(breaks.begin(), breaks.end());

    std::size_t seg_index = 0;
    double seg_dv_start = 0.0;
    double seg_mass_start = chaser.mass;
    bool firing = false;
    double t = t0;
    while (t < t_end - kTimeEps) {
        // Segment bookkeeping at the current time.
        while (seg_index < schedule.size() && schedule[seg_index].t_end <= t + kTimeEps) {
            if (firing) {
                const ThrustSegment& s = schedule[seg_index];
                result.events.push_back({s.t_end, static_cast<int>(seg_index), false});
                result.segments.push_back({static_cast<int>(seg_index), cs(7) - seg_dv_start, s.impulse(), seg_mass_start, cs(6)});
                firing = false;
            }
            ++seg_index;
        }
        const ThrustSegment* active = nullptr;
        if (seg_index < schedule.size() && schedule[seg_index].t_start <= t + kTimeEps) {
            active = &schedule[seg_index];
            if (!firing) {
                firing = true;
                seg_dv_start = cs(7);
                seg_mass_start = cs(6);
                result.events.push_back({active->t_start, static_cast<int>(seg_index), true});
            }
        }

        double t_next = (std::floor(t / options.step + kTimeEps) + 1.0) * options.step;
        t_next = std::min(t_next, t_end);
        auto upcoming = std::upper_bound(breaks.begin(), breaks.end(), t + kTimeEps);
        if (upcoming != breaks.end()) t_next = std::min(t_next, *upcoming);
        const double h = t_next - t;

        ts = rk4_step(t, ts, h, [&](double tt, const TargetVec& s) {
            return target_derivative(tt, s, target_mass, config);
        });
        cs = rk4_step(t, cs, h, [&](double tt, const ChaserVec& s) {
            return chaser_derivative(tt, s, config, params, active);
        });
        t = t_next;
        check_altitude(ts.head<3>(), config);
        check_altitude(cs.segment<3>(0), config);
        if (on_grid(t, options.sample_interval)) record(t);
    }
    // Close a segment that ends exactly at t_end.
    while (seg_index < schedule.size() && schedule[seg_index].t_end <= t + kTimeEps) {
        if (firing) {
            const ThrustSegment& s = schedule[seg_index];
            result.events.push_back({s.t_end, static_cast<int>(seg_index), false});
            result.segments.push_back({static_cast<int>(seg_index), cs(7) - seg_dv_start, s.impulse(), seg_mass_start, cs(6)});
            firing = false;
        }
        ++seg_index;
    }

    result.final_target = {t_end, ts.head<3>(), ts.tail<3>(), target_mass};
    result.final_chaser = {t_end, cs.segment<3>(0), cs.segment<3>(3), cs(6)};
    result.delta_v_used = cs(7);
    for (const auto& rec : result.segments) result.impulse_used += rec.impulse;
    return result;
}

}  // namespace rpo
