#include "rpo/maneuver_blocks.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <array>

namespace rpo {

namespace {

constexpr double kGapMargin = 1.0;  // [s]
constexpr double kMinFiring = 1.0;  // [s]

double sinc(double x) { return std::abs(x) < 1e-8 ? 1.0 : std::sin(x) / x; }

double sign_of(double x) { return x < 0.0 ? -1.0 : 1.0; }

// Mean elements flown forward with secular rates; angles kept unwrapped.
struct Track {
    double t = 0.0;
    double a = 0.0;
    double e = 0.0;
    double i = 0.0;
    double raan = 0.0;
    double argp = 0.0;
    double ma = 0.0;
    double mass = 0.0;

    [[nodiscard]] OrbitalElements elements() const {
        OrbitalElements oe;
        oe.a = a;
        oe.e = e;
        oe.i = i;
        oe.raan = wrap_two_pi(raan);
        oe.argp = wrap_two_pi(argp);
        oe.ta = mean_to_true(wrap_two_pi(ma), e);
        oe.flavor = ElementFlavor::mean;
        return oe;
    }
    [[nodiscard]] double mean_arglat() const { return argp + ma; }
};

Track make_track(const OrbitalElements& oe, double epoch, double mass) {
    return {epoch, oe.a, oe.e, oe.i, oe.raan, oe.argp, oe.mean_anomaly(), mass};
}

void advance(Track& tr, double t, const GravityConstants& g) {
    const double dt = t - tr.t;
    if (dt == 0.0) return;
    const SecularRates r = secular_rates(tr.elements(), g);
    tr.raan += r.raan_dot * dt;
    tr.argp += r.argp_dot * dt;
    tr.ma += r.mean_anomaly_dot * dt;
    tr.t = t;
}

void apply_segment(Track& tr, const ThrustSegment& seg, const SpacecraftParams& params, const GravityConstants& g) {
    const double dur = seg.duration();
    advance(tr, seg.t_start + 0.5 * dur, g);
    const double n = std::sqrt(g.mu / (tr.a * tr.a * tr.a));
    const double v = n * tr.a;
    const double dv = seg.thrust / tr.mass * dur * 1.0e-3;
    const double k = sinc(0.5 * n * dur);
    const double u = tr.argp + mean_to_true(wrap_two_pi(tr.ma), tr.e);
    const Vec3 dir = axis_unit_vector(seg.direction);

    const double lambda = tr.mean_arglat();
    double ex = tr.e * std::cos(tr.argp);
    double ey = tr.e * std::sin(tr.argp);
    double dlambda = 0.0;
    double dargp_w = 0.0;

    if (dir.y() != 0.0) {
        const double s = dir.y();
        tr.a += 2.0 * s * dv / n;
        ex += 2.0 * s * dv * k * std::cos(u) / v;
        ey += 2.0 * s * dv * k * std::sin(u) / v;
    }
    if (dir.x() != 0.0) {
        const double s = dir.x();
        ex += s * dv * k * std::sin(u) / v;
        ey -= s * dv * k * std::cos(u) / v;
        dlambda -= 2.0 * s * dv / v;
    }
    if (dir.z() != 0.0) {
        const double s = dir.z();
        tr.i += s * dv * k * std::cos(u) / v;
        const double sin_i = std::sin(tr.i);
        if (std::abs(sin_i) > 1e-9) {
            const double draan = s * dv * k * std::sin(u) / (v * sin_i);
            tr.raan += draan;
            dargp_w = -std::cos(tr.i) * draan;
        }
    }

    const double e_new = std::hypot(ex, ey);
    double argp_new = tr.argp;
    if (e_new > 1e-12) {
        argp_new = std::atan2(ey, ex);
        argp_new = tr.argp + wrap_pi(argp_new - tr.argp);
    }
    tr.e = e_new;
    tr.argp = argp_new + dargp_w;
    tr.ma = lambda + dlambda - argp_new;
    tr.mass -= params.mass_flow() * dur;
}

std::vector<ThrustSegment> sorted(std::span<const ThrustSegment> schedule) {
    std::vector<ThrustSegment> out(schedule.begin(), schedule.end());
    std::sort(out.begin(), out.end(), [](const auto& l, const auto& r) { return l.t_start < r.t_start; });
    return out;
}

Track evolve(Track tr, std::span<const ThrustSegment> schedule, double t_final, const SpacecraftParams& params,
             const GravityConstants& g) {
    for (const ThrustSegment& seg : sorted(schedule)) {
        if (seg.t_start + 0.5 * seg.duration() > t_final) break;
        apply_segment(tr, seg, params, g);
    }
    advance(tr, t_final, g);
    return tr;
}

RelativeElements difference(const Track& c, const Track& t) {
    return {c.a - t.a, c.e - t.e, c.i - t.i, c.raan - t.raan, c.mean_arglat() - t.mean_arglat()};
}

// Chaser track whose unwrapped angles sit next to the target's.
Track aligned_chaser(const PlanningState& state) {
    Track target = make_track(state.target, state.epoch, 0.0);
    Track chaser = make_track(state.chaser, state.epoch, state.chaser_mass);
    chaser.raan = target.raan + wrap_pi(chaser.raan - target.raan);
    const double dl = wrap_pi(chaser.mean_arglat() - target.mean_arglat());
    const double ma = target.mean_arglat() + dl - chaser.argp;
    chaser.ma = ma;
    return chaser;
}

double end_of(std::span<const ThrustSegment> schedule, double fallback) {
    double end = fallback;
    for (const auto& s : schedule) end = std::max(end, s.t_end);
    return end;
}

// Where in the orbit a firing is centered.
struct Location {
    enum Kind { true_anomaly, true_arglat } kind = true_anomaly;
    double angle = 0.0;
    ThrustAxis axis = ThrustAxis::plus_s;
};

double time_to_location(const Track& tr, const Location& loc, const GravityConstants& g) {
    const double target_ta = loc.kind == Location::true_anomaly ? loc.angle : loc.angle - tr.argp;
    const double target_ma = true_to_mean(wrap_two_pi(target_ta), tr.e);
    const double rate = secular_rates(tr.elements(), g).mean_anomaly_dot;
    return wrap_two_pi(target_ma - tr.ma) / rate;
}

// Appends firings one at a time while honoring the charging interval.
class Builder {
public:
    Builder(const PlanningState& state, const SpacecraftParams& params, bool balance_eccentricity = false)
        : state_(state),
          params_(params),
          track_(aligned_chaser(state)),
          reference_(track_),
          gap_(state.charging_period() + kGapMargin),
          balance_(balance_eccentricity) {}

    // Earliest admissible location among the candidates; returns its index.
    int add(std::span<const Location> candidates, double duration, double not_before = -1e300) {
        double t_min = std::max(state_.earliest_start, segments_.empty() ? -1e300 : last_end_ + gap_);
        t_min = std::max(t_min, not_before);
        const double center_min = t_min + 0.5 * duration;
        Track probe = track_;
        advance(probe, std::max(center_min, probe.t), state_.gravity);
        std::vector<double> times;
        for (std::size_t k = 0; k < candidates.size(); ++k) {
            double t = probe.t + time_to_location(probe, candidates[k], state_.gravity);
            // refine for the apsidal drift accumulated on the way
            Track refined = probe;
            advance(refined, t, state_.gravity);
            const double rate = secular_rates(refined.elements(), state_.gravity).mean_anomaly_dot;
            t += wrap_pi(time_to_location(refined, candidates[k], state_.gravity) * rate) / rate;
            if (t < center_min) t += kTwoPi / rate;
            times.push_back(t);
        }
        int best = static_cast<int>(std::min_element(times.begin(), times.end()) - times.begin());
        if (balance_) {
            // Prefer the location that undoes the eccentricity kicks flown so far.
            std::vector<double> drift;
            for (std::size_t k = 0; k < candidates.size(); ++k) {
                drift.push_back(eccentricity_drift(trial(candidates[k], times[k], duration)));
            }
            const double kick = std::abs(drift[best] - eccentricity_drift(track_));
            const int balanced = static_cast<int>(std::min_element(drift.begin(), drift.end()) - drift.begin());
            if (drift[best] - drift[balanced] > 0.5 * kick) best = balanced;
        }
        ThrustSegment seg = segment(candidates[best], times[best], duration);
        apply_segment(track_, seg, params_, state_.gravity);
        segments_.push_back(seg);
        last_end_ = seg.t_end;
        return best;
    }

    [[nodiscard]] const Track& track() const { return track_; }
    [[nodiscard]] const std::vector<ThrustSegment>& segments() const { return segments_; }
    [[nodiscard]] double last_end() const { return segments_.empty() ? state_.earliest_start : last_end_; }

    // Semi-major axis change of one firing of `duration` at the current mass.
    [[nodiscard]] double da_per_firing(double duration) const {
        const double n = std::sqrt(state_.gravity.mu / std::pow(track_.a, 3));
        return 2.0 * params_.thrust / track_.mass * duration * 1.0e-3 / n;
    }

private:
    [[nodiscard]] ThrustSegment segment(const Location& loc, double center, double duration) const {
        return {center - 0.5 * duration, center + 0.5 * duration, loc.axis, params_.thrust};
    }
    [[nodiscard]] Track trial(const Location& loc, double center, double duration) const {
        Track t = track_;
        apply_segment(t, segment(loc, center, duration), params_, state_.gravity);
        return t;
    }
    // Eccentricity-vector offset from the same spacecraft coasting unfired.
    [[nodiscard]] double eccentricity_drift(const Track& t) const {
        Track ref = reference_;
        advance(ref, t.t, state_.gravity);
        return std::hypot(t.e * std::cos(t.argp) - ref.e * std::cos(ref.argp),
                          t.e * std::sin(t.argp) - ref.e * std::sin(ref.argp));
    }

    const PlanningState& state_;
    const SpacecraftParams& params_;
    Track track_;
    Track reference_;
    double gap_;
    bool balance_;
    double last_end_ = 0.0;
    std::vector<ThrustSegment> segments_;
};

FiringSchedule finish(BlockLabel label, const PlanningState& state, const SpacecraftParams& params,
                      std::vector<ThrustSegment> segments) {
    FiringSchedule out;
    out.label = label;
    out.planned_at = state.epoch;
    out.segments = std::move(segments);
    out.end_time = end_of(out.segments, state.epoch);
    out.predicted_effect =
        predict_effect(out.segments, state.chaser, state.epoch, state.chaser_mass, params, state.gravity);
    out.predicted_final = predict_relative(state, out.segments, params, out.end_time);
    return out;
}

ThrustAxis along(double s) { return s > 0.0 ? ThrustAxis::plus_s : ThrustAxis::minus_s; }

std::array<Location, 2> apsides(double s) {
    return {Location{Location::true_anomaly, 0.0, along(s)}, Location{Location::true_anomaly, kPi, along(s)}};
}

using Objective = std::function<double(const RelativeElements&)>;

// First series of `count` firings (the first possibly shortened), a coast,
// then a reverse series returning the semi-major axis to the target's.
std::vector<ThrustSegment> altitude_sequence(const PlanningState& state, const SpacecraftParams& params, int count,
                                             double first_duration, double hold_sign, double coast) {
    Builder b(state, params, true);
    const double full = params.max_firing_duration;
    for (int k = 0; k < count; ++k) {
        const auto locs = apsides(hold_sign);
        b.add(locs, k == 0 ? first_duration : full);
    }
    const double coast_start = count > 0 ? b.last_end() : state.earliest_start;
    const double a_target = state.target.a;
    bool first_restore = true;
    for (int guard = 0; guard < 64; ++guard) {
        const double da = b.track().a - a_target;
        const double duration = std::min(full, std::abs(da) / b.da_per_firing(1.0));
        if (duration < kMinFiring) break;
        const auto locs = apsides(-sign_of(da));
        b.add(locs, duration, first_restore ? coast_start + coast : -1e300);
        first_restore = false;
    }
    return b.segments();
}

struct Candidate {
    std::vector<ThrustSegment> segments;
    double coast = 0.0;
    bool overshoot = false;
};

Candidate solve_coast(const PlanningState& state, const SpacecraftParams& params, const Objective& f, int count,
                      double first_duration, double hold_sign, double hold_rate) {
    Candidate c;
    double coast = 0.0;
    for (int iter = 0; iter < 12; ++iter) {
        c.segments = altitude_sequence(state, params, count, first_duration, hold_sign, coast);
        const double t_end = end_of(c.segments, state.epoch);
        const double residual = f(predict_relative(state, c.segments, params, t_end));
        const double step = -residual / hold_rate;
        if (coast == 0.0 && step < 0.0) {
            c.overshoot = true;
            c.coast = step;
            return c;
        }
        coast = std::max(0.0, coast + step);
        if (std::abs(step) < 1.0) break;
    }
    c.coast = coast;
    c.overshoot = false;
    return c;
}

FiringSchedule plan_altitude_block(BlockLabel label, const PlanningState& state, const SpacecraftParams& params,
                                   const AltitudeBlockOptions& options, const Deadbands& deadbands, const Objective& f,
                                   double f_deadband) {
    const RelativeElements rel0 = state.relative();
    const double f0 = f(rel0);
    const bool f_ok = std::abs(f0) < f_deadband;
    const bool a_ok = std::abs(rel0.da) < deadbands.da;
    if (f_ok && a_ok) return finish(label, state, params, {});

    if (f_ok) {
        auto segs = altitude_sequence(state, params, 0, 0.0, 1.0, 0.0);
        return finish(label, state, params, std::move(segs));
    }

    // Sensitivity of the objective rate to a held semi-major axis offset.
    auto rate_at = [&](double da) {
        PlanningState probe = state;
        probe.chaser = state.target;
        probe.chaser.a += da;
        const double span = kSecondsPerDay;
        const double base = f(relative_elements(state.target, state.target));
        return (f(predict_relative(probe, {}, params, state.epoch + span)) - base) / span;
    };
    const double sens = (rate_at(1.0) - rate_at(-1.0)) / 2.0;  // per km per second
    if (sens == 0.0) throw DomainError("objective is insensitive to semi-major axis");
    const double hold_sign = -sign_of(f0) * sign_of(sens);

    Builder probe(state, params);
    const double per_firing = probe.da_per_firing(params.max_firing_duration);

    const int n_min = (sign_of(rel0.da) == hold_sign && std::abs(rel0.da) > deadbands.da) ? 0 : 1;
    std::optional<Candidate> fallback;
    for (int count = n_min; count <= options.max_firings; ++count) {
        const double hold = rel0.da + hold_sign * count * per_firing;
        if (sign_of(hold) != hold_sign || std::abs(hold) < 1e-6) continue;
        Candidate c = solve_coast(state, params, f, count, params.max_firing_duration, hold_sign, sens * hold);
        if (c.overshoot) {
            if (count > 1 || fallback) break;
            // Shorten a single firing so the ramps alone close the objective.
            double lo = kMinFiring, hi = params.max_firing_duration;
            for (int iter = 0; iter < 40; ++iter) {
                const double mid = 0.5 * (lo + hi);
                auto segs = altitude_sequence(state, params, 1, mid, hold_sign, 0.0);
                const double r = f(predict_relative(state, segs, params, end_of(segs, state.epoch)));
                if (sign_of(r) == sign_of(f0)) lo = mid;
                else hi = mid;
            }
            c.segments = altitude_sequence(state, params, 1, 0.5 * (lo + hi), hold_sign, 0.0);
            c.coast = 0.0;
            return finish(label, state, params, std::move(c.segments));
        }
        if (c.coast <= options.preferred_coast) return finish(label, state, params, std::move(c.segments));
        fallback = std::move(c);
    }
    if (fallback && fallback->coast <= options.max_coast) return finish(label, state, params, std::move(fallback->segments));
    throw DomainError("correction needs a coast longer than the allowed maximum; allow more firings for a larger altitude offset");
}

double ecc_gain_per_second(const Track& tr, double thrust, double duration, const GravityConstants& g) {
    const double n = std::sqrt(g.mu / std::pow(tr.a, 3));
    const double v = n * tr.a;
    return 2.0 * thrust / tr.mass * 1.0e-3 * sinc(0.5 * n * duration) / v;
}

void add_ecc_pair(Builder& b, const EccOpParams& op) {
    using L = Location;
    if (op.include_op1 && op.t_e1 >= kMinFiring) {
        const double s = op.op1_sign;
        const std::array<L, 1> main{L{L::true_anomaly, 0.0, along(s)}};
        b.add(main, op.t_e1);
        const std::array<L, 2> quad{L{L::true_anomaly, 0.5 * kPi, along(-s)}, L{L::true_anomaly, 1.5 * kPi, along(-s)}};
        const int first = b.add(quad, 0.5 * op.t_e1);
        const std::array<L, 1> other{quad[1 - first]};
        b.add(other, 0.5 * op.t_e1);
    }
    if (op.include_op2 && op.t_e2 >= kMinFiring) {
        const double s = op.op2_sign;
        const std::array<L, 1> main{L{L::true_anomaly, kPi, along(-s)}};
        b.add(main, op.t_e2);
        const std::array<L, 2> quad{L{L::true_anomaly, 0.5 * kPi, along(s)}, L{L::true_anomaly, 1.5 * kPi, along(s)}};
        const int first = b.add(quad, 0.5 * op.t_e2);
        const std::array<L, 1> other{quad[1 - first]};
        b.add(other, 0.5 * op.t_e2);
    }
}

// Solves gain(t) * t = target for t in (0, limit].
double duration_for_gain(const Track& tr, double thrust, double target, double limit, const GravityConstants& g) {
    double t = std::min(limit, target / ecc_gain_per_second(tr, thrust, limit, g));
    for (int iter = 0; iter < 8; ++iter) t = std::min(limit, target / ecc_gain_per_second(tr, thrust, t, g));
    return t;
}

}  // namespace

std::string_view to_string(BlockLabel label) {
    switch (label) {
        case BlockLabel::raan_cor: return "raan_cor";
        case BlockLabel::u_cor: return "u_cor";
        case BlockLabel::i_cor: return "i_cor";
        case BlockLabel::e_cor: return "e_cor";
    }
    return "?";
}

double along_track_center(const RelativeElements& delta, const OrbitalElements& target) {
    return target.a * (delta.du + delta.draan * std::cos(target.i));
}

RelativeElements predict_effect(std::span<const ThrustSegment> schedule, const OrbitalElements& chaser, double epoch,
                                double chaser_mass, const SpacecraftParams& params, const GravityConstants& g) {
    const double t_end = end_of(schedule, epoch);
    const Track start = make_track(chaser, epoch, chaser_mass);
    return difference(evolve(start, schedule, t_end, params, g), evolve(start, {}, t_end, params, g));
}

RelativeElements predict_relative(const PlanningState& state, std::span<const ThrustSegment> schedule,
                                  const SpacecraftParams& params, double t_final) {
    Track target = make_track(state.target, state.epoch, 0.0);
    const Track chaser = evolve(aligned_chaser(state), schedule, t_final, params, state.gravity);
    advance(target, t_final, state.gravity);
    return difference(chaser, target);
}

FiringSchedule plan_raan_correction(const PlanningState& state, const SpacecraftParams& params,
                                    const AltitudeBlockOptions& options, const Deadbands& deadbands,
                                    double desired_draan) {
    const Objective f = [desired_draan](const RelativeElements& r) { return r.draan - desired_draan; };
    return plan_altitude_block(BlockLabel::raan_cor, state, params, options, deadbands, f, deadbands.draan);
}

FiringSchedule plan_arglat_correction(const PlanningState& state, const SpacecraftParams& params,
                                      const AltitudeBlockOptions& options, double desired_center_y,
                                      const Deadbands& deadbands) {
    const OrbitalElements target = state.target;
    const Objective f = [target, desired_center_y](const RelativeElements& r) {
        return along_track_center(r, target) - desired_center_y;
    };
    return plan_altitude_block(BlockLabel::u_cor, state, params, options, deadbands, f, deadbands.du * target.a);
}

FiringSchedule plan_inclination_correction(const PlanningState& state, const SpacecraftParams& params,
                                           double di_correction, const Deadbands& deadbands) {
    if (std::abs(di_correction) < deadbands.di) return finish(BlockLabel::i_cor, state, params, {});
    Builder b(state, params);
    const double s = sign_of(di_correction);
    const ThrustAxis up = s > 0.0 ? ThrustAxis::plus_w : ThrustAxis::minus_w;
    const std::array<Location, 2> nodes{Location{Location::true_arglat, 0.0, up},
                                        Location{Location::true_arglat, kPi, reversed(up)}};
    double remaining = std::abs(di_correction);
    for (int guard = 0; guard < 256 && remaining > 0.0; ++guard) {
        // cross-track gain is half the along-track eccentricity gain
        const double duration =
            duration_for_gain(b.track(), params.thrust, 2.0 * remaining, params.max_firing_duration, state.gravity);
        if (duration < kMinFiring) break;
        const double before = b.track().i;
        b.add(nodes, duration);
        remaining -= std::abs(b.track().i - before);
    }
    return finish(BlockLabel::i_cor, state, params, b.segments());
}

FiringSchedule plan_eccentricity_ops(const PlanningState& state, const SpacecraftParams& params,
                                     std::span<const EccOpParams> pairs) {
    Builder b(state, params);
    for (const EccOpParams& op : pairs) {
        if (op.t_e1 > params.max_firing_duration || op.t_e2 > params.max_firing_duration) {
            throw DomainError("eccentricity operation exceeds the firing limit");
        }
        add_ecc_pair(b, op);
    }
    return finish(BlockLabel::e_cor, state, params, b.segments());
}

FiringSchedule plan_eccentricity_correction(const PlanningState& state, const SpacecraftParams& params,
                                            double de_correction, AlongTrackBias bias, const Deadbands& deadbands,
                                            int max_operations) {
    if (std::abs(de_correction) < deadbands.de) return finish(BlockLabel::e_cor, state, params, {});
    const double s = sign_of(de_correction);
    // op1 shifts the center opposite to the eccentricity sign, op2 along it
    const bool use_op1 = bias == AlongTrackBias::none || (bias == AlongTrackBias::positive) == (s < 0.0);
    const bool use_op2 = bias == AlongTrackBias::none || (bias == AlongTrackBias::positive) == (s > 0.0);

    const Track tr = aligned_chaser(state);
    std::vector<EccOpParams> pairs;
    double remaining = std::abs(de_correction);
    bool next_is_op1 = use_op1;
    for (int k = 0; k < max_operations && remaining > 1e-9; ++k) {
        const double t = duration_for_gain(tr, params.thrust, remaining, params.max_firing_duration, state.gravity);
        if (t < kMinFiring) break;
        if (next_is_op1) {
            pairs.push_back({t, 0.0, true, false, s, s});
        } else if (!pairs.empty() && pairs.back().include_op1 && !pairs.back().include_op2) {
            pairs.back().t_e2 = t;
            pairs.back().include_op2 = true;
        } else {
            pairs.push_back({0.0, t, false, true, s, s});
        }
        remaining -= ecc_gain_per_second(tr, params.thrust, t, state.gravity) * t;
        if (use_op1 && use_op2) next_is_op1 = !next_is_op1;
    }
    if (pairs.empty()) return finish(BlockLabel::e_cor, state, params, {});

    // trim the last operation against the prediction model; scalar de is not
    // additive when the reference eccentricity is small
    EccOpParams& last = pairs.back();
    double& t_last = last.include_op2 ? last.t_e2 : last.t_e1;
    FiringSchedule plan = plan_eccentricity_ops(state, params, pairs);
    for (int iter = 0; iter < 4; ++iter) {
        const double achieved =
            plan.predicted_final.de - predict_relative(state, {}, params, plan.end_time).de;
        const double error = de_correction - achieved;
        if (std::abs(error) < 1e-3 * std::abs(de_correction)) break;
        const double rate = ecc_gain_per_second(tr, params.thrust, t_last, state.gravity);
        const double t = std::clamp(t_last + s * error / rate, kMinFiring, params.max_firing_duration);
        if (t == t_last) break;
        t_last = t;
        plan = plan_eccentricity_ops(state, params, pairs);
    }
    return plan;
}

EccOpParams size_eccentricity_pair(const PlanningState& state, const SpacecraftParams& params, double de_correction,
                                   double dy_correction, double min_firing) {
    const double limit = params.max_firing_duration;
    auto shift_of = [&](const EccOpParams& op) {
        const FiringSchedule plan = plan_eccentricity_ops(state, params, std::span<const EccOpParams>(&op, 1));
        const RelativeElements coast = predict_relative(state, {}, params, plan.end_time);
        return along_track_center(plan.predicted_final, state.target) - along_track_center(coast, state.target);
    };
    const double c1 = shift_of({limit, limit, true, false, 1.0, 1.0}) / limit;
    const double c2 = shift_of({limit, limit, false, true, 1.0, 1.0}) / limit;
    const Track tr = aligned_chaser(state);

    double scale_t = limit;
    double p = 0.0, q = 0.0;
    for (int iter = 0; iter < 4; ++iter) {
        const double k = ecc_gain_per_second(tr, params.thrust, scale_t, state.gravity);
        Eigen::Matrix2d m;
        m << k, k, c1, c2;
        const Eigen::Vector2d sol = m.fullPivLu().solve(Eigen::Vector2d(de_correction, dy_correction));
        p = sol(0);
        q = sol(1);
        const double biggest = std::max(std::abs(p), std::abs(q));
        if (biggest > limit) {
            p *= limit / biggest;
            q *= limit / biggest;
        }
        scale_t = std::max(std::max(std::abs(p), std::abs(q)), kMinFiring);
    }
    EccOpParams op;
    op.t_e1 = std::abs(p);
    op.t_e2 = std::abs(q);
    op.op1_sign = sign_of(p);
    op.op2_sign = sign_of(q);
    op.include_op1 = op.t_e1 >= min_firing;
    op.include_op2 = op.t_e2 >= min_firing;
    return op;
}

}  // namespace rpo
