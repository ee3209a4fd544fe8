#include "rpo/mission_controller.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rpo {

namespace {

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double phase_limit(Phase phase, const PhaseLimits& limits) {
    switch (phase) {
        case Phase::raan: return limits.raan;
        case Phase::approach: return limits.approach;
        case Phase::ellipse_setup: return limits.ellipse_setup;
        default: return std::numeric_limits<double>::infinity();
    }
}

void enter(MissionState& m, Phase phase, const NavUpdate& nav) {
    m.phase = phase;
    m.phase_start = nav.epoch;
    m.stage = SetupStage::inclination;
    m.events.push_back({nav.epoch, nav.epoch, phase, "enter " + std::string(to_string(phase))});
}

PlanningState planning_state(const MissionState& m, const NavUpdate& nav, const MissionConfig& config) {
    PlanningState s;
    s.epoch = nav.epoch;
    s.target = nav.target;
    s.chaser = nav.chaser;
    s.chaser_mass = m.chaser_mass;
    s.gravity = config.forces.gravity;
    s.earliest_start = std::max(nav.epoch, m.last_firing_end + s.charging_period() + 1.0);
    return s;
}

}  // namespace

NavClock::NavClock(const NavModel& model) : model_(model), rng_(model.seed) {
    if (!(model.period > 0.0)) throw DomainError("navigation period must be positive");
    if (model.jitter < 0.0 || model.jitter >= model.period) throw DomainError("navigation jitter must be in [0, period)");
}

double NavClock::next(double t) {
    double dt = model_.period;
    if (model_.jitter > 0.0) dt += model_.jitter * (2.0 * uniform01(rng_) - 1.0);
    return t + dt;
}

NavUpdate navigation(const EciState& target, const EciState& chaser, double next_due, const GravityConstants& g) {
    if (target.epoch != chaser.epoch) throw DomainError("navigation states must share an epoch");
    NavUpdate nav;
    nav.epoch = target.epoch;
    nav.target = osc_to_mean(cart_to_elements(target, g), g);
    nav.chaser = osc_to_mean(cart_to_elements(chaser, g), g);
    nav.next_due = next_due;
    return nav;
}

std::string_view to_string(Phase phase) {
    switch (phase) {
        case Phase::commissioning: return "commissioning";
        case Phase::raan: return "raan";
        case Phase::approach: return "approach";
        case Phase::ellipse_setup: return "ellipse_setup";
        case Phase::circumnavigation: return "circumnavigation";
        case Phase::done: return "done";
    }
    return "?";
}

PhaseStep step_phase(const MissionState& mission, const NavUpdate& nav, const MissionConfig& config) {
    if (mission.phase == Phase::done) throw DomainError("mission already done");
    PhaseStep out{mission, std::nullopt};
    MissionState& m = out.next;
    m.estimate = nav.relative();
    const RelativeElements& rel = m.estimate;
    const Deadbands& db = config.deadbands;
    const double y_c = along_track_center(rel, nav.target);

    if (m.phase != Phase::commissioning && m.phase != Phase::circumnavigation &&
        nav.epoch - m.phase_start > phase_limit(m.phase, config.limits)) {
        throw MissionAbort(std::string(to_string(m.phase)) + " phase exceeded its maximum duration");
    }

    auto schedule = [&](FiringSchedule fs) {
        std::ostringstream os;
        os << to_string(fs.label) << " block, " << fs.segments.size() << " firings";
        m.events.push_back({nav.epoch, nav.epoch, m.phase, os.str()});
        out.schedule = std::move(fs);
        return out;
    };

    if (m.phase == Phase::commissioning) {
        if (nav.epoch < config.commissioning) return out;
        enter(m, Phase::raan, nav);
    }
    if (m.phase == Phase::raan) {
        const double err = rel.draan - config.desired.draan;
        if (std::abs(err) >= db.draan || std::abs(rel.da) >= db.da) {
            PlanningState ps = planning_state(m, nav, config);
            FiringSchedule fs = plan_raan_correction(ps, config.spacecraft, config.raan_options, db, config.desired.draan);
            if (!fs.empty()) return schedule(std::move(fs));
        }
        enter(m, Phase::approach, nav);
    }
    if (m.phase == Phase::approach) {
        if (std::abs(y_c) >= config.approach_threshold || std::abs(rel.da) >= db.da) {
            PlanningState ps = planning_state(m, nav, config);
            const double goal = (y_c < 0.0 ? -1.0 : 1.0) * config.reserved_offset;
            FiringSchedule fs = plan_arglat_correction(ps, config.spacecraft, config.approach_options, goal, db);
            if (!fs.empty()) return schedule(std::move(fs));
        }
        enter(m, Phase::ellipse_setup, nav);
    }
    if (m.phase == Phase::ellipse_setup) {
        PlanningState ps = planning_state(m, nav, config);
        if (m.stage == SetupStage::inclination) {
            // desired separations are minimums: settle in the upper half-band
            const double di = config.desired.di + 0.5 * db.di - rel.di;
            if (std::abs(di) >= 0.5 * db.di) {
                Deadbands half = db;
                half.di *= 0.5;
                FiringSchedule fs = plan_inclination_correction(ps, config.spacecraft, di, half);
                if (!fs.empty()) return schedule(std::move(fs));
            }
            m.stage = SetupStage::eccentricity;
            m.events.push_back({nav.epoch, nav.epoch, m.phase, "inclination converged"});
        }
        const double de = config.desired.de + 0.5 * db.de - rel.de;
        if (std::abs(de) >= 0.5 * db.de || std::abs(y_c) >= config.center_tolerance) {
            const EccOpParams op = size_eccentricity_pair(ps, config.spacecraft, de, -y_c);
            FiringSchedule fs = plan_eccentricity_ops(ps, config.spacecraft, std::span<const EccOpParams>(&op, 1));
            if (!fs.empty()) return schedule(std::move(fs));
        }
        enter(m, Phase::circumnavigation, nav);
    }
    return out;
}

MissionReport run_mission(const MissionConfig& config) {
    const GravityConstants& g = config.forces.gravity;
    const SpacecraftParams& sc = config.spacecraft;
    MissionReport report;
    report.initial_mass = sc.wet_mass;

    EciState target = elements_to_cart(config.target, g, 0.0, sc.wet_mass);
    EciState chaser = target;
    if (config.separation_offset) {
        const RelativeElements& d = *config.separation_offset;
        OrbitalElements mean = osc_to_mean(config.target, g);
        mean.a += d.da;
        mean.e += d.de;
        mean.i += d.di;
        mean.raan = wrap_two_pi(mean.raan + d.draan);
        mean.ta = mean_to_true(wrap_two_pi(mean.mean_anomaly() + d.du), mean.e);
        chaser = elements_to_cart(mean_to_osc(mean, g), g, 0.0, sc.wet_mass);
    } else {
        chaser.v += rsw_to_eci(target, config.separation_dv * 1.0e-3);
    }

    MissionState mission;
    mission.chaser_mass = sc.wet_mass;
    mission.events.push_back({0.0, 0.0, Phase::commissioning, "separation"});

    NavClock clock(config.nav);
    std::vector<ThrustSegment> pending;
    Phase block_phase = Phase::raan;
    double block_end = -std::numeric_limits<double>::infinity();
    double t = 0.0;
    double circ_end = std::numeric_limits<double>::infinity();
    Phase current = Phase::commissioning;
    std::vector<PhaseRecord> phases{{Phase::commissioning, 0.0, 0.0, {}}};

    PropagationOptions options;
    options.step = config.step;
    options.sample_interval = std::min(config.output_interval, config.geometry_interval);

    auto on_output_grid = [&](double time) {
        return std::abs(std::remainder(time, config.output_interval)) < 1e-6;
    };
    auto truth_relative = [&](const EciState& tg, const EciState& ch) {
        return relative_elements(osc_to_mean(cart_to_elements(ch, g), g), osc_to_mean(cart_to_elements(tg, g), g));
    };
    auto store = [&](const PropagationResult& r) {
        for (std::size_t k = 0; k < r.time.size(); ++k) {
            if (current == Phase::circumnavigation) report.circumnavigation.push_back(eci_to_relative(r.target[k], r.chaser[k]));
            if (!on_output_grid(r.time[k])) continue;
            report.time.push_back(r.time[k]);
            report.target.push_back(r.target[k]);
            report.chaser.push_back(r.chaser[k]);
            report.sample_phase.push_back(current);
            if (current == Phase::ellipse_setup) {
                const double du = std::abs(truth_relative(r.target[k], r.chaser[k]).du);
                report.max_abs_du_setup = std::max(report.max_abs_du_setup, du);
            }
        }
    };

    auto advance_truth = [&](double t_next) {
        std::vector<ThrustSegment> chunk;
        for (const ThrustSegment& s : pending) {
            const double a = std::max(s.t_start, t);
            const double b = std::min(s.t_end, t_next);
            if (b > a) chunk.push_back({a, b, s.direction, s.thrust});
        }
        options.record_initial = t == 0.0;
        options.impulse_budget = sc.total_impulse - mission.impulse_used;
        const PropagationResult r = propagate(target, chaser, chunk, config.forces, sc, t_next, options);
        store(r);
        for (const SegmentRecord& rec : r.segments) {
            report.firings.push_back(rec);
            report.firing_phase.push_back(block_phase);
        }
        mission.delta_v_used += r.delta_v_used;
        mission.impulse_used += r.impulse_used;
        target = r.final_target;
        chaser = r.final_chaser;
        mission.chaser_mass = chaser.mass;
        t = t_next;
    };

    auto close_phase = [&](Phase next, double when) {
        phases.back().end = when;
        phases.back().exit_elements = truth_relative(target, chaser);
        phases.push_back({next, when, when, {}});
        current = next;
    };

    try {
        double next_nav = 0.0;
        while (true) {
            const double stop = config.stop_time.value_or(std::numeric_limits<double>::infinity());
            const double horizon = std::min({next_nav, circ_end, stop});
            if (horizon > t) advance_truth(horizon);
            if (t >= stop && t < circ_end) {
                report.truncated = true;
                mission.events.push_back({t, t, mission.phase, "stopped"});
                break;
            }
            if (t >= circ_end) {
                close_phase(Phase::done, t);
                mission.phase = Phase::done;
                mission.events.push_back({t, t, Phase::done, "circumnavigation complete"});
                break;
            }
            const double due = clock.next(t);
            const NavUpdate nav = navigation(target, chaser, due, g);
            next_nav = due;
            if (t < block_end) continue;

            const PhaseStep step = step_phase(mission, nav, config);
            const Phase before = mission.phase;
            mission = step.next;
            if (mission.phase != before) {
                // Intermediate phases passed through without firing still get a record.
                for (Phase p : kPhases) {
                    if (static_cast<int>(p) > static_cast<int>(before) &&
                        static_cast<int>(p) <= static_cast<int>(mission.phase)) {
                        close_phase(p, t);
                    }
                }
                if (mission.phase == Phase::circumnavigation) {
                    circ_end = t + config.circumnavigation;
                    report.nominal_elements = nav.relative();
                    report.nominal_target = nav.target;
                }
            }
            if (step.schedule) {
                const FiringSchedule& fs = *step.schedule;
                const double period = nav.target.period(g);
                const ScheduleValidation v = validate_schedule(fs.segments, sc, period, mission.last_firing_end,
                                                               sc.total_impulse - mission.impulse_used);
                if (!v.ok()) {
                    for (const auto& viol : v.violations) {
                        if (viol.kind == ViolationKind::impulse_budget) throw MissionAbort("delta-v budget exhausted");
                    }
                    throw MissionAbort("planner emitted an invalid schedule: " + v.violations.front().message);
                }
                pending = fs.segments;
                block_phase = mission.phase;
                block_end = fs.end_time;
                mission.last_firing_end = fs.segments.back().t_end;
                report.blocks.push_back({mission.phase, nav.epoch, fs});
            }
        }
        report.completed = !report.truncated;
    } catch (const MissionAbort& e) {
        report.abort_reason = e.what();
    } catch (const ScheduleError& e) {
        report.abort_reason = std::string("schedule rejected: ") + e.what();
    } catch (const DomainError& e) {
        report.abort_reason = std::string(to_string(mission.phase)) + ": " + e.what();
    }
    if (!report.completed) {
        phases.back().end = t;
        phases.back().exit_elements = truth_relative(target, chaser);
    }
    if (!report.completed && !report.truncated) {
        mission.events.push_back({t, t, mission.phase, "abort: " + report.abort_reason});
    }

    report.end_time = t;
    report.phases = std::move(phases);
    report.events = std::move(mission.events);
    report.delta_v_used = mission.delta_v_used;
    report.impulse_used = mission.impulse_used;
    report.final_mass = chaser.mass;
    report.final_elements = truth_relative(target, chaser);
    report.cw = CwContext{osc_to_mean(cart_to_elements(target, g), g).mean_motion(g)};
    if (report.completed && report.circumnavigation.size() > 1 &&
        report.circumnavigation.back().epoch - report.circumnavigation.front().epoch >= report.cw.period()) {
        const double period = report.cw.period();
        const double t0 = report.circumnavigation.front().epoch;
        std::vector<RelativeState> first;
        for (const auto& s : report.circumnavigation) {
            first.push_back(s);
            if (s.epoch >= t0 + period) break;
        }
        report.nominal_geometry = measure_ellipse(first, report.cw);
        report.final_geometry = measure_ellipse(report.circumnavigation, report.cw);
    }
    return report;
}

std::vector<PhaseDeltaV> delta_v_ledger(const MissionReport& report) {
    std::vector<PhaseDeltaV> out;
    for (Phase p : {Phase::raan, Phase::approach, Phase::ellipse_setup, Phase::circumnavigation}) {
        out.push_back({p, 0.0});
    }
    for (std::size_t k = 0; k < report.firings.size(); ++k) {
        for (auto& entry : out) {
            if (entry.phase == report.firing_phase[k]) entry.delta_v += report.firings[k].delta_v;
        }
    }
    return out;
}

double rocket_equation_delta_v(const MissionReport& report, const SpacecraftParams& params) {
    return params.exhaust_velocity() * std::log(report.initial_mass / report.final_mass);
}

}  // namespace rpo
