#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "rpo/artifacts.hpp"
#include "rpo/scenario.hpp"

using namespace rpo;
namespace fs = std::filesystem;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

const OrbitalElements kTarget{6925.68, 0.0019, deg2rad(35.008), deg2rad(3.006), 0.0, 0.0};

MissionConfig scenario() { return mission_config(load_config(RPO_SCENARIO)); }

const MissionReport& mission() {
    static const MissionReport report = run_mission(scenario());
    return report;
}

RelativeElements truth_relative(const EciState& t, const EciState& c) {
    const GravityConstants g;
    return relative_elements(osc_to_mean(cart_to_elements(c, g), g), osc_to_mean(cart_to_elements(t, g), g));
}

Vec6 rk4(Vec6 s, double n, double t, int steps) {
    const double h = t / steps;
    for (int k = 0; k < steps; ++k) {
        const Vec6 k1 = cw_derivative(s, n);
        const Vec6 k2 = cw_derivative((s + 0.5 * h * k1).eval(), n);
        const Vec6 k3 = cw_derivative((s + 0.5 * h * k2).eval(), n);
        const Vec6 k4 = cw_derivative((s + h * k3).eval(), n);
        s += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    return s;
}

Verdict cw_oracle() {
    const auto t0 = std::chrono::steady_clock::now();
    const CwContext ctx = CwContext::from_radius(kTarget.a);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-50.0, 50.0);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        Vec6 s0;
        s0 << u(rng), u(rng), u(rng), u(rng) * ctx.n, u(rng) * ctx.n, u(rng) * ctx.n;
        const Vec6 exact = cw_propagate(RelativeState::from_stacked(s0), ctx, ctx.period()).stacked();
        const Vec6 num = rk4(s0, ctx.n, ctx.period(), 20000);
        worst = std::max(worst, (exact.head<3>() - num.head<3>()).cwiseAbs().maxCoeff());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {worst < 1e-8 && secs < 5.0, fmt("max position error %.3g km, %.2f s", worst, secs)};
}

Verdict static_ellipse() {
    const CwContext ctx = CwContext::from_radius(kTarget.a);
    const RelativeState s0 = design_safety_ellipse(14.0, 5.0, ctx);
    const double T = ctx.period();
    auto mean_y = [&](int k) {
        double sum = 0.0;
        const int m = 720;
        for (int j = 0; j < m; ++j) sum += cw_propagate(s0, ctx, k * T + j * T / m).y();
        return sum / m;
    };
    double worst = 0.0;
    const double y0 = mean_y(0);
    for (int k = 1; k <= 10; ++k) worst = std::max(worst, std::abs(mean_y(k) - y0));
    return {worst < 1e-9, fmt("max period-mean y drift %.3g km over 10 periods", worst)};
}

Verdict j2_secular() {
    const ForceModelConfig c;
    const EciState s0 = elements_to_cart(kTarget, c.gravity, 0.0, 4.0);
    PropagationOptions o;
    o.sample_interval = 600.0;
    o.step = 10.0;
    const PropagationResult r = propagate(s0, s0, {}, c, SpacecraftParams{}, 30 * kSecondsPerDay, o);
    const OrbitalElements m0 = osc_to_mean(cart_to_elements(s0, c.gravity), c.gravity);
    double travelled = 0.0, previous = m0.raan;
    // least-squares trend of the mean semi-major axis
    double st = 0.0, sa = 0.0, stt = 0.0, sta = 0.0;
    for (const EciState& s : r.target) {
        const OrbitalElements m = osc_to_mean(cart_to_elements(s, c.gravity), c.gravity);
        travelled += wrap_pi(m.raan - previous);
        previous = m.raan;
        const double t = s.epoch, a = m.a - m0.a;
        st += t;
        sa += a;
        stt += t * t;
        sta += t * a;
    }
    const double count = static_cast<double>(r.target.size());
    const double slope = (count * sta - st * sa) / (count * stt - st * st);
    const double a_drift = std::abs(slope) * 30 * kSecondsPerDay;
    const double rate = rad2deg(travelled) / 30.0;
    const double analytic = rad2deg(secular_rates(m0, c.gravity).raan_dot) * kSecondsPerDay;
    const bool ok = std::abs(rate + 6.12) <= 0.06 && std::abs(rate - analytic) <= 0.06 && a_drift < 0.010;
    return {ok, fmt("RAAN %.4f deg/day (analytic %.4f), mean a drift %.2f m over 30 days", rate, analytic,
                    a_drift * 1000)};
}

Verdict mean_elements() {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> ua(6700.0, 7500.0), ue(1e-4, 0.02), ui(deg2rad(5), deg2rad(60)),
        ang(0.0, kTwoPi);
    double worst_e = 0.0, worst_i = 0.0;
    bool identity = true;
    const GravityConstants no_j2 = GravityConstants{}.without_j2();
    for (int k = 0; k < 100; ++k) {
        const OrbitalElements osc{ua(rng), ue(rng), ui(rng), ang(rng), ang(rng), ang(rng)};
        const OrbitalElements back = mean_to_osc(osc_to_mean(osc));
        worst_e = std::max(worst_e, std::abs(back.e - osc.e));
        worst_i = std::max(worst_i, rad2deg(std::abs(back.i - osc.i)));
        const OrbitalElements same = osc_to_mean(osc, no_j2);
        identity = identity && same.a == osc.a && same.e == osc.e && same.i == osc.i && same.raan == osc.raan &&
                   same.argp == osc.argp && same.ta == osc.ta;
    }
    return {worst_e < 5e-6 && worst_i < 1e-4 && identity,
            fmt("max |de| %.3g, max |di| %.3g deg, identity without J2: %s", worst_e, worst_i, identity ? "yes" : "no")};
}

struct Flown {
    RelativeElements before, after;
    double seconds = 0.0;
};

Flown fly(const PlanningState& st, const FiringSchedule& fs) {
    const auto t0 = std::chrono::steady_clock::now();
    const ForceModelConfig cfg;
    const EciState t = elements_to_cart(mean_to_osc(st.target), cfg.gravity, st.epoch, 4.0);
    const EciState c = elements_to_cart(mean_to_osc(st.chaser), cfg.gravity, st.epoch, st.chaser_mass);
    PropagationOptions o;
    o.sample_interval = 1e12;
    const PropagationResult r = propagate(t, c, fs.segments, cfg, SpacecraftParams{}, fs.end_time, o);
    Flown f{truth_relative(t, c), truth_relative(r.final_target, r.final_chaser), 0.0};
    f.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return f;
}

Verdict orthogonality() {
    PlanningState st;
    st.target = osc_to_mean(kTarget);
    st.chaser = st.target;
    const SpacecraftParams sp;

    const double di_cmd = deg2rad(0.02);
    const Flown i = fly(st, plan_inclination_correction(st, sp, di_cmd));
    const double di = i.after.di - i.before.di;
    const double de_side = i.after.de - i.before.de;
    const bool i_ok = std::abs(di / di_cmd - 1.0) <= 0.05 && std::abs(de_side) < 1e-5 && i.seconds < 60;

    const double de_cmd = 0.001;
    const Flown e = fly(st, plan_eccentricity_correction(st, sp, de_cmd, AlongTrackBias::none));
    const double de = e.after.de - e.before.de;
    const double di_side = rad2deg(e.after.di - e.before.di);
    const bool e_ok = std::abs(de / de_cmd - 1.0) <= 0.05 && std::abs(di_side) < 0.001 && std::abs(e.after.da) < 0.5 &&
                      e.seconds < 60;
    return {i_ok && e_ok, fmt("i_cor di %.5f deg (side de %.2g); e_cor de %.4g (side di %.2g deg, da %.3f km)",
                              rad2deg(di), de_side, de, di_side, e.after.da)};
}

Verdict schedule_constraints() {
    const SpacecraftParams sp;
    const double T = osc_to_mean(kTarget).period({});
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> over(900.001, 2000.0), under(1.0, 899.0), short_gap(0.0, 0.999),
        long_gap(1.0, 3.0);
    int missed = 0, false_alarm = 0;
    for (int k = 0; k < 500; ++k) {
        const std::vector<ThrustSegment> a{{0.0, over(rng), ThrustAxis::plus_s, sp.thrust}};
        if (validate_schedule(a, sp, T).ok()) ++missed;
        const double d = under(rng);
        const std::vector<ThrustSegment> b{{0.0, d, ThrustAxis::plus_s, sp.thrust},
                                           {d + short_gap(rng) * T, d + short_gap(rng) * T + d + 1.0,
                                            ThrustAxis::minus_s, sp.thrust}};
        if (b[1].t_start > b[0].t_end && validate_schedule(b, sp, T).ok()) ++missed;
        const double g = long_gap(rng) * T;
        const std::vector<ThrustSegment> c{{0.0, d, ThrustAxis::plus_s, sp.thrust},
                                           {d + g, 2 * d + g, ThrustAxis::minus_s, sp.thrust}};
        if (!validate_schedule(c, sp, T).ok()) ++false_alarm;
    }
    const MissionReport& r = mission();
    int bad = 0;
    double previous = -std::numeric_limits<double>::infinity();
    for (const ExecutedBlock& b : r.blocks) {
        if (!validate_schedule(b.schedule.segments, sp, T * (1 - 1e-3), previous).ok()) ++bad;
        if (!b.schedule.segments.empty()) previous = b.schedule.segments.back().t_end;
    }
    return {missed == 0 && false_alarm == 0 && bad == 0,
            fmt("%d violations missed, %d valid schedules rejected, %d of %zu mission blocks invalid", missed,
                false_alarm, bad, r.blocks.size())};
}

Verdict end_to_end() {
    const auto t0 = std::chrono::steady_clock::now();
    const MissionReport& r = mission();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!r.completed) return {false, "mission aborted: " + r.abort_reason};
    const std::vector<Phase> order{Phase::commissioning, Phase::raan, Phase::approach, Phase::ellipse_setup,
                                   Phase::circumnavigation};
    std::vector<Phase> seen;
    for (const PhaseRecord& p : r.phases) {
        if (p.phase != Phase::done) seen.push_back(p.phase);
    }
    const bool in_order = seen == order;
    if (!in_order) return {false, "phase sequence out of order"};
    const RelativeElements& raan = r.phases[1].exit_elements;
    const double approach_y = along_track_center(r.phases[2].exit_elements, osc_to_mean(kTarget));
    const RelativeElements& setup = r.phases[3].exit_elements;
    const bool ok = std::abs(rad2deg(raan.draan)) < 0.02 && std::abs(raan.da) < 0.5 && std::abs(approach_y) < 50.0 &&
                    std::abs(setup.de - 0.001) <= 2e-4 && std::abs(rad2deg(setup.di) - 0.02) <= 0.005 &&
                    rad2deg(r.max_abs_du_setup) <= 0.5 && secs < 300.0;
    return {ok, fmt("post-raan draan %.4f deg da %.3f km; post-approach y %.1f km; post-setup de %.5f di %.4f deg; "
                    "max |du| %.3f deg; %.1f s",
                    rad2deg(raan.draan), raan.da, approach_y, setup.de, rad2deg(setup.di),
                    rad2deg(r.max_abs_du_setup), secs)};
}

Verdict budget() {
    const MissionReport& r = mission();
    const SpacecraftParams sp = scenario().spacecraft;
    const std::vector<PhaseDeltaV> ledger = delta_v_ledger(r);
    double sum = 0.0, largest = 0.0;
    Phase largest_phase = Phase::raan;
    for (const PhaseDeltaV& e : ledger) {
        sum += e.delta_v;
        if (e.delta_v > largest) {
            largest = e.delta_v;
            largest_phase = e.phase;
        }
    }
    const double rocket = rocket_equation_delta_v(r, sp);
    const bool in_range = r.delta_v_used >= 20.0 && r.delta_v_used <= 40.0;
    const bool ok = in_range && r.delta_v_used <= sp.delta_v_capacity() &&
                    std::abs(sum - rocket) <= 1e-3 * rocket && largest_phase == Phase::ellipse_setup;
    return {ok, fmt("total %.2f m/s (required 20 to 40), rocket equation %.2f m/s, largest phase %s %.2f m/s",
                    r.delta_v_used, rocket, std::string(to_string(largest_phase)).c_str(), largest)};
}

Verdict geometry() {
    const MissionReport& r = mission();
    if (r.circumnavigation.empty()) return {false, "no circumnavigation"};
    const EllipseGeometry& m = r.final_geometry;
    const GravityConstants g;
    const OrbitalElements t_mean = osc_to_mean(cart_to_elements(r.target.back(), g), g);
    const EllipseGeometry p = relative_elements_to_geometry(r.final_elements, t_mean);
    auto within = [](double v, double ref, double tol) { return std::abs(v - ref) <= tol * ref; };
    const bool loose = within(m.radial_extent, 14, 0.4) && within(m.alongtrack_extent, 27, 0.4) &&
                       within(m.crosstrack_extent, 8, 0.4);
    const bool mapped = within(m.radial_extent, p.radial_extent, 0.1) &&
                        within(m.alongtrack_extent, p.alongtrack_extent, 0.1) &&
                        within(m.crosstrack_extent, p.crosstrack_extent, 0.1);
    return {loose && mapped, fmt("measured %.2f / %.2f / %.2f km, mapped %.2f / %.2f / %.2f km", m.radial_extent,
                                 m.alongtrack_extent, m.crosstrack_extent, p.radial_extent, p.alongtrack_extent,
                                 p.crosstrack_extent)};
}

Verdict j2_evolution() {
    const MissionReport& r = mission();
    const double drift = std::abs(r.final_geometry.center_drift_rate);
    // osculating eccentricity difference averaged over two-day windows
    std::vector<double> windows;
    double sum = 0.0, start = -1.0;
    int count = 0;
    for (std::size_t k = 0; k < r.time.size(); ++k) {
        if (r.sample_phase[k] != Phase::circumnavigation) continue;
        if (start < 0.0) start = r.time[k];
        sum += cart_to_elements(r.chaser[k]).e - cart_to_elements(r.target[k]).e;
        ++count;
        if (r.time[k] - start >= 2 * kSecondsPerDay) {
            windows.push_back(sum / count);
            sum = 0.0;
            count = 0;
            start = r.time[k];
        }
    }
    if (windows.size() < 3) return {false, "circumnavigation too short"};
    const auto [lo, hi] = std::minmax_element(windows.begin(), windows.end());
    const double de_range = *hi - *lo;
    const double cross_change = r.final_geometry.crosstrack_extent - r.nominal_geometry.crosstrack_extent;
    const bool ok = drift > 0.0 && drift < 5.0 && de_range > 1e-5 && std::abs(cross_change) > 0.1;
    return {ok, fmt("drift %.3f km/period, averaged de varies by %.3g, cross-track %.2f -> %.2f km", drift, de_range,
                    r.nominal_geometry.crosstrack_extent, r.final_geometry.crosstrack_extent)};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Verdict determinism(const fs::path& work) {
    const MissionConfig c = scenario();
    const fs::path a = work / "run_a", b = work / "run_b";
    fs::remove_all(a);
    fs::remove_all(b);
    write_mission_artifacts(run_mission(c), c, a);
    write_mission_artifacts(run_mission(c), c, b);
    int files = 0, differ = 0;
    for (const char* name : {"states.csv", "elements.csv", "schedule.csv", "report.json"}) {
        ++files;
        const std::string x = slurp(a / name), y = slurp(b / name);
        if (x.empty() || x != y) ++differ;
    }
    return {differ == 0, fmt("%d of %d artifacts differ", differ, files)};
}

}  // namespace

int main(int argc, char** argv) {
    const fs::path work = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "rpo_acceptance";
    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
        {"CW closed form vs numerical integration", cw_oracle},
        {"static ellipse invariance", static_ellipse},
        {"J2 secular drift", j2_secular},
        {"mean element conversion", mean_elements},
        {"block orthogonality", orthogonality},
        {"schedule constraints", schedule_constraints},
        {"end-to-end scenario", end_to_end},
        {"delta-v budget", budget},
        {"final ellipse geometry", geometry},
        {"J2 ellipse evolution", j2_evolution},
        {"determinism", [&] { return determinism(work); }},
    };
    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        Verdict v;
        try {
            v = criteria[k].second();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        if (!v.pass) ++failed;
        std::printf("%s %2zu %s: %s\n", v.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(), v.detail.c_str());
    }
    std::printf("%zu of %zu criteria passed\n", criteria.size() - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
