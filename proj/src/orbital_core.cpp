#include "rpo/orbital_core.hpp"

#include <algorithm>
#include <cmath>

namespace rpo {

namespace {

constexpr double kDegenerateTol = 1e-9;
// 1 - 5 cos^2 i vanishes at i = 63.4349 deg.
const double kCriticalInclination = std::acos(1.0 / std::sqrt(5.0));
constexpr double kCriticalBand = 0.5 * kDeg;
constexpr double kMaxMappedEccentricity = 0.9;

void check_elements(const OrbitalElements& oe) {
    if (!(oe.a > 0.0)) throw DomainError("semi-major axis must be positive");
    if (!(oe.e >= 0.0 && oe.e < 1.0)) throw DomainError("eccentricity must be in [0, 1)");
    if (!(oe.i >= 0.0 && oe.i <= kPi)) throw DomainError("inclination must be in [0, pi]");
}

Mat3 node_to_eci(double raan, double inc) {
    return (Eigen::AngleAxisd(raan, Vec3::UnitZ()) * Eigen::AngleAxisd(inc, Vec3::UnitX())).toRotationMatrix();
}

// Shared first-order J2 short- and long-period map. sign = +1 maps mean to
// osculating, sign = -1 maps osculating to mean.
OrbitalElements brouwer_lyddane_map(const OrbitalElements& in, const GravityConstants& g, double sign) {
    check_elements(in);
    if (in.e > kMaxMappedEccentricity) throw DomainError("near-parabolic orbit outside mean-element theory");
    if (std::abs(in.i - kCriticalInclination) < kCriticalBand ||
        std::abs(in.i - (kPi - kCriticalInclination)) < kCriticalBand) {
        throw DomainError("critical inclination: mean-element theory is singular");
    }

    OrbitalElements out = in;
    out.flavor = sign > 0.0 ? ElementFlavor::osculating : ElementFlavor::mean;
    if (g.j2 == 0.0) return out;

    const double a = in.a;
    const double e = in.e;
    const double inc = in.i;
    const double raan = wrap_two_pi(in.raan);
    const double w = wrap_two_pi(in.argp);
    const double f = wrap_two_pi(in.ta);
    const double M = true_to_mean(f, e);

    const double c = std::cos(inc);
    const double c2 = c * c;
    const double c4 = c2 * c2;
    const double c6 = c4 * c2;
    const double s = std::sin(inc);
    const double crit = 1.0 - 5.0 * c2;

    const double gamma2 = sign * 0.5 * g.j2 * (g.re / a) * (g.re / a);
    const double eta = std::sqrt(1.0 - e * e);
    const double eta2 = eta * eta;
    const double eta3 = eta2 * eta;
    const double eta6 = eta3 * eta3;
    const double gp = gamma2 / (eta2 * eta2);
    const double ar = (1.0 + e * std::cos(f)) / eta2;  // a / r
    const double ar3 = ar * ar * ar;

    const double cf = std::cos(f);
    const double cos2wf = std::cos(2.0 * w + 2.0 * f);
    const double cos2wf1 = std::cos(2.0 * w + f);
    const double cos2wf3 = std::cos(2.0 * w + 3.0 * f);
    const double sin2wf = std::sin(2.0 * w + 2.0 * f);
    const double sin2wf1 = std::sin(2.0 * w + f);
    const double sin2wf3 = std::sin(2.0 * w + 3.0 * f);
    const double equation_of_center = f - M + e * std::sin(f);
    const double long_period = 1.0 - 11.0 * c2 - 40.0 * c4 / crit;

    const double a_p =
        a + a * gamma2 * ((3.0 * c2 - 1.0) * (ar3 - 1.0 / eta3) + 3.0 * (1.0 - c2) * ar3 * cos2wf);

    const double de1 = gp / 8.0 * e * eta2 * long_period * std::cos(2.0 * w);
    const double de =
        de1 + eta2 / 2.0 *
                  (gamma2 * ((3.0 * c2 - 1.0) / eta6 *
                                 (e * eta + e / (1.0 + eta) + 3.0 * cf + 3.0 * e * cf * cf + e * e * cf * cf * cf) +
                             3.0 * (1.0 - c2) / eta6 * (e + 3.0 * cf + 3.0 * e * cf * cf + e * e * cf * cf * cf) * cos2wf) -
                   gp * (1.0 - c2) * (3.0 * cos2wf1 + cos2wf3));

    const double di_lp = s > kDegenerateTol ? -e * de1 / eta2 / std::tan(inc) : 0.0;
    const double di = di_lp + gp / 2.0 * c * s * (3.0 * cos2wf + 3.0 * e * cos2wf1 + e * cos2wf3);

    const double sum_angles =
        M + w + raan + gp / 8.0 * eta3 * long_period * std::sin(2.0 * w) -
        gp / 16.0 *
            (2.0 + e * e - 11.0 * (2.0 + 3.0 * e * e) * c2 - 40.0 * (2.0 + 5.0 * e * e) * c4 / crit -
             400.0 * e * e * c6 / (crit * crit)) *
            std::sin(2.0 * w) +
        gp / 4.0 * (-6.0 * crit * equation_of_center + (3.0 - 5.0 * c2) * (3.0 * sin2wf + 3.0 * e * sin2wf1 + e * sin2wf3)) -
        gp / 8.0 * e * e * c * (11.0 + 80.0 * c2 / crit + 200.0 * c4 / (crit * crit)) * std::sin(2.0 * w) -
        gp / 2.0 * c * (6.0 * equation_of_center - 3.0 * sin2wf - 3.0 * e * sin2wf1 - e * sin2wf3);

    const double ar_eta2 = ar * ar * eta2;
    const double e_dM =
        gp / 8.0 * e * eta3 * long_period * std::sin(2.0 * w) -
        gp / 4.0 * eta3 *
            (2.0 * (3.0 * c2 - 1.0) * (ar_eta2 + ar + 1.0) * std::sin(f) +
             3.0 * (1.0 - c2) * ((-ar_eta2 - ar + 1.0) * sin2wf1 + (ar_eta2 + ar + 1.0 / 3.0) * sin2wf3));

    const double draan = -gp / 8.0 * e * e * c * (11.0 + 80.0 * c2 / crit + 200.0 * c4 / (crit * crit)) * std::sin(2.0 * w) -
                         gp / 2.0 * c * (6.0 * equation_of_center - 3.0 * sin2wf - 3.0 * e * sin2wf1 - e * sin2wf3);

    const double d1 = (e + de) * std::sin(M) + e_dM * std::cos(M);
    const double d2 = (e + de) * std::cos(M) - e_dM * std::sin(M);
    const double M_p = std::atan2(d1, d2);
    const double e_p = std::hypot(d1, d2);

    const double sh = std::sin(inc / 2.0);
    const double ch = std::cos(inc / 2.0);
    const double d3 = (sh + ch * di / 2.0) * std::sin(raan) + sh * draan * std::cos(raan);
    const double d4 = (sh + ch * di / 2.0) * std::cos(raan) - sh * draan * std::sin(raan);
    const double raan_p = std::atan2(d3, d4);
    const double i_p = 2.0 * std::asin(std::clamp(std::hypot(d3, d4), 0.0, 1.0));
    const double w_p = sum_angles - M_p - raan_p;

    out.a = a_p;
    out.e = e_p;
    out.i = i_p;
    out.raan = wrap_two_pi(raan_p);
    out.argp = wrap_two_pi(w_p);
    out.ta = wrap_two_pi(mean_to_true(M_p, e_p));
    return out;
}

}  // namespace

double OrbitalElements::arglat() const { return wrap_two_pi(argp + ta); }

double OrbitalElements::mean_anomaly() const { return true_to_mean(ta, e); }

double OrbitalElements::mean_motion(const GravityConstants& g) const { return std::sqrt(g.mu / (a * a * a)); }

double OrbitalElements::period(const GravityConstants& g) const { return kTwoPi / mean_motion(g); }

double true_to_eccentric(double ta, double e) {
    return wrap_two_pi(2.0 * std::atan2(std::sqrt(1.0 - e) * std::sin(ta / 2.0), std::sqrt(1.0 + e) * std::cos(ta / 2.0)));
}

double eccentric_to_true(double ea, double e) {
    return wrap_two_pi(2.0 * std::atan2(std::sqrt(1.0 + e) * std::sin(ea / 2.0), std::sqrt(1.0 - e) * std::cos(ea / 2.0)));
}

double eccentric_to_mean(double ea, double e) { return wrap_two_pi(ea - e * std::sin(ea)); }

double mean_to_eccentric(double ma, double e) {
    const double m = wrap_two_pi(ma);
    double ea = e < 0.8 ? m : kPi;
    for (int iter = 0; iter < 50; ++iter) {
        const double step = (ea - e * std::sin(ea) - m) / (1.0 - e * std::cos(ea));
        ea -= step;
        if (std::abs(step) < 1e-15) break;
    }
    return wrap_two_pi(ea);
}

double true_to_mean(double ta, double e) { return eccentric_to_mean(true_to_eccentric(ta, e), e); }

double mean_to_true(double ma, double e) { return eccentric_to_true(mean_to_eccentric(ma, e), e); }

RswFrame rsw_frame(const EciState& state) { return {state.r, rsw_basis(state.r, state.v)}; }

Vec3 rsw_to_eci(const EciState& state, const Vec3& rsw) { return rsw_basis(state.r, state.v) * rsw; }

RelativeState eci_to_relative(const EciState& target, const EciState& chaser) {
    if (std::abs(target.epoch - chaser.epoch) > 1e-9) throw DomainError("relative state requires matching epochs");
    const Mat3 basis = rsw_basis(target.r, target.v);
    const Vec3 omega = target.r.cross(target.v) / target.r.squaredNorm();
    const Vec3 rho = chaser.r - target.r;
    const Vec3 rho_dot = chaser.v - target.v - omega.cross(rho);
    return {target.epoch, basis.transpose() * rho, basis.transpose() * rho_dot};
}

EciState relative_to_eci(const EciState& target, const RelativeState& rel) {
    const Mat3 basis = rsw_basis(target.r, target.v);
    const Vec3 omega = target.r.cross(target.v) / target.r.squaredNorm();
    const Vec3 rho = basis * rel.position;
    EciState chaser = target;
    chaser.r = target.r + rho;
    chaser.v = target.v + basis * rel.velocity + omega.cross(rho);
    return chaser;
}

OrbitalElements cart_to_elements(const EciState& state, const GravityConstants& g) {
    const Vec3& r = state.r;
    const Vec3& v = state.v;
    const double rm = r.norm();
    const Vec3 h = r.cross(v);
    const double hm = h.norm();
    if (rm <= 0.0 || hm <= 0.0) throw DomainError("degenerate state: zero position or angular momentum");

    const double energy = 0.5 * v.squaredNorm() - g.mu / rm;
    if (energy >= 0.0) throw DomainError("orbit is not elliptical (specific energy >= 0)");

    OrbitalElements oe;
    oe.flavor = ElementFlavor::osculating;
    oe.a = -g.mu / (2.0 * energy);
    const Vec3 e_vec = ((v.squaredNorm() - g.mu / rm) * r - r.dot(v) * v) / g.mu;
    oe.e = e_vec.norm();
    const Vec3 h_hat = h / hm;
    oe.i = std::acos(std::clamp(h_hat.z(), -1.0, 1.0));

    const Vec3 node = Vec3::UnitZ().cross(h);
    const bool equatorial = oe.i < kDegenerateTol || oe.i > kPi - kDegenerateTol || node.norm() < kDegenerateTol * hm;
    const Vec3 node_dir = equatorial ? Vec3::UnitX() : Vec3(node.normalized());
    oe.raan = equatorial ? 0.0 : wrap_two_pi(std::atan2(node_dir.y(), node_dir.x()));

    auto angle_from_node = [&](const Vec3& vec) {
        return wrap_two_pi(std::atan2(node_dir.cross(vec).dot(h_hat), node_dir.dot(vec)));
    };
    const double u = angle_from_node(r);
    if (oe.e < kDegenerateTol) {
        oe.argp = 0.0;
        oe.ta = u;
    } else {
        oe.argp = angle_from_node(e_vec);
        oe.ta = wrap_two_pi(u - oe.argp);
    }
    return oe;
}

EciState elements_to_cart(const OrbitalElements& oe, const GravityConstants& g, double epoch, double mass) {
    check_elements(oe);
    const double p = oe.a * (1.0 - oe.e * oe.e);
    const double u = oe.argp + oe.ta;
    const double rm = p / (1.0 + oe.e * std::cos(oe.ta));
    const double vs = std::sqrt(g.mu / p);
    const Vec3 r_node(rm * std::cos(u), rm * std::sin(u), 0.0);
    const Vec3 v_node(-vs * (std::sin(u) + oe.e * std::sin(oe.argp)), vs * (std::cos(u) + oe.e * std::cos(oe.argp)), 0.0);
    const Mat3 rot = node_to_eci(oe.raan, oe.i);
    return {epoch, rot * r_node, rot * v_node, mass};
}

OrbitalElements osc_to_mean(const OrbitalElements& osc, const GravityConstants& g) {
    return brouwer_lyddane_map(osc, g, -1.0);
}

OrbitalElements mean_to_osc(const OrbitalElements& mean, const GravityConstants& g) {
    return brouwer_lyddane_map(mean, g, +1.0);
}

SecularRates secular_rates(const OrbitalElements& mean, const GravityConstants& g) {
    check_elements(mean);
    const double n = mean.mean_motion(g);
    const double eta = std::sqrt(1.0 - mean.e * mean.e);
    const double p = mean.a * eta * eta;
    const double k = 0.75 * g.j2 * n * (g.re / p) * (g.re / p);
    const double c = std::cos(mean.i);
    return {-2.0 * k * c, k * (5.0 * c * c - 1.0), n + k * eta * (3.0 * c * c - 1.0)};
}

RelativeElements relative_elements(const OrbitalElements& chaser, const OrbitalElements& target) {
    return {chaser.a - target.a, chaser.e - target.e, chaser.i - target.i, wrap_pi(chaser.raan - target.raan),
            wrap_pi(chaser.argp + chaser.mean_anomaly() - target.argp - target.mean_anomaly())};
}

}  // namespace rpo
