#include <doctest.h>

#include <random>

#include "rpo/orbital_core.hpp"

using namespace rpo;

namespace {

OrbitalElements target_elements() {
    return {6925.68, 0.0019, deg2rad(35.008), deg2rad(3.006), 0.0, 0.0};
}

double angle_diff(double a, double b) { return std::abs(wrap_pi(a - b)); }

}  // namespace

TEST_CASE("rsw frame, axis aligned") {
    const EciState s{0.0, Vec3(7000, 0, 0), Vec3(0, 7.5, 0)};
    const RswFrame f = rsw_frame(s);
    CHECK((f.radial() - Vec3::UnitX()).norm() < 1e-15);
    CHECK((f.along_track() - Vec3::UnitY()).norm() < 1e-15);
    CHECK((f.cross_track() - Vec3::UnitZ()).norm() < 1e-15);
}

TEST_CASE("rsw frame is orthonormal and right handed") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int k = 0; k < 200; ++k) {
        const Vec3 r = Vec3(u(rng), u(rng), u(rng)).normalized() * 7000.0;
        const Vec3 v = Vec3(u(rng), u(rng), u(rng)) * 8.0;
        const Mat3 b = rsw_frame({0.0, r, v}).basis;
        CHECK((b.transpose() * b - Mat3::Identity()).norm() < 1e-12);
        CHECK(std::abs(b.determinant() - 1.0) < 1e-12);
        CHECK(b.col(2).cross(r.cross(v).normalized()).norm() < 1e-12);
    }
}

TEST_CASE("rsw frame of a rectilinear state throws") {
    const EciState s{0.0, Vec3(7000, 0, 0), Vec3(1, 0, 0)};
    CHECK_THROWS_WITH_AS(rsw_frame(s), "undefined RSW frame", DomainError);
}

TEST_CASE("orbit normal of the target has z component cos i") {
    const EciState s = elements_to_cart(target_elements());
    CHECK(rsw_frame(s).cross_track().z() == doctest::Approx(std::cos(deg2rad(35.008))).epsilon(1e-12));
    CHECK(rsw_frame(s).cross_track().z() == doctest::Approx(0.8191).epsilon(1e-4));
}

TEST_CASE("relative state of coincident and offset spacecraft") {
    const EciState t = elements_to_cart(target_elements());
    const RelativeState zero = eci_to_relative(t, t);
    CHECK(zero.stacked().norm() == 0.0);

    EciState c = t;
    c.r += rsw_frame(t).radial();
    const RelativeState rel = eci_to_relative(t, c);
    CHECK(rel.x() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(rel.y()) < 1e-12);
    CHECK(std::abs(rel.z()) < 1e-12);
    // transport theorem: a radially displaced point with the same inertial
    // velocity lags the rotating frame
    const double omega = t.r.cross(t.v).norm() / t.r.squaredNorm();
    CHECK(rel.ydot() == doctest::Approx(-omega).epsilon(1e-9));
}

TEST_CASE("relative state round trip") {
    const EciState t = elements_to_cart(target_elements());
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int k = 0; k < 100; ++k) {
        RelativeState rel{0.0, Vec3(u(rng), u(rng), u(rng)) * 50.0, Vec3(u(rng), u(rng), u(rng)) * 0.05};
        const RelativeState back = eci_to_relative(t, relative_to_eci(t, rel));
        CHECK((back.position - rel.position).norm() < 1e-9);
        CHECK((back.velocity - rel.velocity).norm() < 1e-12);
    }
}

TEST_CASE("relative state requires matching epochs") {
    const EciState t = elements_to_cart(target_elements());
    EciState c = t;
    c.epoch = 10.0;
    CHECK_THROWS_AS(eci_to_relative(t, c), DomainError);
}

TEST_CASE("circular equatorial orbit uses the true longitude") {
    const EciState s{0.0, Vec3(0, 7000, 0), Vec3(-std::sqrt(398600.4418 / 7000.0), 0, 0)};
    const OrbitalElements oe = cart_to_elements(s);
    CHECK(oe.a == doctest::Approx(7000.0).epsilon(1e-12));
    CHECK(oe.e < 1e-9);
    CHECK(oe.i < 1e-9);
    CHECK(oe.raan == 0.0);
    CHECK(oe.argp == 0.0);
    CHECK(oe.arglat() == doctest::Approx(kPi / 2).epsilon(1e-12));
}

TEST_CASE("vis-viva circular speed") {
    const double a = 6925.68;
    const double i = deg2rad(35.008);
    const double v = std::sqrt(398600.4418 / a);
    CHECK(v == doctest::Approx(7.5865).epsilon(1e-4));
    const EciState s{0.0, Vec3(a, 0, 0), Vec3(0, v * std::cos(i), v * std::sin(i))};
    const OrbitalElements oe = cart_to_elements(s);
    CHECK(oe.a == doctest::Approx(a).epsilon(1e-12));
    CHECK(oe.e < 1e-9);
    CHECK(oe.i == doctest::Approx(i).epsilon(1e-12));
}

TEST_CASE("target elements round trip") {
    const OrbitalElements in = target_elements();
    const OrbitalElements out = cart_to_elements(elements_to_cart(in));
    CHECK(out.a == doctest::Approx(in.a).epsilon(1e-9));
    CHECK(out.e == doctest::Approx(in.e).epsilon(1e-9));
    CHECK(angle_diff(out.i, in.i) < 1e-9);
    CHECK(angle_diff(out.raan, in.raan) < 1e-9);
    CHECK(angle_diff(out.arglat(), in.arglat()) < 1e-9);
}

TEST_CASE("perigee radius and energy") {
    const OrbitalElements oe = target_elements();
    const EciState s = elements_to_cart(oe);
    CHECK(s.r.norm() == doctest::Approx(6912.52).epsilon(1e-6));
    CHECK(s.r.norm() == doctest::Approx(oe.a * (1 - oe.e)).epsilon(1e-12));
    CHECK(s.r.dot(s.v) == doctest::Approx(0.0).scale(1.0));
    const double mu = 398600.4418;
    const double energy = s.v.squaredNorm() / 2 - mu / s.r.norm();
    CHECK(energy == doctest::Approx(-mu / (2 * oe.a)).epsilon(1e-12));
    // perigee direction is the ascending node when argp = 0
    const Vec3 node(std::cos(oe.raan), std::sin(oe.raan), 0.0);
    CHECK((s.r.normalized() - node).norm() < 1e-12);
}

TEST_CASE("random element round trip") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ua(6600.0, 8000.0), ue(1e-4, 0.1), ui(0.01, kPi - 0.01),
        ang(0.0, kTwoPi);
    for (int k = 0; k < 1000; ++k) {
        const OrbitalElements in{ua(rng), ue(rng), ui(rng), ang(rng), ang(rng), ang(rng)};
        const OrbitalElements out = cart_to_elements(elements_to_cart(in));
        REQUIRE(std::abs(out.a - in.a) / in.a < 1e-9);
        REQUIRE(std::abs(out.e - in.e) / in.e < 1e-9);
        REQUIRE(angle_diff(out.i, in.i) < 1e-9);
        REQUIRE(angle_diff(out.raan, in.raan) < 1e-9);
        REQUIRE(angle_diff(out.argp, in.argp) < 1e-9);
        REQUIRE(angle_diff(out.ta, in.ta) < 1e-9);
    }
}

TEST_CASE("hyperbolic state is rejected") {
    const EciState s{0.0, Vec3(7000, 0, 0), Vec3(0, 11.0, 0)};
    CHECK_THROWS_AS(cart_to_elements(s), DomainError);
}

TEST_CASE("mean elements without J2 are the identity") {
    const GravityConstants g = GravityConstants{}.without_j2();
    const OrbitalElements in = target_elements();
    const OrbitalElements m = osc_to_mean(in, g);
    CHECK(m.a == in.a);
    CHECK(m.e == in.e);
    CHECK(m.i == in.i);
    CHECK(m.raan == in.raan);
    CHECK(m.argp == in.argp);
    CHECK(m.ta == in.ta);
    CHECK(m.flavor == ElementFlavor::mean);
    const OrbitalElements o = mean_to_osc(m, g);
    CHECK(o.a == in.a);
    CHECK(o.e == in.e);
    CHECK(o.ta == in.ta);
}

TEST_CASE("osculating eccentricity oscillates about the mean at the 1e-3 level") {
    const OrbitalElements mean = osc_to_mean(target_elements());
    double lo = 1.0, hi = -1.0;
    for (int k = 0; k < 360; ++k) {
        OrbitalElements m = mean;
        m.ta = deg2rad(k);
        const double d = mean_to_osc(m).e - mean.e;
        lo = std::min(lo, d);
        hi = std::max(hi, d);
    }
    CHECK(hi - lo > 3e-4);
    CHECK(hi - lo < 3e-3);
}

TEST_CASE("osc to mean to osc round trip") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ua(6700.0, 7500.0), ue(1e-4, 0.02), ui(deg2rad(5), deg2rad(60)),
        ang(0.0, kTwoPi);
    for (int k = 0; k < 100; ++k) {
        const OrbitalElements osc{ua(rng), ue(rng), ui(rng), ang(rng), ang(rng), ang(rng)};
        const OrbitalElements back = mean_to_osc(osc_to_mean(osc));
        REQUIRE(std::abs(back.e - osc.e) < 5e-6);
        REQUIRE(rad2deg(std::abs(back.i - osc.i)) < 1e-4);
    }
}

TEST_CASE("mean element preconditions") {
    OrbitalElements oe = target_elements();
    oe.i = deg2rad(63.43);
    CHECK_THROWS_AS(osc_to_mean(oe), DomainError);
    oe = target_elements();
    oe.e = 0.99;
    CHECK_THROWS_AS(osc_to_mean(oe), DomainError);
}

TEST_CASE("nodal regression of the target orbit") {
    const OrbitalElements oe = target_elements();
    const GravityConstants g;
    const double n = std::sqrt(g.mu / std::pow(oe.a, 3));
    CHECK(n == doctest::Approx(1.09541e-3).epsilon(1e-5));
    const double p = oe.a * (1 - oe.e * oe.e);
    const double expected = -1.5 * g.j2 * n * std::pow(g.re / p, 2) * std::cos(oe.i);
    const SecularRates r = secular_rates(oe);
    CHECK(r.raan_dot == doctest::Approx(expected).epsilon(1e-12));
    CHECK(rad2deg(r.raan_dot) * kSecondsPerDay == doctest::Approx(-6.12).epsilon(0.01));
}

TEST_CASE("polar orbit has no nodal regression") {
    OrbitalElements oe = target_elements();
    oe.i = kPi / 2;
    CHECK(std::abs(secular_rates(oe).raan_dot) < 1e-20);
}

TEST_CASE("differential nodal rate for a 2.65 km offset") {
    OrbitalElements oe = target_elements();
    OrbitalElements hi = oe;
    hi.a += 2.65;
    const double d = rad2deg(secular_rates(hi).raan_dot - secular_rates(oe).raan_dot) * kSecondsPerDay;
    CHECK(d == doctest::Approx(8.2e-3).epsilon(0.03));
    const double linear = -3.5 * secular_rates(oe).raan_dot / oe.a * 2.65;
    CHECK(d == doctest::Approx(rad2deg(linear) * kSecondsPerDay).epsilon(0.01));
}

TEST_CASE("nodal regression sign follows the inclination") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> ua(6600.0, 8000.0), ue(0.0, 0.05), ui(0.01, kPi / 2 - 0.01);
    for (int k = 0; k < 200; ++k) {
        OrbitalElements oe{ua(rng), ue(rng), ui(rng), 0, 0, 0};
        REQUIRE(secular_rates(oe).raan_dot < 0.0);
        oe.i = kPi - oe.i;
        REQUIRE(secular_rates(oe).raan_dot > 0.0);
    }
}

TEST_CASE("relative elements wrap angle differences") {
    OrbitalElements t = target_elements();
    OrbitalElements c = t;
    t.raan = deg2rad(359.9);
    c.raan = deg2rad(0.1);
    const RelativeElements d = relative_elements(c, t);
    CHECK(rad2deg(d.draan) == doctest::Approx(0.2).epsilon(1e-9));
    CHECK(d.da == 0.0);
}
