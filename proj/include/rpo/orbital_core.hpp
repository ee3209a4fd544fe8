#pragma once

#include <cmath>

#include "rpo/constants.hpp"
#include "rpo/error.hpp"
#include "rpo/relative_state.hpp"

namespace rpo {

/// Inertial state of one spacecraft.
struct EciState {
    double epoch = 0.0;  ///< seconds since scenario start
    Vec3 r = Vec3::Zero();  ///< [km]
    Vec3 v = Vec3::Zero();  ///< [km/s]
    double mass = 1.0;  ///< [kg]
};

/// Rotating satellite frame. Columns of `basis` are R, S, W.
struct RswFrame {
    Vec3 origin = Vec3::Zero();
    Mat3 basis = Mat3::Identity();

    [[nodiscard]] Vec3 radial() const { return basis.col(0); }
    [[nodiscard]] Vec3 along_track() const { return basis.col(1); }
    [[nodiscard]] Vec3 cross_track() const { return basis.col(2); }
};

enum class ElementFlavor { osculating, mean };

/// Classical elements. Angles in radians, normalized to [0, 2pi).
struct OrbitalElements {
    double a = 0.0;
    double e = 0.0;
    double i = 0.0;
    double raan = 0.0;
    double argp = 0.0;
    double ta = 0.0;
    ElementFlavor flavor = ElementFlavor::osculating;

    /// Argument of latitude u = argp + ta.
    [[nodiscard]] double arglat() const;
    [[nodiscard]] double mean_anomaly() const;
    [[nodiscard]] double mean_motion(const GravityConstants& g) const;
    [[nodiscard]] double period(const GravityConstants& g) const;
};

/// Chaser-minus-target element differences; angles wrapped to (-pi, pi].
/// `du` compares mean arguments of latitude (argp + M).
struct RelativeElements {
    double da = 0.0;
    double de = 0.0;
    double di = 0.0;
    double draan = 0.0;
    double du = 0.0;

    RelativeElements& operator+=(const RelativeElements& o) {
        da += o.da;
        de += o.de;
        di += o.di;
        draan += o.draan;
        du += o.du;
        return *this;
    }
    friend RelativeElements operator+(RelativeElements l, const RelativeElements& r) { return l += r; }
    friend RelativeElements operator-(const RelativeElements& l, const RelativeElements& r) {
        return {l.da - r.da, l.de - r.de, l.di - r.di, l.draan - r.draan, l.du - r.du};
    }
    friend RelativeElements operator*(double s, const RelativeElements& r) {
        return {s * r.da, s * r.de, s * r.di, s * r.draan, s * r.du};
    }
};

/// J2 secular drift of the mean angles [rad/s]. `mean_anomaly_dot` includes n.
struct SecularRates {
    double raan_dot = 0.0;
    double argp_dot = 0.0;
    double mean_anomaly_dot = 0.0;

    [[nodiscard]] double arglat_dot() const { return argp_dot + mean_anomaly_dot; }
};

// ---------------------------------------------------------------------------
// Angle helpers
// ---------------------------------------------------------------------------

template <typename Scalar>
Scalar wrap_two_pi(Scalar angle) {
    using std::fmod;
    Scalar w = fmod(angle, Scalar(kTwoPi));
    if (w < Scalar(0)) w += Scalar(kTwoPi);
    if (w >= Scalar(kTwoPi)) w -= Scalar(kTwoPi);
    return w;
}

/// Wraps to (-pi, pi].
template <typename Scalar>
Scalar wrap_pi(Scalar angle) {
    Scalar w = wrap_two_pi(angle);
    if (w > Scalar(kPi)) w -= Scalar(kTwoPi);
    return w;
}

double true_to_eccentric(double ta, double e);
double eccentric_to_true(double ea, double e);
double eccentric_to_mean(double ea, double e);
/// Solves Kepler's equation by Newton iteration.
double mean_to_eccentric(double ma, double e);
double true_to_mean(double ta, double e);
double mean_to_true(double ma, double e);

// ---------------------------------------------------------------------------
// Frames
// ---------------------------------------------------------------------------

/// RSW basis for a position/velocity pair; throws DomainError for a
/// rectilinear orbit.
template <typename Derived1, typename Derived2>
Eigen::Matrix<typename Derived1::Scalar, 3, 3> rsw_basis(const Eigen::MatrixBase<Derived1>& r,
                                                         const Eigen::MatrixBase<Derived2>& v) {
    using Scalar = typename Derived1::Scalar;
    const Eigen::Matrix<Scalar, 3, 1> h = r.cross(v);
    if (r.norm() <= Scalar(0) || h.norm() <= Scalar(0)) throw DomainError("undefined RSW frame");
    Eigen::Matrix<Scalar, 3, 3> basis;
    basis.col(0) = r.normalized();
    basis.col(2) = h.normalized();
    basis.col(1) = basis.col(2).cross(basis.col(0));
    return basis;
}

RswFrame rsw_frame(const EciState& state);

/// Chaser relative to target in the target's rotating RSW frame.
RelativeState eci_to_relative(const EciState& target, const EciState& chaser);
/// Inverse of eci_to_relative; the chaser inherits the target's mass.
EciState relative_to_eci(const EciState& target, const RelativeState& rel);

/// Rotates a vector given in the RSW frame of `state` into ECI.
Vec3 rsw_to_eci(const EciState& state, const Vec3& rsw);

// ---------------------------------------------------------------------------
// Element conversions
// ---------------------------------------------------------------------------

OrbitalElements cart_to_elements(const EciState& state, const GravityConstants& g = {});
EciState elements_to_cart(const OrbitalElements& oe, const GravityConstants& g = {}, double epoch = 0.0,
                          double mass = 1.0);

/// First-order J2 osculating -> mean mapping (Brouwer-Lyddane form).
OrbitalElements osc_to_mean(const OrbitalElements& osc, const GravityConstants& g = {});
/// First-order J2 mean -> osculating mapping.
OrbitalElements mean_to_osc(const OrbitalElements& mean, const GravityConstants& g = {});

SecularRates secular_rates(const OrbitalElements& mean, const GravityConstants& g = {});

RelativeElements relative_elements(const OrbitalElements& chaser, const OrbitalElements& target);

}  // namespace rpo
