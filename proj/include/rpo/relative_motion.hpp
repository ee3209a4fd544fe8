#pragma once

#include <cmath>
#include <span>
#include <utility>

#include "rpo/orbital_core.hpp"
#include "rpo/relative_state.hpp"

namespace rpo {

/// Linearized (Hill / Clohessy-Wiltshire) dynamics about a circular orbit.
struct CwContext {
    double n = 0.0;  ///< target mean motion [rad/s]

    [[nodiscard]] double period() const { return kTwoPi / n; }
    static CwContext from_radius(double radius_km, const GravityConstants& g = {}) {
        return {std::sqrt(g.mu / (radius_km * radius_km * radius_km))};
    }
};

/// Peak-to-peak relative-orbit dimensions [km]; drift is per orbital period.
struct EllipseGeometry {
    double radial_extent = 0.0;
    double alongtrack_extent = 0.0;
    double crosstrack_extent = 0.0;
    double center_y = 0.0;
    double center_drift_rate = 0.0;
};

/// Relative distance above which the linearization is flagged as unreliable.
inline constexpr double kCwValidityRange = 500.0;

/// Closed-form state-transition matrix of the unforced Hill equations,
/// state ordered (x, y, z, xdot, ydot, zdot).
template <typename Scalar>
Eigen::Matrix<Scalar, 6, 6> cw_transition_matrix(Scalar n, Scalar t) {
    using std::cos;
    using std::sin;
    const Scalar s = sin(n * t);
    const Scalar c = cos(n * t);
    Eigen::Matrix<Scalar, 6, 6> phi = Eigen::Matrix<Scalar, 6, 6>::Zero();
    phi(0, 0) = Scalar(4) - Scalar(3) * c;
    phi(0, 3) = s / n;
    phi(0, 4) = Scalar(2) * (Scalar(1) - c) / n;
    phi(1, 0) = Scalar(6) * (s - n * t);
    phi(1, 1) = Scalar(1);
    phi(1, 3) = -Scalar(2) * (Scalar(1) - c) / n;
    phi(1, 4) = (Scalar(4) * s - Scalar(3) * n * t) / n;
    phi(2, 2) = c;
    phi(2, 5) = s / n;
    phi(3, 0) = Scalar(3) * n * s;
    phi(3, 3) = c;
    phi(3, 4) = Scalar(2) * s;
    phi(4, 0) = -Scalar(6) * n * (Scalar(1) - c);
    phi(4, 3) = -Scalar(2) * s;
    phi(4, 4) = Scalar(4) * c - Scalar(3);
    phi(5, 2) = -n * s;
    phi(5, 5) = c;
    return phi;
}

/// Time derivative of the Hill equations with optional control acceleration.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, 6, 1> cw_derivative(const Eigen::MatrixBase<Derived>& s,
                                                           typename Derived::Scalar n,
                                                           const Eigen::Matrix<typename Derived::Scalar, 3, 1>& u =
                                                               Eigen::Matrix<typename Derived::Scalar, 3, 1>::Zero()) {
    using Scalar = typename Derived::Scalar;
    Eigen::Matrix<Scalar, 6, 1> d;
    d.template head<3>() = s.template tail<3>();
    d(3) = Scalar(2) * n * s(4) + Scalar(3) * n * n * s(0) + u(0);
    d(4) = -Scalar(2) * n * s(3) + u(1);
    d(5) = -n * n * s(2) + u(2);
    return d;
}

RelativeState cw_propagate(const RelativeState& s0, const CwContext& ctx, double t);

struct StaticEllipseCheck {
    bool satisfied = false;
    /// (xdot - n/2 y, ydot + 2 n x) [km/s]
    std::pair<double, double> residuals;
};

StaticEllipseCheck is_static_ellipse(const RelativeState& s, const CwContext& ctx, double tolerance = 1e-6);

/// Centered static ellipse with in-phase cross-track motion so the x-y plane
/// is crossed at the radial extrema.
RelativeState design_safety_ellipse(double radial_extent, double crosstrack_extent, const CwContext& ctx);

/// Adds a steady along-track center drift [km per period] to a safety ellipse
/// while keeping its radial extent.
RelativeState design_walking_safety_ellipse(const RelativeState& base, double drift_rate, const CwContext& ctx);

/// Geometry of the most recent period of a uniformly or non-uniformly sampled
/// trajectory. Throws DomainError when the samples span less than one period.
EllipseGeometry measure_ellipse(std::span<const RelativeState> trajectory, const CwContext& ctx);

/// First-order mapping of mean relative elements to relative-orbit geometry.
EllipseGeometry relative_elements_to_geometry(const RelativeElements& delta, const OrbitalElements& target);

/// Cartesian relative state of a chaser whose two-body elements are the
/// target's offset by `delta` (shared argument of perigee).
RelativeState relative_elements_to_cw_state(const RelativeElements& delta, const OrbitalElements& target,
                                            const GravityConstants& g = {});

/// True when the relative distance is inside the linearization regime.
inline bool within_cw_regime(const RelativeState& s) { return s.position.norm() <= kCwValidityRange; }

}  // namespace rpo
