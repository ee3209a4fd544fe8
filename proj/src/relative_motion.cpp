#include "rpo/relative_motion.hpp"

#include <algorithm>
#include <cmath>

namespace rpo {

RelativeState cw_propagate(const RelativeState& s0, const CwContext& ctx, double t) {
    if (t < 0.0) throw DomainError("cw_propagate requires t >= 0");
    const Vec6 s = cw_transition_matrix(ctx.n, t) * s0.stacked();
    return RelativeState::from_stacked(s, s0.epoch + t);
}

StaticEllipseCheck is_static_ellipse(const RelativeState& s, const CwContext& ctx, double tolerance) {
    const double rx = s.xdot() - 0.5 * ctx.n * s.y();
    const double ry = s.ydot() + 2.0 * ctx.n * s.x();
    return {std::abs(rx) <= tolerance && std::abs(ry) <= tolerance, {rx, ry}};
}

RelativeState design_safety_ellipse(double radial_extent, double crosstrack_extent, const CwContext& ctx) {
    if (radial_extent < 0.0 || crosstrack_extent < 0.0) throw DomainError("ellipse extents must be non-negative");
    const double x0 = 0.5 * radial_extent;
    RelativeState s;
    s.position = Vec3(x0, 0.0, 0.5 * crosstrack_extent);
    s.velocity = Vec3(0.0, -2.0 * ctx.n * x0, 0.0);
    return s;
}

RelativeState design_walking_safety_ellipse(const RelativeState& base, double drift_rate, const CwContext& ctx) {
    // A radial center offset xc drifts the center by -3 pi xc per period.
    const double xc = -drift_rate / (3.0 * kPi);
    RelativeState s = base;
    s.position.x() += xc;
    s.velocity.y() += -1.5 * ctx.n * xc;
    return s;
}

EllipseGeometry measure_ellipse(std::span<const RelativeState> trajectory, const CwContext& ctx) {
    if (trajectory.size() < 4) throw DomainError("trajectory too short to measure an ellipse");
    const double period = ctx.period();
    const double t_end = trajectory.back().epoch;
    if (t_end - trajectory.front().epoch < period * (1.0 - 1e-9)) {
        throw DomainError("trajectory spans less than one orbital period");
    }
    const double t_begin = t_end - period;
    auto first = std::find_if(trajectory.begin(), trajectory.end(),
                              [&](const RelativeState& s) { return s.epoch >= t_begin - 1e-9; });
    const std::span<const RelativeState> window(first, trajectory.end());
    const double t_mid = 0.5 * (t_begin + t_end);

    // y = c0 + c1 (t - t_mid) + c2 cos(n t) + c3 sin(n t)
    const auto rows = static_cast<Eigen::Index>(window.size());
    Eigen::MatrixXd basis(rows, 4);
    Eigen::VectorXd ys(rows);
    for (Eigen::Index k = 0; k < rows; ++k) {
        const double t = window[k].epoch;
        basis.row(k) << 1.0, t - t_mid, std::cos(ctx.n * t), std::sin(ctx.n * t);
        ys(k) = window[k].y();
    }
    const Eigen::Vector4d coef = basis.colPivHouseholderQr().solve(ys);

    double xmin = window.front().x(), xmax = xmin;
    double zmin = window.front().z(), zmax = zmin;
    double ymin = 0.0, ymax = 0.0;
    bool first_sample = true;
    for (const auto& s : window) {
        xmin = std::min(xmin, s.x());
        xmax = std::max(xmax, s.x());
        zmin = std::min(zmin, s.z());
        zmax = std::max(zmax, s.z());
        const double detrended = s.y() - coef(1) * (s.epoch - t_mid);
        ymin = first_sample ? detrended : std::min(ymin, detrended);
        ymax = first_sample ? detrended : std::max(ymax, detrended);
        first_sample = false;
    }
    return {xmax - xmin, ymax - ymin, zmax - zmin, coef(0), coef(1) * period};
}

EllipseGeometry relative_elements_to_geometry(const RelativeElements& delta, const OrbitalElements& target) {
    const double a = target.a;
    EllipseGeometry g;
    g.radial_extent = 2.0 * a * std::abs(delta.de);
    g.alongtrack_extent = 4.0 * a * std::abs(delta.de);
    const double out_of_plane = std::hypot(delta.di, delta.draan * std::sin(target.i));
    g.crosstrack_extent = 2.0 * a * out_of_plane;
    g.center_y = a * (delta.du + delta.draan * std::cos(target.i));
    g.center_drift_rate = -3.0 * kPi * delta.da;
    return g;
}

RelativeState relative_elements_to_cw_state(const RelativeElements& delta, const OrbitalElements& target,
                                            const GravityConstants& g) {
    OrbitalElements chaser = target;
    chaser.a += delta.da;
    chaser.e += delta.de;
    chaser.i += delta.di;
    chaser.raan = wrap_two_pi(chaser.raan + delta.draan);
    chaser.ta = wrap_two_pi(chaser.ta + delta.du);
    const GravityConstants two_body = g.without_j2();
    return eci_to_relative(elements_to_cart(target, two_body), elements_to_cart(chaser, two_body));
}

}  // namespace rpo
