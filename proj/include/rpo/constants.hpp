#pragma once

#include <Eigen/Dense>
#include <numbers>

namespace rpo {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kDeg = std::numbers::pi / 180.0;
inline constexpr double kSecondsPerDay = 86400.0;
/// Standard gravity used in the rocket equation [m/s^2].
inline constexpr double kG0 = 9.80665;

/// Earth gravity model: mu [km^3/s^2], equatorial radius [km], J2.
struct GravityConstants {
    double mu = 398600.4418;
    double re = 6378.137;
    double j2 = 1.08262668e-3;

    [[nodiscard]] GravityConstants without_j2() const {
        GravityConstants g = *this;
        g.j2 = 0.0;
        return g;
    }
};

inline constexpr double deg2rad(double deg) { return deg * kDeg; }
inline constexpr double rad2deg(double rad) { return rad / kDeg; }

}  // namespace rpo
