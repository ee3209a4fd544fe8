#pragma once

#include "rpo/constants.hpp"

namespace rpo {

/// Chaser position/velocity in the target's rotating RSW frame.
/// x is radial, y along-track, z cross-track [km, km/s].
struct RelativeState {
    double epoch = 0.0;
    Vec3 position = Vec3::Zero();
    Vec3 velocity = Vec3::Zero();

    [[nodiscard]] double x() const { return position.x(); }
    [[nodiscard]] double y() const { return position.y(); }
    [[nodiscard]] double z() const { return position.z(); }
    [[nodiscard]] double xdot() const { return velocity.x(); }
    [[nodiscard]] double ydot() const { return velocity.y(); }
    [[nodiscard]] double zdot() const { return velocity.z(); }

    [[nodiscard]] Vec6 stacked() const {
        Vec6 s;
        s << position, velocity;
        return s;
    }

    static RelativeState from_stacked(const Vec6& s, double epoch = 0.0) {
        return {epoch, s.head<3>(), s.tail<3>()};
    }
};

}  // namespace rpo
