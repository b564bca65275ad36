#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

namespace phaselock {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Wrap an angle into [0, 2*pi).
inline double wrap_angle(double x) {
    double y = std::fmod(x, two_pi);
    if (y < 0.0) y += two_pi;
    return y;
}

/// Circular distance between two angles, in [0, pi].
inline double circular_distance(double x, double y) {
    double d = std::fabs(wrap_angle(x) - wrap_angle(y));
    return d > std::numbers::pi ? two_pi - d : d;
}

inline int sign_of(double x) { return (x > 0.0) - (x < 0.0); }

} // namespace phaselock
