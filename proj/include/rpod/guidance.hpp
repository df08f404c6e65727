#ifndef RPOD_GUIDANCE_HPP
#define RPOD_GUIDANCE_HPP

#include "rpod/core.hpp"
#include "rpod/dynamics.hpp"
#include "rpod/frames.hpp"

#include <cmath>
#include <optional>
#include <vector>

namespace rpod {

/// Guidance target: an in-plane Hill position to reach at absolute time `t`.
struct Waypoint {
    double t = 0.0;
    double x = 0.0;
    double y = 0.0;
    std::optional<double> z;

    Vec3 position() const { return {x, y, z.value_or(0.0)}; }
};

/// Instantaneous velocity change applied to the chaser, Hill components.
struct ImpulseRecord {
    double t = 0.0;
    Vec3 dv = Vec3::Zero();
    double magnitude = 0.0;

    static ImpulseRecord at(double t, const Vec3& dv) { return {t, dv, dv.norm()}; }
};

inline RelativeState nmc_initial_state(double x0, double n) {
    if (x0 == 0.0) throw Error(ErrorKind::ZeroOffset, "NMC offset x0 must be non-zero");
    if (!(n > 0.0)) throw Error(ErrorKind::InvalidArgument, "mean motion must be positive");
    return {x0, 0.0, 0.0, 0.0, -2.0 * n * x0, 0.0};
}

/**
 * @brief Scale-free determinant of the in-plane velocity block of the CW STM.
 *
 * |det B| / (||B||_F^2 / 2): equals 1 for a block with equal singular values
 * and vanishes at n*ts = 2*pi*k and the other isolated roots of
 * 8(1 - cos nt) = 3 nt sin nt.
 */
inline double relative_transfer_determinant(double n, double ts) {
    const Eigen::Matrix2d b = cw_stm(n, ts).in_plane_velocity_block();
    const double frob2 = b.squaredNorm();
    if (!(frob2 > 0.0)) return 0.0;
    return std::abs(b.determinant()) / (0.5 * frob2);
}

inline constexpr double kSingularTransferThreshold = 1e-12;

struct TargetingSolution {
    ImpulseRecord impulse;
    Eigen::Vector2d v0_plus = Eigen::Vector2d::Zero(); // post-burn (vx, vy)
};

/**
 * @brief Single-impulse in-plane CW transfer to `waypoint` after `ts` seconds.
 *
 * Solves the 2x2 velocity system of the in-plane CW solution for the
 * post-burn velocity. Out-of-plane motion is not targeted; the z channel of
 * the returned impulse is always zero.
 */
inline TargetingSolution cw_target_impulse(const RelativeState& rel_now, const Waypoint& waypoint, double ts,
                                           double n) {
    if (!(ts > 0.0) || !std::isfinite(ts)) {
        throw Error(ErrorKind::InvalidArgument, "transfer time must be positive");
    }
    const CwStm phi = cw_stm(n, ts);
    const Eigen::Matrix2d b = phi.in_plane_velocity_block();
    if (relative_transfer_determinant(n, ts) < kSingularTransferThreshold) {
        throw Error(ErrorKind::SingularTransferTime, "in-plane velocity block is singular at n*ts = " +
                                                         std::to_string(n * ts));
    }
    const Eigen::Vector2d p0(rel_now.x, rel_now.y);
    const Eigen::Vector2d pf(waypoint.x, waypoint.y);
    const Eigen::Vector2d v_plus = b.partialPivLu().solve(pf - phi.in_plane_position_block() * p0);

    TargetingSolution out;
    out.v0_plus = v_plus;
    out.impulse = ImpulseRecord::at(waypoint.t - ts, Vec3(v_plus.x() - rel_now.vx, v_plus.y() - rel_now.vy, 0.0));
    return out;
}

// Forced circumnavigation, clockwise in the x-y plane like an NMC with x0 > 0.
// The closing point (back at the start) is implied, not returned.
inline std::vector<Waypoint> waypoints_circle(double radius, int count, double period, double start_time = 0.0) {
    if (count < 3) throw Error(ErrorKind::InsufficientWaypoints, "circle needs at least 3 waypoints");
    if (!(radius > 0.0)) throw Error(ErrorKind::InvalidArgument, "radius must be positive");
    if (!(period > 0.0)) throw Error(ErrorKind::InvalidArgument, "period must be positive");
    std::vector<Waypoint> out;
    out.reserve(count);
    for (int k = 0; k < count; ++k) {
        const double angle = -kTwoPi * k / count;
        out.push_back({start_time + period * k / count, radius * std::cos(angle), radius * std::sin(angle), {}});
    }
    return out;
}

// Uniform-time samples of one lap of the CW natural motion ellipse.
inline std::vector<Waypoint> waypoints_nmc(double x0, double n, int count, double start_time = 0.0) {
    if (count < 3) throw Error(ErrorKind::InsufficientWaypoints, "NMC needs at least 3 waypoints");
    const RelativeState s0 = nmc_initial_state(x0, n);
    const double period = kTwoPi / n;
    std::vector<Waypoint> out;
    out.reserve(count);
    for (int k = 0; k < count; ++k) {
        const double dt = period * k / count;
        const RelativeState s = propagate_cw(s0, n, dt);
        out.push_back({start_time + dt, s.x, s.y, {}});
    }
    return out;
}

inline std::vector<Waypoint> waypoints_line(const Eigen::Vector2d& start, const Eigen::Vector2d& end, int count,
                                            double duration, double start_time = 0.0) {
    if (count < 2) throw Error(ErrorKind::InsufficientWaypoints, "line needs at least 2 waypoints");
    if (!(duration > 0.0)) throw Error(ErrorKind::InvalidArgument, "duration must be positive");
    std::vector<Waypoint> out;
    out.reserve(count);
    for (int k = 0; k < count; ++k) {
        const double f = static_cast<double>(k) / (count - 1);
        const Eigen::Vector2d p = (k == count - 1) ? end : Eigen::Vector2d(start + f * (end - start));
        out.push_back({start_time + f * duration, p.x(), p.y(), {}});
    }
    return out;
}

} // namespace rpod

#endif // RPOD_GUIDANCE_HPP
