#ifndef RPOD_FRAMES_HPP
#define RPOD_FRAMES_HPP

#include "rpod/core.hpp"

#include <algorithm>
#include <cmath>

namespace rpod {

/// Satellite position and velocity in the Earth-centered inertial frame.
struct InertialState {
    double epoch = 0.0; // s since campaign start
    Vec3 position = Vec3::Zero(); // km
    Vec3 velocity = Vec3::Zero(); // km/s
};

/**
 * @brief Rotating Hill (radial / along-track / cross-track) frame of a target.
 *
 * Rows of `rotation` are the Hill unit vectors expressed in ECI, so
 * `rotation * v_eci` gives Hill components. The angular velocity and
 * acceleration of the frame relative to inertial space are expressed in
 * Hill axes.
 */
struct HillBasis {
    Mat3 rotation = Mat3::Identity();
    Vec3 angular_velocity = Vec3::Zero();     // rad/s
    Vec3 angular_acceleration = Vec3::Zero(); // rad/s^2

    Vec3 radial() const { return rotation.row(0).transpose(); }
    Vec3 along_track() const { return rotation.row(1).transpose(); }
    Vec3 cross_track() const { return rotation.row(2).transpose(); }
};

/// Chaser state relative to the target, in Hill components. Target sits at the origin.
struct RelativeState {
    double x = 0.0, y = 0.0, z = 0.0;    // km
    double vx = 0.0, vy = 0.0, vz = 0.0; // km/s

    Vec3 position() const { return {x, y, z}; }
    Vec3 velocity() const { return {vx, vy, vz}; }

    Vec6 as_vector() const {
        Vec6 s;
        s << x, y, z, vx, vy, vz;
        return s;
    }

    static RelativeState from_vector(const Vec6& s) { return {s(0), s(1), s(2), s(3), s(4), s(5)}; }

    static RelativeState from_parts(const Vec3& position, const Vec3& velocity) {
        return {position.x(), position.y(), position.z(), velocity.x(), velocity.y(), velocity.z()};
    }

    bool is_finite() const { return as_vector().allFinite(); }
};

inline HillBasis hill_basis(const InertialState& target) {
    const Vec3& r = target.position;
    const Vec3& v = target.velocity;
    const double r_norm = r.norm();
    if (!(r_norm > 0.0) || !r.allFinite() || !v.allFinite()) {
        throw Error(ErrorKind::DegenerateOrbit, "target position must be finite and non-zero");
    }
    const Vec3 h = r.cross(v);
    const double h_norm = h.norm();
    // Radial (or stationary) trajectory: the orbit plane is undefined.
    if (!(h_norm > 1e-12 * r_norm * v.norm())) {
        throw Error(ErrorKind::DegenerateOrbit, "r x v vanishes; Hill frame undefined");
    }

    const Vec3 i_r = r / r_norm;
    const Vec3 i_h = h / h_norm;
    const Vec3 i_theta = i_h.cross(i_r);

    HillBasis basis;
    basis.rotation.row(0) = i_r.transpose();
    basis.rotation.row(1) = i_theta.transpose();
    basis.rotation.row(2) = i_h.transpose();

    // Unperturbed Keplerian target: the frame turns about i_h at h/r^2.
    const double r2 = r_norm * r_norm;
    const double omega = h_norm / r2;
    const double r_dot = r.dot(v) / r_norm;
    basis.angular_velocity = Vec3(0.0, 0.0, omega);
    basis.angular_acceleration = Vec3(0.0, 0.0, -2.0 * omega * r_dot / r_norm);
    return basis;
}

namespace detail {
inline void require_same_epoch(const InertialState& a, const InertialState& b) {
    const double scale = std::max({1.0, std::abs(a.epoch), std::abs(b.epoch)});
    if (!(std::abs(a.epoch - b.epoch) <= 1e-9 * scale)) {
        throw Error(ErrorKind::EpochMismatch, "target and chaser epochs differ");
    }
}
} // namespace detail

/// Relative position and transport-theorem velocity of `chaser` in the target's Hill frame.
inline RelativeState eci_to_hill(const InertialState& target, const InertialState& chaser) {
    detail::require_same_epoch(target, chaser);
    const HillBasis basis = hill_basis(target);
    const Vec3 rho = basis.rotation * (chaser.position - target.position);
    const Vec3 rho_dot = basis.rotation * (chaser.velocity - target.velocity);
    const Vec3 v_rel = rho_dot - basis.angular_velocity.cross(rho);
    return RelativeState::from_parts(rho, v_rel);
}

inline InertialState hill_to_eci(const InertialState& target, const RelativeState& rel) {
    const HillBasis basis = hill_basis(target);
    const Vec3 rho = rel.position();
    const Vec3 rho_dot = rel.velocity() + basis.angular_velocity.cross(rho);
    InertialState chaser;
    chaser.epoch = target.epoch;
    chaser.position = target.position + basis.rotation.transpose() * rho;
    chaser.velocity = target.velocity + basis.rotation.transpose() * rho_dot;
    return chaser;
}

} // namespace rpod

#endif // RPOD_FRAMES_HPP
