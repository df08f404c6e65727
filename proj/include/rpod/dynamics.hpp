#ifndef RPOD_DYNAMICS_HPP
#define RPOD_DYNAMICS_HPP

#include "rpod/core.hpp"
#include "rpod/frames.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <vector>

namespace rpod {

/**
 * @brief Circular chief orbit, propagated in closed form.
 *
 * The orbit lies in the ECI equatorial plane, starts on +X at t = 0 and
 * moves prograde about +Z. Any other orientation is equivalent for a
 * circular chief; this one makes the Hill z-axis coincide with ECI k.
 */
class TargetOrbit {
public:
    TargetOrbit(double radius, double mu = kMuEarth) : mu_(mu), radius_(radius) {
        if (!(radius > kEarthRadius) || !std::isfinite(radius)) {
            throw Error(ErrorKind::InvalidArgument, "chief radius must exceed the Earth radius");
        }
        if (!(mu > 0.0) || !std::isfinite(mu)) {
            throw Error(ErrorKind::InvalidArgument, "gravitational parameter must be positive");
        }
    }

    static TargetOrbit from_altitude(double altitude, double mu = kMuEarth) {
        return TargetOrbit(kEarthRadius + altitude, mu);
    }

    double mu() const { return mu_; }
    double radius() const { return radius_; }
    double mean_motion() const { return std::sqrt(mu_ / (radius_ * radius_ * radius_)); }
    double period() const { return kTwoPi / mean_motion(); }
    double speed() const { return radius_ * mean_motion(); }

    InertialState state_at(double t) const {
        const double n = mean_motion();
        const double c = std::cos(n * t);
        const double s = std::sin(n * t);
        InertialState st;
        st.epoch = t;
        st.position = Vec3(radius_ * c, radius_ * s, 0.0);
        st.velocity = Vec3(-speed() * s, speed() * c, 0.0);
        return st;
    }

private:
    double mu_;
    double radius_;
};

/// Time derivative of an inertial state.
struct StateDerivative {
    Vec3 velocity;
    Vec3 acceleration;
};

// Point-mass gravity plus an applied control acceleration.
inline StateDerivative two_body_derivative(const InertialState& state, double mu,
                                           const Vec3& control_accel = Vec3::Zero()) {
    const double r = state.position.norm();
    if (!(r >= 1.0)) {
        throw Error(ErrorKind::SingularRadius, "radius below 1 km");
    }
    return {state.velocity, -(mu / (r * r * r)) * state.position + control_accel};
}

/// Error-control settings for the adaptive integrator.
struct StepControl {
    double abs_tol = 1e-12;
    double rel_tol = 1e-12;
    double initial_step = 10.0; // s
    std::size_t max_steps = 2'000'000;
};

/// Constant acceleration applied from `start` (offset from the initial epoch) until the next segment.
struct ControlSegment {
    double start = 0.0;
    Vec3 accel = Vec3::Zero();
};
using ControlSchedule = std::vector<ControlSegment>;

namespace detail {

using OdeState = std::array<double, 6>;

inline OdeState pack(const InertialState& s) {
    return {s.position.x(), s.position.y(), s.position.z(), s.velocity.x(), s.velocity.y(), s.velocity.z()};
}

inline InertialState unpack(const OdeState& x, double epoch) {
    InertialState s;
    s.epoch = epoch;
    s.position = Vec3(x[0], x[1], x[2]);
    s.velocity = Vec3(x[3], x[4], x[5]);
    return s;
}

inline bool all_finite(const OdeState& x) {
    return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
}

} // namespace detail

/**
 * @brief Integrate the two-body equations with a Dormand-Prince 5(4) scheme.
 *
 * Returns one state per entry of `sample_offsets` (seconds after
 * `initial.epoch`, each within [0, duration]), or just the final state when
 * no samples are requested. Piecewise-constant control is honoured by
 * restarting the integrator at every breakpoint; impulses are not handled
 * here.
 */
inline std::vector<InertialState> propagate_two_body(const InertialState& initial, double mu, double duration,
                                                     std::span<const double> sample_offsets = {},
                                                     const ControlSchedule& control = {},
                                                     const StepControl& step = {}) {
    namespace odeint = boost::numeric::odeint;
    using detail::OdeState;

    if (!(duration >= 0.0) || !std::isfinite(duration)) {
        throw Error(ErrorKind::InvalidArgument, "duration must be finite and non-negative");
    }
    for (double s : sample_offsets) {
        if (!(s >= 0.0 && s <= duration)) {
            throw Error(ErrorKind::InvalidArgument, "sample offset outside [0, duration]");
        }
    }
    two_body_derivative(initial, mu); // radius guard on entry

    // Breakpoints where the control changes.
    std::vector<double> breaks{0.0};
    for (const auto& seg : control) {
        if (seg.start > 0.0 && seg.start < duration) breaks.push_back(seg.start);
    }
    breaks.push_back(duration);
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

    auto accel_at = [&](double t) {
        Vec3 a = Vec3::Zero();
        double latest = -1.0;
        for (const auto& seg : control) {
            if (seg.start <= t && seg.start >= latest) {
                latest = seg.start;
                a = seg.accel;
            }
        }
        return a;
    };

    std::vector<double> samples(sample_offsets.begin(), sample_offsets.end());
    const bool final_only = samples.empty();
    if (final_only) samples.push_back(duration);
    std::vector<std::size_t> order(samples.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return samples[a] < samples[b]; });

    std::vector<InertialState> out(samples.size());
    std::size_t next = 0;
    OdeState x = detail::pack(initial);

    auto emit_until = [&](double t_hi, auto&& state_at) {
        while (next < order.size() && samples[order[next]] <= t_hi) {
            out[order[next]] = detail::unpack(state_at(samples[order[next]]), initial.epoch + samples[order[next]]);
            ++next;
        }
    };

    emit_until(0.0, [&](double) { return x; });

    std::size_t steps = 0;
    try {
        for (std::size_t b = 0; b + 1 < breaks.size(); ++b) {
            const double t0 = breaks[b];
            const double t1 = breaks[b + 1];
            const Vec3 u = accel_at(t0);
            auto system = [&](const OdeState& s, OdeState& ds, double) {
                const Vec3 r(s[0], s[1], s[2]);
                const double rn = r.norm();
                if (!(rn >= 1.0)) throw Error(ErrorKind::SingularRadius, "radius below 1 km");
                const Vec3 a = -(mu / (rn * rn * rn)) * r + u;
                ds = {s[3], s[4], s[5], a.x(), a.y(), a.z()};
            };

            auto stepper = odeint::make_dense_output(step.abs_tol, step.rel_tol,
                                                     odeint::runge_kutta_dopri5<OdeState>());
            const double span = t1 - t0;
            const double end_slack = 1e-13 * std::max(1.0, std::abs(t1));
            stepper.initialize(x, t0, std::min(step.initial_step, span));
            while (stepper.current_time() < t1 - end_slack) {
                const double t = stepper.current_time();
                if (t + stepper.current_time_step() > t1) {
                    stepper.initialize(stepper.current_state(), t, t1 - t);
                }
                stepper.do_step(system);
                if (++steps > step.max_steps) {
                    throw Error(ErrorKind::StepSizeUnderflow, "step budget exhausted");
                }
                if (!detail::all_finite(stepper.current_state())) {
                    throw Error(ErrorKind::StepSizeUnderflow, "integration produced non-finite state");
                }
                const double dt_taken = stepper.current_time() - stepper.previous_time();
                if (!(dt_taken > 1e-12 * std::max(1.0, std::abs(t)))) {
                    throw Error(ErrorKind::StepSizeUnderflow, "step size underflow");
                }
                const double t_now = stepper.current_time();
                const bool segment_done = !(t_now < t1 - end_slack);
                // Samples beyond the step end (within slack) take the step-end state.
                emit_until(segment_done ? t1 : t_now, [&](double ts) {
                    if (ts >= t_now) return stepper.current_state();
                    OdeState xi;
                    stepper.calc_state(ts, xi);
                    return xi;
                });
            }
            if (span > 0.0) x = stepper.current_state();
            emit_until(t1, [&](double) { return x; });
        }
    } catch (const odeint::odeint_error& e) {
        throw Error(ErrorKind::StepSizeUnderflow, e.what());
    }
    return out;
}

/// Final state only.
inline InertialState propagate_two_body_to(const InertialState& initial, double mu, double duration,
                                           const StepControl& step = {}) {
    return propagate_two_body(initial, mu, duration, {}, {}, step).front();
}

/// Right-hand side of the linear CW equations; returns (vx, vy, vz, ax, ay, az).
inline Vec6 cw_derivative(const RelativeState& rel, double n, const Vec3& control_accel = Vec3::Zero()) {
    Vec6 d;
    d << rel.vx, rel.vy, rel.vz,
        3.0 * n * n * rel.x + 2.0 * n * rel.vy + control_accel.x(),
        -2.0 * n * rel.vx + control_accel.y(),
        -n * n * rel.z + control_accel.z();
    return d;
}

/// Closed-form CW state-transition matrix over `dt`.
struct CwStm {
    Mat6 stm = Mat6::Identity();
    double dt = 0.0;
    double n = 0.0;

    RelativeState apply(const RelativeState& rel) const { return RelativeState::from_vector(stm * rel.as_vector()); }

    // In-plane blocks used for targeting: [x_f, y_f] = position_block [x0, y0] + velocity_block [vx0, vy0].
    Eigen::Matrix2d in_plane_position_block() const {
        Eigen::Matrix2d m;
        m << stm(0, 0), stm(0, 1), stm(1, 0), stm(1, 1);
        return m;
    }
    Eigen::Matrix2d in_plane_velocity_block() const {
        Eigen::Matrix2d m;
        m << stm(0, 3), stm(0, 4), stm(1, 3), stm(1, 4);
        return m;
    }
};

inline CwStm cw_stm(double n, double dt) {
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw Error(ErrorKind::InvalidArgument, "mean motion must be positive");
    }
    const double nt = n * dt;
    const double s = std::sin(nt);
    const double c = std::cos(nt);

    CwStm out;
    out.dt = dt;
    out.n = n;
    Mat6& m = out.stm;
    m.setZero();
    // x
    m(0, 0) = 4.0 - 3.0 * c;
    m(0, 3) = s / n;
    m(0, 4) = 2.0 * (1.0 - c) / n;
    // y
    m(1, 0) = 6.0 * (s - nt);
    m(1, 1) = 1.0;
    m(1, 3) = 2.0 * (c - 1.0) / n;
    m(1, 4) = (4.0 * s - 3.0 * nt) / n;
    // z
    m(2, 2) = c;
    m(2, 5) = s / n;
    // vx
    m(3, 0) = 3.0 * n * s;
    m(3, 3) = c;
    m(3, 4) = 2.0 * s;
    // vy
    m(4, 0) = 6.0 * n * (c - 1.0);
    m(4, 3) = -2.0 * s;
    m(4, 4) = 4.0 * c - 3.0;
    // vz
    m(5, 2) = -n * s;
    m(5, 5) = c;
    return out;
}

inline RelativeState propagate_cw(const RelativeState& rel, double n, double dt) {
    return cw_stm(n, dt).apply(rel);
}

/// One sample of an executed trajectory.
struct TrajectorySample {
    double t = 0.0;
    InertialState target;
    InertialState chaser;
    RelativeState rel;
};

inline double specific_energy(const InertialState& s, double mu) {
    return 0.5 * s.velocity.squaredNorm() - mu / s.position.norm();
}

inline double specific_angular_momentum(const InertialState& s) {
    return s.position.cross(s.velocity).norm();
}

} // namespace rpod

#endif // RPOD_DYNAMICS_HPP
