#include "rpod/dynamics.hpp"
#include "rpod/frames.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace rpod;

namespace {

constexpr double kRadius = 8378.137; // 2000 km altitude

InertialState make_state(const Vec3& r, const Vec3& v, double epoch = 0.0) {
    InertialState s;
    s.epoch = epoch;
    s.position = r;
    s.velocity = v;
    return s;
}

void expect_vec_near(const Vec3& a, const Vec3& b, double tol) {
    EXPECT_LT((a - b).cwiseAbs().maxCoeff(), tol) << "a=" << a.transpose() << " b=" << b.transpose();
}

} // namespace

TEST(HillBasis, AxisAligned) {
    const double vc = std::sqrt(kMuEarth / kRadius);
    const HillBasis b = hill_basis(make_state({kRadius, 0, 0}, {0, vc, 0}));
    expect_vec_near(b.radial(), {1, 0, 0}, 1e-15);
    expect_vec_near(b.along_track(), {0, 1, 0}, 1e-15);
    expect_vec_near(b.cross_track(), {0, 0, 1}, 1e-15);
}

TEST(HillBasis, QuarterOrbit) {
    const double vc = std::sqrt(kMuEarth / kRadius);
    const HillBasis b = hill_basis(make_state({0, kRadius, 0}, {-vc, 0, 0}));
    expect_vec_near(b.radial(), {0, 1, 0}, 1e-15);
    expect_vec_near(b.along_track(), {-1, 0, 0}, 1e-15);
    expect_vec_near(b.cross_track(), {0, 0, 1}, 1e-15);
}

TEST(HillBasis, FortyFiveDegreesMatchesExplicitRotation) {
    // Oracle: rotate the axis-aligned basis by 45 degrees about k.
    const Mat3 rz = Eigen::AngleAxisd(kPi / 4.0, Vec3::UnitZ()).toRotationMatrix();
    const double vc = std::sqrt(kMuEarth / kRadius);
    const Vec3 r = rz * Vec3(kRadius, 0, 0);
    const Vec3 v = rz * Vec3(0, vc, 0);
    const HillBasis b = hill_basis(make_state(r, v));
    EXPECT_LT((b.rotation - rz.transpose()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(HillBasis, CircularAngularRates) {
    const TargetOrbit chief(kRadius);
    for (double t : {0.0, 1234.5, 5000.0}) {
        const HillBasis b = hill_basis(chief.state_at(t));
        const double n = std::sqrt(kMuEarth / std::pow(kRadius, 3));
        EXPECT_NEAR(b.angular_velocity.z(), n, 1e-12 * n);
        EXPECT_EQ(b.angular_velocity.x(), 0.0);
        EXPECT_EQ(b.angular_velocity.y(), 0.0);
        EXPECT_LT(b.angular_acceleration.norm(), 1e-18);
    }
}

TEST(HillBasis, EccentricTargetHasAngularAcceleration) {
    // Receding from perigee: the frame rate is dropping.
    const HillBasis b = hill_basis(make_state({kRadius, 0, 0}, {0.5, 7.5, 0}));
    EXPECT_LT(b.angular_acceleration.z(), 0.0);
}

TEST(HillBasis, DegenerateOrbitThrows) {
    try {
        hill_basis(make_state({kRadius, 0, 0}, {1.0, 0, 0}));
        FAIL() << "expected DegenerateOrbit";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::DegenerateOrbit);
    }
    try {
        hill_basis(make_state({0, 0, 0}, {0, 7, 0}));
        FAIL() << "expected DegenerateOrbit";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::DegenerateOrbit);
    }
}

TEST(HillBasis, OrthonormalRightHandedProperty) {
    auto g = test::rng();
    for (int i = 0; i < 1000; ++i) {
        const InertialState s = test::random_orbit_state(g);
        const HillBasis b = hill_basis(s);
        const double ortho = (b.rotation.transpose() * b.rotation - Mat3::Identity()).cwiseAbs().maxCoeff();
        ASSERT_LT(ortho, 1e-12);
        ASSERT_NEAR(b.rotation.determinant(), 1.0, 1e-12);
        // Cross-track axis is the target angular momentum direction.
        const Vec3 h = s.position.cross(s.velocity).normalized();
        ASSERT_LT((b.cross_track() - h).norm(), 1e-12);
    }
}

TEST(EciToHill, CoincidentSatellitesGiveZero) {
    const InertialState t = TargetOrbit(kRadius).state_at(321.0);
    const RelativeState rel = eci_to_hill(t, t);
    EXPECT_EQ(rel.as_vector().cwiseAbs().maxCoeff(), 0.0);
}

TEST(EciToHill, RadialOffsetTransportTerm) {
    // Oracle (30-digit arithmetic): sqrt(mu/(R+1)) - sqrt(mu/R) - n*1.
    constexpr double kExpectedVy = -0.00123488354122002464;
    const double delta = 1.0;
    const InertialState t = make_state({kRadius, 0, 0}, {0, std::sqrt(kMuEarth / kRadius), 0});
    const InertialState c = make_state({kRadius + delta, 0, 0}, {0, std::sqrt(kMuEarth / (kRadius + delta)), 0});
    const RelativeState rel = eci_to_hill(t, c);
    EXPECT_NEAR(rel.x, delta, 1e-12);
    EXPECT_EQ(rel.y, 0.0);
    EXPECT_EQ(rel.z, 0.0);
    EXPECT_EQ(rel.vx, 0.0);
    EXPECT_EQ(rel.vz, 0.0);
    EXPECT_NEAR(rel.vy, kExpectedVy, 1e-14);
}

TEST(EciToHill, EpochMismatchThrows) {
    const TargetOrbit chief(kRadius);
    try {
        eci_to_hill(chief.state_at(0.0), chief.state_at(10.0));
        FAIL() << "expected EpochMismatch";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::EpochMismatch);
    }
}

TEST(HillToEci, ZeroRelativeStateIsTarget) {
    const InertialState t = TargetOrbit(kRadius).state_at(100.0);
    const InertialState c = hill_to_eci(t, {});
    EXPECT_EQ((c.position - t.position).norm(), 0.0);
    EXPECT_EQ((c.velocity - t.velocity).norm(), 0.0);
    EXPECT_EQ(c.epoch, t.epoch);
}

TEST(HillToEci, NmcInsertionMatchesIndependentConstruction) {
    // Oracle: position offset along +X, velocity = v_t + (-2 n x0) j + (n k) x (x0 i).
    constexpr double kExpectedVy = 6.89673151092768276;
    const TargetOrbit chief(kRadius);
    const double n = chief.mean_motion();
    const RelativeState rel{1.0, 0.0, 0.0, 0.0, -2.0 * n, 0.0};
    const InertialState c = hill_to_eci(chief.state_at(0.0), rel);
    expect_vec_near(c.position, {kRadius + 1.0, 0, 0}, 1e-12);
    expect_vec_near(c.velocity, {0, kExpectedVy, 0}, 2e-15);
    // And back.
    const RelativeState back = eci_to_hill(chief.state_at(0.0), c);
    EXPECT_LT((back.as_vector() - rel.as_vector()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(FrameRoundTrip, HillEciHillProperty) {
    auto g = test::rng(7);
    double worst_pos = 0.0, worst_vel = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const InertialState t = test::random_orbit_state(g);
        const Vec3 rho = test::uniform(g, 0.0, 500.0) * test::random_unit(g);
        const Vec3 v = test::uniform(g, 0.0, 0.5) * test::random_unit(g);
        const RelativeState rel = RelativeState::from_parts(rho, v);
        const RelativeState back = eci_to_hill(t, hill_to_eci(t, rel));
        worst_pos = std::max(worst_pos, (back.position() - rel.position()).cwiseAbs().maxCoeff());
        worst_vel = std::max(worst_vel, (back.velocity() - rel.velocity()).cwiseAbs().maxCoeff());
    }
    EXPECT_LT(worst_pos, 1e-12);
    EXPECT_LT(worst_vel, 1e-15);
}

TEST(FrameRoundTrip, EciHillEciProperty) {
    auto g = test::rng(11);
    double worst_pos = 0.0, worst_vel = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const InertialState t = test::random_orbit_state(g);
        InertialState c = t;
        c.position += test::uniform(g, 0.0, 500.0) * test::random_unit(g);
        c.velocity += test::uniform(g, 0.0, 0.5) * test::random_unit(g);
        const InertialState back = hill_to_eci(t, eci_to_hill(t, c));
        worst_pos = std::max(worst_pos, (back.position - c.position).cwiseAbs().maxCoeff());
        worst_vel = std::max(worst_vel, (back.velocity - c.velocity).cwiseAbs().maxCoeff());
    }
    EXPECT_LT(worst_pos, 1e-12);
    EXPECT_LT(worst_vel, 1e-15);
}
