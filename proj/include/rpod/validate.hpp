#ifndef RPOD_VALIDATE_HPP
#define RPOD_VALIDATE_HPP

#include "rpod/campaign.hpp"
#include "rpod/dynamics.hpp"
#include "rpod/frames.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace rpod {

struct CheckResult {
    std::string name;
    bool passed = false;
    double residual = std::numeric_limits<double>::quiet_NaN();
    double tolerance = 0.0;
    std::string note; // exception text when the check could not run
};

struct ValidationReport {
    std::vector<CheckResult> checks;

    bool all_passed() const {
        for (const auto& c : checks) {
            if (!c.passed) return false;
        }
        return !checks.empty();
    }
};

/**
 * @brief Self-test: zero-mismatch baselines, conservation laws, STM identities
 * and frame round trips.
 *
 * `mu` is injectable so a poisoned constant can be shown to fail.
 */
inline ValidationReport validate_suite(double mu = kMuEarth) {
    ValidationReport report;
    auto run = [&](std::string name, double tolerance, const std::function<double()>& body) {
        CheckResult c;
        c.name = std::move(name);
        c.tolerance = tolerance;
        try {
            c.residual = body();
            c.passed = c.residual < tolerance; // NaN fails
        } catch (const std::exception& e) {
            c.note = e.what();
        }
        report.checks.push_back(c);
    };

    const double radius = kEarthRadius + 2000.0;
    auto circular = [&] {
        InertialState s;
        s.position = Vec3(radius, 0.0, 0.0);
        s.velocity = Vec3(0.0, std::sqrt(mu / radius), 0.0);
        return s;
    };
    const double period = kTwoPi * std::sqrt(radius * radius * radius / mu);

    run("cw_truth_nmc_zero_dv", 1e-9, [&] {
        CampaignConfig c;
        c.kind = ManeuverKind::NmcUnforced;
        c.truth = TruthModel::Cw;
        c.size = 10.0;
        c.impulse_count = 16;
        c.mu = mu;
        return run_campaign(c).total_dv;
    });

    run("two_body_period_closure_km", 1e-6, [&] {
        const InertialState s0 = circular();
        const InertialState s1 = propagate_two_body_to(s0, mu, period);
        return (s1.position - s0.position).norm();
    });

    {
        std::vector<InertialState> ten;
        std::string failure;
        try {
            std::vector<double> offsets;
            for (int k = 1; k <= 10; ++k) offsets.push_back(k * period);
            if (!std::isfinite(period)) throw Error(ErrorKind::InvalidArgument, "non-finite period");
            ten = propagate_two_body(circular(), mu, 10.0 * period, offsets);
        } catch (const std::exception& e) {
            failure = e.what();
        }
        auto drift = [&](auto&& quantity) {
            if (!failure.empty()) throw std::runtime_error(failure);
            const double q0 = quantity(circular());
            double worst = 0.0;
            for (const auto& s : ten) worst = std::max(worst, std::abs(quantity(s) - q0) / std::abs(q0));
            return std::isfinite(q0) ? worst : std::numeric_limits<double>::quiet_NaN();
        };
        run("energy_drift_10_periods_rel", 1e-10,
            [&] { return drift([&](const InertialState& s) { return specific_energy(s, mu); }); });
        run("angular_momentum_drift_10_periods_rel", 1e-10,
            [&] { return drift([](const InertialState& s) { return specific_angular_momentum(s); }); });
    }

    run("cw_stm_identity_at_zero", 1e-15, [&] {
        const TargetOrbit chief(radius, mu);
        return (cw_stm(chief.mean_motion(), 0.0).stm - Mat6::Identity()).cwiseAbs().maxCoeff();
    });

    run("cw_stm_group_property", 1e-10, [&] {
        const double n = TargetOrbit(radius, mu).mean_motion();
        const double a = 0.37 * period;
        const double b = 1.21 * period;
        return (cw_stm(n, a + b).stm - cw_stm(n, a).stm * cw_stm(n, b).stm).cwiseAbs().maxCoeff();
    });

    run("frame_round_trip_km", 1e-12, [&] {
        const TargetOrbit chief(radius, mu);
        double worst = 0.0;
        for (int k = 0; k < 8; ++k) {
            const InertialState target = chief.state_at(0.1 * k * period);
            const RelativeState rel{1.0 + k, -50.0 * k, 0.3 * k, 1e-3, -2e-3 * k, 1e-4};
            const RelativeState back = eci_to_hill(target, hill_to_eci(target, rel));
            worst = std::max(worst, (back.position() - rel.position()).norm());
        }
        return worst;
    });

    return report;
}

} // namespace rpod

#endif // RPOD_VALIDATE_HPP
