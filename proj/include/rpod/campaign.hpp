#ifndef RPOD_CAMPAIGN_HPP
#define RPOD_CAMPAIGN_HPP

#include "rpod/core.hpp"
#include "rpod/dynamics.hpp"
#include "rpod/frames.hpp"
#include "rpod/guidance.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace rpod {

enum class ManeuverKind { NmcUnforced, CircleForced, InterceptForced, InterceptUnforced };
enum class TruthModel { TwoBody, Cw };

inline std::string_view to_string(ManeuverKind kind) {
    switch (kind) {
    case ManeuverKind::NmcUnforced: return "nmc_unforced";
    case ManeuverKind::CircleForced: return "circle_forced";
    case ManeuverKind::InterceptForced: return "intercept_forced";
    case ManeuverKind::InterceptUnforced: return "intercept_unforced";
    }
    return "unknown";
}

inline std::string_view to_string(TruthModel model) {
    return model == TruthModel::TwoBody ? "two_body" : "cw";
}

inline ManeuverKind parse_maneuver_kind(std::string_view s) {
    for (auto k : {ManeuverKind::NmcUnforced, ManeuverKind::CircleForced, ManeuverKind::InterceptForced,
                   ManeuverKind::InterceptUnforced}) {
        if (to_string(k) == s) return k;
    }
    throw Error(ErrorKind::InvalidArgument, "unknown maneuver kind '" + std::string(s) + "'");
}

inline TruthModel parse_truth_model(std::string_view s) {
    if (s == "two_body") return TruthModel::TwoBody;
    if (s == "cw") return TruthModel::Cw;
    throw Error(ErrorKind::InvalidArgument, "unknown truth model '" + std::string(s) + "'");
}

inline bool is_forced(ManeuverKind kind) {
    return kind == ManeuverKind::CircleForced || kind == ManeuverKind::InterceptForced;
}

inline bool is_circumnavigation(ManeuverKind kind) {
    return kind == ManeuverKind::NmcUnforced || kind == ManeuverKind::CircleForced;
}

/**
 * @brief One closed-loop experiment.
 *
 * `size` is the NMC semi-minor axis or the circle radius. Intercepts fly
 * from `intercept_start` to `intercept_end` over `duration`; circumnavigation
 * duration is derived as `laps` times the lap period.
 */
struct CampaignConfig {
    ManeuverKind kind = ManeuverKind::NmcUnforced;
    double chief_altitude = 2000.0; // km
    double size = 10.0;             // km
    int impulse_count = 16;
    double duration = 0.0;          // s; intercept only
    TruthModel truth = TruthModel::TwoBody;
    bool count_insertion_dv = false;

    int laps = 1;
    double forced_period = 0.0; // s; <= 0 selects the chief orbital period
    Eigen::Vector2d intercept_start{10.0, 0.0};
    Eigen::Vector2d intercept_end{0.0, 0.0};
    double mu = kMuEarth;
    int samples_per_segment = 4;
    StepControl step;

    void validate() const {
        if (!(chief_altitude > 0.0)) throw Error(ErrorKind::InvalidArgument, "chief altitude must be positive");
        if (is_forced(kind) && impulse_count < 2) {
            throw Error(ErrorKind::InvalidArgument, "forced plans need at least 2 impulses");
        }
        if (impulse_count < 1) throw Error(ErrorKind::InvalidArgument, "impulse count must be at least 1");
        if (is_circumnavigation(kind)) {
            if (!(size > 0.0)) throw Error(ErrorKind::InvalidArgument, "size must be positive");
            if (laps < 1) throw Error(ErrorKind::InvalidArgument, "laps must be at least 1");
        } else if (!(duration > 0.0)) {
            throw Error(ErrorKind::InvalidArgument, "intercept duration must be positive");
        }
        if (samples_per_segment < 1) throw Error(ErrorKind::InvalidArgument, "samples per segment must be >= 1");
    }
};

struct CampaignResult {
    CampaignConfig config;
    std::vector<TrajectorySample> samples;
    std::vector<ImpulseRecord> impulses;
    double total_dv = 0.0;     // km/s
    double insertion_dv = 0.0; // km/s
    double max_waypoint_miss = 0.0;
    double final_miss = 0.0;
    double max_out_of_plane = 0.0; // |z| seen at waypoints; never corrected
    double duration = 0.0;         // s
    std::vector<double> waypoint_misses;
};

/// Waypoint sequence (closing point included) and the planned insertion state.
struct CampaignPlan {
    std::vector<Waypoint> waypoints;
    RelativeState initial;
};

inline CampaignPlan build_plan(const CampaignConfig& cfg, const TargetOrbit& chief) {
    const double n = chief.mean_motion();
    CampaignPlan plan;

    auto repeat_laps = [&](const std::vector<Waypoint>& lap, double lap_period) {
        for (int l = 0; l < cfg.laps; ++l) {
            for (Waypoint w : lap) {
                w.t += l * lap_period;
                plan.waypoints.push_back(w);
            }
        }
        Waypoint close = lap.front();
        close.t = cfg.laps * lap_period;
        plan.waypoints.push_back(close);
    };

    switch (cfg.kind) {
    case ManeuverKind::NmcUnforced: {
        repeat_laps(waypoints_nmc(cfg.size, n, cfg.impulse_count), chief.period());
        plan.initial = nmc_initial_state(cfg.size, n);
        break;
    }
    case ManeuverKind::CircleForced: {
        const double period = cfg.forced_period > 0.0 ? cfg.forced_period : chief.period();
        const auto lap = waypoints_circle(cfg.size, cfg.impulse_count, period);
        repeat_laps(lap, period);
        // Arrive at the first waypoint as if closing a previous lap.
        const double ts = period / cfg.impulse_count;
        const Waypoint& last = lap.back();
        RelativeState before{last.x, last.y, 0.0, 0.0, 0.0, 0.0};
        Waypoint first = lap.front();
        first.t = ts;
        TargetingSolution sol;
        try {
            sol = cw_target_impulse(before, first, ts, n);
        } catch (const Error& e) {
            const std::size_t closing = static_cast<std::size_t>(cfg.impulse_count - 1);
            throw Error(e.kind(), std::string(e.what()) + " (segment " + std::to_string(closing) + ")", closing);
        }
        before.vx = sol.v0_plus.x();
        before.vy = sol.v0_plus.y();
        const RelativeState arrival = propagate_cw(before, n, ts);
        plan.initial = {lap.front().x, lap.front().y, 0.0, arrival.vx, arrival.vy, 0.0};
        break;
    }
    case ManeuverKind::InterceptForced: {
        plan.waypoints = waypoints_line(cfg.intercept_start, cfg.intercept_end, cfg.impulse_count + 1, cfg.duration);
        plan.initial = {cfg.intercept_start.x(), cfg.intercept_start.y(), 0.0, 0.0, 0.0, 0.0};
        break;
    }
    case ManeuverKind::InterceptUnforced: {
        plan.waypoints = waypoints_line(cfg.intercept_start, cfg.intercept_end, 2, cfg.duration);
        plan.initial = {cfg.intercept_start.x(), cfg.intercept_start.y(), 0.0, 0.0, 0.0, 0.0};
        break;
    }
    }
    return plan;
}

/**
 * @brief Fly a waypoint plan against the truth model with CW guidance in the loop.
 *
 * At each waypoint the truth relative state is measured, a CW targeting
 * impulse toward the next waypoint is applied as a velocity discontinuity,
 * and the truth model is propagated across the segment.
 */
inline CampaignResult run_campaign(const CampaignConfig& cfg) {
    cfg.validate();
    const TargetOrbit chief = TargetOrbit::from_altitude(cfg.chief_altitude, cfg.mu);
    const double n = chief.mean_motion();
    const CampaignPlan plan = build_plan(cfg, chief);
    const auto& wps = plan.waypoints;

    CampaignResult result;
    result.config = cfg;
    result.duration = wps.back().t - wps.front().t;

    // Insertion from zero Hill-frame relative velocity.
    const ImpulseRecord insertion = ImpulseRecord::at(wps.front().t, plan.initial.velocity());
    result.insertion_dv = insertion.magnitude;
    if (cfg.count_insertion_dv) {
        result.impulses.push_back(insertion);
        result.total_dv += insertion.magnitude;
    }

    RelativeState rel = plan.initial;
    InertialState chaser = hill_to_eci(chief.state_at(wps.front().t), rel);

    auto record = [&](double t, const RelativeState& r, const InertialState* c) {
        TrajectorySample s;
        s.t = t;
        s.target = chief.state_at(t);
        s.chaser = c ? *c : hill_to_eci(s.target, r);
        s.chaser.epoch = t;
        s.rel = c ? eci_to_hill(s.target, s.chaser) : r;
        result.samples.push_back(s);
    };

    auto measure = [&](std::size_t k) {
        const InertialState target = chief.state_at(wps[k].t);
        if (cfg.truth == TruthModel::TwoBody) {
            chaser.epoch = wps[k].t;
            rel = eci_to_hill(target, chaser);
        }
        const double miss = (rel.position() - wps[k].position()).norm();
        result.waypoint_misses.push_back(miss);
        result.max_waypoint_miss = std::max(result.max_waypoint_miss, miss);
        result.max_out_of_plane = std::max(result.max_out_of_plane, std::abs(rel.z));
        return target;
    };

    const int per_segment = cfg.samples_per_segment;
    for (std::size_t k = 0; k + 1 < wps.size(); ++k) {
        const InertialState target = measure(k);
        const double t0 = wps[k].t;
        const double ts = wps[k + 1].t - t0;

        TargetingSolution sol;
        try {
            sol = cw_target_impulse(rel, wps[k + 1], ts, n);
        } catch (const Error& e) {
            throw Error(e.kind(), std::string(e.what()) + " (segment " + std::to_string(k) + ")", k);
        }
        sol.impulse.t = t0;
        result.impulses.push_back(sol.impulse);
        result.total_dv += sol.impulse.magnitude;
        rel.vx = sol.v0_plus.x();
        rel.vy = sol.v0_plus.y();

        std::vector<double> offsets;
        for (int j = 0; j <= per_segment; ++j) offsets.push_back(ts * j / per_segment);
        offsets.back() = ts;

        if (cfg.truth == TruthModel::TwoBody) {
            const InertialState post = hill_to_eci(target, rel);
            std::vector<InertialState> states;
            try {
                states = propagate_two_body(post, cfg.mu, ts, offsets, {}, cfg.step);
            } catch (const Error& e) {
                throw Error(e.kind(), std::string(e.what()) + " (segment " + std::to_string(k) + ")", k);
            }
            for (int j = 0; j < per_segment; ++j) record(t0 + offsets[j], {}, &states[j]);
            chaser = states.back();
        } else {
            for (int j = 0; j < per_segment; ++j) record(t0 + offsets[j], propagate_cw(rel, n, offsets[j]), nullptr);
            rel = propagate_cw(rel, n, ts);
        }
    }

    const std::size_t last = wps.size() - 1;
    measure(last);
    result.final_miss = result.waypoint_misses.back();
    if (cfg.truth == TruthModel::TwoBody) {
        record(wps[last].t, {}, &chaser);
    } else {
        record(wps[last].t, rel, nullptr);
    }
    return result;
}

/// Forced and unforced arms of one comparison.
struct CampaignPair {
    CampaignResult unforced;
    CampaignResult forced;
};

/**
 * @brief Run NMC and forced-circle campaigns for every (size, count) cell.
 *
 * Output order is size-major, then count, then unforced before forced,
 * independent of how many worker threads are used.
 */
inline std::vector<CampaignPair> sweep_circumnavigation(const std::vector<double>& sizes,
                                                        const std::vector<int>& impulse_counts,
                                                        double chief_altitude, const CampaignConfig& base = {},
                                                        unsigned threads = 0) {
    if (sizes.empty() || impulse_counts.empty()) {
        throw Error(ErrorKind::InvalidArgument, "sweep grids must be non-empty");
    }
    std::vector<CampaignConfig> cells;
    for (double size : sizes) {
        for (int count : impulse_counts) {
            CampaignConfig c = base;
            c.chief_altitude = chief_altitude;
            c.size = size;
            c.impulse_count = count;
            c.truth = TruthModel::TwoBody;
            cells.push_back(c);
        }
    }

    auto run_cell = [](CampaignConfig c) {
        CampaignPair pair;
        c.kind = ManeuverKind::NmcUnforced;
        pair.unforced = run_campaign(c);
        c.kind = ManeuverKind::CircleForced;
        pair.forced = run_campaign(c);
        return pair;
    };

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    std::vector<CampaignPair> out(cells.size());
    for (std::size_t begin = 0; begin < cells.size(); begin += threads) {
        const std::size_t end = std::min(cells.size(), begin + threads);
        std::vector<std::future<CampaignPair>> batch;
        for (std::size_t i = begin; i < end; ++i) batch.push_back(std::async(std::launch::async, run_cell, cells[i]));
        for (std::size_t i = begin; i < end; ++i) out[i] = batch[i - begin].get();
    }
    return out;
}

/// Straight-line forced approach versus a single CW transfer between the same endpoints.
inline CampaignPair intercept_experiment(const Eigen::Vector2d& start_offset, const Eigen::Vector2d& rendezvous_point,
                                         double duration, int impulse_count, double chief_altitude,
                                         const CampaignConfig& base = {}) {
    CampaignConfig c = base;
    c.chief_altitude = chief_altitude;
    c.duration = duration;
    c.intercept_start = start_offset;
    c.intercept_end = rendezvous_point;
    c.size = (start_offset - rendezvous_point).norm();

    CampaignPair pair;
    c.kind = ManeuverKind::InterceptUnforced;
    c.impulse_count = 1;
    pair.unforced = run_campaign(c);
    c.kind = ManeuverKind::InterceptForced;
    c.impulse_count = impulse_count;
    pair.forced = run_campaign(c);
    return pair;
}

} // namespace rpod

#endif // RPOD_CAMPAIGN_HPP
