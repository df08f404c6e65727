#ifndef RPOD_CLI_HPP
#define RPOD_CLI_HPP

#include "rpod/campaign.hpp"
#include "rpod/core.hpp"
#include "rpod/results.hpp"
#include "rpod/validate.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace rpod {

enum class Subcommand { Circumnav, Intercept, Sweep, Validate };
enum class OutputFormat { Csv, Json };

inline std::string_view to_string(Subcommand s) {
    switch (s) {
    case Subcommand::Circumnav: return "circumnav";
    case Subcommand::Intercept: return "intercept";
    case Subcommand::Sweep: return "sweep";
    case Subcommand::Validate: return "validate";
    }
    return "unknown";
}

inline Subcommand parse_subcommand(std::string_view s) {
    for (auto c : {Subcommand::Circumnav, Subcommand::Intercept, Subcommand::Sweep, Subcommand::Validate}) {
        if (to_string(c) == s) return c;
    }
    throw Error(ErrorKind::InvalidArgument, "unknown subcommand '" + std::string(s) + "'");
}

/// Everything needed to reproduce one CLI run. The pipeline has no randomness.
struct RunManifest {
    Subcommand subcommand = Subcommand::Validate;
    CampaignConfig config;
    std::vector<ManeuverKind> kinds; // circumnav arms to fly
    std::vector<double> sizes;       // sweep grid, km
    std::vector<int> impulse_counts; // sweep grid / intercept forced-arm counts
    std::string output_path;         // empty: standard output
    OutputFormat format = OutputFormat::Csv;
    unsigned threads = 0;
    bool seedless = true;

    bool operator==(const RunManifest&) const;
};

inline nlohmann::json to_json(const CampaignConfig& c) {
    return {{"kind", std::string(to_string(c.kind))},
            {"chief_altitude_km", c.chief_altitude},
            {"size_km", c.size},
            {"impulse_count", c.impulse_count},
            {"duration_s", c.duration},
            {"truth_model", std::string(to_string(c.truth))},
            {"count_insertion_dv", c.count_insertion_dv},
            {"laps", c.laps},
            {"forced_period_s", c.forced_period},
            {"intercept_start_km", {c.intercept_start.x(), c.intercept_start.y()}},
            {"intercept_end_km", {c.intercept_end.x(), c.intercept_end.y()}},
            {"mu_km3_s2", c.mu},
            {"samples_per_segment", c.samples_per_segment},
            {"abs_tol", c.step.abs_tol},
            {"rel_tol", c.step.rel_tol},
            {"initial_step_s", c.step.initial_step},
            {"max_steps", c.step.max_steps}};
}

inline CampaignConfig config_from_json(const nlohmann::json& j) {
    CampaignConfig c;
    c.kind = parse_maneuver_kind(j.at("kind").get<std::string>());
    c.chief_altitude = j.at("chief_altitude_km").get<double>();
    c.size = j.at("size_km").get<double>();
    c.impulse_count = j.at("impulse_count").get<int>();
    c.duration = j.at("duration_s").get<double>();
    c.truth = parse_truth_model(j.at("truth_model").get<std::string>());
    c.count_insertion_dv = j.at("count_insertion_dv").get<bool>();
    c.laps = j.at("laps").get<int>();
    c.forced_period = j.at("forced_period_s").get<double>();
    const auto s = j.at("intercept_start_km").get<std::vector<double>>();
    const auto e = j.at("intercept_end_km").get<std::vector<double>>();
    c.intercept_start = {s.at(0), s.at(1)};
    c.intercept_end = {e.at(0), e.at(1)};
    c.mu = j.at("mu_km3_s2").get<double>();
    c.samples_per_segment = j.at("samples_per_segment").get<int>();
    c.step.abs_tol = j.at("abs_tol").get<double>();
    c.step.rel_tol = j.at("rel_tol").get<double>();
    c.step.initial_step = j.at("initial_step_s").get<double>();
    c.step.max_steps = j.at("max_steps").get<std::size_t>();
    return c;
}

inline nlohmann::json to_json(const RunManifest& m) {
    nlohmann::json kinds = nlohmann::json::array();
    for (auto k : m.kinds) kinds.push_back(std::string(to_string(k)));
    return {{"subcommand", std::string(to_string(m.subcommand))},
            {"config", to_json(m.config)},
            {"kinds", kinds},
            {"sizes_km", m.sizes},
            {"impulse_counts", m.impulse_counts},
            {"output_path", m.output_path},
            {"format", m.format == OutputFormat::Csv ? "csv" : "json"},
            {"threads", m.threads},
            {"seedless", m.seedless}};
}

inline RunManifest manifest_from_json(const nlohmann::json& j) {
    RunManifest m;
    m.subcommand = parse_subcommand(j.at("subcommand").get<std::string>());
    m.config = config_from_json(j.at("config"));
    for (const auto& k : j.at("kinds")) m.kinds.push_back(parse_maneuver_kind(k.get<std::string>()));
    m.sizes = j.at("sizes_km").get<std::vector<double>>();
    m.impulse_counts = j.at("impulse_counts").get<std::vector<int>>();
    m.output_path = j.at("output_path").get<std::string>();
    const auto format = j.at("format").get<std::string>();
    if (format != "csv" && format != "json") throw Error(ErrorKind::InvalidArgument, "unknown format " + format);
    m.format = format == "csv" ? OutputFormat::Csv : OutputFormat::Json;
    m.threads = j.at("threads").get<unsigned>();
    m.seedless = j.at("seedless").get<bool>();
    return m;
}

inline bool RunManifest::operator==(const RunManifest& other) const { return to_json(*this) == to_json(other); }

/// Thrown by parse_args when --help is requested; carries the help text.
struct HelpRequested {
    std::string text;
};

/**
 * @brief Parse a command line (without the program name) into a manifest.
 *
 * Physical quantities always carry their unit in the flag name. Any parse
 * or validation failure becomes a UsageError naming the offending flag.
 */
inline RunManifest parse_args(const std::vector<std::string>& args) {
    CLI::App app{"Forced versus unforced RPOD delta-v under CW model mismatch", "rpod_sim"};
    app.require_subcommand(1);

    RunManifest m;
    CampaignConfig& c = m.config;
    std::string truth = "two_body";
    std::string format = "csv";
    std::string kind = "both";
    double duration_min = 60.0;
    double forced_period_min = 0.0;
    double start_x = 10.0, start_y = 0.0, end_x = 0.0, end_y = 0.0;
    double size_km = 0.0;
    int impulses = 0;

    auto add_common = [&](CLI::App* sub, bool out_required) {
        sub->add_option("--altitude-km", c.chief_altitude, "Chief orbit altitude")->capture_default_str();
        sub->add_option("--truth", truth, "Truth model")->check(CLI::IsMember({"two_body", "cw"}))->capture_default_str();
        auto* out = sub->add_option("--out", m.output_path, "Output file");
        if (out_required) out->required();
        sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
        sub->add_flag("--count-insertion-dv", c.count_insertion_dv, "Include insertion delta-v in totals");
        sub->add_option("--mu-km3-s2", c.mu, "Gravitational parameter")->capture_default_str();
        sub->add_option("--samples-per-segment", c.samples_per_segment, "Trajectory samples per segment")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        sub->add_option("--abs-tol-km", c.step.abs_tol, "Integrator absolute tolerance")->capture_default_str();
        sub->add_option("--rel-tol", c.step.rel_tol, "Integrator relative tolerance")->capture_default_str();
    };

    auto* circ = app.add_subcommand("circumnav", "Fly NMC and/or forced-circle circumnavigation");
    add_common(circ, false);
    circ->add_option("--size-km", size_km, "NMC semi-minor axis / circle radius")->required();
    circ->add_option("--impulses", impulses, "Impulses per lap")->required();
    circ->add_option("--kind", kind, "Arm to fly")
        ->check(CLI::IsMember({"both", "nmc_unforced", "circle_forced"}))
        ->capture_default_str();
    circ->add_option("--laps", c.laps, "Laps to fly")->check(CLI::PositiveNumber)->capture_default_str();
    circ->add_option("--forced-period-min", forced_period_min, "Forced circle lap period (0: chief period)");

    auto* inter = app.add_subcommand("intercept", "Compare forced line and unforced CW intercepts");
    add_common(inter, false);
    inter->add_option("--duration-min", duration_min, "Intercept duration")->capture_default_str();
    inter->add_option("--impulses", m.impulse_counts, "Forced-arm impulse counts")->delimiter(',');
    inter->add_option("--start-x-km", start_x, "Start radial offset")->capture_default_str();
    inter->add_option("--start-y-km", start_y, "Start along-track offset")->capture_default_str();
    inter->add_option("--end-x-km", end_x, "Rendezvous radial offset")->capture_default_str();
    inter->add_option("--end-y-km", end_y, "Rendezvous along-track offset")->capture_default_str();

    auto* sweep = app.add_subcommand("sweep", "Circumnavigation sweep over sizes and impulse counts");
    add_common(sweep, true);
    sweep->add_option("--sizes-km", m.sizes, "Sizes")->delimiter(',')->required();
    sweep->add_option("--impulses", m.impulse_counts, "Impulse counts")->delimiter(',')->required();
    sweep->add_option("--laps", c.laps, "Laps to fly")->check(CLI::PositiveNumber)->capture_default_str();
    sweep->add_option("--forced-period-min", forced_period_min, "Forced circle lap period (0: chief period)");
    sweep->add_option("--threads", m.threads, "Worker threads (0: hardware)");

    auto* validate = app.add_subcommand("validate", "Run the built-in self-test");
    validate->add_option("--mu-km3-s2", c.mu, "Gravitational parameter")->capture_default_str();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested{app.help()};
    } catch (const CLI::ParseError& e) {
        throw Error(ErrorKind::UsageError, e.what());
    }

    auto usage = [](const std::string& flag, const std::string& why) {
        throw Error(ErrorKind::UsageError, flag + ": " + why);
    };

    c.truth = parse_truth_model(truth);
    m.format = format == "csv" ? OutputFormat::Csv : OutputFormat::Json;
    if (!(c.chief_altitude > 0.0)) usage("--altitude-km", "must be positive");
    if (forced_period_min < 0.0) usage("--forced-period-min", "must be non-negative");
    c.forced_period = forced_period_min * 60.0;

    if (circ->parsed()) {
        m.subcommand = Subcommand::Circumnav;
        if (!(size_km > 0.0)) usage("--size-km", "must be positive");
        if (impulses < 3) usage("--impulses", "circumnavigation needs at least 3");
        c.size = size_km;
        c.impulse_count = impulses;
        if (kind == "both" || kind == "nmc_unforced") m.kinds.push_back(ManeuverKind::NmcUnforced);
        if (kind == "both" || kind == "circle_forced") m.kinds.push_back(ManeuverKind::CircleForced);
        c.kind = m.kinds.front();
    } else if (inter->parsed()) {
        m.subcommand = Subcommand::Intercept;
        if (!(duration_min > 0.0)) usage("--duration-min", "must be positive");
        if (m.impulse_counts.empty()) m.impulse_counts = {8};
        for (int k : m.impulse_counts) {
            if (k < 2) usage("--impulses", "forced intercept needs at least 2");
        }
        c.duration = duration_min * 60.0;
        c.intercept_start = {start_x, start_y};
        c.intercept_end = {end_x, end_y};
        c.size = (c.intercept_start - c.intercept_end).norm();
        c.kind = ManeuverKind::InterceptUnforced;
        c.impulse_count = 1;
        m.kinds = {ManeuverKind::InterceptUnforced, ManeuverKind::InterceptForced};
    } else if (sweep->parsed()) {
        m.subcommand = Subcommand::Sweep;
        for (double s : m.sizes) {
            if (!(s > 0.0)) usage("--sizes-km", "sizes must be positive");
        }
        for (int k : m.impulse_counts) {
            if (k < 3) usage("--impulses", "circumnavigation needs at least 3");
        }
        m.kinds = {ManeuverKind::NmcUnforced, ManeuverKind::CircleForced};
    } else {
        m.subcommand = Subcommand::Validate;
    }
    return m;
}

/// Rows plus the comparison pairs behind them.
struct RunOutput {
    std::vector<ResultRow> rows;
    std::vector<CampaignPair> pairs;
};

inline RunOutput execute(const RunManifest& m) {
    RunOutput out;
    switch (m.subcommand) {
    case Subcommand::Circumnav: {
        std::optional<CampaignResult> nmc, circle;
        for (auto k : m.kinds) {
            CampaignConfig c = m.config;
            c.kind = k;
            auto r = run_campaign(c);
            out.rows.push_back(to_row(r));
            (k == ManeuverKind::NmcUnforced ? nmc : circle) = std::move(r);
        }
        if (nmc && circle) out.pairs.push_back({std::move(*nmc), std::move(*circle)});
        break;
    }
    case Subcommand::Intercept: {
        for (int count : m.impulse_counts) {
            auto pair = intercept_experiment(m.config.intercept_start, m.config.intercept_end, m.config.duration, count,
                                             m.config.chief_altitude, m.config);
            if (out.rows.empty()) out.rows.push_back(to_row(pair.unforced));
            out.rows.push_back(to_row(pair.forced));
            out.pairs.push_back(std::move(pair));
        }
        break;
    }
    case Subcommand::Sweep: {
        CampaignConfig base = m.config;
        base.samples_per_segment = 1; // keep the sweep light; only totals are tabulated
        auto pairs = sweep_circumnavigation(m.sizes, m.impulse_counts, m.config.chief_altitude, base, m.threads);
        for (auto& p : pairs) {
            out.rows.push_back(to_row(p.unforced));
            out.rows.push_back(to_row(p.forced));
            p.unforced.samples.clear();
            p.forced.samples.clear();
            out.pairs.push_back(std::move(p));
        }
        break;
    }
    case Subcommand::Validate: break;
    }
    return out;
}

inline std::string render(const std::vector<ResultRow>& rows, const RunManifest& m) {
    std::ostringstream os;
    if (m.format == OutputFormat::Csv) {
        write_csv(os, rows);
    } else {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& r : rows) arr.push_back(to_json(r));
        os << nlohmann::json{{"manifest", to_json(m)}, {"rows", arr}}.dump(2) << '\n';
    }
    return os.str();
}

/// Writes the result file (or standard output) and one summary line per comparison pair.
inline void emit_results(const RunOutput& results, const RunManifest& m, std::ostream& summary,
                         std::ostream& data_fallback = std::cout) {
    if (results.rows.empty()) throw Error(ErrorKind::InvalidArgument, "no results to emit");
    const std::string text = render(results.rows, m);
    if (m.output_path.empty()) {
        data_fallback << text;
    } else {
        std::ofstream f(m.output_path, std::ios::binary | std::ios::trunc);
        if (!f) throw Error(ErrorKind::IoError, "cannot open " + m.output_path);
        f << text;
        f.flush();
        if (!f) throw Error(ErrorKind::IoError, "write failed for " + m.output_path);
    }
    for (const auto& p : results.pairs) summary << summary_line(p) << '\n';
}

inline void print_report(const ValidationReport& report, std::ostream& os) {
    for (const auto& c : report.checks) {
        os << (c.passed ? "PASS " : "FAIL ") << c.name << " residual=" << format_double(c.residual)
           << " tolerance=" << format_double(c.tolerance);
        if (!c.note.empty()) os << " (" << c.note << ")";
        os << '\n';
    }
}

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRuntime = 2;
inline constexpr int kExitValidation = 3;

/// Full CLI entry point; returns the process exit code.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    RunManifest m;
    try {
        m = parse_args(args);
    } catch (const HelpRequested& h) {
        out << h.text;
        return kExitOk;
    } catch (const Error& e) {
        err << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (m.subcommand == Subcommand::Validate) {
            const auto report = validate_suite(m.config.mu);
            print_report(report, out);
            return report.all_passed() ? kExitOk : kExitValidation;
        }
        // Summaries go to stderr when data is streamed to stdout.
        std::ostream& summary = m.output_path.empty() ? err : out;
        emit_results(execute(m), m, summary, out);
        return kExitOk;
    } catch (const Error& e) {
        err << e.what() << '\n';
        return e.kind() == ErrorKind::UsageError ? kExitUsage : kExitRuntime;
    } catch (const std::exception& e) {
        err << e.what() << '\n';
        return kExitRuntime;
    }
}

} // namespace rpod

#endif // RPOD_CLI_HPP
