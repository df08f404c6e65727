#ifndef RPOD_RESULTS_HPP
#define RPOD_RESULTS_HPP

#include "rpod/campaign.hpp"
#include "rpod/core.hpp"

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace rpod {

/// One CSV row: the summary of a single campaign.
struct ResultRow {
    std::string kind;
    double size_km = 0.0;
    int impulse_count = 0;
    double altitude_km = 0.0;
    double total_dv_km_s = 0.0;
    double insertion_dv_km_s = 0.0;
    double max_miss_km = 0.0;
    double duration_s = 0.0;

    bool operator==(const ResultRow&) const = default;
};

inline constexpr const char* kCsvHeader =
    "kind,size_km,impulse_count,altitude_km,total_dv_km_s,insertion_dv_km_s,max_miss_km,duration_s";

inline ResultRow to_row(const CampaignResult& r) {
    return {std::string(to_string(r.config.kind)), r.config.size, r.config.impulse_count, r.config.chief_altitude,
            r.total_dv, r.insertion_dv, r.max_waypoint_miss, r.duration};
}

// 17 significant digits: every double survives a text round trip.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
    os << kCsvHeader << '\n';
    for (const auto& r : rows) {
        os << r.kind << ',' << format_double(r.size_km) << ',' << r.impulse_count << ','
           << format_double(r.altitude_km) << ',' << format_double(r.total_dv_km_s) << ','
           << format_double(r.insertion_dv_km_s) << ',' << format_double(r.max_miss_km) << ','
           << format_double(r.duration_s) << '\n';
    }
}

inline std::vector<ResultRow> parse_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != kCsvHeader) {
        throw Error(ErrorKind::InvalidArgument, "missing or unexpected CSV header");
    }
    auto to_double = [](const std::string& s) {
        char* end = nullptr;
        const double v = std::strtod(s.c_str(), &end);
        if (end == s.c_str() || *end != '\0') throw Error(ErrorKind::InvalidArgument, "bad number '" + s + "'");
        return v;
    };
    std::vector<ResultRow> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(cell);
        if (f.size() != 8) throw Error(ErrorKind::InvalidArgument, "expected 8 CSV fields");
        ResultRow r;
        r.kind = f[0];
        r.size_km = to_double(f[1]);
        r.impulse_count = std::stoi(f[2]);
        r.altitude_km = to_double(f[3]);
        r.total_dv_km_s = to_double(f[4]);
        r.insertion_dv_km_s = to_double(f[5]);
        r.max_miss_km = to_double(f[6]);
        r.duration_s = to_double(f[7]);
        rows.push_back(r);
    }
    return rows;
}

inline nlohmann::json to_json(const ResultRow& r) {
    return {{"kind", r.kind},
            {"size_km", r.size_km},
            {"impulse_count", r.impulse_count},
            {"altitude_km", r.altitude_km},
            {"total_dv_km_s", r.total_dv_km_s},
            {"insertion_dv_km_s", r.insertion_dv_km_s},
            {"max_miss_km", r.max_miss_km},
            {"duration_s", r.duration_s}};
}

inline ResultRow row_from_json(const nlohmann::json& j) {
    ResultRow r;
    r.kind = j.at("kind").get<std::string>();
    r.size_km = j.at("size_km").get<double>();
    r.impulse_count = j.at("impulse_count").get<int>();
    r.altitude_km = j.at("altitude_km").get<double>();
    r.total_dv_km_s = j.at("total_dv_km_s").get<double>();
    r.insertion_dv_km_s = j.at("insertion_dv_km_s").get<double>();
    r.max_miss_km = j.at("max_miss_km").get<double>();
    r.duration_s = j.at("duration_s").get<double>();
    return r;
}

/// "forced" or "unforced": the arm that needed less total delta-v.
inline std::string lower_dv_arm(const CampaignPair& pair) {
    return pair.unforced.total_dv < pair.forced.total_dv ? "unforced" : "forced";
}

inline std::string summary_line(const CampaignPair& pair) {
    const auto& u = pair.unforced;
    const auto& f = pair.forced;
    std::ostringstream os;
    os << (is_circumnavigation(u.config.kind) ? "circumnav" : "intercept") << " size_km=" << format_double(u.config.size)
       << " impulses=" << f.config.impulse_count << ": " << lower_dv_arm(pair)
       << " used less delta-v (unforced " << format_double(u.total_dv) << " km/s, forced " << format_double(f.total_dv)
       << " km/s, unforced/forced ratio " << format_double(f.total_dv > 0.0 ? u.total_dv / f.total_dv : 0.0) << ")";
    return os.str();
}

} // namespace rpod

#endif // RPOD_RESULTS_HPP
