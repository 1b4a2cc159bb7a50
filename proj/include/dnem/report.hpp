#pragma once

// Result emission. Every number goes out with six fractional digits, and
// files are written to a sibling temporary and renamed into place so a
// reader never sees a half-written result.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "dnem/config.hpp"
#include "dnem/sim.hpp"

namespace dnem {

inline constexpr const char* kToolVersion = "0.1.0";

/// Fixed six-digit rendering; negative zero prints as zero.
inline std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    std::string s = buf;
    if (s == "-0.000000") s = "0.000000";
    return s;
}

/// Rounds to six fractional digits for JSON emission.
inline double round6(double v) {
    const double r = std::round(v * 1e6) / 1e6;
    return r == 0.0 ? 0.0 : r;
}

inline void write_intervals_csv(std::ostream& os, const CommunityScenario& s,
                                const std::vector<IntervalRecord>& records) {
    os << "t,price,zone,g_N,d_N,b_N,z_N,soc";
    for (const auto& m : s.members)
        os << ',' << m.id << "_d," << m.id << "_z," << m.id << "_payment," << m.id << "_surplus," << m.id
           << "_reward";
    os << '\n';
    for (const auto& r : records) {
        os << r.t << ',' << fixed6(r.price.value) << ',' << to_string(r.price.zone) << ',' << fixed6(r.g_N) << ','
           << fixed6(r.d_N) << ',' << fixed6(r.b_N) << ',' << fixed6(r.z_N) << ',' << fixed6(r.soc);
        for (const auto& o : r.per_member)
            os << ',' << fixed6(o.total_consumption()) << ',' << fixed6(o.net) << ',' << fixed6(o.payment) << ','
               << fixed6(o.surplus) << ',' << fixed6(o.reward);
        os << '\n';
    }
}

inline Json zone_histogram_json(const ZoneHistogram& h) {
    Json j = Json::object();
    for (std::size_t z = 0; z < kAllZones.size(); ++z) j[std::string(to_string(kAllZones[z]))] = h[z];
    return j;
}

inline Json summary_json(const CommunityScenario& s, Mechanism mechanism, const RunSummary& sum) {
    Json j;
    j["tool_version"] = kToolVersion;
    j["scenario_hash"] = scenario_hash(s);
    j["mechanism"] = std::string(to_string(mechanism));
    j["total_welfare"] = round6(sum.total_welfare);
    j["members"] = Json::array();
    for (std::size_t i = 0; i < s.members.size(); ++i)
        j["members"].push_back({{"id", s.members[i].id},
                                {"surplus", round6(sum.per_member_surplus[i])},
                                {"reward", round6(sum.per_member_reward[i])}});
    auto opt = [](const std::optional<double>& v) { return v ? Json(round6(*v)) : Json(nullptr); };
    j["welfare_gain_vs_standalone"] = opt(sum.welfare_gain_vs_standalone);
    j["welfare_gain_vs_sign_based"] = opt(sum.welfare_gain_vs_sign_based);
    j["zone_histogram"] = zone_histogram_json(sum.zone_histogram);
    j["net_zero_intervals"] = sum.net_zero_intervals();
    return j;
}

/// Rebuilds horizon metrics from an intervals CSV written by
/// write_intervals_csv. Gains are not recoverable from one CSV and stay empty.
inline RunSummary summary_from_intervals_csv(std::istream& in, const std::vector<std::string>& member_ids) {
    std::string line;
    if (!std::getline(in, line)) throw ValidationError({"intervals CSV: empty"});
    const auto header = split_csv_line(line);
    auto column = [&](const std::string& name) {
        for (std::size_t c = 0; c < header.size(); ++c)
            if (header[c] == name) return c;
        throw ValidationError({"intervals CSV: missing column '" + name + "'"});
    };
    const std::size_t zone_col = column("zone");
    std::vector<std::size_t> surplus_col, reward_col;
    for (const auto& id : member_ids) {
        surplus_col.push_back(column(id + "_surplus"));
        reward_col.push_back(column(id + "_reward"));
    }

    RunSummary out;
    out.per_member_surplus.assign(member_ids.size(), 0.0);
    out.per_member_reward.assign(member_ids.size(), 0.0);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != header.size()) throw ValidationError({"intervals CSV: ragged row"});
        const auto zone = parse_zone(cells[zone_col]);
        if (!zone) throw ValidationError({"intervals CSV: unknown zone '" + cells[zone_col] + "'"});
        ++out.zone_histogram[static_cast<std::size_t>(*zone)];
        for (std::size_t i = 0; i < member_ids.size(); ++i) {
            out.per_member_surplus[i] += std::stod(cells[surplus_col[i]]);
            const double q = std::stod(cells[reward_col[i]]);
            out.per_member_reward[i] += q;
            out.total_welfare += q;
        }
    }
    return out;
}

/// Writes `content` to `path` through a temporary in the same directory.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw IoError("cannot write " + tmp.string());
        os << content;
        os.flush();
        if (!os) throw IoError("write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("cannot move result into " + path.string());
    }
}

}  // namespace dnem
