#pragma once

// Scenario configuration: one JSON document
//
//   {
//     "horizon": 24,
//     "rates":   {"buy": 0.4 | [..], "sell": 0.2 | [..], "salvage": 0.3},
//     "members": [{"id": "h1",
//                  "devices": [{"alpha": 2, "beta": 1, "d_min": 0, "d_max": 2}],
//                  "pv": 1.7 | [..],
//                  "central_pv_share": 0.5 | "ownership": 2,
//                  "bess_share": 0.5}],
//     "central_pv": 0 | [..],
//     "bess": {"capacity": 2, "charge_eff": 0.95, "discharge_eff": 0.95,
//              "max_charge": 0.5, "max_discharge": 0.5, "initial_soc": 1},
//     "traces_csv": "traces.csv"
//   }
//
// Scalars broadcast over the horizon. Members without an inline "pv" read
// the CSV column named after their id; "central_pv" may come from the CSV
// column of the same name. Missing shares default to 1/N; "ownership"
// weights are normalized into central-PV shares.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "dnem/model.hpp"

namespace dnem {

using Json = nlohmann::json;

/// File-system failure while reading inputs or writing results.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using CsvColumns = std::map<std::string, std::vector<double>>;

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ',')) {
        while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
        while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
        out.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

/// Reads a header-keyed numeric CSV into columns.
inline CsvColumns read_csv_columns(std::istream& in, const std::string& source) {
    CsvColumns cols;
    std::string line;
    if (!std::getline(in, line)) throw ValidationError({source + ": empty CSV"});
    const auto header = split_csv_line(line);
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != header.size())
            throw ValidationError({source + " row " + std::to_string(row) + ": expected " +
                                   std::to_string(header.size()) + " cells"});
        for (std::size_t c = 0; c < cells.size(); ++c) {
            try {
                cols[header[c]].push_back(std::stod(cells[c]));
            } catch (const std::exception&) {
                throw ValidationError({source + " row " + std::to_string(row) + " column '" + header[c] +
                                       "': not a number"});
            }
        }
    }
    return cols;
}

namespace detail {

class JsonReader {
public:
    std::vector<std::string> issues;

    double number(const Json& j, const char* key, const std::string& where) {
        if (!j.contains(key)) {
            issues.push_back(where + ": missing field '" + key + "'");
            return 0.0;
        }
        if (!j[key].is_number()) {
            issues.push_back(where + "." + key + ": expected a number");
            return 0.0;
        }
        return j[key].get<double>();
    }

    double number_or(const Json& j, const char* key, double fallback, const std::string& where) {
        return j.contains(key) ? number(j, key, where) : fallback;
    }

    std::vector<double> series(const Json& j, const std::string& where) {
        if (j.is_number()) return {j.get<double>()};
        std::vector<double> out;
        if (!j.is_array()) {
            issues.push_back(where + ": expected a number or an array of numbers");
            return out;
        }
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (!j[i].is_number()) {
                issues.push_back(where + "[" + std::to_string(i) + "]: expected a number");
                continue;
            }
            out.push_back(j[i].get<double>());
        }
        return out;
    }
};

inline std::vector<double> broadcast(std::vector<double> v, std::size_t horizon) {
    if (v.size() == 1 && horizon > 1) v.assign(horizon, v.front());
    return v;
}

}  // namespace detail

/// Builds a validated scenario from a parsed config. `base_dir` resolves a
/// relative "traces_csv" path. Throws ValidationError or IoError.
inline CommunityScenario scenario_from_json(const Json& cfg, const std::filesystem::path& base_dir = {}) {
    detail::JsonReader rd;
    CommunityScenario s;
    if (!cfg.is_object()) throw ValidationError({"config: top level must be a JSON object"});

    if (!cfg.contains("horizon") || !cfg["horizon"].is_number_integer() || cfg["horizon"].get<long long>() < 1)
        rd.issues.push_back("config: 'horizon' must be a positive integer");
    else s.horizon = cfg["horizon"].get<std::size_t>();

    if (!cfg.contains("rates") || !cfg["rates"].is_object()) {
        rd.issues.push_back("config: missing object 'rates'");
    } else {
        const auto& r = cfg["rates"];
        if (!r.contains("buy")) rd.issues.push_back("rates: missing field 'buy'");
        else s.rates.buy = rd.series(r["buy"], "rates.buy");
        if (!r.contains("sell")) rd.issues.push_back("rates: missing field 'sell'");
        else s.rates.sell = rd.series(r["sell"], "rates.sell");
        s.rates.salvage = rd.number_or(r, "salvage", 0.0, "rates");
    }

    CsvColumns csv;
    if (cfg.contains("traces_csv")) {
        if (!cfg["traces_csv"].is_string()) {
            rd.issues.push_back("config: 'traces_csv' must be a path string");
        } else {
            std::filesystem::path p = cfg["traces_csv"].get<std::string>();
            if (p.is_relative()) p = base_dir / p;
            std::ifstream in(p);
            if (!in) throw IoError("cannot open traces CSV " + p.string());
            csv = read_csv_columns(in, p.string());
        }
    }

    if (!cfg.contains("members") || !cfg["members"].is_array()) {
        rd.issues.push_back("config: missing array 'members'");
    } else {
        const auto& ms = cfg["members"];
        const std::size_t n = ms.size();
        bool any_omega = false, any_owner = false, any_xi = false;
        for (const auto& m : ms) {
            if (!m.is_object()) continue;
            any_omega = any_omega || m.contains("central_pv_share");
            any_owner = any_owner || m.contains("ownership");
            any_xi = any_xi || m.contains("bess_share");
        }
        std::vector<double> ownership;
        for (std::size_t i = 0; i < n; ++i) {
            const auto& mj = ms[i];
            const std::string where = "members[" + std::to_string(i) + "]";
            Member m;
            if (!mj.is_object()) {
                rd.issues.push_back(where + ": expected an object");
                continue;
            }
            if (mj.contains("id") && mj["id"].is_string()) m.id = mj["id"].get<std::string>();
            else rd.issues.push_back(where + ": missing string field 'id'");

            if (!mj.contains("devices") || !mj["devices"].is_array()) {
                rd.issues.push_back(where + ": missing array 'devices'");
            } else {
                for (std::size_t k = 0; k < mj["devices"].size(); ++k) {
                    const auto& dj = mj["devices"][k];
                    const std::string dw = where + ".devices[" + std::to_string(k) + "]";
                    DeviceUtility d;
                    d.alpha = rd.number(dj, "alpha", dw);
                    d.beta = rd.number(dj, "beta", dw);
                    d.d_min = rd.number_or(dj, "d_min", 0.0, dw);
                    d.d_max = rd.number(dj, "d_max", dw);
                    m.devices.push_back(d);
                }
            }

            if (mj.contains("pv")) {
                m.pv_trace = detail::broadcast(rd.series(mj["pv"], where + ".pv"), s.horizon);
            } else if (auto it = csv.find(m.id); it != csv.end()) {
                m.pv_trace = it->second;
            }

            if (any_omega) m.central_pv_share = rd.number_or(mj, "central_pv_share", 0.0, where);
            else if (any_owner) ownership.push_back(rd.number_or(mj, "ownership", 0.0, where));
            else m.central_pv_share = n > 0 ? 1.0 / static_cast<double>(n) : 0.0;
            m.bess_share = any_xi ? rd.number_or(mj, "bess_share", 0.0, where)
                                  : (n > 0 ? 1.0 / static_cast<double>(n) : 0.0);
            s.members.push_back(std::move(m));
        }
        if (!any_omega && any_owner && ownership.size() == s.members.size()) {
            double total = 0.0;
            for (double w : ownership) total += w;
            if (total <= 0.0) rd.issues.push_back("members: ownership weights must have a positive sum");
            else
                for (std::size_t i = 0; i < s.members.size(); ++i)
                    s.members[i].central_pv_share = ownership[i] / total;
        }
    }

    if (cfg.contains("central_pv")) s.central_pv = detail::broadcast(rd.series(cfg["central_pv"], "central_pv"), s.horizon);
    else if (auto it = csv.find("central_pv"); it != csv.end()) s.central_pv = it->second;

    if (cfg.contains("bess") && !cfg["bess"].is_null()) {
        const auto& bj = cfg["bess"];
        BessSpec b;
        b.capacity = rd.number(bj, "capacity", "bess");
        b.charge_eff = rd.number_or(bj, "charge_eff", 1.0, "bess");
        b.discharge_eff = rd.number_or(bj, "discharge_eff", 1.0, "bess");
        b.max_charge = rd.number(bj, "max_charge", "bess");
        b.max_discharge = rd.number(bj, "max_discharge", "bess");
        b.initial_soc = rd.number_or(bj, "initial_soc", 0.0, "bess");
        s.bess = b;
    }

    if (!rd.issues.empty()) throw ValidationError(std::move(rd.issues));
    return validate_scenario(std::move(s));
}

inline CommunityScenario load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path.string());
    Json cfg;
    try {
        cfg = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ValidationError({"config " + path.string() + ": malformed JSON: " + e.what()});
    }
    return scenario_from_json(cfg, path.parent_path());
}

/// Canonical JSON form of a validated scenario (inline traces, explicit shares).
inline Json scenario_to_json(const CommunityScenario& s) {
    Json j;
    j["horizon"] = s.horizon;
    j["rates"] = {{"buy", s.rates.buy}, {"sell", s.rates.sell}, {"salvage", s.rates.salvage}};
    j["members"] = Json::array();
    for (const auto& m : s.members) {
        Json mj;
        mj["id"] = m.id;
        mj["devices"] = Json::array();
        for (const auto& d : m.devices)
            mj["devices"].push_back({{"alpha", d.alpha}, {"beta", d.beta}, {"d_min", d.d_min}, {"d_max", d.d_max}});
        mj["pv"] = m.pv_trace;
        mj["central_pv_share"] = m.central_pv_share;
        mj["bess_share"] = m.bess_share;
        j["members"].push_back(std::move(mj));
    }
    j["central_pv"] = s.central_pv;
    if (s.bess) {
        const auto& b = *s.bess;
        j["bess"] = {{"capacity", b.capacity},           {"charge_eff", b.charge_eff},
                     {"discharge_eff", b.discharge_eff}, {"max_charge", b.max_charge},
                     {"max_discharge", b.max_discharge}, {"initial_soc", b.initial_soc}};
    }
    return j;
}

/// FNV-1a over the canonical JSON dump, as 16 hex digits.
inline std::string scenario_hash(const CommunityScenario& s) {
    const std::string text = scenario_to_json(s).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

}  // namespace dnem
