#pragma once

// Domain types for an energy community under a net-energy-metering tariff:
// devices with concave utilities, members, rate schedules, storage, and the
// scenario container that ties them to a horizon of netting intervals.
//
// Units: energy in kWh per interval, prices in $/kWh.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace dnem {

/// Quadratic device utility, flat past the satiation point alpha/beta:
///   U(d) = alpha*d - beta*d^2/2   for d <= alpha/beta
///   U(d) = alpha^2/(2*beta)       otherwise
struct DeviceUtility {
    double alpha = 0.0;
    double beta = 1.0;
    double d_min = 0.0;
    double d_max = 0.0;

    double satiation() const { return alpha / beta; }

    double value(double d) const {
        if (d >= satiation()) return alpha * alpha / (2.0 * beta);
        return alpha * d - 0.5 * beta * d * d;
    }

    double marginal(double d) const { return std::max(alpha - beta * d, 0.0); }

    /// Consumption at which marginal utility equals `price`, clamped to
    /// [0, alpha/beta].
    double inverse_marginal(double price) const {
        return std::clamp((alpha - price) / beta, 0.0, satiation());
    }
};

/// Contract any concave device utility must meet to be priced by a uniform
/// community rate.
template <typename U>
concept ConcaveUtility = requires(const U& u, double x) {
    { u.value(x) } -> std::convertible_to<double>;
    { u.marginal(x) } -> std::convertible_to<double>;
    { u.inverse_marginal(x) } -> std::convertible_to<double>;
    { u.d_min } -> std::convertible_to<double>;
    { u.d_max } -> std::convertible_to<double>;
};

static_assert(ConcaveUtility<DeviceUtility>);

struct Member {
    std::string id;
    std::vector<DeviceUtility> devices;
    std::vector<double> pv_trace;   // behind-the-meter generation per interval
    double central_pv_share = 0.0;  // omega_i
    double bess_share = 0.0;        // xi_i

    double utility(const std::vector<double>& consumption) const {
        double u = 0.0;
        for (std::size_t k = 0; k < devices.size(); ++k) u += devices[k].value(consumption[k]);
        return u;
    }
};

struct RateSchedule {
    std::vector<double> buy;   // pi^+_t
    std::vector<double> sell;  // pi^-_t
    double salvage = 0.0;      // gamma, constant across the horizon

    double buy_at(std::size_t t) const { return buy.size() == 1 ? buy.front() : buy.at(t); }
    double sell_at(std::size_t t) const { return sell.size() == 1 ? sell.front() : sell.at(t); }
};

struct BessSpec {
    double capacity = 0.0;       // E
    double charge_eff = 1.0;     // tau
    double discharge_eff = 1.0;  // rho
    double max_charge = 0.0;     // per-interval charging limit
    double max_discharge = 0.0;  // per-interval discharging limit
    double initial_soc = 0.0;    // x_0
};

/// Storage owned by a single member: every extensive quantity scaled by `share`.
inline BessSpec scale_bess(const BessSpec& spec, double share) {
    BessSpec out = spec;
    out.capacity *= share;
    out.max_charge *= share;
    out.max_discharge *= share;
    out.initial_soc *= share;
    return out;
}

struct CommunityScenario {
    std::vector<Member> members;
    RateSchedule rates;
    std::optional<BessSpec> bess;
    std::vector<double> central_pv;  // g~_t
    std::size_t horizon = 0;

    std::vector<DeviceUtility> all_devices() const {
        std::vector<DeviceUtility> out;
        for (const auto& m : members) out.insert(out.end(), m.devices.begin(), m.devices.end());
        return out;
    }
};

/// Carries every violated invariant, one line each.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(std::vector<std::string> issues)
        : std::runtime_error(join(issues)), issues_(std::move(issues)) {}

    const std::vector<std::string>& issues() const { return issues_; }

private:
    static std::string join(const std::vector<std::string>& issues) {
        std::string out;
        for (const auto& s : issues) {
            if (!out.empty()) out += '\n';
            out += s;
        }
        return out;
    }
    std::vector<std::string> issues_;
};

/// Member generation with its virtual central-PV share folded in.
inline double fold_central_pv(double own_generation, double share, double central_output) {
    return own_generation + share * central_output;
}

inline double fold_central_pv(const Member& member, std::size_t t, double central_output) {
    return fold_central_pv(member.pv_trace.at(t), member.central_pv_share, central_output);
}

inline constexpr double kShareSumTol = 1e-9;

/// Salvage range that keeps storage scheduling non-trivial:
/// [max_t sell_t / tau, rho * min_t buy_t].
inline std::pair<double, double> salvage_bounds(const RateSchedule& rates, const BessSpec& spec) {
    const double max_sell = *std::max_element(rates.sell.begin(), rates.sell.end());
    const double min_buy = *std::min_element(rates.buy.begin(), rates.buy.end());
    return {max_sell / spec.charge_eff, spec.discharge_eff * min_buy};
}

namespace detail {

inline std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

inline bool align_trace(std::vector<double>& trace, std::size_t horizon, bool allow_scalar,
                        const std::string& what, std::vector<std::string>& issues) {
    if (trace.empty()) {
        trace.assign(horizon, 0.0);
        return true;
    }
    if (allow_scalar && trace.size() == 1 && horizon > 1) {
        trace.assign(horizon, trace.front());
        return true;
    }
    if (trace.size() != horizon) {
        issues.push_back(what + ": length " + std::to_string(trace.size()) + ", expected " +
                         std::to_string(horizon));
        return false;
    }
    return true;
}

}  // namespace detail

/// Checks every invariant of the scenario and returns a copy whose traces
/// are aligned to the horizon (empty traces become zeros, scalar rates are
/// broadcast). Throws ValidationError listing all violations.
inline CommunityScenario validate_scenario(CommunityScenario s) {
    std::vector<std::string> issues;
    using detail::fmt;

    if (s.horizon == 0) {
        issues.push_back("horizon must be at least 1 interval");
        throw ValidationError(std::move(issues));
    }
    const std::size_t T = s.horizon;
    if (s.members.empty()) issues.push_back("community has no members");

    std::set<std::string> ids;
    for (std::size_t i = 0; i < s.members.size(); ++i) {
        auto& m = s.members[i];
        const std::string who = "member " + (m.id.empty() ? "#" + std::to_string(i) : m.id);
        if (m.id.empty()) issues.push_back(who + ": empty id");
        else if (!ids.insert(m.id).second) issues.push_back(who + ": duplicate id");

        for (std::size_t k = 0; k < m.devices.size(); ++k) {
            const auto& d = m.devices[k];
            const std::string dev = who + " device " + std::to_string(k);
            if (!std::isfinite(d.alpha) || !std::isfinite(d.beta) || !std::isfinite(d.d_min) ||
                !std::isfinite(d.d_max)) {
                issues.push_back(dev + ": non-finite parameter");
                continue;
            }
            if (!(d.beta > 0.0)) issues.push_back(dev + ": beta must be > 0 (got " + fmt(d.beta) + ")");
            if (d.alpha < 0.0) issues.push_back(dev + ": alpha must be >= 0 (got " + fmt(d.alpha) + ")");
            if (d.d_min < 0.0) issues.push_back(dev + ": d_min must be >= 0 (got " + fmt(d.d_min) + ")");
            if (d.d_min > d.d_max)
                issues.push_back(dev + ": d_min " + fmt(d.d_min) + " exceeds d_max " + fmt(d.d_max));
        }

        if (detail::align_trace(m.pv_trace, T, false, who + " pv trace", issues)) {
            for (std::size_t t = 0; t < T; ++t)
                if (!(m.pv_trace[t] >= 0.0) || !std::isfinite(m.pv_trace[t]))
                    issues.push_back(who + " interval " + std::to_string(t) +
                                     ": generation must be >= 0 (got " + fmt(m.pv_trace[t]) + ")");
        }
        if (!(m.central_pv_share >= 0.0 && m.central_pv_share <= 1.0))
            issues.push_back(who + ": central PV share must lie in [0, 1] (got " +
                             fmt(m.central_pv_share) + ")");
        if (!(m.bess_share >= 0.0 && m.bess_share <= 1.0))
            issues.push_back(who + ": BESS share must lie in [0, 1] (got " + fmt(m.bess_share) + ")");
    }

    bool rates_ok = detail::align_trace(s.rates.buy, T, true, "buy rates", issues);
    rates_ok = detail::align_trace(s.rates.sell, T, true, "sell rates", issues) && rates_ok;
    if (s.rates.buy.empty() || s.rates.sell.empty()) rates_ok = false;
    if (rates_ok) {
        for (std::size_t t = 0; t < T; ++t) {
            const double b = s.rates.buy[t], sl = s.rates.sell[t];
            if (!(b >= 0.0) || !(sl >= 0.0))
                issues.push_back("interval " + std::to_string(t) + ": rates must be >= 0");
            if (sl > b)
                issues.push_back("interval " + std::to_string(t) + ": sell exceeds buy (sell " + fmt(sl) +
                                 " > buy " + fmt(b) + ")");
        }
    }
    if (!(s.rates.salvage >= 0.0)) issues.push_back("salvage rate must be >= 0");

    if (detail::align_trace(s.central_pv, T, true, "central PV trace", issues)) {
        bool any = false;
        for (std::size_t t = 0; t < T; ++t) {
            if (!(s.central_pv[t] >= 0.0))
                issues.push_back("central PV interval " + std::to_string(t) + ": output must be >= 0");
            any = any || s.central_pv[t] > 0.0;
        }
        if (any) {
            double sum = 0.0;
            for (const auto& m : s.members) sum += m.central_pv_share;
            if (std::abs(sum - 1.0) > kShareSumTol)
                issues.push_back("central PV shares must sum to 1 (got " + fmt(sum) + ")");
        }
    }

    if (s.bess) {
        const auto& b = *s.bess;
        if (!(b.capacity >= 0.0)) issues.push_back("BESS capacity must be >= 0");
        if (!(b.charge_eff > 0.0 && b.charge_eff <= 1.0))
            issues.push_back("BESS charge efficiency must lie in (0, 1] (got " + fmt(b.charge_eff) + ")");
        if (!(b.discharge_eff > 0.0 && b.discharge_eff <= 1.0))
            issues.push_back("BESS discharge efficiency must lie in (0, 1] (got " + fmt(b.discharge_eff) +
                             ")");
        if (!(b.max_charge >= 0.0) || !(b.max_discharge >= 0.0))
            issues.push_back("BESS power limits must be >= 0");
        if (!(b.initial_soc >= 0.0 && b.initial_soc <= b.capacity))
            issues.push_back("BESS initial SoC " + fmt(b.initial_soc) + " outside [0, " + fmt(b.capacity) +
                             "]");
        double sum = 0.0;
        for (const auto& m : s.members) sum += m.bess_share;
        if (!s.members.empty() && std::abs(sum - 1.0) > kShareSumTol)
            issues.push_back("BESS shares must sum to 1 (got " + fmt(sum) + ")");
        if (rates_ok && b.charge_eff > 0.0 && b.discharge_eff > 0.0) {
            const auto [lo, hi] = salvage_bounds(s.rates, b);
            constexpr double slack = 1e-12;
            if (lo > hi + slack)
                issues.push_back("salvage range is empty: max sell / tau = " + fmt(lo) +
                                 " exceeds rho * min buy = " + fmt(hi));
            else if (s.rates.salvage < lo - slack || s.rates.salvage > hi + slack)
                issues.push_back("salvage rate " + fmt(s.rates.salvage) + " outside [" + fmt(lo) + ", " +
                                 fmt(hi) + "]");
        }
    }

    if (!issues.empty()) throw ValidationError(std::move(issues));
    return s;
}

}  // namespace dnem
