#pragma once

// Centralized-welfare references and the mechanism audits.
//
// Two independent routes to the centralized optimum are provided: the
// three-piece closed form built on the response curve, and a grid search
// over consumption vectors that never touches the curve machinery.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dnem/benchmark.hpp"

namespace dnem {

inline constexpr double kRationalityTol = 1e-9;  // $
inline constexpr double kProfitGapTol = 1e-6;    // $

/// Sum of device utilities at the price response y.
inline double utility_at_price(const AggregateResponseCurve& curve, double price) {
    double u = 0.0;
    for (const auto& d : curve.devices()) u += d.value(device_response(d, price));
    return u;
}

/// Maximum community welfare sum U - P_NEM(z_N) under central control.
inline double centralized_welfare_closed_form(const AggregateResponseCurve& curve, double g_N, double buy,
                                              double sell) {
    const auto th = compute_thresholds(curve, buy, sell);
    if (g_N < th.lower) return utility_at_price(curve, buy) - buy * (th.lower - g_N);
    if (g_N > th.upper) return utility_at_price(curve, sell) - sell * (th.upper - g_N);
    return utility_at_price(curve, invert_aggregate(curve, g_N, sell, buy));
}

inline constexpr std::size_t kBruteForceMaxDevices = 4;

/// Grid maximization of sum U_k(d_k) - P_NEM(sum d - g_N) over the box of
/// consumption bounds. A coarse full grid is followed by local re-centred
/// searches, each level ten times finer, until the step is two decades
/// below `grid_step`. Throws std::length_error past four devices.
inline double centralized_welfare_bruteforce(std::span<const DeviceUtility> devices, double g_N, double buy,
                                             double sell, double grid_step = 1e-3) {
    const std::size_t K = devices.size();
    if (K > kBruteForceMaxDevices) throw std::length_error("centralized_welfare_bruteforce: instance too large");
    if (!(grid_step > 0.0)) throw std::invalid_argument("centralized_welfare_bruteforce: grid_step must be > 0");

    auto objective = [&](const std::vector<double>& d) {
        double u = 0.0, total = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
            u += devices[k].value(d[k]);
            total += d[k];
        }
        const double z = total - g_N;
        return u - (z >= 0.0 ? buy * z : sell * z);
    };

    std::vector<double> best(K), step(K);
    for (std::size_t k = 0; k < K; ++k) {
        best[k] = devices[k].d_min;
        step[k] = std::max(grid_step, (devices[k].d_max - devices[k].d_min) / 24.0);
    }
    double best_value = objective(best);
    if (K == 0) return best_value;

    // Odometer over a per-dimension list of candidate coordinates.
    auto sweep = [&](const std::vector<std::vector<double>>& axes) {
        std::vector<std::size_t> idx(K, 0);
        std::vector<double> d(K);
        bool improved = false;
        while (true) {
            for (std::size_t k = 0; k < K; ++k) d[k] = axes[k][idx[k]];
            const double v = objective(d);
            if (v > best_value) {
                best_value = v;
                best = d;
                improved = true;
            }
            std::size_t k = 0;
            while (k < K && ++idx[k] == axes[k].size()) idx[k++] = 0;
            if (k == K) break;
        }
        return improved;
    };

    std::vector<std::vector<double>> axes(K);
    for (std::size_t k = 0; k < K; ++k) {
        const auto& dev = devices[k];
        for (double x = dev.d_min; x < dev.d_max; x += step[k]) axes[k].push_back(x);
        axes[k].push_back(dev.d_max);
    }
    sweep(axes);

    constexpr int window = 3;
    const double finest = grid_step / 100.0;
    while (true) {
        for (int iter = 0; iter < 100; ++iter) {
            for (std::size_t k = 0; k < K; ++k) {
                axes[k].clear();
                for (int j = -window; j <= window; ++j)
                    axes[k].push_back(std::clamp(best[k] + j * step[k], devices[k].d_min, devices[k].d_max));
            }
            if (!sweep(axes)) break;
        }
        if (std::all_of(step.begin(), step.end(), [&](double h) { return h <= finest; })) break;
        for (auto& h : step) h = std::max(h / 10.0, finest);
    }
    return best_value;
}

// --------------------------------------------------------------------------
// Axiom audit

struct AuditCheck {
    std::string name;
    bool passed = true;
    double slack = 0.0;  // >= 0 when satisfied; the worst observed margin
    std::string detail;
};

struct AxiomReport {
    std::vector<AuditCheck> checks;

    bool passed() const {
        return std::all_of(checks.begin(), checks.end(), [](const AuditCheck& c) { return c.passed; });
    }
    const AuditCheck* find(const std::string& name) const {
        for (const auto& c : checks)
            if (c.name == name) return &c;
        return nullptr;
    }
};

/// Payment charged to member `i` for net consumption `z`.
using PaymentRule = std::function<double(std::size_t member, double z)>;

struct AuditInput {
    std::span<const MemberOutcome> outcomes;    // mechanism outcomes: net and surplus are read
    std::span<const double> benchmark_surplus;  // standalone optimum per member
    PaymentRule rule;
    double buy = 0.0;
    double sell = 0.0;
};

/// Checks uniform payment, monotonicity with P(0) = 0, individual
/// rationality and profit neutrality. Probe net-consumption values are drawn
/// from a seeded generator in addition to the members' own.
inline AxiomReport axiom_audit(const AuditInput& in, std::uint64_t seed = 0, std::size_t probes = 16) {
    const std::size_t N = in.outcomes.size();
    std::vector<double> zs;
    double zmax = 1.0;
    for (const auto& o : in.outcomes) {
        zs.push_back(o.net);
        zmax = std::max(zmax, std::abs(o.net));
    }
    std::mt19937_64 rng(seed);
    for (std::size_t p = 0; p < probes; ++p) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        zs.push_back((2.0 * u - 1.0) * zmax);
    }
    auto tol = [](double v) { return 1e-12 * std::max(1.0, std::abs(v)); };

    AxiomReport rep;

    AuditCheck uniform{"uniform_payment", true, 0.0, ""};
    for (double z : zs) {
        const double p0 = in.rule(0, z);
        for (std::size_t i = 1; i < N; ++i) {
            const double dev = std::abs(in.rule(i, z) - p0);
            if (-dev < uniform.slack) uniform.slack = -dev;
            if (dev > tol(p0) && uniform.passed) {
                uniform.passed = false;
                uniform.detail = "members 0 and " + std::to_string(i) + " pay differently at z=" + std::to_string(z);
            }
        }
    }
    rep.checks.push_back(uniform);

    AuditCheck mono{"monotonicity", true, 0.0, ""};
    auto fail_mono = [&](double margin, const std::string& why) {
        mono.slack = std::min(mono.slack, margin);
        if (mono.passed) {
            mono.passed = false;
            mono.detail = why;
        }
    };
    for (std::size_t i = 0; i < N; ++i) {
        const double p0 = in.rule(i, 0.0);
        if (std::abs(p0) > 1e-12) fail_mono(-std::abs(p0), "member " + std::to_string(i) + ": P(0) != 0");
        for (double z : zs) {
            const double p = in.rule(i, z);
            if (z > 0.0 && p < -tol(p)) fail_mono(p, "member " + std::to_string(i) + ": negative payment on import");
            if (z < 0.0 && p > tol(p)) fail_mono(-p, "member " + std::to_string(i) + ": positive payment on export");
        }
    }
    for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t j = 0; j < N; ++j) {
            const double zi = in.outcomes[i].net, zj = in.outcomes[j].net;
            if (i == j || zi * zj < 0.0 || std::abs(zi) < std::abs(zj)) continue;
            const double margin = std::abs(in.rule(i, zi)) - std::abs(in.rule(j, zj));
            if (margin < -tol(margin))
                fail_mono(margin, "members " + std::to_string(i) + "," + std::to_string(j) +
                                      ": larger net consumption with smaller payment");
        }
    }
    rep.checks.push_back(mono);

    AuditCheck rational{"individual_rationality", true, std::numeric_limits<double>::infinity(), ""};
    for (std::size_t i = 0; i < N && i < in.benchmark_surplus.size(); ++i) {
        const double s = in.outcomes[i].surplus - in.benchmark_surplus[i];
        if (s < rational.slack) rational.slack = s;
        if (s < -kRationalityTol && rational.passed) {
            rational.passed = false;
            rational.detail = "member " + std::to_string(i) + " below standalone surplus by " + std::to_string(-s);
        }
    }
    if (N == 0 || in.benchmark_surplus.empty()) rational.slack = 0.0;
    rep.checks.push_back(rational);

    double collected = 0.0, z_N = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        collected += in.rule(i, in.outcomes[i].net);
        z_N += in.outcomes[i].net;
    }
    const double gap = collected - nem_payment(in.buy, in.sell, z_N);
    AuditCheck neutral{"profit_neutrality", std::abs(gap) <= kProfitGapTol, kProfitGapTol - std::abs(gap), ""};
    if (!neutral.passed) neutral.detail = "profit gap " + std::to_string(gap);
    rep.checks.push_back(neutral);
    return rep;
}

// --------------------------------------------------------------------------
// Coalitions

struct CoalitionResult {
    double superset_sum = 0.0;  // sum over H of surpluses when H sits inside S
    double subset_sum = 0.0;    // sum over H of surpluses when H stands alone
    bool passed = true;

    double slack() const { return superset_sum - subset_sum; }
};

/// Runs D-NEM on S and on H as separate communities and compares the total
/// surplus of H's members in both. Requires H subset of S.
inline CoalitionResult coalition_audit(std::span<const Member> members, std::span<const double> generation,
                                       std::span<const std::size_t> subset, std::span<const std::size_t> superset,
                                       double buy, double sell) {
    for (std::size_t i : superset)
        if (i >= members.size()) throw std::invalid_argument("coalition_audit: member index out of range");
    for (std::size_t i : subset)
        if (std::find(superset.begin(), superset.end(), i) == superset.end())
            throw std::invalid_argument("coalition_audit: subset is not contained in superset");

    auto gather = [&](std::span<const std::size_t> idx) {
        std::pair<std::vector<Member>, std::vector<double>> out;
        for (std::size_t i : idx) {
            out.first.push_back(members[i]);
            out.second.push_back(generation[i]);
        }
        return out;
    };
    const auto [s_members, s_gen] = gather(superset);
    const auto [h_members, h_gen] = gather(subset);
    const auto in_s = settle_dnem(s_members, s_gen, buy, sell);
    const auto in_h = settle_dnem(h_members, h_gen, buy, sell);

    CoalitionResult r;
    for (std::size_t a = 0; a < subset.size(); ++a) {
        const auto pos = std::find(superset.begin(), superset.end(), subset[a]) - superset.begin();
        r.superset_sum += in_s.outcomes[static_cast<std::size_t>(pos)].surplus;
        r.subset_sum += in_h.outcomes[a].surplus;
    }
    r.passed = r.superset_sum >= r.subset_sum - kRationalityTol;
    return r;
}

// --------------------------------------------------------------------------
// Metrics

/// Percentage gain of a mechanism over a baseline, relative to |baseline|.
inline double welfare_gain(double mechanism_welfare, double baseline_welfare) {
    if (baseline_welfare == 0.0) throw std::domain_error("welfare_gain: zero baseline");
    return 100.0 * (mechanism_welfare - baseline_welfare) / std::abs(baseline_welfare);
}

struct MemberGain {
    std::string id;
    std::optional<double> gain_pct;  // empty when the standalone surplus is zero
};

struct WelfareReport {
    double decentralized_welfare = 0.0;
    double centralized_welfare = 0.0;
    std::vector<MemberGain> per_member_gains;
    double profit_gap = 0.0;
};

inline WelfareReport welfare_report(std::span<const Member> members, const Settlement& settlement,
                                    std::span<const double> standalone_surplus, double centralized, double buy,
                                    double sell) {
    WelfareReport rep;
    rep.centralized_welfare = centralized;
    for (std::size_t i = 0; i < members.size(); ++i) {
        const auto& o = settlement.outcomes[i];
        rep.decentralized_welfare += o.surplus;
        MemberGain g{members[i].id, std::nullopt};
        if (standalone_surplus[i] != 0.0) g.gain_pct = welfare_gain(o.surplus, standalone_surplus[i]);
        rep.per_member_gains.push_back(std::move(g));
    }
    rep.profit_gap = settlement.total_payment() - nem_payment(buy, sell, settlement.z_N);
    return rep;
}

}  // namespace dnem
