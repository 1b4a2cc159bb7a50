#pragma once

// Multi-interval driver. Intervals of one scenario run in order because the
// storage state threads through them; everything else is recomputed per
// interval from the scenario.

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dnem/welfare.hpp"

namespace dnem {

enum class Mechanism { DNem, SignBased, Standalone };

inline constexpr std::string_view to_string(Mechanism m) {
    switch (m) {
        case Mechanism::DNem: return "dnem";
        case Mechanism::SignBased: return "sign_based";
        case Mechanism::Standalone: return "standalone";
    }
    return "?";
}

inline std::optional<Mechanism> parse_mechanism(std::string_view s) {
    for (Mechanism m : {Mechanism::DNem, Mechanism::SignBased, Mechanism::Standalone})
        if (to_string(m) == s) return m;
    return std::nullopt;
}

struct IntervalRecord {
    std::size_t t = 0;
    CommunityPrice price;  // for standalone: the NEM rate that applies to z_N
    double g_N = 0.0;
    double d_N = 0.0;
    double b_N = 0.0;
    double z_N = 0.0;
    double soc = 0.0;  // stored energy at the end of the interval
    std::vector<MemberOutcome> per_member;
};

using ZoneHistogram = std::array<std::size_t, kAllZones.size()>;

struct RunSummary {
    double total_welfare = 0.0;              // sum of member rewards over the horizon
    std::vector<double> per_member_surplus;  // horizon sums
    std::vector<double> per_member_reward;
    std::optional<double> welfare_gain_vs_standalone;
    std::optional<double> welfare_gain_vs_sign_based;
    ZoneHistogram zone_histogram{};

    std::size_t net_zero_intervals() const {
        std::size_t n = 0;
        for (std::size_t z = 0; z < kAllZones.size(); ++z)
            if (is_net_zero(kAllZones[z])) n += zone_histogram[z];
        return n;
    }
};

struct RunResult {
    Mechanism mechanism = Mechanism::DNem;
    std::vector<IntervalRecord> records;
    RunSummary summary;
};

/// Runs one mechanism over the horizon. The scenario must already be validated.
inline std::vector<IntervalRecord> simulate(const CommunityScenario& s, Mechanism mechanism) {
    std::vector<IntervalRecord> records;
    records.reserve(s.horizon);
    const auto curve = AggregateResponseCurve::of(s.members);
    double soc = s.bess ? s.bess->initial_soc : 0.0;
    auto member_soc = initial_member_soc(s);

    for (std::size_t t = 0; t < s.horizon; ++t) {
        IntervalRecord rec;
        rec.t = t;
        const auto g = member_generation(s, t);
        for (double gi : g) rec.g_N += gi;
        const double buy = s.rates.buy_at(t), sell = s.rates.sell_at(t);

        switch (mechanism) {
            case Mechanism::DNem: {
                double battery = 0.0;
                if (s.bess) {
                    const auto gp =
                        generalized_dnem_price(curve, rec.g_N, *s.bess, soc, s.rates.salvage, buy, sell);
                    rec.price = gp.price;
                    battery = gp.battery;
                    soc = soc_step(*s.bess, soc, battery);
                } else {
                    rec.price = dnem_price(curve, rec.g_N, buy, sell);
                }
                for (std::size_t i = 0; i < s.members.size(); ++i) {
                    const auto& m = s.members[i];
                    const double share = s.bess ? m.bess_share * battery : 0.0;
                    rec.per_member.push_back(s.bess ? member_outcome(m, rec.price, g[i], share, s.rates.salvage,
                                                                     s.bess->charge_eff, s.bess->discharge_eff)
                                                    : member_outcome(m, rec.price, g[i]));
                }
                rec.soc = soc;
                break;
            }
            case Mechanism::SignBased: {
                auto sb = sign_based_interval(s, t, member_soc);
                rec.price = sb.price;
                rec.per_member = std::move(sb.outcomes);
                member_soc = std::move(sb.next_soc);
                break;
            }
            case Mechanism::Standalone: {
                for (std::size_t i = 0; i < s.members.size(); ++i) {
                    const auto& m = s.members[i];
                    if (s.bess) {
                        auto step = standalone_bess_step(m, g[i], scale_bess(*s.bess, m.bess_share),
                                                         member_soc[i], s.rates.salvage, buy, sell);
                        member_soc[i] = step.next_soc;
                        rec.per_member.push_back(std::move(step.outcome));
                    } else {
                        rec.per_member.push_back(standalone_optimum(m, g[i], buy, sell));
                    }
                }
                break;
            }
        }

        for (const auto& o : rec.per_member) {
            rec.d_N += o.total_consumption();
            rec.b_N += o.battery;
        }
        rec.z_N = rec.d_N + rec.b_N - rec.g_N;
        if (mechanism == Mechanism::Standalone)
            rec.price = rec.z_N >= 0.0 ? CommunityPrice{buy, Zone::NetConsumption, false}
                                       : CommunityPrice{sell, Zone::NetProduction, false};
        if (mechanism != Mechanism::DNem) {
            rec.soc = 0.0;
            for (double x : member_soc) rec.soc += x;
        }
        records.push_back(std::move(rec));
    }
    return records;
}

inline RunSummary summarize(const std::vector<IntervalRecord>& records, std::size_t member_count) {
    RunSummary out;
    out.per_member_surplus.assign(member_count, 0.0);
    out.per_member_reward.assign(member_count, 0.0);
    for (const auto& r : records) {
        for (std::size_t i = 0; i < r.per_member.size(); ++i) {
            out.per_member_surplus[i] += r.per_member[i].surplus;
            out.per_member_reward[i] += r.per_member[i].reward;
            out.total_welfare += r.per_member[i].reward;
        }
        ++out.zone_histogram[static_cast<std::size_t>(r.price.zone)];
    }
    return out;
}

inline double total_welfare(const CommunityScenario& validated, Mechanism m) {
    return summarize(simulate(validated, m), validated.members.size()).total_welfare;
}

/// Validates, runs `mechanism`, and fills the summary gains by also running
/// the standalone and sign-based baselines.
inline RunResult run(const CommunityScenario& scenario, Mechanism mechanism) {
    const auto s = validate_scenario(scenario);
    RunResult out;
    out.mechanism = mechanism;
    out.records = simulate(s, mechanism);
    out.summary = summarize(out.records, s.members.size());
    const double w = out.summary.total_welfare;
    const double w_standalone = mechanism == Mechanism::Standalone ? w : total_welfare(s, Mechanism::Standalone);
    const double w_sign = mechanism == Mechanism::SignBased ? w : total_welfare(s, Mechanism::SignBased);
    if (w_standalone != 0.0) out.summary.welfare_gain_vs_standalone = welfare_gain(w, w_standalone);
    if (w_sign != 0.0) out.summary.welfare_gain_vs_sign_based = welfare_gain(w, w_sign);
    return out;
}

struct SweepRow {
    double ratio = 0.0;
    double dnem_gain = 0.0;        // % over standalone
    double sign_based_gain = 0.0;  // % over standalone
};

/// Re-runs the scenario with sell = ratio * buy for each ratio. Needs a flat
/// buy rate; with storage the salvage rate is revalidated per ratio and a
/// ValidationError names the first infeasible ratio.
inline std::vector<SweepRow> rate_ratio_sweep(const CommunityScenario& scenario, const std::vector<double>& ratios) {
    auto base = validate_scenario(scenario);
    const double buy = base.rates.buy.front();
    for (double b : base.rates.buy)
        if (b != buy) throw std::invalid_argument("rate_ratio_sweep: requires a flat buy rate");

    std::vector<SweepRow> rows;
    for (double ratio : ratios) {
        if (!(ratio >= 0.0 && ratio <= 1.0))
            throw std::invalid_argument("rate_ratio_sweep: ratio must lie in [0, 1]");
        auto s = base;
        s.rates.sell.assign(s.horizon, ratio * buy);
        try {
            s = validate_scenario(std::move(s));
        } catch (const ValidationError& e) {
            throw ValidationError({"ratio " + detail::fmt(ratio) + ": " + e.what()});
        }
        const double w_standalone = total_welfare(s, Mechanism::Standalone);
        rows.push_back({ratio, welfare_gain(total_welfare(s, Mechanism::DNem), w_standalone),
                        welfare_gain(total_welfare(s, Mechanism::SignBased), w_standalone)});
    }
    return rows;
}

}  // namespace dnem
