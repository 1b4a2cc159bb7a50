#pragma once

// Baselines a community mechanism is measured against: the optimal
// standalone prosumer facing the utility's NEM tariff on its own, and the
// sign-based community rule that bills everyone at the buy or sell rate
// depending on the sign of aggregate net consumption.

#include <optional>
#include <span>
#include <vector>

#include "dnem/bess.hpp"
#include "dnem/response.hpp"

namespace dnem {

/// Two-threshold standalone policy: import at the buy-rate response, export
/// at the sell-rate response, and in between consume exactly the own
/// generation.
inline MemberOutcome standalone_optimum(const Member& member, double generation, double buy, double sell) {
    const auto own = AggregateResponseCurve::of(member);
    const auto th = compute_thresholds(own, buy, sell);
    double price = buy;
    if (generation > th.upper) price = sell;
    else if (generation >= th.lower) price = invert_aggregate(own, generation, sell, buy);

    MemberOutcome out;
    out.consumption = optimal_consumption(member, price);
    out.net = out.total_consumption() - generation;
    out.payment = nem_payment(buy, sell, out.net);
    out.surplus = member.utility(out.consumption) - out.payment;
    out.reward = out.surplus;
    return out;
}

struct StandaloneStep {
    MemberOutcome outcome;
    CommunityPrice own_price;  // the single-member shadow price
    double next_soc = 0.0;
};

/// One interval of a standalone prosumer running its own storage under the
/// myopic threshold policy (the single-member case of the community policy).
inline StandaloneStep standalone_bess_step(const Member& member, double generation, const BessSpec& own_bess,
                                           double soc, double salvage, double buy, double sell) {
    const auto own = AggregateResponseCurve::of(member);
    const auto gp = generalized_dnem_price(own, generation, own_bess, soc, salvage, buy, sell);
    StandaloneStep step;
    step.own_price = gp.price;
    auto& out = step.outcome;
    out.consumption = optimal_consumption(member, gp.price.value);
    out.battery = gp.battery;
    out.net = out.total_consumption() + gp.battery - generation;
    out.payment = nem_payment(buy, sell, out.net);
    out.surplus = member.utility(out.consumption) - out.payment;
    out.reward = out.surplus + salvage_value(gp.battery, salvage, own_bess.charge_eff, own_bess.discharge_eff);
    step.next_soc = soc_step(own_bess, soc, gp.battery);
    return step;
}

/// `generation[t]` is the member's (folded) generation; `own_bess` is already
/// scaled to the member's share.
inline std::vector<MemberOutcome> standalone_optimum_with_bess(const Member& member, const BessSpec& own_bess,
                                                               std::span<const double> generation,
                                                               const RateSchedule& rates) {
    std::vector<MemberOutcome> out;
    out.reserve(generation.size());
    double soc = own_bess.initial_soc;
    for (std::size_t t = 0; t < generation.size(); ++t) {
        auto step = standalone_bess_step(member, generation[t], own_bess, soc, rates.salvage, rates.buy_at(t),
                                         rates.sell_at(t));
        soc = step.next_soc;
        out.push_back(std::move(step.outcome));
    }
    return out;
}

/// Member generation at interval t with central PV folded in.
inline std::vector<double> member_generation(const CommunityScenario& s, std::size_t t) {
    std::vector<double> g;
    g.reserve(s.members.size());
    const double central = s.central_pv.empty() ? 0.0 : s.central_pv.at(t);
    for (const auto& m : s.members) g.push_back(fold_central_pv(m, t, central));
    return g;
}

inline std::vector<double> initial_member_soc(const CommunityScenario& s) {
    std::vector<double> soc;
    if (!s.bess) return soc;
    for (const auto& m : s.members) soc.push_back(m.bess_share * s.bess->initial_soc);
    return soc;
}

struct SignBasedInterval {
    CommunityPrice price;
    std::vector<MemberOutcome> outcomes;
    std::vector<double> next_soc;  // per member; empty without storage
    double z_N = 0.0;
};

/// Members schedule as optimal standalone prosumers (each with its storage
/// share when the scenario has storage); the community then bills every
/// member at the buy rate if z_N >= 0 and at the sell rate otherwise.
/// `member_soc` is ignored without storage.
inline SignBasedInterval sign_based_interval(const CommunityScenario& s, std::size_t t,
                                             std::span<const double> member_soc) {
    const auto g = member_generation(s, t);
    const double buy = s.rates.buy_at(t), sell = s.rates.sell_at(t);
    SignBasedInterval out;
    out.outcomes.reserve(s.members.size());
    for (std::size_t i = 0; i < s.members.size(); ++i) {
        const auto& m = s.members[i];
        if (s.bess) {
            const auto own = scale_bess(*s.bess, m.bess_share);
            auto step = standalone_bess_step(m, g[i], own, member_soc[i], s.rates.salvage, buy, sell);
            out.next_soc.push_back(step.next_soc);
            out.outcomes.push_back(std::move(step.outcome));
        } else {
            out.outcomes.push_back(standalone_optimum(m, g[i], buy, sell));
        }
        out.z_N += out.outcomes.back().net;
    }
    out.price = out.z_N >= 0.0 ? CommunityPrice{buy, Zone::NetConsumption, false}
                               : CommunityPrice{sell, Zone::NetProduction, false};
    for (std::size_t i = 0; i < out.outcomes.size(); ++i) {
        auto& o = out.outcomes[i];
        const double storage_term =
            s.bess ? salvage_value(o.battery, s.rates.salvage, s.bess->charge_eff, s.bess->discharge_eff) : 0.0;
        o.payment = payment(out.price, o.net);
        o.surplus = s.members[i].utility(o.consumption) - o.payment;
        o.reward = o.surplus + storage_term;
    }
    return out;
}

inline SignBasedInterval sign_based_mechanism(const CommunityScenario& s, std::size_t t) {
    const auto soc = initial_member_soc(s);
    return sign_based_interval(s, t, soc);
}

}  // namespace dnem
