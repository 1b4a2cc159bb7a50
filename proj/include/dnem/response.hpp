#pragma once

// Price-taking members: each device is scheduled where marginal utility meets
// the announced price, and the member's net consumption is settled at that
// single rate whatever its sign.

#include <numeric>
#include <span>
#include <vector>

#include "dnem/pricing.hpp"

namespace dnem {

struct MemberOutcome {
    std::vector<double> consumption;  // per device
    double battery = 0.0;             // storage output attributed to the member
    double net = 0.0;                 // z_i = sum(d) + b_i - g_i
    double payment = 0.0;
    double surplus = 0.0;             // U(d) - payment
    double reward = 0.0;              // surplus plus salvage-valued storage change

    double total_consumption() const { return std::accumulate(consumption.begin(), consumption.end(), 0.0); }
};

inline std::vector<double> optimal_consumption(const Member& member, double price) {
    std::vector<double> d;
    d.reserve(member.devices.size());
    for (const auto& dev : member.devices) d.push_back(device_response(dev, price));
    return d;
}

/// gamma * (tau [b]^+ - [b]^- / rho): value of energy moved into storage.
inline double salvage_value(double battery, double salvage, double charge_eff, double discharge_eff) {
    return battery >= 0.0 ? salvage * charge_eff * battery : salvage * battery / discharge_eff;
}

/// Settles a member against an announced community price. The member plans
/// against its modified generation g - b_i; with a linear price the argmax
/// does not depend on it, only the netting does.
inline MemberOutcome member_outcome(const Member& member, const CommunityPrice& price, double generation,
                                    double battery_share = 0.0, double salvage = 0.0, double charge_eff = 1.0,
                                    double discharge_eff = 1.0) {
    MemberOutcome out;
    out.consumption = optimal_consumption(member, price.value);
    out.battery = battery_share;
    const double available = generation - battery_share;
    out.net = out.total_consumption() - available;
    out.payment = payment(price, out.net);
    out.surplus = member.utility(out.consumption) - out.payment;
    out.reward = out.surplus + salvage_value(battery_share, salvage, charge_eff, discharge_eff);
    return out;
}

/// One interval of a storage-free D-NEM community.
struct Settlement {
    CommunityPrice price;
    std::vector<MemberOutcome> outcomes;
    double g_N = 0.0;
    double d_N = 0.0;
    double z_N = 0.0;

    double total_surplus() const {
        double s = 0.0;
        for (const auto& o : outcomes) s += o.surplus;
        return s;
    }
    double total_payment() const {
        double s = 0.0;
        for (const auto& o : outcomes) s += o.payment;
        return s;
    }
};

inline Settlement settle_dnem(std::span<const Member> members, std::span<const double> generation, double buy,
                              double sell) {
    Settlement s;
    const auto curve = AggregateResponseCurve::of(members);
    for (double g : generation) s.g_N += g;
    s.price = dnem_price(curve, s.g_N, buy, sell);
    s.outcomes.reserve(members.size());
    for (std::size_t i = 0; i < members.size(); ++i) {
        s.outcomes.push_back(member_outcome(members[i], s.price, generation[i]));
        s.d_N += s.outcomes.back().total_consumption();
        s.z_N += s.outcomes.back().net;
    }
    return s;
}

}  // namespace dnem
