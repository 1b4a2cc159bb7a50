#pragma once

// Centrally operated storage. The myopic dispatch is the closed-form policy
// of the single-interval relaxation; SoC limits enter only through the
// effective power limits, which is where infeasible actions get clipped.

#include <algorithm>
#include <stdexcept>

#include "dnem/pricing.hpp"

namespace dnem {

struct EffectiveLimits {
    double discharge = 0.0;  // min(max_discharge, rho * soc)
    double charge = 0.0;     // min(max_charge, (E - soc) / tau)
};

inline EffectiveLimits effective_limits(const BessSpec& spec, double soc) {
    return {std::min(spec.max_discharge, spec.discharge_eff * soc),
            std::max(0.0, std::min(spec.max_charge, (spec.capacity - soc) / spec.charge_eff))};
}

/// x_{t+1} = x_t + tau [b]^+ - [b]^- / rho. Throws std::out_of_range when b
/// exceeds the effective limits at `soc`.
inline double soc_step(const BessSpec& spec, double soc, double battery) {
    const auto lim = effective_limits(spec, soc);
    constexpr double slack = 1e-12;
    if (battery > lim.charge + slack || battery < -lim.discharge - slack)
        throw std::out_of_range("soc_step: storage output outside effective limits");
    const double next =
        battery >= 0.0 ? soc + spec.charge_eff * battery : soc + battery / spec.discharge_eff;
    if (next < -kQuantityTol || next > spec.capacity + kQuantityTol)
        throw std::out_of_range("soc_step: state of charge left [0, E]");
    return std::clamp(next, 0.0, spec.capacity);
}

struct DispatchThresholds {
    double sigma_plus = 0.0;     // sigma_plus_z - eff_discharge
    double sigma_plus_z = 0.0;   // f_N(gamma / rho)
    double sigma_minus_z = 0.0;  // f_N(tau * gamma)
    double sigma_minus = 0.0;    // sigma_minus_z + eff_charge
    double eff_discharge = 0.0;
    double eff_charge = 0.0;
};

inline DispatchThresholds dispatch_thresholds(const AggregateResponseCurve& curve, const BessSpec& spec,
                                              double soc, double salvage) {
    const auto lim = effective_limits(spec, soc);
    DispatchThresholds th;
    th.eff_discharge = lim.discharge;
    th.eff_charge = lim.charge;
    th.sigma_plus_z = curve(salvage / spec.discharge_eff);
    th.sigma_minus_z = curve(spec.charge_eff * salvage);
    th.sigma_plus = th.sigma_plus_z - lim.discharge;
    th.sigma_minus = th.sigma_minus_z + lim.charge;
    return th;
}

struct Dispatch {
    double battery = 0.0;  // b*: > 0 charging, < 0 discharging
    DispatchThresholds thresholds;
};

inline double threshold_dispatch(const DispatchThresholds& th, double g_N) {
    if (g_N <= th.sigma_plus) return -th.eff_discharge;
    if (g_N < th.sigma_plus_z) return g_N - th.sigma_plus_z;
    if (g_N <= th.sigma_minus_z) return 0.0;
    if (g_N < th.sigma_minus) return g_N - th.sigma_minus_z;
    return th.eff_charge;
}

inline Dispatch myopic_dispatch(const AggregateResponseCurve& curve, double g_N, const BessSpec& spec, double soc,
                                double salvage) {
    Dispatch d;
    d.thresholds = dispatch_thresholds(curve, spec, soc, salvage);
    d.battery = threshold_dispatch(d.thresholds, g_N);
    return d;
}

struct GeneralizedPrice {
    CommunityPrice price;
    double battery = 0.0;
    DispatchThresholds thresholds;
    double delta_plus = 0.0;   // f_N(buy) - eff_discharge
    double delta_minus = 0.0;  // f_N(sell) + eff_charge
};

/// Community price with storage. Seven zones in g_N:
///   (-inf, D+]       buy rate, full discharge
///   (D+, s+)         f_N(mu) = g + B_dis, full discharge
///   [s+, s+z)        gamma / rho, storage follows g
///   [s+z, s-z]       f_N(mu) = g, storage idle
///   (s-z, s-]        tau * gamma, storage follows g
///   (s-, D-)         f_N(mu) = g - B_chg, full charge
///   [D-, inf)        sell rate, full charge
/// When storage cannot move at all this is exactly the storage-free price.
inline GeneralizedPrice generalized_dnem_price(const AggregateResponseCurve& curve, double g_N,
                                               const BessSpec& spec, double soc, double salvage, double buy,
                                               double sell) {
    GeneralizedPrice out;
    const auto dispatch = myopic_dispatch(curve, g_N, spec, soc, salvage);
    out.battery = dispatch.battery;
    out.thresholds = dispatch.thresholds;
    const auto& th = dispatch.thresholds;
    const auto base = compute_thresholds(curve, buy, sell);
    out.delta_plus = base.lower - th.eff_discharge;
    out.delta_minus = base.upper + th.eff_charge;

    if (th.eff_discharge == 0.0 && th.eff_charge == 0.0) {
        out.price = dnem_price(curve, g_N, buy, sell);
        return out;
    }

    const double discharge_price = salvage / spec.discharge_eff;
    const double charge_price = spec.charge_eff * salvage;
    if (g_N <= out.delta_plus) {
        out.price = {buy, Zone::NetConsumption, false};
    } else if (g_N < th.sigma_plus) {
        const auto inv = solve_aggregate(curve, g_N + th.eff_discharge, discharge_price, buy);
        out.price = {inv.price, Zone::NetZeroDischargeDynamic, inv.on_plateau};
    } else if (g_N < th.sigma_plus_z) {
        out.price = {discharge_price, Zone::NetZeroDischargeFlat, false};
    } else if (g_N <= th.sigma_minus_z) {
        const auto inv = solve_aggregate(curve, g_N, charge_price, discharge_price);
        out.price = {inv.price, Zone::NetZeroIdle, inv.on_plateau};
    } else if (g_N <= th.sigma_minus) {
        out.price = {charge_price, Zone::NetZeroChargeFlat, false};
    } else if (g_N < out.delta_minus) {
        const auto inv = solve_aggregate(curve, g_N - th.eff_charge, sell, charge_price);
        out.price = {inv.price, Zone::NetZeroChargeDynamic, inv.on_plateau};
    } else {
        out.price = {sell, Zone::NetProduction, false};
    }
    return out;
}

}  // namespace dnem
