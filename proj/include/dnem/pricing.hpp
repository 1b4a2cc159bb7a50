#pragma once

// Dynamic NEM community pricing without storage. The operator compares the
// community's aggregate generation g_N with two generation-independent
// thresholds f_N(buy) <= f_N(sell): below the first it passes the buy rate,
// above the second the sell rate, and in between it announces the price that
// makes aggregate demand absorb g_N exactly.

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "dnem/curves.hpp"

namespace dnem {

enum class Zone {
    NetConsumption,
    NetZeroDischargeDynamic,
    NetZeroDischargeFlat,
    NetZeroIdle,
    NetZeroChargeFlat,
    NetZeroChargeDynamic,
    NetProduction,
};

inline constexpr std::array<Zone, 7> kAllZones = {
    Zone::NetConsumption,    Zone::NetZeroDischargeDynamic, Zone::NetZeroDischargeFlat, Zone::NetZeroIdle,
    Zone::NetZeroChargeFlat, Zone::NetZeroChargeDynamic,    Zone::NetProduction,
};

inline constexpr std::string_view to_string(Zone z) {
    switch (z) {
        case Zone::NetConsumption: return "NetConsumption";
        case Zone::NetZeroDischargeDynamic: return "NetZeroDischargeDynamic";
        case Zone::NetZeroDischargeFlat: return "NetZeroDischargeFlat";
        case Zone::NetZeroIdle: return "NetZeroIdle";
        case Zone::NetZeroChargeFlat: return "NetZeroChargeFlat";
        case Zone::NetZeroChargeDynamic: return "NetZeroChargeDynamic";
        case Zone::NetProduction: return "NetProduction";
    }
    return "?";
}

inline std::optional<Zone> parse_zone(std::string_view s) {
    for (Zone z : kAllZones)
        if (to_string(z) == s) return z;
    return std::nullopt;
}

inline constexpr bool is_net_zero(Zone z) { return z != Zone::NetConsumption && z != Zone::NetProduction; }

struct CommunityPrice {
    double value = 0.0;
    Zone zone = Zone::NetConsumption;
    bool on_plateau = false;  // net-zero price picked as a plateau midpoint
};

struct PricingThresholds {
    double lower = 0.0;  // f_N(buy)
    double upper = 0.0;  // f_N(sell)
};

inline PricingThresholds compute_thresholds(const AggregateResponseCurve& curve, double buy, double sell) {
    return {curve(buy), curve(sell)};
}

/// Net-zero interval is closed: both threshold points are priced by inversion.
inline CommunityPrice dnem_price(const AggregateResponseCurve& curve, double g_N, double buy, double sell) {
    const auto th = compute_thresholds(curve, buy, sell);
    if (g_N < th.lower) return {buy, Zone::NetConsumption, false};
    if (g_N > th.upper) return {sell, Zone::NetProduction, false};
    const auto inv = solve_aggregate(curve, g_N, sell, buy);
    return {inv.price, Zone::NetZeroIdle, inv.on_plateau};
}

/// Uniform linear community payment.
inline double payment(const CommunityPrice& price, double z) { return price.value * z; }

/// Utility NEM bill: buy rate on imports, sell rate on exports.
inline double nem_payment(double buy, double sell, double z) { return z >= 0.0 ? buy * z : sell * z; }

}  // namespace dnem
