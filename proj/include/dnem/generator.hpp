#pragma once

// Seeded scenario generators. Draws come from mt19937_64 mapped to [0, 1)
// by hand so the same seed gives the same scenario on every platform.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>

#include "dnem/curves.hpp"
#include "dnem/model.hpp"

namespace dnem {

class ScenarioRng {
public:
    explicit ScenarioRng(std::uint64_t seed) : engine_(seed) {}

    double uniform(double lo = 0.0, double hi = 1.0) {
        return lo + (hi - lo) * (static_cast<double>(engine_() >> 11) * 0x1.0p-53);
    }
    std::size_t index(std::size_t lo, std::size_t hi) {  // inclusive
        return lo + static_cast<std::size_t>(engine_() % (hi - lo + 1));
    }
    bool chance(double p) { return uniform() < p; }

private:
    std::mt19937_64 engine_;
};

struct GeneratorOptions {
    std::size_t min_members = 2;
    std::size_t max_members = 10;
    std::size_t min_devices = 1;
    std::size_t max_devices = 3;
    std::size_t min_horizon = 1;
    std::size_t max_horizon = 24;
    std::size_t max_total_devices = 0;  // 0: unbounded
    bool with_bess = false;
    bool with_central_pv = true;
};

inline DeviceUtility random_device(ScenarioRng& rng) {
    DeviceUtility d;
    d.alpha = rng.uniform(0.5, 5.0);
    d.beta = rng.uniform(0.1, 3.0);
    d.d_min = rng.uniform(0.0, 1.5);
    d.d_max = d.d_min + rng.uniform(0.0, 5.0 - d.d_min);
    return d;
}

/// Random valid community. Generation is drawn per interval around the
/// community's pricing thresholds so that every price zone gets visited.
inline CommunityScenario random_scenario(std::uint64_t seed, const GeneratorOptions& opt = {}) {
    ScenarioRng rng(seed);
    CommunityScenario s;
    s.horizon = rng.index(opt.min_horizon, opt.max_horizon);
    const std::size_t n = rng.index(opt.min_members, opt.max_members);
    std::size_t devices_left = opt.max_total_devices == 0 ? n * opt.max_devices : opt.max_total_devices;
    for (std::size_t i = 0; i < n; ++i) {
        Member m;
        m.id = "m" + std::to_string(i);
        const std::size_t members_after = n - i - 1;
        std::size_t k = rng.index(opt.min_devices, opt.max_devices);
        if (opt.max_total_devices != 0) {
            const std::size_t budget = devices_left > members_after ? devices_left - members_after : 1;
            k = std::max<std::size_t>(1, std::min(k, budget));
        }
        devices_left -= std::min(devices_left, k);
        for (std::size_t j = 0; j < k; ++j) m.devices.push_back(random_device(rng));
        s.members.push_back(std::move(m));
    }

    const bool flat = opt.with_bess || rng.chance(0.5);
    const double flat_buy = rng.uniform(0.15, 0.5);
    const double flat_ratio = rng.uniform(0.1, opt.with_bess ? 0.7 : 0.95);
    for (std::size_t t = 0; t < s.horizon; ++t) {
        const double buy = flat ? flat_buy : rng.uniform(0.15, 0.5);
        s.rates.buy.push_back(buy);
        s.rates.sell.push_back(buy * (flat ? flat_ratio : rng.uniform(0.1, 0.95)));
    }

    const bool central = opt.with_central_pv && rng.chance(0.5);
    std::vector<double> weights(n), omega(n);
    double wsum = 0.0, osum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        weights[i] = rng.chance(0.3) ? 0.0 : rng.uniform();
        wsum += weights[i];
        omega[i] = rng.uniform(0.1, 1.0);
        osum += omega[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
        s.members[i].central_pv_share = central ? omega[i] / osum : 0.0;
        s.members[i].bess_share = 1.0 / static_cast<double>(n);
    }

    const auto curve = AggregateResponseCurve::of(s.members);
    for (std::size_t t = 0; t < s.horizon; ++t) {
        const double lower = curve(s.rates.buy[t]);
        const double upper = curve(s.rates.sell[t]);
        const double g_N = rng.uniform(0.5 * lower, 1.3 * upper + 0.2);
        const double central_part = central ? rng.uniform(0.0, 0.6) * g_N : 0.0;
        s.central_pv.push_back(central_part);
        for (std::size_t i = 0; i < n; ++i) {
            const double own = wsum > 0.0 ? (g_N - central_part) * weights[i] / wsum : 0.0;
            s.members[i].pv_trace.push_back(own);
        }
    }
    if (!central) s.central_pv.clear();

    if (opt.with_bess) {
        BessSpec b;
        const double scale = std::max(1.0, curve(flat_buy * flat_ratio));
        b.capacity = rng.uniform(0.5, 2.0) * scale;
        b.charge_eff = rng.uniform(0.85, 1.0);
        b.discharge_eff = rng.uniform(0.85, 1.0);
        b.max_charge = rng.uniform(0.1, 0.5) * b.capacity;
        b.max_discharge = rng.uniform(0.1, 0.5) * b.capacity;
        b.initial_soc = rng.uniform() * b.capacity;
        s.bess = b;
        const double lo = flat_buy * flat_ratio / b.charge_eff;
        const double hi = b.discharge_eff * flat_buy;
        s.rates.salvage = rng.uniform(lo, hi);
    }
    return s;
}

struct SyntheticOptions {
    std::size_t members = 10;
    std::size_t horizon = 24;
    bool with_bess = false;
    bool flat_buy = false;     // buy_peak all day instead of time-of-use
    double buy_peak = 0.40;    // 16:00-21:00
    double buy_offpeak = 0.20;
    double sell = 0.10;
    double salvage = 0.15;
};

/// Residential community with two loads per home (HVAC-like and other),
/// rooftop PV on most homes peaking at noon, and an optional shared battery.
inline CommunityScenario synthetic_community(std::uint64_t seed, const SyntheticOptions& opt = {}) {
    ScenarioRng rng(seed);
    CommunityScenario s;
    s.horizon = opt.horizon;
    for (std::size_t i = 0; i < opt.members; ++i) {
        Member m;
        m.id = "h" + std::to_string(i + 1);
        m.devices.push_back({rng.uniform(1.0, 1.6), rng.uniform(0.6, 1.0), 0.2, 2.0});
        m.devices.push_back({rng.uniform(0.8, 1.4), rng.uniform(0.8, 1.4), 0.1, 1.5});
        const bool has_pv = i % 10 < 7;
        const double peak = has_pv ? rng.uniform(3.0, 6.0) : 0.0;
        for (std::size_t t = 0; t < opt.horizon; ++t) {
            const double hour = 24.0 * static_cast<double>(t) / static_cast<double>(opt.horizon);
            const double shape = std::sin(std::numbers::pi * (hour - 6.0) / 12.0);
            const double cloud = rng.uniform(0.8, 1.0);
            m.pv_trace.push_back(hour > 6.0 && hour < 18.0 ? peak * shape * cloud : 0.0);
        }
        m.bess_share = 1.0 / static_cast<double>(opt.members);
        s.members.push_back(std::move(m));
    }
    for (std::size_t t = 0; t < opt.horizon; ++t) {
        const double hour = 24.0 * static_cast<double>(t) / static_cast<double>(opt.horizon);
        const bool peak = hour >= 16.0 && hour < 21.0;
        s.rates.buy.push_back(opt.flat_buy || peak ? opt.buy_peak : opt.buy_offpeak);
        s.rates.sell.push_back(opt.sell);
    }
    s.rates.salvage = opt.salvage;
    if (opt.with_bess) {
        BessSpec b;
        b.capacity = 2.0 * static_cast<double>(opt.members);
        b.charge_eff = 0.95;
        b.discharge_eff = 0.95;
        b.max_charge = 0.4 * static_cast<double>(opt.members);
        b.max_discharge = 0.4 * static_cast<double>(opt.members);
        b.initial_soc = 0.9 * b.capacity;
        s.bess = b;
    }
    return s;
}

}  // namespace dnem
