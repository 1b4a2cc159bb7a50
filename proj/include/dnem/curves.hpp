#pragma once

// Price-response machinery. Each device consumes where its marginal utility
// meets the price, clipped to its bounds; the community response f_N(y) sums
// those over every device. f_N is continuous, non-increasing and piecewise
// linear in y, so it can be inverted exactly segment by segment.

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "dnem/model.hpp"

namespace dnem {

inline constexpr double kPriceTol = 1e-10;     // $/kWh
inline constexpr double kQuantityTol = 1e-8;   // kWh
inline constexpr int kMaxBisectIterations = 200;

/// Surplus-maximizing consumption of one device at a linear price.
template <ConcaveUtility U>
double device_response(const U& u, double price) {
    if (u.d_min >= u.d_max) return u.d_min;
    return std::clamp(static_cast<double>(u.inverse_marginal(price)), static_cast<double>(u.d_min),
                      static_cast<double>(u.d_max));
}

/// True when the quadratic branch is unclipped at `price`, i.e. the device
/// contributes slope -1/beta to f_N there.
inline bool device_active(const DeviceUtility& u, double price) {
    if (u.d_min >= u.d_max) return false;
    if (!(price > 0.0 && price < u.alpha)) return false;
    const double d = (u.alpha - price) / u.beta;
    return d > u.d_min && d < u.d_max;
}

class AggregateResponseCurve {
public:
    AggregateResponseCurve() = default;
    explicit AggregateResponseCurve(std::vector<DeviceUtility> devices) : devices_(std::move(devices)) {}

    static AggregateResponseCurve of(std::span<const Member> members) {
        std::vector<DeviceUtility> flat;
        for (const auto& m : members) flat.insert(flat.end(), m.devices.begin(), m.devices.end());
        return AggregateResponseCurve(std::move(flat));
    }

    static AggregateResponseCurve of(const Member& member) { return AggregateResponseCurve(member.devices); }

    double operator()(double price) const {
        double total = 0.0;
        for (const auto& d : devices_) total += device_response(d, price);
        return total;
    }

    /// Sum of -1/beta over devices on their unclipped branch at `price`.
    double slope_at(double price) const {
        double s = 0.0;
        for (const auto& d : devices_)
            if (device_active(d, price)) s -= 1.0 / d.beta;
        return s;
    }

    /// Prices in (lo, hi) where some device enters or leaves its unclipped branch.
    std::vector<double> breakpoints(double lo, double hi) const {
        std::vector<double> out;
        for (const auto& d : devices_) {
            if (d.d_min >= d.d_max) continue;
            for (double p : {d.alpha - d.beta * d.d_max, d.alpha - d.beta * d.d_min, d.alpha})
                if (p > lo && p < hi) out.push_back(p);
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    const std::vector<DeviceUtility>& devices() const { return devices_; }
    bool empty() const { return devices_.empty(); }

private:
    std::vector<DeviceUtility> devices_;
};

inline double aggregate_response(const AggregateResponseCurve& curve, double price) { return curve(price); }

struct Inversion {
    double price = 0.0;
    bool on_plateau = false;  // f_N is flat at the target; price is the plateau midpoint
};

/// Plain bisection for f_N(mu) = target on [lo, hi]; no plateau selection.
inline double bisect_aggregate(const AggregateResponseCurve& curve, double target, double lo, double hi) {
    for (int it = 0; it < kMaxBisectIterations && hi - lo > kPriceTol; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double f = curve(mid);
        if (std::abs(f - target) <= kQuantityTol * 1e-3) return mid;
        if (f > target) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

/// Solves f_N(mu) = target for mu in [lo, hi].
///
/// The bracket must satisfy f_N(hi) <= target <= f_N(lo) (to within the
/// quantity tolerance); otherwise std::domain_error. On a strictly decreasing
/// segment the root comes from the closed form of the active quadratic
/// branches. If f_N is flat at the target, the midpoint of the flat stretch
/// (restricted to [lo, hi]) is returned and flagged.
inline Inversion solve_aggregate(const AggregateResponseCurve& curve, double target, double lo, double hi) {
    if (!(lo <= hi)) throw std::invalid_argument("invert_aggregate: lo must not exceed hi");
    const double f_lo = curve(lo);
    const double f_hi = curve(hi);
    if (target > f_lo + kQuantityTol || target < f_hi - kQuantityTol)
        throw std::domain_error("invert_aggregate: target outside range");
    if (lo == hi) return {lo, false};

    std::vector<double> pts;
    pts.push_back(lo);
    for (double p : curve.breakpoints(lo, hi)) pts.push_back(p);
    pts.push_back(hi);

    struct Segment {
        double a, b, slope;
    };
    std::vector<Segment> segs;
    segs.reserve(pts.size());
    for (std::size_t j = 0; j + 1 < pts.size(); ++j) {
        const double a = pts[j], b = pts[j + 1];
        segs.push_back({a, b, curve.slope_at(0.5 * (a + b))});
    }

    // Flat stretches first: the whole plateau at the target is the solution set.
    for (std::size_t j = 0; j < segs.size();) {
        if (segs[j].slope != 0.0) {
            ++j;
            continue;
        }
        std::size_t e = j;
        while (e + 1 < segs.size() && segs[e + 1].slope == 0.0) ++e;
        const double a = segs[j].a, b = segs[e].b;
        if (std::abs(curve(0.5 * (a + b)) - target) <= kQuantityTol) return {0.5 * (a + b), true};
        j = e + 1;
    }

    for (const auto& s : segs) {
        if (s.slope == 0.0) continue;
        const double fb = curve(s.b);
        if (fb > target) continue;
        // On this segment f_N(mu) = C + sum_active (alpha - mu)/beta.
        const double mid = 0.5 * (s.a + s.b);
        double constant = 0.0, alpha_over_beta = 0.0, inv_beta = 0.0;
        for (const auto& d : curve.devices()) {
            if (device_active(d, mid)) {
                alpha_over_beta += d.alpha / d.beta;
                inv_beta += 1.0 / d.beta;
            } else {
                constant += device_response(d, mid);
            }
        }
        const double mu = std::clamp((constant + alpha_over_beta - target) / inv_beta, s.a, s.b);
        if (std::abs(curve(mu) - target) <= kQuantityTol) return {mu, false};
        return {bisect_aggregate(curve, target, s.a, s.b), false};
    }
    // Only reachable when target sits within tolerance below f_N(hi).
    return {hi, false};
}

inline double invert_aggregate(const AggregateResponseCurve& curve, double target, double lo, double hi) {
    return solve_aggregate(curve, target, lo, hi).price;
}

}  // namespace dnem
