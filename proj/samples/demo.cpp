// Walks through the single-home example, then compares mechanisms on a
// seeded ten-home community.

#include <cstdio>

#include "dnem/dnem.hpp"

int main() {
    using namespace dnem;

    Member home;
    home.id = "home";
    home.devices = {{2.0, 1.0, 0.0, 2.0}};
    const auto curve = AggregateResponseCurve::of(home);
    const auto th = compute_thresholds(curve, 0.4, 0.2);
    std::printf("thresholds: import below %.3f kWh, export above %.3f kWh\n", th.lower, th.upper);
    for (double g : {0.0, 1.6, 1.7, 1.8, 2.5}) {
        const auto p = dnem_price(curve, g, 0.4, 0.2);
        std::printf("  g=%.2f  price=%.4f  %s\n", g, p.value, std::string(to_string(p.zone)).c_str());
    }

    for (bool storage : {false, true}) {
        SyntheticOptions opt;
        opt.with_bess = storage;
        const auto s = validate_scenario(synthetic_community(7, opt));
        std::printf("\nten homes, %s storage\n", storage ? "with" : "without");
        for (Mechanism m : {Mechanism::DNem, Mechanism::SignBased, Mechanism::Standalone}) {
            const auto r = run(s, m);
            std::printf("  %-10s welfare=%9.4f  net-zero intervals=%zu", std::string(to_string(m)).c_str(),
                        r.summary.total_welfare, r.summary.net_zero_intervals());
            if (r.summary.welfare_gain_vs_standalone)
                std::printf("  gain=%+.3f%%", *r.summary.welfare_gain_vs_standalone);
            std::printf("\n");
        }
    }
}
