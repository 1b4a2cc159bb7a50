// Acceptance criteria AC1-AC7. Prints one PASS/FAIL line per criterion and
// exits non-zero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "dnem/dnem.hpp"
#include "oracles.hpp"

using namespace dnem;
namespace fs = std::filesystem;

namespace {

struct Verdict {
    bool pass = true;
    std::string detail;
};

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<double> standalone_surplus(const CommunityScenario& s, std::size_t t) {
    std::vector<double> out;
    const auto g = member_generation(s, t);
    for (std::size_t i = 0; i < s.members.size(); ++i)
        out.push_back(standalone_optimum(s.members[i], g[i], s.rates.buy_at(t), s.rates.sell_at(t)).surplus);
    return out;
}

std::vector<oracle::Device> oracle_devices(const std::vector<DeviceUtility>& ds) {
    std::vector<oracle::Device> out;
    for (const auto& d : ds) out.push_back({d.alpha, d.beta, d.d_min, d.d_max});
    return out;
}

// ---------------------------------------------------------------------------

Verdict ac1_axioms() {
    const auto t0 = std::chrono::steady_clock::now();
    std::size_t intervals = 0, failures = 0;
    double worst_gap = 0.0, min_rational = std::numeric_limits<double>::infinity();
    std::string first;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const auto s = validate_scenario(random_scenario(seed));
        const auto records = simulate(s, Mechanism::DNem);
        for (const auto& rec : records) {
            ++intervals;
            const auto bench = standalone_surplus(s, rec.t);
            const double price = rec.price.value;
            const double buy = s.rates.buy_at(rec.t), sell = s.rates.sell_at(rec.t);
            const auto rep = axiom_audit(
                {rec.per_member, bench, [price](std::size_t, double z) { return price * z; }, buy, sell}, seed);
            double collected = 0.0;
            for (const auto& o : rec.per_member) collected += o.payment;
            worst_gap = std::max(worst_gap, std::abs(collected - nem_payment(buy, sell, rec.z_N)));
            min_rational = std::min(min_rational, rep.find("individual_rationality")->slack);
            for (const auto& c : rep.checks)
                if (!c.passed && failures++ == 0)
                    first = "seed " + std::to_string(seed) + " t " + std::to_string(rec.t) + " " + c.name + ": " + c.detail;
        }
    }
    const double secs = seconds_since(t0);
    Verdict v;
    v.pass = failures == 0 && worst_gap <= kProfitGapTol && min_rational >= -kRationalityTol && secs < 60.0;
    v.detail = "200 scenarios, " + std::to_string(intervals) + " intervals, " + std::to_string(failures) +
               " failed checks, worst profit gap " + sci(worst_gap) + " $, min rationality slack " +
               sci(min_rational) + " $, " + sci(secs) + " s";
    if (!first.empty()) v.detail += "; first: " + first;
    return v;
}

Verdict ac2_welfare_optimality() {
    const auto t0 = std::chrono::steady_clock::now();
    GeneratorOptions opt;
    opt.min_members = 2;
    opt.max_members = 4;
    opt.max_total_devices = 4;
    opt.min_horizon = opt.max_horizon = 1;
    double worst_dnem = 0.0, worst_closed = 0.0;
    std::size_t zones_net_zero = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto s = validate_scenario(random_scenario(5000 + seed, opt));
        const auto g = member_generation(s, 0);
        const double buy = s.rates.buy_at(0), sell = s.rates.sell_at(0);
        const auto st = settle_dnem(s.members, g, buy, sell);
        const auto devices = s.all_devices();
        const double brute = centralized_welfare_bruteforce(devices, st.g_N, buy, sell);
        const double closed = centralized_welfare_closed_form(AggregateResponseCurve(devices), st.g_N, buy, sell);
        worst_dnem = std::max(worst_dnem, std::abs(st.total_surplus() - brute));
        worst_closed = std::max(worst_closed, std::abs(closed - brute));
        zones_net_zero += is_net_zero(st.price.zone);
    }
    const double secs = seconds_since(t0);
    Verdict v;
    v.pass = worst_dnem <= 1e-3 && worst_closed <= 1e-3 && secs < 300.0;
    v.detail = "100 instances (" + std::to_string(zones_net_zero) + " net-zero), max |sum S - brute| " +
               sci(worst_dnem) + " $, max |closed form - brute| " + sci(worst_closed) + " $, " + sci(secs) + " s";
    return v;
}

Verdict ac3_group_rationality() {
    std::size_t pairs = 0, failures = 0;
    double worst = std::numeric_limits<double>::infinity();
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto s = validate_scenario(random_scenario(10000 + seed));
        ScenarioRng pick(seed * 7919 + 1);
        const std::size_t N = s.members.size();
        for (int k = 0; k < 100; ++k) {
            const std::size_t t = pick.index(0, s.horizon - 1);
            std::vector<std::size_t> sup, sub;
            while (sup.empty())
                for (std::size_t i = 0; i < N; ++i)
                    if (pick.chance(0.6)) sup.push_back(i);
            while (sub.empty())
                for (std::size_t i : sup)
                    if (pick.chance(0.5)) sub.push_back(i);
            const auto r =
                coalition_audit(s.members, member_generation(s, t), sub, sup, s.rates.buy_at(t), s.rates.sell_at(t));
            ++pairs;
            worst = std::min(worst, r.slack());
            failures += !r.passed;
        }
    }
    Verdict v;
    v.pass = failures == 0 && worst >= -kRationalityTol;
    v.detail = std::to_string(pairs) + " nested pairs, " + std::to_string(failures) + " violations, min slack " +
               sci(worst) + " $";
    return v;
}

Verdict ac4_price_shape() {
    std::size_t bad_range = 0, bad_mono = 0, bad_strict = 0, bad_balance = 0, plateaus = 0, points = 0;
    double worst_balance = 0.0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto s = validate_scenario(random_scenario(20000 + seed));
        const auto curve = AggregateResponseCurve::of(s.members);
        for (std::size_t t = 0; t < std::min<std::size_t>(s.horizon, 3); ++t) {
            const double buy = s.rates.buy_at(t), sell = s.rates.sell_at(t);
            const auto th = compute_thresholds(curve, buy, sell);
            const double g_max = 1.2 * th.upper + 0.5;
            double prev_price = 0.0, prev_g = 0.0;
            bool prev_inside = false, prev_plateau = false;
            for (int k = 0; k < 1000; ++k) {
                const double g = g_max * k / 999.0;
                const auto p = dnem_price(curve, g, buy, sell);
                ++points;
                if (p.value < sell || p.value > buy) ++bad_range;
                if (k > 0 && p.value > prev_price) ++bad_mono;
                const bool inside = g > th.lower && g < th.upper;
                plateaus += p.on_plateau;
                if (k > 0 && inside && prev_inside && !p.on_plateau && !prev_plateau && g > prev_g &&
                    !(p.value < prev_price))
                    ++bad_strict;
                if (g >= th.lower && g <= th.upper) {
                    const double z = curve(p.value) - g;
                    worst_balance = std::max(worst_balance, std::abs(z));
                    if (std::abs(z) > kQuantityTol) ++bad_balance;
                }
                prev_price = p.value;
                prev_g = g;
                prev_inside = inside;
                prev_plateau = p.on_plateau;
            }
        }
    }
    Verdict v;
    v.pass = bad_range + bad_mono + bad_strict + bad_balance == 0;
    v.detail = std::to_string(points) + " sweep points: out-of-range " + std::to_string(bad_range) +
               ", increases " + std::to_string(bad_mono) + ", non-strict steps " + std::to_string(bad_strict) +
               ", plateau points " + std::to_string(plateaus) + ", max |z_N| in zone " + sci(worst_balance) + " kWh";
    return v;
}

// Storage sweeps: follows the larger half of each sampled step down to a
// vanishing width; a surviving jump is a discontinuity unless the curve is
// flat across it (a plateau of f_N, where the inverse jumps by construction).
struct StorageSweepStats {
    std::size_t points = 0, increases = 0, jumps = 0, plateau_jumps = 0, unbalanced = 0;
    std::array<std::size_t, 7> zone_hits{};
    double worst_z = 0.0;
};

void storage_sweep(const AggregateResponseCurve& curve, const BessSpec& spec, double soc, double salvage, double buy,
                   double sell, StorageSweepStats& st) {
    auto price_at = [&](double g) { return generalized_dnem_price(curve, g, spec, soc, salvage, buy, sell); };
    const auto lim = effective_limits(spec, soc);
    const double g_max = 1.2 * (curve(sell) + lim.charge) + 0.5;
    GeneralizedPrice prev;
    for (int k = 0; k < 1000; ++k) {
        const double g = g_max * k / 999.0;
        const auto gp = price_at(g);
        ++st.points;
        ++st.zone_hits[static_cast<std::size_t>(gp.price.zone)];
        if (is_net_zero(gp.price.zone)) {
            const double z = curve(gp.price.value) + gp.battery - g;
            st.worst_z = std::max(st.worst_z, std::abs(z));
            if (std::abs(z) > kQuantityTol) ++st.unbalanced;
        }
        if (k > 0) {
            if (gp.price.value > prev.price.value) ++st.increases;
            double a = g_max * (k - 1) / 999.0, b = g;
            double pa = prev.price.value, pb = gp.price.value;
            for (int level = 0; level < 60 && b - a > 1e-14; ++level) {
                const double m = 0.5 * (a + b);
                const double pm = price_at(m).price.value;
                if (std::abs(pa - pm) >= std::abs(pm - pb)) {
                    b = m;
                    pb = pm;
                } else {
                    a = m;
                    pa = pm;
                }
            }
            if (std::abs(pa - pb) > 1e-7) {
                if (std::abs(curve(pa) - curve(pb)) <= kQuantityTol) ++st.plateau_jumps;
                else ++st.jumps;
            }
        }
        prev = gp;
    }
}

Verdict ac5_storage() {
    StorageSweepStats sw;
    // Sweeps on the residential parameter set and on random storage scenarios.
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        SyntheticOptions opt;
        opt.with_bess = true;
        const auto s = validate_scenario(synthetic_community(seed, opt));
        const auto curve = AggregateResponseCurve::of(s.members);
        for (double frac : {0.0, 0.3, 0.9, 1.0})
            for (std::size_t t : {std::size_t{3}, std::size_t{17}})
                storage_sweep(curve, *s.bess, frac * s.bess->capacity, s.rates.salvage, s.rates.buy_at(t),
                              s.rates.sell_at(t), sw);
    }
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        GeneratorOptions opt;
        opt.with_bess = true;
        const auto s = validate_scenario(random_scenario(30000 + seed, opt));
        storage_sweep(AggregateResponseCurve::of(s.members), *s.bess, s.bess->initial_soc, s.rates.salvage,
                      s.rates.buy_at(0), s.rates.sell_at(0), sw);
    }
    bool all_subzones = true;
    for (Zone z : kAllZones) all_subzones = all_subzones && sw.zone_hits[static_cast<std::size_t>(z)] > 0;

    // State of charge over full-horizon runs.
    std::size_t soc_violations = 0, runs = 0;
    auto check_run = [&](const CommunityScenario& s) {
        ++runs;
        double x = s.bess->initial_soc;
        for (const auto& rec : simulate(s, Mechanism::DNem)) {
            x += rec.b_N >= 0.0 ? s.bess->charge_eff * rec.b_N : rec.b_N / s.bess->discharge_eff;
            if (rec.soc < 0.0 || rec.soc > s.bess->capacity || std::abs(rec.soc - x) > 1e-9) ++soc_violations;
        }
    };
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        SyntheticOptions opt;
        opt.with_bess = true;
        check_run(validate_scenario(synthetic_community(seed, opt)));
        GeneratorOptions gopt;
        gopt.with_bess = true;
        gopt.min_horizon = gopt.max_horizon = 24;
        check_run(validate_scenario(random_scenario(31000 + seed, gopt)));
    }

    // Zero-storage reduction: must reproduce the storage-free run bit for bit.
    std::size_t reduction_mismatches = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        GeneratorOptions opt;
        opt.with_bess = true;
        auto with = validate_scenario(random_scenario(32000 + seed, opt));
        auto without = with;
        without.bess.reset();
        const auto base = simulate(without, Mechanism::DNem);
        for (int variant = 0; variant < 2; ++variant) {
            auto s = with;
            if (variant == 0) s.bess->capacity = s.bess->initial_soc = 0.0;
            else s.bess->max_charge = s.bess->max_discharge = 0.0;
            const auto recs = simulate(validate_scenario(s), Mechanism::DNem);
            for (std::size_t t = 0; t < recs.size(); ++t) {
                bool same = recs[t].price.value == base[t].price.value && recs[t].price.zone == base[t].price.zone &&
                            recs[t].z_N == base[t].z_N && recs[t].b_N == 0.0;
                for (std::size_t i = 0; i < recs[t].per_member.size(); ++i)
                    same = same && recs[t].per_member[i].payment == base[t].per_member[i].payment &&
                           recs[t].per_member[i].reward == base[t].per_member[i].reward;
                reduction_mismatches += !same;
            }
        }
    }

    // Single-interval relaxed dispatch against a brute-force (b, d) grid.
    double worst_grid = 0.0;
    oracle::Rng rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<DeviceUtility> devs(1 + rng.index(2));
        for (auto& d : devs) {
            const auto o = rng.device();
            d = {o.alpha, o.beta, o.lo, o.hi};
        }
        const bool residential = trial % 2 == 0;
        const double buy = residential ? (trial % 4 == 0 ? 0.4 : 0.2) : rng.uniform(0.2, 0.5);
        const double sell = residential ? 0.1 : buy * rng.uniform(0.1, 0.7);
        BessSpec spec;
        spec.capacity = rng.uniform(0.5, 3.0);
        spec.charge_eff = residential ? 0.95 : rng.uniform(0.85, 1.0);
        spec.discharge_eff = residential ? 0.95 : rng.uniform(0.85, 1.0);
        spec.max_charge = rng.uniform(0.1, 1.0);
        spec.max_discharge = rng.uniform(0.1, 1.0);
        const double soc = rng.uniform(0.0, spec.capacity);
        const double gamma = rng.uniform(sell / spec.charge_eff, spec.discharge_eff * buy);
        const AggregateResponseCurve f(devs);
        const auto lim = effective_limits(spec, soc);
        const double g = rng.uniform(0.0, 1.3 * (f(sell) + lim.charge) + 0.5);
        const auto gp = generalized_dnem_price(f, g, spec, soc, gamma, buy, sell);
        double u = 0.0, d = 0.0;
        for (const auto& dev : devs) {
            const double x = device_response(dev, gp.price.value);
            u += dev.value(x);
            d += x;
        }
        const double mine = u - nem_payment(buy, sell, d + gp.battery - g) +
                            salvage_value(gp.battery, gamma, spec.charge_eff, spec.discharge_eff);
        const double want = oracle::storage_welfare(oracle_devices(devs), g, lim.discharge, lim.charge, gamma,
                                                    spec.charge_eff, spec.discharge_eff, buy, sell);
        worst_grid = std::max(worst_grid, std::abs(mine - want));
    }

    Verdict v;
    v.pass = sw.increases == 0 && sw.jumps == 0 && sw.unbalanced == 0 && all_subzones && soc_violations == 0 &&
             reduction_mismatches == 0 && worst_grid <= 1e-4;
    v.detail = std::to_string(sw.points) + " sweep points, increases " + std::to_string(sw.increases) +
               ", discontinuities " + std::to_string(sw.jumps) + " (plateau jumps " + std::to_string(sw.plateau_jumps) +
               "), all 7 zones visited " + (all_subzones ? "yes" : "no") + ", max |z_N| net-zero " + sci(sw.worst_z) +
               " kWh; SoC violations " + std::to_string(soc_violations) + " over " + std::to_string(runs) +
               " runs; zero-storage mismatches " + std::to_string(reduction_mismatches) +
               "; max |dispatch - grid optimum| " + sci(worst_grid) + " $";
    return v;
}

Verdict ac6_directional() {
    Verdict v;
    std::ostringstream d;
    // (a) welfare ordering, with and without storage
    for (bool storage : {false, true}) {
        SyntheticOptions opt;
        opt.with_bess = storage;
        const auto s = validate_scenario(synthetic_community(2024, opt));
        const double w_d = total_welfare(s, Mechanism::DNem);
        const double w_s = total_welfare(s, Mechanism::SignBased);
        const double w_a = total_welfare(s, Mechanism::Standalone);
        const bool ok = w_d >= w_s - 1e-9 && w_s >= w_a - 1e-9;
        v.pass = v.pass && ok;
        d << (storage ? "with BESS" : "no BESS") << " W " << fixed6(w_d) << " >= " << fixed6(w_s) << " >= " << fixed6(w_a)
          << (ok ? "" : " [violated]") << "; ";

        // (c) net-zero occupancy
        const auto dn = summarize(simulate(s, Mechanism::DNem), s.members.size());
        std::size_t sign_zero = 0;
        for (const auto& rec : simulate(s, Mechanism::SignBased)) sign_zero += std::abs(rec.z_N) <= kQuantityTol;
        const bool occ = dn.net_zero_intervals() >= sign_zero;
        v.pass = v.pass && occ;
        d << "net-zero " << dn.net_zero_intervals() << " vs " << sign_zero << (occ ? "" : " [violated]") << "; ";
    }
    // Diagnostic, not part of the verdict: the storage ordering interval by
    // interval when D-NEM starts from the sign-based run's total stored
    // energy, and the horizon ordering over further seeds.
    {
        SyntheticOptions opt;
        opt.with_bess = true;
        double min_step = std::numeric_limits<double>::infinity();
        std::size_t horizon_violations = 0;
        const std::uint64_t extra = 50;
        for (std::uint64_t seed = 0; seed < extra; ++seed) {
            const auto s = validate_scenario(synthetic_community(seed, opt));
            horizon_violations += total_welfare(s, Mechanism::DNem) < total_welfare(s, Mechanism::SignBased) - 1e-9;
            const auto curve = AggregateResponseCurve::of(s.members);
            auto member_soc = initial_member_soc(s);
            for (std::size_t t = 0; t < s.horizon; ++t) {
                double soc = 0.0;
                for (double x : member_soc) soc += x;
                const auto g = member_generation(s, t);
                double g_N = 0.0;
                for (double gi : g) g_N += gi;
                const auto gp = generalized_dnem_price(curve, g_N, *s.bess, soc, s.rates.salvage, s.rates.buy_at(t),
                                                       s.rates.sell_at(t));
                double q_dnem = 0.0, q_sign = 0.0;
                for (std::size_t i = 0; i < s.members.size(); ++i)
                    q_dnem += member_outcome(s.members[i], gp.price, g[i], s.members[i].bess_share * gp.battery,
                                             s.rates.salvage, s.bess->charge_eff, s.bess->discharge_eff)
                                  .reward;
                auto sb = sign_based_interval(s, t, member_soc);
                for (const auto& o : sb.outcomes) q_sign += o.reward;
                min_step = std::min(min_step, q_dnem - q_sign);
                member_soc = std::move(sb.next_soc);
            }
        }
        d << "[diagnostic] with BESS from equal stored energy min per-interval Q(D-NEM)-Q(sign) " << sci(min_step)
          << " $, horizon ordering violated on " << horizon_violations << "/" << extra << " seeds; ";
    }
    // (b) export-rate sweep at a flat buy rate
    SyntheticOptions flat;
    flat.flat_buy = true;
    flat.buy_peak = 0.4;
    const auto rows = rate_ratio_sweep(synthetic_community(2024, flat), {1.0, 0.8, 0.5, 0.2});
    bool mono = std::abs(rows[0].dnem_gain) <= 1e-9;
    d << "sweep dnem/sign %:";
    for (std::size_t k = 0; k < rows.size(); ++k) {
        d << " " << rows[k].ratio << "->" << sci(rows[k].dnem_gain) << "/" << sci(rows[k].sign_based_gain);
        if (k > 0)
            mono = mono && rows[k].dnem_gain >= rows[k - 1].dnem_gain - 1e-9 &&
                   rows[k].sign_based_gain >= rows[k - 1].sign_based_gain - 1e-9;
        mono = mono && rows[k].dnem_gain >= rows[k].sign_based_gain - 1e-9;
    }
    v.pass = v.pass && mono;
    if (!mono) d << " [not monotone]";
    v.detail = d.str();
    return v;
}

Verdict ac7_determinism_and_exit_codes() {
    const fs::path samples = DNEM_SAMPLES_DIR;
    const fs::path tmp = fs::temp_directory_path() / "dnem_acceptance";
    fs::remove_all(tmp);
    fs::create_directories(tmp);
    std::ostringstream out, err;
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream os;
        os << in.rdbuf();
        return os.str();
    };
    bool identical = true;
    for (const char* cfg : {"running_example.json", "running_example_bess.json", "tou_community.json"}) {
        for (Mechanism m : {Mechanism::DNem, Mechanism::SignBased, Mechanism::Standalone}) {
            const int a = cmd_simulate(samples / cfg, m, tmp / "a", out, err);
            const int b = cmd_simulate(samples / cfg, m, tmp / "b", out, err);
            identical = identical && a == 0 && b == 0 &&
                        slurp(tmp / "a" / "intervals.csv") == slurp(tmp / "b" / "intervals.csv") &&
                        !slurp(tmp / "a" / "intervals.csv").empty();
        }
    }

    // No-storage variant of the ToU sample and a two-member netting config.
    auto nobess = Json::parse(slurp(samples / "tou_community.json"));
    nobess.erase("bess");
    nobess["traces_csv"] = (samples / "tou_traces.csv").string();
    std::ofstream(tmp / "nobess.json") << nobess.dump();
    std::ofstream(tmp / "netting.json") << R"({"horizon": 1, "rates": {"buy": 0.4, "sell": 0.2},
      "members": [{"id": "a", "devices": [{"alpha": 2, "beta": 1, "d_min": 0, "d_max": 2}], "pv": 0},
                  {"id": "b", "devices": [{"alpha": 2, "beta": 1, "d_min": 0, "d_max": 2}], "pv": 4}]})";

    struct Case {
        const char* what;
        int want;
        std::function<int()> run;
    };
    const std::vector<Case> cases = {
        {"audit dnem no-BESS", 0, [&] { return cmd_audit(tmp / "nobess.json", {Mechanism::DNem, 3, 20}, out, err); }},
        {"audit sign_based", 0, [&] { return cmd_audit(tmp / "netting.json", {Mechanism::SignBased, 1, 0}, out, err); }},
        {"audit standalone netting", 3,
         [&] { return cmd_audit(tmp / "netting.json", {Mechanism::Standalone, 1, 0}, out, err); }},
        {"audit BESS+coalitions", 1,
         [&] { return cmd_audit(samples / "tou_community.json", {Mechanism::DNem, 1, 4}, out, err); }},
        {"audit invalid", 1, [&] { return cmd_audit(samples / "invalid_rates.json", {}, out, err); }},
        {"audit missing", 2, [&] { return cmd_audit(tmp / "missing.json", {}, out, err); }},
        {"compare", 0,
         [&] { return cmd_compare(samples / "tou_community.json", std::nullopt, std::nullopt, out, err); }},
        {"compare sweep", 0,
         [&] { return cmd_compare(samples / "running_example.json", std::vector<double>{1.0, 0.5}, std::nullopt, out, err); }},
        {"compare invalid", 1,
         [&] { return cmd_compare(samples / "invalid_rates.json", std::nullopt, std::nullopt, out, err); }},
        {"compare missing", 2, [&] { return cmd_compare(tmp / "missing.json", std::nullopt, std::nullopt, out, err); }},
    };
    std::string wrong;
    for (const auto& c : cases) {
        const int got = c.run();
        if (got != c.want) wrong += std::string(" ") + c.what + "=" + std::to_string(got);
    }
    Verdict v;
    v.pass = identical && wrong.empty();
    v.detail = std::string("intervals.csv reruns ") + (identical ? "byte-identical" : "DIFFER") + "; " +
               std::to_string(cases.size()) + " exit-code cases" + (wrong.empty() ? " conform" : ", wrong:" + wrong);
    return v;
}

}  // namespace

int main() {
    struct Criterion {
        const char* id;
        const char* name;
        Verdict (*run)();
    };
    const Criterion criteria[] = {
        {"AC1", "axiom suite", ac1_axioms},
        {"AC2", "welfare optimality", ac2_welfare_optimality},
        {"AC3", "group rationality", ac3_group_rationality},
        {"AC4", "price shape", ac4_price_shape},
        {"AC5", "storage consistency", ac5_storage},
        {"AC6", "directional reproduction", ac6_directional},
        {"AC7", "determinism and exit codes", ac7_determinism_and_exit_codes},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        Verdict v;
        try {
            v = c.run();
        } catch (const std::exception& e) {
            v = {false, std::string("threw: ") + e.what()};
        }
        std::printf("%s %s %s: %s\n", v.pass ? "PASS" : "FAIL", c.id, c.name, v.detail.c_str());
        std::fflush(stdout);
        failed += !v.pass;
    }
    return failed == 0 ? 0 : 1;
}
