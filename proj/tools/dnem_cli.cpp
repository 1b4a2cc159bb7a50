#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "dnem/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Dynamic net-metering community simulator"};
    app.require_subcommand(1);

    std::string config;
    std::string mechanism = "dnem";
    std::string out_path;
    double g_N = 0.0;
    std::size_t t = 0;
    dnem::AuditOptions audit_opt;
    std::vector<double> ratios;

    auto* sim = app.add_subcommand("simulate", "run a mechanism over the horizon and write results");
    sim->add_option("--config", config, "scenario JSON")->required();
    sim->add_option("--mechanism", mechanism, "dnem | sign_based | standalone")
        ->check(CLI::IsMember({"dnem", "sign_based", "standalone"}));
    sim->add_option("--out", out_path, "output directory")->required();

    auto* price = app.add_subcommand("price", "community price for one generation level");
    price->add_option("--config", config, "scenario JSON")->required();
    price->add_option("--g", g_N, "aggregate generation (kWh)")->required();
    price->add_option("--t", t, "interval index");

    auto* audit = app.add_subcommand("audit", "check the payment axioms and coalition stability");
    audit->add_option("--config", config, "scenario JSON")->required();
    audit->add_option("--mechanism", mechanism, "mechanism whose payments are audited")
        ->check(CLI::IsMember({"dnem", "sign_based", "standalone"}));
    audit->add_option("--seeds", audit_opt.seeds, "probe seeds per interval");
    audit->add_option("--coalition-samples", audit_opt.coalition_samples, "random nested coalition pairs per interval");

    auto* compare = app.add_subcommand("compare", "welfare table across mechanisms");
    compare->add_option("--config", config, "scenario JSON")->required();
    compare->add_option("--ratios", ratios, "sell/buy ratios for the sweep")->delimiter(',');
    compare->add_option("--out", out_path, "write the table here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return dnem::kExitInvalid;
    }

    if (*sim)
        return dnem::cmd_simulate(config, *dnem::parse_mechanism(mechanism), out_path, std::cout, std::cerr);
    if (*price) return dnem::cmd_price(config, g_N, t, std::cout, std::cerr);
    audit_opt.mechanism = *dnem::parse_mechanism(mechanism);
    if (*audit) return dnem::cmd_audit(config, audit_opt, std::cout, std::cerr);
    std::optional<std::vector<double>> sweep;
    if (compare->count("--ratios") > 0) sweep = ratios;
    std::optional<std::filesystem::path> out_file;
    if (!out_path.empty()) out_file = out_path;
    return dnem::cmd_compare(config, sweep, out_file, std::cout, std::cerr);
}
