// lpq: command-line front end for the local period toolkit.
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "lpq/cli.hpp"

namespace {

struct Flags {
    lpq::cli::RunConfig cfg;
    std::string config_path;
    std::string alg = "amplified";
    std::string format = "csv";
    std::string method = "decreasing";
    std::int64_t q_max = 0;
    std::int64_t iterations_override = 0;
    lpq::label_t y = 0;
    std::int64_t period = 0;
};

void add_instance_flags(CLI::App *sub, Flags &f) {
    sub->add_option("--config", f.config_path, "JSON file with default values; flags override it");
    sub->add_option("--n", f.cfg.n, "label space size N");
    sub->add_option("--m", f.cfg.m, "number of marked labels M");
    sub->add_option("--p", f.cfg.p, "period P");
    sub->add_option("--s", f.cfg.s, "offset s");
    sub->add_flag("--strict,!--no-strict", f.cfg.strict, "require P^2 <= N and 2M <= N (default on)");
    sub->add_option("--seed", f.cfg.seed, "RNG seed");
    sub->add_option("--out", f.cfg.out, "output file (directory for sweep)");
    sub->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

// Resolution order: built-in defaults, then --config, then explicit flags.
lpq::cli::RunConfig resolve(const CLI::App &sub, Flags &f) {
    lpq::cli::RunConfig cfg;
    if (!f.config_path.empty()) {
        std::ifstream in(f.config_path);
        if (!in) throw lpq::Error(lpq::ErrorCode::InvalidArgument, "cannot read config '" + f.config_path + "'");
        lpq::cli::apply_json(cfg, nlohmann::json::parse(in));
    }
    auto given = [&](const char *name) {
        const auto *opt = sub.get_option_no_throw(name);
        return opt != nullptr && opt->count() > 0;
    };
    if (given("--n")) cfg.n = f.cfg.n;
    if (given("--m")) cfg.m = f.cfg.m;
    if (given("--p")) cfg.p = f.cfg.p;
    if (given("--s")) cfg.s = f.cfg.s;
    if (given("--strict")) cfg.strict = f.cfg.strict;
    if (given("--seed")) cfg.seed = f.cfg.seed;
    if (given("--out")) cfg.out = f.cfg.out;
    if (given("--format")) cfg.format = lpq::cli::parse_format(f.format);
    if (given("--alg")) cfg.algorithm = lpq::parse_algorithm(f.alg);
    if (given("--method")) cfg.method = f.method == "counting" ? lpq::SearchMethod::Counting : lpq::SearchMethod::Decreasing;
    if (given("--runs")) cfg.runs = f.cfg.runs;
    if (given("--q-max")) cfg.q_max = f.q_max;
    if (given("--iterations-override")) cfg.iterations_override = f.iterations_override;
    if (given("--y")) cfg.y = f.y;
    if (given("--verify")) cfg.verify = f.cfg.verify;
    if (given("--period")) cfg.period = f.period;
    if (given("--confidence")) cfg.counter_confidence = f.cfg.counter_confidence;
    if (given("--log2-min")) cfg.log2_min = f.cfg.log2_min;
    if (given("--log2-max")) cfg.log2_max = f.cfg.log2_max;
    return cfg;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Local period toolkit: spectra, period recovery, offset search and work factors"};
    app.require_subcommand(1);
    Flags f;

    auto *spectrum = app.add_subcommand("spectrum", "closed-form vs simulated Pr(y) for one algorithm");
    auto *compare = app.add_subcommand("compare", "PrRatio against QFT and QHS with bound verdicts");
    auto *recover = app.add_subcommand("recover", "continued-fraction recovery of P from one y");
    auto *find_offset = app.add_subcommand("find-offset", "locate s given a putative P");
    auto *trials = app.add_subcommand("trials", "expected trials and work factors, optional Monte-Carlo");
    auto *sweep = app.add_subcommand("sweep", "work-factor sweep over N = 2^j");

    for (auto *sub : {spectrum, compare, recover, find_offset, trials, sweep}) add_instance_flags(sub, f);
    for (auto *sub : {spectrum, compare}) {
        sub->add_option("--iterations-override", f.iterations_override, "Grover iteration count k");
    }
    spectrum->add_option("--alg", f.alg, "amplified, qft or qhs")->check(CLI::IsMember({"amplified", "qft", "qhs"}));
    recover->add_option("--y", f.y, "measured label");
    recover->add_option("--q-max", f.q_max, "largest admissible denominator (default floor(sqrt N))");
    recover->add_flag("--verify", f.cfg.verify, "check candidates against the oracle of the instance");
    find_offset->add_option("--method", f.method, "counting or decreasing")
        ->check(CLI::IsMember({"counting", "decreasing"}));
    find_offset->add_option("--period", f.period, "putative period (default --p)");
    find_offset->add_option("--confidence", f.cfg.counter_confidence, "counter success probability");
    trials->add_option("--runs", f.cfg.runs, "Monte-Carlo runs per algorithm (0 disables)");
    trials->add_option("--q-max", f.q_max, "largest admissible denominator");
    sweep->add_option("--log2-min", f.cfg.log2_min, "smallest j");
    sweep->add_option("--log2-max", f.cfg.log2_max, "largest j");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return lpq::cli::kValidation;
    }

    try {
        CLI::App *sub = app.get_subcommands().front();
        const auto cfg = resolve(*sub, f);
        if (sub == spectrum) return lpq::cli::cmd_spectrum(cfg, std::cout);
        if (sub == compare) return lpq::cli::cmd_compare(cfg, std::cout);
        if (sub == recover) return lpq::cli::cmd_recover(cfg, std::cout);
        if (sub == find_offset) return lpq::cli::cmd_find_offset(cfg, std::cout);
        if (sub == trials) return lpq::cli::cmd_trials(cfg, std::cout);
        return lpq::cli::cmd_sweep(cfg, std::cout);
    } catch (const lpq::Error &e) {
        std::cerr << "error: " << e.what() << '\n';
        return lpq::cli::kValidation;
    } catch (const nlohmann::json::exception &e) {
        std::cerr << "error: InvalidArgument: " << e.what() << '\n';
        return lpq::cli::kValidation;
    }
}
