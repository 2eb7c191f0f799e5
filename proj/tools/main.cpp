// kspm: command-line front end for the Kadanoff sand pile library.
//
//   kspm fixpoint    --p P --n N [--format text|csv|json]
//   kspm avalanche   --p P (--k K | --upto N) [--format text|csv|json]
//   kspm verify      SUITE [--p P | --p-max P] [--n N] [--n-max N] [--seed S]
//   kspm figure-data --p P --n N --which heights|shot|diffs|trajectory [--negate]
//
// Every subcommand accepts --out PATH (written atomically). KSPM_WORK_LIMIT
// overrides the firing ceiling of a single stabilization.

#include <cstdlib>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

using kspm::cli::Format;
using kspm::cli::RunConfig;

// Integer lower bound with a readable message (CLI11's number checks print
// floating-point limits).
CLI::Validator at_least(long long lo)
{
    return CLI::Validator(
        [lo](std::string& value) -> std::string {
            try {
                std::size_t used = 0;
                if (std::stoll(value, &used) >= lo && used == value.size()) {
                    return {};
                }
            } catch (const std::exception&) {
            }
            return "expected an integer >= " + std::to_string(lo) + ", got '" + value + "'";
        },
        "INT>=" + std::to_string(lo));
}

void add_common(CLI::App* sub, RunConfig& cfg, std::string& format)
{
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "csv", "json"}));
    sub->add_option("--out", cfg.out, "Write output to PATH instead of stdout");
}

std::uint64_t work_limit_from_env()
{
    const char* env = std::getenv("KSPM_WORK_LIMIT");
    if (env == nullptr || *env == '\0') {
        return kspm::kDefaultWorkLimit;
    }
    std::size_t used = 0;
    const auto value = std::stoull(env, &used);
    if (used != std::string(env).size() || value == 0) {
        throw kspm::Error(kspm::Errc::InvalidArgument, "KSPM_WORK_LIMIT must be a positive integer");
    }
    return value;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Kadanoff sand pile model: fixed points, avalanches and verification"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string format;

    auto* fix = app.add_subcommand("fixpoint", "Fixed point pi(N) with heights and shot vector");
    fix->add_option("--p", cfg.p, "Grains per firing")->required()->check(at_least(1));
    fix->add_option("--n", cfg.n, "Grain count")->required()->check(at_least(0));
    add_common(fix, cfg, format);

    auto* ava = app.add_subcommand("avalanche", "Leftmost avalanches and density columns");
    ava->add_option("--p", cfg.p, "Grains per firing")->required()->check(at_least(1));
    auto* k_opt = ava->add_option("--k", cfg.k, "Run the k-th avalanche")->check(at_least(1));
    auto* upto_opt = ava->add_option("--upto", cfg.upto, "Stream avalanches 1..N")->check(at_least(1));
    k_opt->excludes(upto_opt);
    add_common(ava, cfg, format);

    auto* ver = app.add_subcommand("verify", "Run an invariant suite; exit 0 iff every check passes");
    ver->add_option("suite", cfg.suite, "Suite name")
        ->required()
        ->check(CLI::IsMember(kspm::cli::suite_names()));
    auto* vp = ver->add_option("--p", cfg.p, "Single p value")->check(at_least(1));
    auto* vpmax = ver->add_option("--p-max", cfg.p_max, "Sweep p up to this value")->check(at_least(1));
    vp->excludes(vpmax);
    ver->add_option("--n", cfg.n, "Grain count (waves)")->check(at_least(0));
    ver->add_option("--n-max", cfg.n_max, "Largest grain count in sweeps")->check(at_least(1));
    ver->add_option("--seed", cfg.seed, "Base seed for random strategies");
    add_common(ver, cfg, format);

    auto* fig = app.add_subcommand("figure-data", "Plot-ready CSV for one fixed point");
    fig->add_option("--p", cfg.p, "Grains per firing")->required()->check(at_least(1));
    fig->add_option("--n", cfg.n, "Grain count")->required()->check(at_least(0));
    fig->add_option("--which", cfg.which, "Dataset")
        ->check(CLI::IsMember({"heights", "shot", "diffs", "trajectory"}));
    fig->add_flag("--negate", cfg.negate, "Plot a_n - a_{n+1} instead of a_{n+1} - a_n");
    add_common(fig, cfg, format);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kspm::cli::kExitUsage;
    }

    try {
        cfg.p_given = vp->count() > 0;
        cfg.p_max_given = vpmax->count() > 0;
        if (!format.empty()) {
            static const std::map<std::string, Format> formats{
                {"text", Format::Text}, {"csv", Format::Csv}, {"json", Format::Json}};
            cfg.format = formats.at(format);
        }
        cfg.options.work_limit = work_limit_from_env();

        auto dispatch = [&](std::ostream& out) {
            if (fix->parsed()) return kspm::cli::cmd_fixpoint(cfg, out);
            if (ava->parsed()) return kspm::cli::cmd_avalanche(cfg, out);
            if (ver->parsed()) return kspm::cli::cmd_verify(cfg, out);
            return kspm::cli::cmd_figure_data(cfg, out);
        };
        return kspm::cli::write_output(cfg.out, dispatch);
    } catch (const kspm::Error& e) {
        std::cerr << "kspm: " << e.what() << '\n';
        return kspm::cli::exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "kspm: internal error: " << e.what() << '\n';
        return kspm::cli::kExitFailure;
    }
}
