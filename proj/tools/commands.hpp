#ifndef KSPM_TOOLS_COMMANDS_HPP
#define KSPM_TOOLS_COMMANDS_HPP

// Subcommands of the `kspm` binary. Each takes a validated RunConfig and an
// output stream and returns the process exit status; all computation is done
// by the library.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "kspm/kspm.hpp"

namespace kspm::cli {

enum class Format { Text, Csv, Json };

struct RunConfig {
    Count p = 2;
    bool p_given = false;
    Count n = 0;
    Count n_max = 100;
    Count p_max = 6;
    bool p_max_given = false;
    std::optional<Count> k;
    std::optional<Count> upto;
    std::optional<Format> format;
    std::string out;
    std::uint64_t seed = 1;
    bool negate = false;
    std::string which = "heights";
    std::string suite;
    StabilizeOptions options;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

inline int exit_code_for(const Error& e)
{
    switch (e.code()) {
    case Errc::InvalidArgument:
    case Errc::Parse:
    case Errc::GrainLimit:
        return kExitUsage;
    default:
        return kExitFailure;
    }
}

/// Writes through a temporary file and renames it into place only on
/// success, so a failing command never leaves a partial output file.
inline int write_output(const std::string& path, const std::function<int(std::ostream&)>& body)
{
    if (path.empty()) {
        return body(std::cout);
    }
    const std::string tmp = path + ".tmp";
    int status = kExitFailure;
    {
        std::ofstream file(tmp, std::ios::binary | std::ios::trunc);
        if (!file) {
            std::cerr << "kspm: cannot open " << tmp << " for writing\n";
            return kExitFailure;
        }
        try {
            status = body(file);
        } catch (...) {
            file.close();
            std::remove(tmp.c_str());
            throw;
        }
        file.flush();
        if (!file) {
            status = kExitFailure;
        }
    }
    if (status != kExitOk) {
        std::remove(tmp.c_str());
        return status;
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::remove(tmp.c_str());
        std::cerr << "kspm: cannot rename output: " << ec.message() << '\n';
        return kExitFailure;
    }
    return status;
}

// --- fixpoint ----------------------------------------------------------

inline int cmd_fixpoint(const RunConfig& cfg, std::ostream& out)
{
    const Params params(cfg.p);
    const auto run = stabilize_column(cfg.n, params, cfg.options);
    const auto h = heights(run.config);
    switch (cfg.format.value_or(Format::Text)) {
    case Format::Text:
        if (!run.config.empty()) {
            out << io::to_text(run.config) << '\n';
        }
        break;
    case Format::Json: {
        io::Json j = io::to_json(run.config);
        j["N"] = cfg.n;
        j["heights"] = std::vector<Count>(h.values().begin(), h.values().end());
        j["shots"] = run.shots;
        j["firings"] = run.firings;
        out << j.dump() << '\n';
        break;
    }
    case Format::Csv:
        out << "column,diff,height,shots\n";
        for (std::size_t i = 0; i < std::max(run.config.size(), run.shots.size()); ++i) {
            out << i << ',' << run.config[i] << ',' << h[i] << ','
                << (i < run.shots.size() ? run.shots[i] : 0) << '\n';
        }
        break;
    }
    return kExitOk;
}

// --- avalanche ---------------------------------------------------------

inline void emit_avalanche(const Avalanche& a, const Configuration& after, Format fmt, bool single,
                           std::ostream& out)
{
    switch (fmt) {
    case Format::Text:
        if (single) {
            out << io::join(a.fired) << '\n';
        } else {
            out << a.k << ':' << (a.fired.empty() ? "" : " ") << io::join(a.fired) << '\n';
        }
        break;
    case Format::Json: {
        io::Json j = io::to_json(a);
        j["l_prime"] = density_column(a).l_prime;
        out << j.dump() << '\n';
        break;
    }
    case Format::Csv:
        out << io::scan_row(a, after) << '\n';
        break;
    }
}

inline int cmd_avalanche(const RunConfig& cfg, std::ostream& out)
{
    const Params params(cfg.p);
    const Format fmt = cfg.format.value_or(Format::Text);
    if (fmt == Format::Csv) {
        out << io::kScanHeader << '\n';
    }
    if (cfg.upto) {
        incremental_scan(*cfg.upto, params, [&](std::uint64_t, const Avalanche& a, const Configuration& c) {
            emit_avalanche(a, c, fmt, false, out);
        });
        return kExitOk;
    }
    const Count k = cfg.k.value_or(1);
    if (k < 1) {
        throw Error(Errc::InvalidArgument, "--k must be >= 1");
    }
    const auto before = fixed_point(k - 1, params, cfg.options);
    const auto result = run_avalanche(before, static_cast<std::uint64_t>(k));
    emit_avalanche(result.avalanche, result.config, fmt, true, out);
    return kExitOk;
}

// --- verify ------------------------------------------------------------

struct CheckResult {
    std::string name;
    bool passed = true;
    std::string detail;
    io::Json counterexample;
};

namespace suites {

inline CheckResult spectrum_check(Count p)
{
    const auto r = spectrum(Params(p));
    CheckResult c{"spectrum p=" + std::to_string(p), true, {}, {}};
    c.passed = r.distinct && r.modulus_ok(1e-9) && r.dm_ok(1e-7);
    std::ostringstream d;
    d << "max_modulus=" << r.max_modulus << " bound=" << r.bound << " dm_mismatch=" << r.dm_mismatch;
    c.detail = d.str();
    if (!c.passed) {
        c.counterexample = io::Json{{"p", p}, {"max_modulus", r.max_modulus},
                                    {"min_separation", r.min_separation}, {"dm_mismatch", r.dm_mismatch}};
    }
    return c;
}

inline CheckResult waves_check(Count p, Count n)
{
    const auto fixed = fixed_point(n, Params(p));
    const auto r = wave_report(fixed);
    CheckResult c{"waves p=" + std::to_string(p) + " N=" + std::to_string(n), true, {}, {}};
    c.passed = r.theorem1_index && r.theorem2_index && *r.theorem1_index <= *r.theorem2_index
               && matches_theorem1_at(fixed, *r.theorem2_index);
    c.detail = "theorem1_index=" + (r.theorem1_index ? std::to_string(*r.theorem1_index) : "none")
               + " theorem2_index=" + (r.theorem2_index ? std::to_string(*r.theorem2_index) : "none");
    if (r.split) {
        c.detail += " split=" + std::to_string(r.split->x) + (r.split->isolated_zero ? "+0+" : "+")
                    + std::to_string(r.split->y);
    }
    if (!c.passed) {
        c.counterexample = io::to_json(fixed);
    }
    return c;
}

inline CheckResult plateau_check(Count p, Count n_max, const StabilizeOptions& options)
{
    CheckResult c{"plateau p=" + std::to_string(p) + " N<=" + std::to_string(n_max), true, {}, {}};
    std::size_t worst = 1;
    for (Count n = 1; n <= n_max && c.passed; ++n) {
        stabilize(Configuration::column(Params(p), n), Strategy::leftmost(),
                  [&](std::size_t, const PileView& v) {
                      const auto len = max_plateau(v.diffs);
                      worst = std::max(worst, len);
                      if (c.passed && len > static_cast<std::size_t>(p + 1)) {
                          c.passed = false;
                          c.counterexample = io::to_json(v.to_configuration());
                          c.counterexample["N"] = n;
                      }
                  },
                  options);
    }
    c.detail = "max_plateau=" + std::to_string(worst) + " bound=" + std::to_string(p + 1);
    return c;
}

inline CheckResult support_check(Count p, Count n_max)
{
    CheckResult c{"support p=" + std::to_string(p) + " N<=" + std::to_string(n_max), true, {}, {}};
    incremental_scan(n_max, Params(p), [&](std::uint64_t k, const Avalanche&, const Configuration& cur) {
        const auto r = support_report(cur, static_cast<Count>(k));
        if (c.passed && !r.holds()) {
            c.passed = false;
            c.counterexample = io::to_json(r);
        }
    });
    return c;
}

inline CheckResult confluence_check(Count p, Count n_max, std::uint64_t seed,
                                    const StabilizeOptions& options)
{
    CheckResult c{"confluence p=" + std::to_string(p) + " N<=" + std::to_string(n_max), true, {}, {}};
    for (Count n = 0; n <= n_max && c.passed; ++n) {
        const auto start = Configuration::column(Params(p), n);
        const auto ref = stabilize(start, Strategy::leftmost(), options);
        std::vector<Strategy> others{Strategy::rightmost()};
        for (std::uint64_t s = 0; s < 10; ++s) {
            others.push_back(Strategy::random(seed + s));
        }
        for (const auto& strategy : others) {
            const auto got = stabilize(start, strategy, options);
            if (got.config != ref.config || got.firings != ref.firings || got.shots != ref.shots) {
                c.passed = false;
                c.counterexample = io::Json{{"N", n}, {"p", p}, {"seed", strategy.seed},
                                            {"expected", io::to_json(ref.config)},
                                            {"got", io::to_json(got.config)}};
                break;
            }
        }
    }
    return c;
}

inline CheckResult linkage_check(Count p, Count n_max)
{
    CheckResult c{"linkage p=" + std::to_string(p) + " N<=" + std::to_string(n_max), true, {}, {}};
    const Params params(p);
    for (Count n = 1; n <= n_max && c.passed; ++n) {
        const auto run = stabilize_column(n, params);
        const ShotVector shots(n, params, run.shots);
        bool ok = true;
        for (std::size_t i = 0; i < trajectory_length(shots, run.config) && ok; ++i) {
            ok = shots.height_difference(i) == run.config[i];
        }
        std::optional<std::size_t> fci;
        if (ok) {
            const auto traj = avg_trajectory(shots, run.config);
            fci = first_constant_index(traj);
            ok = fci && matches_theorem1_at(run.config, *fci);
        }
        if (!ok) {
            c.passed = false;
            c.counterexample = io::to_json(run.config);
            c.counterexample["N"] = n;
            c.counterexample["first_constant_Y_index"] = fci ? io::Json(*fci) : io::Json(nullptr);
        }
    }
    return c;
}

inline CheckResult density_check(Count p, Count n_max)
{
    CheckResult c{"density p=" + std::to_string(p) + " N<=" + std::to_string(n_max), true, {}, {}};
    Configuration prev(Params{p});
    const auto summary = incremental_scan(n_max, Params(p), [&](std::uint64_t k, const Avalanche& a,
                                                               const Configuration& cur) {
        const auto bound = emergence_index(prev) + static_cast<std::size_t>(p) + 1;
        const auto l = density_column(a).l_prime;
        if (c.passed && l > bound) {
            c.passed = false;
            c.counterexample = io::Json{{"k", k}, {"l_prime", l}, {"bound", bound},
                                        {"previous", io::to_json(prev)}};
        }
        prev = cur;
    });
    c.detail = "L=" + std::to_string(summary.l_global);
    return c;
}

} // namespace suites

inline const std::vector<std::string>& suite_names()
{
    static const std::vector<std::string> names{"spectrum", "waves",   "plateau", "support",
                                                "confluence", "linkage", "density"};
    return names;
}

inline int cmd_verify(const RunConfig& cfg, std::ostream& out)
{
    const auto& names = suite_names();
    if (std::find(names.begin(), names.end(), cfg.suite) == names.end()) {
        throw Error(Errc::InvalidArgument, "unknown suite '" + cfg.suite + "'");
    }
    // The p values each suite covers: the single --p, or a sweep up to --p-max.
    std::vector<Count> ps;
    if (cfg.p_given) {
        ps.push_back(cfg.p);
    } else {
        const Count lo = cfg.suite == "spectrum" ? 2 : 1;
        const Count hi = cfg.p_max_given ? cfg.p_max : (cfg.suite == "spectrum" ? 64 : 6);
        for (Count p = lo; p <= hi; ++p) {
            ps.push_back(p);
        }
    }
    if (ps.empty()) {
        throw Error(Errc::InvalidArgument, "empty p range");
    }
    if (cfg.suite == "waves" && cfg.n < 1) {
        throw Error(Errc::InvalidArgument, "verify waves needs --n >= 1");
    }
    if (cfg.n_max < 1) {
        throw Error(Errc::InvalidArgument, "--n-max must be >= 1");
    }

    auto run_cell = [&cfg](Count p) -> CheckResult {
        const auto& s = cfg.suite;
        if (s == "spectrum") return suites::spectrum_check(p);
        if (s == "waves") return suites::waves_check(p, cfg.n);
        if (s == "plateau") return suites::plateau_check(p, cfg.n_max, cfg.options);
        if (s == "support") return suites::support_check(p, cfg.n_max);
        if (s == "confluence") return suites::confluence_check(p, cfg.n_max, cfg.seed, cfg.options);
        if (s == "linkage") return suites::linkage_check(p, cfg.n_max);
        return suites::density_check(p, cfg.n_max);
    };

    // Independent (p) cells run concurrently; results are printed in p order.
    std::vector<std::future<CheckResult>> cells;
    for (Count p : ps) {
        cells.push_back(std::async(std::launch::async, run_cell, p));
    }
    bool all = true;
    for (auto& cell : cells) {
        const CheckResult r = cell.get();
        all = all && r.passed;
        out << (r.passed ? "PASS " : "FAIL ") << r.name;
        if (!r.detail.empty()) {
            out << ' ' << r.detail;
        }
        out << '\n';
        if (!r.passed && !r.counterexample.is_null()) {
            out << "  counterexample: " << r.counterexample.dump() << '\n';
        }
    }
    return all ? kExitOk : kExitFailure;
}

// --- figure-data -------------------------------------------------------

inline int cmd_figure_data(const RunConfig& cfg, std::ostream& out)
{
    if (cfg.format && *cfg.format != Format::Csv) {
        throw Error(Errc::InvalidArgument, "figure-data only emits csv");
    }
    const Params params(cfg.p);
    const auto run = stabilize_column(cfg.n, params, cfg.options);
    const ShotVector shots(cfg.n, params, run.shots);
    if (cfg.which == "heights") {
        const auto h = heights(run.config);
        out << "n,height\n";
        for (std::size_t i = 0; i < h.size(); ++i) {
            out << i << ',' << h[i] << '\n';
        }
    } else if (cfg.which == "shot") {
        out << "n,shots\n";
        for (std::size_t i = 0; i < shots.size(); ++i) {
            out << i << ',' << shots.counts()[i] << '\n';
        }
    } else if (cfg.which == "diffs") {
        // a_{n+1} - a_n, or a_n - a_{n+1} with --negate.
        out << "n,value\n";
        const Count sign = cfg.negate ? -1 : 1;
        for (std::size_t i = 0; i < shots.size(); ++i) {
            const auto at = static_cast<std::int64_t>(i);
            out << i << ',' << sign * (shots.at(at + 1) - shots.at(at)) << '\n';
        }
    } else if (cfg.which == "trajectory") {
        if (cfg.n < 1) {
            throw Error(Errc::InvalidArgument, "trajectory needs --n >= 1");
        }
        const auto traj = avg_trajectory(shots, run.config);
        out << io::trajectory_header(cfg.p) << '\n';
        for (std::size_t i = 0; i < traj.size(); ++i) {
            out << io::trajectory_row(i, traj[i], run.config[i], cfg.negate) << '\n';
        }
    } else {
        throw Error(Errc::InvalidArgument, "--which must be heights, shot, diffs or trajectory");
    }
    return kExitOk;
}

} // namespace kspm::cli

#endif // KSPM_TOOLS_COMMANDS_HPP
