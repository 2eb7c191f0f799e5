#ifndef KSPM_ANALYSIS_HPP
#define KSPM_ANALYSIS_HPP

// Wave-pattern recognition on fixed points, plateau and support checks, and
// least-squares fits of measured indices against log2(N).
//
// Alphabet notation used below: a wave is the block p, p-1, ..., 1.
//   pattern 1:  ((0^0 + ... + 0^{p+1}) wave)* 0^w
//   pattern 2:  wave* [0] wave* 0^w      ([0] = at most one zero)

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kspm/avalanche.hpp"
#include "kspm/core.hpp"
#include "kspm/dds.hpp"

namespace kspm {

struct WaveRun {
    std::size_t zeros = 0;  // zero-run length before the waves
    std::size_t waves = 0;  // consecutive waves after the zero run
    friend bool operator==(const WaveRun&, const WaveRun&) = default;
};

/// Shape of a pattern-2 suffix: x waves, optional single zero, y waves.
struct WaveSplit {
    std::size_t x = 0;
    bool isolated_zero = false;
    std::size_t y = 0;
    friend bool operator==(const WaveSplit&, const WaveSplit&) = default;
};

struct WaveReport {
    std::optional<std::size_t> theorem1_index;
    std::optional<std::size_t> theorem2_index;
    std::vector<WaveRun> decomposition;  // of the pattern-1 suffix
    std::optional<WaveSplit> split;      // of the pattern-2 suffix
    bool nontrivial = false;             // pattern-1 suffix holds at least one wave
};

namespace detail {

inline void require_stable(const Configuration& c)
{
    if (!is_stable(c)) {
        throw Error(Errc::NotStable, "pattern matching needs a stable configuration");
    }
}

} // namespace detail

inline bool wave_at(const Configuration& c, std::size_t n)
{
    const Count p = c.p();
    for (Count j = 0; j < p; ++j) {
        if (c[n + static_cast<std::size_t>(j)] != p - j) {
            return false;
        }
    }
    return true;
}

/// Parses the suffix from n as pattern 1; nullopt if it does not match.
inline std::optional<std::vector<WaveRun>> decompose_theorem1(const Configuration& c, std::size_t n)
{
    const auto p = static_cast<std::size_t>(c.p());
    const std::size_t t = c.size();
    std::vector<WaveRun> runs;
    std::size_t i = n;
    while (i < t) {
        std::size_t z = 0;
        while (c[i + z] == 0) {
            ++z;
        }
        if (z > p + 1 || !wave_at(c, i + z)) {
            return std::nullopt;
        }
        i += z + p;
        if (z == 0 && !runs.empty()) {
            ++runs.back().waves;
        } else {
            runs.push_back({z, 1});
        }
    }
    return runs;
}

/// Parses the suffix from n as pattern 2; nullopt if it does not match.
inline std::optional<WaveSplit> decompose_theorem2(const Configuration& c, std::size_t n)
{
    const auto p = static_cast<std::size_t>(c.p());
    const std::size_t t = c.size();
    WaveSplit s;
    std::size_t i = n;
    while (i < t && wave_at(c, i)) {
        ++s.x;
        i += p;
    }
    if (i >= t) {
        return s;
    }
    if (c[i] != 0) {
        return std::nullopt;
    }
    s.isolated_zero = true;
    ++i;
    while (i < t && wave_at(c, i)) {
        ++s.y;
        i += p;
    }
    if (i < t) {
        return std::nullopt;
    }
    if (s.y == 0) {
        // wave^x 0 0^w: the zero belongs to the tail.
        s.isolated_zero = false;
    }
    return s;
}

inline bool matches_theorem1_at(const Configuration& c, std::size_t n)
{
    return decompose_theorem1(c, n).has_value();
}

inline bool matches_theorem2_at(const Configuration& c, std::size_t n)
{
    return decompose_theorem2(c, n).has_value();
}

namespace detail {

// Suffix-membership tables for both patterns, filled right to left in
// O(width * p). Entry n says whether the suffix starting at n matches.
struct SuffixTables {
    std::vector<char> pattern1;
    std::vector<char> pattern2;
};

inline SuffixTables suffix_tables(const Configuration& c)
{
    const auto p = static_cast<std::size_t>(c.p());
    const std::size_t t = c.size();
    const std::size_t len = t + p + 2;
    std::vector<char> wave(len, 0);
    std::vector<std::size_t> zeros(len, 0);
    std::vector<char> waves_only(len, 1), p1(len, 1), p2(len, 1);
    for (std::size_t n = t; n-- > 0;) {
        wave[n] = wave_at(c, n) ? 1 : 0;
        zeros[n] = c[n] == 0 ? zeros[n + 1] + 1 : 0;
        waves_only[n] = wave[n] && waves_only[n + p];
        const std::size_t z = zeros[n];
        p1[n] = z <= p + 1 && wave[n + z] && p1[n + z + p];
        p2[n] = waves_only[n] || (wave[n] && p2[n + p]) || (c[n] == 0 && waves_only[n + 1]);
    }
    return {std::move(p1), std::move(p2)};
}

inline std::optional<std::size_t> first_set(const std::vector<char>& table, std::size_t limit)
{
    for (std::size_t n = 0; n <= limit; ++n) {
        if (table[n]) {
            return n;
        }
    }
    return std::nullopt;
}

} // namespace detail

/// Smallest n whose suffix matches pattern 1.
inline std::optional<std::size_t> match_theorem1(const Configuration& c)
{
    detail::require_stable(c);
    return detail::first_set(detail::suffix_tables(c).pattern1, c.size());
}

/// Smallest n whose suffix matches pattern 2.
inline std::optional<std::size_t> match_theorem2(const Configuration& c)
{
    detail::require_stable(c);
    return detail::first_set(detail::suffix_tables(c).pattern2, c.size());
}

inline WaveReport wave_report(const Configuration& c)
{
    detail::require_stable(c);
    const auto tables = detail::suffix_tables(c);
    WaveReport r;
    r.theorem1_index = detail::first_set(tables.pattern1, c.size());
    r.theorem2_index = detail::first_set(tables.pattern2, c.size());
    if (r.theorem1_index) {
        r.decomposition = decompose_theorem1(c, *r.theorem1_index).value();
        r.nontrivial = !r.decomposition.empty();
    }
    if (r.theorem2_index) {
        r.split = decompose_theorem2(c, *r.theorem2_index);
    }
    return r;
}

/// Index from which the fixed point consists of waves with at most one
/// isolated zero between them.
inline std::size_t emergence_index(const Configuration& c)
{
    const auto n = match_theorem2(c);
    if (!n) {
        throw Error(Errc::NoMatch, "no suffix matches the wave pattern");
    }
    return *n;
}

/// Longest run of equal consecutive non-empty columns (1 when there is none),
/// read directly from height differences: a run of L-1 zero differences
/// inside the support is a plateau of length L.
inline std::size_t max_plateau(std::span<const Count> diffs)
{
    std::size_t t = diffs.size();
    while (t > 0 && diffs[t - 1] == 0) {
        --t;
    }
    std::size_t best = 0, run = 0;
    for (std::size_t i = 0; i < t; ++i) {
        run = diffs[i] == 0 ? run + 1 : 0;
        best = std::max(best, run);
    }
    return best + 1;
}

inline std::size_t max_plateau(const HeightProfile& h)
{
    std::size_t best = 1, run = 1;
    for (std::size_t i = 1; i < h.size(); ++i) {
        run = (h[i] == h[i - 1]) ? run + 1 : 1;
        best = std::max(best, run);
    }
    return best;
}

struct SupportReport {
    Count n = 0;
    Count p = 1;
    std::size_t width = 0;
    double lower = 0.0;
    double upper = 0.0;

    bool holds() const
    {
        const auto w = static_cast<double>(width);
        return lower < w && w < upper;
    }
};

/// Support bounds for an already computed pi(n).
inline SupportReport support_report(const Configuration& fixed, Count n)
{
    const double root = std::sqrt(static_cast<double>(n));
    const double p = static_cast<double>(fixed.p());
    return {n, fixed.p(), fixed.size(), root / p - 1.0, (p + 1.0) * root + p + 1.0};
}

inline SupportReport support_report(Count n, Params params)
{
    if (n < 1) {
        throw Error(Errc::InvalidArgument, "support report needs n >= 1");
    }
    return support_report(fixed_point(n, params), n);
}

struct LogFit {
    double slope = 0.0;
    double intercept = 0.0;
    double max_residual = 0.0;

    double at(double n) const { return slope * std::log2(n) + intercept; }
};

/// Least squares of index against log2(N).
inline LogFit log_fit(std::span<const std::pair<Count, double>> points)
{
    if (points.size() < 3) {
        throw Error(Errc::InvalidArgument, "log fit needs at least 3 points");
    }
    double sx = 0, sy = 0;
    for (const auto& [n, v] : points) {
        if (n < 1) {
            throw Error(Errc::InvalidArgument, "log fit needs N >= 1");
        }
        sx += std::log2(static_cast<double>(n));
        sy += v;
    }
    const double m = static_cast<double>(points.size());
    const double mx = sx / m, my = sy / m;
    double sxx = 0, sxy = 0;
    for (const auto& [n, v] : points) {
        const double dx = std::log2(static_cast<double>(n)) - mx;
        sxx += dx * dx;
        sxy += dx * (v - my);
    }
    if (sxx == 0.0) {
        throw Error(Errc::DegenerateFit, "all N values are equal");
    }
    LogFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    for (const auto& [n, v] : points) {
        fit.max_residual = std::max(fit.max_residual, std::abs(v - fit.at(static_cast<double>(n))));
    }
    return fit;
}

/// One row of a (p, N) sweep.
struct SweepRow {
    Count n = 0;
    Count p = 1;
    std::size_t emergence = 0;
    std::optional<std::size_t> first_constant_y;
    std::size_t width = 0;
    std::optional<std::size_t> l_global;  // only when the density scan was requested
};

inline SweepRow sweep_row(Count n, Params params, bool with_density)
{
    const auto run = stabilize_column(n, params);
    const ShotVector shots(n, params, run.shots);
    const auto traj = avg_trajectory(shots, run.config);
    SweepRow row;
    row.n = n;
    row.p = params.p();
    row.emergence = emergence_index(run.config);
    row.first_constant_y = first_constant_index(traj);
    row.width = run.config.size();
    if (with_density) {
        row.l_global = global_density(n, params);
    }
    return row;
}

} // namespace kspm

#endif // KSPM_ANALYSIS_HPP
