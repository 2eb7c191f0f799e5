#ifndef KSPM_AVALANCHE_HPP
#define KSPM_AVALANCHE_HPP

// Hourglass computation of pi(1), pi(2), ... through leftmost avalanches,
// plus hole detection and density columns.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "kspm/core.hpp"

namespace kspm {

/// The k-th avalanche: columns fired, in order, by the leftmost strategy
/// from pi(k-1) plus one grain on column 0 down to pi(k).
struct Avalanche {
    std::uint64_t k = 0;
    std::vector<std::size_t> fired;

    bool empty() const noexcept { return fired.empty(); }

    std::vector<std::size_t> fired_set() const
    {
        std::vector<std::size_t> s = fired;
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        return s;
    }

    friend bool operator==(const Avalanche&, const Avalanche&) = default;
};

struct DensityReport {
    std::uint64_t k = 0;
    std::size_t l_prime = 0;
    std::optional<std::size_t> max_fired;
};

struct AvalancheResult {
    Avalanche avalanche;
    Configuration config;
};

inline Configuration add_grain(const Configuration& c)
{
    std::vector<Count> b(c.diffs().begin(), c.diffs().end());
    if (b.empty()) {
        b.push_back(0);
    }
    b[0] = detail::checked_add(b[0], 1);
    return Configuration(c.params(), std::move(b));
}

/// Runs the k-th avalanche from the stable configuration c = pi(k-1).
/// `on_fire(column, PileView)` sees every intermediate configuration.
template <class OnFire>
AvalancheResult run_avalanche(const Configuration& c, std::uint64_t k, OnFire&& on_fire)
{
    if (!is_stable(c)) {
        throw Error(Errc::NotStable, "avalanche must start from a stable configuration");
    }
    detail::Pile pile(c.p(), c.diffs());
    pile.add_grain();
    Avalanche avalanche{k, {}};
    detail::run_leftmost(pile, 0, kDefaultWorkLimit, [&](std::size_t i, const PileView& view) {
        avalanche.fired.push_back(i);
        on_fire(i, view);
    });
    return {std::move(avalanche), pile.configuration()};
}

inline AvalancheResult run_avalanche(const Configuration& c, std::uint64_t k)
{
    return run_avalanche(c, k, detail::NoObserver{});
}

/// Columns i with i not fired and i+1 fired, ascending.
inline std::vector<std::size_t> holes(const Avalanche& a)
{
    const auto s = a.fired_set();
    std::vector<std::size_t> out;
    for (std::size_t idx = 0; idx < s.size(); ++idx) {
        const std::size_t col = s[idx];
        if (col == 0) {
            continue;
        }
        if (idx == 0 || s[idx - 1] != col - 1) {
            out.push_back(col - 1);
        }
    }
    return out;
}

/// Smallest column from which the avalanche has no hole. Empty avalanches are
/// dense from 0.
inline DensityReport density_column(const Avalanche& a)
{
    DensityReport r;
    r.k = a.k;
    if (a.empty()) {
        return r;
    }
    r.max_fired = *std::max_element(a.fired.begin(), a.fired.end());
    const auto h = holes(a);
    r.l_prime = h.empty() ? 0 : h.back() + 1;
    return r;
}

struct ScanSummary {
    Count n = 0;
    std::size_t l_global = 0;
    std::uint64_t total_firings = 0;
    std::size_t largest_avalanche = 0;
    Configuration final_config{Params(1)};
};

/// Computes pi(1), ..., pi(n) by successive avalanches and streams
/// `sink(k, const Avalanche&, const Configuration& pi_k)` for each k.
/// Memory stays proportional to the support width.
template <class Sink>
ScanSummary incremental_scan(Count n, Params params, Sink&& sink)
{
    if (n < 1) {
        throw Error(Errc::InvalidArgument, "incremental scan needs n >= 1");
    }
    if (n > kMaxGrains) {
        throw Error(Errc::GrainLimit, "grain count exceeds 2^40");
    }
    detail::Pile pile(params.p(), {});
    ScanSummary summary;
    summary.n = n;
    Avalanche avalanche;
    for (Count k = 1; k <= n; ++k) {
        avalanche.k = static_cast<std::uint64_t>(k);
        avalanche.fired.clear();
        pile.add_grain();
        detail::run_leftmost(pile, 0, kDefaultWorkLimit,
                             [&](std::size_t i, const PileView&) { avalanche.fired.push_back(i); });
        summary.total_firings += avalanche.fired.size();
        summary.largest_avalanche = std::max(summary.largest_avalanche, avalanche.fired.size());
        summary.l_global = std::max(summary.l_global, density_column(avalanche).l_prime);
        const Configuration current = pile.configuration();
        sink(avalanche.k, std::as_const(avalanche), current);
        if (k == n) {
            summary.final_config = current;
        }
    }
    return summary;
}

/// L(p, n): the largest density column over the first n avalanches.
inline std::size_t global_density(Count n, Params params)
{
    return incremental_scan(n, params, [](std::uint64_t, const Avalanche&, const Configuration&) {})
        .l_global;
}

} // namespace kspm

#endif // KSPM_AVALANCHE_HPP
