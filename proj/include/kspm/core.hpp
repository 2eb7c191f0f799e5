#ifndef KSPM_CORE_HPP
#define KSPM_CORE_HPP

// Configurations of the Kadanoff sand pile model KSPM(p) in height-difference
// form, the firing rule, and stabilization to the unique fixed point.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <random>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kspm/error.hpp"

namespace kspm {

using Count = std::int64_t;

/// Largest grain count accepted by the stabilization engines.
inline constexpr Count kMaxGrains = Count{1} << 40;

/// Default ceiling on the number of single firings one stabilization may do.
inline constexpr std::uint64_t kDefaultWorkLimit = 10'000'000'000ULL;

/// Model parameter: number of grains leaving a column per firing.
class Params {
public:
    explicit Params(Count p) : p_(p)
    {
        if (p < 1) {
            throw Error(Errc::InvalidArgument, "p must be >= 1, got " + std::to_string(p));
        }
    }

    Count p() const noexcept { return p_; }

    friend bool operator==(const Params&, const Params&) = default;

private:
    Count p_;
};

/// Ultimately null sequence of non-negative height differences b_i = h_i - h_{i+1}.
/// Stored without trailing zeros; reads past the end yield 0.
class Configuration {
public:
    explicit Configuration(Params params) : params_(params) {}

    Configuration(Params params, std::vector<Count> diffs)
        : params_(params), diffs_(std::move(diffs))
    {
        for (std::size_t i = 0; i < diffs_.size(); ++i) {
            if (diffs_[i] < 0) {
                throw Error(Errc::InvalidArgument,
                            "negative height difference at column " + std::to_string(i));
            }
        }
        normalize();
    }

    /// The initial configuration (n, 0^w): n grains stacked on column 0.
    static Configuration column(Params params, Count n)
    {
        if (n < 0) {
            throw Error(Errc::InvalidArgument, "grain count must be >= 0");
        }
        return Configuration(params, std::vector<Count>{n});
    }

    const Params& params() const noexcept { return params_; }
    Count p() const noexcept { return params_.p(); }

    std::span<const Count> diffs() const noexcept { return diffs_; }

    /// Support width: first index from which every entry is zero.
    std::size_t size() const noexcept { return diffs_.size(); }
    bool empty() const noexcept { return diffs_.empty(); }

    Count operator[](std::size_t i) const noexcept { return i < diffs_.size() ? diffs_[i] : 0; }

    bool is_enabled(std::size_t i) const noexcept { return (*this)[i] > p(); }

    friend bool operator==(const Configuration&, const Configuration&) = default;

private:
    void normalize()
    {
        while (!diffs_.empty() && diffs_.back() == 0) {
            diffs_.pop_back();
        }
    }

    Params params_;
    std::vector<Count> diffs_;
};

/// Ultimately null non-increasing column heights h_i, trailing zeros trimmed.
class HeightProfile {
public:
    HeightProfile() = default;

    explicit HeightProfile(std::vector<Count> heights) : heights_(std::move(heights))
    {
        for (std::size_t i = 0; i < heights_.size(); ++i) {
            if (heights_[i] < 0) {
                throw Error(Errc::InvalidArgument, "negative height at column " + std::to_string(i));
            }
            if (i > 0 && heights_[i] > heights_[i - 1]) {
                throw Error(Errc::NotMonotone, "height increases at column " + std::to_string(i));
            }
        }
        while (!heights_.empty() && heights_.back() == 0) {
            heights_.pop_back();
        }
    }

    std::span<const Count> values() const noexcept { return heights_; }
    std::size_t size() const noexcept { return heights_.size(); }
    Count operator[](std::size_t i) const noexcept { return i < heights_.size() ? heights_[i] : 0; }

    friend bool operator==(const HeightProfile&, const HeightProfile&) = default;

private:
    std::vector<Count> heights_;
};

/// Total number of grains, sum of (i+1) * b_i. Throws Overflow rather than wrapping.
inline Count grain_count(std::span<const Count> diffs)
{
    Count total = 0;
    for (std::size_t i = 0; i < diffs.size(); ++i) {
        total = detail::checked_add(total, detail::checked_mul(static_cast<Count>(i + 1), diffs[i]));
    }
    return total;
}

inline Count grain_count(const Configuration& c) { return grain_count(c.diffs()); }

inline bool is_stable(const Configuration& c)
{
    return std::all_of(c.diffs().begin(), c.diffs().end(), [p = c.p()](Count b) { return b <= p; });
}

/// Applies the rule once on `column`: b_{i-1} += p, b_i -= p+1, b_{i+p} += 1.
inline Configuration fire(const Configuration& c, std::int64_t column)
{
    if (column < 0) {
        throw Error(Errc::IndexOutOfRange, "negative column " + std::to_string(column));
    }
    const auto i = static_cast<std::size_t>(column);
    const Count p = c.p();
    if (c[i] <= p) {
        throw Error(Errc::FiringNotEnabled, "column " + std::to_string(i) + " holds "
                                                + std::to_string(c[i]) + " <= p");
    }
    std::vector<Count> b(c.diffs().begin(), c.diffs().end());
    b.resize(std::max(b.size(), i + static_cast<std::size_t>(p) + 1), 0);
    if (i > 0) {
        b[i - 1] = detail::checked_add(b[i - 1], p);
    }
    b[i] -= p + 1;
    b[i + static_cast<std::size_t>(p)] = detail::checked_add(b[i + static_cast<std::size_t>(p)], 1);
    return Configuration(c.params(), std::move(b));
}

inline HeightProfile heights(const Configuration& c)
{
    std::vector<Count> h(c.size());
    Count acc = 0;
    for (std::size_t i = c.size(); i-- > 0;) {
        acc = detail::checked_add(acc, c[i]);
        h[i] = acc;
    }
    return HeightProfile(std::move(h));
}

inline Configuration diffs(const HeightProfile& h, Params params)
{
    std::vector<Count> b(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) {
        b[i] = h[i] - h[i + 1];
    }
    return Configuration(params, std::move(b));
}

/// Order in which enabled columns are fired during stabilization.
struct Strategy {
    enum class Kind { Leftmost, Rightmost, Random };

    Kind kind = Kind::Leftmost;
    std::uint64_t seed = 0;

    static Strategy leftmost() { return {Kind::Leftmost, 0}; }
    static Strategy rightmost() { return {Kind::Rightmost, 0}; }
    static Strategy random(std::uint64_t seed) { return {Kind::Random, seed}; }
};

struct StabilizeOptions {
    std::uint64_t work_limit = kDefaultWorkLimit;
};

/// Result of a stabilization: the fixed point, how many single firings it
/// took, and the per-column firing counts (trailing zeros trimmed).
struct Stabilized {
    Configuration config;
    std::uint64_t firings = 0;
    std::vector<Count> shots;
};

/// Read-only view of a pile in the middle of a stabilization. `diffs` may
/// carry trailing zeros.
struct PileView {
    Count p;
    std::span<const Count> diffs;

    Configuration to_configuration() const
    {
        return Configuration(Params(p), std::vector<Count>(diffs.begin(), diffs.end()));
    }
};

namespace detail {

// Mutable working state shared by the engines. Grain count is validated up
// front against kMaxGrains, so every entry stays below 2^40 and the hot loops
// run unchecked.
class Pile {
public:
    Pile(Count p, std::span<const Count> b) : p_(p), b_(b.begin(), b.end()), shots_(b_.size(), 0)
    {
        if (grain_count(b) > kMaxGrains) {
            throw Error(Errc::GrainLimit, "grain count exceeds 2^40");
        }
    }

    Count p() const noexcept { return p_; }
    std::size_t size() const noexcept { return b_.size(); }
    Count at(std::size_t i) const noexcept { return i < b_.size() ? b_[i] : 0; }
    bool enabled(std::size_t i) const noexcept { return i < b_.size() && b_[i] > p_; }

    void add_grain() { if (b_.empty()) { grow(1); } ++b_[0]; }

    /// Fires column i `times` times in a row; the caller guarantees b_i >= times*(p+1).
    void fire(std::size_t i, Count times = 1)
    {
        const auto reach = i + static_cast<std::size_t>(p_);
        if (reach >= b_.size()) {
            grow(reach + 1);
        }
        if (i > 0) {
            b_[i - 1] += times * p_;
        }
        b_[i] -= times * (p_ + 1);
        b_[reach] += times;
        shots_[i] += times;
    }

    PileView view() const noexcept { return {p_, b_}; }

    Configuration configuration() const { return Configuration(Params(p_), b_); }

    std::vector<Count> shots() const
    {
        std::vector<Count> a = shots_;
        while (!a.empty() && a.back() == 0) {
            a.pop_back();
        }
        return a;
    }

private:
    void grow(std::size_t n)
    {
        b_.resize(n, 0);
        shots_.resize(n, 0);
    }

    Count p_;
    std::vector<Count> b_;
    std::vector<Count> shots_;
};

inline void charge(std::uint64_t& firings, std::uint64_t amount, std::uint64_t limit)
{
    firings += amount;
    if (firings > limit) {
        throw Error(Errc::WorkLimitExceeded,
                    "stabilization exceeded " + std::to_string(limit) + " firings");
    }
}

// Leftmost strategy from column `from`, assuming every column below `from`
// is stable. After firing i only column i-1 can become enabled to its left,
// so scanning resumes there.
template <class OnFire>
std::uint64_t run_leftmost(Pile& pile, std::size_t from, std::uint64_t limit, OnFire&& on_fire)
{
    std::uint64_t firings = 0;
    std::size_t i = from;
    while (i < pile.size()) {
        if (pile.enabled(i)) {
            pile.fire(i);
            charge(firings, 1, limit);
            on_fire(i, pile.view());
            i = i > 0 ? i - 1 : 0;
        } else {
            ++i;
        }
    }
    return firings;
}

template <class OnFire>
std::uint64_t run_rightmost(Pile& pile, std::uint64_t limit, OnFire&& on_fire)
{
    std::set<std::size_t> enabled;
    for (std::size_t i = 0; i < pile.size(); ++i) {
        if (pile.enabled(i)) {
            enabled.insert(i);
        }
    }
    std::uint64_t firings = 0;
    const auto p = static_cast<std::size_t>(pile.p());
    while (!enabled.empty()) {
        const std::size_t i = *enabled.rbegin();
        pile.fire(i);
        charge(firings, 1, limit);
        on_fire(i, pile.view());
        for (std::size_t j : {i > 0 ? i - 1 : i, i, i + p}) {
            if (pile.enabled(j)) {
                enabled.insert(j);
            } else {
                enabled.erase(j);
            }
        }
    }
    return firings;
}

template <class OnFire>
std::uint64_t run_random(Pile& pile, std::uint64_t seed, std::uint64_t limit, OnFire&& on_fire)
{
    // Enabled columns in a dense array plus a reverse index, for O(1)
    // uniform choice, insertion and removal.
    std::vector<std::size_t> enabled;
    std::vector<std::ptrdiff_t> slot;
    auto update = [&](std::size_t j) {
        if (j >= slot.size()) {
            slot.resize(std::max(j + 1, 2 * slot.size()), -1);
        }
        const bool on = pile.enabled(j);
        if (on && slot[j] < 0) {
            slot[j] = static_cast<std::ptrdiff_t>(enabled.size());
            enabled.push_back(j);
        } else if (!on && slot[j] >= 0) {
            const auto at = static_cast<std::size_t>(slot[j]);
            enabled[at] = enabled.back();
            slot[enabled[at]] = static_cast<std::ptrdiff_t>(at);
            enabled.pop_back();
            slot[j] = -1;
        }
    };
    for (std::size_t i = 0; i < pile.size(); ++i) {
        update(i);
    }
    std::mt19937_64 rng(seed);
    std::uint64_t firings = 0;
    const auto p = static_cast<std::size_t>(pile.p());
    while (!enabled.empty()) {
        std::uniform_int_distribution<std::size_t> pick(0, enabled.size() - 1);
        const std::size_t i = enabled[pick(rng)];
        pile.fire(i);
        charge(firings, 1, limit);
        on_fire(i, pile.view());
        if (i > 0) {
            update(i - 1);
        }
        update(i);
        update(i + p);
    }
    return firings;
}

// Worklist relaxation that fires a column floor(b_i / (p+1)) times at once.
// Repeated firings of one column form a valid strategy, so the fixed point,
// the shot vector and the firing total agree with single-step strategies.
inline std::uint64_t run_batched(Pile& pile, std::uint64_t limit)
{
    std::vector<std::size_t> work;
    std::vector<char> queued(pile.size(), 0);
    auto push = [&](std::size_t j) {
        if (j >= queued.size()) {
            queued.resize(std::max(j + 1, 2 * queued.size()), 0);
        }
        if (!queued[j] && pile.enabled(j)) {
            queued[j] = 1;
            work.push_back(j);
        }
    };
    for (std::size_t i = pile.size(); i-- > 0;) {
        push(i);
    }
    std::uint64_t firings = 0;
    const Count p = pile.p();
    while (!work.empty()) {
        const std::size_t i = work.back();
        work.pop_back();
        queued[i] = 0;
        const Count times = pile.at(i) / (p + 1);
        if (times == 0) {
            continue;
        }
        pile.fire(i, times);
        charge(firings, static_cast<std::uint64_t>(times), limit);
        push(i + static_cast<std::size_t>(p));
        if (i > 0) {
            push(i - 1);
        }
    }
    return firings;
}

struct NoObserver {
    void operator()(std::size_t, const PileView&) const noexcept {}
};

} // namespace detail

/// Stabilizes `c` under `strategy`, calling `on_fire(column, PileView)` after
/// every single firing.
template <class OnFire>
Stabilized stabilize(const Configuration& c, Strategy strategy, OnFire&& on_fire,
                     StabilizeOptions options = {})
{
    detail::Pile pile(c.p(), c.diffs());
    std::uint64_t firings = 0;
    switch (strategy.kind) {
    case Strategy::Kind::Leftmost:
        firings = detail::run_leftmost(pile, 0, options.work_limit, on_fire);
        break;
    case Strategy::Kind::Rightmost:
        firings = detail::run_rightmost(pile, options.work_limit, on_fire);
        break;
    case Strategy::Kind::Random:
        firings = detail::run_random(pile, strategy.seed, options.work_limit, on_fire);
        break;
    }
    return {pile.configuration(), firings, pile.shots()};
}

inline Stabilized stabilize(const Configuration& c, Strategy strategy = Strategy::leftmost(),
                            StabilizeOptions options = {})
{
    return stabilize(c, strategy, detail::NoObserver{}, options);
}

/// Stabilizes (n, 0^w) with the batched engine; same result as
/// stabilize(Configuration::column(params, n)) but far fewer steps for large n.
inline Stabilized stabilize_column(Count n, Params params, StabilizeOptions options = {})
{
    const auto start = Configuration::column(params, n);
    detail::Pile pile(params.p(), start.diffs());
    const auto firings = detail::run_batched(pile, options.work_limit);
    return {pile.configuration(), firings, pile.shots()};
}

/// pi(n): the unique fixed point reached from n grains on column 0.
inline Configuration fixed_point(Count n, Params params, StabilizeOptions options = {})
{
    return stabilize_column(n, params, options).config;
}

} // namespace kspm

#endif // KSPM_CORE_HPP
