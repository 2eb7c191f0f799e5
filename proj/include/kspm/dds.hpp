#ifndef KSPM_DDS_HPP
#define KSPM_DDS_HPP

// Shot vectors and the two integer dynamical systems they induce along a
// fixed point: X_n = (a_{n-p}, ..., a_n) in Z^{p+1}, and the averaging system
// Y_n = (a_{n-p+1} - a_{n-p}, ..., a_n - a_{n-1}) in Z^p.
//
// Everything here is exact integer arithmetic. The divisions by p are exact
// whenever (state, b_n) is consistent; otherwise NonIntegral is thrown.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kspm/core.hpp"

namespace kspm {

/// Firing counts per column for the stabilization of (N, 0^w). The boundary
/// convention a_{-p} = N, a_i = 0 for -p < i < 0 lives in `at`.
class ShotVector {
public:
    ShotVector(Count n, Params params, std::vector<Count> counts)
        : n_(n), params_(params), counts_(std::move(counts))
    {
        while (!counts_.empty() && counts_.back() == 0) {
            counts_.pop_back();
        }
    }

    Count n() const noexcept { return n_; }
    const Params& params() const noexcept { return params_; }
    Count p() const noexcept { return params_.p(); }
    std::span<const Count> counts() const noexcept { return counts_; }
    std::size_t size() const noexcept { return counts_.size(); }

    Count at(std::int64_t i) const noexcept
    {
        if (i < 0) {
            return i == -p() ? n_ : 0;
        }
        const auto u = static_cast<std::size_t>(i);
        return u < counts_.size() ? counts_[u] : 0;
    }

    /// b_n recovered from a_{n-p}, a_n and a_{n+1}.
    Count height_difference(std::size_t n) const
    {
        const auto i = static_cast<std::int64_t>(n);
        return at(i - p()) - (p() + 1) * at(i) + p() * at(i + 1);
    }

    friend bool operator==(const ShotVector&, const ShotVector&) = default;

private:
    Count n_;
    Params params_;
    std::vector<Count> counts_;
};

inline ShotVector shot_vector(Count n, Params params)
{
    return ShotVector(n, params, stabilize_column(n, params).shots);
}

/// X_n = (a_{n-p}, ..., a_n), p+1 entries.
struct XVector {
    std::vector<Count> entries;
    friend bool operator==(const XVector&, const XVector&) = default;
};

/// Y_n, p entries of consecutive shot-vector differences (may be negative).
struct AvgVector {
    std::vector<Count> entries;

    Count sum() const { return std::accumulate(entries.begin(), entries.end(), Count{0}); }
    Count min() const { return *std::min_element(entries.begin(), entries.end()); }
    Count max() const { return *std::max_element(entries.begin(), entries.end()); }

    bool is_constant() const
    {
        return std::adjacent_find(entries.begin(), entries.end(), std::not_equal_to<>()) == entries.end();
    }

    friend bool operator==(const AvgVector&, const AvgVector&) = default;
};

inline XVector x_vector(const ShotVector& a, std::size_t n)
{
    XVector x;
    const auto p = a.p();
    for (Count j = 0; j <= p; ++j) {
        x.entries.push_back(a.at(static_cast<std::int64_t>(n) - p + j));
    }
    return x;
}

inline AvgVector avg_vector(const ShotVector& a, std::size_t n)
{
    AvgVector y;
    const auto p = a.p();
    for (Count j = 0; j < p; ++j) {
        const auto i = static_cast<std::int64_t>(n) - p + 1 + j;
        y.entries.push_back(a.at(i) - a.at(i - 1));
    }
    return y;
}

/// Change of basis followed by the projection that drops the first
/// component: maps X_n to Y_n by taking consecutive differences.
inline AvgVector project(const XVector& x)
{
    AvgVector y;
    for (std::size_t j = 1; j < x.entries.size(); ++j) {
        y.entries.push_back(x.entries[j] - x.entries[j - 1]);
    }
    return y;
}

/// Values b in {0..p} compatible with an integral a_{n+1}: a singleton, or
/// {0, p} when -a_{n-p} + (p+1) a_n is divisible by p.
inline std::vector<Count> reconstruct_b(Count a_nm_p, Count a_n, Params params)
{
    const Count p = params.p();
    const Count r = detail::floor_mod(a_nm_p - a_n, p);
    if (r == 0) {
        return {0, p};
    }
    return {r};
}

namespace detail {

inline void check_perturbation(Count b, Count p)
{
    if (b < 0 || b > p) {
        throw Error(Errc::InvalidArgument, "height difference " + std::to_string(b)
                                               + " outside [0, " + std::to_string(p) + "]");
    }
}

inline Count exact_div(Count num, Count p)
{
    if (floor_mod(num, p) != 0) {
        throw Error(Errc::NonIntegral, std::to_string(num) + " is not divisible by "
                                           + std::to_string(p));
    }
    return num / p;
}

} // namespace detail

/// X_{n+1} = A X_n + (b_n / p) J.
inline XVector x_step(const XVector& x, Count b, Params params)
{
    const Count p = params.p();
    if (x.entries.size() != static_cast<std::size_t>(p + 1)) {
        throw Error(Errc::InvalidArgument, "X vector must have p+1 entries");
    }
    detail::check_perturbation(b, p);
    const Count num = detail::checked_add(
        detail::checked_add(-x.entries.front(), detail::checked_mul(p + 1, x.entries.back())), b);
    XVector next;
    next.entries.assign(x.entries.begin() + 1, x.entries.end());
    next.entries.push_back(detail::exact_div(num, p));
    return next;
}

/// Y_{n+1} = M Y_n + (b_n / p) K: shift up, append mean(Y_n) + b_n / p.
inline AvgVector avg_step(const AvgVector& y, Count b, Params params)
{
    const Count p = params.p();
    if (y.entries.size() != static_cast<std::size_t>(p)) {
        throw Error(Errc::InvalidArgument, "Y vector must have p entries");
    }
    detail::check_perturbation(b, p);
    Count num = b;
    for (Count v : y.entries) {
        num = detail::checked_add(num, v);
    }
    AvgVector next;
    next.entries.assign(y.entries.begin() + 1, y.entries.end());
    next.entries.push_back(detail::exact_div(num, p));
    return next;
}

/// Number of steps after which Y_n is identically zero for this run.
inline std::size_t trajectory_length(const ShotVector& a, const Configuration& fixed)
{
    return std::max(a.size(), fixed.size()) + static_cast<std::size_t>(a.p()) + 1;
}

/// Y_0, Y_1, ... driven by b_n = fixed[n], each step cross-checked against
/// the consecutive differences of the shot vector.
inline std::vector<AvgVector> avg_trajectory(const ShotVector& a, const Configuration& fixed)
{
    const Params params = a.params();
    std::vector<AvgVector> traj;
    const std::size_t len = trajectory_length(a, fixed);
    traj.reserve(len);
    AvgVector y = avg_vector(a, 0);
    for (std::size_t n = 0; n < len; ++n) {
        if (y != avg_vector(a, n)) {
            throw Error(Errc::Inconsistent, "averaging system diverges from the shot vector at n = "
                                                + std::to_string(n));
        }
        traj.push_back(y);
        if (n + 1 < len) {
            y = avg_step(y, fixed[n], params);
        }
    }
    return traj;
}

inline std::vector<AvgVector> avg_trajectory(Count n, Params params)
{
    if (n < 1) {
        throw Error(Errc::InvalidArgument, "trajectory needs n >= 1");
    }
    const auto run = stabilize_column(n, params);
    return avg_trajectory(ShotVector(n, params, run.shots), run.config);
}

/// Smallest n with Y_n constant, if any.
inline std::optional<std::size_t> first_constant_index(std::span<const AvgVector> traj)
{
    for (std::size_t n = 0; n < traj.size(); ++n) {
        if (traj[n].is_constant()) {
            return n;
        }
    }
    return std::nullopt;
}

} // namespace kspm

#endif // KSPM_DDS_HPP
