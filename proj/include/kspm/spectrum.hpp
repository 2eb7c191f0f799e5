#ifndef KSPM_SPECTRUM_HPP
#define KSPM_SPECTRUM_HPP

// Numerical check of the spectral facts behind the averaging system: the
// polynomial R(x) = x^{p-1} + ((p-1)/p) x^{p-2} + ... + (2/p) x + 1/p has
// p-1 distinct roots of modulus at most (p-1)/p, and the mean-removed
// averaging matrix D*M has eigenvalues {0} plus those roots.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "kspm/core.hpp"

namespace kspm {

using Complex = std::complex<double>;

struct SpectrumReport {
    Count p = 1;
    std::vector<Complex> roots;
    std::vector<int> multiplicities;
    double max_modulus = 0.0;
    double bound = 0.0;           // (p-1)/p
    double min_separation = std::numeric_limits<double>::infinity();
    bool distinct = true;
    std::vector<Complex> dm_eigenvalues;
    double dm_mismatch = 0.0;     // worst distance between eig(DM) and {0} U roots

    bool modulus_ok(double tolerance) const { return max_modulus <= bound + tolerance; }
    bool dm_ok(double tolerance) const { return dm_mismatch <= tolerance; }
};

/// Companion matrix of the monic polynomial R.
inline Eigen::MatrixXd r_companion(Params params)
{
    const auto deg = static_cast<Eigen::Index>(params.p() - 1);
    const double p = static_cast<double>(params.p());
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(deg, deg);
    for (Eigen::Index i = 1; i < deg; ++i) {
        c(i, i - 1) = 1.0;
    }
    for (Eigen::Index k = 0; k < deg; ++k) {
        c(k, deg - 1) = -static_cast<double>(k + 1) / p;
    }
    return c;
}

/// M: shift rows up, bottom row all 1/p.
inline Eigen::MatrixXd averaging_matrix(Params params)
{
    const auto n = static_cast<Eigen::Index>(params.p());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        m(i, i + 1) = 1.0;
    }
    m.row(n - 1).setConstant(1.0 / static_cast<double>(n));
    return m;
}

/// D: subtracts the mean of the entries from every entry.
inline Eigen::MatrixXd mean_removal(Params params)
{
    const auto n = static_cast<Eigen::Index>(params.p());
    return Eigen::MatrixXd::Identity(n, n)
           - Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
}

namespace detail {

inline std::vector<Complex> eigenvalues(const Eigen::MatrixXd& m)
{
    if (m.rows() == 0) {
        return {};
    }
    Eigen::EigenSolver<Eigen::MatrixXd> solver(m, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
        throw Error(Errc::NumericalFailure, "eigenvalue iteration did not converge");
    }
    std::vector<Complex> out;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
        out.push_back(solver.eigenvalues()[i]);
    }
    return out;
}

// Largest distance from an expected value to its greedily matched computed value.
inline double match_error(std::vector<Complex> expected, std::vector<Complex> computed)
{
    if (expected.size() != computed.size()) {
        return std::numeric_limits<double>::infinity();
    }
    double worst = 0.0;
    for (const Complex& e : expected) {
        auto best = std::min_element(computed.begin(), computed.end(), [&](Complex a, Complex b) {
            return std::abs(a - e) < std::abs(b - e);
        });
        worst = std::max(worst, std::abs(*best - e));
        computed.erase(best);
    }
    return worst;
}

} // namespace detail

inline SpectrumReport spectrum(Params params, double tolerance = 1e-9)
{
    SpectrumReport r;
    r.p = params.p();
    r.bound = static_cast<double>(r.p - 1) / static_cast<double>(r.p);
    r.roots = detail::eigenvalues(r_companion(params));
    for (std::size_t i = 0; i < r.roots.size(); ++i) {
        r.max_modulus = std::max(r.max_modulus, std::abs(r.roots[i]));
        int mult = 0;
        for (std::size_t j = 0; j < r.roots.size(); ++j) {
            const double d = std::abs(r.roots[i] - r.roots[j]);
            if (d <= tolerance) {
                ++mult;
            }
            if (j != i) {
                r.min_separation = std::min(r.min_separation, d);
            }
        }
        r.multiplicities.push_back(mult);
    }
    r.distinct = r.min_separation > tolerance;

    r.dm_eigenvalues = detail::eigenvalues(mean_removal(params) * averaging_matrix(params));
    std::vector<Complex> expected = r.roots;
    expected.emplace_back(0.0, 0.0);
    r.dm_mismatch = detail::match_error(expected, r.dm_eigenvalues);
    return r;
}

} // namespace kspm

#endif // KSPM_SPECTRUM_HPP
