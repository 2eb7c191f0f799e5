#include <gtest/gtest.h>

#include <set>
#include <vector>

#include "kspm/analysis.hpp"
#include "kspm/avalanche.hpp"
#include "oracles.hpp"

using namespace kspm;

namespace {

Configuration cfg(Count p, std::vector<Count> b) { return Configuration(Params(p), std::move(b)); }

std::vector<Count> as_vec(const Configuration& c) { return {c.diffs().begin(), c.diffs().end()}; }

Avalanche fired(std::vector<std::size_t> cols) { return Avalanche{1, std::move(cols)}; }

} // namespace

TEST(AddGrain, Examples)
{
    EXPECT_EQ(as_vec(add_grain(cfg(2, {2, 1, 2, 1, 2}))), (std::vector<Count>{3, 1, 2, 1, 2}));
    EXPECT_EQ(as_vec(add_grain(Configuration(Params(2)))), (std::vector<Count>{1}));
    EXPECT_EQ(stabilize(add_grain(fixed_point(24, Params(2)))).config, fixed_point(25, Params(2)));
}

TEST(RunAvalanche, TwentyFifthGrainP2)
{
    const auto r = run_avalanche(fixed_point(24, Params(2)), 25);
    EXPECT_EQ(r.avalanche.k, 25u);
    EXPECT_EQ(r.avalanche.fired, (std::vector<std::size_t>{0, 2, 1, 4, 3}));
    EXPECT_EQ(as_vec(r.config), (std::vector<Count>{2, 0, 2, 1, 0, 1, 1}));
}

TEST(RunAvalanche, SmallCases)
{
    const auto first = run_avalanche(Configuration(Params(2)), 1);
    EXPECT_TRUE(first.avalanche.empty());
    EXPECT_EQ(as_vec(first.config), (std::vector<Count>{1}));

    const auto third = run_avalanche(cfg(2, {2}), 3);
    EXPECT_EQ(third.avalanche.fired, (std::vector<std::size_t>{0}));
    EXPECT_EQ(as_vec(third.config), (std::vector<Count>{0, 0, 1}));
    EXPECT_EQ(grain_count(third.config), 3);
}

TEST(RunAvalanche, RejectsUnstableStart)
{
    try {
        run_avalanche(cfg(2, {3}), 4);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::NotStable);
    }
}

TEST(RunAvalanche, ReplayAndInvariants)
{
    // Replaying the recorded firings from pi(k-1)+grain must reproduce pi(k),
    // each firing must be the leftmost enabled column at its time, and no
    // column may fire twice.
    for (Count p = 1; p <= 5; ++p) {
        Configuration prev(Params{p});
        for (Count k = 1; k <= 600; ++k) {
            const auto r = run_avalanche(prev, static_cast<std::uint64_t>(k));
            const auto set = r.avalanche.fired_set();
            ASSERT_EQ(set.size(), r.avalanche.fired.size()) << "column fired twice, p=" << p << " k=" << k;
            Configuration replay = add_grain(prev);
            for (std::size_t col : r.avalanche.fired) {
                for (std::size_t j = 0; j < col; ++j) {
                    ASSERT_FALSE(replay.is_enabled(j)) << "not leftmost at p=" << p << " k=" << k;
                }
                replay = fire(replay, static_cast<std::int64_t>(col));
            }
            ASSERT_TRUE(is_stable(replay));
            ASSERT_EQ(replay, r.config);
            prev = r.config;
        }
    }
}

TEST(RunAvalanche, PlateauNeverExceedsBoundInsideAvalanches)
{
    for (Count p = 1; p <= 5; ++p) {
        Configuration prev(Params{p});
        for (Count k = 1; k <= 1500; ++k) {
            prev = run_avalanche(prev, static_cast<std::uint64_t>(k), [&](std::size_t, const PileView& v) {
                       ASSERT_LE(max_plateau(v.diffs), static_cast<std::size_t>(p + 1));
                   }).config;
        }
    }
}

TEST(Holes, Examples)
{
    EXPECT_TRUE(holes(fired({0, 2, 1, 4, 3})).empty());
    EXPECT_EQ(holes(fired({0, 2})), (std::vector<std::size_t>{1}));
    EXPECT_TRUE(holes(fired({})).empty());
    EXPECT_EQ(holes(fired({5, 6, 9})), (std::vector<std::size_t>{4, 8}));
}

TEST(Holes, MatchDefinitionOnRandomSets)
{
    std::mt19937_64 rng(5);
    for (int iter = 0; iter < 500; ++iter) {
        std::set<std::size_t> s;
        for (int j = 0; j < 8; ++j) {
            s.insert(rng() % 20);
        }
        const auto got = holes(fired({s.begin(), s.end()}));
        std::vector<std::size_t> expected;
        for (std::size_t i = 0; i < 25; ++i) {
            if (!s.count(i) && s.count(i + 1)) {
                expected.push_back(i);
            }
        }
        ASSERT_EQ(got, expected);
    }
}

TEST(DensityColumn, Examples)
{
    EXPECT_EQ(density_column(fired({0, 2, 1, 4, 3})).l_prime, 0u);
    EXPECT_EQ(density_column(fired({0, 2, 3})).l_prime, 2u);
    const auto empty = density_column(fired({}));
    EXPECT_EQ(empty.l_prime, 0u);
    EXPECT_FALSE(empty.max_fired.has_value());
}

TEST(DensityColumn, ReportInvariantOnScans)
{
    for (Count p = 2; p <= 4; ++p) {
        incremental_scan(800, Params(p), [](std::uint64_t, const Avalanche& a, const Configuration&) {
            const auto d = density_column(a);
            if (!d.max_fired) {
                return;
            }
            const auto set = a.fired_set();
            for (std::size_t c = d.l_prime; c <= *d.max_fired; ++c) {
                ASSERT_TRUE(std::binary_search(set.begin(), set.end(), c));
            }
            ASSERT_EQ(set.back(), *d.max_fired);
            ASSERT_LE(d.l_prime, *d.max_fired);
        });
    }
}

TEST(IncrementalScan, MatchesFixedPointsAtEveryStep)
{
    for (Count p = 1; p <= 6; ++p) {
        const auto summary = incremental_scan(400, Params(p), [&](std::uint64_t k, const Avalanche&,
                                                                  const Configuration& c) {
            ASSERT_EQ(c, fixed_point(static_cast<Count>(k), Params(p))) << "p=" << p << " k=" << k;
        });
        EXPECT_EQ(summary.final_config, fixed_point(400, Params(p)));
    }
}

TEST(IncrementalScan, Examples)
{
    EXPECT_EQ(as_vec(incremental_scan(24, Params(2), [](auto&&...) {}).final_config),
              (std::vector<Count>{2, 1, 2, 1, 2}));

    std::size_t calls = 0;
    const auto one = incremental_scan(1, Params(3), [&](std::uint64_t k, const Avalanche& a, const Configuration& c) {
        ++calls;
        EXPECT_EQ(k, 1u);
        EXPECT_TRUE(a.empty());
        EXPECT_EQ(as_vec(c), (std::vector<Count>{1}));
    });
    EXPECT_EQ(calls, 1u);
    EXPECT_EQ(one.l_global, 0u);

    EXPECT_EQ(incremental_scan(2000, Params(4), [](auto&&...) {}).final_config, fixed_point(2000, Params(4)));
    EXPECT_THROW(incremental_scan(0, Params(2), [](auto&&...) {}), Error);
}

TEST(IncrementalScan, TotalFiringsMatchStabilizationOfTheColumn)
{
    // Each avalanche is a strategy segment, so the firing totals add up.
    for (Count p = 1; p <= 4; ++p) {
        const auto s = incremental_scan(300, Params(p), [](auto&&...) {});
        EXPECT_EQ(s.total_firings, stabilize_column(300, Params(p)).firings);
    }
}

TEST(GlobalDensity, Examples)
{
    EXPECT_EQ(global_density(1, Params(2)), 0u);
    std::size_t expected = 0;
    Configuration prev(Params(2));
    for (Count k = 1; k <= 25; ++k) {
        auto r = run_avalanche(prev, static_cast<std::uint64_t>(k));
        expected = std::max(expected, density_column(r.avalanche).l_prime);
        prev = r.config;
    }
    EXPECT_EQ(global_density(25, Params(2)), expected);
}

TEST(GlobalDensity, IsMonotoneInN)
{
    std::size_t last = 0;
    for (Count n = 1; n <= 300; n += 13) {
        const auto l = global_density(n, Params(3));
        EXPECT_GE(l, last);
        last = l;
    }
}
