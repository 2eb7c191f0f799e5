#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "kspm/analysis.hpp"
#include "kspm/dds.hpp"

using namespace kspm;

namespace {

AvgVector y(std::vector<Count> v) { return AvgVector{std::move(v)}; }

} // namespace

TEST(ShotVector, Examples)
{
    const auto a24 = shot_vector(24, Params(2));
    EXPECT_EQ(std::vector<Count>(a24.counts().begin(), a24.counts().end()), (std::vector<Count>{8, 1, 2}));

    const auto a = shot_vector(2000, Params(4));
    EXPECT_EQ(a.at(4), 189);
    EXPECT_EQ(a.at(8), 120);
    EXPECT_EQ(a.at(9), 103);

    EXPECT_EQ(shot_vector(0, Params(3)).size(), 0u);
}

TEST(ShotVector, BoundaryConvention)
{
    const auto a = shot_vector(100, Params(3));
    EXPECT_EQ(a.at(-3), 100);
    EXPECT_EQ(a.at(-2), 0);
    EXPECT_EQ(a.at(-1), 0);
    EXPECT_EQ(a.at(1000), 0);
}

TEST(ShotVector, RecoversFixedPoint)
{
    for (Count p = 1; p <= 6; ++p) {
        for (Count n = 0; n <= 2000; n += (n < 200 ? 1 : 37)) {
            const auto run = stabilize_column(n, Params(p));
            const ShotVector a(n, Params(p), run.shots);
            for (std::size_t i = 0; i < run.config.size() + 8; ++i) {
                ASSERT_EQ(a.height_difference(i), run.config[i]) << "p=" << p << " n=" << n << " i=" << i;
            }
            ASSERT_LE(a.at(0) * p, n);
        }
    }
}

TEST(ReconstructB, Examples)
{
    EXPECT_EQ(reconstruct_b(189, 120, Params(4)), (std::vector<Count>{1}));
    EXPECT_EQ(reconstruct_b(0, 0, Params(4)), (std::vector<Count>{0, 4}));
}

TEST(ReconstructB, AlwaysContainsTheSimulatedValue)
{
    for (Count p = 1; p <= 5; ++p) {
        for (Count n = 1; n <= 500; ++n) {
            const auto run = stabilize_column(n, Params(p));
            const ShotVector a(n, Params(p), run.shots);
            for (std::size_t i = 0; i <= run.config.size(); ++i) {
                const auto at = static_cast<std::int64_t>(i);
                const auto cands = reconstruct_b(a.at(at - p), a.at(at), Params(p));
                ASSERT_TRUE(cands.size() == 1 || cands == (std::vector<Count>{0, p}));
                ASSERT_NE(std::find(cands.begin(), cands.end(), run.config[i]), cands.end());
            }
        }
    }
}

TEST(XStep, Examples)
{
    const auto a = shot_vector(2000, Params(4));
    const auto x8 = x_vector(a, 8);
    EXPECT_EQ(x8.entries, (std::vector<Count>{189, 118, 124, 126, 120}));
    EXPECT_EQ(x_step(x8, 1, Params(4)).entries.back(), 103);

    const XVector x0{{24, 0, 8}};
    EXPECT_EQ(x_step(x0, 2, Params(2)).entries, (std::vector<Count>{0, 8, 1}));

    try {
        x_step(x8, 2, Params(4));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::NonIntegral);
    }
    EXPECT_THROW(x_step(x8, 5, Params(4)), Error);
    EXPECT_THROW(x_step(XVector{{1, 2}}, 0, Params(4)), Error);
}

TEST(XStep, OrbitReproducesShotVector)
{
    for (Count p = 1; p <= 5; ++p) {
        for (Count n = 1; n <= 400; n += 3) {
            const auto run = stabilize_column(n, Params(p));
            const ShotVector a(n, Params(p), run.shots);
            XVector x = x_vector(a, 0);
            for (std::size_t i = 0; i < run.config.size() + 4; ++i) {
                ASSERT_EQ(x, x_vector(a, i));
                x = x_step(x, run.config[i], Params(p));
            }
        }
    }
}

TEST(AvgStep, Examples)
{
    EXPECT_EQ(avg_step(y({-3, -5, -7, -7}), 2, Params(4)), y({-5, -7, -7, -5}));
    EXPECT_EQ(avg_step(y({6, 6, 6}), 0, Params(3)), y({6, 6, 6}));
    EXPECT_EQ(avg_step(y({6, 6, 6}), 3, Params(3)), y({6, 6, 7}));
    EXPECT_EQ(avg_step(y({-2, -2}), 2, Params(2)), y({-2, -1}));
    try {
        avg_step(y({-3, -5, -7, -7}), 1, Params(4));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::NonIntegral);
    }
    EXPECT_EQ(avg_step(y({4}), 1, Params(1)), y({5}));
}

TEST(AvgStep, CommutesWithProjection)
{
    // Random consistent (x, b): choose x, then pick b from the admissible set.
    std::mt19937_64 rng(31);
    for (int iter = 0; iter < 5000; ++iter) {
        const Count p = 1 + static_cast<Count>(rng() % 8);
        std::uniform_int_distribution<Count> v(-1000, 1000);
        XVector x;
        for (Count j = 0; j <= p; ++j) {
            x.entries.push_back(v(rng));
        }
        const auto cands = reconstruct_b(x.entries.front(), x.entries.back(), Params(p));
        const Count b = cands[rng() % cands.size()];
        ASSERT_EQ(avg_step(project(x), b, Params(p)), project(x_step(x, b, Params(p))));
    }
}

TEST(AvgTrajectory, Examples)
{
    const auto t = avg_trajectory(2000, Params(4));
    EXPECT_EQ(t[13], y({-3, -5, -7, -7}));
    EXPECT_EQ(t[14], y({-5, -7, -7, -5}));

    EXPECT_EQ(avg_trajectory(24, Params(2)).front(), y({-24, 8}));
    for (Count p = 2; p <= 5; ++p) {
        std::vector<Count> expected(static_cast<std::size_t>(p), 0);
        expected.front() = -1;
        EXPECT_EQ(avg_trajectory(1, Params(p)).front(), y(expected));
    }
    EXPECT_EQ(avg_trajectory(1, Params(1)).front(), y({-1}));
    EXPECT_THROW(avg_trajectory(0, Params(2)), Error);
}

TEST(AvgTrajectory, InconsistentInputsAreReported)
{
    const auto run = stabilize_column(300, Params(3));
    auto shots = run.shots;
    shots[2] += 3;
    try {
        avg_trajectory(ShotVector(300, Params(3), shots), run.config);
        FAIL();
    } catch (const Error& e) {
        EXPECT_TRUE(e.code() == Errc::Inconsistent || e.code() == Errc::NonIntegral);
    }
}

TEST(AvgTrajectory, IntegralAndMonotoneEnvelope)
{
    for (Count p = 2; p <= 6; ++p) {
        for (Count n = 1; n <= 3000; n += (n < 300 ? 1 : 53)) {
            const auto traj = avg_trajectory(n, Params(p));
            for (std::size_t i = 0; i + 1 < traj.size(); ++i) {
                if (traj[i].is_constant()) {
                    continue;
                }
                ASSERT_GE(traj[i + 1].min(), traj[i].min());
                ASSERT_LE(traj[i + 1].max(), traj[i].max());
                bool progressed = false;
                for (std::size_t c = 0; c <= static_cast<std::size_t>(p) && i + c < traj.size(); ++c) {
                    progressed = progressed
                                 || traj[i + c].max() - traj[i + c].min() < traj[i].max() - traj[i].min();
                }
                ASSERT_TRUE(progressed) << "p=" << p << " n=" << n << " i=" << i;
            }
            ASSERT_TRUE(traj.back().is_constant());
        }
    }
}

TEST(FirstConstantIndex, Examples)
{
    const auto t = avg_trajectory(2000, Params(4));
    const auto n = first_constant_index(t);
    ASSERT_TRUE(n.has_value());
    EXPECT_LE(*n, 20u);
    EXPECT_TRUE(matches_theorem1_at(fixed_point(2000, Params(4)), *n));

    const std::vector<AvgVector> constant{y({3, 3, 3}), y({1, 2, 3})};
    EXPECT_EQ(first_constant_index(constant), 0u);
    const std::vector<AvgVector> never{y({1, 2}), y({2, 3}), y({0, 5})};
    EXPECT_FALSE(first_constant_index(never).has_value());

    EXPECT_EQ(first_constant_index(avg_trajectory(50, Params(1))), 0u);
}
