#include <cmath>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "corona/dynamics.hpp"

namespace {

using namespace corona;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Mean hitting time from the definition: for every target j solve the
// absorbing system by Gauss-Seidel sweeps, then average sum_j pi_j H_ij over
// starts i with weight pi_i.
double hitting_time_gauss_seidel(const WeightedGraph& g) {
    const std::size_t n = g.vertex_count();
    const auto pi = stationary_distribution(g);
    double total = 0;
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<double> h(n, 0.0);
        for (int sweep = 0; sweep < 20000; ++sweep) {
            double change = 0;
            for (std::size_t i = 0; i < n; ++i) {
                if (i == j) continue;
                double acc = 1;
                const auto s = static_cast<double>(g.strength(static_cast<VertexId>(i)));
                for (const auto& nb : g.neighbors(static_cast<VertexId>(i)))
                    acc += static_cast<double>(nb.weight) / s * h[nb.vertex];
                change = std::max(change, std::abs(acc - h[i]));
                h[i] = acc;
            }
            if (change < 1e-12) break;
        }
        for (std::size_t i = 0; i < n; ++i) total += pi[i] * pi[j] * h[i];
    }
    return total;
}

TEST(Stationary, ProportionalToStrength) {
    const auto g = generate(ModelParams(2, 2));
    const auto pi = stationary_distribution(g);
    EXPECT_NEAR(std::accumulate(pi.begin(), pi.end(), 0.0), 1.0, 1e-14);
    EXPECT_EQ(stationary_weight(g, 0), Fraction(g.strength(0), 2 * g.total_weight()));
    for (VertexId v = 0; v < g.vertex_count(); ++v) EXPECT_NEAR(pi[v], stationary_weight(g, v).to_double(), 1e-16);
}

TEST(HittingTime, Goldens) {
    for (u64 d = 1; d <= 4; ++d) EXPECT_NEAR(hitting_time_closed(d, 0), 4.0 / 3, 1e-15);
    EXPECT_NEAR(hitting_time_closed(1, 1), 158.0 / 15, 1e-13);
    EXPECT_NEAR(hitting_time_closed(1, 2), 983.0 / 15, 1e-12);
    EXPECT_NEAR(hitting_time_recursive(1, 1), 158.0 / 15, 1e-13);
    EXPECT_NEAR(hitting_time_recursive(1, 2), 983.0 / 15, 1e-12);
}

TEST(HittingTime, ClosedRecursiveSpectralAgree) {
    for (u64 d = 1; d <= 4; ++d)
        for (u64 n = 0; n <= 8; ++n) {
            const double closed = hitting_time_closed(d, n);
            EXPECT_LE(rel(hitting_time_recursive(d, n), closed), 1e-12) << d << ' ' << n;
            EXPECT_LE(rel(hitting_time_spectral(laplacian_spectrum(ModelParams(d, n))), closed), 1e-9) << d << ' ' << n;
        }
}

TEST(HittingTime, LinearSolve) {
    for (u64 d = 1; d <= 4; ++d)
        for (u64 n = 0; n <= 2; ++n) {
            const auto g = generate(ModelParams(d, n));
            EXPECT_LE(rel(hitting_time_linear_solve(g), hitting_time_closed(d, n)), 1e-6) << d << ' ' << n;
        }
    EXPECT_LE(rel(hitting_time_linear_solve(generate(ModelParams(1, 3))), hitting_time_closed(1, 3)), 1e-6);
    EXPECT_THROW(hitting_time_linear_solve(generate(ModelParams(1, 4))), guard_error);
}

TEST(HittingTime, IterativeOracle) {
    const auto g = generate(ModelParams(2, 1));
    EXPECT_LE(rel(hitting_time_gauss_seidel(g), hitting_time_closed(2, 1)), 1e-8);
}

TEST(HittingTime, GrowsLikeVertexCount) {
    // From the recursion, H_n / N_n rises to 4(d+1)(d+3)/(3d(d+4)).
    for (u64 d = 1; d <= 4; ++d) {
        const double dd = static_cast<double>(d);
        const double limit = 4 * (dd + 1) * (dd + 3) / (3 * dd * (dd + 4));
        double prev = 0;
        for (u64 n = 0; n <= 20; ++n) {
            const double ratio = hitting_time_closed(d, n) / static_cast<double>(expected_census(ModelParams(d, n)).vertices);
            EXPECT_GT(ratio, prev);
            EXPECT_LT(ratio, limit);
            prev = ratio;
        }
        EXPECT_NEAR(prev, limit, 1e-4 * limit);
    }
    EXPECT_NEAR(hitting_time_closed(1, 8) / static_cast<double>(expected_census(ModelParams(1, 8)).vertices), 2.12708,
                1e-5);
}

TEST(HittingTime, SpectralNeedsConnected) {
    Spectrum s{1, 0, SpectrumKind::laplacian, {{0.0, 2}, {1.5, 1}}};
    EXPECT_THROW(hitting_time_spectral(s), precondition_error);
}

TEST(MonteCarlo, WithinThreeStandardErrors) {
    for (u64 n = 0; n <= 2; ++n) {
        const auto g = generate(ModelParams(1, n));
        const auto r = hitting_time_monte_carlo(g, 0, 100'000, 42, 2);
        EXPECT_EQ(r.samples, 100'000u);
        EXPECT_LE(std::abs(r.mean - hitting_time_closed(1, n)), 3 * r.std_error) << n;
    }
}

TEST(MonteCarlo, DeterministicAcrossThreadCounts) {
    const auto g = generate(ModelParams(2, 2));
    const auto a = hitting_time_monte_carlo(g, 5, 10'001, 7, 1);
    const auto b = hitting_time_monte_carlo(g, 5, 10'001, 7, 3);
    const auto c = hitting_time_monte_carlo(g, 5, 10'001, 7, 64);
    EXPECT_EQ(a.mean, b.mean);
    EXPECT_EQ(a.std_error, b.std_error);
    EXPECT_EQ(a.mean, c.mean);
    EXPECT_NE(a.mean, hitting_time_monte_carlo(g, 5, 10'001, 8, 1).mean);
}

TEST(MonteCarlo, Preconditions) {
    const auto g = seed_triangle();
    EXPECT_THROW(hitting_time_monte_carlo(g, 0, 0, 1), precondition_error);
    EXPECT_THROW(hitting_time_monte_carlo(g, 3, 10, 1), precondition_error);
}

TEST(MonteCarlo, StreamSeedsDistinct) {
    std::vector<u64> seeds;
    for (u64 b = 0; b < monte_carlo_streams; ++b) seeds.push_back(monte_carlo_stream_seed(42, b));
    std::sort(seeds.begin(), seeds.end());
    EXPECT_EQ(std::adjacent_find(seeds.begin(), seeds.end()), seeds.end());
}

TEST(HittingReport, AllRoutes) {
    const auto r = hitting_report(ModelParams(1, 1), true, MonteCarloOptions{0, 20'000, 3, 1});
    EXPECT_NEAR(r.closed_form, 158.0 / 15, 1e-12);
    ASSERT_TRUE(r.linear_solve && r.monte_carlo);
    EXPECT_NEAR(*r.linear_solve, r.closed_form, 1e-9);
    EXPECT_FALSE(hitting_report(ModelParams(1, 1), false).linear_solve);
}

TEST(SpanningTrees, ExactGoldens) {
    EXPECT_EQ(tree_count_kirchhoff(seed_triangle()), 3);
    EXPECT_EQ(*tree_count_closed(ModelParams(1, 0)).exact, 3);
    EXPECT_EQ(tree_count_kirchhoff(generate(ModelParams(1, 1))), 324);
    EXPECT_EQ(tree_count_kirchhoff(generate(ModelParams(2, 1))), 729);
    EXPECT_EQ(*tree_count_closed(ModelParams(1, 1)).exact, 324);
    EXPECT_EQ(*tree_count_closed(ModelParams(2, 1)).exact, 729);
}

TEST(SpanningTrees, KirchhoffMatchesClosedForm) {
    for (u64 d = 1; d <= 4; ++d)
        for (u64 n = 0; n <= 2; ++n) {
            const ModelParams p(d, n);
            EXPECT_EQ(tree_count_kirchhoff(generate(p)), *tree_count_closed(p).exact) << d << ' ' << n;
        }
    EXPECT_THROW(tree_count_kirchhoff(generate(ModelParams(1, 3))), guard_error);
}

TEST(SpanningTrees, ClosedEqualsTriangleEnumeration) {
    for (u64 d = 1; d <= 4; ++d)
        for (u64 n = 0; n <= 8; ++n) {
            const ModelParams p(d, n);
            const auto a = tree_count_closed(p);
            const auto b = tree_count_triangles(p);
            EXPECT_EQ(a.a, b.a);
            EXPECT_EQ(a.b, b.b);
            EXPECT_EQ(a.a, expected_census(p).triangles);
        }
}

TEST(SpanningTrees, SpectralLog) {
    for (u64 d = 1; d <= 4; ++d)
        for (u64 n = 0; n <= 5; ++n) {
            const ModelParams p(d, n);
            const double closed = tree_count_closed(p).log_value;
            EXPECT_LE(rel(tree_count_spectral(generate(p), laplacian_spectrum(p)), closed), 1e-9) << d << ' ' << n;
        }
}

TEST(SpanningTrees, LogValueConsistent) {
    const auto t = tree_count_closed(ModelParams(3, 2));
    EXPECT_NEAR(t.log_value, static_cast<double>(t.a) * std::log(3.0) + static_cast<double>(t.b) * std::log(4.0),
                1e-9 * t.log_value);
    ASSERT_TRUE(t.exact);
    EXPECT_NEAR(std::log(static_cast<double>(*t.exact)), t.log_value, 1e-9 * t.log_value);
}

}  // namespace
