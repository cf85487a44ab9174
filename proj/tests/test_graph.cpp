#include <map>
#include <set>
#include <tuple>
#include <vector>

#include <gtest/gtest.h>

#include "corona/graph.hpp"

namespace {

using namespace corona;

// Straightforward corona builder on an edge map, used as an oracle for the
// CSR implementation. Same vertex numbering: host, then copy, then g2 order.
std::map<std::pair<VertexId, VertexId>, u64> naive_corona(const WeightedGraph& g1, const WeightedGraph& g2) {
    std::map<std::pair<VertexId, VertexId>, u64> out;
    for (const auto& e : g1.edges()) out[{e.u, e.v}] = e.w;
    auto next = static_cast<VertexId>(g1.vertex_count());
    for (VertexId i = 0; i < g1.vertex_count(); ++i) {
        u64 strength = 0;
        for (const auto& e : g1.edges())
            if (e.u == i || e.v == i) strength += e.w;
        for (u64 c = 0; c < strength / 2; ++c) {
            const VertexId base = next;
            for (VertexId x = 0; x < g2.vertex_count(); ++x) out[{i, base + x}] = 1;
            for (const auto& e : g2.edges()) out[{base + e.u, base + e.v}] = e.w;
            next += static_cast<VertexId>(g2.vertex_count());
        }
    }
    return out;
}

std::map<std::pair<VertexId, VertexId>, u64> edge_map(const WeightedGraph& g) {
    std::map<std::pair<VertexId, VertexId>, u64> out;
    for (const auto& e : g.edges()) out[{e.u, e.v}] = e.w;
    return out;
}

// O(N^3) triangle count on a dense adjacency matrix.
u64 brute_force_triangles(const WeightedGraph& g) {
    const std::size_t n = g.vertex_count();
    std::vector<std::vector<bool>> a(n, std::vector<bool>(n, false));
    for (const auto& e : g.edges()) a[e.u][e.v] = a[e.v][e.u] = true;
    u64 t = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (a[i][j])
                for (std::size_t k = j + 1; k < n; ++k)
                    if (a[i][k] && a[j][k]) ++t;
    return t;
}

TEST(WeightedGraph, SeedTriangle) {
    const auto g = seed_triangle();
    EXPECT_EQ(g.vertex_count(), 3u);
    EXPECT_EQ(g.edge_count(), 3u);
    EXPECT_EQ(g.level(), 0u);
    for (VertexId v = 0; v < 3; ++v) {
        EXPECT_EQ(g.strength(v), 2u);
        EXPECT_EQ(g.degree(v), 2u);
        EXPECT_EQ(g.birth(v), 0u);
    }
    EXPECT_EQ(census(g), (Census{3, 3, 1, 3}));
}

TEST(WeightedGraph, FromEdgesNormalizesAndSorts) {
    const auto g = WeightedGraph::from_edges(4, {{3, 2, 5}, {1, 0, 2}, {2, 0, 1}});
    const std::vector<Edge> expected{{0, 1, 2}, {0, 2, 1}, {2, 3, 5}};
    EXPECT_TRUE(std::equal(g.edges().begin(), g.edges().end(), expected.begin(), expected.end()));
    EXPECT_EQ(g.weight(3, 2), 5u);
    EXPECT_EQ(g.weight(1, 3), 0u);
    EXPECT_EQ(g.strength(0), 3u);
    EXPECT_EQ(g.total_weight(), 8u);
}

TEST(WeightedGraph, FromEdgesRejectsInvalidInput) {
    EXPECT_THROW(WeightedGraph::from_edges(2, {{0, 0, 1}}), precondition_error);
    EXPECT_THROW(WeightedGraph::from_edges(2, {{0, 1, 0}}), precondition_error);
    EXPECT_THROW(WeightedGraph::from_edges(2, {{0, 2, 1}}), precondition_error);
    EXPECT_THROW(WeightedGraph::from_edges(2, {{0, 1, 1}, {1, 0, 3}}), precondition_error);
    EXPECT_THROW(WeightedGraph::from_edges(4, {{0, 1, 1}, {2, 3, 1}}), precondition_error);
    EXPECT_THROW(WeightedGraph::from_edges(2, {{0, 1, 1}}, {0}), precondition_error);
}

TEST(ExtendedCorona, MatchesNaiveBuilder) {
    const auto g1 = WeightedGraph::from_edges(3, {{0, 1, 2}, {1, 2, 4}, {0, 2, 2}});
    const auto g2 = WeightedGraph::from_edges(3, {{0, 1, 3}, {1, 2, 7}});
    const auto g = extended_corona(g1, g2);
    EXPECT_EQ(edge_map(g), naive_corona(g1, g2));
    EXPECT_EQ(g.level(), 1u);
    for (VertexId v = 3; v < g.vertex_count(); ++v) EXPECT_EQ(g.birth(v), 1u);
}

TEST(ExtendedCorona, KeepsArbitraryG2Weights) {
    const auto g2 = WeightedGraph::from_edges(2, {{0, 1, 9}});
    const auto g = extended_corona(seed_triangle(), g2);
    EXPECT_EQ(edge_map(g), naive_corona(seed_triangle(), g2));
    EXPECT_EQ(g.weight(3, 4), 9u);
}

TEST(ExtendedCorona, Preconditions) {
    const auto odd = WeightedGraph::from_edges(2, {{0, 1, 1}});
    EXPECT_THROW(extended_corona(odd, complete_graph_k2()), precondition_error);
    EXPECT_THROW(extended_corona(seed_triangle(), WeightedGraph()), precondition_error);
}

TEST(ReinforceWeights, ScalesOnlyEdgesBetweenOldVertices) {
    const auto c = extended_corona(seed_triangle(), complete_graph_k2());
    const auto g = reinforce_weights(c, 3);
    for (const auto& e : g.edges()) {
        const bool old = c.birth(e.u) < 1 && c.birth(e.v) < 1;
        EXPECT_EQ(e.w, old ? 4u : 1u) << e.u << '-' << e.v;
    }
    EXPECT_THROW(reinforce_weights(c, 0), precondition_error);
}

TEST(Evolve, FirstLevelByHand) {
    // Each seed vertex (strength 2) receives one K2 copy; seed edges get 1+delta.
    const auto g = evolve(seed_triangle(), 1);
    EXPECT_EQ(g.vertex_count(), 9u);
    EXPECT_EQ(g.edge_count(), 12u);
    EXPECT_EQ(g.weight(0, 1), 2u);
    EXPECT_EQ(g.weight(0, 3), 1u);
    EXPECT_EQ(g.weight(0, 4), 1u);
    EXPECT_EQ(g.weight(3, 4), 1u);
    EXPECT_EQ(g.strength(0), 6u);
    EXPECT_EQ(g.degree(0), 4u);
}

TEST(Census, Goldens) {
    EXPECT_EQ(census(generate(ModelParams(1, 1))), (Census{9, 12, 4, 15}));
    EXPECT_EQ(census(generate(ModelParams(1, 2))), (Census{39, 57, 19, 75}));
    EXPECT_EQ(census(generate(ModelParams(1, 5))), (Census{4689, 7032, 2344, 9375}));
    EXPECT_EQ(expected_census(ModelParams(1, 0)), (Census{3, 3, 1, 3}));
}

TEST(Census, W1HasNineVerticesForEveryDelta) {
    for (u64 d = 1; d <= 6; ++d) EXPECT_EQ(generate(ModelParams(d, 1)).vertex_count(), 9u);
}

class CensusProperty : public ::testing::TestWithParam<std::tuple<u64, u64>> {};

TEST_P(CensusProperty, GeneratedMatchesClosedForm) {
    const auto [d, n] = GetParam();
    const ModelParams p(d, n);
    const auto g = generate(p);
    EXPECT_EQ(census(g), expected_census(p));
    EXPECT_TRUE(g.all_strengths_even());
    EXPECT_TRUE(g.is_connected());
    u64 strength_sum = 0;
    for (VertexId v = 0; v < g.vertex_count(); ++v) strength_sum += g.strength(v);
    EXPECT_EQ(strength_sum, 2 * g.total_weight());
    if (n >= 1) {
        const auto prev = generate(ModelParams(d, n - 1));
        EXPECT_EQ(2 * (g.edge_count() - prev.edge_count()), 3 * (g.vertex_count() - prev.vertex_count()));
    }
}

INSTANTIATE_TEST_SUITE_P(DeltaLevels, CensusProperty,
                         ::testing::Combine(::testing::Values(1u, 2u, 3u, 4u), ::testing::Values(0u, 1u, 2u, 3u, 4u)));

TEST(Triangles, EnumerationMatchesBruteForce) {
    for (u64 d = 1; d <= 3; ++d)
        for (u64 n = 0; n <= 2; ++n) {
            const auto g = generate(ModelParams(d, n));
            EXPECT_EQ(census(g).triangles, brute_force_triangles(g));
            u64 per_vertex = 0;
            for (const auto t : triangles_per_vertex(g)) per_vertex += t;
            EXPECT_EQ(per_vertex, 3 * brute_force_triangles(g));
        }
}

TEST(Triangles, EachVisitedOnceInOrder) {
    const auto g = generate(ModelParams(2, 2));
    std::set<std::tuple<VertexId, VertexId, VertexId>> seen;
    for_each_triangle(g, [&](VertexId a, VertexId b, VertexId c) {
        EXPECT_LT(a, b);
        EXPECT_LT(b, c);
        EXPECT_TRUE(seen.insert({a, b, c}).second);
    });
    EXPECT_EQ(seen.size(), brute_force_triangles(g));
}

TEST(Generate, Deterministic) {
    const ModelParams p(2, 4);
    EXPECT_EQ(generate(p), generate(p));
}

TEST(Generate, VertexGuard) { EXPECT_THROW(generate(ModelParams(1, 3), 100), guard_error); }

TEST(ModelParams, Bounds) {
    EXPECT_THROW(ModelParams(0, 1), precondition_error);
    EXPECT_NO_THROW(ModelParams(1, 27));
    EXPECT_THROW(ModelParams(1, 28), precondition_error);
}

}  // namespace
