#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "corona/common.hpp"

namespace corona {

/// Weight-reinforcement factor and iteration count of the model.
///
/// Construction rejects delta = 0 and any pair for which (delta+4)^levels,
/// 2(delta+2)^levels or (delta+1)^levels would leave the 63-bit range, so
/// every per-class closed form evaluates without overflow.
class ModelParams {
  public:
    ModelParams(u64 delta, u64 levels) : delta_(delta), levels_(levels) {
        if (delta < 1) throw precondition_error("delta must be >= 1");
        if (levels > 63) throw precondition_error("levels out of range");
        constexpr u64 limit = u64{1} << 63;
        const auto fits = [&](u64 base, u64 factor) {
            u128 acc = factor;
            for (u64 i = 0; i < levels; ++i) {
                acc *= base;
                if (acc >= limit) return false;
            }
            return true;
        };
        if (!fits(delta + 4, 1) || !fits(delta + 2, 2) || !fits(delta + 1, 1))
            throw precondition_error("(delta, levels) exceeds the 63-bit parameter bound");
    }

    [[nodiscard]] u64 delta() const { return delta_; }
    [[nodiscard]] u64 levels() const { return levels_; }

    friend bool operator==(const ModelParams&, const ModelParams&) = default;

  private:
    u64 delta_;
    u64 levels_;
};

struct Edge {
    VertexId u;
    VertexId v;
    u64 w;

    friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct Neighbor {
    VertexId vertex;
    u64 weight;
};

/// Exact counts of a graph: N, E, triangles and total edge weight.
struct Census {
    u64 vertices = 0;
    u64 edges = 0;
    u64 triangles = 0;
    u64 total_weight = 0;

    friend bool operator==(const Census&, const Census&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const Census& c) {
    return os << "(N=" << c.vertices << ", E=" << c.edges << ", T=" << c.triangles
              << ", W=" << c.total_weight << ')';
}

/// Immutable, connected, integer-weighted simple graph.
///
/// Adjacency is stored as sorted per-vertex neighbor lists (CSR). Each vertex
/// carries the iteration at which it was born; the graph itself records the
/// iteration it stands at.
class WeightedGraph {
  public:
    WeightedGraph() : offsets_{0} {}

    /// Validating constructor for arbitrary input: normalizes u < v, rejects
    /// self-loops, parallel edges, zero weights and disconnected graphs.
    static WeightedGraph from_edges(std::size_t vertex_count, std::vector<Edge> edges,
                                    std::vector<std::uint32_t> birth = {},
                                    std::uint32_t level = 0) {
        if (vertex_count > std::numeric_limits<VertexId>::max())
            throw precondition_error("too many vertices");
        if (birth.empty()) birth.assign(vertex_count, 0);
        if (birth.size() != vertex_count)
            throw precondition_error("birth vector size does not match vertex count");
        for (auto& e : edges) {
            if (e.u == e.v) throw precondition_error("self-loop");
            if (e.w == 0) throw precondition_error("edge weight must be >= 1");
            if (e.u >= vertex_count || e.v >= vertex_count)
                throw precondition_error("edge endpoint out of range");
            if (e.u > e.v) std::swap(e.u, e.v);
        }
        std::sort(edges.begin(), edges.end());
        for (std::size_t i = 1; i < edges.size(); ++i)
            if (edges[i].u == edges[i - 1].u && edges[i].v == edges[i - 1].v)
                throw precondition_error("parallel edge");
        WeightedGraph g(trusted, vertex_count, std::move(edges), std::move(birth), level);
        if (!g.is_connected()) throw precondition_error("graph is not connected");
        return g;
    }

    [[nodiscard]] std::size_t vertex_count() const { return offsets_.size() - 1; }
    [[nodiscard]] std::size_t edge_count() const { return edges_.size(); }
    [[nodiscard]] std::span<const Edge> edges() const { return edges_; }
    [[nodiscard]] std::uint32_t level() const { return level_; }
    [[nodiscard]] std::uint32_t birth(VertexId v) const { return birth_[v]; }
    [[nodiscard]] std::span<const std::uint32_t> births() const { return birth_; }
    [[nodiscard]] u64 strength(VertexId v) const { return strength_[v]; }
    [[nodiscard]] std::size_t degree(VertexId v) const { return offsets_[v + 1] - offsets_[v]; }

    [[nodiscard]] std::span<const Neighbor> neighbors(VertexId v) const {
        return {adj_.data() + offsets_[v], adj_.data() + offsets_[v + 1]};
    }

    /// Weight of edge {u, v}, or 0 when absent.
    [[nodiscard]] u64 weight(VertexId u, VertexId v) const {
        const auto nb = neighbors(u);
        const auto it = std::lower_bound(nb.begin(), nb.end(), v,
                                         [](const Neighbor& n, VertexId x) { return n.vertex < x; });
        return (it != nb.end() && it->vertex == v) ? it->weight : 0;
    }

    [[nodiscard]] bool adjacent(VertexId u, VertexId v) const { return weight(u, v) != 0; }

    [[nodiscard]] u64 total_weight() const {
        u64 t = 0;
        for (const auto& e : edges_) t = checked_add(t, e.w);
        return t;
    }

    [[nodiscard]] bool all_strengths_even() const {
        return std::all_of(strength_.begin(), strength_.end(), [](u64 s) { return s % 2 == 0; });
    }

    [[nodiscard]] bool is_connected() const {
        const std::size_t n = vertex_count();
        if (n == 0) return true;
        std::vector<char> seen(n, 0);
        std::vector<VertexId> stack{0};
        seen[0] = 1;
        std::size_t reached = 1;
        while (!stack.empty()) {
            const VertexId x = stack.back();
            stack.pop_back();
            for (const auto& nb : neighbors(x)) {
                if (!seen[nb.vertex]) {
                    seen[nb.vertex] = 1;
                    ++reached;
                    stack.push_back(nb.vertex);
                }
            }
        }
        return reached == n;
    }

    friend bool operator==(const WeightedGraph& a, const WeightedGraph& b) {
        return a.level_ == b.level_ && a.birth_ == b.birth_ && a.edges_ == b.edges_;
    }

  private:
    struct trusted_tag {};
    static constexpr trusted_tag trusted{};

    // Edges must be sorted by (u, v) with u < v and free of duplicates.
    WeightedGraph(trusted_tag, std::size_t vertex_count, std::vector<Edge> edges,
                  std::vector<std::uint32_t> birth, std::uint32_t level)
        : edges_(std::move(edges)), birth_(std::move(birth)), level_(level) {
        offsets_.assign(vertex_count + 1, 0);
        for (const auto& e : edges_) {
            ++offsets_[e.u + 1];
            ++offsets_[e.v + 1];
        }
        for (std::size_t i = 0; i < vertex_count; ++i) offsets_[i + 1] += offsets_[i];
        adj_.resize(offsets_.back());
        strength_.assign(vertex_count, 0);
        std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
        // Sorted edge order yields sorted neighbor lists: a vertex x first sees
        // edges (u, x) with u < x in increasing u, then (x, v) in increasing v.
        for (const auto& e : edges_) {
            adj_[cursor[e.u]++] = {e.v, e.w};
            adj_[cursor[e.v]++] = {e.u, e.w};
            strength_[e.u] = checked_add(strength_[e.u], e.w);
            strength_[e.v] = checked_add(strength_[e.v], e.w);
        }
    }

    void scale_old_edges(u64 factor) {
        const auto old = [&](VertexId x) { return birth_[x] < level_; };
        for (auto& e : edges_)
            if (old(e.u) && old(e.v)) e.w = checked_mul(e.w, factor);
        std::fill(strength_.begin(), strength_.end(), 0);
        for (std::size_t x = 0; x < vertex_count(); ++x) {
            for (std::size_t k = offsets_[x]; k < offsets_[x + 1]; ++k) {
                auto& nb = adj_[k];
                if (old(static_cast<VertexId>(x)) && old(nb.vertex)) nb.weight = checked_mul(nb.weight, factor);
                strength_[x] = checked_add(strength_[x], nb.weight);
            }
        }
    }

    friend WeightedGraph extended_corona(const WeightedGraph&, const WeightedGraph&);
    friend WeightedGraph reinforce_weights(WeightedGraph, u64);

    std::vector<Edge> edges_;
    std::vector<std::size_t> offsets_;
    std::vector<Neighbor> adj_;
    std::vector<u64> strength_;
    std::vector<std::uint32_t> birth_;
    std::uint32_t level_ = 0;
};

/// W_0: a triangle with unit weights.
inline WeightedGraph seed_triangle() {
    return WeightedGraph::from_edges(3, {{0, 1, 1}, {0, 2, 1}, {1, 2, 1}});
}

inline WeightedGraph complete_graph_k2() { return WeightedGraph::from_edges(2, {{0, 1, 1}}); }

/// For every vertex i of g1 with strength s_i, attaches s_i/2 disjoint copies
/// of g2, each copy vertex joined to i by a unit-weight edge.
///
/// New vertices are numbered after g1's, grouped by host id, then copy index,
/// then g2's own vertex order. They carry birth g1.level() + 1, which is also
/// the level of the result. g2 may carry arbitrary positive weights.
inline WeightedGraph extended_corona(const WeightedGraph& g1, const WeightedGraph& g2) {
    const std::size_t m = g2.vertex_count();
    if (m == 0) throw precondition_error("extended_corona: g2 must be non-empty");
    if (!g1.all_strengths_even())
        throw precondition_error("extended_corona: every strength of g1 must be even");

    const std::size_t n1 = g1.vertex_count();
    std::vector<u64> first_new(n1 + 1);
    first_new[0] = n1;
    for (std::size_t i = 0; i < n1; ++i)
        first_new[i + 1] = checked_add(first_new[i], checked_mul(g1.strength(static_cast<VertexId>(i)) / 2, m));
    const u64 total = first_new[n1];
    if (total > std::numeric_limits<VertexId>::max())
        throw guard_error("extended_corona: result exceeds vertex id range");
    const u64 copies = (total - n1) / m;

    std::vector<Edge> edges;
    edges.reserve(g1.edge_count() + (total - n1) + copies * g2.edge_count());
    for (std::size_t i = 0; i < n1; ++i) {
        const auto u = static_cast<VertexId>(i);
        for (const auto& nb : g1.neighbors(u))
            if (nb.vertex > u) edges.push_back({u, nb.vertex, nb.weight});
        for (u64 x = first_new[i]; x < first_new[i + 1]; ++x)
            edges.push_back({u, static_cast<VertexId>(x), 1});
    }
    for (u64 c = 0; c < copies; ++c) {
        const u64 base = n1 + c * m;
        for (const auto& e : g2.edges())
            edges.push_back({static_cast<VertexId>(base + e.u), static_cast<VertexId>(base + e.v), e.w});
    }

    std::vector<std::uint32_t> birth(g1.births().begin(), g1.births().end());
    birth.resize(total, g1.level() + 1);
    return WeightedGraph(WeightedGraph::trusted, total, std::move(edges), std::move(birth), g1.level() + 1);
}

/// Multiplies by (1 + delta) the weight of every edge whose endpoints were
/// both born before g.level(); edges touching newborn vertices are untouched.
inline WeightedGraph reinforce_weights(WeightedGraph g, u64 delta) {
    if (delta < 1) throw precondition_error("delta must be >= 1");
    g.scale_old_edges(checked_add(delta, 1));
    return g;
}

/// One model iteration: W_n from W_{n-1}. Copy counts use the strengths of
/// W_{n-1}, i.e. the corona step runs before reinforcement.
inline WeightedGraph evolve(const WeightedGraph& g, u64 delta) {
    return reinforce_weights(extended_corona(g, complete_graph_k2()), delta);
}

/// Exact closed-form census: N_n, E_n, triangle count and W_n.
inline Census expected_census(const ModelParams& p) {
    const u128 d = p.delta();
    const u128 x = checked_pow(p.delta() + 4, p.levels());
    return {
        exact_div(6 * x + 3 * d + 3, d + 3, "vertex count"),
        exact_div(9 * x + 3 * d, d + 3, "edge count"),
        exact_div(3 * x + d, d + 3, "triangle count"),
        narrow(3 * x),
    };
}

inline constexpr u64 default_vertex_guard = 64'000'000;

/// W_n built by params.levels() applications of evolve() to the seed
/// triangle. Refuses graphs above `max_vertices` vertices.
inline WeightedGraph generate(const ModelParams& p, u64 max_vertices = default_vertex_guard) {
    if (expected_census(p).vertices > max_vertices)
        throw guard_error("generate: W_n has more than " + std::to_string(max_vertices) + " vertices");
    WeightedGraph g = seed_triangle();
    for (u64 i = 0; i < p.levels(); ++i) g = evolve(g, p.delta());
    return g;
}

/// Calls f(a, b, c) once per triangle with a < b < c.
template <typename F>
void for_each_triangle(const WeightedGraph& g, F&& f) {
    const auto by_vertex = [](const Neighbor& n, VertexId x) { return n.vertex < x; };
    for (std::size_t ui = 0; ui < g.vertex_count(); ++ui) {
        const auto u = static_cast<VertexId>(ui);
        const auto nu = g.neighbors(u);
        for (auto it = std::upper_bound(nu.begin(), nu.end(), u,
                                        [](VertexId x, const Neighbor& n) { return x < n.vertex; });
             it != nu.end(); ++it) {
            const VertexId v = it->vertex;
            const auto nv = g.neighbors(v);
            const bool u_small = nu.size() <= nv.size();
            const auto small = u_small ? nu : nv;
            const auto large = u_small ? nv : nu;
            for (auto s = std::upper_bound(small.begin(), small.end(), v,
                                           [](VertexId x, const Neighbor& n) { return x < n.vertex; });
                 s != small.end(); ++s) {
                const auto l = std::lower_bound(large.begin(), large.end(), s->vertex, by_vertex);
                if (l != large.end() && l->vertex == s->vertex) f(u, v, s->vertex);
            }
        }
    }
}

/// Number of triangles through each vertex.
inline std::vector<u64> triangles_per_vertex(const WeightedGraph& g) {
    std::vector<u64> t(g.vertex_count(), 0);
    for_each_triangle(g, [&](VertexId a, VertexId b, VertexId c) {
        ++t[a];
        ++t[b];
        ++t[c];
    });
    return t;
}

inline Census census(const WeightedGraph& g) {
    u64 triangles = 0;
    for_each_triangle(g, [&](VertexId, VertexId, VertexId) { ++triangles; });
    return {g.vertex_count(), g.edge_count(), triangles, g.total_weight()};
}

}  // namespace corona
