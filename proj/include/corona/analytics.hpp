#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <thread>
#include <vector>

#include "corona/common.hpp"
#include "corona/graph.hpp"

namespace corona {

namespace detail {

inline void require_birth_range(u64 n, u64 n_i) {
    if (n_i > n) throw precondition_error("birth iteration must not exceed the level");
}

inline double dpow(double base, double exp) { return std::pow(base, exp); }

}  // namespace detail

// ---------------------------------------------------------------------------
// Per-birth-class closed forms
// ---------------------------------------------------------------------------

/// Number of vertices born at iteration n_i (3 for the seed triangle).
inline u64 vertex_class_size(u64 delta, u64 n_i) {
    return n_i == 0 ? 3 : checked_mul(6, checked_pow(delta + 4, n_i - 1));
}

/// Number of edges born at iteration n_i.
inline u64 edge_class_size(u64 delta, u64 n_i) {
    return n_i == 0 ? 3 : checked_mul(9, checked_pow(delta + 4, n_i - 1));
}

/// Strength at level n of a vertex born at n_i: 2(delta+2)^(n-n_i).
inline u64 closed_strength(u64 delta, u64 n, u64 n_i) {
    detail::require_birth_range(n, n_i);
    return checked_mul(2, checked_pow(delta + 2, n - n_i));
}

/// Degree at level n of a vertex born at n_i: (2(delta+2)^(n-n_i) + 2 delta)/(delta+1).
inline u64 closed_degree(u64 delta, u64 n, u64 n_i) {
    const u128 s = closed_strength(delta, n, n_i);
    return exact_div(s + 2 * static_cast<u128>(delta), delta + 1, "closed_degree");
}

/// Weight at level n of an edge born at n_i: (1+delta)^(n-n_i).
inline u64 closed_edge_weight(u64 delta, u64 n, u64 n_i) {
    detail::require_birth_range(n, n_i);
    return checked_pow(delta + 1, n - n_i);
}

struct DegreeClassRow {
    u64 birth;
    u64 size;
    u64 strength;
    u64 degree;
    u64 edge_weight;
    u64 edge_count;

    friend bool operator==(const DegreeClassRow&, const DegreeClassRow&) = default;
};

/// One row per birth class 0..n, in birth order.
inline std::vector<DegreeClassRow> degree_class_table(const ModelParams& p) {
    const u64 d = p.delta();
    const u64 n = p.levels();
    std::vector<DegreeClassRow> rows;
    rows.reserve(n + 1);
    for (u64 b = 0; b <= n; ++b)
        rows.push_back({b, vertex_class_size(d, b), closed_strength(d, n, b), closed_degree(d, n, b),
                        closed_edge_weight(d, n, b), edge_class_size(d, b)});
    return rows;
}

/// Birth class of the vertices with degree k in W_n, if any.
inline std::optional<u64> birth_for_degree(u64 delta, u64 n, u64 k) {
    for (u64 b = 0; b <= n; ++b)
        if (closed_degree(delta, n, b) == k) return b;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Distributions
// ---------------------------------------------------------------------------

struct DistributionRow {
    u64 value;
    u64 count;
    Fraction p_cum;  // fraction of elements with value >= this value

    friend bool operator==(const DistributionRow&, const DistributionRow&) = default;
};

using DistributionTable = std::vector<DistributionRow>;

struct Distributions {
    DistributionTable strength;
    DistributionTable degree;
    DistributionTable weight;
};

namespace detail {

inline DistributionTable cumulative(const std::map<u64, u64>& counts) {
    u64 total = 0;
    for (const auto& [value, count] : counts) total = checked_add(total, count);
    DistributionTable table;
    u64 at_least = total;
    for (const auto& [value, count] : counts) {
        table.push_back({value, count, Fraction(at_least, total)});
        at_least -= count;
    }
    return table;
}

}  // namespace detail

/// Exact cumulative strength, degree and edge-weight distributions of W_n,
/// ascending by value. Strength and degree normalize by N_n, weight by E_n.
inline Distributions cumulative_distributions(const ModelParams& p) {
    std::map<u64, u64> s, k, w;
    for (const auto& row : degree_class_table(p)) {
        s[row.strength] = checked_add(s[row.strength], row.size);
        k[row.degree] = checked_add(k[row.degree], row.size);
        w[row.edge_weight] = checked_add(w[row.edge_weight], row.edge_count);
    }
    return {detail::cumulative(s), detail::cumulative(k), detail::cumulative(w)};
}

/// The same three tables measured directly on a graph.
inline Distributions measured_distributions(const WeightedGraph& g) {
    std::map<u64, u64> s, k, w;
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
        ++s[g.strength(static_cast<VertexId>(v))];
        ++k[g.degree(static_cast<VertexId>(v))];
    }
    for (const auto& e : g.edges()) ++w[e.w];
    return {detail::cumulative(s), detail::cumulative(k), detail::cumulative(w)};
}

struct Exponents {
    double strength;
    double degree;
    double weight;
};

/// Power-law exponents gamma_s = gamma_k = 1 + ln(d+4)/ln(d+2) and
/// gamma_w = 1 + ln(d+4)/ln(d+1).
inline Exponents distribution_exponents(u64 delta) {
    if (delta < 1) throw precondition_error("delta must be >= 1");
    const double d = static_cast<double>(delta);
    const double gs = 1.0 + std::log(d + 4) / std::log(d + 2);
    return {gs, gs, 1.0 + std::log(d + 4) / std::log(d + 1)};
}

// ---------------------------------------------------------------------------
// Clustering
// ---------------------------------------------------------------------------

struct VertexTriangles {
    u64 triangles = 0;
    // Sum over ordered neighbor pairs (j, h) with j ~ h of (w_vj + w_vh).
    u64 ordered_weight_sum = 0;
};

inline VertexTriangles vertex_triangles(const WeightedGraph& g, VertexId v) {
    const auto nv = g.neighbors(v);
    const auto by_vertex = [](const Neighbor& n, VertexId x) { return n.vertex < x; };
    VertexTriangles out;
    u64 ordered_pairs = 0;
    for (const auto& j : nv) {
        const auto nj = g.neighbors(j.vertex);
        const bool j_small = nj.size() <= nv.size();
        const auto small = j_small ? nj : nv;
        const auto large = j_small ? nv : nj;
        for (const auto& h : small) {
            const auto it = std::lower_bound(large.begin(), large.end(), h.vertex, by_vertex);
            if (it == large.end() || it->vertex != h.vertex) continue;
            // h is a common neighbor of v and j; its weight to v is on whichever
            // side came from nv.
            const u64 w_vh = j_small ? it->weight : h.weight;
            ++ordered_pairs;
            out.ordered_weight_sum = checked_add(out.ordered_weight_sum, checked_add(j.weight, w_vh));
        }
    }
    out.triangles = ordered_pairs / 2;
    return out;
}

/// 2 t_v / (k_v (k_v - 1)).
inline Fraction local_clustering(const WeightedGraph& g, VertexId v) {
    const u64 k = g.degree(v);
    if (k < 2) throw domain_error("local clustering undefined for degree < 2");
    return Fraction(2 * vertex_triangles(g, v).triangles, checked_mul(k, k - 1));
}

/// Weighted clustering (1/(s_v(k_v-1))) sum_{j,h} (w_vj+w_vh)/2 a_vj a_vh a_jh,
/// with the sum over ordered neighbor pairs.
inline Fraction weighted_local_clustering(const WeightedGraph& g, VertexId v) {
    const u64 k = g.degree(v);
    if (k < 2) throw domain_error("weighted clustering undefined for degree < 2");
    return Fraction(vertex_triangles(g, v).ordered_weight_sum,
                    checked_mul(2, checked_mul(g.strength(v), k - 1)));
}

/// Average clustering of W_n: the class-size weighted mean of 1/(k-1).
///
/// Class i >= 1 holds 6(delta+4)^(i-1) vertices. The seed class contributes
/// 3/(k-1) with k its degree.
inline double global_clustering_closed(u64 delta, u64 n) {
    const double d = static_cast<double>(delta);
    long double sum = 3.0L * (d + 1) / (2 * detail::dpow(d + 2, static_cast<double>(n)) + d - 1);
    for (u64 i = 1; i <= n; ++i)
        sum += 6.0L * detail::dpow(d + 4, static_cast<double>(i - 1)) * (d + 1) /
               (2 * detail::dpow(d + 2, static_cast<double>(n - i)) + d - 1);
    const long double nn = (6.0L * detail::dpow(d + 4, static_cast<double>(n)) + 3 * d + 3) / (d + 3);
    return static_cast<double>(sum / nn);
}

/// Mean local clustering over all vertices; degree < 2 contributes 0.
inline double global_clustering_empirical(const WeightedGraph& g) {
    if (g.vertex_count() == 0) return 0.0;
    const auto t = triangles_per_vertex(g);
    long double sum = 0;
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
        const auto k = static_cast<long double>(g.degree(static_cast<VertexId>(v)));
        if (k >= 2) sum += 2.0L * static_cast<long double>(t[v]) / (k * (k - 1));
    }
    return static_cast<double>(sum / static_cast<long double>(g.vertex_count()));
}

// ---------------------------------------------------------------------------
// Degree correlations
// ---------------------------------------------------------------------------

namespace detail {

inline void require_correlation_domain(u64 n, u64 n_i) {
    if (n_i == 0 || n_i > n)
        throw domain_error("correlation closed forms require 1 <= n_i <= n");
}

}  // namespace detail

/// Average nearest-neighbor degree of the vertices born at n_i in W_n.
inline double knn_closed(u64 delta, u64 n, u64 n_i) {
    detail::require_correlation_domain(n, n_i);
    using detail::dpow;
    const double d = static_cast<double>(delta);
    const double gap = static_cast<double>(n) - static_cast<double>(n_i);
    const double num = (d + 1) * dpow(d + 2, static_cast<double>(n + n_i)) * dpow(d + 4, 1.0 - static_cast<double>(n_i)) -
                       2 * dpow(d + 2, 1 + gap) + d * d * (d + 3);
    const double den = d * (d + 3) * (dpow(d + 2, gap) + d);
    return num / den + (d - 1) / (d + 1) + 2 * (2 + d + gap) / (2 + d + d * dpow(2 + d, 1 - gap));
}

/// Weighted average nearest-neighbor degree of the vertices born at n_i in W_n.
inline double knnw_closed(u64 delta, u64 n, u64 n_i) {
    detail::require_correlation_domain(n, n_i);
    using detail::dpow;
    const double d = static_cast<double>(delta);
    const double gap = static_cast<double>(n) - static_cast<double>(n_i);
    const double q = dpow(d + 1, gap - 1);
    return 2 * (q + d * d + d - 1) / (d * (d + 2)) - 2 * (d + 2) * q / (d * (d + 3)) + q +
           dpow(d + 1, gap) * dpow(d + 2, 2.0 * static_cast<double>(n_i)) *
               dpow(d + 4, 1.0 - static_cast<double>(n_i)) / (d * (d + 3));
}

/// knn_closed addressed by degree; k must be the degree of a class n_i >= 1.
inline double knn_of_degree(u64 delta, u64 n, u64 k) {
    const auto b = birth_for_degree(delta, n, k);
    if (!b) throw domain_error("no vertex class of W_n has this degree");
    return knn_closed(delta, n, *b);
}

inline double knnw_of_degree(u64 delta, u64 n, u64 k) {
    const auto b = birth_for_degree(delta, n, k);
    if (!b) throw domain_error("no vertex class of W_n has this degree");
    return knnw_closed(delta, n, *b);
}

/// The k-parameterized rearrangement of knn_closed, evaluated literally.
/// Kept only for reporting; knn_closed is canonical.
inline double knn_k_form(u64 delta, u64 n, double k) {
    using detail::dpow;
    const double d = static_cast<double>(delta);
    const double nn = static_cast<double>(n);
    const double e = std::log(d + 4) / std::log(d + 2);
    const double t1 = ((d + 1) * dpow(d + 2, 2 * nn) * dpow(d + 4, 1 - nn) * dpow(((d + 1) * k - 2 * d) / 2, e - 1) -
                       (d + 2) * ((d + 1) * k - 2 * d)) /
                      (d * (d + 3) * (d + 1) * k / 2);
    const double t4 = 2 * (d * (k - 2) + k) * (std::log((d * (k - 2) + k) / 2) / std::log(d + 2) + d + 2) /
                      ((d + 1) * (d + 2) * k);
    return t1 + 2 * d / ((d + 1) * k) + (d - 1) / (d + 1) + t4;
}

/// The k-parameterized rearrangement of knnw_closed, evaluated literally.
/// It does not reproduce knnw_closed (its last term carries k rather than the
/// class variable); reported, never asserted.
inline double knnw_k_form(u64 delta, u64 n, double k) {
    using detail::dpow;
    const double d = static_cast<double>(delta);
    const double nn = static_cast<double>(n);
    const double x = dpow(k * (d + 1) / 2 - d, std::log(d + 1) / std::log(d + 2));
    return x / (d + 1) + 2 * (x / (d + 1) + d * d + d - 1) / (d * (d + 2)) -
           2 * (d + 2) * x / (d * (d + 3) * (d + 1)) +
           dpow(d + 2, 2 * nn) * dpow(k, std::log((d + 4) * (d + 1)) / std::log(d + 2) - 2) /
               (d * (d + 3) * dpow(d + 4, nn - 1));
}

struct CorrelationRow {
    u64 degree = 0;
    u64 size = 0;
    std::optional<u64> birth;  // set when every member shares one birth class
    std::optional<double> knn_closed;
    double knn_empirical = 0;
    std::optional<double> knnw_closed;
    double knnw_empirical = 0;
    bool flagged = false;  // seed class, or no single birth class
};

/// Per degree class of g, empirical k_nn(k) and k^w_nn(k) alongside the
/// closed forms at level g.level(). Rows ascend by degree.
inline std::vector<CorrelationRow> correlation_report(const WeightedGraph& g, u64 delta) {
    struct Acc {
        u64 size = 0;
        long double knn = 0;
        long double knnw = 0;
        std::optional<std::uint32_t> birth;
        bool mixed = false;
    };
    std::map<u64, Acc> classes;
    for (std::size_t vi = 0; vi < g.vertex_count(); ++vi) {
        const auto v = static_cast<VertexId>(vi);
        const auto nb = g.neighbors(v);
        if (nb.empty()) continue;
        long double plain = 0;
        long double weighted = 0;
        for (const auto& x : nb) {
            const auto kx = static_cast<long double>(g.degree(x.vertex));
            plain += kx;
            weighted += static_cast<long double>(x.weight) * kx;
        }
        auto& acc = classes[nb.size()];
        ++acc.size;
        acc.knn += plain / static_cast<long double>(nb.size());
        acc.knnw += weighted / static_cast<long double>(g.strength(v));
        if (!acc.birth) acc.birth = g.birth(v);
        else if (*acc.birth != g.birth(v)) acc.mixed = true;
    }
    std::vector<CorrelationRow> rows;
    for (const auto& [k, acc] : classes) {
        CorrelationRow row;
        row.degree = k;
        row.size = acc.size;
        row.knn_empirical = static_cast<double>(acc.knn / static_cast<long double>(acc.size));
        row.knnw_empirical = static_cast<double>(acc.knnw / static_cast<long double>(acc.size));
        if (!acc.mixed) row.birth = *acc.birth;
        row.flagged = acc.mixed || *acc.birth == 0;
        if (!row.flagged && *acc.birth <= g.level()) {
            row.knn_closed = knn_closed(delta, g.level(), *acc.birth);
            row.knnw_closed = knnw_closed(delta, g.level(), *acc.birth);
        }
        rows.push_back(row);
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Diameter
// ---------------------------------------------------------------------------

/// Longest shortest hop distance, by breadth-first search from every vertex.
/// Sources are split across `threads` workers; the result does not depend on it.
inline u64 diameter(const WeightedGraph& g, unsigned threads = 1) {
    const std::size_t n = g.vertex_count();
    if (n == 0) return 0;
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
    std::vector<u64> best(threads, 0);
    const auto work = [&](unsigned t) {
        std::vector<std::uint32_t> dist(n);
        std::vector<VertexId> queue(n);
        for (std::size_t s = t; s < n; s += threads) {
            std::fill(dist.begin(), dist.end(), std::numeric_limits<std::uint32_t>::max());
            std::size_t head = 0, tail = 0;
            queue[tail++] = static_cast<VertexId>(s);
            dist[s] = 0;
            while (head < tail) {
                const VertexId x = queue[head++];
                for (const auto& nb : g.neighbors(x)) {
                    if (dist[nb.vertex] == std::numeric_limits<std::uint32_t>::max()) {
                        dist[nb.vertex] = dist[x] + 1;
                        queue[tail++] = nb.vertex;
                    }
                }
            }
            if (tail != n) throw precondition_error("diameter: graph is not connected");
            best[t] = std::max<u64>(best[t], dist[queue[tail - 1]]);
        }
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(threads);
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back([&, t] {
                try {
                    work(t);
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        for (auto& th : pool) th.join();
        for (const auto& e : errors)
            if (e) std::rethrow_exception(e);
    }
    return *std::max_element(best.begin(), best.end());
}

/// 1 for the seed triangle, 2n+1 afterwards.
inline u64 diameter_closed(u64 n) { return 2 * n + 1; }

}  // namespace corona
