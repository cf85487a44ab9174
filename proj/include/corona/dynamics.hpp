#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <random>
#include <thread>
#include <vector>

#include "corona/analytics.hpp"
#include "corona/common.hpp"
#include "corona/graph.hpp"
#include "corona/linalg.hpp"
#include "corona/spectra.hpp"

namespace corona {

// ---------------------------------------------------------------------------
// Stationary distribution
// ---------------------------------------------------------------------------

/// pi_i = s_i / sum_j s_j.
inline std::vector<double> stationary_distribution(const WeightedGraph& g) {
    const auto total = static_cast<double>(checked_mul(2, g.total_weight()));
    std::vector<double> pi(g.vertex_count());
    for (std::size_t v = 0; v < pi.size(); ++v) pi[v] = static_cast<double>(g.strength(static_cast<VertexId>(v))) / total;
    return pi;
}

/// Exact form of the stationary weight of v.
inline Fraction stationary_weight(const WeightedGraph& g, VertexId v) {
    return Fraction(g.strength(v), checked_mul(2, g.total_weight()));
}

// ---------------------------------------------------------------------------
// Mean hitting time
// ---------------------------------------------------------------------------

/// H_n = [4d(d+1)^(n+1) + 24(d+4)^n(d+1)^(n+1) - 12(d+2)(d+4)^n] / [3d(d+4)(d+1)^n],
/// evaluated after cancelling (d+1)^n so no power of (d+1) is formed.
inline double hitting_time_closed(u64 delta, u64 n) {
    const long double d = static_cast<long double>(delta);
    const long double x = std::pow(d + 4, static_cast<long double>(n));
    const long double ratio = std::pow((d + 4) / (d + 1), static_cast<long double>(n));
    const long double num = 4 * d * (d + 1) + 24 * x * (d + 1) - 12 * (d + 2) * ratio;
    return static_cast<double>(num / (3 * d * (d + 4)));
}

/// H_n = ((d+4)/(d+1)) H_{n-1} + 8(d+4)^(n-1) - 4/(d+4), H_0 = 4/3.
inline double hitting_time_recursive(u64 delta, u64 n) {
    const long double d = static_cast<long double>(delta);
    long double h = 4.0L / 3.0L;
    long double x = 1;  // (d+4)^(i-1)
    for (u64 i = 1; i <= n; ++i) {
        h = (d + 4) / (d + 1) * h + 8 * x - 4 / (d + 4);
        x *= d + 4;
    }
    return static_cast<double>(h);
}

/// Sum of multiplicity / sigma over the nonzero Laplacian eigenvalues.
inline double hitting_time_spectral(const Spectrum& lap) {
    if (lap.kind != SpectrumKind::laplacian) throw precondition_error("hitting_time_spectral expects a Laplacian spectrum");
    u64 zero = 0;
    long double h = 0;
    for (const auto& e : lap.entries) {
        if (std::abs(e.value) <= 1e-9) {
            zero += e.multiplicity;
            continue;
        }
        h += static_cast<long double>(e.multiplicity) / e.value;
    }
    if (zero != 1) throw precondition_error("hitting_time_spectral: zero eigenvalue must have multiplicity 1");
    return static_cast<double>(h);
}

inline constexpr std::size_t solve_vertex_guard = 500;

/// sum_j pi_j h(i -> j) from direct absorbing-chain solves, one per target j.
///
/// Each solve yields h(i -> j) for every start i; the value is computed for
/// three starts (first, middle, last vertex) and they must agree to relative
/// 1e-6 or numeric_error is thrown.
inline double hitting_time_linear_solve(const WeightedGraph& g) {
    const std::size_t n = g.vertex_count();
    if (n > solve_vertex_guard) throw guard_error("linear-solve guard: N > 500");
    if (n < 2) return 0.0;
    const auto pi = stationary_distribution(g);
    const std::array<std::size_t, 3> starts{0, n / 2, n - 1};
    std::array<long double, 3> acc{};
    std::vector<double> ones(n - 1, 1.0);
    for (std::size_t j = 0; j < n; ++j) {
        // Unknowns: h_i for i != j, indexed with j removed.
        const auto idx = [j](std::size_t i) { return i < j ? i : i - 1; };
        Matrix a = Matrix::square(n - 1);
        for (std::size_t i = 0; i < n; ++i) {
            if (i == j) continue;
            const auto vi = static_cast<VertexId>(i);
            a(idx(i), idx(i)) = 1.0;
            const double s = static_cast<double>(g.strength(vi));
            for (const auto& nb : g.neighbors(vi))
                if (nb.vertex != j) a(idx(i), idx(nb.vertex)) -= static_cast<double>(nb.weight) / s;
        }
        const auto h = LuDecomposition(std::move(a)).solve(ones);
        for (std::size_t k = 0; k < starts.size(); ++k)
            if (starts[k] != j) acc[k] += pi[j] * h[idx(starts[k])];
    }
    for (std::size_t k = 1; k < acc.size(); ++k)
        if (std::abs(acc[k] - acc[0]) > 1e-6 * std::abs(acc[0]))
            throw numeric_error("linear solve: mean hitting time depends on the start vertex");
    return static_cast<double>(acc[0]);
}

// ---------------------------------------------------------------------------
// Monte Carlo
// ---------------------------------------------------------------------------

struct MonteCarloResult {
    double mean;
    double std_error;
    u64 samples;
};

namespace detail {

inline u64 splitmix64(u64 x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Uniform integer in [0, bound) by rejection; consumes whole 64-bit draws
/// so the sequence is fixed by the engine alone.
inline u64 uniform_below(std::mt19937_64& rng, u64 bound) {
    const u64 threshold = (0 - bound) % bound;
    for (;;) {
        const u64 r = rng();
        if (r >= threshold) return r % bound;
    }
}

}  // namespace detail

/// Number of independent sample streams. Fixed, so results do not depend on
/// the worker count.
inline constexpr u64 monte_carlo_streams = 64;

/// Seed of stream b: splitmix64(seed + b * 0x9E3779B97F4A7C15), fed to mt19937_64.
inline u64 monte_carlo_stream_seed(u64 seed, u64 stream) {
    return detail::splitmix64(seed + stream * 0x9E3779B97F4A7C15ULL);
}

/// Stationary-average hitting time from `start` estimated by simulation.
///
/// Each sample draws a target j from pi (j == start counts 0 steps) and walks
/// from start, stepping to neighbor x with probability w/s, until j is hit.
/// Samples are split over monte_carlo_streams streams (the first
/// samples % streams streams take one extra); sums are exact integers
/// combined in stream order, so output is identical for any `threads`.
inline MonteCarloResult hitting_time_monte_carlo(const WeightedGraph& g, VertexId start, u64 samples, u64 seed,
                                                 unsigned threads = 1) {
    const std::size_t n = g.vertex_count();
    if (samples < 1) throw precondition_error("monte carlo: samples must be >= 1");
    if (start >= n) throw precondition_error("monte carlo: start vertex out of range");

    std::vector<u64> strength_prefix(n + 1, 0);
    for (std::size_t v = 0; v < n; ++v)
        strength_prefix[v + 1] = checked_add(strength_prefix[v], g.strength(static_cast<VertexId>(v)));
    std::vector<std::vector<u64>> weight_prefix(n);
    for (std::size_t v = 0; v < n; ++v) {
        u64 acc = 0;
        for (const auto& nb : g.neighbors(static_cast<VertexId>(v))) weight_prefix[v].push_back(acc += nb.weight);
    }
    // Index of the first prefix entry strictly greater than r.
    const auto pick = [](const std::vector<u64>& prefix, u64 r) {
        return static_cast<std::size_t>(std::upper_bound(prefix.begin(), prefix.end(), r) - prefix.begin());
    };

    struct StreamSums {
        u64 sum = 0;
        u128 sum_sq = 0;
    };
    std::vector<StreamSums> sums(monte_carlo_streams);
    const auto run_stream = [&](u64 b) {
        const u64 count = samples / monte_carlo_streams + (b < samples % monte_carlo_streams ? 1 : 0);
        std::mt19937_64 rng(monte_carlo_stream_seed(seed, b));
        StreamSums s;
        for (u64 i = 0; i < count; ++i) {
            const auto target = static_cast<VertexId>(
                pick(strength_prefix, detail::uniform_below(rng, strength_prefix.back())) - 1);
            u64 steps = 0;
            VertexId at = start;
            while (at != target) {
                const auto& prefix = weight_prefix[at];
                at = g.neighbors(at)[pick(prefix, detail::uniform_below(rng, prefix.back()))].vertex;
                ++steps;
            }
            s.sum = checked_add(s.sum, steps);
            s.sum_sq += static_cast<u128>(steps) * steps;
        }
        sums[b] = s;
    };

    threads = std::max(1u, std::min<unsigned>(threads, monte_carlo_streams));
    if (threads == 1) {
        for (u64 b = 0; b < monte_carlo_streams; ++b) run_stream(b);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back([&, t] {
                for (u64 b = t; b < monte_carlo_streams; b += threads) run_stream(b);
            });
        for (auto& th : pool) th.join();
    }

    u128 sum = 0, sum_sq = 0;
    for (const auto& s : sums) {
        sum += s.sum;
        sum_sq += s.sum_sq;
    }
    const auto m = static_cast<long double>(samples);
    const long double mean = static_cast<long double>(sum) / m;
    long double var = 0;
    if (samples > 1) var = (static_cast<long double>(sum_sq) - m * mean * mean) / (m - 1);
    return {static_cast<double>(mean), static_cast<double>(std::sqrt(std::max(0.0L, var) / m)), samples};
}

struct HittingReport {
    double closed_form = 0;
    double recursive = 0;
    double spectral = 0;
    std::optional<double> linear_solve;
    std::optional<MonteCarloResult> monte_carlo;
};

struct MonteCarloOptions {
    VertexId start = 0;
    u64 samples = 100'000;
    u64 seed = 42;
    unsigned threads = 1;
};

/// Hitting time of W_n by every applicable route. The graph is built only
/// when the linear solve or Monte Carlo is requested.
inline HittingReport hitting_report(const ModelParams& p, bool with_solve,
                                    const std::optional<MonteCarloOptions>& mc = std::nullopt) {
    HittingReport r;
    r.closed_form = hitting_time_closed(p.delta(), p.levels());
    r.recursive = hitting_time_recursive(p.delta(), p.levels());
    r.spectral = hitting_time_spectral(laplacian_spectrum(p));
    if (with_solve || mc) {
        const WeightedGraph g = generate(p);
        if (with_solve) r.linear_solve = hitting_time_linear_solve(g);
        if (mc) r.monte_carlo = hitting_time_monte_carlo(g, mc->start, mc->samples, mc->seed, mc->threads);
    }
    return r;
}

// ---------------------------------------------------------------------------
// Weighted spanning trees
// ---------------------------------------------------------------------------

/// tau = 3^a (d+1)^b, with ln tau always and the exact value when small.
struct TreeCount {
    u64 a = 0;
    u64 b = 0;
    double log_value = 0;
    std::optional<BigInt> exact;
};

inline constexpr u64 exact_tree_exponent_limit = 10'000;

namespace detail {

inline TreeCount make_tree_count(u64 delta, u64 a, u64 b) {
    TreeCount t;
    t.a = a;
    t.b = b;
    t.log_value = static_cast<double>(static_cast<long double>(a) * std::log(3.0L) +
                                      static_cast<long double>(b) * std::log(static_cast<long double>(delta + 1)));
    if (a <= exact_tree_exponent_limit && b <= exact_tree_exponent_limit) {
        t.exact = boost::multiprecision::pow(BigInt(3), static_cast<unsigned>(a)) *
                  boost::multiprecision::pow(BigInt(delta + 1), static_cast<unsigned>(b));
    }
    return t;
}

}  // namespace detail

/// a = (3(d+4)^n + d)/(d+3), b = 2(3((d+4)^n - 1) + d(d+3)n)/(d+3)^2.
inline TreeCount tree_count_closed(const ModelParams& p) {
    const u128 d = p.delta();
    const u128 x = checked_pow(p.delta() + 4, p.levels());
    const u64 a = exact_div(3 * x + d, d + 3, "tree exponent a");
    const u128 inner = 3 * (x - 1) + checked_mul(d * (d + 3), static_cast<u128>(p.levels()));
    const u64 b = exact_div(checked_mul(2, inner), (d + 3) * (d + 3), "tree exponent b");
    return detail::make_tree_count(p.delta(), a, b);
}

/// Exponents accumulated triangle by triangle: each triangle contributes a
/// factor 3 (choice of the two edges kept) and its edge weight squared.
/// The seed triangle has weight (1+d)^n; the 3(d+4)^(i-1) triangles born at
/// i >= 1 have weight (1+d)^(n-i).
inline TreeCount tree_count_triangles(const ModelParams& p) {
    const u64 d = p.delta();
    const u64 n = p.levels();
    u64 a = 1;
    u64 b = checked_mul(2, n);
    for (u64 i = 1; i <= n; ++i) {
        const u64 born = checked_mul(3, checked_pow(d + 4, i - 1));
        a = checked_add(a, born);
        b = checked_add(b, checked_mul(checked_mul(2, n - i), born));
    }
    return detail::make_tree_count(d, a, b);
}

/// ln tau = sum ln s_i + sum_{sigma != 0} m ln sigma - ln(sum s_i).
inline double tree_count_spectral(const WeightedGraph& g, const Spectrum& lap) {
    if (lap.kind != SpectrumKind::laplacian) throw precondition_error("tree_count_spectral expects a Laplacian spectrum");
    if (lap.total_multiplicity() != g.vertex_count())
        throw precondition_error("tree_count_spectral: spectrum size does not match graph");
    long double log_tau = 0;
    u64 zero = 0;
    for (std::size_t v = 0; v < g.vertex_count(); ++v)
        log_tau += std::log(static_cast<long double>(g.strength(static_cast<VertexId>(v))));
    for (const auto& e : lap.entries) {
        if (std::abs(e.value) <= 1e-9) {
            zero += e.multiplicity;
            continue;
        }
        log_tau += static_cast<long double>(e.multiplicity) * std::log(static_cast<long double>(e.value));
    }
    if (zero != 1) throw precondition_error("tree_count_spectral: zero eigenvalue must have multiplicity 1");
    log_tau -= std::log(static_cast<long double>(checked_mul(2, g.total_weight())));
    return static_cast<double>(log_tau);
}

inline constexpr std::size_t kirchhoff_vertex_guard = 64;

/// Weighted matrix-tree theorem: the determinant of the strength-minus-weight
/// Laplacian with row and column 0 removed, computed exactly.
inline BigInt tree_count_kirchhoff(const WeightedGraph& g) {
    const std::size_t n = g.vertex_count();
    if (n > kirchhoff_vertex_guard) throw guard_error("Kirchhoff guard: N > 64");
    if (n <= 1) return 1;
    DenseMatrix<BigInt> m(n - 1, n - 1, BigInt(0));
    for (std::size_t v = 1; v < n; ++v) m(v - 1, v - 1) = g.strength(static_cast<VertexId>(v));
    for (const auto& e : g.edges()) {
        if (e.u == 0) continue;  // e.v > e.u, so both endpoints survive
        m(e.u - 1, e.v - 1) -= e.w;
        m(e.v - 1, e.u - 1) -= e.w;
    }
    return bareiss_determinant(std::move(m));
}

}  // namespace corona
