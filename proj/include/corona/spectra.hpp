#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "corona/common.hpp"
#include "corona/graph.hpp"
#include "corona/linalg.hpp"

namespace corona {

enum class SpectrumKind { transition, laplacian };

inline const char* to_string(SpectrumKind k) {
    return k == SpectrumKind::transition ? "transition" : "laplacian";
}

struct SpectrumEntry {
    double value;
    u64 multiplicity;
};

/// Eigenvalue multiset of P_n (transition) or L_n = I - P_n (laplacian),
/// entries ascending by value, no two within merge_tolerance.
struct Spectrum {
    u64 delta = 1;
    u64 level = 0;
    SpectrumKind kind = SpectrumKind::transition;
    std::vector<SpectrumEntry> entries;

    [[nodiscard]] u64 total_multiplicity() const {
        u64 t = 0;
        for (const auto& e : entries) t = checked_add(t, e.multiplicity);
        return t;
    }

    /// Multiplicity of the entry within `tol` of `value`, or 0.
    [[nodiscard]] u64 multiplicity_of(double value, double tol = 1e-9) const {
        for (const auto& e : entries)
            if (std::abs(e.value - value) <= tol) return e.multiplicity;
        return 0;
    }

    /// Every eigenvalue repeated by its multiplicity, ascending.
    [[nodiscard]] std::vector<double> expanded() const {
        std::vector<double> out;
        out.reserve(total_multiplicity());
        for (const auto& e : entries) out.insert(out.end(), e.multiplicity, e.value);
        return out;
    }
};

inline constexpr double merge_tolerance = 1e-12;

/// The two eigenvalues of P_n produced by an eigenvalue `parent` of P_{n-1}:
/// roots of 2(d+2)x^2 - [(d+2) + 2(d+1)parent]x + [(d+1)parent - 1], ascending.
inline std::pair<double, double> child_eigenvalues(double parent, u64 delta) {
    if (!(parent >= -1 - 1e-12 && parent <= 1 + 1e-12))
        throw precondition_error("child_eigenvalues: parent must lie in [-1, 1]");
    const double d = static_cast<double>(delta);
    const double a = 2 * (d + 2);
    const double b = -((d + 2) + 2 * (d + 1) * parent);
    const double c = (d + 1) * parent - 1;
    const double disc = b * b - 4 * a * c;
    if (disc < 0) throw consistency_error("child_eigenvalues: negative discriminant");
    // b < 0 always on the parent domain, so -b + sqrt is cancellation-free.
    const double q = -0.5 * (b + (b < 0 ? -1 : 1) * std::sqrt(disc));
    double x1 = q / a;
    double x2 = c / q;
    if (x1 > x2) std::swap(x1, x2);
    return {x1, x2};
}

/// Multiplicity of +1/2 in P_n for n >= 1: 3(d+1)((d+4)^(n-1) - 1)/(d+3).
inline u64 mult_plus_half(u64 delta, u64 n) {
    if (n < 1) throw precondition_error("mult_plus_half requires n >= 1");
    const u128 d = delta;
    const u128 x = checked_pow(delta + 4, n - 1);
    return exact_div(checked_mul(3 * (d + 1), x - 1), d + 3, "mult_plus_half");
}

/// Multiplicity of -1/2 in P_n: (3(d+4)^n + 2d + 3)/(d+3), the solution of
/// m_n = m_{n-1} + n_v(n)/2 from m_0 = 2.
inline u64 mult_minus_half(u64 delta, u64 n) {
    const u128 d = delta;
    const u128 x = checked_pow(delta + 4, n);
    return exact_div(3 * x + 2 * d + 3, d + 3, "mult_minus_half");
}

/// The rejected variant (3(d+4)^(n+1) + 2d + 3)/(d+3). Retained so the
/// verification report can show it breaking the multiplicity sum.
inline u64 mult_minus_half_rejected(u64 delta, u64 n) {
    const u128 d = delta;
    const u128 x = checked_pow(delta + 4, n + 1);
    return exact_div(3 * x + 2 * d + 3, d + 3, "mult_minus_half_rejected");
}

namespace detail {

inline bool near(double a, double b, double tol = merge_tolerance) { return std::abs(a - b) <= tol; }

/// Sorts entries and merges values within merge_tolerance. Recursion output
/// never needs a merge, so `allow_merge` = false turns one into an error.
inline std::vector<SpectrumEntry> normalize_entries(std::vector<SpectrumEntry> e, bool allow_merge) {
    std::sort(e.begin(), e.end(), [](const auto& x, const auto& y) { return x.value < y.value; });
    std::vector<SpectrumEntry> out;
    for (const auto& x : e) {
        if (x.multiplicity == 0) continue;
        if (!out.empty() && near(out.back().value, x.value)) {
            if (!allow_merge)
                throw consistency_error("spectrum: children of distinct parents collided at " +
                                        std::to_string(x.value));
            out.back().multiplicity = checked_add(out.back().multiplicity, x.multiplicity);
        } else {
            out.push_back(x);
        }
    }
    return out;
}

}  // namespace detail

/// Transition spectrum of level n+1 from that of level n.
///
/// Every value other than -1/2 yields both children with its multiplicity;
/// -1/2 is a fixed point of the recursion and contributes only its other
/// child (d+3)/(2(d+2)). The +1/2 and -1/2 entries are then set from their
/// closed forms and the multiplicity sum is checked against N_{n+1}.
inline Spectrum advance_spectrum(const Spectrum& spec) {
    if (spec.kind != SpectrumKind::transition)
        throw precondition_error("advance_spectrum expects a transition spectrum");
    const u64 d = spec.delta;
    const u64 n = spec.level + 1;
    std::vector<SpectrumEntry> next;
    next.reserve(2 * spec.entries.size() + 2);
    for (const auto& e : spec.entries) {
        if (detail::near(e.value, -0.5)) {
            const double other = static_cast<double>(d + 3) / (2.0 * static_cast<double>(d + 2));
            next.push_back({other, e.multiplicity});
            continue;
        }
        const auto [lo, hi] = child_eigenvalues(e.value, d);
        for (const double c : {lo, hi}) {
            if (detail::near(c, 0.5, 1e-9)) throw consistency_error("spectrum: child equals +1/2");
            if (detail::near(c, -0.5, 1e-9))
                throw consistency_error("spectrum: child -1/2 from a parent other than -1/2");
            next.push_back({c, e.multiplicity});
        }
    }
    next.push_back({0.5, mult_plus_half(d, n)});
    next.push_back({-0.5, mult_minus_half(d, n)});

    Spectrum out{d, n, SpectrumKind::transition, detail::normalize_entries(std::move(next), false)};
    const u64 expected = expected_census(ModelParams(d, n)).vertices;
    if (out.total_multiplicity() != expected)
        throw consistency_error("spectrum: multiplicity sum " + std::to_string(out.total_multiplicity()) +
                                " != N_" + std::to_string(n) + " = " + std::to_string(expected));
    return out;
}

/// Eigenvalues of P_n with multiplicities, from {-1/2, -1/2, 1} at level 0.
inline Spectrum transition_spectrum(const ModelParams& p) {
    Spectrum s{p.delta(), 0, SpectrumKind::transition, {{-0.5, 2}, {1.0, 1}}};
    for (u64 i = 0; i < p.levels(); ++i) s = advance_spectrum(s);
    return s;
}

/// sigma = 1 - lambda applied entrywise.
inline Spectrum to_laplacian(const Spectrum& t) {
    if (t.kind != SpectrumKind::transition) throw precondition_error("to_laplacian expects a transition spectrum");
    std::vector<SpectrumEntry> e;
    e.reserve(t.entries.size());
    for (const auto& x : t.entries) e.push_back({1.0 - x.value, x.multiplicity});
    return {t.delta, t.level, SpectrumKind::laplacian, detail::normalize_entries(std::move(e), false)};
}

/// Eigenvalues of L_n. Along the way each level's children are checked
/// against the sigma-domain Vieta relations: for parent s, the two children
/// sum to ((2d+2)s + d + 4)/(2(d+2)) and multiply to (d+1)s/(2(d+2)).
inline Spectrum laplacian_spectrum(const ModelParams& p) {
    const u64 d = p.delta();
    const double dd = static_cast<double>(d);
    Spectrum t{d, 0, SpectrumKind::transition, {{-0.5, 2}, {1.0, 1}}};
    for (u64 i = 0; i < p.levels(); ++i) {
        for (const auto& e : t.entries) {
            const auto [lo, hi] = child_eigenvalues(e.value, d);
            const double sigma = 1.0 - e.value;
            const double g1 = 1.0 - hi;
            const double g2 = 1.0 - lo;
            const double sum = ((2 * dd + 2) * sigma + dd + 4) / (2 * (dd + 2));
            const double prod = (dd + 1) * sigma / (2 * (dd + 2));
            if (std::abs(g1 + g2 - sum) > 1e-9 || std::abs(g1 * g2 - prod) > 1e-9)
                throw consistency_error("laplacian spectrum: Vieta relation violated");
        }
        t = advance_spectrum(t);
    }
    return to_laplacian(t);
}

// ---------------------------------------------------------------------------
// Dense matrices and the numeric oracle
// ---------------------------------------------------------------------------

inline constexpr std::size_t dense_vertex_guard = 2000;

/// P = S^{-1/2} W S^{-1/2}.
inline Matrix normalized_adjacency(const WeightedGraph& g) {
    const std::size_t n = g.vertex_count();
    if (n > dense_vertex_guard) throw guard_error("dense matrix guard: N > 2000");
    Matrix m = Matrix::square(n);
    for (const auto& e : g.edges()) {
        const double v = static_cast<double>(e.w) /
                         std::sqrt(static_cast<double>(g.strength(e.u)) * static_cast<double>(g.strength(e.v)));
        m(e.u, e.v) = v;
        m(e.v, e.u) = v;
    }
    return m;
}

/// L = I - P.
inline Matrix normalized_laplacian(const WeightedGraph& g) {
    Matrix m = normalized_adjacency(g);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = (i == j ? 1.0 : 0.0) - m(i, j);
    return m;
}

/// Groups a sorted eigenvalue list into a spectrum, merging values within `tol`.
inline Spectrum spectrum_from_values(const std::vector<double>& values, u64 delta, u64 level, SpectrumKind kind,
                                     double tol = 1e-8) {
    Spectrum s{delta, level, kind, {}};
    for (const double v : values) {
        if (!s.entries.empty() && std::abs(s.entries.back().value - v) <= tol) {
            ++s.entries.back().multiplicity;
        } else {
            s.entries.push_back({v, 1});
        }
    }
    return s;
}

/// Dense-oracle spectrum of a generated graph.
inline Spectrum dense_spectrum(const WeightedGraph& g, u64 delta, SpectrumKind kind) {
    const Matrix m = kind == SpectrumKind::transition ? normalized_adjacency(g) : normalized_laplacian(g);
    return spectrum_from_values(dense_eigenvalues(m), delta, g.level(), kind);
}

/// Largest |a_i - b_i| between two multiplicity-expanded spectra; infinity
/// when their sizes differ.
inline double max_abs_deviation(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

/// trace(P^2) = sum over edges of 2 w^2 / (s_u s_v).
inline double trace_p_squared(const WeightedGraph& g) {
    long double t = 0;
    for (const auto& e : g.edges()) {
        const auto w = static_cast<long double>(e.w);
        t += 2 * w * w /
             (static_cast<long double>(g.strength(e.u)) * static_cast<long double>(g.strength(e.v)));
    }
    return static_cast<double>(t);
}

struct SpectrumCheck {
    std::string name;
    bool passed;
    std::string detail;
};

struct SpectrumCheckReport {
    std::vector<SpectrumCheck> checks;

    [[nodiscard]] bool passed() const {
        return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
    }
};

/// Trace identities on a spectrum (in the transition domain):
/// (a) sum m = N_n, (b) sum lambda m = 0 within 1e-9 N_n, (d) |lambda| <= 1,
/// and, when a graph is supplied, (c) sum lambda^2 m = trace(P^2) to relative 1e-9.
inline SpectrumCheckReport spectrum_checks(const Spectrum& spec, const WeightedGraph* g = nullptr) {
    SpectrumCheckReport r;
    const u64 n_expected = expected_census(ModelParams(spec.delta, spec.level)).vertices;
    const auto lambda = [&](double v) { return spec.kind == SpectrumKind::transition ? v : 1.0 - v; };

    const u64 total = spec.total_multiplicity();
    r.checks.push_back({"multiplicity-sum", total == n_expected,
                        "sum m = " + std::to_string(total) + ", N = " + std::to_string(n_expected)});

    long double s1 = 0, s2 = 0;
    double max_abs = 0;
    for (const auto& e : spec.entries) {
        const long double l = lambda(e.value);
        s1 += l * static_cast<long double>(e.multiplicity);
        s2 += l * l * static_cast<long double>(e.multiplicity);
        max_abs = std::max(max_abs, std::abs(static_cast<double>(l)));
    }
    const double tol1 = 1e-9 * static_cast<double>(n_expected);
    r.checks.push_back({"zero-trace", std::abs(static_cast<double>(s1)) <= tol1,
                        "sum lambda m = " + std::to_string(static_cast<double>(s1))});
    if (g != nullptr) {
        const double tr = trace_p_squared(*g);
        const double rel = std::abs(static_cast<double>(s2) - tr) / std::max(1.0, std::abs(tr));
        r.checks.push_back({"trace-p-squared", rel <= 1e-9,
                            "sum lambda^2 m = " + std::to_string(static_cast<double>(s2)) +
                                ", trace(P^2) = " + std::to_string(tr)});
    }
    r.checks.push_back({"bounded", max_abs <= 1 + 1e-12, "max |lambda| = " + std::to_string(max_abs)});
    return r;
}

}  // namespace corona
