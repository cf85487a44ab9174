#pragma once

#include <cstdio>
#include <cstdlib>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "corona/analytics.hpp"
#include "corona/dynamics.hpp"
#include "corona/graph.hpp"
#include "corona/spectra.hpp"

namespace corona::io {

/// printf-style %.{digits}g.
inline std::string format_sig(double x, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return buf;
}

/// A double rounded to 15 significant digits, so nlohmann's shortest
/// round-trip output never shows more.
inline nlohmann::ordered_json json_number(double x) { return std::strtod(format_sig(x, 15).c_str(), nullptr); }

inline nlohmann::ordered_json json_number(const std::optional<double>& x) {
    return x ? json_number(*x) : nlohmann::ordered_json(nullptr);
}

inline std::string decimal(const BigInt& v) { return v.str(); }

// ---------------------------------------------------------------------------
// Graph files
// ---------------------------------------------------------------------------

/// Header `# corona-net v1 delta=<D> n=<N>`, then `u<TAB>v<TAB>w` per edge,
/// u < v, ascending by (u, v).
inline void write_edge_list(std::ostream& os, const WeightedGraph& g, u64 delta) {
    os << "# corona-net v1 delta=" << delta << " n=" << g.level() << '\n';
    for (const auto& e : g.edges()) os << e.u << '\t' << e.v << '\t' << e.w << '\n';
}

inline void write_vertex_csv(std::ostream& os, const WeightedGraph& g) {
    os << "vertex,birth,degree,strength\n";
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
        const auto x = static_cast<VertexId>(v);
        os << v << ',' << g.birth(x) << ',' << g.degree(x) << ',' << g.strength(x) << '\n';
    }
}

// ---------------------------------------------------------------------------
// Analytics files
// ---------------------------------------------------------------------------

inline void write_distribution_csv(std::ostream& os, const DistributionTable& t) {
    os << "value,count,p_cum\n";
    for (const auto& r : t) os << r.value << ',' << r.count << ',' << format_sig(r.p_cum.to_double(), 12) << '\n';
}

inline void write_classes_csv(std::ostream& os, const std::vector<DegreeClassRow>& rows) {
    os << "birth,size,strength,degree,edge_weight\n";
    for (const auto& r : rows)
        os << r.birth << ',' << r.size << ',' << r.strength << ',' << r.degree << ',' << r.edge_weight << '\n';
}

/// flag is "seed" for the initial-triangle class (no closed form), "mixed"
/// when a degree class spans several birth classes, "ok" otherwise.
inline void write_correlations_csv(std::ostream& os, const std::vector<CorrelationRow>& rows) {
    const auto opt = [](const std::optional<double>& x) { return x ? format_sig(*x, 15) : std::string(); };
    os << "degree,knn_closed,knn_emp,knnw_closed,knnw_emp,flag\n";
    for (const auto& r : rows) {
        const char* flag = !r.birth ? "mixed" : (*r.birth == 0 ? "seed" : "ok");
        os << r.degree << ',' << opt(r.knn_closed) << ',' << format_sig(r.knn_empirical, 15) << ','
           << opt(r.knnw_closed) << ',' << format_sig(r.knnw_empirical, 15) << ',' << flag << '\n';
    }
}

inline nlohmann::ordered_json stats_summary(const ModelParams& p, const Census& measured, double clustering_empirical,
                                            std::optional<u64> measured_diameter) {
    const Census expected = expected_census(p);
    const auto ex = distribution_exponents(p.delta());
    nlohmann::ordered_json j;
    j["delta"] = p.delta();
    j["n"] = p.levels();
    j["vertices"] = std::to_string(measured.vertices);
    j["edges"] = std::to_string(measured.edges);
    j["triangles"] = std::to_string(measured.triangles);
    j["total_weight"] = std::to_string(measured.total_weight);
    j["census_matches_closed_form"] = measured == expected;
    j["average_degree"] = json_number(2.0 * static_cast<double>(measured.edges) / static_cast<double>(measured.vertices));
    j["gamma_s"] = json_number(ex.strength);
    j["gamma_k"] = json_number(ex.degree);
    j["gamma_w"] = json_number(ex.weight);
    j["clustering_closed"] = json_number(global_clustering_closed(p.delta(), p.levels()));
    j["clustering_empirical"] = json_number(clustering_empirical);
    j["diameter"] = measured_diameter ? nlohmann::ordered_json(*measured_diameter) : nlohmann::ordered_json(nullptr);
    j["diameter_closed"] = diameter_closed(p.levels());
    return j;
}

// ---------------------------------------------------------------------------
// Spectra and dynamics
// ---------------------------------------------------------------------------

inline void write_spectrum_csv(std::ostream& os, const Spectrum& s) {
    os << "value,multiplicity\n";
    for (const auto& e : s.entries) os << format_sig(e.value, 15) << ',' << e.multiplicity << '\n';
}

/// Keys delta, n, closed, spectral, linear_solve, mc_mean, mc_stderr,
/// mc_samples, seed; absent values are null.
inline nlohmann::ordered_json hitting_json(const ModelParams& p, const std::optional<double>& closed,
                                           const std::optional<double>& spectral,
                                           const std::optional<double>& linear_solve,
                                           const std::optional<MonteCarloResult>& mc, std::optional<u64> seed) {
    nlohmann::ordered_json j;
    j["delta"] = p.delta();
    j["n"] = p.levels();
    j["closed"] = json_number(closed);
    j["spectral"] = json_number(spectral);
    j["linear_solve"] = json_number(linear_solve);
    j["mc_mean"] = mc ? json_number(mc->mean) : nlohmann::ordered_json(nullptr);
    j["mc_stderr"] = mc ? json_number(mc->std_error) : nlohmann::ordered_json(nullptr);
    j["mc_samples"] = mc ? nlohmann::ordered_json(mc->samples) : nlohmann::ordered_json(nullptr);
    j["seed"] = (mc && seed) ? nlohmann::ordered_json(*seed) : nlohmann::ordered_json(nullptr);
    return j;
}

/// Keys delta, n, a, b, log_tau, exact_tau. a, b and exact_tau are decimal
/// strings; exact_tau is null when the exact value is not held.
inline nlohmann::ordered_json trees_json(const ModelParams& p, const TreeCount& t) {
    nlohmann::ordered_json j;
    j["delta"] = p.delta();
    j["n"] = p.levels();
    j["a"] = std::to_string(t.a);
    j["b"] = std::to_string(t.b);
    j["log_tau"] = json_number(t.log_value);
    j["exact_tau"] = t.exact ? nlohmann::ordered_json(decimal(*t.exact)) : nlohmann::ordered_json(nullptr);
    return j;
}

template <typename Writer, typename... Args>
std::string render(Writer&& w, Args&&... args) {
    std::ostringstream os;
    w(os, std::forward<Args>(args)...);
    return os.str();
}

}  // namespace corona::io
