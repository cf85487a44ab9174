// corona-net: command-line front end for the corona network library.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "corona/corona.hpp"

namespace {

using namespace corona;

struct Config {
    u64 delta = 1;
    u64 levels = 1;
    unsigned threads = 1;
    u64 seed = 42;
    u64 samples = 100'000;
    u64 start = 0;
    std::string method;
    std::string matrix = "transition";
    std::string format = "tsv";
    std::string output;
    std::string out_dir;
    std::string report = "VERIFICATION.md";
    VerificationOptions verify;
};

/// Usage errors detected after parsing (bad parameter combinations).
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

const char* const formats_help = R"(File formats:
  edges.tsv          '# corona-net v1 delta=<D> n=<N>', then u<TAB>v<TAB>w, u < v, ascending (u, v)
  vertices.csv       vertex,birth,degree,strength
  distribution_<k>.csv  value,count,p_cum   (k = strength|degree|weight; p_cum = P(X >= value))
  classes.csv        birth,size,strength,degree,edge_weight
  correlations.csv   degree,knn_closed,knn_emp,knnw_closed,knnw_emp,flag   (flag ok|seed|mixed)
  summary.json       census, exponents, clustering, diameter (null when N > 20000)
  spectrum.csv       value,multiplicity   (15 significant digits, ascending)
  hitting.json       delta,n,closed,spectral,linear_solve,mc_mean,mc_stderr,mc_samples,seed
  trees.json         delta,n,a,b,log_tau,exact_tau   (tau = 3^a (delta+1)^b; a, b, exact_tau as strings)
JSON numbers carry 15 significant digits; large integers are decimal strings.
Exit codes: 0 success, 1 verification or runtime failure, 2 usage error.)";

void add_model_options(CLI::App* cmd, Config& cfg) {
    cmd->add_option("--delta", cfg.delta, "Weight reinforcement factor delta >= 1")->capture_default_str();
    cmd->add_option("--levels,-n", cfg.levels, "Number of iterations n")->capture_default_str();
    cmd->add_option("--threads", cfg.threads, "Worker threads for parallel operations")
        ->capture_default_str()
        ->check(CLI::Range(1u, 256u));
}

std::ofstream open_output(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    return out;
}

/// Writes `text` to `path`, or to stdout when `path` is empty.
void emit(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
    } else {
        auto out = open_output(path);
        out << text;
    }
}

int run_generate(const Config& cfg) {
    const ModelParams p(cfg.delta, cfg.levels);
    const WeightedGraph g = generate(p);
    if (!cfg.out_dir.empty()) {
        const std::filesystem::path dir(cfg.out_dir);
        auto edges = open_output(dir / "edges.tsv");
        io::write_edge_list(edges, g, cfg.delta);
        auto vertices = open_output(dir / "vertices.csv");
        io::write_vertex_csv(vertices, g);
        return 0;
    }
    if (cfg.format == "tsv")
        io::write_edge_list(std::cout, g, cfg.delta);
    else
        io::write_vertex_csv(std::cout, g);
    return 0;
}

int run_stats(const Config& cfg) {
    constexpr std::size_t diameter_limit = 20'000;
    const ModelParams p(cfg.delta, cfg.levels);
    const WeightedGraph g = generate(p);
    const std::filesystem::path dir(cfg.out_dir.empty() ? "." : cfg.out_dir);

    const auto dist = measured_distributions(g);
    const std::pair<const char*, const DistributionTable*> tables[] = {
        {"strength", &dist.strength}, {"degree", &dist.degree}, {"weight", &dist.weight}};
    for (const auto& [name, table] : tables) {
        auto out = open_output(dir / (std::string("distribution_") + name + ".csv"));
        io::write_distribution_csv(out, *table);
    }
    {
        auto out = open_output(dir / "classes.csv");
        io::write_classes_csv(out, degree_class_table(p));
    }
    {
        auto out = open_output(dir / "correlations.csv");
        io::write_correlations_csv(out, correlation_report(g, cfg.delta));
    }
    std::optional<u64> diam;
    if (g.vertex_count() <= diameter_limit) diam = diameter(g, cfg.threads);
    const auto summary = io::stats_summary(p, census(g), global_clustering_empirical(g), diam);
    const std::string text = summary.dump(2) + "\n";
    auto out = open_output(dir / "summary.json");
    out << text;
    std::cout << text;
    return 0;
}

int run_spectrum(const Config& cfg) {
    const ModelParams p(cfg.delta, cfg.levels);
    const SpectrumKind kind = cfg.matrix == "laplacian" ? SpectrumKind::laplacian : SpectrumKind::transition;
    Spectrum s;
    if (cfg.method == "dense") {
        s = dense_spectrum(generate(p, dense_vertex_guard), cfg.delta, kind);
    } else {
        s = kind == SpectrumKind::laplacian ? laplacian_spectrum(p) : transition_spectrum(p);
    }
    emit(cfg.output, io::render(io::write_spectrum_csv, s));
    return 0;
}

int run_hitting(const Config& cfg) {
    const ModelParams p(cfg.delta, cfg.levels);
    std::optional<double> closed = hitting_time_closed(cfg.delta, cfg.levels);
    std::optional<double> spectral, solve;
    std::optional<MonteCarloResult> mc;
    double value = *closed;
    if (cfg.method == "recursive") {
        value = hitting_time_recursive(cfg.delta, cfg.levels);
    } else if (cfg.method == "spectral") {
        value = *(spectral = hitting_time_spectral(laplacian_spectrum(p)));
    } else if (cfg.method == "solve") {
        value = *(solve = hitting_time_linear_solve(generate(p, solve_vertex_guard)));
    } else if (cfg.method == "mc") {
        const WeightedGraph g = generate(p);
        if (cfg.start >= g.vertex_count()) throw UsageError("--start must be below the vertex count");
        mc = hitting_time_monte_carlo(g, static_cast<VertexId>(cfg.start), cfg.samples, cfg.seed, cfg.threads);
        value = mc->mean;
    }
    if (mc)
        std::cout << io::format_sig(mc->mean, 15) << " +- " << io::format_sig(mc->std_error, 15) << " (" << mc->samples
                  << " samples, seed " << cfg.seed << ")\n";
    else
        std::cout << io::format_sig(value, 15) << '\n';
    if (!cfg.output.empty()) {
        const auto j = io::hitting_json(p, closed, spectral, solve, mc, mc ? std::optional<u64>(cfg.seed) : std::nullopt);
        emit(cfg.output, j.dump(2) + "\n");
    }
    return 0;
}

int run_trees(const Config& cfg) {
    const ModelParams p(cfg.delta, cfg.levels);
    TreeCount t = tree_count_closed(p);
    if (cfg.method == "triangles") {
        t = tree_count_triangles(p);
    } else if (cfg.method == "spectral") {
        t.log_value = tree_count_spectral(generate(p), laplacian_spectrum(p));
        t.exact.reset();
    } else if (cfg.method == "kirchhoff") {
        const BigInt k = tree_count_kirchhoff(generate(p, kirchhoff_vertex_guard));
        t.log_value = std::log(static_cast<double>(k));
        t.exact = k;
    }
    std::cout << "ln tau = " << io::format_sig(t.log_value, 15) << '\n';
    if (t.exact) std::cout << "tau = " << io::decimal(*t.exact) << '\n';
    if (!cfg.output.empty()) emit(cfg.output, io::trees_json(p, t).dump(2) + "\n");
    return 0;
}

int run_verify(const Config& cfg) {
    VerificationOptions opt = cfg.verify;
    opt.threads = cfg.threads;
    const VerificationReport r = run_verification(ModelParams(cfg.delta, cfg.levels), opt);
    emit(cfg.report, render_markdown(r));
    std::cout << (r.passed() ? "PASS" : "FAIL") << ": " << r.count(CheckStatus::pass) << " passed, "
              << r.count(CheckStatus::fail) << " failed, " << r.count(CheckStatus::skip) << " skipped\n";
    for (const auto& c : r.checks)
        if (c.status == CheckStatus::fail) std::cout << "  FAIL " << c.section << ": " << c.name << " " << c.detail << '\n';
    return r.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    Config cfg;
    CLI::App app{"Deterministic weighted corona networks: generation, analytics, spectra, dynamics"};
    app.footer(formats_help);
    app.require_subcommand(1);

    auto* gen = app.add_subcommand("generate", "Write the edge list (TSV) or vertex metadata (CSV)");
    add_model_options(gen, cfg);
    gen->add_option("--format", cfg.format, "stdout format: tsv (edges) or csv (vertices)")
        ->capture_default_str()
        ->check(CLI::IsMember({"tsv", "csv"}));
    gen->add_option("--out-dir", cfg.out_dir, "Write edges.tsv and vertices.csv here instead of stdout");

    auto* stats = app.add_subcommand("stats", "Distributions, classes, correlations and a JSON summary");
    add_model_options(stats, cfg);
    stats->add_option("--out-dir", cfg.out_dir, "Output directory")->default_str(".");

    auto* spec = app.add_subcommand("spectrum", "Eigenvalues with multiplicities as CSV");
    add_model_options(spec, cfg);
    cfg.method = "recursive";
    spec->add_option("--matrix", cfg.matrix, "transition or laplacian")
        ->capture_default_str()
        ->check(CLI::IsMember({"transition", "laplacian"}));
    spec->add_option("--method", cfg.method, "recursive or dense (Jacobi, N <= 2000)")
        ->default_str("recursive")
        ->check(CLI::IsMember({"recursive", "dense"}));
    spec->add_option("--output,-o", cfg.output, "CSV path (default stdout)");

    auto* hit = app.add_subcommand("hitting", "Mean hitting time H_n");
    add_model_options(hit, cfg);
    hit->add_option("--method", cfg.method, "closed, recursive, spectral, solve (N <= 500) or mc")
        ->default_str("closed")
        ->check(CLI::IsMember({"closed", "recursive", "spectral", "solve", "mc"}));
    hit->add_option("--seed", cfg.seed, "Monte Carlo seed")->capture_default_str();
    hit->add_option("--samples", cfg.samples, "Monte Carlo samples")->capture_default_str()->check(CLI::PositiveNumber);
    hit->add_option("--start", cfg.start, "Monte Carlo start vertex")->capture_default_str();
    hit->add_option("--output,-o", cfg.output, "Also write hitting.json here");

    auto* trees = app.add_subcommand("trees", "Weighted spanning tree count tau");
    add_model_options(trees, cfg);
    trees->add_option("--method", cfg.method, "closed, triangles, spectral or kirchhoff (N <= 64)")
        ->default_str("closed")
        ->check(CLI::IsMember({"closed", "triangles", "spectral", "kirchhoff"}));
    trees->add_option("--output,-o", cfg.output, "Also write trees.json here");

    auto* ver = app.add_subcommand("verify", "Run the invariant suite for W_0..W_n");
    add_model_options(ver, cfg);
    ver->add_option("--report", cfg.report, "Markdown report path")->capture_default_str();
    ver->add_option("--tol-oracle", cfg.verify.oracle_tolerance, "Recursive vs dense eigenvalues (abs)")
        ->capture_default_str();
    ver->add_option("--tol-spectral", cfg.verify.spectral_tolerance, "Closed form vs spectral routes (rel)")
        ->capture_default_str();
    ver->add_option("--tol-solve", cfg.verify.solve_tolerance, "Closed form vs linear solve (rel)")
        ->capture_default_str();

    // Each subcommand has its own default method.
    hit->preparse_callback([&](std::size_t) { cfg.method = "closed"; });
    trees->preparse_callback([&](std::size_t) { cfg.method = "closed"; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*gen) return run_generate(cfg);
        if (*stats) return run_stats(cfg);
        if (*spec) return run_spectrum(cfg);
        if (*hit) return run_hitting(cfg);
        if (*trees) return run_trees(cfg);
        if (*ver) return run_verify(cfg);
    } catch (const precondition_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const guard_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
