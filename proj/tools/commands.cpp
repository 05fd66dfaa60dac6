#include "commands.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pfcm/atomic_file.hpp"
#include "pfcm/error.hpp"
#include "pfcm/expression.hpp"
#include "pfcm/fuzzy.hpp"
#include "pfcm/grid_config.hpp"
#include "pfcm/harness.hpp"
#include "pfcm/heatmap.hpp"
#include "pfcm/kmeans.hpp"
#include "pfcm/normalize.hpp"
#include "pfcm/partition_io.hpp"
#include "pfcm/rough_kmeans.hpp"
#include "pfcm/validity.hpp"

namespace pfcm::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct InputOptions {
    std::string path;
    std::string format;  // empty: from extension
    std::string normalization = "none";
    bool drop_degenerate = false;
};

void add_input_options(CLI::App* cmd, InputOptions& in, bool with_normalize) {
    cmd->add_option("-i,--input", in.path, "Expression matrix (TSV, GCT or RES)")->required();
    cmd->add_option("--format", in.format, "Input format: tsv, gct or res (default: from extension)")
        ->check(CLI::IsMember({"tsv", "gct", "res"}));
    if (with_normalize) {
        cmd->add_option("--normalize", in.normalization, "none, mean_relative or zscore")
            ->check(CLI::IsMember({"none", "mean_relative", "zscore"}));
        cmd->add_flag("--drop-degenerate", in.drop_degenerate, "Drop zero-mean / zero-variance rows instead of failing");
    }
}

ExpressionMatrix load_input(const InputOptions& in) {
    auto m = in.format.empty() ? read_matrix_file(in.path) : read_matrix_file(in.path, parse_format(in.format));
    return normalize(m, parse_normalization(in.normalization), NormalizeOptions{in.drop_degenerate});
}

json json_number(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return nullptr;
    return v > 0 ? "inf" : "-inf";
}

// ---- normalize ----------------------------------------------------------

struct NormalizeArgs {
    InputOptions in;
    std::string method;
    std::string output;
    std::string output_format = "tsv";
};

int cmd_normalize(const NormalizeArgs& a, std::ostream& out) {
    InputOptions raw = a.in;
    raw.normalization = "none";
    const auto m = load_input(raw);
    const auto n = normalize(m, parse_normalization(a.method), NormalizeOptions{a.in.drop_degenerate});
    write_file_atomically(a.output, [&](std::ostream& os) {
        if (a.output_format == "gct") write_gct(os, n);
        else write_tsv(os, n);
    });
    out << "normalized " << n.n_genes() << " x " << n.n_samples() << " (" << a.method << ", "
        << (m.n_genes() - n.n_genes()) << " rows dropped) -> " << a.output << '\n';
    return kSuccess;
}

// ---- cluster ------------------------------------------------------------

struct ClusterArgs {
    InputOptions in;
    std::string alg;
    std::size_t k = 0;
    double m = 2.0;
    double v = 1.0;
    double zeta = 1.3;
    double w_lower = 0.7;
    std::optional<double> eps;
    std::size_t max_iter = 300;
    std::uint64_t seed = 0;
    std::string init = "uniform";
    std::string out_dir;
    std::string prefix;
};

int cmd_cluster(const ClusterArgs& a, std::ostream& out, std::ostream& err) {
    const Algorithm alg = parse_algorithm(a.alg);
    const auto init = parse_centroid_init(a.init);
    if (a.k < 1) throw ConfigError("--k must be >= 1");
    const auto data = load_input(a.in);
    const Matrix& x = data.values();

    json meta;
    meta["input"] = a.in.path;
    meta["format"] = a.in.format.empty() ? format_name(format_from_path(a.in.path)) : a.in.format;
    meta["normalization"] = a.in.normalization;
    meta["drop_degenerate"] = a.in.drop_degenerate;
    meta["algorithm"] = algorithm_name(alg);
    meta["n_genes"] = data.n_genes();
    meta["n_samples"] = data.n_samples();
    meta["seed"] = a.seed;

    const fs::path dir(a.out_dir);
    fs::create_directories(dir);
    const auto partition_path = dir / (a.prefix + "partition.csv");
    const auto centroid_path = dir / (a.prefix + "centroids.csv");
    const auto meta_path = dir / (a.prefix + "meta.json");

    AtomicFileSet files;
    Matrix centroids;
    bool converged = false;
    switch (alg) {
        case Algorithm::kmeans: {
            KMeansConfig cfg;
            cfg.k = a.k;
            cfg.seed = a.seed;
            cfg.max_iter = a.max_iter;
            cfg.eps = a.eps.value_or(1e-9);
            cfg.init = init;
            auto p = kmeans(x, cfg);
            meta["config"] = {{"k", cfg.k}, {"eps", cfg.eps}, {"max_iter", cfg.max_iter}, {"init", a.init}};
            meta["iterations"] = p.iterations;
            meta["sse"] = p.sse;
            meta["sse_trace"] = p.sse_trace;
            converged = p.converged;
            centroids = p.centroids;
            files.stage(partition_path, [&](std::ostream& os) { write_hard_partition_csv(os, data.gene_ids(), p); });
            break;
        }
        case Algorithm::rough_kmeans: {
            RoughConfig cfg;
            cfg.k = a.k;
            cfg.zeta = a.zeta;
            cfg.w_lower = a.w_lower;
            cfg.seed = a.seed;
            cfg.max_iter = a.max_iter;
            cfg.eps = a.eps.value_or(1e-9);
            cfg.init = init;
            auto p = rough_kmeans(x, cfg);
            meta["config"] = {{"k", cfg.k},     {"zeta", cfg.zeta},           {"w_lower", cfg.w_lower},
                              {"eps", cfg.eps}, {"max_iter", cfg.max_iter}, {"init", a.init}};
            meta["iterations"] = p.iterations;
            converged = p.converged;
            centroids = p.centroids;
            files.stage(partition_path, [&](std::ostream& os) { write_rough_partition_csv(os, data.gene_ids(), p); });
            break;
        }
        case Algorithm::fcm:
        case Algorithm::pfcm: {
            FuzzyConfig cfg;
            cfg.c = a.k;
            cfg.m = a.m;
            cfg.v = alg == Algorithm::fcm ? 0.0 : a.v;
            cfg.eps = a.eps.value_or(1e-5);
            cfg.max_iter = a.max_iter;
            cfg.seed = a.seed;
            auto p = alg == Algorithm::fcm ? fcm(x, cfg) : pfcm(x, cfg);
            meta["config"] = {{"c", cfg.c},     {"m", cfg.m},
                              {"eps", cfg.eps}, {"max_iter", cfg.max_iter}, {"alpha_floor", cfg.alpha_floor}};
            if (alg == Algorithm::pfcm) meta["config"]["v"] = cfg.v;
            meta["iterations"] = p.iterations;
            meta["objective"] = json_number(p.objective);
            meta["objective_trace"] = p.objective_trace;
            if (p.alpha) meta["alpha"] = *p.alpha;
            converged = p.converged;
            centroids = p.centroids;
            files.stage(partition_path, [&](std::ostream& os) { write_fuzzy_partition_csv(os, data.gene_ids(), p); });
            break;
        }
    }
    meta["converged"] = converged;
    files.stage(centroid_path, [&](std::ostream& os) { write_centroids_csv(os, data.sample_ids(), centroids); });
    files.stage(meta_path, [&](std::ostream& os) { os << meta.dump(2) << '\n'; });
    files.commit();

    if (!converged)
        err << "warning: " << algorithm_name(alg) << " did not converge within " << a.max_iter
            << " iterations; results written and flagged in " << meta_path.string() << '\n';
    out << algorithm_name(alg) << ": wrote " << partition_path.string() << ", " << centroid_path.string() << ", "
        << meta_path.string() << '\n';
    return kSuccess;
}

// ---- validate -----------------------------------------------------------

struct ValidateArgs {
    InputOptions in;
    std::string partition;
    std::string centroids;
    std::optional<double> m;
    std::string alg;
    std::uint64_t seed = 0;
    std::string output;
    std::string csv;
};

int cmd_validate(const ValidateArgs& a, std::ostream& out) {
    const auto data = load_input(a.in);
    std::ifstream pin(a.partition);
    if (!pin) throw DataError("cannot open '" + a.partition + "'");
    const auto part = read_partition_csv(pin, data.gene_ids());

    const bool fuzzy = part.kind == PartitionKind::fuzzy;
    const double m = a.m.value_or(fuzzy ? 2.0 : 1.0);
    if (!(m >= 1.0)) throw ConfigError("--m must be >= 1");
    Algorithm alg = fuzzy ? Algorithm::pfcm : part.kind == PartitionKind::rough ? Algorithm::rough_kmeans : Algorithm::kmeans;
    if (!a.alg.empty()) alg = parse_algorithm(a.alg);

    Matrix w;
    if (!a.centroids.empty()) {
        std::ifstream cin(a.centroids);
        if (!cin) throw DataError("cannot open '" + a.centroids + "'");
        w = read_centroids_csv(cin, data.n_samples());
        if (w.rows() != part.memberships.cols())
            throw DataError("centroid file has " + std::to_string(w.rows()) + " rows but the partition has " +
                            std::to_string(part.memberships.cols()) + " clusters");
    } else {
        w = compute_centroids(part.memberships, m, data.values());
    }
    const auto report = evaluate(data.values(), part.memberships, w, m, alg);

    json j = {{"algorithm", algorithm_name(report.algorithm)},
              {"k", report.k},
              {"n_genes", report.n_genes},
              {"n_samples", report.n_samples},
              {"normalization", a.in.normalization},
              {"seed", a.seed},
              {"m", m},
              {"input", a.in.path},
              {"partition", a.partition},
              {"centroids", a.centroids.empty() ? json(nullptr) : json(a.centroids)},
              {"rmse", json_number(report.rmse)},
              {"mae", json_number(report.mae)},
              {"xie_beni", json_number(report.xie_beni)}};
    const std::string text = j.dump(2) + "\n";
    AtomicFileSet files;
    if (!a.output.empty()) files.stage(a.output, [&](std::ostream& os) { os << text; });
    if (!a.csv.empty())
        files.stage(a.csv, [&](std::ostream& os) {
            os << "algorithm,k,n_genes,n_samples,normalization,seed,m,rmse,mae,xie_beni\n"
               << algorithm_name(report.algorithm) << ',' << report.k << ',' << report.n_genes << ','
               << report.n_samples << ',' << a.in.normalization << ',' << a.seed << ',' << format_double(m) << ','
               << format_double(report.rmse) << ',' << format_double(report.mae) << ','
               << format_double(report.xie_beni) << '\n';
        });
    files.commit();
    out << text;
    return kSuccess;
}

// ---- grid ---------------------------------------------------------------

struct GridArgs {
    InputOptions in;
    std::string config;
    std::string preset;
    std::string out_csv;
    std::string out_json;
    std::string summary_csv;
    std::size_t threads = 0;
    bool with_runtime = false;
};

int cmd_grid(const GridArgs& a, std::ostream& out) {
    const auto data = load_input(a.in);
    ExperimentGrid g;
    if (!a.config.empty()) {
        g = read_grid_config(a.config, data.n_genes());
    } else if (a.preset == "table1") {
        g = table1_preset(data.n_genes());
    } else {
        throw ConfigError("grid needs --config or --preset table1");
    }
    if (a.threads > 0) g.threads = a.threads;
    const auto result = run_grid(data, g);
    const ReportOptions opts{a.with_runtime};

    AtomicFileSet files;
    files.stage(a.out_csv, [&](std::ostream& os) { write_report_csv(os, result, opts); });
    if (!a.out_json.empty()) files.stage(a.out_json, [&](std::ostream& os) { write_report_json(os, g, result, opts); });
    if (!a.summary_csv.empty()) files.stage(a.summary_csv, [&](std::ostream& os) { write_summary_csv(os, result); });
    files.commit();

    const auto failed = std::count_if(result.rows.begin(), result.rows.end(), [](const auto& r) { return !r.ok; });
    out << "grid: " << result.rows.size() << " rows (" << failed << " failed) -> " << a.out_csv << '\n';
    return kSuccess;
}

// ---- heatmap ------------------------------------------------------------

struct HeatmapArgs {
    InputOptions in;
    std::string partition;
    std::string output;
    std::size_t scale = 1;
};

int cmd_heatmap(const HeatmapArgs& a, std::ostream& out) {
    const auto data = load_input(a.in);
    HeatmapOptions opts;
    opts.scale = a.scale;
    if (!a.partition.empty()) {
        std::ifstream pin(a.partition);
        if (!pin) throw DataError("cannot open '" + a.partition + "'");
        opts.cluster_of_gene = crisp_labels(read_partition_csv(pin, data.gene_ids()).memberships);
    }
    const auto img = render_heatmap(data, opts);
    write_file_atomically(a.output, [&](std::ostream& os) { write_ppm(os, img); }, true);
    out << "heatmap " << img.width << " x " << img.height << " -> " << a.output << '\n';
    return kSuccess;
}

int report_error(std::ostream& err, bool as_json, int code, const char* kind, const std::string& message) {
    if (as_json) {
        err << json{{"error", kind}, {"message", message}, {"exit_code", code}}.dump() << '\n';
    } else {
        std::string line = message;
        std::replace(line.begin(), line.end(), '\n', ' ');
        err << "error: " << line << '\n';
    }
    return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Penalized fuzzy c-means and companion clustering for expression matrices", "pfcm"};
    app.require_subcommand(1);
    app.fallthrough();
    bool json_diag = false;
    app.add_flag("--json", json_diag, "Machine-readable diagnostics on stderr");

    NormalizeArgs na;
    auto* normalize_cmd = app.add_subcommand("normalize", "Normalize each gene vector");
    add_input_options(normalize_cmd, na.in, false);
    normalize_cmd->add_option("--method", na.method, "mean_relative or zscore")
        ->required()
        ->check(CLI::IsMember({"mean_relative", "zscore"}));
    normalize_cmd->add_flag("--drop-degenerate", na.in.drop_degenerate, "Drop degenerate rows instead of failing");
    normalize_cmd->add_option("-o,--output", na.output, "Output path")->required();
    normalize_cmd->add_option("--output-format", na.output_format, "tsv or gct")->check(CLI::IsMember({"tsv", "gct"}));

    ClusterArgs ca;
    auto* cluster_cmd = app.add_subcommand("cluster", "Run one clustering algorithm");
    add_input_options(cluster_cmd, ca.in, true);
    cluster_cmd->add_option("--alg", ca.alg, "kmeans, rough_kmeans, fcm or pfcm")
        ->required()
        ->check(CLI::IsMember({"kmeans", "rough_kmeans", "rough", "fcm", "pfcm"}));
    cluster_cmd->add_option("--k", ca.k, "Number of clusters")->required()->check(CLI::PositiveNumber);
    cluster_cmd->add_option("--m", ca.m, "Fuzzifier (> 1)")->check(CLI::Range(1.0, 1e6));
    cluster_cmd->add_option("--v", ca.v, "PFCM penalty weight (>= 0)")->check(CLI::NonNegativeNumber);
    cluster_cmd->add_option("--zeta", ca.zeta, "Rough distance-ratio threshold (>= 1)");
    cluster_cmd->add_option("--w-lower", ca.w_lower, "Rough lower-approximation weight in (0, 1]");
    cluster_cmd->add_option("--eps", ca.eps, "Convergence tolerance");
    cluster_cmd->add_option("--max-iter", ca.max_iter, "Iteration cap")->check(CLI::PositiveNumber);
    cluster_cmd->add_option("--seed", ca.seed, "RNG seed");
    cluster_cmd->add_option("--init", ca.init, "Hard-clustering initializer: uniform or farthest")
        ->check(CLI::IsMember({"uniform", "farthest"}));
    cluster_cmd->add_option("--out-dir", ca.out_dir, "Directory for the output files")->required();
    cluster_cmd->add_option("--prefix", ca.prefix, "File name prefix");

    ValidateArgs va;
    auto* validate_cmd = app.add_subcommand("validate", "Compute RMSE, MAE and Xie-Beni for a partition");
    add_input_options(validate_cmd, va.in, true);
    validate_cmd->add_option("--partition", va.partition, "Partition CSV")->required();
    validate_cmd->add_option("--centroids", va.centroids, "Centroid CSV (default: membership-weighted means)");
    validate_cmd->add_option("--m", va.m, "Membership exponent for RMSE/MAE (default 2 fuzzy, 1 otherwise)");
    validate_cmd->add_option("--alg", va.alg, "Algorithm label for the report")
        ->check(CLI::IsMember({"kmeans", "rough_kmeans", "rough", "fcm", "pfcm"}));
    validate_cmd->add_option("--seed", va.seed, "Seed echoed into the report");
    validate_cmd->add_option("-o,--output", va.output, "Report JSON path");
    validate_cmd->add_option("--csv", va.csv, "Report CSV path");

    GridArgs ga;
    auto* grid_cmd = app.add_subcommand("grid", "Run a comparative experiment grid");
    add_input_options(grid_cmd, ga.in, false);
    grid_cmd->add_option("--config", ga.config, "Grid config file (key = value)");
    grid_cmd->add_option("--preset", ga.preset, "Built-in grid")->check(CLI::IsMember({"table1"}));
    grid_cmd->add_option("--out-csv", ga.out_csv, "Per-cell report CSV")->required();
    grid_cmd->add_option("--out-json", ga.out_json, "JSON bundle with traces");
    grid_cmd->add_option("--summary-csv", ga.summary_csv, "Per-cell best/mean/sd summary CSV");
    grid_cmd->add_option("--threads", ga.threads, "Worker threads (overrides the config)");
    grid_cmd->add_flag("--with-runtime", ga.with_runtime, "Include wall-clock runtimes (not reproducible)");

    HeatmapArgs ha;
    auto* heatmap_cmd = app.add_subcommand("heatmap", "Render a red/green expression heatmap as PPM");
    add_input_options(heatmap_cmd, ha.in, true);
    heatmap_cmd->add_option("--partition", ha.partition, "Partition CSV used to group rows by cluster");
    heatmap_cmd->add_option("-o,--output", ha.output, "Output .ppm path")->required();
    heatmap_cmd->add_option("--scale", ha.scale, "Pixels per cell edge")->check(CLI::PositiveNumber);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        const bool as_json = std::find(args.begin(), args.end(), "--json") != args.end();
        return report_error(err, as_json, kUsageError, "usage", e.what());
    }

    try {
        if (normalize_cmd->parsed()) return cmd_normalize(na, out);
        if (cluster_cmd->parsed()) return cmd_cluster(ca, out, err);
        if (validate_cmd->parsed()) return cmd_validate(va, out);
        if (grid_cmd->parsed()) return cmd_grid(ga, out);
        if (heatmap_cmd->parsed()) return cmd_heatmap(ha, out);
    } catch (const ConfigError& e) {
        return report_error(err, json_diag, kUsageError, "usage", e.what());
    } catch (const NumericalError& e) {
        return report_error(err, json_diag, kNumericalError, "numerical", e.what());
    } catch (const DataError& e) {
        return report_error(err, json_diag, kDataError, "data", e.what());
    } catch (const std::exception& e) {
        return report_error(err, json_diag, kDataError, "data", e.what());
    }
    return kUsageError;
}

}  // namespace pfcm::cli
