#include "pfcm/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <thread>
#include <variant>

#include "pfcm/error.hpp"
#include "pfcm/rng.hpp"

#include <json.hpp>

namespace pfcm {

SubsetPolicy parse_subset_policy(std::string_view name) {
    if (name == "first_n") return SubsetPolicy::first_n;
    if (name == "variance_top_n") return SubsetPolicy::variance_top_n;
    if (name == "seeded_random") return SubsetPolicy::seeded_random;
    throw ConfigError("unknown subset policy '" + std::string(name) +
                      "' (expected first_n, variance_top_n or seeded_random)");
}

std::string_view subset_policy_name(SubsetPolicy p) {
    switch (p) {
        case SubsetPolicy::first_n: return "first_n";
        case SubsetPolicy::variance_top_n: return "variance_top_n";
        case SubsetPolicy::seeded_random: return "seeded_random";
    }
    return "first_n";
}

ExpressionMatrix subset_genes(const ExpressionMatrix& m, std::size_t size, SubsetPolicy policy, std::uint64_t seed) {
    if (size < 1 || size > m.n_genes())
        throw ConfigError("subset size " + std::to_string(size) + " must be in [1, " + std::to_string(m.n_genes()) + "]");
    std::vector<std::size_t> idx;
    switch (policy) {
        case SubsetPolicy::first_n:
            idx.resize(size);
            std::iota(idx.begin(), idx.end(), std::size_t{0});
            break;
        case SubsetPolicy::variance_top_n: {
            std::vector<double> var(m.n_genes());
            for (std::size_t i = 0; i < m.n_genes(); ++i) var[i] = row_sample_variance(m.gene(i));
            idx.resize(m.n_genes());
            std::iota(idx.begin(), idx.end(), std::size_t{0});
            const auto& ids = m.gene_ids();
            std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(size), idx.end(),
                              [&](std::size_t a, std::size_t b) {
                                  if (var[a] != var[b]) return var[a] > var[b];
                                  return ids[a] < ids[b];
                              });
            idx.resize(size);
            std::sort(idx.begin(), idx.end());
            break;
        }
        case SubsetPolicy::seeded_random: {
            Rng rng(seed);
            idx = rng.sample_without_replacement(m.n_genes(), size);
            std::sort(idx.begin(), idx.end());
            break;
        }
    }
    return m.select_genes(idx);
}

ExperimentGrid table1_preset(std::size_t n_genes) {
    ExperimentGrid g;
    const std::size_t full = 7129;
    for (std::size_t s : {std::size_t{7129}, std::size_t{5000}, std::size_t{3000}, std::size_t{1000}}) {
        std::size_t size = s;
        if (n_genes < full)
            size = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(
                                                static_cast<double>(s) * static_cast<double>(n_genes) / full)));
        g.subset_sizes.push_back(size);
    }
    g.ks = {7, 5, 3, 7};
    g.pairing = GridPairing::zipped;
    g.algorithms = {Algorithm::kmeans, Algorithm::rough_kmeans, Algorithm::fcm, Algorithm::pfcm};
    g.seeds = {1};
    return g;
}

void validate_grid(const ExperimentGrid& g, std::size_t n_genes) {
    if (g.subset_sizes.empty()) throw ConfigError("grid: no subset sizes");
    if (g.ks.empty()) throw ConfigError("grid: no cluster counts");
    if (g.algorithms.empty()) throw ConfigError("grid: no algorithms");
    if (g.seeds.empty()) throw ConfigError("grid: no seeds");
    if (g.threads < 1) throw ConfigError("grid: threads must be >= 1");
    for (auto s : g.subset_sizes)
        if (s < 1 || s > n_genes)
            throw ConfigError("grid: subset size " + std::to_string(s) + " must be in [1, " + std::to_string(n_genes) +
                              "]");
    for (auto k : g.ks)
        if (k < 1) throw ConfigError("grid: cluster counts must be >= 1");
    if (g.pairing == GridPairing::zipped && g.subset_sizes.size() != g.ks.size())
        throw ConfigError("grid: zipped pairing needs as many sizes as ks");
}

namespace {

struct Cell {
    std::size_t size_index;
    std::size_t k;
    Algorithm algorithm;
    std::uint64_t seed;
};

void run_cell(const ExpressionMatrix& data, const ExperimentGrid& g, const Cell& cell, ExperimentRow& row) {
    const Matrix& x = data.values();
    Matrix u, w;
    double m_validity = 1.0;
    switch (cell.algorithm) {
        case Algorithm::kmeans: {
            KMeansConfig cfg = g.kmeans;
            cfg.k = cell.k;
            cfg.seed = cell.seed;
            auto p = kmeans(x, cfg);
            u = unified_memberships(p);
            w = p.centroids;
            row.iterations = p.iterations;
            row.converged = p.converged;
            row.objective = p.sse;
            row.trace = p.sse_trace;
            row.eps = cfg.eps;
            row.max_iter = cfg.max_iter;
            break;
        }
        case Algorithm::rough_kmeans: {
            RoughConfig cfg = g.rough;
            cfg.k = cell.k;
            cfg.seed = cell.seed;
            auto p = rough_kmeans(x, cfg);
            u = unified_memberships(p, x.rows());
            w = p.centroids;
            row.iterations = p.iterations;
            row.converged = p.converged;
            row.zeta = cfg.zeta;
            row.w_lower = cfg.w_lower;
            row.eps = cfg.eps;
            row.max_iter = cfg.max_iter;
            break;
        }
        case Algorithm::fcm:
        case Algorithm::pfcm: {
            FuzzyConfig cfg = cell.algorithm == Algorithm::fcm ? g.fcm : g.pfcm;
            cfg.c = cell.k;
            cfg.seed = cell.seed;
            auto p = cell.algorithm == Algorithm::fcm ? fcm(x, cfg) : pfcm(x, cfg);
            u = p.memberships;
            w = p.centroids;
            m_validity = cfg.m;
            row.iterations = p.iterations;
            row.converged = p.converged;
            row.objective = p.objective;
            row.trace = p.objective_trace;
            row.m = cfg.m;
            row.v = cell.algorithm == Algorithm::fcm ? 0.0 : cfg.v;
            row.eps = cfg.eps;
            row.max_iter = cfg.max_iter;
            break;
        }
    }
    row.validity = evaluate(x, u, w, m_validity, cell.algorithm);
    row.ok = true;
}

struct Stats {
    double best, mean, sd;
};

Stats stats_of(const std::vector<double>& v) {
    if (v.empty()) return {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN(),
                           std::numeric_limits<double>::quiet_NaN()};
    double best = v[0], sum = 0.0;
    for (double x : v) {
        best = std::min(best, x);
        sum += x;
    }
    const double mean = sum / static_cast<double>(v.size());
    double ss = 0.0;
    if (v.size() > 1 && std::isfinite(mean))
        for (double x : v) ss += (x - mean) * (x - mean);
    const double sd = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
    return {best, mean, sd};
}

std::vector<CellSummary> summarize(const std::vector<ExperimentRow>& rows) {
    std::vector<CellSummary> out;
    std::size_t i = 0;
    while (i < rows.size()) {
        std::size_t j = i;
        std::vector<double> r, a, x;
        CellSummary s;
        s.size = rows[i].size;
        s.k = rows[i].k;
        s.algorithm = rows[i].algorithm;
        while (j < rows.size() && rows[j].size == s.size && rows[j].k == s.k && rows[j].algorithm == s.algorithm) {
            if (rows[j].ok) {
                ++s.runs_ok;
                r.push_back(rows[j].validity.rmse);
                a.push_back(rows[j].validity.mae);
                x.push_back(rows[j].validity.xie_beni);
            } else {
                ++s.runs_failed;
            }
            ++j;
        }
        const auto sr = stats_of(r), sa = stats_of(a), sx = stats_of(x);
        s.best_rmse = sr.best, s.mean_rmse = sr.mean, s.sd_rmse = sr.sd;
        s.best_mae = sa.best, s.mean_mae = sa.mean, s.sd_mae = sa.sd;
        s.best_xb = sx.best, s.mean_xb = sx.mean, s.sd_xb = sx.sd;
        out.push_back(s);
        i = j;
    }
    return out;
}

}  // namespace

ExperimentResult run_grid(const ExpressionMatrix& m, const ExperimentGrid& g) {
    validate_grid(g, m.n_genes());

    std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (size index, k)
    if (g.pairing == GridPairing::zipped) {
        for (std::size_t i = 0; i < g.subset_sizes.size(); ++i) pairs.emplace_back(i, g.ks[i]);
    } else {
        for (std::size_t i = 0; i < g.subset_sizes.size(); ++i)
            for (auto k : g.ks) pairs.emplace_back(i, k);
    }
    std::vector<Cell> cells;
    for (auto [si, k] : pairs)
        for (auto a : g.algorithms)
            for (auto seed : g.seeds) cells.push_back({si, k, a, seed});

    // Subset then normalize, once per size.
    std::vector<std::variant<ExpressionMatrix, std::string>> prepared;
    prepared.reserve(g.subset_sizes.size());
    for (auto size : g.subset_sizes) {
        try {
            prepared.emplace_back(normalize(subset_genes(m, size, g.subset_policy, g.subset_seed), g.normalization,
                                            NormalizeOptions{g.drop_degenerate}));
        } catch (const std::exception& e) {
            prepared.emplace_back(std::string(e.what()));
        }
    }

    ExperimentResult result;
    result.rows.resize(cells.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t c = next++; c < cells.size(); c = next++) {
            const Cell& cell = cells[c];
            ExperimentRow& row = result.rows[c];
            row.size = g.subset_sizes[cell.size_index];
            row.k = cell.k;
            row.algorithm = cell.algorithm;
            row.seed = cell.seed;
            row.normalization = g.normalization;
            row.subset_policy = g.subset_policy;
            const auto t0 = std::chrono::steady_clock::now();
            try {
                const auto& prep = prepared[cell.size_index];
                if (const auto* err = std::get_if<std::string>(&prep)) throw DataError(*err);
                run_cell(std::get<ExpressionMatrix>(prep), g, cell, row);
            } catch (const std::exception& e) {
                row.ok = false;
                row.error = e.what();
            }
            row.runtime_seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        }
    };
    const std::size_t n_threads = std::min(g.threads, std::max<std::size_t>(1, cells.size()));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    }
    result.summaries = summarize(result.rows);
    return result;
}

namespace {

std::string num(double v) { return format_double(v); }

void write_row_csv(std::ostream& out, const ExperimentRow& r, ReportOptions opts) {
    out << r.size << ',' << r.k << ',' << algorithm_name(r.algorithm) << ',' << r.seed << ','
        << normalization_name(r.normalization) << ',' << subset_policy_name(r.subset_policy) << ','
        << (r.ok ? "ok" : "error") << ',';
    std::string err = r.error;
    for (auto& ch : err)
        if (ch == '\n' || ch == '\r') ch = ' ';
    if (err.find_first_of(",\"") != std::string::npos) {
        std::string q = "\"";
        for (char ch : err) {
            if (ch == '"') q.push_back('"');
            q.push_back(ch);
        }
        err = q + "\"";
    }
    out << err << ',';
    if (r.ok) {
        out << num(r.validity.rmse) << ',' << num(r.validity.mae) << ',' << num(r.validity.xie_beni) << ','
            << r.iterations << ',' << (r.converged ? "true" : "false") << ',' << num(r.objective);
    } else {
        out << ",,,,,";
    }
    out << ',' << num(r.m) << ',' << num(r.v) << ',' << num(r.zeta) << ',' << num(r.w_lower) << ',' << num(r.eps)
        << ',' << r.max_iter;
    if (opts.include_runtime) out << ',' << num(r.runtime_seconds);
    out << '\n';
}

nlohmann::json json_number(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return nullptr;
    return v > 0 ? "inf" : "-inf";
}

}  // namespace

void write_report_csv(std::ostream& out, const ExperimentResult& r, ReportOptions opts) {
    out << "size,k,algorithm,seed,normalization,subset_policy,status,error,rmse,mae,xie_beni,iterations,converged,"
           "objective,m,v,zeta,w_lower,eps,max_iter";
    if (opts.include_runtime) out << ",runtime_seconds";
    out << '\n';
    for (const auto& row : r.rows) write_row_csv(out, row, opts);
}

void write_summary_csv(std::ostream& out, const ExperimentResult& r) {
    out << "size,k,algorithm,runs_ok,runs_failed,best_rmse,mean_rmse,sd_rmse,best_mae,mean_mae,sd_mae,best_xie_beni,"
           "mean_xie_beni,sd_xie_beni\n";
    for (const auto& s : r.summaries) {
        out << s.size << ',' << s.k << ',' << algorithm_name(s.algorithm) << ',' << s.runs_ok << ',' << s.runs_failed;
        for (double v : {s.best_rmse, s.mean_rmse, s.sd_rmse, s.best_mae, s.mean_mae, s.sd_mae, s.best_xb, s.mean_xb,
                         s.sd_xb})
            out << ',' << (std::isnan(v) ? std::string() : num(v));
        out << '\n';
    }
}

void write_report_json(std::ostream& out, const ExperimentGrid& g, const ExperimentResult& r, ReportOptions opts) {
    using nlohmann::json;
    json grid;
    grid["subset_sizes"] = g.subset_sizes;
    grid["ks"] = g.ks;
    grid["pairing"] = g.pairing == GridPairing::zipped ? "zipped" : "cross";
    json algs = json::array();
    for (auto a : g.algorithms) algs.push_back(algorithm_name(a));
    grid["algorithms"] = algs;
    grid["normalization"] = normalization_name(g.normalization);
    grid["drop_degenerate"] = g.drop_degenerate;
    grid["subset_policy"] = subset_policy_name(g.subset_policy);
    grid["subset_seed"] = g.subset_seed;
    grid["seeds"] = g.seeds;
    grid["kmeans"] = {{"eps", g.kmeans.eps}, {"max_iter", g.kmeans.max_iter},
                      {"init", centroid_init_name(g.kmeans.init)}};
    grid["rough_kmeans"] = {{"zeta", g.rough.zeta},
                            {"w_lower", g.rough.w_lower},
                            {"eps", g.rough.eps},
                            {"max_iter", g.rough.max_iter},
                            {"init", centroid_init_name(g.rough.init)}};
    auto fuzzy_json = [](const FuzzyConfig& c, bool with_v) {
        json j = {{"m", c.m}, {"eps", c.eps}, {"max_iter", c.max_iter}, {"alpha_floor", c.alpha_floor}};
        if (with_v) j["v"] = c.v;
        return j;
    };
    grid["fcm"] = fuzzy_json(g.fcm, false);
    grid["pfcm"] = fuzzy_json(g.pfcm, true);

    json rows = json::array();
    for (const auto& row : r.rows) {
        json j = {{"size", row.size},
                  {"k", row.k},
                  {"algorithm", algorithm_name(row.algorithm)},
                  {"seed", row.seed},
                  {"normalization", normalization_name(row.normalization)},
                  {"subset_policy", subset_policy_name(row.subset_policy)},
                  {"status", row.ok ? "ok" : "error"}};
        if (row.ok) {
            j["rmse"] = json_number(row.validity.rmse);
            j["mae"] = json_number(row.validity.mae);
            j["xie_beni"] = json_number(row.validity.xie_beni);
            j["iterations"] = row.iterations;
            j["converged"] = row.converged;
            j["objective"] = json_number(row.objective);
            j["trace"] = row.trace;
        } else {
            j["error"] = row.error;
        }
        if (opts.include_runtime) j["runtime_seconds"] = row.runtime_seconds;
        rows.push_back(std::move(j));
    }

    json summaries = json::array();
    for (const auto& s : r.summaries) {
        summaries.push_back({{"size", s.size},
                             {"k", s.k},
                             {"algorithm", algorithm_name(s.algorithm)},
                             {"runs_ok", s.runs_ok},
                             {"runs_failed", s.runs_failed},
                             {"rmse", {{"best", json_number(s.best_rmse)}, {"mean", json_number(s.mean_rmse)}, {"sd", json_number(s.sd_rmse)}}},
                             {"mae", {{"best", json_number(s.best_mae)}, {"mean", json_number(s.mean_mae)}, {"sd", json_number(s.sd_mae)}}},
                             {"xie_beni", {{"best", json_number(s.best_xb)}, {"mean", json_number(s.mean_xb)}, {"sd", json_number(s.sd_xb)}}}});
    }
    json doc = {{"grid", grid}, {"rows", rows}, {"summaries", summaries}};
    out << doc.dump(2) << '\n';
}

SyntheticData generate_synthetic(const std::vector<SyntheticCluster>& clusters, std::size_t noise_genes,
                                 std::uint64_t seed) {
    if (clusters.empty()) throw ConfigError("synthetic: at least one cluster is required");
    const std::size_t dim = clusters[0].center.size();
    if (dim == 0) throw ConfigError("synthetic: cluster centers must be non-empty");
    double max_spread = 0.0;
    std::vector<double> lo(clusters[0].center), hi(clusters[0].center);
    for (std::size_t c = 0; c < clusters.size(); ++c) {
        const auto& cl = clusters[c];
        if (cl.center.size() != dim) throw ConfigError("synthetic: centers have different dimensions");
        if (cl.count < 1) throw ConfigError("synthetic: cluster " + std::to_string(c) + " has a nonpositive count");
        if (!(cl.spread >= 0.0) || !std::isfinite(cl.spread))
            throw ConfigError("synthetic: cluster " + std::to_string(c) + " has a negative or non-finite spread");
        for (auto v : cl.center)
            if (!std::isfinite(v)) throw ConfigError("synthetic: non-finite center coordinate");
        max_spread = std::max(max_spread, cl.spread);
        for (std::size_t d = 0; d < dim; ++d) {
            lo[d] = std::min(lo[d], cl.center[d]);
            hi[d] = std::max(hi[d], cl.center[d]);
        }
    }
    for (std::size_t d = 0; d < dim; ++d) {
        lo[d] -= 3.0 * max_spread;
        hi[d] += 3.0 * max_spread;
    }

    Rng rng(seed);
    std::vector<double> values;
    std::vector<int> labels;
    for (std::size_t c = 0; c < clusters.size(); ++c) {
        for (std::size_t n = 0; n < clusters[c].count; ++n) {
            for (std::size_t d = 0; d < dim; ++d) values.push_back(clusters[c].center[d] + clusters[c].spread * rng.normal());
            labels.push_back(static_cast<int>(c));
        }
    }
    for (std::size_t n = 0; n < noise_genes; ++n) {
        for (std::size_t d = 0; d < dim; ++d) values.push_back(lo[d] + (hi[d] - lo[d]) * rng.uniform());
        labels.push_back(-1);
    }
    const std::size_t rows = labels.size();
    std::vector<std::string> genes, samples;
    for (std::size_t i = 0; i < rows; ++i) genes.push_back("gene_" + std::to_string(i + 1));
    for (std::size_t d = 0; d < dim; ++d) samples.push_back("sample_" + std::to_string(d + 1));
    return SyntheticData{ExpressionMatrix(std::move(genes), std::move(samples), Matrix(rows, dim, std::move(values))),
                         std::move(labels)};
}

double adjusted_rand_index(std::span<const int> a, std::span<const int> b) {
    if (a.size() != b.size()) throw ConfigError("adjusted_rand_index: labelings differ in length");
    const std::size_t n = a.size();
    if (n < 2) return 1.0;
    std::map<int, std::size_t> ai, bi;
    for (int v : a) ai.emplace(v, ai.size());
    for (int v : b) bi.emplace(v, bi.size());
    std::vector<double> table(ai.size() * bi.size(), 0.0), rows(ai.size(), 0.0), cols(bi.size(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto r = ai[a[i]], c = bi[b[i]];
        table[r * bi.size() + c] += 1.0;
        rows[r] += 1.0;
        cols[c] += 1.0;
    }
    auto choose2 = [](double x) { return x * (x - 1.0) / 2.0; };
    double index = 0.0, sum_rows = 0.0, sum_cols = 0.0;
    for (double t : table) index += choose2(t);
    for (double r : rows) sum_rows += choose2(r);
    for (double c : cols) sum_cols += choose2(c);
    const double expected = sum_rows * sum_cols / choose2(static_cast<double>(n));
    const double max_index = 0.5 * (sum_rows + sum_cols);
    if (max_index == expected) return 1.0;
    return (index - expected) / (max_index - expected);
}

}  // namespace pfcm
