#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pfcm/expression.hpp"
#include "pfcm/fuzzy.hpp"
#include "pfcm/kmeans.hpp"
#include "pfcm/normalize.hpp"
#include "pfcm/rough_kmeans.hpp"
#include "pfcm/validity.hpp"

namespace pfcm {

enum class SubsetPolicy { first_n, variance_top_n, seeded_random };

SubsetPolicy parse_subset_policy(std::string_view name);
std::string_view subset_policy_name(SubsetPolicy p);

/// Exactly `size` genes, kept in file order. variance_top_n keeps the genes
/// with the largest sample variance (ties broken by gene id).
ExpressionMatrix subset_genes(const ExpressionMatrix& m, std::size_t size, SubsetPolicy policy,
                              std::uint64_t seed = 0);

/// How sizes and ks combine into cells.
enum class GridPairing {
    cross,   ///< every size with every k
    zipped,  ///< sizes[i] with ks[i]
};

struct ExperimentGrid {
    std::vector<std::size_t> subset_sizes;
    std::vector<std::size_t> ks;
    std::vector<Algorithm> algorithms;
    Normalization normalization = Normalization::zscore;
    bool drop_degenerate = false;
    SubsetPolicy subset_policy = SubsetPolicy::variance_top_n;
    std::uint64_t subset_seed = 0;  ///< used by seeded_random, shared by every cell
    GridPairing pairing = GridPairing::cross;
    std::vector<std::uint64_t> seeds;

    // Per-algorithm parameters. k / c and seed come from the cell.
    KMeansConfig kmeans;
    RoughConfig rough;
    FuzzyConfig fcm;
    FuzzyConfig pfcm;

    std::size_t threads = 1;
};

/// The four-cell comparison grid, (k, size) pairs (7, 7129),
/// (5, 5000), (3, 3000), (7, 1000), run over all four algorithms. When the
/// matrix has fewer than 7129 genes the sizes are scaled by n_g / 7129.
ExperimentGrid table1_preset(std::size_t n_genes);

/// Throws ConfigError if the grid is unusable against an n_genes matrix.
void validate_grid(const ExperimentGrid& g, std::size_t n_genes);

struct ExperimentRow {
    std::size_t size = 0;
    std::size_t k = 0;
    Algorithm algorithm = Algorithm::kmeans;
    std::uint64_t seed = 0;
    Normalization normalization = Normalization::zscore;
    SubsetPolicy subset_policy = SubsetPolicy::variance_top_n;

    bool ok = false;
    std::string error;  ///< empty when ok

    ValidityReport validity;
    std::size_t iterations = 0;
    bool converged = false;
    double objective = 0.0;  ///< SSE for K-Means, J for the fuzzy methods, 0 for rough
    std::vector<double> trace;
    double runtime_seconds = 0.0;

    // config echo
    double m = 1.0;
    double v = 0.0;
    double zeta = 0.0;
    double w_lower = 0.0;
    double eps = 0.0;
    std::size_t max_iter = 0;
};

/// Per (size, k, algorithm) aggregate across seeds.
struct CellSummary {
    std::size_t size = 0;
    std::size_t k = 0;
    Algorithm algorithm = Algorithm::kmeans;
    std::size_t runs_ok = 0;
    std::size_t runs_failed = 0;
    double best_rmse = 0.0, mean_rmse = 0.0, sd_rmse = 0.0;
    double best_mae = 0.0, mean_mae = 0.0, sd_mae = 0.0;
    double best_xb = 0.0, mean_xb = 0.0, sd_xb = 0.0;
};

struct ExperimentResult {
    std::vector<ExperimentRow> rows;  ///< ordered by (size, k, algorithm, seed) grid order
    std::vector<CellSummary> summaries;
};

/// Runs every cell; per-cell failures are captured in the row.
ExperimentResult run_grid(const ExpressionMatrix& m, const ExperimentGrid& g);

struct ReportOptions {
    bool include_runtime = false;  ///< runtime breaks byte-for-byte reproducibility
};

void write_report_csv(std::ostream& out, const ExperimentResult& r, ReportOptions opts = {});
void write_summary_csv(std::ostream& out, const ExperimentResult& r);
/// JSON bundle: grid echo, rows with traces, summaries.
void write_report_json(std::ostream& out, const ExperimentGrid& g, const ExperimentResult& r,
                       ReportOptions opts = {});

struct SyntheticCluster {
    std::vector<double> center;
    double spread = 0.0;  ///< isotropic standard deviation, >= 0
    std::size_t count = 1;
};

struct SyntheticData {
    ExpressionMatrix matrix;
    std::vector<int> labels;  ///< cluster index per row, -1 for noise rows
};

/// Gaussian bumps followed by uniform-noise rows drawn over the bounding box
/// of the centers widened by 3 spreads. Deterministic per seed.
SyntheticData generate_synthetic(const std::vector<SyntheticCluster>& clusters,
                                 std::size_t noise_genes, std::uint64_t seed);

/// Adjusted Rand index between two labelings of the same items.
double adjusted_rand_index(std::span<const int> a, std::span<const int> b);

}  // namespace pfcm
