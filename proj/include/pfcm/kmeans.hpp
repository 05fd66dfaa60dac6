#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "pfcm/expression.hpp"
#include "pfcm/matrix.hpp"

namespace pfcm {

enum class CentroidInit {
    uniform,         ///< k distinct rows sampled uniformly without replacement
    farthest_point,  ///< first row sampled, then greedily the row farthest from all chosen
};

CentroidInit parse_centroid_init(std::string_view name);
std::string_view centroid_init_name(CentroidInit init);

/// k starting centroids drawn from the rows of `x`. Deterministic given seed.
Matrix initial_centroids(const Matrix& x, std::size_t k, std::uint64_t seed,
                         CentroidInit init = CentroidInit::uniform);

struct KMeansConfig {
    std::size_t k = 2;
    std::uint64_t seed = 0;
    std::size_t max_iter = 300;
    double eps = 1e-9;
    CentroidInit init = CentroidInit::uniform;
    /// Overrides the seeded initializer when set (k x n_s).
    std::optional<Matrix> initial_centroids;
};

struct HardPartition {
    std::vector<std::size_t> assignments;  ///< cluster of each gene, in [0, k)
    Matrix centroids;                      ///< k x n_s
    double sse = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    /// SSE after the initial assignment and after each iteration.
    std::vector<double> sse_trace;

    std::size_t k() const noexcept { return centroids.rows(); }
};

/// Lloyd iterations: nearest-centroid assignment, then centroid means.
/// Stops when assignments are stable, the largest centroid move is below eps,
/// or after max_iter iterations. An empty cluster takes the point that is
/// farthest from its own centroid.
HardPartition kmeans(const Matrix& x, const KMeansConfig& cfg);
HardPartition kmeans(const ExpressionMatrix& m, const KMeansConfig& cfg);

/// Sum of squared distances of each row to its assigned centroid.
double sum_squared_error(const Matrix& x, std::span<const std::size_t> assignments,
                         const Matrix& centroids);

}  // namespace pfcm
