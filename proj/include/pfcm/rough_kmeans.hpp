#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pfcm/expression.hpp"
#include "pfcm/kmeans.hpp"
#include "pfcm/matrix.hpp"

namespace pfcm {

struct RoughConfig {
    std::size_t k = 2;
    double zeta = 1.3;     ///< distance-ratio threshold, >= 1
    double w_lower = 0.7;  ///< weight of the lower approximation, in (0, 1]
    std::uint64_t seed = 0;
    std::size_t max_iter = 300;
    double eps = 1e-9;
    CentroidInit init = CentroidInit::uniform;
    std::optional<Matrix> initial_centroids;
};

/// Lower and upper approximations per cluster. Index sets are sorted.
struct RoughPartition {
    std::vector<std::vector<std::size_t>> lower;
    std::vector<std::vector<std::size_t>> upper;
    Matrix centroids;
    std::size_t iterations = 0;
    bool converged = false;

    std::size_t k() const noexcept { return centroids.rows(); }
};

/// Empty if the structural invariants hold for `n_genes` genes, otherwise a
/// description of the first violation found.
std::optional<std::string> check_rough_structure(const RoughPartition& p, std::size_t n_genes);

using RoughObserver = std::function<void(const RoughPartition&)>;

/// Rough K-Means with ratio-based upper approximation membership.
///
/// A gene always enters the upper set of its nearest centroid, and also the
/// upper set of every centroid l with d(x, w_l) / d(x, w_nearest) <= zeta.
/// Genes in exactly one upper set form that cluster's lower set. Centroids
/// blend the lower mean and the boundary mean with weight w_lower. The
/// observer, if given, sees the partition after every membership pass.
RoughPartition rough_kmeans(const Matrix& x, const RoughConfig& cfg,
                            const RoughObserver& observer = {});
RoughPartition rough_kmeans(const ExpressionMatrix& m, const RoughConfig& cfg,
                            const RoughObserver& observer = {});

}  // namespace pfcm
