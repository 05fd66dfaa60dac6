#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "pfcm/expression.hpp"
#include "pfcm/matrix.hpp"

namespace pfcm {

/// Parameters shared by FCM and PFCM. FCM ignores `v`.
struct FuzzyConfig {
    std::size_t c = 2;
    double m = 2.0;  ///< fuzzifier, strictly greater than 1
    double v = 1.0;  ///< penalty weight, >= 0
    double eps = 1e-5;
    std::size_t max_iter = 300;
    std::uint64_t seed = 0;
    double alpha_floor = 1e-12;

    /// Throws ConfigError describing the first invalid field.
    void validate() const;
};

struct FuzzyPartition {
    Matrix memberships;  ///< n_g x c, rows sum to 1
    Matrix centroids;    ///< c x n_s
    /// Cluster proportions; absent for plain FCM.
    std::optional<std::vector<double>> alpha;
    /// J after each membership update.
    std::vector<double> objective_trace;
    /// J at the returned (memberships, centroids, alpha).
    double objective = 0.0;
    std::size_t iterations = 0;
    bool converged = false;

    std::size_t c() const noexcept { return centroids.rows(); }
};

/// State handed to an observer after each membership update.
struct FuzzyIterate {
    std::size_t iteration;
    const Matrix& memberships;
    const Matrix& centroids;
    std::span<const double> alpha;
    double objective;
    double delta;
};

using FuzzyObserver = std::function<void(const FuzzyIterate&)>;

/// alpha_j = sum_i u_ij^m / sum_l sum_i u_il^m.
/// Components below alpha_floor are pinned to it and the others scaled down;
/// the largest component absorbs rounding so the sum is exactly 1.
std::vector<double> compute_alpha(const Matrix& u, double m, double alpha_floor = 1e-12);

/// w_j = sum_i u_ij^m x_i / sum_i u_ij^m. Throws NumericalError naming the
/// cluster when its membership mass is zero.
Matrix compute_centroids(const Matrix& u, double m, const Matrix& x);

/// Squared Euclidean distances, n_g x c.
Matrix squared_distances(const Matrix& x, const Matrix& centroids);

/// u_ij = 1 / sum_l (D_ij / D_il)^(1/(m-1)),  D_ij = ||x_i - w_j||^2 - v ln alpha_j.
/// A row with some D_ij <= 1e-12 gets full membership in its minimal-D
/// cluster, split equally across exact ties.
Matrix update_memberships_pfcm(const Matrix& x, const Matrix& centroids,
                               std::span<const double> alpha, const FuzzyConfig& cfg);

/// J = 1/2 sum u^m d^2 - 1/2 v sum u^m ln alpha. An empty alpha means v = 0.
double pfcm_objective(const Matrix& x, const Matrix& u, const Matrix& centroids,
                      std::span<const double> alpha, double m, double v);

/// Seeded row-stochastic starting partition: uniform draws, row-normalized.
Matrix initial_memberships(std::size_t n, std::size_t c, std::uint64_t seed);

/// Penalized fuzzy c-means. Each iteration computes alpha and the centroids
/// from the current memberships, then new memberships from both, and stops
/// once the largest membership change is <= eps. The final centroids and
/// alpha are recomputed from the returned memberships.
FuzzyPartition pfcm(const Matrix& x, const FuzzyConfig& cfg, const FuzzyObserver& observer = {});
FuzzyPartition pfcm(const Matrix& x, const FuzzyConfig& cfg, const Matrix& initial_u,
                    const FuzzyObserver& observer = {});
FuzzyPartition pfcm(const ExpressionMatrix& m, const FuzzyConfig& cfg);

/// Fuzzy c-means: pfcm with v = 0; alpha is dropped from the result.
FuzzyPartition fcm(const Matrix& x, const FuzzyConfig& cfg, const FuzzyObserver& observer = {});
FuzzyPartition fcm(const Matrix& x, const FuzzyConfig& cfg, const Matrix& initial_u,
                   const FuzzyObserver& observer = {});
FuzzyPartition fcm(const ExpressionMatrix& m, const FuzzyConfig& cfg);

}  // namespace pfcm
