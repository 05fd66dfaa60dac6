#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "pfcm/fuzzy.hpp"
#include "pfcm/kmeans.hpp"
#include "pfcm/matrix.hpp"
#include "pfcm/rough_kmeans.hpp"

namespace pfcm {

enum class Algorithm { kmeans, rough_kmeans, fcm, pfcm };

Algorithm parse_algorithm(std::string_view name);
std::string_view algorithm_name(Algorithm a);

struct ValidityReport {
    double rmse = 0.0;
    double mae = 0.0;
    double xie_beni = 0.0;  ///< +inf when two centroids coincide
    std::size_t n_genes = 0;
    std::size_t n_samples = 0;
    std::size_t k = 0;
    Algorithm algorithm = Algorithm::kmeans;
};

/// One row per gene, one column per cluster, rows summing to 1.
Matrix unified_memberships(const HardPartition& p);
Matrix unified_memberships(const FuzzyPartition& p);
/// Lower members get 1; boundary genes split 1 equally over their upper sets.
Matrix unified_memberships(const RoughPartition& p, std::size_t n_genes);

/// sqrt( sum_i sum_j u_ij^m ||x_i - w_j||^2 / (n_g n_s) )
double rmse(const Matrix& x, const Matrix& u, const Matrix& w, double m);

/// sum_i sum_j u_ij^m ||x_i - w_j||_1 / (n_g n_s)
double mae(const Matrix& x, const Matrix& u, const Matrix& w, double m);

/// sum_j sum_i u_ij^2 ||x_i - w_j||^2 / (n_g min_{j != l} ||w_j - w_l||^2).
/// Needs k >= 2 (ConfigError otherwise); returns +inf when the closest two
/// centroids are within 1e-12 of each other.
double xie_beni(const Matrix& x, const Matrix& u, const Matrix& w);

ValidityReport evaluate(const Matrix& x, const Matrix& u, const Matrix& w, double m,
                        Algorithm algorithm);

}  // namespace pfcm
