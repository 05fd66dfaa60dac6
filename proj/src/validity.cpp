#include "pfcm/validity.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "pfcm/error.hpp"

namespace pfcm {

Algorithm parse_algorithm(std::string_view name) {
    if (name == "kmeans" || name == "k-means") return Algorithm::kmeans;
    if (name == "rough_kmeans" || name == "rough" || name == "rough-kmeans") return Algorithm::rough_kmeans;
    if (name == "fcm") return Algorithm::fcm;
    if (name == "pfcm") return Algorithm::pfcm;
    throw ConfigError("unknown algorithm '" + std::string(name) + "' (expected kmeans, rough_kmeans, fcm or pfcm)");
}

std::string_view algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::kmeans: return "kmeans";
        case Algorithm::rough_kmeans: return "rough_kmeans";
        case Algorithm::fcm: return "fcm";
        case Algorithm::pfcm: return "pfcm";
    }
    return "kmeans";
}

Matrix unified_memberships(const HardPartition& p) {
    Matrix u(p.assignments.size(), p.k(), 0.0);
    for (std::size_t i = 0; i < p.assignments.size(); ++i) u(i, p.assignments[i]) = 1.0;
    return u;
}

Matrix unified_memberships(const FuzzyPartition& p) { return p.memberships; }

Matrix unified_memberships(const RoughPartition& p, std::size_t n_genes) {
    const std::size_t k = p.upper.size();
    Matrix u(n_genes, k, 0.0);
    std::vector<std::size_t> count(n_genes, 0);
    for (const auto& up : p.upper)
        for (auto g : up) ++count.at(g);
    for (std::size_t j = 0; j < k; ++j)
        for (auto g : p.upper[j]) u(g, j) = 1.0 / static_cast<double>(count[g]);
    return u;
}

namespace {

void check_shapes(const Matrix& x, const Matrix& u, const Matrix& w) {
    if (u.rows() != x.rows())
        throw ConfigError("validity: membership rows (" + std::to_string(u.rows()) + ") != data rows (" +
                          std::to_string(x.rows()) + ")");
    if (u.cols() != w.rows())
        throw ConfigError("validity: membership columns (" + std::to_string(u.cols()) + ") != centroid count (" +
                          std::to_string(w.rows()) + ")");
    if (w.cols() != x.cols())
        throw ConfigError("validity: centroid dimension (" + std::to_string(w.cols()) + ") != sample count (" +
                          std::to_string(x.cols()) + ")");
    if (x.rows() == 0 || x.cols() == 0) throw ConfigError("validity: empty data");
}

template <class Residual>
double weighted_residual(const Matrix& x, const Matrix& u, const Matrix& w, double exponent, Residual residual) {
    double total = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) {
        for (std::size_t j = 0; j < w.rows(); ++j) {
            const double uij = u(i, j);
            if (uij == 0.0) continue;
            total += std::pow(uij, exponent) * residual(x.row(i), w.row(j));
        }
    }
    return total;
}

}  // namespace

double rmse(const Matrix& x, const Matrix& u, const Matrix& w, double m) {
    check_shapes(x, u, w);
    const double s = weighted_residual(x, u, w, m, squared_distance);
    return std::sqrt(s / static_cast<double>(x.rows() * x.cols()));
}

double mae(const Matrix& x, const Matrix& u, const Matrix& w, double m) {
    check_shapes(x, u, w);
    const double s = weighted_residual(x, u, w, m, manhattan_distance);
    return s / static_cast<double>(x.rows() * x.cols());
}

double xie_beni(const Matrix& x, const Matrix& u, const Matrix& w) {
    check_shapes(x, u, w);
    if (w.rows() < 2) throw ConfigError("Xie-Beni index is undefined for fewer than 2 clusters");
    double separation = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < w.rows(); ++j)
        for (std::size_t l = j + 1; l < w.rows(); ++l)
            separation = std::min(separation, squared_distance(w.row(j), w.row(l)));
    if (separation <= 1e-12) return std::numeric_limits<double>::infinity();
    const double compactness = weighted_residual(x, u, w, 2.0, squared_distance);
    return compactness / (static_cast<double>(x.rows()) * separation);
}

ValidityReport evaluate(const Matrix& x, const Matrix& u, const Matrix& w, double m, Algorithm algorithm) {
    ValidityReport r;
    r.rmse = rmse(x, u, w, m);
    r.mae = mae(x, u, w, m);
    r.xie_beni = xie_beni(x, u, w);
    r.n_genes = x.rows();
    r.n_samples = x.cols();
    r.k = w.rows();
    r.algorithm = algorithm;
    return r;
}

}  // namespace pfcm
