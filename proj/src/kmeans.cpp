#include "pfcm/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pfcm/error.hpp"
#include "pfcm/rng.hpp"

namespace pfcm {

CentroidInit parse_centroid_init(std::string_view name) {
    if (name == "uniform") return CentroidInit::uniform;
    if (name == "farthest" || name == "farthest_point") return CentroidInit::farthest_point;
    throw ConfigError("unknown initializer '" + std::string(name) + "' (expected uniform or farthest)");
}

std::string_view centroid_init_name(CentroidInit init) {
    return init == CentroidInit::uniform ? "uniform" : "farthest_point";
}

Matrix initial_centroids(const Matrix& x, std::size_t k, std::uint64_t seed, CentroidInit init) {
    if (k < 1 || k > x.rows())
        throw ConfigError("cluster count k=" + std::to_string(k) + " must be in [1, " + std::to_string(x.rows()) + "]");
    Rng rng(seed);
    std::vector<std::size_t> chosen;
    if (init == CentroidInit::uniform) {
        chosen = rng.sample_without_replacement(x.rows(), k);
    } else {
        chosen.push_back(rng.below(x.rows()));
        std::vector<double> nearest(x.rows(), std::numeric_limits<double>::infinity());
        while (chosen.size() < k) {
            const auto last = x.row(chosen.back());
            std::size_t best = 0;
            double best_d = -1.0;
            for (std::size_t i = 0; i < x.rows(); ++i) {
                nearest[i] = std::min(nearest[i], squared_distance(x.row(i), last));
                if (nearest[i] > best_d) {
                    best_d = nearest[i];
                    best = i;
                }
            }
            chosen.push_back(best);
        }
    }
    return x.select_rows(chosen);
}

double sum_squared_error(const Matrix& x, std::span<const std::size_t> assignments, const Matrix& centroids) {
    double sse = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) sse += squared_distance(x.row(i), centroids.row(assignments[i]));
    return sse;
}

namespace {

// Nearest centroid, lowest index on ties.
void assign(const Matrix& x, const Matrix& w, std::vector<std::size_t>& a) {
    for (std::size_t i = 0; i < x.rows(); ++i) {
        std::size_t best = 0;
        double best_d = squared_distance(x.row(i), w.row(0));
        for (std::size_t j = 1; j < w.rows(); ++j) {
            const double d = squared_distance(x.row(i), w.row(j));
            if (d < best_d) {
                best_d = d;
                best = j;
            }
        }
        a[i] = best;
    }
}

// Moves the point farthest from its own centroid into each empty cluster.
void repair_empty(const Matrix& x, Matrix& w, std::vector<std::size_t>& a) {
    const std::size_t k = w.rows();
    std::vector<std::size_t> counts(k, 0);
    for (auto c : a) ++counts[c];
    for (std::size_t j = 0; j < k; ++j) {
        if (counts[j] != 0) continue;
        std::size_t far = x.rows();
        double far_d = -1.0;
        for (std::size_t i = 0; i < x.rows(); ++i) {
            if (counts[a[i]] < 2) continue;
            const double d = squared_distance(x.row(i), w.row(a[i]));
            if (d > far_d) {
                far_d = d;
                far = i;
            }
        }
        if (far == x.rows()) throw NumericalError("k-means: cannot repair empty cluster " + std::to_string(j));
        --counts[a[far]];
        a[far] = j;
        counts[j] = 1;
        std::copy(x.row(far).begin(), x.row(far).end(), w.row(j).begin());
    }
}

Matrix cluster_means(const Matrix& x, const std::vector<std::size_t>& a, std::size_t k) {
    Matrix w(k, x.cols(), 0.0);
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        auto dst = w.row(a[i]);
        const auto src = x.row(i);
        for (std::size_t d = 0; d < x.cols(); ++d) dst[d] += src[d];
        ++counts[a[i]];
    }
    for (std::size_t j = 0; j < k; ++j)
        for (auto& v : w.row(j)) v /= static_cast<double>(counts[j]);
    return w;
}

}  // namespace

HardPartition kmeans(const Matrix& x, const KMeansConfig& cfg) {
    if (x.rows() == 0) throw DataError("k-means: empty data");
    if (cfg.k < 1 || cfg.k > x.rows())
        throw ConfigError("k-means: k=" + std::to_string(cfg.k) + " must be in [1, " + std::to_string(x.rows()) + "]");
    if (cfg.max_iter < 1) throw ConfigError("k-means: max_iter must be >= 1");
    if (!(cfg.eps > 0.0)) throw ConfigError("k-means: eps must be > 0");

    HardPartition p;
    Matrix w;
    if (cfg.initial_centroids) {
        if (cfg.initial_centroids->rows() != cfg.k || cfg.initial_centroids->cols() != x.cols())
            throw ConfigError("k-means: initial centroids must be k x n_samples");
        w = *cfg.initial_centroids;
    } else {
        w = initial_centroids(x, cfg.k, cfg.seed, cfg.init);
    }
    std::vector<std::size_t> a(x.rows());
    assign(x, w, a);
    repair_empty(x, w, a);
    p.sse_trace.push_back(sum_squared_error(x, a, w));

    std::vector<std::size_t> next(x.rows());
    for (std::size_t it = 1; it <= cfg.max_iter; ++it) {
        Matrix w_next = cluster_means(x, a, cfg.k);
        double movement = 0.0;
        for (std::size_t j = 0; j < cfg.k; ++j)
            movement = std::max(movement, std::sqrt(squared_distance(w.row(j), w_next.row(j))));
        assign(x, w_next, next);
        repair_empty(x, w_next, next);
        p.sse_trace.push_back(sum_squared_error(x, next, w_next));
        const bool stable = next == a;
        a.swap(next);
        w = std::move(w_next);
        p.iterations = it;
        if (stable || movement < cfg.eps) {
            p.converged = true;
            break;
        }
    }

    p.centroids = cluster_means(x, a, cfg.k);
    p.sse = sum_squared_error(x, a, p.centroids);
    p.assignments = std::move(a);
    return p;
}

HardPartition kmeans(const ExpressionMatrix& m, const KMeansConfig& cfg) { return kmeans(m.values(), cfg); }

}  // namespace pfcm
