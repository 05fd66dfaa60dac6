#include "pfcm/rough_kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pfcm/error.hpp"

namespace pfcm {

std::optional<std::string> check_rough_structure(const RoughPartition& p, std::size_t n_genes) {
    const std::size_t k = p.lower.size();
    if (p.upper.size() != k) return "lower and upper hold different cluster counts";
    std::vector<std::size_t> upper_count(n_genes, 0);
    std::vector<std::size_t> lower_count(n_genes, 0);
    for (std::size_t j = 0; j < k; ++j) {
        for (auto g : p.upper[j]) {
            if (g >= n_genes) return "upper set " + std::to_string(j) + " holds out-of-range gene " + std::to_string(g);
            ++upper_count[g];
        }
        for (auto g : p.lower[j]) {
            if (g >= n_genes) return "lower set " + std::to_string(j) + " holds out-of-range gene " + std::to_string(g);
            ++lower_count[g];
            if (!std::binary_search(p.upper[j].begin(), p.upper[j].end(), g))
                return "gene " + std::to_string(g) + " is in lower " + std::to_string(j) + " but not in upper";
        }
    }
    for (std::size_t g = 0; g < n_genes; ++g) {
        if (upper_count[g] == 0) return "gene " + std::to_string(g) + " is in no upper set";
        if (lower_count[g] > 1) return "gene " + std::to_string(g) + " is in several lower sets";
        if (upper_count[g] == 1 && lower_count[g] != 1)
            return "gene " + std::to_string(g) + " is in a single upper set but no lower set";
        if (upper_count[g] >= 2 && lower_count[g] != 0)
            return "gene " + std::to_string(g) + " is in several upper sets and a lower set";
    }
    return std::nullopt;
}

namespace {

void assign_rough(const Matrix& x, const Matrix& w, double zeta, RoughPartition& p) {
    const std::size_t k = w.rows();
    for (auto& s : p.lower) s.clear();
    for (auto& s : p.upper) s.clear();
    std::vector<double> d(k);
    std::vector<std::size_t> close;
    for (std::size_t i = 0; i < x.rows(); ++i) {
        std::size_t nearest = 0;
        for (std::size_t j = 0; j < k; ++j) {
            d[j] = std::sqrt(squared_distance(x.row(i), w.row(j)));
            if (d[j] < d[nearest]) nearest = j;
        }
        close.clear();
        if (d[nearest] == 0.0) {
            close.push_back(nearest);
        } else {
            for (std::size_t j = 0; j < k; ++j)
                if (j == nearest || d[j] / d[nearest] <= zeta) close.push_back(j);
        }
        for (auto j : close) p.upper[j].push_back(i);
        if (close.size() == 1) p.lower[close[0]].push_back(i);
    }
}

void mean_of(const Matrix& x, std::span<const std::size_t> idx, std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    for (auto i : idx) {
        const auto r = x.row(i);
        for (std::size_t d = 0; d < out.size(); ++d) out[d] += r[d];
    }
    for (auto& v : out) v /= static_cast<double>(idx.size());
}

// Clusters with an empty upper set keep their previous centroid.
Matrix update_centroids(const Matrix& x, const RoughPartition& p, double w_lower, const Matrix& previous) {
    Matrix w = previous;
    std::vector<double> lower_mean(x.cols()), boundary_mean(x.cols());
    std::vector<std::size_t> boundary;
    for (std::size_t j = 0; j < p.k(); ++j) {
        const auto& lo = p.lower[j];
        const auto& up = p.upper[j];
        boundary.clear();
        std::set_difference(up.begin(), up.end(), lo.begin(), lo.end(), std::back_inserter(boundary));
        auto dst = w.row(j);
        if (lo.empty() && boundary.empty()) continue;
        if (boundary.empty()) {
            mean_of(x, lo, dst);
        } else if (lo.empty()) {
            mean_of(x, up, dst);
        } else {
            mean_of(x, lo, lower_mean);
            mean_of(x, boundary, boundary_mean);
            for (std::size_t d = 0; d < x.cols(); ++d)
                dst[d] = w_lower * lower_mean[d] + (1.0 - w_lower) * boundary_mean[d];
        }
    }
    return w;
}

}  // namespace

RoughPartition rough_kmeans(const Matrix& x, const RoughConfig& cfg, const RoughObserver& observer) {
    if (x.rows() == 0) throw DataError("rough k-means: empty data");
    if (cfg.k < 1 || cfg.k > x.rows())
        throw ConfigError("rough k-means: k=" + std::to_string(cfg.k) + " must be in [1, " +
                          std::to_string(x.rows()) + "]");
    if (!(cfg.zeta >= 1.0)) throw ConfigError("rough k-means: zeta must be >= 1");
    if (!(cfg.w_lower > 0.0 && cfg.w_lower <= 1.0)) throw ConfigError("rough k-means: w_lower must be in (0, 1]");
    if (cfg.max_iter < 1) throw ConfigError("rough k-means: max_iter must be >= 1");
    if (!(cfg.eps > 0.0)) throw ConfigError("rough k-means: eps must be > 0");

    RoughPartition p;
    if (cfg.initial_centroids) {
        if (cfg.initial_centroids->rows() != cfg.k || cfg.initial_centroids->cols() != x.cols())
            throw ConfigError("rough k-means: initial centroids must be k x n_samples");
        p.centroids = *cfg.initial_centroids;
    } else {
        p.centroids = initial_centroids(x, cfg.k, cfg.seed, cfg.init);
    }
    p.lower.resize(cfg.k);
    p.upper.resize(cfg.k);
    assign_rough(x, p.centroids, cfg.zeta, p);
    if (observer) observer(p);

    for (std::size_t it = 1; it <= cfg.max_iter; ++it) {
        Matrix w_next = update_centroids(x, p, cfg.w_lower, p.centroids);
        double movement = 0.0;
        for (std::size_t j = 0; j < cfg.k; ++j)
            movement = std::max(movement, std::sqrt(squared_distance(p.centroids.row(j), w_next.row(j))));
        auto prev_lower = p.lower;
        auto prev_upper = p.upper;
        p.centroids = std::move(w_next);
        assign_rough(x, p.centroids, cfg.zeta, p);
        p.iterations = it;
        if (observer) observer(p);
        if ((p.lower == prev_lower && p.upper == prev_upper) || movement < cfg.eps) {
            p.converged = true;
            break;
        }
    }
    return p;
}

RoughPartition rough_kmeans(const ExpressionMatrix& m, const RoughConfig& cfg, const RoughObserver& observer) {
    return rough_kmeans(m.values(), cfg, observer);
}

}  // namespace pfcm
