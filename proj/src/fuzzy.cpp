#include "pfcm/fuzzy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "pfcm/error.hpp"
#include "pfcm/rng.hpp"

namespace pfcm {

namespace {

constexpr double kSingularTol = 1e-12;

}  // namespace

void FuzzyConfig::validate() const {
    if (c < 1) throw ConfigError("fuzzy: cluster count c must be >= 1");
    if (!(m > 1.0) || !std::isfinite(m)) throw ConfigError("fuzzy: fuzzifier m must be finite and > 1");
    if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError("fuzzy: penalty weight v must be finite and >= 0");
    if (!(eps > 0.0)) throw ConfigError("fuzzy: eps must be > 0");
    if (max_iter < 1) throw ConfigError("fuzzy: max_iter must be >= 1");
    if (!(alpha_floor > 0.0 && alpha_floor <= 1e-6)) throw ConfigError("fuzzy: alpha_floor must be in (0, 1e-6]");
}

std::vector<double> compute_alpha(const Matrix& u, double m, double alpha_floor) {
    const std::size_t c = u.cols();
    if (u.rows() == 0 || c == 0) throw NumericalError("compute_alpha: empty membership matrix");
    std::vector<double> mass(c, 0.0);
    for (std::size_t i = 0; i < u.rows(); ++i) {
        const auto r = u.row(i);
        for (std::size_t j = 0; j < c; ++j) mass[j] += std::pow(r[j], m);
    }
    double total = 0.0;
    for (double s : mass) total += s;
    if (!(total > 0.0) || !std::isfinite(total))
        throw NumericalError("compute_alpha: total membership mass is zero or non-finite");

    std::vector<double> alpha(c);
    for (std::size_t j = 0; j < c; ++j) alpha[j] = mass[j] / total;

    // Pin small components to the floor and shrink the rest to compensate;
    // repeat in case shrinking pushes another one under.
    std::vector<bool> pinned(c, false);
    for (bool changed = true; changed;) {
        changed = false;
        double free_mass = 0.0, pinned_mass = 0.0;
        for (std::size_t j = 0; j < c; ++j) {
            if (!pinned[j] && alpha[j] < alpha_floor) {
                pinned[j] = true;
                changed = true;
            }
            if (pinned[j]) pinned_mass += alpha_floor;
            else free_mass += alpha[j];
        }
        if (!changed) break;
        for (std::size_t j = 0; j < c; ++j)
            alpha[j] = pinned[j] ? alpha_floor : alpha[j] * (1.0 - pinned_mass) / free_mass;
    }
    // The largest component absorbs rounding so the sum is exactly 1.
    const auto big = static_cast<std::size_t>(std::max_element(alpha.begin(), alpha.end()) - alpha.begin());
    double rest = 0.0;
    for (std::size_t j = 0; j < c; ++j)
        if (j != big) rest += alpha[j];
    alpha[big] = 1.0 - rest;
    return alpha;
}

Matrix compute_centroids(const Matrix& u, double m, const Matrix& x) {
    if (u.rows() != x.rows()) throw ConfigError("compute_centroids: membership and data row counts differ");
    const std::size_t c = u.cols();
    Matrix w(c, x.cols(), 0.0);
    std::vector<double> mass(c, 0.0);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const auto xi = x.row(i);
        for (std::size_t j = 0; j < c; ++j) {
            const double um = std::pow(u(i, j), m);
            if (um == 0.0) continue;
            mass[j] += um;
            auto wj = w.row(j);
            for (std::size_t d = 0; d < xi.size(); ++d) wj[d] += um * xi[d];
        }
    }
    for (std::size_t j = 0; j < c; ++j) {
        if (!(mass[j] > 0.0)) throw NumericalError("degenerate cluster " + std::to_string(j) + ": zero membership mass");
        for (auto& v : w.row(j)) v /= mass[j];
    }
    return w;
}

Matrix squared_distances(const Matrix& x, const Matrix& centroids) {
    Matrix d(x.rows(), centroids.rows());
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < centroids.rows(); ++j) d(i, j) = squared_distance(x.row(i), centroids.row(j));
    return d;
}

Matrix update_memberships_pfcm(const Matrix& x, const Matrix& centroids, std::span<const double> alpha,
                               const FuzzyConfig& cfg) {
    const std::size_t c = centroids.rows();
    if (c == 0) throw ConfigError("update_memberships: no centroids");
    if (centroids.cols() != x.cols()) throw ConfigError("update_memberships: centroid dimension mismatch");
    const bool penalized = cfg.v != 0.0;
    if (penalized && alpha.size() != c) throw ConfigError("update_memberships: alpha must have one entry per cluster");
    if (!(cfg.m > 1.0)) throw ConfigError("update_memberships: m must be > 1");

    const double exponent = 1.0 / (cfg.m - 1.0);
    std::vector<double> penalty(c, 0.0);
    if (penalized)
        for (std::size_t j = 0; j < c; ++j) penalty[j] = cfg.v * std::log(std::max(alpha[j], cfg.alpha_floor));

    Matrix u(x.rows(), c, 0.0);
    std::vector<double> dist(c);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        std::size_t argmin = 0;
        for (std::size_t j = 0; j < c; ++j) {
            dist[j] = squared_distance(x.row(i), centroids.row(j)) - penalty[j];
            if (dist[j] < dist[argmin]) argmin = j;
        }
        auto ui = u.row(i);
        if (dist[argmin] <= kSingularTol) {
            std::size_t ties = 0;
            for (std::size_t j = 0; j < c; ++j)
                if (dist[j] == dist[argmin]) ++ties;
            for (std::size_t j = 0; j < c; ++j)
                if (dist[j] == dist[argmin]) ui[j] = 1.0 / static_cast<double>(ties);
            continue;
        }
        for (std::size_t j = 0; j < c; ++j) {
            double s = 0.0;
            for (std::size_t l = 0; l < c; ++l) s += std::pow(dist[j] / dist[l], exponent);
            ui[j] = 1.0 / s;
        }
    }
    return u;
}

double pfcm_objective(const Matrix& x, const Matrix& u, const Matrix& centroids, std::span<const double> alpha,
                      double m, double v) {
    const std::size_t c = centroids.rows();
    const bool penalized = v != 0.0 && !alpha.empty();
    double fit = 0.0;
    double penalty = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) {
        for (std::size_t j = 0; j < c; ++j) {
            const double um = std::pow(u(i, j), m);
            if (um == 0.0) continue;
            fit += um * squared_distance(x.row(i), centroids.row(j));
            if (penalized) penalty += um * std::log(alpha[j]);
        }
    }
    return 0.5 * fit - 0.5 * v * penalty;
}

Matrix initial_memberships(std::size_t n, std::size_t c, std::uint64_t seed) {
    Rng rng(seed);
    Matrix u(n, c);
    for (std::size_t i = 0; i < n; ++i) {
        auto r = u.row(i);
        double s = 0.0;
        for (auto& v : r) {
            v = rng.uniform();
            s += v;
        }
        for (auto& v : r) v /= s;
    }
    return u;
}

namespace {

FuzzyPartition run_fuzzy(const Matrix& x, const FuzzyConfig& cfg, Matrix u, const FuzzyObserver& observer) {
    FuzzyPartition p;
    std::vector<double> alpha;
    Matrix w;
    for (std::size_t t = 1; t <= cfg.max_iter; ++t) {
        alpha = compute_alpha(u, cfg.m, cfg.alpha_floor);
        w = compute_centroids(u, cfg.m, x);
        Matrix next = update_memberships_pfcm(x, w, alpha, cfg);
        const double j = pfcm_objective(x, next, w, alpha, cfg.m, cfg.v);
        if (!std::isfinite(j)) {
            std::ostringstream msg;
            msg << "non-finite objective at iteration " << t << " (c=" << cfg.c << ", m=" << cfg.m
                << ", v=" << cfg.v << ", min alpha=" << *std::min_element(alpha.begin(), alpha.end()) << ")";
            throw NumericalError(msg.str());
        }
        const double delta = max_abs_diff(next, u);
        u = std::move(next);
        p.objective_trace.push_back(j);
        p.iterations = t;
        if (observer) observer(FuzzyIterate{t, u, w, alpha, j, delta});
        if (delta <= cfg.eps) {
            p.converged = true;
            break;
        }
    }
    alpha = compute_alpha(u, cfg.m, cfg.alpha_floor);
    p.centroids = compute_centroids(u, cfg.m, x);
    p.objective = pfcm_objective(x, u, p.centroids, alpha, cfg.m, cfg.v);
    p.memberships = std::move(u);
    p.alpha = std::move(alpha);
    return p;
}

void check_inputs(const Matrix& x, const FuzzyConfig& cfg) {
    cfg.validate();
    if (x.rows() == 0 || x.cols() == 0) throw DataError("fuzzy: empty data");
    if (cfg.c > x.rows())
        throw ConfigError("fuzzy: c=" + std::to_string(cfg.c) + " must be in [1, " + std::to_string(x.rows()) + "]");
}

void check_initial(const Matrix& x, const FuzzyConfig& cfg, const Matrix& u) {
    if (u.rows() != x.rows() || u.cols() != cfg.c)
        throw ConfigError("fuzzy: initial memberships must be n_genes x c");
    for (std::size_t i = 0; i < u.rows(); ++i) {
        double s = 0.0;
        for (double v : u.row(i)) {
            if (!(v >= 0.0 && v <= 1.0)) throw ConfigError("fuzzy: initial memberships must lie in [0, 1]");
            s += v;
        }
        if (std::abs(s - 1.0) > 1e-9)
            throw ConfigError("fuzzy: initial membership row " + std::to_string(i) + " does not sum to 1");
    }
}

}  // namespace

FuzzyPartition pfcm(const Matrix& x, const FuzzyConfig& cfg, const FuzzyObserver& observer) {
    check_inputs(x, cfg);
    return run_fuzzy(x, cfg, initial_memberships(x.rows(), cfg.c, cfg.seed), observer);
}

FuzzyPartition pfcm(const Matrix& x, const FuzzyConfig& cfg, const Matrix& initial_u, const FuzzyObserver& observer) {
    check_inputs(x, cfg);
    check_initial(x, cfg, initial_u);
    return run_fuzzy(x, cfg, initial_u, observer);
}

FuzzyPartition pfcm(const ExpressionMatrix& m, const FuzzyConfig& cfg) { return pfcm(m.values(), cfg); }

FuzzyPartition fcm(const Matrix& x, const FuzzyConfig& cfg, const FuzzyObserver& observer) {
    FuzzyConfig plain = cfg;
    plain.v = 0.0;
    auto p = pfcm(x, plain, observer);
    p.alpha.reset();
    return p;
}

FuzzyPartition fcm(const Matrix& x, const FuzzyConfig& cfg, const Matrix& initial_u, const FuzzyObserver& observer) {
    FuzzyConfig plain = cfg;
    plain.v = 0.0;
    auto p = pfcm(x, plain, initial_u, observer);
    p.alpha.reset();
    return p;
}

FuzzyPartition fcm(const ExpressionMatrix& m, const FuzzyConfig& cfg) { return fcm(m.values(), cfg); }

}  // namespace pfcm
