#pragma once

// Brute-force reference computations used by the tests. Nothing here calls
// into the library's clustering code; inputs are plain nested vectors.

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

namespace oracle {

using Points = std::vector<std::vector<double>>;

inline double sq(double v) { return v * v; }

inline double sqdist(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += sq(a[i] - b[i]);
    return s;
}

/// Minimum SSE over every assignment of n points to k non-empty clusters.
inline double exhaustive_kmeans_sse(const Points& x, std::size_t k) {
    const std::size_t n = x.size();
    const std::size_t d = x[0].size();
    std::vector<std::size_t> a(n, 0);
    double best = std::numeric_limits<double>::infinity();
    for (;;) {
        std::vector<std::vector<double>> sum(k, std::vector<double>(d, 0.0));
        std::vector<std::size_t> cnt(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            ++cnt[a[i]];
            for (std::size_t t = 0; t < d; ++t) sum[a[i]][t] += x[i][t];
        }
        bool all = true;
        for (auto c : cnt) all = all && c > 0;
        if (all) {
            double sse = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t t = 0; t < d; ++t) sse += sq(x[i][t] - sum[a[i]][t] / static_cast<double>(cnt[a[i]]));
            best = std::min(best, sse);
        }
        std::size_t pos = 0;
        while (pos < n && ++a[pos] == k) a[pos++] = 0;
        if (pos == n) break;
    }
    return best;
}

/// J_PFCM(U) with centroids and proportions set to their closed-form optima
/// for U. `u[i][j]` is the membership of point i in cluster j. Proportions
/// below `alpha_floor` are raised to it (matching the floor in the library).
inline double pfcm_profile_objective(const Points& x, const Points& u, double m, double v,
                                     double alpha_floor = 1e-12) {
    const std::size_t n = x.size(), d = x[0].size(), c = u[0].size();
    std::vector<double> mass(c, 0.0);
    std::vector<std::vector<double>> w(c, std::vector<double>(d, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < c; ++j) {
            const double um = std::pow(u[i][j], m);
            mass[j] += um;
            for (std::size_t t = 0; t < d; ++t) w[j][t] += um * x[i][t];
        }
    double total = 0.0;
    for (double s : mass) total += s;
    double j_val = 0.0;
    for (std::size_t j = 0; j < c; ++j) {
        if (mass[j] > 0)
            for (auto& t : w[j]) t /= mass[j];
        const double alpha = std::max(mass[j] / total, alpha_floor);
        for (std::size_t i = 0; i < n; ++i) {
            const double um = std::pow(u[i][j], m);
            if (um == 0.0) continue;
            j_val += 0.5 * um * sqdist(x[i], w[j]) - 0.5 * v * um * std::log(alpha);
        }
    }
    return j_val;
}

/// Enumerates every membership matrix for c = 2 whose first column takes
/// values on a regular grid, calling `visit` with each.
inline void for_each_two_cluster_grid(std::size_t n, double step, const std::function<void(const Points&)>& visit) {
    const std::size_t levels = static_cast<std::size_t>(std::llround(1.0 / step)) + 1;
    std::vector<std::size_t> idx(n, 0);
    Points u(n, std::vector<double>(2));
    for (;;) {
        for (std::size_t i = 0; i < n; ++i) {
            const double a = std::min(1.0, static_cast<double>(idx[i]) * step);
            u[i][0] = a;
            u[i][1] = 1.0 - a;
        }
        visit(u);
        std::size_t pos = 0;
        while (pos < n && ++idx[pos] == levels) idx[pos++] = 0;
        if (pos == n) break;
    }
}

/// Classic FCM membership for one point from its squared distances.
inline std::vector<double> fcm_memberships(const std::vector<double>& d2, double m) {
    std::vector<double> u(d2.size());
    for (std::size_t j = 0; j < d2.size(); ++j) {
        double s = 0.0;
        for (double dl : d2) s += std::pow(d2[j] / dl, 1.0 / (m - 1.0));
        u[j] = 1.0 / s;
    }
    return u;
}

}  // namespace oracle
