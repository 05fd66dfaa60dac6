#include <doctest.h>

#include <algorithm>

#include "pfcm/error.hpp"
#include "pfcm/rng.hpp"
#include "pfcm/rough_kmeans.hpp"

using namespace pfcm;

namespace {

// Clusters of a hard assignment as sorted index sets, in label order.
std::vector<std::vector<std::size_t>> groups(const std::vector<std::size_t>& a, std::size_t k) {
    std::vector<std::vector<std::size_t>> g(k);
    for (std::size_t i = 0; i < a.size(); ++i) g[a[i]].push_back(i);
    return g;
}

}  // namespace

TEST_CASE("well-separated data has empty boundaries and matches k-means") {
    const Matrix x{{0}, {1}, {10}, {11}};
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        RoughConfig cfg{.k = 2, .zeta = 1.0 + 1e-9, .seed = seed};
        auto r = rough_kmeans(x, cfg);
        auto h = kmeans(x, {.k = 2, .seed = seed});
        CHECK(r.lower == r.upper);
        CHECK(r.lower == groups(h.assignments, 2));
        CHECK(!check_rough_structure(r, 4));
    }
}

TEST_CASE("an equidistant gene sits in both upper sets and no lower set") {
    const Matrix x{{0}, {5}, {10}};
    RoughConfig cfg{.k = 2};
    cfg.initial_centroids = Matrix{{0}, {10}};
    auto r = rough_kmeans(x, cfg);
    CHECK(r.lower == std::vector<std::vector<std::size_t>>{{0}, {2}});
    CHECK(r.upper == std::vector<std::vector<std::size_t>>{{0, 1}, {1, 2}});
    CHECK(r.centroids(0, 0) == doctest::Approx(0.7 * 0 + 0.3 * 5));
    CHECK(r.centroids(1, 0) == doctest::Approx(0.7 * 10 + 0.3 * 5));
}

TEST_CASE("k = 1 puts every gene in the single lower and upper set") {
    const Matrix x{{0, 1}, {4, 2}, {7, 7}};
    auto r = rough_kmeans(x, RoughConfig{.k = 1});
    CHECK(r.lower[0] == std::vector<std::size_t>{0, 1, 2});
    CHECK(r.upper[0] == r.lower[0]);
    CHECK(r.centroids(0, 0) == doctest::Approx(11.0 / 3));
}

TEST_CASE("a gene on top of its nearest centroid belongs only there") {
    const Matrix x{{0}, {3}};
    RoughConfig cfg{.k = 2, .zeta = 1e6, .max_iter = 1};
    cfg.initial_centroids = Matrix{{0}, {0}};
    std::vector<RoughPartition> seen;
    rough_kmeans(x, cfg, [&](const RoughPartition& p) { seen.push_back(p); });
    REQUIRE(!seen.empty());
    // Gene 0 coincides with both centroids; it joins only the first.
    CHECK(seen[0].lower[0] == std::vector<std::size_t>{0});
    CHECK(seen[0].upper[1] == std::vector<std::size_t>{1});
}

TEST_CASE("argument errors") {
    const Matrix x{{0}, {1}, {2}};
    CHECK_THROWS_AS(rough_kmeans(x, RoughConfig{.k = 0}), ConfigError);
    CHECK_THROWS_AS(rough_kmeans(x, RoughConfig{.k = 4}), ConfigError);
    CHECK_THROWS_AS(rough_kmeans(x, RoughConfig{.k = 2, .zeta = 0.99}), ConfigError);
    CHECK_THROWS_AS(rough_kmeans(x, RoughConfig{.k = 2, .w_lower = 0.0}), ConfigError);
    CHECK_THROWS_AS(rough_kmeans(x, RoughConfig{.k = 2, .w_lower = 1.5}), ConfigError);
}

TEST_CASE("structure checker flags violations") {
    RoughPartition p;
    p.centroids = Matrix(2, 1);
    p.lower = {{0}, {}};
    p.upper = {{0, 1}, {1}};
    CHECK(!check_rough_structure(p, 2));
    p.lower = {{0, 1}, {}};
    CHECK(check_rough_structure(p, 2));
    p.lower = {{0}, {}};
    p.upper = {{0}, {}};
    CHECK(check_rough_structure(p, 2));  // gene 1 uncovered
}

TEST_CASE("structural invariants hold after every iteration (property)") {
    Rng rng(17);
    for (int trial = 0; trial < 150; ++trial) {
        const std::size_t n = 3 + rng.below(40), d = 1 + rng.below(4);
        Matrix x(n, d);
        for (auto& v : x.data()) v = 10.0 * rng.uniform();
        RoughConfig cfg{.k = 1 + rng.below(std::min<std::size_t>(n, 5)),
                        .zeta = 1.0 + rng.uniform(),
                        .w_lower = 0.05 + 0.95 * rng.uniform(),
                        .seed = rng.next()};
        std::size_t calls = 0;
        auto r = rough_kmeans(x, cfg, [&](const RoughPartition& p) {
            ++calls;
            auto bad = check_rough_structure(p, n);
            CHECK_MESSAGE(!bad, *bad);
        });
        CHECK(calls == r.iterations + 1);
    }
}

TEST_CASE("zeta = 1 and w_lower = 1 reproduce k-means from the same centroids (property)") {
    Rng rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 4 + rng.below(50), d = 1 + rng.below(3);
        const std::size_t k = 1 + rng.below(std::min<std::size_t>(n, 5));
        Matrix x(n, d);
        for (auto& v : x.data()) v = rng.uniform();
        const auto init = initial_centroids(x, k, trial);
        KMeansConfig kc{.k = k};
        kc.initial_centroids = init;
        RoughConfig rc{.k = k, .zeta = 1.0, .w_lower = 1.0};
        rc.initial_centroids = init;
        auto h = kmeans(x, kc);
        auto r = rough_kmeans(x, rc);
        CHECK(r.lower == groups(h.assignments, k));
    }
}
