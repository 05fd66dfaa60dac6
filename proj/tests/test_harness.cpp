#include <doctest.h>

#include <algorithm>
#include <limits>
#include <sstream>

#include "pfcm/error.hpp"
#include "pfcm/grid_config.hpp"
#include "pfcm/harness.hpp"
#include "pfcm/kmeans.hpp"

using namespace pfcm;

namespace {

ExpressionMatrix three_genes() {
    // sample variances 0, 1, 4
    return ExpressionMatrix({"flat", "mid", "wide"}, {"s1", "s2", "s3"},
                            Matrix{{5, 5, 5}, {1, 2, 3}, {0, 2, 4}});
}

ExpressionMatrix blob_matrix(std::uint64_t seed, std::size_t noise = 4) {
    std::vector<SyntheticCluster> blobs{
        {{0, 0, 0, 0}, 0.5, 8}, {{6, 0, 6, 0}, 0.5, 8}, {{0, 6, 0, 6}, 0.5, 8}};
    return generate_synthetic(blobs, noise, seed).matrix;
}

ExperimentGrid small_grid() {
    ExperimentGrid g;
    g.subset_sizes = {20};
    g.ks = {3};
    g.algorithms = {Algorithm::kmeans, Algorithm::rough_kmeans, Algorithm::fcm, Algorithm::pfcm};
    g.seeds = {1};
    return g;
}

std::string csv_of(const ExperimentResult& r) {
    std::ostringstream os;
    write_report_csv(os, r);
    return os.str();
}

}  // namespace

TEST_CASE("subset_genes") {
    const auto m = three_genes();
    for (auto policy : {SubsetPolicy::first_n, SubsetPolicy::variance_top_n, SubsetPolicy::seeded_random})
        CHECK(subset_genes(m, 3, policy, 9) == m);

    auto first = subset_genes(m, 2, SubsetPolicy::first_n);
    CHECK(first.gene_ids() == std::vector<std::string>{"flat", "mid"});

    auto top = subset_genes(m, 1, SubsetPolicy::variance_top_n);
    CHECK(top.gene_ids() == std::vector<std::string>{"wide"});

    auto top2 = subset_genes(m, 2, SubsetPolicy::variance_top_n);
    CHECK(top2.gene_ids() == std::vector<std::string>{"mid", "wide"});

    CHECK(subset_genes(m, 2, SubsetPolicy::seeded_random, 4) == subset_genes(m, 2, SubsetPolicy::seeded_random, 4));
    CHECK_THROWS_AS(subset_genes(m, 0, SubsetPolicy::first_n), ConfigError);
    CHECK_THROWS_AS(subset_genes(m, 4, SubsetPolicy::first_n), ConfigError);
}

TEST_CASE("variance ties are broken by gene id") {
    ExpressionMatrix m({"b", "a", "c"}, {"s1", "s2"}, Matrix{{0, 1}, {3, 4}, {0, 0}});
    CHECK(subset_genes(m, 1, SubsetPolicy::variance_top_n).gene_ids() == std::vector<std::string>{"a"});
}

TEST_CASE("grid row counts") {
    const auto m = blob_matrix(1);
    auto g = small_grid();
    auto r = run_grid(m, g);
    CHECK(r.rows.size() == 4);
    for (const auto& row : r.rows) CHECK(row.ok);

    g.subset_sizes = {20, 28};
    g.ks = {2, 3, 4};
    g.seeds = {1, 2};
    r = run_grid(m, g);
    CHECK(r.rows.size() == 48);
    CHECK(r.summaries.size() == 24);
    // deterministic order: size, k, algorithm, seed
    CHECK(r.rows[0].size == 20);
    CHECK(r.rows[0].k == 2);
    CHECK(r.rows[0].algorithm == Algorithm::kmeans);
    CHECK(r.rows[1].seed == 2);
    CHECK(r.rows[2].algorithm == Algorithm::rough_kmeans);
    CHECK(r.rows.back().size == 28);
    CHECK(r.rows.back().k == 4);
    CHECK(r.rows.back().algorithm == Algorithm::pfcm);
}

TEST_CASE("grid validation") {
    const auto m = blob_matrix(1);
    auto g = small_grid();
    g.algorithms.clear();
    CHECK_THROWS_AS(run_grid(m, g), ConfigError);
    g = small_grid();
    g.subset_sizes = {29};
    CHECK_THROWS_AS(run_grid(m, g), ConfigError);
    g = small_grid();
    g.seeds.clear();
    CHECK_THROWS_AS(run_grid(m, g), ConfigError);
}

TEST_CASE("failed cells are kept in the report") {
    const auto m = blob_matrix(1);
    auto g = small_grid();
    g.subset_sizes = {2};
    g.ks = {3};
    auto r = run_grid(m, g);
    REQUIRE(r.rows.size() == 4);
    for (const auto& row : r.rows) {
        CHECK_FALSE(row.ok);
        CHECK_FALSE(row.error.empty());
    }
    CHECK(csv_of(r).find("error") != std::string::npos);
}

TEST_CASE("reports are byte-identical across runs and thread counts") {
    const auto m = blob_matrix(3);
    auto g = small_grid();
    g.subset_sizes = {12, 28};
    g.ks = {2, 3};
    g.seeds = {4, 5};
    const auto a = csv_of(run_grid(m, g));
    g.threads = 4;
    const auto result = run_grid(m, g);
    CHECK(csv_of(result) == a);
    std::ostringstream j1, j2;
    write_report_json(j1, g, result);
    write_report_json(j2, g, run_grid(m, g));
    CHECK(j1.str() == j2.str());
}

TEST_CASE("four-cell preset") {
    auto g = table1_preset(7129);
    CHECK(g.subset_sizes == std::vector<std::size_t>{7129, 5000, 3000, 1000});
    CHECK(g.ks == std::vector<std::size_t>{7, 5, 3, 7});
    CHECK(g.pairing == GridPairing::zipped);
    CHECK(g.algorithms.size() == 4);
    auto small = table1_preset(100);
    CHECK(small.subset_sizes == std::vector<std::size_t>{100, 70, 42, 14});
    CHECK_NOTHROW(validate_grid(small, 100));
}

TEST_CASE("grid config parsing") {
    std::istringstream in(
        "# comment\n"
        "sizes = 20, 12\n"
        "ks = 2,3\n"
        "algorithms = kmeans, pfcm\n"
        "seeds = 1, 2, 3\n"
        "v = 0.5\n"
        "normalization = mean_relative\n");
    auto g = parse_grid_config(in, 28);
    CHECK(g.subset_sizes == std::vector<std::size_t>{20, 12});
    CHECK(g.ks == std::vector<std::size_t>{2, 3});
    CHECK(g.algorithms == std::vector<Algorithm>{Algorithm::kmeans, Algorithm::pfcm});
    CHECK(g.seeds == std::vector<std::uint64_t>{1, 2, 3});
    CHECK(g.pfcm.v == 0.5);
    CHECK(g.normalization == Normalization::mean_relative);

    std::istringstream bad("sizes = 20\nbogus = 1\n");
    CHECK_THROWS_AS(parse_grid_config(bad, 28), ConfigError);
}

TEST_CASE("synthetic data") {
    std::vector<SyntheticCluster> two{{{1, 2}, 0.0, 3}, {{-4, 0.5}, 0.0, 3}};
    auto d = generate_synthetic(two, 0, 7);
    REQUIRE(d.matrix.n_genes() == 6);
    for (std::size_t i = 0; i < 6; ++i) {
        const auto& c = two[static_cast<std::size_t>(d.labels[i])].center;
        CHECK(d.matrix.values()(i, 0) == c[0]);
        CHECK(d.matrix.values()(i, 1) == c[1]);
    }
    CHECK_THROWS_AS(generate_synthetic({}, 5, 1), ConfigError);
    CHECK_THROWS_AS(generate_synthetic({{{0.0}, -1.0, 3}}, 0, 1), ConfigError);
    CHECK_THROWS_AS(generate_synthetic({{{0.0}, 1.0, 0}}, 0, 1), ConfigError);

    auto noisy = generate_synthetic(two, 4, 7);
    CHECK(noisy.matrix.n_genes() == 10);
    CHECK(std::count(noisy.labels.begin(), noisy.labels.end(), -1) == 4);
    CHECK(generate_synthetic(two, 4, 7).matrix == noisy.matrix);
}

TEST_CASE("adjusted Rand index") {
    const std::vector<int> a{0, 0, 1, 1}, b{0, 1, 0, 1}, c{5, 5, 2, 2};
    CHECK(adjusted_rand_index(a, a) == doctest::Approx(1.0));
    CHECK(adjusted_rand_index(a, c) == doctest::Approx(1.0));
    CHECK(adjusted_rand_index(a, b) == doctest::Approx(-0.5));
}

TEST_CASE("k-means recovers well-separated synthetic blobs") {
    std::vector<SyntheticCluster> blobs{{{0, 0}, 0.1, 30}, {{10, 0}, 0.1, 30}, {{0, 10}, 0.1, 30}};
    int farthest_hits = 0, restart_hits = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto d = generate_synthetic(blobs, 0, seed);
        auto to_int = [](const std::vector<std::size_t>& v) { return std::vector<int>(v.begin(), v.end()); };

        auto p = kmeans(d.matrix, KMeansConfig{.k = 3, .seed = seed, .init = CentroidInit::farthest_point});
        if (adjusted_rand_index(to_int(p.assignments), d.labels) == 1.0) ++farthest_hits;

        HardPartition best;
        best.sse = std::numeric_limits<double>::infinity();
        for (std::uint64_t s = 0; s < 10; ++s) {
            auto q = kmeans(d.matrix, KMeansConfig{.k = 3, .seed = seed * 100 + s});
            if (q.sse < best.sse) best = q;
        }
        if (adjusted_rand_index(to_int(best.assignments), d.labels) == 1.0) ++restart_hits;
    }
    CHECK(farthest_hits >= 9);
    CHECK(restart_hits >= 9);
}
