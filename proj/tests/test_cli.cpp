#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include <json.hpp>

#include "commands.hpp"

namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() / ("pfcm_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string& name) const { return (path / name).string(); }
};

struct Result {
    int code;
    std::string out, err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = pfcm::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

void write(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kGct =
    "#1.2\n"
    "8\t3\n"
    "Name\tDescription\ts1\ts2\ts3\n"
    "g1\td\t1.0\t2.0\t3.0\n"
    "g2\td\t1.1\t2.1\t2.9\n"
    "g3\td\t0.9\t2.2\t3.1\n"
    "g4\td\t9.0\t1.0\t0.5\n"
    "g5\td\t8.8\t1.2\t0.4\n"
    "g6\td\t4.0\t4.0\t9.0\n"
    "g7\td\t4.2\t3.9\t8.7\n"
    "g8\td\t3.9\t4.1\t9.2\n";

}  // namespace

TEST_CASE("cluster writes three files") {
    TempDir dir;
    write(dir / "in.gct", kGct);
    auto r = run({"cluster", "--input", dir / "in.gct", "--alg", "pfcm", "--k", "3", "--m", "2", "--v", "1", "--seed",
                  "7", "--out-dir", dir / "out"});
    CHECK(r.code == 0);
    CHECK(fs::exists(dir / "out/partition.csv"));
    CHECK(fs::exists(dir / "out/centroids.csv"));
    CHECK(fs::exists(dir / "out/meta.json"));
    auto meta = nlohmann::json::parse(slurp(dir / "out/meta.json"));
    CHECK(meta["converged"] == true);

    // rerun is byte-identical
    const auto first = slurp(dir / "out/partition.csv");
    CHECK(run({"cluster", "--input", dir / "in.gct", "--alg", "pfcm", "--k", "3", "--seed", "7", "--out-dir",
               dir / "out"}).code == 0);
    CHECK(slurp(dir / "out/partition.csv") == first);
}

TEST_CASE("invalid k is a usage error and writes nothing") {
    TempDir dir;
    write(dir / "in.gct", kGct);
    auto r = run({"cluster", "--input", dir / "in.gct", "--alg", "kmeans", "--k", "0", "--out-dir", dir / "out"});
    CHECK(r.code == 1);
    CHECK_FALSE(fs::exists(dir / "out/partition.csv"));
    r = run({"cluster", "--input", dir / "in.gct", "--alg", "kmeans", "--k", "9", "--out-dir", dir / "out"});
    CHECK(r.code == 1);
    CHECK_FALSE(fs::exists(dir / "out/partition.csv"));
    CHECK(r.err.find('\n') == r.err.size() - 1);
}

TEST_CASE("pfcm with v = 0 and fcm produce identical memberships") {
    TempDir dir;
    write(dir / "in.gct", kGct);
    REQUIRE(run({"cluster", "--input", dir / "in.gct", "--alg", "pfcm", "--v", "0", "--k", "3", "--seed", "7",
                 "--out-dir", dir / "a"}).code == 0);
    REQUIRE(run({"cluster", "--input", dir / "in.gct", "--alg", "fcm", "--k", "3", "--seed", "7", "--out-dir",
                 dir / "b"}).code == 0);
    CHECK(slurp(dir / "a/partition.csv") == slurp(dir / "b/partition.csv"));
}

TEST_CASE("every algorithm runs from the CLI") {
    TempDir dir;
    write(dir / "in.gct", kGct);
    for (std::string alg : {"kmeans", "rough_kmeans", "fcm", "pfcm"}) {
        auto r = run({"cluster", "--input", dir / "in.gct", "--alg", alg, "--k", "3", "--seed", "1", "--out-dir",
                      dir / alg});
        CHECK_MESSAGE(r.code == 0, alg << ": " << r.err);
        auto v = run({"validate", "--input", dir / "in.gct", "--partition", dir / (alg + "/partition.csv"),
                      "--centroids", dir / (alg + "/centroids.csv")});
        CHECK_MESSAGE(v.code == 0, alg << ": " << v.err);
    }
}

TEST_CASE("validate on the 1-D fixture") {
    TempDir dir;
    write(dir / "x.tsv", "gene\ts\na\t0\nb\t1\nc\t10\nd\t11\n");
    write(dir / "p.csv", "gene_id,cluster\na,0\nb,0\nc,1\nd,1\n");
    auto r = run({"validate", "--input", dir / "x.tsv", "--partition", dir / "p.csv", "-o", dir / "report.json"});
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(std::abs(j["rmse"].get<double>() - 0.5) <= 1e-12);
    CHECK(std::abs(j["mae"].get<double>() - 0.5) <= 1e-12);
    CHECK(std::abs(j["xie_beni"].get<double>() - 0.0025) <= 1e-12);
    CHECK(slurp(dir / "report.json") == r.out);
}

TEST_CASE("normalize rejects a constant row unless asked to drop it") {
    TempDir dir;
    write(dir / "x.tsv", "gene\ts1\ts2\na\t1\t3\nflatgene\t2\t2\n");
    auto r = run({"normalize", "-i", dir / "x.tsv", "--method", "zscore", "-o", dir / "z.tsv"});
    CHECK(r.code == 2);
    CHECK(r.err.find("flatgene") != std::string::npos);
    CHECK_FALSE(fs::exists(dir / "z.tsv"));

    r = run({"normalize", "-i", dir / "x.tsv", "--method", "zscore", "--drop-degenerate", "-o", dir / "z.tsv"});
    CHECK(r.code == 0);
    CHECK(slurp(dir / "z.tsv").find("flatgene") == std::string::npos);
}

TEST_CASE("parse errors are data errors with a location") {
    TempDir dir;
    write(dir / "bad.tsv", "gene\ts1\ts2\na\t1\tfoo\n");
    auto r = run({"normalize", "-i", dir / "bad.tsv", "--method", "zscore", "-o", dir / "z.tsv"});
    CHECK(r.code == 2);
    CHECK(r.err.find("line 2") != std::string::npos);

    r = run({"--json", "normalize", "-i", dir / "missing.tsv", "--method", "zscore", "-o", dir / "z.tsv"});
    CHECK(r.code == 2);
    auto j = nlohmann::json::parse(r.err);
    CHECK(j["exit_code"] == 2);
}

TEST_CASE("grid with the four-cell preset") {
    TempDir dir;
    const std::string data = std::string(PFCM_DATA_DIR) + "/synthetic_100x10.tsv";
    auto r = run({"grid", "--input", data, "--preset", "table1", "--out-csv", dir / "a.csv", "--out-json",
                  dir / "a.json"});
    REQUIRE_MESSAGE(r.code == 0, r.err);
    std::ifstream in(dir / "a.csv");
    std::string line;
    int lines = 0;
    while (std::getline(in, line)) ++lines;
    CHECK(lines == 1 + 16);
}

TEST_CASE("heatmap") {
    TempDir dir;
    write(dir / "in.gct", kGct);
    REQUIRE(run({"cluster", "--input", dir / "in.gct", "--alg", "kmeans", "--k", "3", "--out-dir", dir / "c"}).code ==
            0);
    auto r = run({"heatmap", "--input", dir / "in.gct", "--partition", dir / "c/partition.csv", "-o", dir / "h.ppm",
                  "--scale", "2"});
    CHECK(r.code == 0);
    const auto bytes = slurp(dir / "h.ppm");
    CHECK(bytes.rfind("P6\n6 16\n255\n", 0) == 0);

    write(dir / "wrong.csv", "gene_id,cluster\nnope,0\n");
    r = run({"heatmap", "--input", dir / "in.gct", "--partition", dir / "wrong.csv", "-o", dir / "h2.ppm"});
    CHECK(r.code == 2);
    CHECK_FALSE(fs::exists(dir / "h2.ppm"));
}

TEST_CASE("missing subcommand or required flag is a usage error") {
    CHECK(run({}).code == 1);
    CHECK(run({"cluster", "--k", "2"}).code == 1);
    CHECK(run({"bogus"}).code == 1);
}
