#include "pfcm/grid_config.hpp"

#include <fstream>
#include <string>

#include "pfcm/error.hpp"
#include "text_util.hpp"

namespace pfcm {

namespace {

[[noreturn]] void fail(std::size_t line, const std::string& msg) {
    throw ConfigError("grid config line " + std::to_string(line) + ": " + msg);
}

template <class T>
std::vector<T> parse_list(std::string_view value, std::size_t line, const char* key) {
    std::vector<T> out;
    for (auto tok : detail::split(value, ',')) {
        auto v = detail::parse_uint(tok);
        if (!v) fail(line, std::string("bad integer '") + std::string(detail::trim(tok)) + "' in " + key);
        out.push_back(static_cast<T>(*v));
    }
    return out;
}

double parse_real(std::string_view value, std::size_t line, const std::string& key) {
    auto v = detail::parse_double(value);
    if (!v) fail(line, "bad number '" + std::string(value) + "' for " + key);
    return *v;
}

std::size_t parse_count(std::string_view value, std::size_t line, const std::string& key) {
    auto v = detail::parse_uint(value);
    if (!v) fail(line, "bad integer '" + std::string(value) + "' for " + key);
    return static_cast<std::size_t>(*v);
}

}  // namespace

ExperimentGrid parse_grid_config(std::istream& in, std::size_t n_genes) {
    ExperimentGrid g;
    g.seeds = {1};
    g.algorithms = {Algorithm::kmeans, Algorithm::rough_kmeans, Algorithm::fcm, Algorithm::pfcm};
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) fail(line_no, "expected key = value");
        const std::string key(detail::trim(line.substr(0, eq)));
        const std::string_view value = detail::trim(line.substr(eq + 1));
        if (value.empty()) fail(line_no, "empty value for " + key);

        try {
            if (key == "preset") {
                if (value != "table1") fail(line_no, "unknown preset '" + std::string(value) + "'");
                auto p = table1_preset(n_genes);
                g.subset_sizes = p.subset_sizes;
                g.ks = p.ks;
                g.pairing = p.pairing;
                g.algorithms = p.algorithms;
            } else if (key == "sizes") {
                g.subset_sizes = parse_list<std::size_t>(value, line_no, "sizes");
            } else if (key == "ks") {
                g.ks = parse_list<std::size_t>(value, line_no, "ks");
            } else if (key == "seeds") {
                g.seeds = parse_list<std::uint64_t>(value, line_no, "seeds");
            } else if (key == "pairing") {
                if (value == "cross") g.pairing = GridPairing::cross;
                else if (value == "zipped") g.pairing = GridPairing::zipped;
                else fail(line_no, "pairing must be cross or zipped");
            } else if (key == "algorithms") {
                g.algorithms.clear();
                for (auto tok : detail::split(value, ',')) g.algorithms.push_back(parse_algorithm(detail::trim(tok)));
            } else if (key == "normalization") {
                g.normalization = parse_normalization(value);
            } else if (key == "drop_degenerate") {
                if (value == "true") g.drop_degenerate = true;
                else if (value == "false") g.drop_degenerate = false;
                else fail(line_no, "drop_degenerate must be true or false");
            } else if (key == "subset_policy") {
                g.subset_policy = parse_subset_policy(value);
            } else if (key == "subset_seed") {
                g.subset_seed = parse_count(value, line_no, key);
            } else if (key == "threads") {
                g.threads = parse_count(value, line_no, key);
            } else if (key == "m") {
                g.fcm.m = g.pfcm.m = parse_real(value, line_no, key);
            } else if (key == "v") {
                g.pfcm.v = parse_real(value, line_no, key);
            } else if (key == "eps") {
                g.fcm.eps = g.pfcm.eps = parse_real(value, line_no, key);
            } else if (key == "max_iter") {
                g.fcm.max_iter = g.pfcm.max_iter = parse_count(value, line_no, key);
            } else if (key == "alpha_floor") {
                g.fcm.alpha_floor = g.pfcm.alpha_floor = parse_real(value, line_no, key);
            } else if (key == "zeta") {
                g.rough.zeta = parse_real(value, line_no, key);
            } else if (key == "w_lower") {
                g.rough.w_lower = parse_real(value, line_no, key);
            } else if (key == "kmeans_eps") {
                g.kmeans.eps = g.rough.eps = parse_real(value, line_no, key);
            } else if (key == "kmeans_max_iter") {
                g.kmeans.max_iter = g.rough.max_iter = parse_count(value, line_no, key);
            } else if (key == "init") {
                g.kmeans.init = g.rough.init = parse_centroid_init(value);
            } else {
                fail(line_no, "unknown key '" + key + "'");
            }
        } catch (const ConfigError& e) {
            const std::string what = e.what();
            if (what.rfind("grid config line", 0) == 0) throw;
            fail(line_no, what);
        }
    }
    validate_grid(g, n_genes);
    return g;
}

ExperimentGrid read_grid_config(const std::string& path, std::size_t n_genes) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open grid config '" + path + "'");
    return parse_grid_config(in, n_genes);
}

}  // namespace pfcm
