#include "pfcm/partition_io.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

#include "pfcm/error.hpp"
#include "text_util.hpp"

namespace pfcm {

void write_hard_partition_csv(std::ostream& out, const std::vector<std::string>& gene_ids, const HardPartition& p) {
    out << "gene_id,cluster\n";
    for (std::size_t i = 0; i < p.assignments.size(); ++i)
        out << detail::csv_escape(gene_ids.at(i)) << ',' << p.assignments[i] << '\n';
}

void write_rough_partition_csv(std::ostream& out, const std::vector<std::string>& gene_ids, const RoughPartition& p) {
    // Gene-major order so each gene's lines are adjacent.
    std::vector<std::vector<std::size_t>> clusters_of(gene_ids.size());
    for (std::size_t j = 0; j < p.upper.size(); ++j)
        for (auto g : p.upper[j]) clusters_of.at(g).push_back(j);
    out << "gene_id,cluster,membership_kind\n";
    for (std::size_t g = 0; g < gene_ids.size(); ++g) {
        const char* kind = clusters_of[g].size() == 1 ? "lower" : "boundary";
        for (auto j : clusters_of[g]) out << detail::csv_escape(gene_ids[g]) << ',' << j << ',' << kind << '\n';
    }
}

void write_fuzzy_partition_csv(std::ostream& out, const std::vector<std::string>& gene_ids, const FuzzyPartition& p) {
    out << "gene_id";
    for (std::size_t j = 0; j < p.memberships.cols(); ++j) out << ",u" << j;
    out << '\n';
    for (std::size_t i = 0; i < p.memberships.rows(); ++i) {
        out << detail::csv_escape(gene_ids.at(i));
        for (double v : p.memberships.row(i)) out << ',' << format_double(v);
        out << '\n';
    }
}

void write_centroids_csv(std::ostream& out, const std::vector<std::string>& sample_ids, const Matrix& centroids) {
    for (std::size_t j = 0; j < sample_ids.size(); ++j) out << (j ? "," : "") << detail::csv_escape(sample_ids[j]);
    out << '\n';
    for (std::size_t r = 0; r < centroids.rows(); ++r) {
        const auto row = centroids.row(r);
        for (std::size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << format_double(row[j]);
        out << '\n';
    }
}

namespace {

struct CsvLines {
    std::istream& in;
    std::size_t line = 0;

    bool next(std::vector<std::string>& fields) {
        std::string raw;
        while (std::getline(in, raw)) {
            ++line;
            auto s = detail::strip_cr(raw);
            if (detail::trim(s).empty()) continue;
            fields = detail::split_csv(s);
            return true;
        }
        return false;
    }
};

std::size_t parse_cluster(const std::string& field, std::size_t line) {
    auto v = detail::parse_uint(field);
    if (!v) throw ParseError("bad cluster index '" + field + "'", line, 2);
    return static_cast<std::size_t>(*v);
}

}  // namespace

LoadedPartition read_partition_csv(std::istream& in, const std::vector<std::string>& gene_ids) {
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < gene_ids.size(); ++i) index.emplace(gene_ids[i], i);

    CsvLines lines{in};
    std::vector<std::string> header;
    if (!lines.next(header)) throw ParseError("empty partition file", 1);
    if (header.empty() || detail::trim(header[0]) != "gene_id")
        throw ParseError("partition header must start with gene_id", lines.line, 1);

    auto lookup = [&](const std::string& id) {
        auto it = index.find(std::string(detail::trim(id)));
        if (it == index.end())
            throw DataError("partition/matrix gene-id mismatch: '" + id + "' (line " + std::to_string(lines.line) +
                            ") is not in the matrix");
        return it->second;
    };

    LoadedPartition out;
    const std::size_t n = gene_ids.size();
    std::vector<std::string> f;
    std::vector<bool> seen(n, false);

    if (header.size() == 2 && detail::trim(header[1]) == "cluster") {
        out.kind = PartitionKind::hard;
        std::vector<std::size_t> assign(n, 0);
        std::size_t k = 0;
        while (lines.next(f)) {
            if (f.size() != 2) throw ParseError("expected 2 fields", lines.line);
            const auto g = lookup(f[0]);
            if (seen[g]) throw ParseError("gene '" + f[0] + "' listed twice", lines.line, 1);
            seen[g] = true;
            assign[g] = parse_cluster(f[1], lines.line);
            k = std::max(k, assign[g] + 1);
        }
        out.memberships = Matrix(n, k, 0.0);
        for (std::size_t i = 0; i < n; ++i) out.memberships(i, assign[i]) = 1.0;
    } else if (header.size() == 3 && detail::trim(header[1]) == "cluster" &&
               detail::trim(header[2]) == "membership_kind") {
        out.kind = PartitionKind::rough;
        std::vector<std::vector<std::size_t>> clusters_of(n);
        std::size_t k = 0;
        while (lines.next(f)) {
            if (f.size() != 3) throw ParseError("expected 3 fields", lines.line);
            const auto g = lookup(f[0]);
            const auto c = parse_cluster(f[1], lines.line);
            const auto kind = detail::trim(f[2]);
            if (kind != "lower" && kind != "boundary")
                throw ParseError("membership_kind must be lower or boundary", lines.line, 3);
            clusters_of[g].push_back(c);
            seen[g] = true;
            k = std::max(k, c + 1);
        }
        out.memberships = Matrix(n, k, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (auto c : clusters_of[i]) out.memberships(i, c) = 1.0 / static_cast<double>(clusters_of[i].size());
    } else {
        out.kind = PartitionKind::fuzzy;
        const std::size_t k = header.size() - 1;
        if (k == 0) throw ParseError("fuzzy partition header has no membership columns", lines.line);
        out.memberships = Matrix(n, k, 0.0);
        while (lines.next(f)) {
            if (f.size() != k + 1)
                throw ParseError("expected " + std::to_string(k + 1) + " fields, found " + std::to_string(f.size()),
                                 lines.line);
            const auto g = lookup(f[0]);
            if (seen[g]) throw ParseError("gene '" + f[0] + "' listed twice", lines.line, 1);
            seen[g] = true;
            double sum = 0.0;
            for (std::size_t j = 0; j < k; ++j) {
                auto v = detail::parse_double(f[j + 1]);
                if (!v || !(*v >= 0.0 && *v <= 1.0))
                    throw ParseError("membership must be a number in [0, 1]", lines.line, j + 2);
                out.memberships(g, j) = *v;
                sum += *v;
            }
            if (std::abs(sum - 1.0) > 1e-6) throw ParseError("memberships do not sum to 1", lines.line);
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        if (!seen[i]) throw DataError("partition/matrix gene-id mismatch: gene '" + gene_ids[i] + "' has no assignment");
    if (out.memberships.cols() == 0) throw DataError("partition has no clusters");
    return out;
}

Matrix read_centroids_csv(std::istream& in, std::size_t n_samples) {
    CsvLines lines{in};
    std::vector<std::string> f;
    if (!lines.next(f)) throw ParseError("empty centroid file", 1);
    if (f.size() != n_samples)
        throw ParseError("centroid header has " + std::to_string(f.size()) + " columns, expected " +
                             std::to_string(n_samples),
                         lines.line);
    std::vector<double> values;
    std::size_t rows = 0;
    while (lines.next(f)) {
        if (f.size() != n_samples)
            throw ParseError("expected " + std::to_string(n_samples) + " fields, found " + std::to_string(f.size()),
                             lines.line);
        for (std::size_t j = 0; j < n_samples; ++j) {
            auto v = detail::parse_double(f[j]);
            if (!v || !std::isfinite(*v)) throw ParseError("non-numeric centroid value '" + f[j] + "'", lines.line, j + 1);
            values.push_back(*v);
        }
        ++rows;
    }
    if (rows == 0) throw ParseError("centroid file has no rows", lines.line + 1);
    return Matrix(rows, n_samples, std::move(values));
}

std::vector<std::size_t> crisp_labels(const Matrix& memberships) {
    std::vector<std::size_t> out(memberships.rows(), 0);
    for (std::size_t i = 0; i < memberships.rows(); ++i) {
        const auto r = memberships.row(i);
        out[i] = static_cast<std::size_t>(std::max_element(r.begin(), r.end()) - r.begin());
    }
    return out;
}

}  // namespace pfcm
