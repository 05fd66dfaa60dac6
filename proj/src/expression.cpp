#include "pfcm/expression.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "pfcm/error.hpp"
#include "text_util.hpp"

namespace pfcm {

ParseError::ParseError(const std::string& what, std::size_t line, std::size_t column)
    : DataError([&] {
          std::string where = "line " + std::to_string(line);
          if (column > 0) where += ", column " + std::to_string(column);
          return where + ": " + what;
      }()),
      line_(line),
      column_(column) {}

DegenerateRowsError::DegenerateRowsError(const std::string& reason, std::vector<std::string> gene_ids)
    : DataError([&] {
          std::string msg = reason + ":";
          for (std::size_t i = 0; i < gene_ids.size(); ++i) msg += (i ? ", " : " ") + gene_ids[i];
          return msg;
      }()),
      gene_ids_(std::move(gene_ids)) {}

namespace {

void check_ids(const std::vector<std::string>& ids, const char* what) {
    std::unordered_set<std::string_view> seen;
    for (const auto& id : ids) {
        if (id.empty()) throw DataError(std::string("empty ") + what + " id");
        if (id.find_first_of("\t\n\r") != std::string::npos)
            throw DataError(std::string(what) + " id contains a tab or newline: " + id);
        if (!seen.insert(id).second) throw DataError(std::string("duplicate ") + what + " id: " + id);
    }
}

}  // namespace

ExpressionMatrix::ExpressionMatrix(std::vector<std::string> gene_ids, std::vector<std::string> sample_ids,
                                   Matrix values)
    : gene_ids_(std::move(gene_ids)), sample_ids_(std::move(sample_ids)), values_(std::move(values)) {
    if (values_.rows() == 0 || values_.cols() == 0)
        throw DataError("expression matrix needs at least one gene and one sample");
    if (gene_ids_.size() != values_.rows())
        throw DataError("gene id count " + std::to_string(gene_ids_.size()) + " does not match row count " +
                        std::to_string(values_.rows()));
    if (sample_ids_.size() != values_.cols())
        throw DataError("sample id count " + std::to_string(sample_ids_.size()) +
                        " does not match column count " + std::to_string(values_.cols()));
    check_ids(gene_ids_, "gene");
    check_ids(sample_ids_, "sample");
    for (std::size_t i = 0; i < values_.rows(); ++i)
        for (std::size_t j = 0; j < values_.cols(); ++j)
            if (!std::isfinite(values_(i, j)))
                throw DataError("non-finite value for gene " + gene_ids_[i] + ", sample " + sample_ids_[j]);
}

ExpressionMatrix ExpressionMatrix::select_genes(std::span<const std::size_t> indices) const {
    std::vector<std::string> ids;
    ids.reserve(indices.size());
    for (auto i : indices) ids.push_back(gene_ids_.at(i));
    return ExpressionMatrix(std::move(ids), sample_ids_, values_.select_rows(indices));
}

MatrixFormat parse_format(std::string_view name) {
    if (name == "tsv") return MatrixFormat::tsv;
    if (name == "gct") return MatrixFormat::gct;
    if (name == "res") return MatrixFormat::res;
    throw ConfigError("unknown matrix format '" + std::string(name) + "' (expected tsv, gct or res)");
}

std::string_view format_name(MatrixFormat format) {
    switch (format) {
        case MatrixFormat::tsv: return "tsv";
        case MatrixFormat::gct: return "gct";
        case MatrixFormat::res: return "res";
    }
    return "tsv";
}

MatrixFormat format_from_path(std::string_view path) {
    auto ends_with = [&](std::string_view ext) {
        if (path.size() < ext.size()) return false;
        auto tail = path.substr(path.size() - ext.size());
        for (std::size_t i = 0; i < ext.size(); ++i)
            if (std::tolower(static_cast<unsigned char>(tail[i])) != ext[i]) return false;
        return true;
    };
    if (ends_with(".gct")) return MatrixFormat::gct;
    if (ends_with(".res")) return MatrixFormat::res;
    return MatrixFormat::tsv;
}

namespace {

/// Line reader that tracks 1-based line numbers and skips blank lines.
class LineReader {
public:
    explicit LineReader(std::istream& in) : in_(in) {}

    bool next(std::string& line) {
        while (std::getline(in_, line)) {
            ++number_;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (!detail::trim(line).empty()) return true;
        }
        return false;
    }

    bool next_raw(std::string& line) {
        if (!std::getline(in_, line)) return false;
        ++number_;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return true;
    }

    std::size_t line() const { return number_; }

private:
    std::istream& in_;
    std::size_t number_ = 0;
};

double parse_cell(std::string_view field, std::size_t line, std::size_t column) {
    auto v = detail::parse_double(field);
    if (!v) throw ParseError("non-numeric value '" + std::string(field) + "'", line, column);
    if (!std::isfinite(*v)) throw ParseError("non-finite value '" + std::string(field) + "'", line, column);
    return *v;
}

struct Builder {
    std::vector<std::string> genes;
    std::vector<double> values;
    std::unordered_set<std::string> seen;

    void add_gene(std::string_view id, std::size_t line, std::size_t column) {
        std::string s(detail::trim(id));
        if (s.empty()) throw ParseError("empty gene id", line, column);
        if (!seen.insert(s).second) throw ParseError("duplicate gene id '" + s + "'", line, column);
        genes.push_back(std::move(s));
    }
};

void check_sample_ids(const std::vector<std::string>& ids, std::size_t line, std::size_t first_column,
                      std::size_t column_stride = 1) {
    std::unordered_set<std::string_view> seen;
    for (std::size_t j = 0; j < ids.size(); ++j) {
        const std::size_t col = first_column + j * column_stride;
        if (ids[j].empty()) throw ParseError("empty sample id", line, col);
        if (!seen.insert(ids[j]).second) throw ParseError("duplicate sample id '" + ids[j] + "'", line, col);
    }
}

ExpressionMatrix finish(Builder& b, std::vector<std::string> samples) {
    const std::size_t ns = samples.size();
    const std::size_t ng = b.genes.size();
    return ExpressionMatrix(std::move(b.genes), std::move(samples), Matrix(ng, ns, std::move(b.values)));
}

ExpressionMatrix parse_tsv(std::istream& in) {
    LineReader reader(in);
    std::string line;
    if (!reader.next(line)) throw ParseError("empty file", 1);
    const std::size_t header_line = reader.line();
    auto header = detail::split(line, '\t');
    std::vector<std::string> samples;
    for (auto h : header) samples.emplace_back(detail::trim(h));

    Builder b;
    bool first = true;
    while (reader.next(line)) {
        auto fields = detail::split(line, '\t');
        if (first) {
            // A header with one field per data column carries a corner label.
            if (fields.size() == samples.size() && samples.size() >= 2) samples.erase(samples.begin());
            if (samples.empty()) throw ParseError("header has no sample ids", header_line);
            check_sample_ids(samples, header_line, 1);
            first = false;
        }
        if (fields.size() != samples.size() + 1)
            throw ParseError("dimension mismatch: expected " + std::to_string(samples.size() + 1) +
                                 " fields (gene id + " + std::to_string(samples.size()) + " samples), found " +
                                 std::to_string(fields.size()),
                             reader.line(),
                             fields.size() < samples.size() + 1 ? fields.size() + 1 : samples.size() + 2);
        b.add_gene(fields[0], reader.line(), 1);
        for (std::size_t j = 0; j < samples.size(); ++j)
            b.values.push_back(parse_cell(fields[j + 1], reader.line(), j + 2));
    }
    if (b.genes.empty()) throw ParseError("no gene rows after the header", header_line + 1);
    return finish(b, std::move(samples));
}

ExpressionMatrix parse_gct(std::istream& in) {
    LineReader reader(in);
    std::string line;
    if (!reader.next_raw(line) || detail::trim(line).empty()) throw ParseError("empty file", 1);
    if (detail::trim(line).substr(0, 2) != "#1")
        throw ParseError("expected GCT version line \"#1.2\"", reader.line(), 1);

    if (!reader.next_raw(line)) throw ParseError("missing GCT dimension line", 2);
    std::vector<std::string_view> dims;
    for (auto tok : detail::split(detail::trim(line), '\t'))
        for (auto t2 : detail::split(tok, ' '))
            if (!detail::trim(t2).empty()) dims.push_back(t2);
    if (dims.size() < 2) throw ParseError("GCT dimension line must hold \"<rows>\\t<columns>\"", reader.line(), 1);
    auto declared_rows = detail::parse_uint(dims[0]);
    auto declared_cols = detail::parse_uint(dims[1]);
    if (!declared_rows) throw ParseError("bad row count '" + std::string(dims[0]) + "'", reader.line(), 1);
    if (!declared_cols) throw ParseError("bad column count '" + std::string(dims[1]) + "'", reader.line(), 2);
    const std::size_t ns = *declared_cols;

    if (!reader.next(line)) throw ParseError("missing GCT column header", reader.line() + 1);
    const std::size_t header_line = reader.line();
    auto header = detail::split(line, '\t');
    if (header.size() != ns + 2)
        throw ParseError("dimension mismatch: header has " + std::to_string(header.size() >= 2 ? header.size() - 2 : 0) +
                             " sample columns but the dimension line declares " + std::to_string(ns),
                         header_line);
    std::vector<std::string> samples;
    for (std::size_t j = 2; j < header.size(); ++j) samples.emplace_back(detail::trim(header[j]));
    check_sample_ids(samples, header_line, 3);

    Builder b;
    while (reader.next(line)) {
        if (b.genes.size() == *declared_rows)
            throw ParseError("dimension mismatch: more data rows than the declared " +
                                 std::to_string(*declared_rows),
                             reader.line());
        auto fields = detail::split(line, '\t');
        if (fields.size() != ns + 2)
            throw ParseError("dimension mismatch: expected " + std::to_string(ns + 2) + " fields, found " +
                                 std::to_string(fields.size()),
                             reader.line());
        b.add_gene(fields[0], reader.line(), 1);
        for (std::size_t j = 0; j < ns; ++j) b.values.push_back(parse_cell(fields[j + 2], reader.line(), j + 3));
    }
    if (b.genes.size() != *declared_rows)
        throw ParseError("dimension mismatch: declared " + std::to_string(*declared_rows) + " rows but found " +
                             std::to_string(b.genes.size()),
                         reader.line() + 1);
    return finish(b, std::move(samples));
}

// RES: "Description<TAB>Accession<TAB>s1<TAB><TAB>s2<TAB>..." then a sample
// description line, then the row count, then rows of
// description, accession, (value, call) pairs.
ExpressionMatrix parse_res(std::istream& in) {
    LineReader reader(in);
    std::string line;
    if (!reader.next(line)) throw ParseError("empty file", 1);
    const std::size_t header_line = reader.line();
    auto header = detail::split(line, '\t');
    while (header.size() > 2 && detail::trim(header.back()).empty()) header.pop_back();
    if (header.size() < 3) throw ParseError("RES header has no sample columns", header_line);
    std::vector<std::string> samples;
    for (std::size_t j = 2; j < header.size(); j += 2) samples.emplace_back(detail::trim(header[j]));
    check_sample_ids(samples, header_line, 3, 2);
    const std::size_t ns = samples.size();

    if (!reader.next_raw(line)) throw ParseError("missing RES sample description line", header_line + 1);
    if (!reader.next(line)) throw ParseError("missing RES row count line", reader.line() + 1);
    auto declared_rows = detail::parse_uint(detail::split(detail::trim(line), '\t')[0]);
    if (!declared_rows) throw ParseError("bad row count '" + line + "'", reader.line(), 1);

    Builder b;
    while (reader.next(line)) {
        if (b.genes.size() == *declared_rows)
            throw ParseError("dimension mismatch: more data rows than the declared " +
                                 std::to_string(*declared_rows),
                             reader.line());
        auto fields = detail::split(line, '\t');
        // The trailing call column may be missing.
        if (fields.size() != 2 + 2 * ns && fields.size() != 1 + 2 * ns)
            throw ParseError("dimension mismatch: expected " + std::to_string(2 + 2 * ns) + " fields, found " +
                                 std::to_string(fields.size()),
                             reader.line());
        b.add_gene(fields[1], reader.line(), 2);
        for (std::size_t j = 0; j < ns; ++j)
            b.values.push_back(parse_cell(fields[2 + 2 * j], reader.line(), 3 + 2 * j));
    }
    if (b.genes.size() != *declared_rows)
        throw ParseError("dimension mismatch: declared " + std::to_string(*declared_rows) + " rows but found " +
                             std::to_string(b.genes.size()),
                         reader.line() + 1);
    return finish(b, std::move(samples));
}

}  // namespace

ExpressionMatrix parse_matrix(std::istream& in, MatrixFormat format) {
    switch (format) {
        case MatrixFormat::tsv: return parse_tsv(in);
        case MatrixFormat::gct: return parse_gct(in);
        case MatrixFormat::res: return parse_res(in);
    }
    throw ConfigError("unknown matrix format");
}

ExpressionMatrix read_matrix_file(const std::string& path, MatrixFormat format) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "'");
    try {
        return parse_matrix(in, format);
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what(), e.line(), e.column());
    }
}

ExpressionMatrix read_matrix_file(const std::string& path) { return read_matrix_file(path, format_from_path(path)); }

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ec == std::errc{} ? ptr : buf);
}

void write_tsv(std::ostream& out, const ExpressionMatrix& m) {
    for (std::size_t j = 0; j < m.n_samples(); ++j) out << (j ? "\t" : "") << m.sample_ids()[j];
    out << '\n';
    for (std::size_t i = 0; i < m.n_genes(); ++i) {
        out << m.gene_ids()[i];
        for (double v : m.gene(i)) out << '\t' << format_double(v);
        out << '\n';
    }
}

void write_gct(std::ostream& out, const ExpressionMatrix& m) {
    out << "#1.2\n" << m.n_genes() << '\t' << m.n_samples() << "\nName\tDescription";
    for (const auto& s : m.sample_ids()) out << '\t' << s;
    out << '\n';
    for (std::size_t i = 0; i < m.n_genes(); ++i) {
        out << m.gene_ids()[i] << '\t' << m.gene_ids()[i];
        for (double v : m.gene(i)) out << '\t' << format_double(v);
        out << '\n';
    }
}

double row_mean(std::span<const double> row) {
    if (row.empty()) return 0.0;
    return std::accumulate(row.begin(), row.end(), 0.0) / static_cast<double>(row.size());
}

double row_sample_variance(std::span<const double> row) {
    if (row.size() < 2) return 0.0;
    const double mean = row_mean(row);
    double ss = 0.0;
    for (double v : row) ss += (v - mean) * (v - mean);
    return ss / static_cast<double>(row.size() - 1);
}

double row_sample_sd(std::span<const double> row) { return std::sqrt(row_sample_variance(row)); }

}  // namespace pfcm
