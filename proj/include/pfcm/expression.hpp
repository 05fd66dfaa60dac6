#pragma once

#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pfcm/matrix.hpp"

namespace pfcm {

/// Genes x samples expression levels with row and column identifiers.
///
/// Immutable after construction. The constructor enforces the invariants:
/// at least one gene and one sample, unique identifiers on both axes, and
/// finite values only.
class ExpressionMatrix {
public:
    ExpressionMatrix(std::vector<std::string> gene_ids, std::vector<std::string> sample_ids,
                     Matrix values);

    std::size_t n_genes() const noexcept { return values_.rows(); }
    std::size_t n_samples() const noexcept { return values_.cols(); }

    const std::vector<std::string>& gene_ids() const noexcept { return gene_ids_; }
    const std::vector<std::string>& sample_ids() const noexcept { return sample_ids_; }
    const Matrix& values() const noexcept { return values_; }

    /// The gene vector of row i.
    std::span<const double> gene(std::size_t i) const { return values_.row(i); }

    /// New matrix holding the listed rows, in the order given.
    ExpressionMatrix select_genes(std::span<const std::size_t> indices) const;

    bool operator==(const ExpressionMatrix&) const = default;

private:
    std::vector<std::string> gene_ids_;
    std::vector<std::string> sample_ids_;
    Matrix values_;
};

enum class MatrixFormat { tsv, gct, res };

MatrixFormat parse_format(std::string_view name);
std::string_view format_name(MatrixFormat format);

/// Picks a format from a file extension (.gct, .res, anything else is TSV).
MatrixFormat format_from_path(std::string_view path);

/// Reads a matrix. Throws ParseError carrying the offending line/column.
ExpressionMatrix parse_matrix(std::istream& in, MatrixFormat format);
ExpressionMatrix read_matrix_file(const std::string& path, MatrixFormat format);
ExpressionMatrix read_matrix_file(const std::string& path);

/// Writes the TSV layout: a header of sample ids, then one line per gene.
/// Numbers use the shortest representation that reads back exactly.
void write_tsv(std::ostream& out, const ExpressionMatrix& m);
void write_gct(std::ostream& out, const ExpressionMatrix& m);

/// Shortest round-trip decimal form of a double.
std::string format_double(double value);

double row_mean(std::span<const double> row);

/// Standard deviation with the n - 1 denominator; 0 for rows of length < 2.
double row_sample_sd(std::span<const double> row);
double row_sample_variance(std::span<const double> row);

}  // namespace pfcm
