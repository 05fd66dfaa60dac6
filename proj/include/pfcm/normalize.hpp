#pragma once

#include <string_view>

#include "pfcm/expression.hpp"

namespace pfcm {

enum class Normalization { none, mean_relative, zscore };

Normalization parse_normalization(std::string_view name);
std::string_view normalization_name(Normalization n);

struct NormalizeOptions {
    /// Drop degenerate rows instead of failing with DegenerateRowsError.
    bool drop_degenerate = false;
};

/// m'_ij = (m_ij - mean_i) / mean_i. Rows with |mean| <= 1e-12 are degenerate.
ExpressionMatrix normalize_mean_relative(const ExpressionMatrix& m, NormalizeOptions opts = {});

/// m'_ij = (m_ij - mean_i) / sd_i with the sample (n - 1) standard deviation.
/// Requires at least two samples; rows with sd <= 1e-12 are degenerate.
ExpressionMatrix normalize_zscore(const ExpressionMatrix& m, NormalizeOptions opts = {});

ExpressionMatrix normalize(const ExpressionMatrix& m, Normalization method, NormalizeOptions opts = {});

}  // namespace pfcm
