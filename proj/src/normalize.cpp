#include "pfcm/normalize.hpp"

#include <cmath>
#include <string>

#include "pfcm/error.hpp"

namespace pfcm {

namespace {

constexpr double kDegenerateTol = 1e-12;

// Applies `transform(row, out)` to every row that `scale_of` accepts. A row
// is degenerate when |scale| <= kDegenerateTol.
template <class ScaleFn>
ExpressionMatrix normalize_rows(const ExpressionMatrix& m, NormalizeOptions opts, const char* reason,
                                ScaleFn scale_of) {
    std::vector<std::size_t> keep;
    std::vector<std::string> degenerate;
    std::vector<std::pair<double, double>> stats;  // (mean, scale)
    for (std::size_t i = 0; i < m.n_genes(); ++i) {
        const auto row = m.gene(i);
        const double mean = row_mean(row);
        const double scale = scale_of(row, mean);
        if (!(std::abs(scale) > kDegenerateTol)) {
            degenerate.push_back(m.gene_ids()[i]);
            continue;
        }
        keep.push_back(i);
        stats.emplace_back(mean, scale);
    }
    if (!degenerate.empty() && !opts.drop_degenerate) throw DegenerateRowsError(reason, std::move(degenerate));
    if (keep.empty()) throw DataError(std::string("every row is degenerate (") + reason + ")");

    Matrix out(keep.size(), m.n_samples());
    std::vector<std::string> ids;
    ids.reserve(keep.size());
    for (std::size_t r = 0; r < keep.size(); ++r) {
        const auto src = m.gene(keep[r]);
        const auto [mean, scale] = stats[r];
        auto dst = out.row(r);
        for (std::size_t j = 0; j < src.size(); ++j) dst[j] = (src[j] - mean) / scale;
        ids.push_back(m.gene_ids()[keep[r]]);
    }
    return ExpressionMatrix(std::move(ids), m.sample_ids(), std::move(out));
}

}  // namespace

Normalization parse_normalization(std::string_view name) {
    if (name == "none") return Normalization::none;
    if (name == "mean_relative" || name == "mean-relative") return Normalization::mean_relative;
    if (name == "zscore" || name == "z-score") return Normalization::zscore;
    throw ConfigError("unknown normalization '" + std::string(name) + "' (expected none, mean_relative or zscore)");
}

std::string_view normalization_name(Normalization n) {
    switch (n) {
        case Normalization::none: return "none";
        case Normalization::mean_relative: return "mean_relative";
        case Normalization::zscore: return "zscore";
    }
    return "none";
}

ExpressionMatrix normalize_mean_relative(const ExpressionMatrix& m, NormalizeOptions opts) {
    return normalize_rows(m, opts, "zero-mean rows cannot be mean-normalized",
                          [](std::span<const double>, double mean) { return mean; });
}

ExpressionMatrix normalize_zscore(const ExpressionMatrix& m, NormalizeOptions opts) {
    if (m.n_samples() < 2) throw DataError("z-score normalization needs at least 2 samples");
    return normalize_rows(m, opts, "zero-variance rows cannot be z-scored",
                          [](std::span<const double> row, double) { return row_sample_sd(row); });
}

ExpressionMatrix normalize(const ExpressionMatrix& m, Normalization method, NormalizeOptions opts) {
    switch (method) {
        case Normalization::none: return m;
        case Normalization::mean_relative: return normalize_mean_relative(m, opts);
        case Normalization::zscore: return normalize_zscore(m, opts);
    }
    return m;
}

}  // namespace pfcm
