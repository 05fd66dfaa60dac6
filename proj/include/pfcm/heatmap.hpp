#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "pfcm/expression.hpp"

namespace pfcm {

using Rgb = std::array<std::uint8_t, 3>;

/// Colour of one cell relative to its gene's mean and sample standard
/// deviation: black at the mean, shading to pure red at mean + 2 sd and to
/// pure green at mean - 2 sd. A constant row is all black.
Rgb heatmap_color(double value, double mean, double sd);

struct Image {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<Rgb> pixels;  ///< row-major

    Rgb at(std::size_t x, std::size_t y) const { return pixels[y * width + x]; }
};

struct HeatmapOptions {
    std::size_t scale = 1;  ///< each cell becomes a scale x scale block
    /// When set, rows are grouped by cluster (stable within a cluster).
    std::optional<std::vector<std::size_t>> cluster_of_gene;
};

/// One pixel column per sample, one pixel row per gene.
Image render_heatmap(const ExpressionMatrix& m, const HeatmapOptions& opts = {});

/// Binary P6 pixmap.
void write_ppm(std::ostream& out, const Image& img);

}  // namespace pfcm
