#include "pfcm/heatmap.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pfcm/error.hpp"

namespace pfcm {

Rgb heatmap_color(double value, double mean, double sd) {
    if (!(sd > 0.0)) return {0, 0, 0};
    const double t = std::clamp((value - mean) / (2.0 * sd), -1.0, 1.0);
    const auto level = static_cast<std::uint8_t>(std::lround(255.0 * std::abs(t)));
    if (t >= 0.0) return {level, 0, 0};
    return {0, level, 0};
}

Image render_heatmap(const ExpressionMatrix& m, const HeatmapOptions& opts) {
    if (opts.scale < 1) throw ConfigError("heatmap: scale must be >= 1");
    std::vector<std::size_t> order(m.n_genes());
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (opts.cluster_of_gene) {
        const auto& cl = *opts.cluster_of_gene;
        if (cl.size() != m.n_genes())
            throw DataError("heatmap: partition covers " + std::to_string(cl.size()) + " genes, matrix has " +
                            std::to_string(m.n_genes()));
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return cl[a] < cl[b]; });
    }

    Image img;
    img.width = m.n_samples() * opts.scale;
    img.height = m.n_genes() * opts.scale;
    img.pixels.resize(img.width * img.height);
    for (std::size_t r = 0; r < order.size(); ++r) {
        const auto row = m.gene(order[r]);
        const double mean = row_mean(row);
        const double sd = row_sample_sd(row);
        for (std::size_t c = 0; c < row.size(); ++c) {
            const Rgb px = heatmap_color(row[c], mean, sd);
            for (std::size_t dy = 0; dy < opts.scale; ++dy)
                for (std::size_t dx = 0; dx < opts.scale; ++dx)
                    img.pixels[(r * opts.scale + dy) * img.width + c * opts.scale + dx] = px;
        }
    }
    return img;
}

void write_ppm(std::ostream& out, const Image& img) {
    out << "P6\n" << img.width << ' ' << img.height << "\n255\n";
    for (const auto& px : img.pixels) out.write(reinterpret_cast<const char*>(px.data()), 3);
}

}  // namespace pfcm
