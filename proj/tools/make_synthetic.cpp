// Writes the bundled 100 x 10 synthetic matrix: four Gaussian gene groups
// plus uniform noise genes.
#include <fstream>
#include <iostream>

#include "pfcm/expression.hpp"
#include "pfcm/harness.hpp"
#include "pfcm/rng.hpp"

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: pfcm_make_synthetic <out.tsv>\n";
        return 1;
    }
    pfcm::Rng rng(2024);
    std::vector<pfcm::SyntheticCluster> groups;
    for (int g = 0; g < 4; ++g) {
        pfcm::SyntheticCluster c;
        for (int s = 0; s < 10; ++s) c.center.push_back(8.0 * rng.uniform());
        c.spread = 0.6;
        c.count = 20;
        groups.push_back(c);
    }
    const auto data = pfcm::generate_synthetic(groups, 20, 7);
    std::ofstream out(argv[1]);
    pfcm::write_tsv(out, data.matrix);
    return out ? 0 : 1;
}
