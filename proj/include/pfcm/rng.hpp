#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace pfcm {

/// Seeded generator whose derived draws are identical on every platform.
///
/// The standard distributions are implementation-defined, so uniform and
/// normal variates are derived here directly from the 64-bit engine output.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform on the open interval (0, 1).
    double uniform();

    /// Uniform integer in [0, bound), bound > 0.
    std::size_t below(std::size_t bound);

    /// Standard normal (Box-Muller, both variates used).
    double normal();

    /// `count` distinct indices from [0, n), in draw order.
    std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t count);

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace pfcm
