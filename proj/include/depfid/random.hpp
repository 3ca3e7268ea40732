#pragma once

#include <array>
#include <cstdint>

namespace depfid {

/// Reproducible 64-bit generator: xoshiro256** whose state is filled by
/// SplitMix64 from a (seed, stream) key. Distinct stream ids give
/// statistically independent sequences, so per-replicate work can be
/// seeded by index and run in any order.
///
/// Uniform doubles use the top 53 bits. Normal variates are produced by the
/// inverse normal CDF of an open-interval uniform, never by Box-Muller or a
/// ziggurat, so every platform produces the same stream.
class Rng {
public:
    Rng(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t next_u64();
    /// Uniform in [0, 1).
    double uniform();
    /// Uniform in the open interval (0, 1).
    double uniform_open();
    /// Uniform integer in [0, bound); bound must be positive.
    std::uint64_t uniform_index(std::uint64_t bound);
    double standard_normal();
    /// Gamma(shape, 1) by Marsaglia-Tsang; shapes below 1 use the U^{1/a} boost.
    double gamma(double shape);
    /// χ²_ν / ν.
    double chi_square_over_df(double nu);

private:
    std::array<std::uint64_t, 4> state_{};
};

std::uint64_t splitmix64(std::uint64_t& x);

} // namespace depfid
