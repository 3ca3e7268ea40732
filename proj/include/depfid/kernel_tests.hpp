#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "depfid/matrix.hpp"

namespace depfid {

struct MmdResult {
    double mmd_squared_unbiased = 0.0; // may be slightly negative
    double mmd = 0.0;                  // √max(mmd², 0)
    double bandwidth = 1.0;
    std::size_t n_ref = 0;
    std::size_t n_syn = 0;
};

struct PermutationTest {
    double observed = 0.0; // unbiased MMD² of the original split
    std::vector<double> null_values;
    double null_quantile_95 = 0.0;
    bool significant = false; // observed > 95th percentile of the null
};

inline constexpr std::size_t kExhaustiveBandwidthRows = 2000;
inline constexpr std::size_t kBandwidthSamplePairs = 2'000'000;

/// exp(−‖a−b‖²/(2h²)).
double gaussian_kernel(std::span<const double> a, std::span<const double> b, double bandwidth);

/// Median pairwise Euclidean distance of the rows: exhaustive up to 2000
/// rows, otherwise over 2,000,000 seeded random pairs. Returns 1.0 when the
/// median is zero.
double median_heuristic_bandwidth(const DataMatrix& pooled, std::uint64_t seed);

/// Unbiased U-statistic estimate of MMD² with a Gaussian kernel.
MmdResult mmd_unbiased(const DataMatrix& ref, const DataMatrix& syn, double bandwidth);

/// Column-wise rank/(n+1), average ranks for ties. Accepts n ≥ 1.
Matrix pseudo_observations(const Matrix& data);
DataMatrix pseudo_observations(const DataMatrix& data);

/// MMD on pseudo-observations, bandwidth by median heuristic on the pooled
/// pseudo-observations.
MmdResult copula_mmd(const DataMatrix& ref, const DataMatrix& syn, std::uint64_t seed);

/// Label-permutation null for the unbiased MMD² at a fixed bandwidth.
/// Permutation p is shuffled by stream (seed, p).
PermutationTest mmd_permutation_test(const DataMatrix& ref, const DataMatrix& syn,
                                     double bandwidth, std::size_t n_permutations,
                                     std::uint64_t seed);

/// Copula-domain version: pseudo-observations plus the median-heuristic
/// bandwidth, then the permutation null on the pooled pseudo-observations.
PermutationTest copula_permutation_test(const DataMatrix& ref, const DataMatrix& syn,
                                        std::size_t n_permutations, std::uint64_t seed);

DataMatrix stack_rows(const DataMatrix& a, const DataMatrix& b);

namespace detail {

/// Kernel sums Σ_{i≠j∈X} k, Σ_{i≠j∈Y} k and Σ_{i∈X, j∈Y} k.
struct GramSums {
    double within_ref = 0.0;
    double within_syn = 0.0;
    double cross = 0.0;
};

/// Direct evaluation over every pair, accumulated in fixed row blocks of 256.
GramSums gram_sums_direct(const Matrix& x, const Matrix& y, double bandwidth);

/// Truncated Taylor factorisation exp(−(a−b)²/2h²) = Σ_k φ_k(a)φ_k(b) per
/// coordinate, with per-entry truncation error below 1e-16. Returns nullopt
/// when the data span is too wide relative to the bandwidth or the tensor
/// feature count would exceed `max_features`.
std::optional<GramSums> gram_sums_factored(const Matrix& x, const Matrix& y, double bandwidth,
                                           std::size_t max_features = 1024);

double mmd_from_sums(const GramSums& sums, std::size_t m, std::size_t n);

} // namespace detail

} // namespace depfid
