#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "depfid/linalg.hpp"
#include "depfid/matrix.hpp"

namespace depfid {

/// Percentile bootstrap summary. `observed` is not required to fall inside
/// the interval: D_Σ is biased upward under resampling when n/d is small.
struct BootstrapSummary {
    double observed = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double standard_error = 0.0;
    std::size_t n_resamples = 0;
    std::uint64_t seed = 0;
    std::vector<double> replicates;
};

struct SpearmanResult {
    double r = 0.0;
    double p = 1.0;
};

struct SensitivityResult {
    std::size_t subset_size = 0;
    std::size_t n_subsets = 0;
    std::vector<double> d_sigma_values;
    std::vector<double> one_minus_rv_values;
    /// Absent when either metric list is constant (e.g. syn = ref), where
    /// rank correlation and standardisation are undefined.
    std::optional<double> spearman_r;
    std::optional<double> spearman_p;
    std::optional<double> ks_p;
};

inline constexpr std::size_t kDefaultBootstrapResamples = 500;

/// Resamples rows of both datasets independently, replicate b using stream
/// (seed, b); CI is the [2.5%, 97.5%] percentile interval of the replicates.
BootstrapSummary bootstrap_d_sigma(const DataMatrix& ref, const DataMatrix& syn,
                                   std::size_t n_resamples, std::uint64_t seed,
                                   CovMode mode = CovMode::Empirical);

/// Rank correlation with a two-sided t-approximation p-value on n−2 df.
SpearmanResult spearman(std::span<const double> a, std::span<const double> b);

/// D_Σ and 1−RV on random column subsets (subset k drawn from stream
/// (seed, k)), then Spearman between the two lists and a KS test between
/// their z-scored versions.
SensitivityResult subset_sensitivity(const DataMatrix& ref, const DataMatrix& syn,
                                     std::size_t subset_size, std::size_t n_subsets,
                                     std::uint64_t seed, CovMode mode = CovMode::Empirical);

/// Same as above on already-estimated covariance matrices.
SensitivityResult subset_sensitivity(const SymMatrix& cov_ref, const SymMatrix& cov_syn,
                                     std::size_t subset_size, std::size_t n_subsets,
                                     std::uint64_t seed);

} // namespace depfid
