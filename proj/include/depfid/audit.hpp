#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "depfid/diagnostics.hpp"
#include "depfid/kernel_tests.hpp"
#include "depfid/linalg.hpp"
#include "depfid/marginals.hpp"
#include "depfid/matrix.hpp"
#include "depfid/resampling.hpp"

namespace depfid {

struct DatasetMeta {
    std::size_t n_ref = 0;
    std::size_t n_syn = 0;
    std::size_t d = 0;
    std::optional<std::size_t> pca_dims;
    std::optional<double> variance_explained;
};

struct SubspaceEntry {
    std::size_t r = 0;
    double sin_theta = 0.0;
    double eigengap = 0.0; // λ_r − λ_{r+1} of the reference
    DavisKahanBound bound;
};

struct AuditReport {
    DatasetMeta dataset_meta;
    StabilityVerdict verdict;
    double rv = 0.0;
    KsProfile ks;
    std::vector<SubspaceEntry> subspace; // ascending, distinct r
    SlopeComparison slopes;
    std::optional<BootstrapSummary> bootstrap;
    std::optional<SensitivityResult> sensitivity;
    std::optional<MmdResult> mmd;
    std::optional<MmdResult> copula_mmd;
    std::uint64_t seed = 0;
    std::string tool_version;
};

struct SubsetOptions {
    std::size_t count = 200;
    std::size_t size = 20;
};

struct AuditOptions {
    std::optional<std::size_t> pca_dims;
    std::vector<std::size_t> subspace_dims{1, 2, 3, 5, 10};
    std::optional<std::size_t> bootstrap_b;
    std::optional<SubsetOptions> subsets;
    bool mmd = false;
    bool copula_mmd = false;
    std::size_t slope_target = 0;
    /// Empty means the first (up to) nine columns other than the target.
    std::vector<std::size_t> slope_predictors;
    std::uint64_t seed = 42;
    CovMode cov_mode = CovMode::Empirical;
};

struct PcaProjection {
    DataMatrix ref_proj;
    DataMatrix syn_proj;
    double variance_explained = 0.0;
};

/// Centres both datasets by the reference column means and projects them
/// onto the top-p eigenvectors of the reference covariance.
PcaProjection pca_project(const DataMatrix& ref, const DataMatrix& syn, std::size_t p);

AuditReport run_audit(const DataMatrix& ref, const DataMatrix& syn, const AuditOptions& options);

/// 0 on success, 2 when `fail_on_unstable` is set and the regime is
/// unstable. Errors map to 1 at the command boundary.
int exit_code_policy(const AuditReport& report, bool fail_on_unstable);

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitUnstable = 2;

std::string tool_version();

} // namespace depfid
