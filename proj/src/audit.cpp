#include "depfid/audit.hpp"

#include <algorithm>
#include <array>

#include "depfid/errors.hpp"

namespace depfid {

namespace {

constexpr std::size_t kDefaultPredictorCount = 9;

std::vector<std::size_t> default_predictors(std::size_t target, std::size_t d) {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < d && out.size() < kDefaultPredictorCount; ++j) {
        if (j != target) out.push_back(j);
    }
    return out;
}

} // namespace

std::string tool_version() {
#ifdef DEPFID_VERSION
    return DEPFID_VERSION;
#else
    return "0.0.0";
#endif
}

PcaProjection pca_project(const DataMatrix& ref, const DataMatrix& syn, std::size_t p) {
    if (ref.d() != syn.d()) throw Error(ErrorKind::ShapeMismatch, "datasets differ in dimension");
    const std::size_t d = ref.d();
    if (p < 1 || p > d) throw Error(ErrorKind::IndexOutOfRange, "PCA dimension must lie in [1, d]");

    const EigenSystem es = sym_eigendecompose(estimate_covariance(ref));
    const Matrix basis = principal_subspace(es, p);
    const std::vector<double> centre = column_means(ref.values());

    auto project = [&](const DataMatrix& data) {
        Matrix out(data.n(), p);
        for (std::size_t i = 0; i < data.n(); ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                const double x = data(i, j) - centre[j];
                for (std::size_t k = 0; k < p; ++k) out(i, k) += x * basis(j, k);
            }
        }
        return DataMatrix(std::move(out));
    };

    double total = 0.0;
    double kept = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
        const double lambda = std::max(0.0, es.eigenvalues[k]);
        total += lambda;
        if (k < p) kept += lambda;
    }
    return {project(ref), project(syn), total > 0.0 ? kept / total : 1.0};
}

AuditReport run_audit(const DataMatrix& ref_in, const DataMatrix& syn_in,
                      const AuditOptions& options) {
    if (ref_in.d() != syn_in.d()) throw Error(ErrorKind::ShapeMismatch, "datasets differ in dimension");

    AuditReport report;
    report.seed = options.seed;
    report.tool_version = tool_version();
    report.dataset_meta.n_ref = ref_in.n();
    report.dataset_meta.n_syn = syn_in.n();

    std::optional<PcaProjection> projection;
    if (options.pca_dims) {
        projection = pca_project(ref_in, syn_in, *options.pca_dims);
        report.dataset_meta.pca_dims = options.pca_dims;
        report.dataset_meta.variance_explained = projection->variance_explained;
    }
    const DataMatrix& ref = projection ? projection->ref_proj : ref_in;
    const DataMatrix& syn = projection ? projection->syn_proj : syn_in;
    const std::size_t d = ref.d();
    report.dataset_meta.d = d;
    if (d < 2) throw Error(ErrorKind::InvalidArgument, "the audit needs at least 2 dimensions");

    const SymMatrix cov_ref = estimate_covariance(ref, options.cov_mode);
    const SymMatrix cov_syn = estimate_covariance(syn, options.cov_mode);
    report.verdict = stability_verdict(cov_ref, cov_syn, 1);
    report.rv = rv_coefficient(cov_ref, cov_syn);
    report.ks = ks_profile(ref, syn);

    std::vector<std::size_t> dims = options.subspace_dims;
    std::sort(dims.begin(), dims.end());
    dims.erase(std::unique(dims.begin(), dims.end()), dims.end());
    const EigenSystem es_ref = sym_eigendecompose(cov_ref);
    const EigenSystem es_syn = sym_eigendecompose(cov_syn);
    for (std::size_t r : dims) {
        if (r < 1 || r >= d) continue;
        SubspaceEntry entry;
        entry.r = r;
        entry.sin_theta =
            subspace_sin_theta(principal_subspace(es_ref, r), principal_subspace(es_syn, r));
        entry.eigengap = leading_eigengap(es_ref, r);
        entry.bound = davis_kahan_bound(report.verdict.d_sigma, entry.eigengap);
        report.subspace.push_back(entry);
    }

    const std::size_t target = options.slope_target;
    if (target >= d) throw Error(ErrorKind::IndexOutOfRange, "slope target out of range");
    const std::vector<std::size_t> predictors = options.slope_predictors.empty()
                                                    ? default_predictors(target, d)
                                                    : options.slope_predictors;
    const auto slopes_ref = pairwise_slopes(ref, target, predictors);
    const auto slopes_syn = pairwise_slopes(syn, target, predictors);
    // Matched-variance slope bound on the (target, first predictor) block.
    const SymMatrix emp_ref = options.cov_mode == CovMode::Empirical ? cov_ref : estimate_covariance(ref);
    const SymMatrix emp_syn = options.cov_mode == CovMode::Empirical ? cov_syn : estimate_covariance(syn);
    const std::array<std::size_t, 2> block{target, predictors.front()};
    report.slopes = slope_instability(
        target, predictors, slopes_ref, slopes_syn, emp_ref(predictors.front(), predictors.front()),
        emp_syn(predictors.front(), predictors.front()),
        d_sigma(emp_ref.restrict_to(block), emp_syn.restrict_to(block)));

    if (options.bootstrap_b) {
        report.bootstrap = bootstrap_d_sigma(ref, syn, *options.bootstrap_b, options.seed, options.cov_mode);
    }
    if (options.subsets) {
        report.sensitivity =
            subset_sensitivity(cov_ref, cov_syn, options.subsets->size, options.subsets->count, options.seed);
    }
    if (options.mmd) {
        const double bandwidth = median_heuristic_bandwidth(stack_rows(ref, syn), options.seed);
        report.mmd = mmd_unbiased(ref, syn, bandwidth);
    }
    if (options.copula_mmd) {
        report.copula_mmd = copula_mmd(ref, syn, options.seed);
    }
    return report;
}

int exit_code_policy(const AuditReport& report, bool fail_on_unstable) {
    if (fail_on_unstable && report.verdict.regime == Regime::Unstable) return kExitUnstable;
    return kExitOk;
}

} // namespace depfid
