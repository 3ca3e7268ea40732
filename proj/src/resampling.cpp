#include "depfid/resampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "depfid/diagnostics.hpp"
#include "depfid/errors.hpp"
#include "depfid/marginals.hpp"
#include "depfid/random.hpp"
#include "depfid/special_functions.hpp"
#include "depfid/stats_util.hpp"

namespace depfid {

namespace {

constexpr std::uint64_t kSubsetStream = 0x53554253ULL << 32;

bool is_constant(std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

std::vector<double> z_scores(std::span<const double> v) {
    const double m = mean(v);
    const double sd = sample_sd(v);
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = (v[i] - m) / sd;
    return out;
}

} // namespace

BootstrapSummary bootstrap_d_sigma(const DataMatrix& ref, const DataMatrix& syn,
                                   std::size_t n_resamples, std::uint64_t seed, CovMode mode) {
    if (ref.d() != syn.d()) throw Error(ErrorKind::ShapeMismatch, "datasets differ in dimension");
    if (n_resamples < 1) throw Error(ErrorKind::InvalidArgument, "need at least one resample");

    BootstrapSummary out;
    out.seed = seed;
    out.n_resamples = n_resamples;
    out.observed = d_sigma(estimate_covariance(ref, mode), estimate_covariance(syn, mode));

    std::vector<std::size_t> rows_ref(ref.n());
    std::vector<std::size_t> rows_syn(syn.n());
    out.replicates.reserve(n_resamples);
    for (std::size_t b = 0; b < n_resamples; ++b) {
        Rng rng(seed, b);
        for (auto& r : rows_ref) r = static_cast<std::size_t>(rng.uniform_index(ref.n()));
        for (auto& r : rows_syn) r = static_cast<std::size_t>(rng.uniform_index(syn.n()));
        const SymMatrix cov_ref = estimate_covariance_rows(ref.values(), rows_ref, mode);
        const SymMatrix cov_syn = estimate_covariance_rows(syn.values(), rows_syn, mode);
        out.replicates.push_back(d_sigma(cov_ref, cov_syn));
    }
    out.ci_low = percentile(out.replicates, 0.025);
    out.ci_high = percentile(out.replicates, 0.975);
    out.standard_error = sample_sd(out.replicates);
    return out;
}

SpearmanResult spearman(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw Error(ErrorKind::ShapeMismatch, "Spearman inputs differ in length");
    if (a.size() < 3) throw Error(ErrorKind::InsufficientSamples, "Spearman needs at least 3 pairs");
    if (is_constant(a) || is_constant(b)) {
        throw Error(ErrorKind::DegenerateInput, "Spearman correlation of a constant sequence");
    }
    const auto ra = average_ranks(a);
    const auto rb = average_ranks(b);
    const double ma = mean(ra);
    const double mb = mean(rb);
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < ra.size(); ++i) {
        const double da = ra[i] - ma;
        const double db = rb[i] - mb;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    SpearmanResult out;
    out.r = std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
    const double df = static_cast<double>(a.size() - 2);
    const double one_minus_r2 = 1.0 - out.r * out.r;
    if (one_minus_r2 <= 0.0) {
        out.p = 0.0;
    } else {
        const double t = out.r * std::sqrt(df / one_minus_r2);
        out.p = std::clamp(2.0 * student_t_upper_tail(std::abs(t), df), 0.0, 1.0);
    }
    return out;
}

SensitivityResult subset_sensitivity(const SymMatrix& cov_ref, const SymMatrix& cov_syn,
                                     std::size_t subset_size, std::size_t n_subsets,
                                     std::uint64_t seed) {
    const std::size_t d = cov_ref.dim();
    if (cov_syn.dim() != d) throw Error(ErrorKind::ShapeMismatch, "covariances differ in dimension");
    if (subset_size < 1 || subset_size > d) {
        throw Error(ErrorKind::IndexOutOfRange, "subset size must lie in [1, d]");
    }
    if (n_subsets < 3) throw Error(ErrorKind::InvalidArgument, "need at least 3 subsets");

    SensitivityResult out;
    out.subset_size = subset_size;
    out.n_subsets = n_subsets;
    std::vector<std::size_t> pool(d);
    for (std::size_t k = 0; k < n_subsets; ++k) {
        Rng rng(seed, kSubsetStream + k);
        std::iota(pool.begin(), pool.end(), std::size_t{0});
        // partial Fisher-Yates: first subset_size slots become the subset
        for (std::size_t i = 0; i < subset_size; ++i) {
            const auto j = i + static_cast<std::size_t>(rng.uniform_index(d - i));
            std::swap(pool[i], pool[j]);
        }
        std::vector<std::size_t> subset(pool.begin(),
                                        pool.begin() + static_cast<std::ptrdiff_t>(subset_size));
        std::sort(subset.begin(), subset.end());
        const SymMatrix a = cov_ref.restrict_to(subset);
        const SymMatrix b = cov_syn.restrict_to(subset);
        out.d_sigma_values.push_back(d_sigma(a, b));
        out.one_minus_rv_values.push_back(1.0 - rv_coefficient(a, b));
    }
    if (!is_constant(out.d_sigma_values) && !is_constant(out.one_minus_rv_values)) {
        const SpearmanResult s = spearman(out.d_sigma_values, out.one_minus_rv_values);
        out.spearman_r = s.r;
        out.spearman_p = s.p;
        out.ks_p = ks_two_sample(z_scores(out.d_sigma_values), z_scores(out.one_minus_rv_values)).p_value;
    }
    return out;
}

SensitivityResult subset_sensitivity(const DataMatrix& ref, const DataMatrix& syn,
                                     std::size_t subset_size, std::size_t n_subsets,
                                     std::uint64_t seed, CovMode mode) {
    if (ref.d() != syn.d()) throw Error(ErrorKind::ShapeMismatch, "datasets differ in dimension");
    if (subset_size > ref.d()) throw Error(ErrorKind::IndexOutOfRange, "subset size exceeds d");
    return subset_sensitivity(estimate_covariance(ref, mode), estimate_covariance(syn, mode),
                              subset_size, n_subsets, seed);
}

} // namespace depfid
