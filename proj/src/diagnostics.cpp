#include "depfid/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "depfid/errors.hpp"
#include "depfid/linalg.hpp"

namespace depfid {

namespace {

void require_same_dim(const SymMatrix& a, const SymMatrix& b) {
    if (a.dim() != b.dim()) {
        throw Error(ErrorKind::ShapeMismatch, "covariance matrices differ in dimension");
    }
}

} // namespace

double d_sigma(const SymMatrix& cov_ref, const SymMatrix& cov_syn) {
    require_same_dim(cov_ref, cov_syn);
    return frobenius_norm(cov_ref.entries() - cov_syn.entries());
}

double d_sigma_normalized(const SymMatrix& cov_ref, const SymMatrix& cov_syn) {
    require_same_dim(cov_ref, cov_syn);
    const SymMatrix corr_ref = covariance_to_correlation(cov_ref);
    const SymMatrix corr_syn = covariance_to_correlation(cov_syn);
    return frobenius_norm(corr_ref.entries() - corr_syn.entries());
}

Regime classify_ratio(double ratio) {
    return ratio < 1.0 ? Regime::Stable : Regime::Unstable;
}

StabilityVerdict stability_verdict(const SymMatrix& cov_ref, const SymMatrix& cov_syn,
                                   std::size_t r) {
    require_same_dim(cov_ref, cov_syn);
    StabilityVerdict v;
    v.d_sigma = d_sigma(cov_ref, cov_syn);
    v.d_sigma_normalized = d_sigma_normalized(cov_ref, cov_syn);
    v.eigengap = leading_eigengap(sym_eigendecompose(cov_ref), r);
    if (v.eigengap > 0.0) {
        v.ratio = v.d_sigma / v.eigengap;
    } else {
        v.ratio = std::numeric_limits<double>::infinity();
    }
    v.regime = classify_ratio(v.ratio);
    return v;
}

std::vector<double> weyl_deltas(const SymMatrix& cov_ref, const SymMatrix& cov_syn) {
    require_same_dim(cov_ref, cov_syn);
    const auto ev_ref = sym_eigendecompose(cov_ref).eigenvalues;
    const auto ev_syn = sym_eigendecompose(cov_syn).eigenvalues;
    std::vector<double> deltas(ev_ref.size());
    for (std::size_t k = 0; k < deltas.size(); ++k) deltas[k] = std::abs(ev_ref[k] - ev_syn[k]);
    return deltas;
}

DavisKahanBound davis_kahan_bound(double d_sigma, double eigengap) {
    if (eigengap < 0.0) throw Error(ErrorKind::InvalidArgument, "eigengap must be nonnegative");
    if (eigengap == 0.0) return {std::numeric_limits<double>::infinity(), true};
    const double value = 2.0 * d_sigma / eigengap;
    return {value, value >= 1.0};
}

double rv_coefficient(const SymMatrix& cov_ref, const SymMatrix& cov_syn) {
    require_same_dim(cov_ref, cov_syn);
    const double norm_ref = frobenius_norm(cov_ref);
    const double norm_syn = frobenius_norm(cov_syn);
    if (norm_ref == 0.0 || norm_syn == 0.0) {
        throw Error(ErrorKind::DegenerateInput, "RV coefficient of a zero matrix is undefined");
    }
    // tr(AB) for symmetric A, B is the entrywise inner product.
    double trace = 0.0;
    const std::size_t d = cov_ref.dim();
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) trace += cov_ref(i, j) * cov_syn(i, j);
    return std::clamp(trace / (norm_ref * norm_syn), -1.0, 1.0);
}

std::vector<double> pairwise_slopes(const DataMatrix& data, std::size_t target,
                                    std::span<const std::size_t> predictors) {
    if (target >= data.d()) throw Error(ErrorKind::IndexOutOfRange, "target column out of range");
    const std::size_t n = data.n();
    const auto y = data.column(target);
    double y_mean = 0.0;
    for (double v : y) y_mean += v;
    y_mean /= static_cast<double>(n);

    std::vector<double> slopes;
    slopes.reserve(predictors.size());
    for (std::size_t j : predictors) {
        if (j >= data.d()) throw Error(ErrorKind::IndexOutOfRange, "predictor column out of range");
        if (j == target) {
            throw Error(ErrorKind::InvalidArgument, "target column listed among predictors");
        }
        const auto x = data.column(j);
        double x_mean = 0.0;
        for (double v : x) x_mean += v;
        x_mean /= static_cast<double>(n);
        double sxx = 0.0;
        double sxy = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double dx = x[i] - x_mean;
            sxx += dx * dx;
            sxy += dx * (y[i] - y_mean);
        }
        const double var = sxx / static_cast<double>(n - 1);
        if (!(var > 1e-12)) throw Error::degenerate_variance(j);
        slopes.push_back(sxy / sxx);
    }
    return slopes;
}

SlopeComparison slope_instability(std::size_t target, std::span<const std::size_t> predictors,
                                  std::span<const double> slopes_ref,
                                  std::span<const double> slopes_syn, double var_x_ref,
                                  double var_x_syn, double d_sigma) {
    if (slopes_ref.size() != slopes_syn.size() || slopes_ref.size() != predictors.size()) {
        throw Error(ErrorKind::ShapeMismatch, "slope lists differ in length");
    }
    if (!(var_x_ref > 0.0)) throw Error(ErrorKind::InvalidArgument, "var_x must be positive");

    SlopeComparison out;
    out.target_index = target;
    out.predictor_indices.assign(predictors.begin(), predictors.end());
    out.slopes_ref.assign(slopes_ref.begin(), slopes_ref.end());
    out.slopes_syn.assign(slopes_syn.begin(), slopes_syn.end());
    for (std::size_t k = 0; k < slopes_ref.size(); ++k) {
        const double a = slopes_ref[k];
        const double b = slopes_syn[k];
        out.abs_deltas.push_back(std::abs(a - b));
        if (std::abs(a) > kSlopeSignTolerance && std::abs(b) > kSlopeSignTolerance && a * b < 0.0) {
            ++out.sign_flips;
        }
    }
    if (std::abs(var_x_syn - var_x_ref) <= kMatchedVarianceTolerance * var_x_ref) {
        out.theorem2_bound = d_sigma / (std::sqrt(2.0) * var_x_ref);
    }
    return out;
}

double joint_tail_probability(const DataMatrix& data, std::size_t i, std::size_t j, double u) {
    if (i >= data.d() || j >= data.d()) {
        throw Error(ErrorKind::IndexOutOfRange, "tail column out of range");
    }
    std::size_t hits = 0;
    for (std::size_t k = 0; k < data.n(); ++k) {
        if (data(k, i) > u && data(k, j) > u) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(data.n());
}

} // namespace depfid
