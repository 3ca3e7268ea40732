#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "depfid/matrix.hpp"

namespace depfid {

enum class Regime { Stable, Unstable };

/// Covariance divergence against the reference's eigengap. The regime is
/// stable exactly when ratio < 1; a zero eigengap gives ratio = +inf.
struct StabilityVerdict {
    double d_sigma = 0.0;
    double d_sigma_normalized = 0.0;
    double eigengap = 0.0;
    double ratio = 0.0;
    Regime regime = Regime::Stable;
};

struct DavisKahanBound {
    double value = 0.0;   // 2·D_Σ/γ, +inf when γ = 0
    bool vacuous = false; // γ = 0 or value ≥ 1
};

struct SlopeComparison {
    std::size_t target_index = 0;
    std::vector<std::size_t> predictor_indices;
    std::vector<double> slopes_ref;
    std::vector<double> slopes_syn;
    std::vector<double> abs_deltas;
    std::size_t sign_flips = 0;
    /// D_Σ/(√2·σ_X²); absent when the predictor variances of the two sides
    /// differ by more than 5% relative.
    std::optional<double> theorem2_bound;
};

inline constexpr double kSlopeSignTolerance = 1e-6;
inline constexpr double kMatchedVarianceTolerance = 0.05;

/// ‖Σ_ref − Σ_syn‖_F.
double d_sigma(const SymMatrix& cov_ref, const SymMatrix& cov_syn);

/// Frobenius distance between the induced correlation matrices.
double d_sigma_normalized(const SymMatrix& cov_ref, const SymMatrix& cov_syn);

/// r is 1-based, 1 ≤ r < d; the eigengap is taken from cov_ref.
StabilityVerdict stability_verdict(const SymMatrix& cov_ref, const SymMatrix& cov_syn,
                                   std::size_t r = 1);

Regime classify_ratio(double ratio);

/// |λ_k(ref) − λ_k(syn)| for each k, both spectra descending.
std::vector<double> weyl_deltas(const SymMatrix& cov_ref, const SymMatrix& cov_syn);

DavisKahanBound davis_kahan_bound(double d_sigma, double eigengap);

/// tr(Σ_ref Σ_syn) / (‖Σ_ref‖_F ‖Σ_syn‖_F).
double rv_coefficient(const SymMatrix& cov_ref, const SymMatrix& cov_syn);

/// Simple-regression slope Cov(target, x_j)/Var(x_j) for each predictor.
std::vector<double> pairwise_slopes(const DataMatrix& data, std::size_t target,
                                    std::span<const std::size_t> predictors);

SlopeComparison slope_instability(std::size_t target, std::span<const std::size_t> predictors,
                                  std::span<const double> slopes_ref,
                                  std::span<const double> slopes_syn, double var_x_ref,
                                  double var_x_syn, double d_sigma);

/// Fraction of rows whose columns i and j both exceed u.
double joint_tail_probability(const DataMatrix& data, std::size_t i, std::size_t j, double u);

} // namespace depfid
