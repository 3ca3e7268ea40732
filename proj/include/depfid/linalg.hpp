#pragma once

#include <cstddef>
#include <span>

#include "depfid/matrix.hpp"

namespace depfid {

enum class CovMode { Empirical, LedoitWolf };

/// Sample covariance with the n-1 denominator, or its Ledoit-Wolf shrinkage
/// toward a scaled identity.
SymMatrix estimate_covariance(const DataMatrix& data, CovMode mode = CovMode::Empirical);

/// Covariance of a row subset of `values` (rows may repeat). Used by the
/// resampling code to avoid materialising every bootstrap replicate.
SymMatrix estimate_covariance_rows(const Matrix& values, std::span<const std::size_t> rows,
                                   CovMode mode = CovMode::Empirical);

std::vector<double> column_means(const Matrix& values);

/// Unit-diagonal rescaling; throws DegenerateVariance on a non-positive
/// diagonal. Tagged Generic when the input is indefinite.
SymMatrix covariance_to_correlation(const SymMatrix& cov);

double frobenius_norm(const Matrix& a);
inline double frobenius_norm(const SymMatrix& a) { return frobenius_norm(a.entries()); }

/// Cyclic Jacobi eigendecomposition.
///
/// Sweeps until every off-diagonal magnitude is at most 1e-12·‖a‖_F, giving
/// up after 100 sweeps. Eigenpairs come back in descending order; exactly
/// equal eigenvalues keep their original diagonal order. Each eigenvector is
/// signed so that its largest-magnitude component is positive, with
/// magnitude ties going to the lowest index.
EigenSystem sym_eigendecompose(const SymMatrix& a);

/// λ_r − λ_{r+1} with r 1-based; requires 1 ≤ r < d.
double leading_eigengap(const EigenSystem& es, std::size_t r);

/// Lower-triangular L with L·Lᵀ = a.
Matrix cholesky_factor(const SymMatrix& a);

/// First r eigenvector columns (d×r).
Matrix principal_subspace(const EigenSystem& es, std::size_t r);

/// Spectral norm of sinΘ between the column spaces of two d×r orthonormal
/// bases. Computed as σ_max((I − VVᵀ)U), which equals √(1 − σ_min(UᵀV)²)
/// but keeps full relative precision for nearly aligned subspaces.
double subspace_sin_theta(const Matrix& u, const Matrix& v);

} // namespace depfid
