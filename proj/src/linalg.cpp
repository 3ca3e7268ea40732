#include "depfid/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "depfid/errors.hpp"

namespace depfid {

namespace {

constexpr int kMaxJacobiSweeps = 100;
constexpr double kJacobiRelTolerance = 1e-12;
constexpr double kCholeskyPivotFloor = 1e-14;
constexpr double kOrthonormalTolerance = 1e-8;

void require_orthonormal_columns(const Matrix& u) {
    const Matrix gram = u.transpose() * u;
    for (std::size_t i = 0; i < gram.rows(); ++i) {
        for (std::size_t j = 0; j < gram.cols(); ++j) {
            const double target = i == j ? 1.0 : 0.0;
            if (std::abs(gram(i, j) - target) > kOrthonormalTolerance) {
                throw Error(ErrorKind::InvalidSubspace, "basis columns are not orthonormal");
            }
        }
    }
}

// Ledoit-Wolf intensity for the scaled-identity target. `centered` rows are
// already mean-removed; `sample` is the covariance they produce.
SymMatrix shrink_ledoit_wolf(const Matrix& centered, const Matrix& sample) {
    const std::size_t n = centered.rows();
    const std::size_t d = sample.rows();

    double trace = 0.0;
    for (std::size_t i = 0; i < d; ++i) trace += sample(i, i);
    const double mu = trace / static_cast<double>(d);

    double dispersion = 0.0; // ‖S − μI‖²_F
    double sample_sq = 0.0;  // ‖S‖²_F
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            const double s = sample(i, j);
            const double diff = s - (i == j ? mu : 0.0);
            dispersion += diff * diff;
            sample_sq += s * s;
        }
    }
    if (dispersion <= 0.0) return SymMatrix(sample, SymKind::Covariance);

    // Σ_k ‖x_k x_kᵀ − S‖²_F = Σ_k (‖x_k‖⁴ − 2 x_kᵀ S x_k + ‖S‖²_F)
    double spread = 0.0;
    std::vector<double> sx(d);
    for (std::size_t k = 0; k < n; ++k) {
        const auto x = centered.row(k);
        double norm_sq = 0.0;
        for (std::size_t i = 0; i < d; ++i) norm_sq += x[i] * x[i];
        double quad = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < d; ++j) acc += sample(i, j) * x[j];
            quad += x[i] * acc;
        }
        spread += norm_sq * norm_sq - 2.0 * quad + sample_sq;
    }
    const double nn = static_cast<double>(n);
    const double beta = std::min(spread / (nn * nn), dispersion);
    const double intensity = beta / dispersion;

    Matrix shrunk(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            shrunk(i, j) = (1.0 - intensity) * sample(i, j) + (i == j ? intensity * mu : 0.0);
        }
    }
    return SymMatrix(std::move(shrunk), SymKind::Covariance);
}

} // namespace

std::vector<double> column_means(const Matrix& values) {
    std::vector<double> mean(values.cols(), 0.0);
    for (std::size_t i = 0; i < values.rows(); ++i)
        for (std::size_t j = 0; j < values.cols(); ++j) mean[j] += values(i, j);
    for (double& m : mean) m /= static_cast<double>(values.rows());
    return mean;
}

SymMatrix estimate_covariance_rows(const Matrix& values, std::span<const std::size_t> rows,
                                   CovMode mode) {
    const std::size_t n = rows.size();
    const std::size_t d = values.cols();
    if (n < 2) throw Error(ErrorKind::InsufficientSamples, "covariance needs at least 2 rows");

    std::vector<double> mean(d, 0.0);
    for (std::size_t r : rows) {
        const auto x = values.row(r);
        for (std::size_t j = 0; j < d; ++j) {
            if (!std::isfinite(x[j])) throw Error(ErrorKind::InvalidData, "non-finite entry");
            mean[j] += x[j];
        }
    }
    for (double& m : mean) m /= static_cast<double>(n);

    Matrix centered(n, d);
    for (std::size_t k = 0; k < n; ++k) {
        const auto x = values.row(rows[k]);
        for (std::size_t j = 0; j < d; ++j) centered(k, j) = x[j] - mean[j];
    }

    Matrix cov(d, d);
    for (std::size_t k = 0; k < n; ++k) {
        const auto x = centered.row(k);
        for (std::size_t i = 0; i < d; ++i) {
            const double xi = x[i];
            for (std::size_t j = i; j < d; ++j) cov(i, j) += xi * x[j];
        }
    }
    const double denom = static_cast<double>(n - 1);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = i; j < d; ++j) {
            cov(i, j) /= denom;
            cov(j, i) = cov(i, j);
        }
    }

    if (mode == CovMode::LedoitWolf) return shrink_ledoit_wolf(centered, cov);
    return SymMatrix(std::move(cov), SymKind::Covariance);
}

SymMatrix estimate_covariance(const DataMatrix& data, CovMode mode) {
    std::vector<std::size_t> rows(data.n());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    return estimate_covariance_rows(data.values(), rows, mode);
}

SymMatrix covariance_to_correlation(const SymMatrix& cov) {
    const std::size_t d = cov.dim();
    std::vector<double> scale(d);
    for (std::size_t i = 0; i < d; ++i) {
        const double v = cov(i, i);
        if (!(v > 0.0)) throw Error::degenerate_variance(i);
        scale[i] = std::sqrt(v);
    }
    Matrix corr(d, d);
    bool in_range = true;
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            corr(i, j) = i == j ? 1.0 : cov(i, j) / (scale[i] * scale[j]);
            if (std::abs(corr(i, j)) > 1.0 + 1e-12) in_range = false;
        }
    }
    // An indefinite input yields entries beyond ±1; keep them as a generic
    // unit-diagonal matrix so distances stay defined.
    return SymMatrix(std::move(corr), in_range ? SymKind::Correlation : SymKind::Generic);
}

double frobenius_norm(const Matrix& a) {
    double sum = 0.0;
    for (double v : a.values()) sum += v * v;
    return std::sqrt(sum);
}

EigenSystem sym_eigendecompose(const SymMatrix& input) {
    const std::size_t d = input.dim();
    if (d == 0) throw Error(ErrorKind::InvalidArgument, "cannot decompose an empty matrix");

    Matrix a = input.entries();
    Matrix v = Matrix::identity(d);
    const double tolerance = kJacobiRelTolerance * frobenius_norm(a);

    auto off_diagonal_max = [&] {
        double m = 0.0;
        for (std::size_t p = 0; p < d; ++p)
            for (std::size_t q = p + 1; q < d; ++q) m = std::max(m, std::abs(a(p, q)));
        return m;
    };

    bool converged = false;
    for (int sweep = 0; sweep <= kMaxJacobiSweeps; ++sweep) {
        if (off_diagonal_max() <= tolerance) {
            converged = true;
            break;
        }
        if (sweep == kMaxJacobiSweeps) break;
        for (std::size_t p = 0; p + 1 < d; ++p) {
            for (std::size_t q = p + 1; q < d; ++q) {
                const double apq = a(p, q);
                if (std::abs(apq) <= tolerance) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                for (std::size_t k = 0; k < d; ++k) {
                    if (k == p || k == q) continue;
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = a(p, k) = c * akp - s * akq;
                    a(k, q) = a(q, k) = s * akp + c * akq;
                }
                a(p, p) -= t * apq;
                a(q, q) += t * apq;
                a(p, q) = a(q, p) = 0.0;

                for (std::size_t k = 0; k < d; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
    if (!converged) {
        throw Error(ErrorKind::EigenNoConverge, "Jacobi iteration did not converge in 100 sweeps");
    }

    std::vector<std::size_t> order(d);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

    EigenSystem es;
    es.eigenvalues.resize(d);
    es.eigenvectors = Matrix(d, d);
    for (std::size_t k = 0; k < d; ++k) {
        const std::size_t src = order[k];
        es.eigenvalues[k] = a(src, src);

        double largest = 0.0;
        for (std::size_t i = 0; i < d; ++i) largest = std::max(largest, std::abs(v(i, src)));
        std::size_t lead = 0;
        for (std::size_t i = 0; i < d; ++i) {
            // Magnitudes equal up to rounding count as a tie.
            if (std::abs(v(i, src)) >= largest * (1.0 - 1e-12)) {
                lead = i;
                break;
            }
        }
        const double sign = v(lead, src) < 0.0 ? -1.0 : 1.0;
        for (std::size_t i = 0; i < d; ++i) es.eigenvectors(i, k) = sign * v(i, src);
    }
    return es;
}

double leading_eigengap(const EigenSystem& es, std::size_t r) {
    if (r < 1 || r >= es.dim()) {
        throw Error(ErrorKind::IndexOutOfRange, "eigengap index must satisfy 1 <= r < d");
    }
    return std::max(0.0, es.eigenvalues[r - 1] - es.eigenvalues[r]);
}

Matrix cholesky_factor(const SymMatrix& a) {
    const std::size_t d = a.dim();
    double max_diag = 0.0;
    for (std::size_t i = 0; i < d; ++i) max_diag = std::max(max_diag, a(i, i));
    const double floor = kCholeskyPivotFloor * std::max(1.0, max_diag);

    Matrix l(d, d);
    for (std::size_t j = 0; j < d; ++j) {
        double pivot = a(j, j);
        for (std::size_t k = 0; k < j; ++k) pivot -= l(j, k) * l(j, k);
        if (!(pivot > floor)) throw Error::not_positive_definite(j);
        const double ljj = std::sqrt(pivot);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < d; ++i) {
            double acc = a(i, j);
            for (std::size_t k = 0; k < j; ++k) acc -= l(i, k) * l(j, k);
            l(i, j) = acc / ljj;
        }
    }
    return l;
}

Matrix principal_subspace(const EigenSystem& es, std::size_t r) {
    const std::size_t d = es.dim();
    if (r < 1 || r > d) throw Error(ErrorKind::IndexOutOfRange, "subspace rank must satisfy 1 <= r <= d");
    Matrix u(d, r);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t k = 0; k < r; ++k) u(i, k) = es.eigenvectors(i, k);
    return u;
}

double subspace_sin_theta(const Matrix& u, const Matrix& v) {
    if (u.rows() != v.rows() || u.cols() != v.cols() || u.cols() == 0) {
        throw Error(ErrorKind::ShapeMismatch, "subspace bases must share shape d×r");
    }
    require_orthonormal_columns(u);
    require_orthonormal_columns(v);

    // Residual of U after projecting onto span(V).
    const Matrix residual = u - v * (v.transpose() * u);
    const SymMatrix gram(residual.transpose() * residual);
    const double top = sym_eigendecompose(gram).eigenvalues.front();
    return std::sqrt(std::clamp(top, 0.0, 1.0));
}

} // namespace depfid
