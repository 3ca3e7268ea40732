#include "depfid/scenarios.hpp"

#include <cmath>

#include "depfid/errors.hpp"
#include "depfid/linalg.hpp"
#include "depfid/special_functions.hpp"

namespace depfid {

namespace {

void require_rho(double rho) {
    if (!(std::abs(rho) < 1.0)) throw Error(ErrorKind::InvalidArgument, "rho must satisfy |rho| < 1");
}

void require_rows(std::size_t n) {
    if (n < 2) throw Error(ErrorKind::InsufficientSamples, "scenario needs at least 2 rows");
}

SymMatrix bivariate_cov(double var, double cov) {
    return SymMatrix(Matrix{{var, cov}, {cov, var}}, SymKind::Covariance);
}

// Maps a t variate to the standard normal with the same CDF value. Works
// from whichever tail is smaller so extreme draws keep their precision.
double t_to_normal_score(double t, double nu) {
    if (t == 0.0) return 0.0;
    const double tail = student_t_upper_tail(std::abs(t), nu);
    const double z = -normal_quantile(std::max(tail, 1e-300));
    return t > 0.0 ? z : -z;
}

} // namespace

std::string_view to_string(ScenarioKind kind) {
    switch (kind) {
    case ScenarioKind::SignFlip: return "sign-flip";
    case ScenarioKind::Eigengap: return "eigengap";
    case ScenarioKind::GaussianCopula: return "gaussian-copula";
    case ScenarioKind::TCopula: return "t-copula";
    case ScenarioKind::DiagonalCollapse: return "diagonal-collapse";
    }
    return "unknown";
}

ScenarioKind parse_scenario_kind(std::string_view name) {
    for (auto kind : {ScenarioKind::SignFlip, ScenarioKind::Eigengap, ScenarioKind::GaussianCopula,
                      ScenarioKind::TCopula, ScenarioKind::DiagonalCollapse}) {
        if (name == to_string(kind)) return kind;
    }
    throw Error(ErrorKind::InvalidArgument, "unknown scenario '" + std::string(name) + "'");
}

void validate(const ScenarioSpec& spec) {
    require_rows(spec.n);
    switch (spec.kind) {
    case ScenarioKind::SignFlip:
        require_rho(spec.rho);
        if (!(spec.sigma2 > 0.0)) throw Error(ErrorKind::InvalidArgument, "sigma2 must be positive");
        if (spec.d < 2) throw Error(ErrorKind::InvalidArgument, "sign-flip needs d >= 2");
        break;
    case ScenarioKind::Eigengap:
        if (!(spec.epsilon >= 0.0)) throw Error(ErrorKind::InvalidArgument, "epsilon must be >= 0");
        break;
    case ScenarioKind::GaussianCopula:
    case ScenarioKind::DiagonalCollapse:
        require_rho(spec.rho);
        break;
    case ScenarioKind::TCopula:
        require_rho(spec.rho);
        if (!(spec.nu > 2.0)) throw Error(ErrorKind::InvalidArgument, "t-copula needs nu > 2");
        break;
    }
}

DataMatrix sample_mvn(std::span<const double> mean, const SymMatrix& cov, std::size_t n, Rng& rng) {
    const std::size_t d = cov.dim();
    if (mean.size() != d) throw Error(ErrorKind::ShapeMismatch, "mean length differs from dimension");
    const Matrix l = cholesky_factor(cov);
    Matrix out(n, d);
    std::vector<double> z(d);
    for (std::size_t i = 0; i < n; ++i) {
        for (auto& v : z) v = rng.standard_normal();
        for (std::size_t r = 0; r < d; ++r) {
            double acc = mean[r];
            for (std::size_t c = 0; c <= r; ++c) acc += l(r, c) * z[c];
            out(i, r) = acc;
        }
    }
    return DataMatrix(std::move(out));
}

DataMatrix sample_mvn(std::span<const double> mean, const SymMatrix& cov, std::size_t n,
                      std::uint64_t seed) {
    Rng rng(seed);
    return sample_mvn(mean, cov, n, rng);
}

DataMatrix sample_gaussian_copula(double rho, std::size_t n, Rng& rng) {
    require_rho(rho);
    const std::vector<double> zero(2, 0.0);
    return sample_mvn(zero, bivariate_cov(1.0, rho), n, rng);
}

DataMatrix sample_gaussian_copula(double rho, std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    return sample_gaussian_copula(rho, n, rng);
}

DataMatrix sample_t_copula(double rho, double nu, std::size_t n, Rng& rng) {
    require_rho(rho);
    if (!(nu > 2.0)) throw Error(ErrorKind::InvalidArgument, "t-copula needs nu > 2");
    require_rows(n);
    const double off = std::sqrt(1.0 - rho * rho);
    Matrix out(n, 2);
    for (std::size_t i = 0; i < n; ++i) {
        const double z1 = rng.standard_normal();
        const double z2 = rho * z1 + off * rng.standard_normal();
        const double scale = 1.0 / std::sqrt(rng.chi_square_over_df(nu));
        out(i, 0) = t_to_normal_score(z1 * scale, nu);
        out(i, 1) = t_to_normal_score(z2 * scale, nu);
    }
    return DataMatrix(std::move(out));
}

DataMatrix sample_t_copula(double rho, double nu, std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    return sample_t_copula(rho, nu, n, rng);
}

ScenarioPair make_sign_flip_pair(double rho, double sigma2, std::size_t n, std::uint64_t seed,
                                 std::size_t d) {
    validate({.kind = ScenarioKind::SignFlip, .rho = rho, .sigma2 = sigma2, .n = n, .d = d});
    Matrix p = Matrix::identity(d);
    p(0, 0) = p(1, 1) = sigma2;
    Matrix q = p;
    p(0, 1) = p(1, 0) = sigma2 * rho;
    q(0, 1) = q(1, 0) = -sigma2 * rho;
    SymMatrix cov_p(std::move(p), SymKind::Covariance);
    SymMatrix cov_q(std::move(q), SymKind::Covariance);

    const std::vector<double> zero(d, 0.0);
    Rng rng_ref(seed, kRefStream);
    Rng rng_syn(seed, kSynStream);
    DataMatrix ref = sample_mvn(zero, cov_p, n, rng_ref);
    DataMatrix syn = sample_mvn(zero, cov_q, n, rng_syn);

    ClosedForms cf;
    cf.d_sigma = 2.0 * std::sqrt(2.0) * sigma2 * std::abs(rho);
    cf.beta_ref = rho;
    cf.beta_syn = -rho;
    // Leading eigenvectors (1, ±1)/√2 are orthogonal for ρ ≠ 0 in the
    // bivariate case; with padding the ordering depends on σ².
    if (rho == 0.0) cf.exact_sin_theta = 0.0;
    else if (d == 2) cf.exact_sin_theta = 1.0;
    return {std::move(cov_p), std::move(cov_q), std::move(ref), std::move(syn), cf};
}

double eigengap_exact_sin_theta(double epsilon) {
    const double lead = 1.0 + std::sqrt(1.0 + epsilon * epsilon);
    return std::abs(epsilon) / std::sqrt(lead * lead + epsilon * epsilon);
}

ScenarioPair make_eigengap_pair(double epsilon, std::size_t n, std::uint64_t seed) {
    validate({.kind = ScenarioKind::Eigengap, .epsilon = epsilon, .n = n});
    SymMatrix cov_p(Matrix{{3.0, 0.0}, {0.0, 1.0}}, SymKind::Covariance);
    SymMatrix cov_q(Matrix{{3.0, epsilon}, {epsilon, 1.0}}, SymKind::Covariance);
    if (!(epsilon * epsilon < 3.0)) throw Error::not_positive_definite(1);

    const std::vector<double> zero(2, 0.0);
    Rng rng_ref(seed, kRefStream);
    Rng rng_syn(seed, kSynStream);
    DataMatrix ref = sample_mvn(zero, cov_p, n, rng_ref);
    DataMatrix syn = sample_mvn(zero, cov_q, n, rng_syn);

    ClosedForms cf;
    cf.d_sigma = std::sqrt(2.0) * epsilon;
    cf.exact_sin_theta = eigengap_exact_sin_theta(epsilon);
    return {std::move(cov_p), std::move(cov_q), std::move(ref), std::move(syn), cf};
}

ScenarioPair make_diagonal_collapse_pair(double rho, std::size_t n, std::uint64_t seed) {
    validate({.kind = ScenarioKind::DiagonalCollapse, .rho = rho, .n = n});
    SymMatrix cov_p = bivariate_cov(1.0, rho);
    SymMatrix cov_q(Matrix::identity(2), SymKind::Covariance);

    const std::vector<double> zero(2, 0.0);
    Rng rng_ref(seed, kRefStream);
    Rng rng_syn(seed, kSynStream);
    DataMatrix ref = sample_mvn(zero, cov_p, n, rng_ref);
    DataMatrix syn = sample_mvn(zero, cov_q, n, rng_syn);

    ClosedForms cf;
    cf.d_sigma = std::sqrt(2.0) * std::abs(rho);
    cf.beta_ref = rho;
    cf.beta_syn = 0.0;
    // Identity's leading eigenvector is e1 under the tie-break; the
    // reference's is (1, ±1)/√2.
    cf.exact_sin_theta = rho == 0.0 ? 0.0 : 1.0 / std::sqrt(2.0);
    return {std::move(cov_p), std::move(cov_q), std::move(ref), std::move(syn), cf};
}

ScenarioPair make_copula_pair(ScenarioKind kind, double rho, double nu, std::size_t n,
                              std::uint64_t seed) {
    if (kind != ScenarioKind::GaussianCopula && kind != ScenarioKind::TCopula) {
        throw Error(ErrorKind::InvalidArgument, "copula pair needs a copula scenario kind");
    }
    validate({.kind = kind, .rho = rho, .nu = nu, .n = n});
    Rng rng_ref(seed, kRefStream);
    Rng rng_syn(seed, kSynStream);
    DataMatrix ref = sample_gaussian_copula(rho, n, rng_ref);
    if (kind == ScenarioKind::GaussianCopula) {
        DataMatrix syn = sample_gaussian_copula(rho, n, rng_syn);
        ClosedForms cf;
        cf.d_sigma = 0.0;
        cf.beta_ref = rho;
        cf.beta_syn = rho;
        cf.exact_sin_theta = 0.0;
        return {bivariate_cov(1.0, rho), bivariate_cov(1.0, rho), std::move(ref), std::move(syn), cf};
    }
    DataMatrix syn = sample_t_copula(rho, nu, n, rng_syn);
    ClosedForms cf;
    cf.beta_ref = rho;
    return {bivariate_cov(1.0, rho), std::nullopt, std::move(ref), std::move(syn), cf};
}

ScenarioPair make_scenario(const ScenarioSpec& spec) {
    validate(spec);
    switch (spec.kind) {
    case ScenarioKind::SignFlip:
        return make_sign_flip_pair(spec.rho, spec.sigma2, spec.n, spec.seed, spec.d);
    case ScenarioKind::Eigengap:
        return make_eigengap_pair(spec.epsilon, spec.n, spec.seed);
    case ScenarioKind::DiagonalCollapse:
        return make_diagonal_collapse_pair(spec.rho, spec.n, spec.seed);
    case ScenarioKind::GaussianCopula:
    case ScenarioKind::TCopula:
        return make_copula_pair(spec.kind, spec.rho, spec.nu, spec.n, spec.seed);
    }
    throw Error(ErrorKind::InvalidArgument, "unknown scenario kind");
}

double off_diagonal_norm(const SymMatrix& cov) {
    double sum = 0.0;
    for (std::size_t i = 0; i < cov.dim(); ++i)
        for (std::size_t j = 0; j < cov.dim(); ++j)
            if (i != j) sum += cov(i, j) * cov(i, j);
    return std::sqrt(sum);
}

GaussianFit fit_marginal_gaussian(const DataMatrix& data) {
    const SymMatrix full = estimate_covariance(data);
    Matrix diag(data.d(), data.d());
    for (std::size_t j = 0; j < data.d(); ++j) diag(j, j) = full(j, j);
    return {column_means(data.values()), SymMatrix(std::move(diag), SymKind::Covariance)};
}

GaussianFit fit_full_gaussian(const DataMatrix& data) {
    return {column_means(data.values()), estimate_covariance(data)};
}

} // namespace depfid
