#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "depfid/matrix.hpp"
#include "depfid/random.hpp"

namespace depfid {

enum class ScenarioKind { SignFlip, Eigengap, GaussianCopula, TCopula, DiagonalCollapse };

std::string_view to_string(ScenarioKind kind);
/// Accepts the CLI spellings: sign-flip, eigengap, gaussian-copula,
/// t-copula, diagonal-collapse.
ScenarioKind parse_scenario_kind(std::string_view name);

struct ScenarioSpec {
    ScenarioKind kind = ScenarioKind::SignFlip;
    double rho = 0.5;
    double sigma2 = 1.0;
    double epsilon = 0.0;
    double nu = 3.0;
    std::size_t n = 1000;
    std::uint64_t seed = 42;
    std::size_t d = 2;
};

/// Throws InvalidArgument when the parameters violate the constraints of their kind.
void validate(const ScenarioSpec& spec);

struct ClosedForms {
    std::optional<double> d_sigma;
    std::optional<double> beta_ref;
    std::optional<double> beta_syn;
    std::optional<double> exact_sin_theta;
};

/// Population covariances are absent where no closed form exists (the
/// normal-score covariance of a t-copula).
struct ScenarioPair {
    std::optional<SymMatrix> population_cov_ref;
    std::optional<SymMatrix> population_cov_syn;
    DataMatrix samples_ref;
    DataMatrix samples_syn;
    ClosedForms closed_forms;
};

/// Draw streams used by the pair constructors.
inline constexpr std::uint64_t kRefStream = 0;
inline constexpr std::uint64_t kSynStream = 1;

DataMatrix sample_mvn(std::span<const double> mean, const SymMatrix& cov, std::size_t n, Rng& rng);
DataMatrix sample_mvn(std::span<const double> mean, const SymMatrix& cov, std::size_t n,
                      std::uint64_t seed);

DataMatrix sample_gaussian_copula(double rho, std::size_t n, Rng& rng);
DataMatrix sample_gaussian_copula(double rho, std::size_t n, std::uint64_t seed);

/// t-copula dependence with exact N(0,1) marginals. Each row draws the
/// correlated normal pair, then the χ² mixing variable.
DataMatrix sample_t_copula(double rho, double nu, std::size_t n, Rng& rng);
DataMatrix sample_t_copula(double rho, double nu, std::size_t n, std::uint64_t seed);

/// σ²[[1,ρ],[ρ,1]] versus σ²[[1,−ρ],[−ρ,1]], optionally padded to d > 2
/// with independent N(0,1) coordinates shared by both populations.
ScenarioPair make_sign_flip_pair(double rho, double sigma2, std::size_t n, std::uint64_t seed,
                                 std::size_t d = 2);

/// diag(3,1) versus [[3,ε],[ε,1]]; requires ε² < 3.
ScenarioPair make_eigengap_pair(double epsilon, std::size_t n, std::uint64_t seed);

/// [[1,ρ],[ρ,1]] versus the identity.
ScenarioPair make_diagonal_collapse_pair(double rho, std::size_t n, std::uint64_t seed);

/// Gaussian copula reference against either a second Gaussian-copula draw
/// (kind = GaussianCopula) or a t-copula (kind = TCopula).
ScenarioPair make_copula_pair(ScenarioKind kind, double rho, double nu, std::size_t n,
                              std::uint64_t seed);

ScenarioPair make_scenario(const ScenarioSpec& spec);

/// sin of the angle between the leading eigenvectors of diag(3,1) and
/// [[3,ε],[ε,1]]: |ε|/√((1+√(1+ε²))²+ε²).
double eigengap_exact_sin_theta(double epsilon);

/// √(Σ_{i≠j} c_ij²), the Frobenius norm of the strictly off-diagonal part.
double off_diagonal_norm(const SymMatrix& cov);

struct GaussianFit {
    std::vector<double> mean;
    SymMatrix cov;
};

/// Column means and variances only (structure-discarding baseline).
GaussianFit fit_marginal_gaussian(const DataMatrix& data);

/// Column means and the full empirical covariance (structure-preserving baseline).
GaussianFit fit_full_gaussian(const DataMatrix& data);

} // namespace depfid
