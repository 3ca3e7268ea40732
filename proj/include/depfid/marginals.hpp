#pragma once

#include <span>
#include <vector>

#include "depfid/matrix.hpp"

namespace depfid {

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

struct KsProfile {
    std::vector<KsResult> per_dimension;
    double median_statistic = 0.0;
};

/// Two-sample Kolmogorov-Smirnov statistic by sorted merge, with an
/// asymptotic p-value (Stephens' small-sample correction on the effective
/// size n_a·n_b/(n_a+n_b)).
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

/// Q_KS(λ) = 2 Σ_{k≥1} (−1)^{k−1} exp(−2k²λ²).
double kolmogorov_survival(double lambda);

KsProfile ks_profile(const DataMatrix& ref, const DataMatrix& syn);

} // namespace depfid
