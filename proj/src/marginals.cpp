#include "depfid/marginals.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "depfid/errors.hpp"
#include "depfid/stats_util.hpp"

namespace depfid {

double kolmogorov_survival(double lambda) {
    if (lambda <= 0.0) return 1.0;
    if (lambda < 1.18) {
        // Theta-function form of the CDF converges fast for small λ.
        const double pi = std::numbers::pi;
        const double w = pi * pi / (8.0 * lambda * lambda);
        double cdf = 0.0;
        for (int k = 1; k <= 50; ++k) {
            const double m = 2.0 * k - 1.0;
            const double term = std::exp(-m * m * w);
            cdf += term;
            if (term < 1e-18 * cdf) break;
        }
        cdf *= std::sqrt(2.0 * pi) / lambda;
        return std::clamp(1.0 - cdf, 0.0, 1.0);
    }
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += sign * term;
        if (term < 1e-18) break;
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) {
        throw Error(ErrorKind::InsufficientSamples, "KS test needs two nonempty samples");
    }
    std::vector<double> x(a.begin(), a.end());
    std::vector<double> y(b.begin(), b.end());
    for (double v : x) if (!std::isfinite(v)) throw Error(ErrorKind::InvalidData, "non-finite sample");
    for (double v : y) if (!std::isfinite(v)) throw Error(ErrorKind::InvalidData, "non-finite sample");
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());

    const auto na = static_cast<long long>(x.size());
    const auto nb = static_cast<long long>(y.size());
    long long i = 0;
    long long j = 0;
    long long best = 0; // max |i·nb − j·na|, exact in integers
    while (i < na && j < nb) {
        const double v = std::min(x[i], y[j]);
        while (i < na && x[i] == v) ++i;
        while (j < nb && y[j] == v) ++j;
        best = std::max(best, std::llabs(i * nb - j * na));
    }

    KsResult r;
    r.statistic = static_cast<double>(best) / (static_cast<double>(na) * static_cast<double>(nb));
    const double ne = static_cast<double>(na) * static_cast<double>(nb) / static_cast<double>(na + nb);
    const double root = std::sqrt(ne);
    r.p_value = kolmogorov_survival((root + 0.12 + 0.11 / root) * r.statistic);
    return r;
}

KsProfile ks_profile(const DataMatrix& ref, const DataMatrix& syn) {
    if (ref.d() != syn.d()) throw Error(ErrorKind::ShapeMismatch, "datasets differ in dimension");
    KsProfile profile;
    std::vector<double> stats;
    for (std::size_t j = 0; j < ref.d(); ++j) {
        const auto a = ref.column(j);
        const auto b = syn.column(j);
        profile.per_dimension.push_back(ks_two_sample(a, b));
        stats.push_back(profile.per_dimension.back().statistic);
    }
    profile.median_statistic = median(stats);
    return profile;
}

} // namespace depfid
