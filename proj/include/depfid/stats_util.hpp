#pragma once

#include <span>
#include <vector>

namespace depfid {

/// 1-based ranks; tied values share the mean of the ranks they span.
std::vector<double> average_ranks(std::span<const double> values);

/// Median; even-length input averages the two central values.
double median(std::span<const double> values);

/// Percentile at probability p ∈ [0, 1] with linear interpolation between
/// order statistics (position p·(n−1) in the sorted sample).
double percentile(std::span<const double> values, double p);

double mean(std::span<const double> values);

/// Sample standard deviation (n−1 denominator); zero for n < 2.
double sample_sd(std::span<const double> values);

} // namespace depfid
