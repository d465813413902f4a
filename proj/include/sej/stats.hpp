#pragma once

#include <span>
#include <vector>

namespace sej {

/// Empirical summary of a Monte Carlo sample.
struct SampleSummary {
    double mean = 0.0;
    double sd = 0.0; // unbiased (n-1); 0 for n == 1
    double median = 0.0;
    double p05 = 0.0;
    double p95 = 0.0;
};

/// Percentile by linear interpolation between order statistics on *sorted*
/// data (the "type 7" convention): h = (n-1)p.
double percentile_sorted(std::span<const double> sorted, double p);

/// mean / sd / median / p05 / p95 of a sample (copies and sorts internally).
SampleSummary summarize(std::span<const double> values);

/// Round half-to-even to a fixed number of decimal digits.
double round_half_even(double x, int digits);

} // namespace sej
