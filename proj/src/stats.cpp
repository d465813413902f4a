#include "sej/stats.hpp"

#include "sej/errors.hpp"

#include <algorithm>
#include <cfenv>
#include <cmath>

namespace sej {

double percentile_sorted(std::span<const double> sorted, double p) {
    if (sorted.empty())
        throw DomainError("percentile of an empty sample");
    if (!(p >= 0.0 && p <= 1.0))
        throw DomainError("percentile probability outside [0,1]");
    const std::size_t n = sorted.size();
    if (n == 1)
        return sorted[0];
    const double h = static_cast<double>(n - 1) * p;
    const auto lo = static_cast<std::size_t>(h);
    if (lo + 1 >= n)
        return sorted[n - 1];
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

SampleSummary summarize(std::span<const double> values) {
    if (values.empty())
        throw DomainError("summary of an empty sample");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());

    double sum = 0.0;
    for (double v : sorted)
        sum += v;
    const double n = static_cast<double>(sorted.size());
    const double mean = sum / n;

    double ss = 0.0;
    for (double v : sorted) {
        const double d = v - mean;
        ss += d * d;
    }

    SampleSummary s;
    s.mean = mean;
    s.sd = sorted.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    s.median = percentile_sorted(sorted, 0.50);
    s.p05 = percentile_sorted(sorted, 0.05);
    s.p95 = percentile_sorted(sorted, 0.95);
    return s;
}

double round_half_even(double x, int digits) {
    // nearbyint uses the current rounding mode; the default FE_TONEAREST is
    // round-half-to-even, which is what the I/O contract asks for.
    double scale = 1.0;
    for (int i = 0; i < digits; ++i)
        scale *= 10.0;
    const double y = std::nearbyint(x * scale);
    return y / scale;
}

} // namespace sej
