#include "sej/elicitation.hpp"

#include "sej/errors.hpp"

#include <algorithm>
#include <cmath>
#include <format>

namespace sej {

void ElicitedQuantiles::validate() const {
    if (!std::isfinite(q05) || !std::isfinite(q50) || !std::isfinite(q95))
        throw QuantileOrderError("elicited quantiles must be finite");
    if (!(q50 - q05 >= min_separation) || !(q95 - q50 >= min_separation))
        throw QuantileOrderError(std::format(
            "elicited quantiles must be strictly increasing: "
            "q05={} q50={} q95={}",
            q05, q50, q95));
}

IntrinsicRange IntrinsicRange::pooled(std::span<const ElicitedQuantiles> quantiles,
                                      std::optional<double> realization,
                                      double overshoot) {
    if (quantiles.empty())
        throw RangeError("intrinsic range needs at least one judgement");
    if (!(overshoot >= 0.0))
        throw RangeError("overshoot must be nonnegative");
    double mn = quantiles[0].q05;
    double mx = quantiles[0].q95;
    for (const auto& q : quantiles) {
        q.validate();
        mn = std::min(mn, q.q05);
        mx = std::max(mx, q.q95);
    }
    if (realization) {
        if (!std::isfinite(*realization))
            throw RangeError("realization must be finite");
        mn = std::min(mn, *realization);
        mx = std::max(mx, *realization);
    }
    const double spread = mx - mn;
    if (!(spread > 0.0))
        throw RangeError("pooled judgements have zero spread");
    return IntrinsicRange{mn - overshoot * spread, mx + overshoot * spread,
                          overshoot};
}

PiecewiseDistribution::PiecewiseDistribution(std::vector<double> values,
                                             std::vector<double> cum_probs)
    : values_(std::move(values)), probs_(std::move(cum_probs)) {
    if (values_.size() != probs_.size() || values_.size() < 2)
        throw RangeError("piecewise distribution needs matching knot lists of size >= 2");
    if (probs_.front() != 0.0 || probs_.back() != 1.0)
        throw RangeError("cumulative probabilities must run from 0 to 1");
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i]))
            throw RangeError("knot values must be finite");
        if (i > 0) {
            if (!(values_[i] > values_[i - 1]))
                throw RangeError("knot values must be strictly increasing");
            if (probs_[i] < probs_[i - 1])
                throw RangeError("cumulative probabilities must be nondecreasing");
        }
    }
}

double PiecewiseDistribution::cdf(double x) const {
    if (x <= values_.front())
        return x == values_.front() ? probs_.front() : 0.0;
    if (x >= values_.back())
        return 1.0;
    // first knot strictly above x
    const auto it = std::upper_bound(values_.begin(), values_.end(), x);
    const auto j = static_cast<std::size_t>(it - values_.begin());
    if (values_[j - 1] == x)
        return probs_[j - 1]; // exact at knots
    const double t = (x - values_[j - 1]) / (values_[j] - values_[j - 1]);
    return probs_[j - 1] + t * (probs_[j] - probs_[j - 1]);
}

double PiecewiseDistribution::quantile(double p) const {
    if (!(p >= 0.0 && p <= 1.0))
        throw DomainError("quantile probability outside [0,1]");
    if (p == 0.0)
        return values_.front();
    if (p == 1.0)
        return values_.back();
    // leftmost knot with prob >= p (flat segments resolve to their left edge)
    const auto it = std::lower_bound(probs_.begin(), probs_.end(), p);
    const auto j = static_cast<std::size_t>(it - probs_.begin());
    if (probs_[j] == p)
        return values_[j];
    const double t = (p - probs_[j - 1]) / (probs_[j] - probs_[j - 1]);
    return values_[j - 1] + t * (values_[j] - values_[j - 1]);
}

double PiecewiseDistribution::mean() const {
    double m = 0.0;
    for (std::size_t i = 1; i < values_.size(); ++i)
        m += (probs_[i] - probs_[i - 1]) * 0.5 * (values_[i - 1] + values_[i]);
    return m;
}

double PiecewiseDistribution::variance() const {
    // E[X^2] per piece with uniform density: (a^2 + ab + b^2)/3
    double ex2 = 0.0;
    for (std::size_t i = 1; i < values_.size(); ++i) {
        const double a = values_[i - 1];
        const double b = values_[i];
        ex2 += (probs_[i] - probs_[i - 1]) * (a * a + a * b + b * b) / 3.0;
    }
    const double m = mean();
    return ex2 - m * m;
}

ElicitedQuantiles PiecewiseDistribution::central_quantiles() const {
    return ElicitedQuantiles{quantile(0.05), quantile(0.50), quantile(0.95)};
}

PiecewiseDistribution fit_distribution(const ElicitedQuantiles& q,
                                       const IntrinsicRange& r) {
    q.validate();
    if (!(r.lo < r.hi))
        throw RangeError("intrinsic range is empty");
    if (!(q.q05 >= r.lo) || !(q.q95 <= r.hi))
        throw RangeError(std::format(
            "quantiles [{}, {}] outside intrinsic range [{}, {}]", q.q05,
            q.q95, r.lo, r.hi));
    if (!(r.lo < q.q05) || !(q.q95 < r.hi))
        throw RangeError(
            "intrinsic range bound coincides with an elicited quantile; "
            "a positive overshoot is required for the four-piece form");
    return PiecewiseDistribution({r.lo, q.q05, q.q50, q.q95, r.hi},
                                 {0.0, 0.05, 0.50, 0.95, 1.0});
}

} // namespace sej
