#pragma once

#include "sej/random.hpp"

#include <optional>
#include <span>
#include <vector>

namespace sej {

/// One expert's (5th, 50th, 95th) percentile judgement for one item,
/// in percent change (values may be negative).
struct ElicitedQuantiles {
    double q05 = 0.0;
    double q50 = 0.0;
    double q95 = 0.0;

    static constexpr double min_separation = 1e-9;

    /// Throws QuantileOrderError unless q05 < q50 < q95 with the minimum
    /// separation.
    void validate() const;
};

/// Elicitation support: pooled extremes of all judgements (and the
/// realization, if any) extended by an overshoot fraction on each side.
struct IntrinsicRange {
    double lo = 0.0;
    double hi = 0.0;
    double overshoot = 0.10;

    static IntrinsicRange pooled(std::span<const ElicitedQuantiles> quantiles,
                                 std::optional<double> realization,
                                 double overshoot = 0.10);

    double width() const { return hi - lo; }
};

/// Continuous distribution given by a piecewise-linear CDF over an ordered
/// knot list. The canonical four-piece form from fit_distribution has knots
/// (lo,0) (q05,.05) (q50,.50) (q95,.95) (hi,1); pooled mixtures may carry
/// more knots and flat (zero-density) segments.
///
/// Immutable after construction; safe to share across threads. Sampling
/// takes an explicit caller-owned stream.
class PiecewiseDistribution {
public:
    /// Knot values must be strictly increasing and finite; cumulative
    /// probabilities nondecreasing from exactly 0 to exactly 1.
    PiecewiseDistribution(std::vector<double> values,
                          std::vector<double> cum_probs);

    double cdf(double x) const;       // total on the reals
    double quantile(double p) const;  // DomainError outside [0,1]
    double sample(RandomStream& stream) const { return quantile(stream.next_uniform()); }
    double sample_at(const RandomStream& stream, std::uint64_t index) const {
        return quantile(stream.uniform_at(index));
    }

    double mean() const;
    double variance() const;

    double lo() const { return values_.front(); }
    double hi() const { return values_.back(); }

    std::span<const double> knot_values() const { return values_; }
    std::span<const double> knot_probs() const { return probs_; }

    /// The distribution's own (5th, 50th, 95th) quantiles.
    ElicitedQuantiles central_quantiles() const;

private:
    std::vector<double> values_;
    std::vector<double> probs_;
};

/// Reconstructs the four-piece distribution carrying inter-knot mass
/// (0.05, 0.45, 0.45, 0.05). Requires r.lo < q05 and q95 < r.hi; a
/// coincident bound would put positive mass on a zero-width piece.
PiecewiseDistribution fit_distribution(const ElicitedQuantiles& q,
                                       const IntrinsicRange& r);

} // namespace sej
