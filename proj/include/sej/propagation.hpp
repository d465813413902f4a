#pragma once

#include "sej/elicitation.hpp"
#include "sej/stats.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sej {

/// Named weighted bundle of food categories priced weekly.
struct BasketDefinition {
    std::string name;
    std::vector<std::pair<std::string, double>> categories; // id, weight
    double baseline_cost = 0.0; // currency per week, at baseline_date
    std::string baseline_date;  // calendar month, e.g. "2020-07"

    /// Weights nonnegative and summing to 1 within 1e-9; baseline_cost > 0.
    void validate() const;
};

/// Per-scenario category distributions plus elicited scenario likelihoods.
struct ScenarioSet {
    struct Scenario {
        std::string id;
        std::map<std::string, PiecewiseDistribution> categories;
    };
    std::vector<Scenario> scenarios;
    std::vector<double> likelihood_weights;

    /// Same category set everywhere; weights sum to 1 within 1e-9.
    void validate() const;
};

/// Year-by-year July-to-December percent changes of overall food prices.
struct SeasonalHistory {
    std::vector<std::pair<int, double>> observations; // year, percent change
};

/// Gaussian projection of a baseline cost: cost * (1 + g/100) with
/// g ~ Normal(mu, sigma^2). sigma == 0 degenerates to a point mass.
struct BaselineProjection {
    double base_cost = 0.0;
    double mu = 0.0;    // mean percent change
    double sigma = 0.0; // sd of percent change

    /// Sample mean and unbiased sample variance of the historical changes.
    /// Throws InsufficientHistoryError with fewer than two observations.
    static BaselineProjection fit(double cost_july, const SeasonalHistory& hist);

    /// Point mass at a known cost (no projection uncertainty).
    static BaselineProjection point(double cost) { return {cost, 0.0, 0.0}; }

    double mean_cost() const { return base_cost * (1.0 + mu / 100.0); }
    double sample(double u) const; // inverse-transform draw of the cost
};

/// Optional rank-correlation input for the Gaussian copula hook. Spearman
/// correlations, symmetric, unit diagonal; rows/columns bound to category
/// ids. Identity (or absence) means independent sampling.
struct RankCorrelation {
    std::vector<std::string> categories;
    std::vector<std::vector<double>> spearman;
};

struct MonteCarloOptions {
    std::uint64_t samples = 1'000'000;
    std::uint64_t seed = 0;
    unsigned workers = 1;
    std::optional<RankCorrelation> correlation; // default: independent
};

/// Empirical result of pushing category distributions through one basket.
struct BasketOutcome {
    SampleSummary percent;  // basket percent change
    SampleSummary currency; // weekly cost change
    SampleSummary total;    // weekly cost (baseline + change)
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
};

/// Likelihood-weighted mixture of the per-scenario distributions of one
/// category. Throws CategoryMismatchError if any scenario lacks it.
PiecewiseDistribution mix_scenarios(const ScenarioSet& set,
                                    const std::string& category);

/// Forward Monte Carlo: draw per-category changes, combine with the basket
/// weights, apply to a baseline draw. Per-category streams are keyed by
/// category id and sample index, so results are bit-identical under category
/// reordering and any worker count.
BasketOutcome propagate_basket(
    const BasketDefinition& basket,
    const std::map<std::string, PiecewiseDistribution>& dists,
    const BaselineProjection& baseline, const MonteCarloOptions& opts);

/// Same chain with every category sampled from its distribution conditioned
/// on exceeding its own floor_percentile quantile.
BasketOutcome conditional_tail(
    const BasketDefinition& basket,
    const std::map<std::string, PiecewiseDistribution>& dists,
    const BaselineProjection& baseline, double floor_percentile,
    const MonteCarloOptions& opts);

/// Pinned categories contribute their fixed quantile; the rest are sampled.
BasketOutcome pinned_whatif(
    const BasketDefinition& basket,
    const std::map<std::string, PiecewiseDistribution>& dists,
    const BaselineProjection& baseline,
    const std::map<std::string, double>& pins, const MonteCarloOptions& opts);

} // namespace sej
