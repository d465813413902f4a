#pragma once

#include "sej/elicitation.hpp"

#include <array>
#include <map>
#include <string>
#include <vector>

namespace sej {

/// A seed question with a known realization, judged by part or all of the
/// panel.
struct CalibrationItem {
    std::string id;
    double realization = 0.0;
    std::map<std::string, ElicitedQuantiles> judgements; // expert -> quantiles
};

/// Performance scores and weights for one expert.
struct ExpertScore {
    std::string expert;
    double calibration = 0.0; // chi-square tail probability, in (0,1]
    double information = 0.0; // mean relative entropy over items, nats
    double raw_weight = 0.0;  // calibration * information, gated by the cutoff
    double norm_weight = 0.0; // raw weight / panel total
};

/// Weighted-mixture "virtual expert": one pooled distribution per item plus
/// the panel weights that produced it.
struct DecisionMaker {
    std::map<std::string, double> weights; // expert -> normalized weight
    std::map<std::string, PiecewiseDistribution> items;
};

/// Result of the cutoff search.
struct CutoffResult {
    double alpha_star = 0.0;
    double dm_calibration = 0.0;
    double dm_information = 0.0;
    std::vector<ExpertScore> scores; // panel order
    DecisionMaker dm;                // over the calibration items
};

/// Expected inter-quantile hit probabilities of a well-calibrated expert.
inline constexpr std::array<double, 4> kBinProbs{0.05, 0.45, 0.45, 0.05};

/// Counts of realizations per inter-quantile bin for one expert:
/// (below q05, [q05,q50), [q50,q95), >= q95). A realization exactly on a
/// quantile falls in the upper bin. Throws MissingJudgementError if the
/// expert skipped any item.
std::array<std::size_t, 4> bin_counts(std::span<const CalibrationItem> items,
                                      const std::string& expert);

/// Classical-model statistical accuracy:
///   C = 1 - F_chi2,3(2N * I(s/N; p)),  p = (0.05, 0.45, 0.45, 0.05).
double calibration_score(const std::array<std::size_t, 4>& counts,
                         std::size_t item_count);

/// Relative entropy of the distribution's inter-quantile masses against the
/// uniform background on the intrinsic range, in nats.
double information_score(const PiecewiseDistribution& d,
                         const IntrinsicRange& r);

/// Performance weights with cutoff alpha:
///   raw_e = C_e * I_e * 1[C_e >= alpha], normalized over the panel.
/// Throws AllExcludedError when no expert survives.
std::vector<double> compute_weights(std::span<const ExpertScore> scores,
                                    double alpha);

/// Linear opinion pool: mixture cdf(x) = sum_i w_i cdf_i(x), re-expressed as
/// a piecewise-linear cdf on the union of the component knots. Weights must
/// be nonnegative and sum to 1 within 1e-9.
PiecewiseDistribution pool_mixture(std::span<const PiecewiseDistribution> dists,
                                   std::span<const double> weights);

/// Global-weights classical model with an optimized calibration cutoff:
/// candidates are {0} union {C_e}; each candidate's DM is scored like an
/// expert on the calibration items and the best combined score wins (ties to
/// the smallest cutoff).
CutoffResult optimize_cutoff(std::span<const CalibrationItem> items,
                             std::span<const std::string> panel,
                             double overshoot = 0.10);

/// Same scoring path with a fixed cutoff instead of the search.
CutoffResult score_with_cutoff(std::span<const CalibrationItem> items,
                               std::span<const std::string> panel,
                               double alpha, double overshoot = 0.10);

} // namespace sej
