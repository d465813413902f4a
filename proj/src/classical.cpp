#include "sej/classical.hpp"

#include "sej/errors.hpp"
#include "sej/special.hpp"

#include <algorithm>
#include <cmath>
#include <format>
#include <numeric>
#include <set>

namespace sej {

namespace {

std::size_t bin_index(const ElicitedQuantiles& q, double x) {
    if (x < q.q05) return 0;
    if (x < q.q50) return 1;
    if (x < q.q95) return 2;
    return 3;
}

struct PanelScoring {
    std::vector<ExpertScore> scores;                       // panel order
    std::vector<std::vector<PiecewiseDistribution>> fits;  // [item][expert]
    std::vector<IntrinsicRange> ranges;                    // per item
};

// Fits every expert on every calibration item over the item's pooled range
// (realization included) and computes calibration + mean information.
PanelScoring score_panel(std::span<const CalibrationItem> items,
                         std::span<const std::string> panel,
                         double overshoot) {
    if (items.empty())
        throw ValidationError("at least one calibration item is required");
    if (panel.empty())
        throw ValidationError("panel is empty");

    PanelScoring out;
    out.ranges.reserve(items.size());
    for (const auto& item : items) {
        if (!std::isfinite(item.realization))
            throw ValidationError(std::format(
                "calibration item '{}' has a non-finite realization", item.id));
        std::vector<ElicitedQuantiles> qs;
        qs.reserve(item.judgements.size());
        for (const auto& [expert, q] : item.judgements)
            qs.push_back(q);
        out.ranges.push_back(
            IntrinsicRange::pooled(qs, item.realization, overshoot));
    }

    out.fits.resize(items.size());
    for (std::size_t i = 0; i < items.size(); ++i) {
        out.fits[i].reserve(panel.size());
        for (const auto& expert : panel) {
            const auto it = items[i].judgements.find(expert);
            if (it == items[i].judgements.end())
                throw MissingJudgementError(std::format(
                    "expert '{}' has no judgement for calibration item '{}'",
                    expert, items[i].id));
            out.fits[i].push_back(fit_distribution(it->second, out.ranges[i]));
        }
    }

    out.scores.reserve(panel.size());
    for (std::size_t e = 0; e < panel.size(); ++e) {
        ExpertScore s;
        s.expert = panel[e];
        s.calibration = calibration_score(bin_counts(items, panel[e]), items.size());
        double info = 0.0;
        for (std::size_t i = 0; i < items.size(); ++i)
            info += information_score(out.fits[i][e], out.ranges[i]);
        s.information = info / static_cast<double>(items.size());
        out.scores.push_back(std::move(s));
    }
    return out;
}

// DM combined score (calibration x mean information), scoring the pooled
// distribution on the calibration items exactly like an expert.
struct DmScore {
    double calibration = 0.0;
    double information = 0.0;
    DecisionMaker dm;
};

DmScore score_dm(std::span<const CalibrationItem> items,
                 std::span<const std::string> panel,
                 const PanelScoring& panel_scoring,
                 std::span<const double> weights) {
    DmScore out;
    for (std::size_t e = 0; e < panel.size(); ++e)
        out.dm.weights[panel[e]] = weights[e];

    std::array<std::size_t, 4> bins{0, 0, 0, 0};
    double info = 0.0;
    for (std::size_t i = 0; i < items.size(); ++i) {
        PiecewiseDistribution pooled =
            pool_mixture(panel_scoring.fits[i], weights);
        bins[bin_index(pooled.central_quantiles(), items[i].realization)] += 1;
        info += information_score(pooled, panel_scoring.ranges[i]);
        out.dm.items.emplace(items[i].id, std::move(pooled));
    }
    out.calibration = calibration_score(bins, items.size());
    out.information = info / static_cast<double>(items.size());
    return out;
}

} // namespace

std::array<std::size_t, 4> bin_counts(std::span<const CalibrationItem> items,
                                      const std::string& expert) {
    std::array<std::size_t, 4> counts{0, 0, 0, 0};
    for (const auto& item : items) {
        const auto it = item.judgements.find(expert);
        if (it == item.judgements.end())
            throw MissingJudgementError(std::format(
                "expert '{}' has no judgement for calibration item '{}'",
                expert, item.id));
        it->second.validate();
        counts[bin_index(it->second, item.realization)] += 1;
    }
    return counts;
}

double calibration_score(const std::array<std::size_t, 4>& counts,
                         std::size_t item_count) {
    const std::size_t total =
        std::accumulate(counts.begin(), counts.end(), std::size_t{0});
    if (item_count == 0 || total != item_count)
        throw DomainError(std::format(
            "bin counts sum to {} but item count is {}", total, item_count));
    const double n = static_cast<double>(item_count);
    double divergence = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
        if (counts[k] == 0)
            continue; // 0 * ln(0/p) -> 0
        const double a = static_cast<double>(counts[k]) / n;
        divergence += a * std::log(a / kBinProbs[k]);
    }
    return chi_squared_sf(2.0 * n * divergence, 3.0);
}

double information_score(const PiecewiseDistribution& d,
                         const IntrinsicRange& r) {
    const double width = r.width();
    if (!(width > 0.0))
        throw RangeError("intrinsic range is empty");
    const ElicitedQuantiles q = d.central_quantiles();
    const std::array<double, 4> lengths{q.q05 - r.lo, q.q50 - q.q05,
                                        q.q95 - q.q50, r.hi - q.q95};
    double info = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
        if (!(lengths[k] > 0.0))
            throw RangeError(
                "inter-quantile interval has zero background mass");
        info += kBinProbs[k] * std::log(kBinProbs[k] * width / lengths[k]);
    }
    return info;
}

std::vector<double> compute_weights(std::span<const ExpertScore> scores,
                                    double alpha) {
    if (scores.empty())
        throw ValidationError("no expert scores");
    std::vector<double> raw(scores.size(), 0.0);
    double total = 0.0;
    for (std::size_t e = 0; e < scores.size(); ++e) {
        const auto& s = scores[e];
        if (!(s.calibration > 0.0 && s.calibration <= 1.0))
            throw DomainError(std::format(
                "calibration score {} for '{}' outside (0,1]", s.calibration,
                s.expert));
        if (!(s.information >= 0.0))
            throw DomainError(std::format(
                "negative information score for '{}'", s.expert));
        if (s.calibration >= alpha)
            raw[e] = s.calibration * s.information;
        total += raw[e];
    }
    if (!(total > 0.0))
        throw AllExcludedError(std::format(
            "cutoff {} leaves the panel with zero total weight", alpha));
    for (auto& w : raw)
        w /= total;
    return raw;
}

PiecewiseDistribution pool_mixture(std::span<const PiecewiseDistribution> dists,
                                   std::span<const double> weights) {
    if (dists.empty() || dists.size() != weights.size())
        throw ValidationError("mixture needs matching distributions and weights");
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0))
            throw WeightError("mixture weights must be nonnegative");
        total += w;
    }
    if (std::fabs(total - 1.0) > 1e-9)
        throw WeightError(
            std::format("mixture weights sum to {}, not 1", total));

    std::vector<double> knots;
    for (const auto& d : dists)
        knots.insert(knots.end(), d.knot_values().begin(),
                     d.knot_values().end());
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

    std::vector<double> probs(knots.size(), 0.0);
    for (std::size_t j = 0; j < knots.size(); ++j) {
        double f = 0.0;
        for (std::size_t i = 0; i < dists.size(); ++i)
            f += weights[i] / total * dists[i].cdf(knots[j]);
        probs[j] = f;
    }
    // exact by construction; pin against rounding residue
    probs.front() = 0.0;
    probs.back() = 1.0;
    return PiecewiseDistribution(std::move(knots), std::move(probs));
}

CutoffResult score_with_cutoff(std::span<const CalibrationItem> items,
                               std::span<const std::string> panel,
                               double alpha, double overshoot) {
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw DomainError("cutoff must lie in [0,1]");
    PanelScoring scoring = score_panel(items, panel, overshoot);
    const std::vector<double> weights = compute_weights(scoring.scores, alpha);
    DmScore dm = score_dm(items, panel, scoring, weights);

    CutoffResult out;
    out.alpha_star = alpha;
    out.dm_calibration = dm.calibration;
    out.dm_information = dm.information;
    out.scores = std::move(scoring.scores);
    for (std::size_t e = 0; e < panel.size(); ++e) {
        out.scores[e].raw_weight = out.scores[e].calibration >= alpha
                                       ? out.scores[e].calibration *
                                             out.scores[e].information
                                       : 0.0;
        out.scores[e].norm_weight = weights[e];
    }
    out.dm = std::move(dm.dm);
    return out;
}

CutoffResult optimize_cutoff(std::span<const CalibrationItem> items,
                             std::span<const std::string> panel,
                             double overshoot) {
    PanelScoring scoring = score_panel(items, panel, overshoot);

    std::set<double> candidates{0.0};
    for (const auto& s : scoring.scores)
        candidates.insert(s.calibration);

    bool found = false;
    double best_alpha = 0.0;
    double best_score = -1.0;
    // ascending order + strict improvement breaks ties toward the smallest
    for (double alpha : candidates) {
        std::vector<double> weights;
        try {
            weights = compute_weights(scoring.scores, alpha);
        } catch (const AllExcludedError&) {
            continue;
        }
        const DmScore dm = score_dm(items, panel, scoring, weights);
        const double combined = dm.calibration * dm.information;
        if (!found || combined > best_score) {
            found = true;
            best_alpha = alpha;
            best_score = combined;
        }
    }
    if (!found)
        throw NoFeasibleCutoffError(
            "every candidate cutoff excludes the whole panel");
    return score_with_cutoff(items, panel, best_alpha, overshoot);
}

} // namespace sej
