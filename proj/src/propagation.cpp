#include "sej/propagation.hpp"

#include "sej/classical.hpp"
#include "sej/errors.hpp"
#include "sej/special.hpp"

#include <algorithm>
#include <cmath>
#include <format>
#include <thread>

namespace sej {

void BasketDefinition::validate() const {
    if (name.empty())
        throw ValidationError("basket has no name");
    if (categories.empty())
        throw ValidationError(std::format("basket '{}' has no categories", name));
    double total = 0.0;
    for (const auto& [id, w] : categories) {
        if (id.empty())
            throw ValidationError(std::format("basket '{}' has an unnamed category", name));
        if (!(w >= 0.0) || !std::isfinite(w))
            throw ValidationError(std::format(
                "basket '{}': category '{}' has weight {}", name, id, w));
        total += w;
    }
    if (std::fabs(total - 1.0) > 1e-9)
        throw ValidationError(std::format(
            "basket '{}': category weights sum to {}, not 1", name, total));
    if (!(baseline_cost > 0.0) || !std::isfinite(baseline_cost))
        throw ValidationError(std::format(
            "basket '{}': baseline cost must be positive", name));
}

void ScenarioSet::validate() const {
    if (scenarios.empty())
        throw ValidationError("scenario set is empty");
    if (scenarios.size() != likelihood_weights.size())
        throw ValidationError("one likelihood weight per scenario required");
    double total = 0.0;
    for (double w : likelihood_weights) {
        if (!(w >= 0.0))
            throw WeightError("scenario likelihood weights must be nonnegative");
        total += w;
    }
    if (std::fabs(total - 1.0) > 1e-9)
        throw WeightError(std::format(
            "scenario likelihood weights sum to {}, not 1", total));
    for (const auto& sc : scenarios) {
        if (sc.categories.size() != scenarios.front().categories.size())
            throw CategoryMismatchError(std::format(
                "scenario '{}' covers a different category set", sc.id));
        for (const auto& [cat, dist] : scenarios.front().categories)
            if (!sc.categories.contains(cat))
                throw CategoryMismatchError(std::format(
                    "scenario '{}' is missing category '{}'", sc.id, cat));
    }
}

BaselineProjection BaselineProjection::fit(double cost_july,
                                           const SeasonalHistory& hist) {
    if (!(cost_july > 0.0))
        throw ValidationError("July cost must be positive");
    if (hist.observations.size() < 2)
        throw InsufficientHistoryError(std::format(
            "baseline projection needs >= 2 observations, got {}",
            hist.observations.size()));
    double sum = 0.0;
    for (const auto& [year, change] : hist.observations) {
        if (!std::isfinite(change))
            throw ValidationError(std::format(
                "non-finite history observation for year {}", year));
        sum += change;
    }
    const double n = static_cast<double>(hist.observations.size());
    const double mean = sum / n;
    double ss = 0.0;
    for (const auto& [year, change] : hist.observations) {
        const double d = change - mean;
        ss += d * d;
    }
    return BaselineProjection{cost_july, mean, std::sqrt(ss / (n - 1.0))};
}

double BaselineProjection::sample(double u) const {
    const double g = sigma > 0.0 ? mu + sigma * inverse_normal_cdf(u) : mu;
    return base_cost * (1.0 + g / 100.0);
}

PiecewiseDistribution mix_scenarios(const ScenarioSet& set,
                                    const std::string& category) {
    set.validate();
    std::vector<PiecewiseDistribution> dists;
    dists.reserve(set.scenarios.size());
    for (const auto& sc : set.scenarios) {
        const auto it = sc.categories.find(category);
        if (it == sc.categories.end())
            throw CategoryMismatchError(std::format(
                "category '{}' missing from scenario '{}'", category, sc.id));
        dists.push_back(it->second);
    }
    return pool_mixture(dists, set.likelihood_weights);
}

namespace {

// Category slots in canonical (sorted-id) order: sampling and summation
// become independent of the order the basket happened to list them in.
struct CategorySlot {
    std::string id;
    double weight;
    const PiecewiseDistribution* dist;
    RandomStream stream;
    double floor = 0.0;               // conditional-tail floor, 0 = none
    std::optional<double> pinned;     // fixed value instead of sampling
};

// Lower-triangular Cholesky factor of the Pearson-equivalent copula matrix,
// rows/columns in canonical category order.
std::vector<std::vector<double>> copula_cholesky(
    const RankCorrelation& corr, const std::vector<CategorySlot>& slots) {
    const std::size_t n = slots.size();
    if (corr.categories.size() != n ||
        corr.spearman.size() != n)
        throw ValidationError("correlation matrix does not match the basket categories");
    std::vector<std::size_t> pos(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto it = std::find(corr.categories.begin(),
                                  corr.categories.end(), slots[i].id);
        if (it == corr.categories.end())
            throw UnknownCategoryError(std::format(
                "correlation matrix lacks category '{}'", slots[i].id));
        pos[i] = static_cast<std::size_t>(it - corr.categories.begin());
    }
    // Spearman -> Pearson for the Gaussian copula
    constexpr double pi = 3.14159265358979323846;
    std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (corr.spearman[pos[i]].size() != n)
                throw ValidationError("correlation matrix is not square");
            const double rs = corr.spearman[pos[i]][pos[j]];
            if (!(rs >= -1.0 && rs <= 1.0))
                throw ValidationError("rank correlations must lie in [-1,1]");
            a[i][j] = i == j ? 1.0 : 2.0 * std::sin(pi * rs / 6.0);
        }
    }
    std::vector<std::vector<double>> l(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = a[i][j];
            for (std::size_t k = 0; k < j; ++k)
                s -= l[i][k] * l[j][k];
            if (i == j) {
                if (!(s > 0.0))
                    throw ValidationError(
                        "correlation matrix is not positive definite");
                l[i][i] = std::sqrt(s);
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    return l;
}

BasketOutcome run_chain(const BasketDefinition& basket,
                        const std::map<std::string, PiecewiseDistribution>& dists,
                        const BaselineProjection& baseline,
                        const MonteCarloOptions& opts,
                        double floor,
                        const std::map<std::string, double>* pins) {
    basket.validate();
    if (opts.samples < 1)
        throw ValidationError("sample count must be >= 1");
    if (!(floor >= 0.0 && floor < 1.0))
        throw DomainError(std::format(
            "tail floor {} outside [0,1)", floor));
    if (pins) {
        for (const auto& [cat, p] : *pins) {
            if (!(p >= 0.0 && p <= 1.0))
                throw DomainError(std::format(
                    "pin percentile {} for '{}' outside [0,1]", p, cat));
            if (std::find_if(basket.categories.begin(), basket.categories.end(),
                             [&](const auto& cw) { return cw.first == cat; }) ==
                basket.categories.end())
                throw UnknownCategoryError(std::format(
                    "pinned category '{}' is not in basket '{}'", cat,
                    basket.name));
        }
    }

    const RandomStream root(opts.seed);
    std::vector<CategorySlot> slots;
    slots.reserve(basket.categories.size());
    for (const auto& [id, w] : basket.categories) {
        const auto it = dists.find(id);
        if (it == dists.end())
            throw CategoryMismatchError(std::format(
                "no distribution provided for basket category '{}'", id));
        CategorySlot slot{id, w, &it->second, root.fork("category:" + id)};
        slot.floor = floor;
        if (pins) {
            const auto pin = pins->find(id);
            if (pin != pins->end())
                slot.pinned = it->second.quantile(pin->second);
        }
        slots.push_back(std::move(slot));
    }
    std::sort(slots.begin(), slots.end(),
              [](const CategorySlot& a, const CategorySlot& b) { return a.id < b.id; });

    std::vector<std::vector<double>> chol;
    if (opts.correlation)
        chol = copula_cholesky(*opts.correlation, slots);

    const RandomStream baseline_stream = root.fork("baseline");
    const std::uint64_t m = opts.samples;
    std::vector<double> pct(m), cur(m), tot(m);

    auto fill = [&](std::uint64_t begin, std::uint64_t end) {
        std::vector<double> z(slots.size());
        for (std::uint64_t i = begin; i < end; ++i) {
            double change = 0.0;
            if (!chol.empty()) {
                for (std::size_t c = 0; c < slots.size(); ++c)
                    z[c] = inverse_normal_cdf(slots[c].stream.uniform_at(i));
            }
            for (std::size_t c = 0; c < slots.size(); ++c) {
                const CategorySlot& s = slots[c];
                double value;
                if (s.pinned) {
                    value = *s.pinned;
                } else {
                    double u;
                    if (!chol.empty()) {
                        double mixed = 0.0;
                        for (std::size_t k = 0; k <= c; ++k)
                            mixed += chol[c][k] * z[k];
                        u = normal_cdf(mixed);
                    } else {
                        u = s.stream.uniform_at(i);
                    }
                    if (s.floor > 0.0)
                        u = s.floor + u * (1.0 - s.floor);
                    value = s.dist->quantile(u);
                }
                change += s.weight * value;
            }
            const double cost = baseline.sample(baseline_stream.uniform_at(i));
            pct[i] = change;
            cur[i] = cost * change / 100.0;
            tot[i] = cost + cur[i];
        }
    };

    const unsigned workers = std::max(1u, opts.workers);
    if (workers == 1 || m < 2 * workers) {
        fill(0, m);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        const std::uint64_t chunk = (m + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const std::uint64_t begin = w * chunk;
            const std::uint64_t end = std::min(m, begin + chunk);
            if (begin >= end)
                break;
            pool.emplace_back(fill, begin, end);
        }
        for (auto& t : pool)
            t.join();
    }

    BasketOutcome out;
    out.percent = summarize(pct);
    out.currency = summarize(cur);
    out.total = summarize(tot);
    out.samples = m;
    out.seed = opts.seed;
    return out;
}

} // namespace

BasketOutcome propagate_basket(
    const BasketDefinition& basket,
    const std::map<std::string, PiecewiseDistribution>& dists,
    const BaselineProjection& baseline, const MonteCarloOptions& opts) {
    return run_chain(basket, dists, baseline, opts, 0.0, nullptr);
}

BasketOutcome conditional_tail(
    const BasketDefinition& basket,
    const std::map<std::string, PiecewiseDistribution>& dists,
    const BaselineProjection& baseline, double floor_percentile,
    const MonteCarloOptions& opts) {
    return run_chain(basket, dists, baseline, opts, floor_percentile, nullptr);
}

BasketOutcome pinned_whatif(
    const BasketDefinition& basket,
    const std::map<std::string, PiecewiseDistribution>& dists,
    const BaselineProjection& baseline,
    const std::map<std::string, double>& pins, const MonteCarloOptions& opts) {
    return run_chain(basket, dists, baseline, opts, 0.0, &pins);
}

} // namespace sej
