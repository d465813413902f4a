#pragma once

#include "sej/classical.hpp"
#include "sej/elicitation.hpp"
#include "sej/propagation.hpp"

#include <compare>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sej {

/// Target item key: one food category under one scenario.
struct TargetKey {
    std::string category;
    std::string scenario;
    auto operator<=>(const TargetKey&) const = default;
    std::string label() const { return category + "/" + scenario; }
};

/// Parsed per-expert target judgements, grouped by (category, scenario).
struct Panel {
    std::vector<std::string> experts;    // first-seen order
    std::vector<std::string> categories; // first-seen order
    std::vector<std::string> scenarios;  // first-seen order
    std::map<TargetKey, std::map<std::string, ElicitedQuantiles>> targets;
};

/// One requested what-if analysis.
struct WhatIfSpec {
    enum class Kind { conditional_tail, pinned };
    Kind kind = Kind::conditional_tail;
    std::string basket;
    std::string scenario;
    double floor = 0.0;                  // conditional_tail
    std::map<std::string, double> pins;  // pinned
};

/// Everything a run needs, named by one manifest file.
struct InputBundle {
    Panel panel;
    std::vector<CalibrationItem> calibration; // may be empty
    std::vector<BasketDefinition> baskets;
    SeasonalHistory history;
    std::optional<std::map<std::string, double>> scenario_weights; // elicited
    std::vector<WhatIfSpec> whatifs;
};

// Delimited-text readers (UTF-8, comma, '.' decimal separator, header row).
// ParseError carries a file:line locus; ValidationError names the offending
// expert / item / basket.
Panel parse_judgements(const std::filesystem::path& file);
std::vector<CalibrationItem> parse_calibration(const std::filesystem::path& file);
std::vector<BasketDefinition> parse_baskets(const std::filesystem::path& file);
SeasonalHistory parse_history(const std::filesystem::path& file);
std::map<std::string, double> parse_scenario_weights(const std::filesystem::path& file);

/// Serializes target judgements back to the delimited format parse_judgements
/// reads (round-trip safe).
void write_judgements(const Panel& panel, const std::filesystem::path& file);

/// Reads the manifest (JSON, paths resolved relative to its directory) and
/// every file it names.
InputBundle load_bundle(const std::filesystem::path& manifest);

} // namespace sej
