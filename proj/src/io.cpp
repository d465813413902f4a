#include "sej/io.hpp"

#include "sej/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <format>
#include <fstream>
#include <sstream>

namespace sej {

namespace {

using ordered_json = nlohmann::ordered_json;

struct CsvRow {
    std::size_t line = 0;
    std::vector<std::string> fields;
};

struct CsvFile {
    std::filesystem::path path;
    std::vector<std::string> header;
    std::vector<CsvRow> rows;
};

std::string locus(const std::filesystem::path& path, std::size_t line) {
    return std::format("{}:{}", path.string(), line);
}

// RFC 4180 subset: quoted fields may contain commas and doubled quotes.
std::vector<std::string> split_csv_line(const std::string& line,
                                        const std::filesystem::path& path,
                                        std::size_t lineno) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            if (!cur.empty())
                throw ParseError(std::format(
                    "{}: quote inside unquoted field", locus(path, lineno)));
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (quoted)
        throw ParseError(std::format("{}: unterminated quote", locus(path, lineno)));
    fields.push_back(std::move(cur));
    return fields;
}

CsvFile read_csv(const std::filesystem::path& path,
                 const std::vector<std::string>& expected_header) {
    std::ifstream in(path);
    if (!in)
        throw IoError(std::format("cannot open '{}'", path.string()));
    CsvFile out;
    out.path = path;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        auto fields = split_csv_line(line, path, lineno);
        if (out.header.empty()) {
            out.header = std::move(fields);
            if (out.header != expected_header) {
                std::string want;
                for (const auto& h : expected_header)
                    want += (want.empty() ? "" : ",") + h;
                throw ParseError(std::format(
                    "{}: expected header '{}'", locus(path, lineno), want));
            }
            continue;
        }
        if (fields.size() != expected_header.size())
            throw ParseError(std::format(
                "{}: expected {} fields, found {}", locus(path, lineno),
                expected_header.size(), fields.size()));
        out.rows.push_back(CsvRow{lineno, std::move(fields)});
    }
    if (out.header.empty())
        throw ParseError(std::format("{}: file is empty", path.string()));
    return out;
}

double parse_number(const std::string& text, const CsvFile& file,
                    const CsvRow& row, const char* field) {
    const char* begin = text.data();
    const char* end = begin + text.size();
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end || text.empty())
        throw ParseError(std::format("{}: field '{}' is not a number: '{}'",
                                     locus(file.path, row.line), field, text));
    return value;
}

long parse_integer(const std::string& text, const CsvFile& file,
                   const CsvRow& row, const char* field) {
    const char* begin = text.data();
    const char* end = begin + text.size();
    long value = 0;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end || text.empty())
        throw ParseError(std::format("{}: field '{}' is not an integer: '{}'",
                                     locus(file.path, row.line), field, text));
    return value;
}

void require_nonempty(const std::string& text, const CsvFile& file,
                      const CsvRow& row, const char* field) {
    if (text.empty())
        throw ParseError(std::format("{}: field '{}' is empty",
                                     locus(file.path, row.line), field));
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += "\"\"";
        else
            out.push_back(c);
    }
    out += "\"";
    return out;
}

template <typename Seq, typename T>
void remember(Seq& seq, const T& value) {
    if (std::find(seq.begin(), seq.end(), value) == seq.end())
        seq.push_back(value);
}

constexpr const char* kBaselineToken = "__baseline__";

} // namespace

Panel parse_judgements(const std::filesystem::path& file) {
    const CsvFile csv =
        read_csv(file, {"expert", "category", "scenario", "q05", "q50", "q95"});
    Panel panel;
    for (const auto& row : csv.rows) {
        const std::string& expert = row.fields[0];
        const std::string& category = row.fields[1];
        const std::string& scenario = row.fields[2];
        require_nonempty(expert, csv, row, "expert");
        require_nonempty(category, csv, row, "category");
        require_nonempty(scenario, csv, row, "scenario");
        ElicitedQuantiles q{parse_number(row.fields[3], csv, row, "q05"),
                            parse_number(row.fields[4], csv, row, "q50"),
                            parse_number(row.fields[5], csv, row, "q95")};
        const TargetKey key{category, scenario};
        try {
            q.validate();
        } catch (const QuantileOrderError& e) {
            throw ValidationError(std::format(
                "expert '{}', item '{}': {}", expert, key.label(), e.what()));
        }
        auto& per_expert = panel.targets[key];
        if (!per_expert.emplace(expert, q).second)
            throw ValidationError(std::format(
                "expert '{}' judged item '{}' twice", expert, key.label()));
        remember(panel.experts, expert);
        remember(panel.categories, category);
        remember(panel.scenarios, scenario);
    }
    if (panel.targets.empty())
        throw ValidationError(
            std::format("'{}' contains no judgements", file.string()));
    // every expert must cover every (category, scenario) item
    for (const auto& [key, per_expert] : panel.targets)
        for (const auto& expert : panel.experts)
            if (!per_expert.contains(expert))
                throw ValidationError(std::format(
                    "expert '{}' has no judgement for item '{}'", expert,
                    key.label()));
    return panel;
}

std::vector<CalibrationItem> parse_calibration(const std::filesystem::path& file) {
    const CsvFile csv = read_csv(
        file, {"expert", "item", "q05", "q50", "q95", "realization"});
    std::vector<CalibrationItem> items;
    std::vector<std::string> experts;
    auto find_item = [&](const std::string& id) -> CalibrationItem& {
        for (auto& item : items)
            if (item.id == id)
                return item;
        items.push_back(CalibrationItem{id, 0.0, {}});
        return items.back();
    };
    for (const auto& row : csv.rows) {
        const std::string& expert = row.fields[0];
        const std::string& id = row.fields[1];
        require_nonempty(expert, csv, row, "expert");
        require_nonempty(id, csv, row, "item");
        ElicitedQuantiles q{parse_number(row.fields[2], csv, row, "q05"),
                            parse_number(row.fields[3], csv, row, "q50"),
                            parse_number(row.fields[4], csv, row, "q95")};
        const double realization =
            parse_number(row.fields[5], csv, row, "realization");
        try {
            q.validate();
        } catch (const QuantileOrderError& e) {
            throw ValidationError(std::format(
                "expert '{}', calibration item '{}': {}", expert, id, e.what()));
        }
        CalibrationItem& item = find_item(id);
        if (item.judgements.empty()) {
            item.realization = realization;
        } else if (item.realization != realization) {
            throw ValidationError(std::format(
                "calibration item '{}' has conflicting realizations {} and {}",
                id, item.realization, realization));
        }
        if (!item.judgements.emplace(expert, q).second)
            throw ValidationError(std::format(
                "expert '{}' judged calibration item '{}' twice", expert, id));
        remember(experts, expert);
    }
    if (items.empty())
        throw ValidationError(
            std::format("'{}' contains no calibration items", file.string()));
    for (const auto& item : items)
        for (const auto& expert : experts)
            if (!item.judgements.contains(expert))
                throw ValidationError(std::format(
                    "expert '{}' has no judgement for calibration item '{}'",
                    expert, item.id));
    return items;
}

std::vector<BasketDefinition> parse_baskets(const std::filesystem::path& file) {
    const CsvFile csv = read_csv(file, {"basket", "category", "weight", "date"});
    std::vector<BasketDefinition> baskets;
    std::vector<std::string> with_baseline;
    auto find_basket = [&](const std::string& name) -> BasketDefinition& {
        for (auto& b : baskets)
            if (b.name == name)
                return b;
        baskets.push_back(BasketDefinition{name, {}, 0.0, ""});
        return baskets.back();
    };
    for (const auto& row : csv.rows) {
        const std::string& name = row.fields[0];
        const std::string& category = row.fields[1];
        require_nonempty(name, csv, row, "basket");
        require_nonempty(category, csv, row, "category");
        BasketDefinition& basket = find_basket(name);
        if (category == kBaselineToken) {
            if (std::find(with_baseline.begin(), with_baseline.end(), name) !=
                with_baseline.end())
                throw ValidationError(std::format(
                    "basket '{}' has more than one baseline record", name));
            basket.baseline_cost = parse_number(row.fields[2], csv, row, "weight");
            basket.baseline_date = row.fields[3];
            with_baseline.push_back(name);
        } else {
            if (!row.fields[3].empty())
                throw ParseError(std::format(
                    "{}: category rows must leave the date field empty",
                    locus(csv.path, row.line)));
            for (const auto& [existing, w] : basket.categories)
                if (existing == category)
                    throw ValidationError(std::format(
                        "basket '{}' lists category '{}' twice", name, category));
            basket.categories.emplace_back(
                category, parse_number(row.fields[2], csv, row, "weight"));
        }
    }
    if (baskets.empty())
        throw ValidationError(std::format("'{}' defines no baskets", file.string()));
    for (const auto& basket : baskets) {
        if (std::find(with_baseline.begin(), with_baseline.end(), basket.name) ==
            with_baseline.end())
            throw ValidationError(std::format(
                "basket '{}' has no baseline-cost record", basket.name));
        basket.validate();
    }
    return baskets;
}

SeasonalHistory parse_history(const std::filesystem::path& file) {
    const CsvFile csv = read_csv(file, {"year", "change"});
    SeasonalHistory hist;
    for (const auto& row : csv.rows) {
        const long year = parse_integer(row.fields[0], csv, row, "year");
        hist.observations.emplace_back(
            static_cast<int>(year), parse_number(row.fields[1], csv, row, "change"));
    }
    if (hist.observations.empty())
        throw ValidationError(std::format("'{}' contains no observations", file.string()));
    return hist;
}

std::map<std::string, double> parse_scenario_weights(const std::filesystem::path& file) {
    const CsvFile csv = read_csv(file, {"scenario", "weight"});
    std::map<std::string, double> weights;
    for (const auto& row : csv.rows) {
        require_nonempty(row.fields[0], csv, row, "scenario");
        const double w = parse_number(row.fields[1], csv, row, "weight");
        if (!weights.emplace(row.fields[0], w).second)
            throw ValidationError(std::format(
                "scenario '{}' weighted twice", row.fields[0]));
    }
    if (weights.empty())
        throw ValidationError(std::format("'{}' contains no weights", file.string()));
    return weights;
}

void write_judgements(const Panel& panel, const std::filesystem::path& file) {
    std::ofstream out(file);
    if (!out)
        throw IoError(std::format("cannot write '{}'", file.string()));
    out << "expert,category,scenario,q05,q50,q95\n";
    for (const auto& [key, per_expert] : panel.targets)
        for (const auto& [expert, q] : per_expert)
            out << std::format("{},{},{},{},{},{}\n", csv_quote(expert),
                               csv_quote(key.category), csv_quote(key.scenario),
                               q.q05, q.q50, q.q95);
    if (!out)
        throw IoError(std::format("failed writing '{}'", file.string()));
}

InputBundle load_bundle(const std::filesystem::path& manifest) {
    std::ifstream in(manifest);
    if (!in)
        throw IoError(std::format("cannot open manifest '{}'", manifest.string()));
    ordered_json doc;
    try {
        doc = ordered_json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::format("manifest '{}': {}", manifest.string(), e.what()));
    }
    if (!doc.is_object())
        throw ParseError(std::format("manifest '{}' must be a JSON object",
                                     manifest.string()));
    const auto base = manifest.parent_path();
    auto resolve = [&](const std::string& rel) { return base / rel; };
    auto need_path = [&](const char* key) {
        if (!doc.contains(key) || !doc[key].is_string())
            throw ParseError(std::format(
                "manifest '{}' needs a string field '{}'", manifest.string(), key));
        return resolve(doc[key].get<std::string>());
    };

    InputBundle bundle;
    bundle.panel = parse_judgements(need_path("judgements"));
    if (doc.contains("calibration"))
        bundle.calibration = parse_calibration(need_path("calibration"));
    bundle.baskets = parse_baskets(need_path("baskets"));
    bundle.history = parse_history(need_path("history"));
    if (doc.contains("scenario_weights"))
        bundle.scenario_weights =
            parse_scenario_weights(need_path("scenario_weights"));

    if (doc.contains("whatifs")) {
        if (!doc["whatifs"].is_array())
            throw ParseError(std::format(
                "manifest '{}': 'whatifs' must be an array", manifest.string()));
        for (const auto& w : doc["whatifs"]) {
            WhatIfSpec spec;
            const std::string type = w.value("type", "");
            if (type == "conditional_tail") {
                spec.kind = WhatIfSpec::Kind::conditional_tail;
                if (!w.contains("floor") || !w["floor"].is_number())
                    throw ParseError("conditional_tail what-if needs a numeric 'floor'");
                spec.floor = w["floor"].get<double>();
            } else if (type == "pinned") {
                spec.kind = WhatIfSpec::Kind::pinned;
                if (!w.contains("pins") || !w["pins"].is_object() || w["pins"].empty())
                    throw ParseError("pinned what-if needs a non-empty 'pins' object");
                for (const auto& [cat, p] : w["pins"].items()) {
                    if (!p.is_number())
                        throw ParseError(std::format(
                            "pin for '{}' must be a number", cat));
                    spec.pins[cat] = p.get<double>();
                }
            } else {
                throw ParseError(std::format(
                    "unknown what-if type '{}' (conditional_tail | pinned)", type));
            }
            spec.basket = w.value("basket", "");
            spec.scenario = w.value("scenario", "");
            if (spec.basket.empty() || spec.scenario.empty())
                throw ParseError("what-if needs 'basket' and 'scenario' fields");
            bundle.whatifs.push_back(std::move(spec));
        }
    }
    return bundle;
}

} // namespace sej
