#ifndef GMI_INGEST_HPP
#define GMI_INGEST_HPP

#include <array>
#include <istream>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "gmi/category.hpp"
#include "gmi/errors.hpp"
#include "gmi/rubric.hpp"
#include "gmi/schema.hpp"
#include "gmi/text.hpp"
#include "gmi/value.hpp"

namespace gmi {

struct Observation {
    std::string indicator_id;
    std::string raw;
    std::string unit; // annotation column, empty when absent
    TypedValue value;

    bool operator==(const Observation&) const = default;
};

struct ProgramDataset {
    std::string program;
    std::map<std::string, Observation> observations;
    RubricAnswers rubric;

    bool operator==(const ProgramDataset&) const = default;
};

// Token symbol -> USD per token. Empty unless the user supplies a rates file.
using ConversionRates = std::map<std::string, double>;

// Rates file: header "symbol|usd_rate".
inline ConversionRates load_rates(std::istream& in) {
    text::RecordReader reader(in);
    reader.expect_header({"symbol", "usd_rate"});
    ConversionRates rates;
    while (auto rec = reader.next()) {
        if (rec->size() != 2) throw ParseError("expected 'symbol|usd_rate'", reader.line());
        const auto rate = text::to_double((*rec)[1]);
        if (!rate || *rate <= 0) throw ParseError("rate must be a positive number", reader.line());
        if (!rates.emplace(text::upper((*rec)[0]), *rate).second)
            throw ParseError("symbol '" + (*rec)[0] + "' listed twice", reader.line());
    }
    return rates;
}

// Parses one cell and expresses it in the indicator's declared unit. A unit
// written inside the cell ("7.9 weeks") wins over the annotation column.
inline TypedValue read_cell(std::string_view raw, std::string_view unit_annotation, const IndicatorDef& def) {
    const auto parsed = parse_value(raw, def);
    std::string from(unit_annotation);
    if (parsed.is<Number>() && !parsed.as<Number>().unit.empty()) from = parsed.as<Number>().unit;
    return coerce_unit(parsed, from, def);
}

// Observation file:
//   program|<name>
//   indicator_id|raw_value|unit
//   <rows; unit column optional>
//   [rubric]                      (optional section)
//   criterion_id|score
//   <rows>
inline ProgramDataset load_program_dataset(std::istream& in, const Schema& schema,
                                           const RubricTemplate& tmpl = builtin_template()) {
    text::RecordReader reader(in);
    auto first = reader.next();
    if (!first || first->size() != 2 || text::lower((*first)[0]) != "program" || (*first)[1].empty())
        throw ParseError("observation file must start with 'program|<name>'", reader.line());

    ProgramDataset ds;
    ds.program = (*first)[1];
    reader.expect_header({"indicator_id", "raw_value", "unit"});

    bool rubric_section = false;
    while (auto rec = reader.next()) {
        const auto line = reader.line();
        if (rec->size() == 1 && text::lower((*rec)[0]) == "[rubric]") {
            rubric_section = true;
            break;
        }
        if (rec->size() < 2 || rec->size() > 3)
            throw ParseError("expected 'indicator_id|raw_value|unit'", line);
        const auto& id = (*rec)[0];
        const auto& raw = (*rec)[1];
        const std::string unit = rec->size() == 3 ? (*rec)[2] : std::string();

        const auto& def = schema.at(id);
        if (def.kind == IndicatorKind::Synthetic)
            throw ParseError("roll-up '" + id + "' is computed, not observed", line);
        if (ds.observations.contains(id)) throw DuplicateIndicator(id);

        TypedValue value = read_cell(raw, unit, def);
        if (def.kind == IndicatorKind::Rubric && !value.is<Missing>()) {
            const auto score = value.is<Number>() ? value.as<Number>().value : -1.0;
            if (score != static_cast<long>(score)) throw ParseError("rubric score must be an integer", line);
            check_rubric_score(id, static_cast<long>(score));
        }
        ds.observations.emplace(id, Observation{id, raw, unit, std::move(value)});
    }

    if (rubric_section) {
        reader.expect_header({"criterion_id", "score"});
        ds.rubric = read_rubric_rows(reader);
        for (const auto& [id, score] : ds.rubric)
            if (!tmpl.find(id)) throw UnknownCriterion(id);
    }
    return ds;
}

enum class ExclusionReason { Missing, NonScorable, TokenUnconverted };

inline constexpr std::string_view to_string(ExclusionReason r) {
    switch (r) {
    case ExclusionReason::Missing: return "missing";
    case ExclusionReason::NonScorable: return "non-scorable";
    case ExclusionReason::TokenUnconverted: return "token-unconverted";
    }
    return "";
}

inline std::optional<ExclusionReason> parse_exclusion_reason(std::string_view s) {
    for (const auto r : {ExclusionReason::Missing, ExclusionReason::NonScorable, ExclusionReason::TokenUnconverted})
        if (to_string(r) == s) return r;
    return std::nullopt;
}

// The number min-max normalization sees for one observation, or why it is left out.
inline std::variant<double, ExclusionReason> scalar_value(const TypedValue& v, const IndicatorDef& def,
                                                          const ConversionRates& rates) {
    if (v.is<Missing>()) return ExclusionReason::Missing;
    if (!def.scorable()) return ExclusionReason::NonScorable;
    if (v.is<Number>()) return v.as<Number>().value;
    if (v.is<Ratio>()) return v.as<Ratio>().value();
    if (v.is<Money>()) return v.as<Money>().amount;
    if (v.is<Binary>()) return static_cast<double>(v.as<Binary>().value);
    if (v.is<TokenAmount>()) {
        const auto& t = v.as<TokenAmount>();
        const auto it = rates.find(t.symbol);
        if (it == rates.end()) return ExclusionReason::TokenUnconverted;
        return t.amount * it->second;
    }
    return ExclusionReason::NonScorable;
}

struct CategoryValidation {
    std::vector<std::string> scorable_present;
    std::size_t missing = 0;
    std::vector<std::string> non_scorable;
    std::vector<std::string> token_unconverted;
    std::size_t rubric_responses = 0;
    bool scorable = false;
};

struct ExclusionEntry {
    std::string indicator;
    std::string raw;
    ExclusionReason reason = ExclusionReason::Missing;

    bool operator==(const ExclusionEntry&) const = default;
};

struct ValidationReport {
    std::string program;
    std::array<CategoryValidation, kCategoryCount> categories{};
    std::vector<ExclusionEntry> exclusions;

    const CategoryValidation& at(Category c) const { return categories[index_of(c)]; }

    std::vector<Category> unscorable() const {
        std::vector<Category> out;
        for (const auto c : kAllCategories)
            if (!at(c).scorable) out.push_back(c);
        return out;
    }

    bool all_scorable() const { return unscorable().empty(); }
};

// Pre-scoring gate. A category is scorable when it has at least one usable
// quantitative value or one rubric response.
inline ValidationReport validate_dataset(const ProgramDataset& ds, const Schema& schema,
                                         const RubricTemplate& tmpl = builtin_template(),
                                         const ConversionRates& rates = {}) {
    ValidationReport report;
    report.program = ds.program;
    for (const auto& [id, obs] : ds.observations) {
        const auto& def = schema.at(id);
        auto& cat = report.categories[index_of(def.category)];
        if (def.kind == IndicatorKind::Rubric) {
            if (obs.value.is<Missing>()) ++cat.missing;
            else ++cat.rubric_responses;
            continue;
        }
        const auto scalar = scalar_value(obs.value, def, rates);
        if (std::holds_alternative<double>(scalar)) {
            cat.scorable_present.push_back(id);
            continue;
        }
        const auto reason = std::get<ExclusionReason>(scalar);
        switch (reason) {
        case ExclusionReason::Missing: ++cat.missing; break;
        case ExclusionReason::NonScorable: cat.non_scorable.push_back(id); break;
        case ExclusionReason::TokenUnconverted: cat.token_unconverted.push_back(id); break;
        }
        report.exclusions.push_back({id, obs.raw, reason});
    }
    for (const auto& [criterion, score] : ds.rubric) {
        const auto* c = tmpl.find(criterion);
        if (!c) throw UnknownCriterion(criterion);
        ++report.categories[index_of(c->category)].rubric_responses;
    }
    for (auto& cat : report.categories) cat.scorable = !cat.scorable_present.empty() || cat.rubric_responses > 0;
    return report;
}

} // namespace gmi

#endif // GMI_INGEST_HPP
