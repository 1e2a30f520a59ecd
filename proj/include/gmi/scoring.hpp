#ifndef GMI_SCORING_HPP
#define GMI_SCORING_HPP

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "gmi/category.hpp"
#include "gmi/errors.hpp"
#include "gmi/ingest.hpp"
#include "gmi/rubric.hpp"
#include "gmi/schema.hpp"
#include "gmi/text.hpp"
#include "gmi/value.hpp"

namespace gmi {

// Score assigned to every present value when the range collapses.
inline constexpr double kDegenerateScore = 0.5;
inline constexpr double kMaxGmi = static_cast<double>(kCategoryCount);

struct Normalized {
    std::vector<std::optional<double>> scores; // nullopt where the input was missing
    std::optional<double> min;
    std::optional<double> max;
    bool degenerate = false;
};

// Min-max scaling across programs. Missing inputs stay missing and do not
// move the bounds; a collapsed range (one value, or all equal) maps to 0.5.
inline Normalized minmax_normalize(std::span<const std::optional<double>> values) {
    Normalized out;
    out.scores.resize(values.size());
    for (const auto& v : values) {
        if (!v) continue;
        out.min = out.min ? std::min(*out.min, *v) : *v;
        out.max = out.max ? std::max(*out.max, *v) : *v;
    }
    if (!out.min) return out;
    const double lo = *out.min;
    const double hi = *out.max;
    out.degenerate = !(hi > lo);
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!values[i]) continue;
        out.scores[i] = out.degenerate ? kDegenerateScore : std::clamp((*values[i] - lo) / (hi - lo), 0.0, 1.0);
    }
    return out;
}

inline double directional_score(double normalized, Direction direction) {
    switch (direction) {
    case Direction::HigherBetter: return normalized;
    case Direction::LowerBetter: return 1.0 - normalized;
    case Direction::NonScorable: break;
    }
    throw ContractViolation("directional_score called with a non-scorable direction");
}

// Equal-weight mean of the included indicator scores, with the rubric score
// (when present) counted as one more element.
inline double score_category(std::span<const double> indicator_scores, std::optional<double> rubric_score) {
    const std::size_t n = indicator_scores.size() + (rubric_score ? 1 : 0);
    if (n == 0) throw EmptyCategory("category");
    double sum = std::accumulate(indicator_scores.begin(), indicator_scores.end(), 0.0);
    if (rubric_score) sum += *rubric_score;
    return sum / static_cast<double>(n);
}

enum class Stage { Experimental, Foundational, Developmental, Advanced };

inline constexpr std::string_view to_string(Stage s) {
    switch (s) {
    case Stage::Experimental: return "Experimental";
    case Stage::Foundational: return "Foundational";
    case Stage::Developmental: return "Developmental";
    case Stage::Advanced: return "Advanced";
    }
    return "";
}

inline std::optional<Stage> parse_stage(std::string_view s) {
    for (const auto st : {Stage::Experimental, Stage::Foundational, Stage::Developmental, Stage::Advanced})
        if (to_string(st) == s) return st;
    return std::nullopt;
}

// Lower edges of the upper three stages; intervals are half-open except the top.
struct StageThresholds {
    double foundational = 1.5;
    double developmental = 3.0;
    double advanced = 4.5;
};

inline Stage classify_maturity(double gmi, const StageThresholds& t = {}) {
    if (!(gmi >= 0.0 && gmi <= kMaxGmi)) throw ContractViolation("GMI must lie in [0, 6]");
    if (gmi < t.foundational) return Stage::Experimental;
    if (gmi < t.developmental) return Stage::Foundational;
    if (gmi < t.advanced) return Stage::Developmental;
    return Stage::Advanced;
}

struct GmiOptions {
    bool allow_partial = false;
    std::array<double, kCategoryCount> weights{1.0, 1.0, 1.0, 1.0, 1.0, 1.0};
    StageThresholds thresholds{};
};

// One normalization step: an indicator across programs, or a category roll-up.
struct NormalizationRecord {
    std::string indicator;
    std::string raw;
    Qualifier qualifier = Qualifier::Unspecified;
    std::optional<double> min;
    std::optional<double> max;
    std::optional<double> score;
    std::optional<ExclusionReason> exclusion;
    bool degenerate = false;

    bool operator==(const NormalizationRecord&) const = default;
};

struct GmiResult {
    std::string program;
    PerCategory<double> category_scores{};
    PerCategory<double> normalized_category_scores{};
    double gmi = 0.0;
    Stage stage = Stage::Experimental;
    std::vector<NormalizationRecord> audit;

    bool operator==(const GmiResult&) const = default;
};

struct ProgramCategories {
    std::string program;
    PerCategory<double> scores{};
};

namespace detail {

inline void require_unique_programs(const std::vector<std::string>& names) {
    std::set<std::string> seen;
    for (const auto& n : names)
        if (!seen.insert(n).second) throw DuplicateProgram(n);
}

} // namespace detail

// Normalizes each category across programs and sums the six normalized
// scores per program. With allow_partial, absent categories are skipped and
// the sum is rescaled to the full six-category range.
inline std::vector<GmiResult> compute_gmi(std::span<const ProgramCategories> programs, const GmiOptions& opts = {}) {
    std::vector<std::string> names;
    for (const auto& p : programs) names.push_back(p.program);
    detail::require_unique_programs(names);

    std::vector<AbsentCategory> absent;
    for (const auto& p : programs) {
        const bool none = std::none_of(p.scores.begin(), p.scores.end(), [](const auto& s) { return s.has_value(); });
        for (const auto c : kAllCategories)
            if (!p.scores[index_of(c)] && (!opts.allow_partial || none))
                absent.push_back({p.program, std::string(code(c))});
    }
    if (!absent.empty()) throw PartialDataError(std::move(absent));

    std::vector<GmiResult> results(programs.size());
    for (std::size_t i = 0; i < programs.size(); ++i) {
        results[i].program = programs[i].program;
        results[i].category_scores = programs[i].scores;
    }

    for (const auto c : kAllCategories) {
        std::vector<std::optional<double>> column;
        for (const auto& p : programs) column.push_back(p.scores[index_of(c)]);
        const auto norm = minmax_normalize(column);
        for (std::size_t i = 0; i < programs.size(); ++i) {
            NormalizationRecord rec{rollup_id(c), "", Qualifier::Exact, norm.min, norm.max, norm.scores[i], {},
                                    norm.degenerate};
            if (column[i]) rec.raw = text::shortest(*column[i]);
            else {
                rec.qualifier = Qualifier::Unspecified;
                rec.exclusion = ExclusionReason::Missing;
            }
            results[i].normalized_category_scores[index_of(c)] = norm.scores[i];
            results[i].audit.push_back(std::move(rec));
        }
    }

    const double total_weight = std::accumulate(opts.weights.begin(), opts.weights.end(), 0.0);
    for (auto& r : results) {
        double sum = 0.0;
        double present_weight = 0.0;
        for (const auto c : kAllCategories) {
            if (const auto& s = r.normalized_category_scores[index_of(c)]) {
                sum += opts.weights[index_of(c)] * *s;
                present_weight += opts.weights[index_of(c)];
            }
        }
        r.gmi = present_weight == total_weight ? sum : sum * total_weight / present_weight;
        // Classified at reporting precision so the stage always agrees with the printed composite.
        const double on_six = std::clamp(r.gmi * kMaxGmi / total_weight, 0.0, kMaxGmi);
        r.stage = classify_maturity(text::round4(on_six), opts.thresholds);
    }
    return results;
}

using IndicatorScore = std::variant<double, ExclusionReason>;

// Per-program, per-indicator scores plus the per-category aggregates.
struct ScoreMatrix {
    std::vector<std::string> programs;
    std::map<std::pair<std::string, std::string>, IndicatorScore> entries;
    std::map<std::pair<std::string, Category>, double> category_scores;
};

struct ScoringRun {
    ScoreMatrix matrix;
    std::vector<GmiResult> results;
};

// Full raw-indicator path: normalize every observed quantitative indicator
// across programs, fold in rubric responses, aggregate per category, then
// compose the GMI.
inline ScoringRun score_datasets(std::span<const ProgramDataset> datasets, const Schema& schema,
                                 const RubricTemplate& tmpl = builtin_template(), const ConversionRates& rates = {},
                                 const GmiOptions& opts = {}) {
    ScoringRun run;
    auto& matrix = run.matrix;
    for (const auto& ds : datasets) matrix.programs.push_back(ds.program);
    detail::require_unique_programs(matrix.programs);

    std::set<std::string> observed;
    for (const auto& ds : datasets)
        for (const auto& [id, obs] : ds.observations) {
            schema.at(id);
            observed.insert(id);
        }

    const std::size_t n = datasets.size();
    std::vector<std::vector<NormalizationRecord>> audits(n);
    std::vector<std::array<std::vector<double>, kCategoryCount>> included(n);
    std::vector<std::array<std::vector<double>, kCategoryCount>> rubric_units(n);

    for (const auto& def : schema.indicators()) {
        if (!observed.contains(def.id)) continue;
        if (def.kind == IndicatorKind::Rubric) {
            for (std::size_t i = 0; i < n; ++i) {
                const auto it = datasets[i].observations.find(def.id);
                if (it == datasets[i].observations.end() || it->second.value.is<Missing>()) continue;
                const auto score = static_cast<int>(it->second.value.as<Number>().value);
                rubric_units[i][index_of(def.category)].push_back(rubric_to_unit(score));
            }
            continue;
        }
        if (def.kind != IndicatorKind::Quantitative) continue;

        std::vector<std::optional<double>> column(n);
        std::vector<IndicatorScore> scalars(n, ExclusionReason::Missing);
        std::vector<const Observation*> cells(n, nullptr);
        for (std::size_t i = 0; i < n; ++i) {
            const auto it = datasets[i].observations.find(def.id);
            if (it == datasets[i].observations.end()) continue;
            cells[i] = &it->second;
            scalars[i] = scalar_value(it->second.value, def, rates);
            if (const auto* v = std::get_if<double>(&scalars[i])) column[i] = *v;
        }
        const auto norm = minmax_normalize(column);

        for (std::size_t i = 0; i < n; ++i) {
            NormalizationRecord rec;
            rec.indicator = def.id;
            if (cells[i]) {
                rec.raw = cells[i]->raw;
                rec.qualifier = cells[i]->value.qualifier;
            }
            IndicatorScore entry = scalars[i];
            if (norm.scores[i]) {
                const double s = directional_score(*norm.scores[i], def.direction);
                rec.min = norm.min;
                rec.max = norm.max;
                rec.score = s;
                rec.degenerate = norm.degenerate;
                entry = s;
                included[i][index_of(def.category)].push_back(s);
            } else {
                rec.exclusion = std::get<ExclusionReason>(scalars[i]);
            }
            matrix.entries[{datasets[i].program, def.id}] = entry;
            audits[i].push_back(std::move(rec));
        }
    }

    std::vector<ProgramCategories> categories(n);
    for (std::size_t i = 0; i < n; ++i) {
        categories[i].program = datasets[i].program;
        for (const auto& [cat, units] : collect_responses(tmpl, datasets[i].rubric))
            rubric_units[i][index_of(cat)].insert(rubric_units[i][index_of(cat)].end(), units.begin(), units.end());
        for (const auto c : kAllCategories) {
            const auto& units = rubric_units[i][index_of(c)];
            std::optional<double> rubric;
            if (!units.empty())
                rubric = std::accumulate(units.begin(), units.end(), 0.0) / static_cast<double>(units.size());
            const auto& scores = included[i][index_of(c)];
            if (scores.empty() && !rubric) continue;
            const double s = score_category(scores, rubric);
            categories[i].scores[index_of(c)] = s;
            matrix.category_scores[{datasets[i].program, c}] = s;
        }
    }

    run.results = compute_gmi(categories, opts);
    for (std::size_t i = 0; i < n; ++i) {
        auto& audit = run.results[i].audit;
        audit.insert(audit.begin(), audits[i].begin(), audits[i].end());
    }
    return run;
}

// Precomputed category table (rows = categories, columns = programs):
//   category|<program>|<program>|...
//   FAO|3.8764|...          (FAO, FAO-QN or FAO-QL all name the FAO row)
//   note|<free text>        (carried into report footnotes)
// Empty or "n.a." cells are absent categories.
struct CategoryTable {
    std::vector<ProgramCategories> programs;
    std::vector<std::string> notes;
};

inline CategoryTable load_category_table(std::istream& in) {
    text::RecordReader reader(in);
    auto header = reader.next();
    if (!header || header->size() < 2 || text::lower((*header)[0]) != "category")
        throw ParseError("category table must start with 'category|<program>|...'", reader.line());

    CategoryTable table;
    std::vector<std::string> names;
    for (std::size_t i = 1; i < header->size(); ++i) {
        if ((*header)[i].empty()) throw ParseError("empty program name", reader.line());
        names.push_back((*header)[i]);
        table.programs.push_back({(*header)[i], {}});
    }
    detail::require_unique_programs(names);

    std::set<Category> seen;
    while (auto rec = reader.next()) {
        const auto line = reader.line();
        const auto key = (*rec)[0];
        if (text::lower(key) == "note") {
            if (rec->size() != 2) throw ParseError("expected 'note|<text>'", line);
            table.notes.push_back((*rec)[1]);
            continue;
        }
        const auto cat = parse_category(key.substr(0, 3));
        if (!cat || !(key.size() == 3 || key == rollup_id(*cat) || key == std::string(code(*cat)) + "-QL"))
            throw ParseError("unknown category row '" + key + "'", line);
        if (!seen.insert(*cat).second) throw ParseError("category " + key + " listed twice", line);
        if (rec->size() != header->size())
            throw ParseError("expected " + std::to_string(header->size()) + " fields", line);
        for (std::size_t i = 1; i < rec->size(); ++i) {
            const auto& cell = (*rec)[i];
            if (cell.empty() || text::lower(cell) == "n.a.") continue;
            const auto v = text::to_double(cell);
            if (!v) throw ParseError("'" + cell + "' is not a number", line);
            table.programs[i - 1].scores[index_of(*cat)] = *v;
        }
    }
    return table;
}

} // namespace gmi

#endif // GMI_SCORING_HPP
