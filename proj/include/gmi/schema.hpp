#ifndef GMI_SCHEMA_HPP
#define GMI_SCHEMA_HPP

#include <array>
#include <istream>
#include <map>
#include <optional>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "gmi/category.hpp"
#include "gmi/errors.hpp"
#include "gmi/text.hpp"

namespace gmi {

enum class IndicatorKind { Quantitative, Rubric, Synthetic };
enum class DataType { Numeric, Rational, Binary, Text, IsoAlpha3 };
enum class Direction { HigherBetter, LowerBetter, NonScorable };

inline constexpr std::string_view to_string(IndicatorKind k) {
    switch (k) {
    case IndicatorKind::Quantitative: return "quantitative";
    case IndicatorKind::Rubric: return "rubric";
    case IndicatorKind::Synthetic: return "synthetic";
    }
    return "";
}

inline constexpr std::string_view to_string(DataType t) {
    switch (t) {
    case DataType::Numeric: return "numeric";
    case DataType::Rational: return "rational";
    case DataType::Binary: return "binary";
    case DataType::Text: return "text";
    case DataType::IsoAlpha3: return "iso-alpha-3";
    }
    return "";
}

inline constexpr std::string_view to_string(Direction d) {
    switch (d) {
    case Direction::HigherBetter: return "higher-better";
    case Direction::LowerBetter: return "lower-better";
    case Direction::NonScorable: return "non-scorable";
    }
    return "";
}

namespace detail {

template <typename E, std::size_t N>
std::optional<E> parse_enum(std::string_view s, const std::array<E, N>& values) {
    for (const auto v : values)
        if (to_string(v) == s) return v;
    return std::nullopt;
}

} // namespace detail

inline std::optional<IndicatorKind> parse_kind(std::string_view s) {
    return detail::parse_enum(s, std::array{IndicatorKind::Quantitative, IndicatorKind::Rubric,
                                            IndicatorKind::Synthetic});
}

inline std::optional<DataType> parse_data_type(std::string_view s) {
    return detail::parse_enum(s, std::array{DataType::Numeric, DataType::Rational, DataType::Binary,
                                            DataType::Text, DataType::IsoAlpha3});
}

inline std::optional<Direction> parse_direction(std::string_view s) {
    return detail::parse_enum(
        s, std::array{Direction::HigherBetter, Direction::LowerBetter, Direction::NonScorable});
}

struct IndicatorDef {
    std::string id;
    Category category = Category::FAO;
    IndicatorKind kind = IndicatorKind::Quantitative;
    DataType data_type = DataType::Numeric;
    std::string unit = "none";
    Direction direction = Direction::HigherBetter;
    std::string description;

    // Eligible for min-max normalization: observed, numeric-like, with a polarity.
    bool scorable() const {
        return kind != IndicatorKind::Synthetic && direction != Direction::NonScorable &&
               (data_type == DataType::Numeric || data_type == DataType::Rational ||
                data_type == DataType::Binary);
    }

    bool operator==(const IndicatorDef&) const = default;
};

// Id of the category roll-up, e.g. "GOV-QN".
inline std::string rollup_id(Category c) { return std::string(code(c)) + "-QN"; }

class Schema {
public:
    Schema() = default;

    // Validates every invariant; throws SchemaError naming the first offending id.
    Schema(std::string version, std::vector<IndicatorDef> indicators)
        : version_(std::move(version)), indicators_(std::move(indicators)) {
        validate();
    }

    const std::string& version() const noexcept { return version_; }
    const std::vector<IndicatorDef>& indicators() const noexcept { return indicators_; }

    const IndicatorDef* find(std::string_view id) const {
        const auto it = index_.find(std::string(id));
        return it == index_.end() ? nullptr : &indicators_[it->second];
    }

    const IndicatorDef& at(std::string_view id) const {
        if (const auto* def = find(id)) return *def;
        throw UnknownIndicator(std::string(id));
    }

    bool operator==(const Schema& other) const {
        return version_ == other.version_ && indicators_ == other.indicators_;
    }

private:
    void validate() {
        static const std::regex id_pattern(R"(^(FAO|PSO|GOV|EFI|TAC|COM)-(QN|QL|AUX)(-[1-9][0-9]*)?$)");
        index_.clear();
        std::set<Category> has_rollup;
        std::set<Category> has_scorable;
        std::set<Category> needs_rollup;

        for (std::size_t i = 0; i < indicators_.size(); ++i) {
            const auto& d = indicators_[i];
            std::smatch m;
            if (!std::regex_match(d.id, m, id_pattern))
                throw SchemaError(d.id, "id does not match CAT-(QN|QL|AUX)(-n)");
            if (m[1].str() != code(d.category))
                throw SchemaError(d.id, "id prefix disagrees with category " + std::string(code(d.category)));
            if (!index_.emplace(d.id, i).second) throw SchemaError(d.id, "duplicate indicator id");
            if (d.description.find(text::kDelimiter) != std::string::npos ||
                d.unit.find(text::kDelimiter) != std::string::npos)
                throw SchemaError(d.id, "fields may not contain the '|' delimiter");

            const std::string band = m[2].str();
            const bool has_suffix = m[3].matched;
            switch (d.kind) {
            case IndicatorKind::Synthetic:
                if (band != "QN" || has_suffix) throw SchemaError(d.id, "synthetic roll-ups must be named CAT-QN");
                if (d.direction != Direction::NonScorable)
                    throw SchemaError(d.id, "synthetic roll-ups are never scored directly");
                has_rollup.insert(d.category);
                break;
            case IndicatorKind::Rubric:
                if (band != "QL") throw SchemaError(d.id, "rubric indicators use the QL band");
                if (d.unit != "scoring" || d.data_type != DataType::Numeric)
                    throw SchemaError(d.id, "rubric indicators must be numeric with unit 'scoring'");
                needs_rollup.insert(d.category);
                break;
            case IndicatorKind::Quantitative:
                if (band == "QL" || !has_suffix)
                    throw SchemaError(d.id, "quantitative indicators are named CAT-QN-n or CAT-AUX-n");
                needs_rollup.insert(d.category);
                break;
            }
            if ((d.data_type == DataType::Text || d.data_type == DataType::IsoAlpha3) &&
                d.direction != Direction::NonScorable)
                throw SchemaError(d.id, "text and country indicators must be non-scorable");
            if (d.scorable()) has_scorable.insert(d.category);
        }

        for (const auto c : needs_rollup)
            if (!has_rollup.contains(c)) throw SchemaError(rollup_id(c), "missing category roll-up");
        for (const auto c : kAllCategories)
            if (!has_scorable.contains(c))
                throw SchemaError(rollup_id(c), "category has no scorable indicator");
    }

    std::string version_;
    std::vector<IndicatorDef> indicators_;
    std::map<std::string, std::size_t> index_;
};

// Indicator registry shipped with the engine. Table-derived rows keep their
// data type and unit; AUX rows cover dataset rows that have no registry id.
inline const Schema& builtin_schema() {
    static const Schema schema = [] {
        using C = Category;
        using K = IndicatorKind;
        using T = DataType;
        constexpr auto HB = Direction::HigherBetter;
        constexpr auto NS = Direction::NonScorable;
        std::vector<IndicatorDef> defs;
        const auto add = [&](std::string id, C c, K k, T t, std::string unit, Direction d, std::string desc) {
            defs.push_back({std::move(id), c, k, t, std::move(unit), d, std::move(desc)});
        };
        const auto rollup = [&](C c) {
            add(rollup_id(c), c, K::Synthetic, T::Numeric, "none", NS, std::string(label(c)));
            add(std::string(code(c)) + "-QL", c, K::Rubric, T::Numeric, "scoring", HB,
                "Rubric Scoring " + std::string(label(c)));
        };

        rollup(C::FAO);
        add("FAO-QN-2", C::FAO, K::Quantitative, T::Numeric, "USD", HB, "Minimum Grant Size");
        add("FAO-QN-3", C::FAO, K::Quantitative, T::Numeric, "USD", HB, "Maximum Grant Size");
        add("FAO-QN-6", C::FAO, K::Quantitative, T::Numeric, "weeks", HB, "Evaluation Timeframe");
        add("FAO-QN-7", C::FAO, K::Quantitative, T::Text, "none", NS, "Grant Platform");
        add("FAO-QN-8", C::FAO, K::Quantitative, T::Text, "none", NS, "Link to Grant Round(s)");
        add("FAO-QN-9", C::FAO, K::Quantitative, T::Numeric, "scoring", HB, "Grant types");
        add("FAO-QN-10", C::FAO, K::Quantitative, T::Numeric, "scoring", HB, "Funding Type");
        add("FAO-AUX-1", C::FAO, K::Quantitative, T::Numeric, "USD", HB, "Average Grant Size");
        add("FAO-AUX-2", C::FAO, K::Quantitative, T::Text, "none", NS, "Funding Type (simplified)");
        add("FAO-AUX-3", C::FAO, K::Quantitative, T::Numeric, "USD", HB,
            "Market capitalisation of funding asset at round start");

        rollup(C::PSO);
        add("PSO-QN-1", C::PSO, K::Quantitative, T::Numeric, "scoring", HB, "Origin of Funds");
        add("PSO-QN-2", C::PSO, K::Quantitative, T::Binary, "scoring", HB, "Vesting Period for Fund Allocation");
        add("PSO-QN-3", C::PSO, K::Quantitative, T::Numeric, "scoring", HB, "Organizational Structure of Grantor");
        add("PSO-QN-4", C::PSO, K::Quantitative, T::Numeric, "scoring", HB, "Grant Program Principal");
        add("PSO-QN-5", C::PSO, K::Quantitative, T::Numeric, "signatories", HB, "Grant Program Agents");
        add("PSO-QN-6", C::PSO, K::Quantitative, T::Text, "none", NS, "Governance Structure");
        add("PSO-AUX-1", C::PSO, K::Quantitative, T::Text, "none", NS,
            "Organizational Structure of Grantor (governing body, as described)");
        add("PSO-AUX-2", C::PSO, K::Quantitative, T::Text, "none", NS,
            "Organizational Structure of Grantor (legal entity, as described)");
        add("PSO-AUX-3", C::PSO, K::Quantitative, T::Text, "none", NS, "Grant Program Principal (as described)");

        rollup(C::GOV);
        add("GOV-QN-1", C::GOV, K::Quantitative, T::Numeric, "scoring", HB, "Grant Program Objective");
        add("GOV-QN-3", C::GOV, K::Quantitative, T::Numeric, "scoring", HB,
            "Existence of Program Objective Description");
        add("GOV-QN-4", C::GOV, K::Quantitative, T::Text, "none", NS, "Link to Program Objective");

        rollup(C::EFI);
        add("EFI-QN-1", C::EFI, K::Quantitative, T::Binary, "scoring", HB, "Evaluation Criteria Public");
        add("EFI-QN-2", C::EFI, K::Quantitative, T::Binary, "scoring", HB, "Evaluation Shared with Applicants");
        add("EFI-QN-3", C::EFI, K::Quantitative, T::Text, "none", NS, "Reference to Evaluation Criteria");
        add("EFI-QN-4", C::EFI, K::Quantitative, T::Binary, "scoring", HB, "Grant process explained");
        add("EFI-QN-6", C::EFI, K::Quantitative, T::IsoAlpha3, "none", NS, "Domicile Foundation");
        add("EFI-QN-8", C::EFI, K::Quantitative, T::Numeric, "scoring", HB, "Program Audit");

        rollup(C::TAC);
        add("TAC-QN-4", C::TAC, K::Quantitative, T::Rational, "conversion rate", HB,
            "Average Application to Allocation share");
        add("TAC-QN-5", C::TAC, K::Quantitative, T::Binary, "scoring", HB, "Operated by a Service Provider");
        add("TAC-QN-6", C::TAC, K::Quantitative, T::Rational, "conversion rate", HB,
            "Program Manager to Applicant Ratio");

        rollup(C::COM);
        add("COM-QN-1", C::COM, K::Quantitative, T::Numeric, "headcount", HB, "Minimum Applicant Count per Round");
        add("COM-QN-2", C::COM, K::Quantitative, T::Numeric, "headcount", HB, "Maximum Applicant Count per Round");
        add("COM-QN-4", C::COM, K::Quantitative, T::Numeric, "grant count", HB,
            "Minimum Number of Grants Allocated per Round");
        add("COM-QN-5", C::COM, K::Quantitative, T::Numeric, "grant count", HB,
            "Maximum Number of Grants Allocated per Round");
        add("COM-QN-7", C::COM, K::Quantitative, T::Numeric, "weeks", HB, "Minimum Grant Duration");
        add("COM-QN-8", C::COM, K::Quantitative, T::Numeric, "weeks", HB, "Maximum Grant Duration");
        add("COM-QN-11", C::COM, K::Quantitative, T::Rational, "years", HB, "Time of Existence");
        add("COM-QN-12", C::COM, K::Quantitative, T::Numeric, "rounds", HB, "Round Count since Inception");
        add("COM-QN-13", C::COM, K::Quantitative, T::Numeric, "tracks", HB, "Number of Tracks per Round");
        add("COM-QN-14", C::COM, K::Quantitative, T::Rational, "USD", HB, "Overall Budget since Inception");
        add("COM-QN-19", C::COM, K::Quantitative, T::Rational, "USD", HB, "Operations Budget per Round");
        add("COM-QN-20", C::COM, K::Quantitative, T::Rational, "ratio", HB,
            "Operations Budget to Round Budget Ratio");
        add("COM-QN-21", C::COM, K::Quantitative, T::Numeric, "headcount", HB, "Program Management Team Size");
        add("COM-QN-22", C::COM, K::Quantitative, T::Numeric, "scoring", HB, "Impact Measurement");
        add("COM-QN-23", C::COM, K::Quantitative, T::Binary, "scoring", HB, "Grant Size Standardisation");
        add("COM-AUX-1", C::COM, K::Quantitative, T::Numeric, "headcount", HB, "Average Applicant Count per Round");
        add("COM-AUX-2", C::COM, K::Quantitative, T::Numeric, "grant count", HB,
            "Average Number of Grants Allocated per Round");
        add("COM-AUX-3", C::COM, K::Quantitative, T::Numeric, "weeks", HB, "Average Grant Duration");

        return Schema("gmi-builtin-1", std::move(defs));
    }();
    return schema;
}

// Schema file:
//   schema|<version>
//   id|category|kind|data_type|unit|direction|description
//   <one record per indicator>
inline std::string serialize_schema(const Schema& schema) {
    std::ostringstream out;
    out << "# GMI indicator schema\n";
    out << "schema|" << schema.version() << '\n';
    out << "id|category|kind|data_type|unit|direction|description\n";
    for (const auto& d : schema.indicators()) {
        out << d.id << '|' << code(d.category) << '|' << to_string(d.kind) << '|' << to_string(d.data_type)
            << '|' << d.unit << '|' << to_string(d.direction) << '|' << d.description << '\n';
    }
    return out.str();
}

inline Schema load_schema(std::istream& in) {
    text::RecordReader reader(in);
    auto first = reader.next();
    if (!first || first->size() != 2 || text::lower((*first)[0]) != "schema" || (*first)[1].empty())
        throw ParseError("schema file must start with 'schema|<version>'", reader.line());
    std::string version = (*first)[1];
    reader.expect_header({"id", "category", "kind", "data_type", "unit", "direction", "description"});

    std::vector<IndicatorDef> defs;
    while (auto rec = reader.next()) {
        const auto line = reader.line();
        if (rec->size() != 7) throw ParseError("expected 7 fields, got " + std::to_string(rec->size()), line);
        const auto& f = *rec;
        IndicatorDef d;
        d.id = f[0];
        const auto cat = parse_category(f[1]);
        const auto kind = parse_kind(text::lower(f[2]));
        const auto type = parse_data_type(text::lower(f[3]));
        const auto dir = parse_direction(text::lower(f[5]));
        if (d.id.empty()) throw ParseError("empty indicator id", line);
        if (!cat) throw ParseError("unknown category '" + f[1] + "'", line);
        if (!kind) throw ParseError("unknown kind '" + f[2] + "'", line);
        if (!type) throw ParseError("unknown data_type '" + f[3] + "'", line);
        if (!dir) throw ParseError("unknown direction '" + f[5] + "'", line);
        if (f[4].empty()) throw ParseError("empty unit (use 'none')", line);
        d.category = *cat;
        d.kind = *kind;
        d.data_type = *type;
        d.unit = f[4];
        d.direction = *dir;
        d.description = f[6];
        defs.push_back(std::move(d));
    }
    return Schema(std::move(version), std::move(defs));
}

} // namespace gmi

#endif // GMI_SCHEMA_HPP
