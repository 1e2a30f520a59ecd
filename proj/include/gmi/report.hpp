#ifndef GMI_REPORT_HPP
#define GMI_REPORT_HPP

#include <algorithm>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "gmi/category.hpp"
#include "gmi/errors.hpp"
#include "gmi/ingest.hpp"
#include "gmi/schema.hpp"
#include "gmi/scoring.hpp"
#include "gmi/text.hpp"

namespace gmi {

enum class OutputFormat { Table, Delimited, Structured };

inline constexpr std::string_view to_string(OutputFormat f) {
    switch (f) {
    case OutputFormat::Table: return "table";
    case OutputFormat::Delimited: return "delimited";
    case OutputFormat::Structured: return "structured";
    }
    return "";
}

inline std::optional<OutputFormat> parse_output_format(std::string_view s) {
    for (const auto f : {OutputFormat::Table, OutputFormat::Delimited, OutputFormat::Structured})
        if (to_string(f) == s) return f;
    return std::nullopt;
}

inline constexpr std::string_view kCompositeDescription = "Composite (sum of normalized category scores)";

// Programs by descending GMI; equal composites (at reporting precision) are
// ties, listed by name.
inline std::vector<std::pair<std::size_t, std::string>> rank_programs(std::span<const GmiResult> results) {
    std::vector<std::size_t> order(results.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    const auto key = [&](std::size_t i) { return text::round4(results[i].gmi); };
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (key(a) != key(b)) return key(a) > key(b);
        return results[a].program < results[b].program;
    });
    std::vector<std::pair<std::size_t, std::string>> ranked;
    std::size_t place = 0;
    for (std::size_t k = 0; k < order.size(); ++k) {
        if (k == 0 || key(order[k]) != key(order[k - 1])) place = k + 1;
        ranked.emplace_back(place, results[order[k]].program);
    }
    return ranked;
}

namespace detail {

inline std::string cell(const std::optional<double>& v) { return v ? text::fixed4(*v) : "n.a."; }

struct TableRow {
    std::string id;
    std::string description;
    std::vector<std::string> cells;
};

inline std::vector<TableRow> comparison_rows(std::span<const GmiResult> results) {
    std::vector<TableRow> rows;
    TableRow gmi{"GMI", std::string(kCompositeDescription), {}};
    for (const auto& r : results) gmi.cells.push_back(text::fixed4(r.gmi));
    rows.push_back(std::move(gmi));
    for (const auto c : kAllCategories) {
        TableRow row{rollup_id(c), std::string(label(c)), {}};
        for (const auto& r : results) row.cells.push_back(cell(r.normalized_category_scores[index_of(c)]));
        rows.push_back(std::move(row));
    }
    TableRow stage{"Stage", "Maturity stage", {}};
    for (const auto& r : results) stage.cells.emplace_back(to_string(r.stage));
    rows.push_back(std::move(stage));
    return rows;
}

inline std::string pad_right(const std::string& s, std::size_t w) { return s + std::string(w - std::min(w, s.size()), ' '); }
inline std::string pad_left(const std::string& s, std::size_t w) { return std::string(w - std::min(w, s.size()), ' ') + s; }

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (const char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

inline std::vector<std::string> footnotes(std::span<const GmiResult> results, std::span<const std::string> notes) {
    std::vector<std::string> out;
    for (const auto& r : results) {
        for (const auto& rec : r.audit) {
            if (rec.exclusion == ExclusionReason::TokenUnconverted)
                out.push_back(r.program + " " + rec.indicator + ": \"" + rec.raw +
                              "\" is a token amount with no USD rate supplied; excluded from scoring.");
            else if (rec.score && (rec.qualifier == Qualifier::ApproxUpperBound ||
                                   rec.qualifier == Qualifier::ApproxLowerBound))
                out.push_back(r.program + " " + rec.indicator + ": \"" + rec.raw + "\" is " +
                              std::string(to_string(rec.qualifier)) + "; scored at face value.");
        }
    }
    out.insert(out.end(), notes.begin(), notes.end());
    return out;
}

inline std::optional<double> rounded(const std::optional<double>& v) {
    return v ? std::optional<double>(text::round4(*v)) : std::nullopt;
}

inline nlohmann::ordered_json number_or_null(const std::optional<double>& v) {
    return v ? nlohmann::ordered_json(text::round4(*v)) : nlohmann::ordered_json(nullptr);
}

inline std::optional<double> optional_number(const nlohmann::json& j) {
    if (j.is_null()) return std::nullopt;
    return j.get<double>();
}

} // namespace detail

// Copy of r with every real rounded to reporting precision; the structured
// format round-trips to exactly this.
inline GmiResult rounded_result(const GmiResult& r) {
    GmiResult out = r;
    out.gmi = text::round4(r.gmi);
    for (auto& v : out.category_scores) v = detail::rounded(v);
    for (auto& v : out.normalized_category_scores) v = detail::rounded(v);
    for (auto& rec : out.audit) {
        rec.min = detail::rounded(rec.min);
        rec.max = detail::rounded(rec.max);
        rec.score = detail::rounded(rec.score);
    }
    return out;
}

inline std::string render_comparison(std::span<const GmiResult> results, OutputFormat format,
                                     std::span<const std::string> notes = {}) {
    std::ostringstream out;
    const auto rows = detail::comparison_rows(results);

    if (format == OutputFormat::Delimited) {
        out << "id,description";
        for (const auto& r : results) out << ',' << detail::csv_field(r.program);
        out << '\n';
        for (const auto& row : rows) {
            out << detail::csv_field(row.id) << ',' << detail::csv_field(row.description);
            for (const auto& c : row.cells) out << ',' << detail::csv_field(c);
            out << '\n';
        }
        return out.str();
    }

    if (format == OutputFormat::Structured) {
        nlohmann::ordered_json doc;
        doc["document"] = "gmi-comparison";
        doc["version"] = 1;
        doc["results"] = nlohmann::ordered_json::array();
        for (const auto& r : results) {
            nlohmann::ordered_json jr;
            jr["program"] = r.program;
            jr["gmi"] = text::round4(r.gmi);
            jr["stage"] = to_string(r.stage);
            jr["categories"] = nlohmann::ordered_json::array();
            for (const auto c : kAllCategories) {
                nlohmann::ordered_json jc;
                jc["category"] = code(c);
                jc["score"] = detail::number_or_null(r.category_scores[index_of(c)]);
                jc["normalized"] = detail::number_or_null(r.normalized_category_scores[index_of(c)]);
                jr["categories"].push_back(std::move(jc));
            }
            jr["audit"] = nlohmann::ordered_json::array();
            for (const auto& rec : r.audit) {
                nlohmann::ordered_json ja;
                ja["indicator"] = rec.indicator;
                ja["raw"] = rec.raw;
                ja["qualifier"] = to_string(rec.qualifier);
                ja["min"] = detail::number_or_null(rec.min);
                ja["max"] = detail::number_or_null(rec.max);
                ja["score"] = detail::number_or_null(rec.score);
                ja["exclusion"] = rec.exclusion ? nlohmann::ordered_json(to_string(*rec.exclusion))
                                                : nlohmann::ordered_json(nullptr);
                ja["degenerate"] = rec.degenerate;
                jr["audit"].push_back(std::move(ja));
            }
            doc["results"].push_back(std::move(jr));
        }
        doc["notes"] = nlohmann::ordered_json::array();
        for (const auto& n : notes) doc["notes"].push_back(n);
        return doc.dump(2) + "\n";
    }

    std::size_t id_w = 2;
    std::size_t desc_w = 11;
    std::vector<std::size_t> col_w;
    for (const auto& r : results) col_w.push_back(r.program.size());
    for (const auto& row : rows) {
        id_w = std::max(id_w, row.id.size());
        desc_w = std::max(desc_w, row.description.size());
        for (std::size_t i = 0; i < row.cells.size(); ++i) col_w[i] = std::max(col_w[i], row.cells[i].size());
    }
    const auto line = [&](const std::string& id, const std::string& desc, const std::vector<std::string>& cells) {
        std::string s = detail::pad_right(id, id_w) + "  " + detail::pad_right(desc, desc_w);
        for (std::size_t i = 0; i < cells.size(); ++i) s += "  " + detail::pad_left(cells[i], col_w[i]);
        while (!s.empty() && s.back() == ' ') s.pop_back();
        out << s << '\n';
    };

    std::vector<std::string> names;
    std::vector<std::string> rules;
    for (std::size_t i = 0; i < results.size(); ++i) {
        names.push_back(results[i].program);
        rules.emplace_back(col_w[i], '-');
    }
    line("ID", "Description", names);
    line(std::string(id_w, '-'), std::string(desc_w, '-'), rules);
    for (const auto& row : rows) line(row.id, row.description, row.cells);

    out << "\nRanking\n";
    for (const auto& [place, name] : rank_programs(results)) {
        const auto it = std::find_if(results.begin(), results.end(), [&](const auto& r) { return r.program == name; });
        out << "  " << place << ". " << name << " (" << text::fixed4(it->gmi) << ")\n";
    }

    std::vector<std::string> exclusions;
    for (const auto& r : results)
        for (const auto& rec : r.audit)
            if (rec.exclusion)
                exclusions.push_back(r.program + "  " + rec.indicator + "  " + std::string(to_string(*rec.exclusion)) +
                                     (rec.raw.empty() ? "" : "  raw \"" + rec.raw + "\""));
    if (!exclusions.empty()) {
        out << "\nExclusions\n";
        for (const auto& e : exclusions) out << "  - " << e << '\n';
    }

    const auto notes_out = detail::footnotes(results, notes);
    if (!notes_out.empty()) {
        out << "\nNotes\n";
        for (std::size_t i = 0; i < notes_out.size(); ++i) out << "  [" << i + 1 << "] " << notes_out[i] << '\n';
    }
    return out.str();
}

struct StructuredDocument {
    std::vector<GmiResult> results;
    std::vector<std::string> notes;
};

inline StructuredDocument parse_structured(std::string_view doc_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(doc_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(e.what());
    }
    try {
        if (doc.at("document") != "gmi-comparison") throw ParseError("not a gmi-comparison document");
        StructuredDocument out;
        for (const auto& jr : doc.at("results")) {
            GmiResult r;
            r.program = jr.at("program").get<std::string>();
            r.gmi = jr.at("gmi").get<double>();
            const auto stage = parse_stage(jr.at("stage").get<std::string>());
            if (!stage) throw ParseError("unknown stage");
            r.stage = *stage;
            for (const auto& jc : jr.at("categories")) {
                const auto c = parse_category(jc.at("category").get<std::string>());
                if (!c) throw ParseError("unknown category");
                r.category_scores[index_of(*c)] = detail::optional_number(jc.at("score"));
                r.normalized_category_scores[index_of(*c)] = detail::optional_number(jc.at("normalized"));
            }
            for (const auto& ja : jr.at("audit")) {
                NormalizationRecord rec;
                rec.indicator = ja.at("indicator").get<std::string>();
                rec.raw = ja.at("raw").get<std::string>();
                const auto q = parse_qualifier(ja.at("qualifier").get<std::string>());
                if (!q) throw ParseError("unknown qualifier");
                rec.qualifier = *q;
                rec.min = detail::optional_number(ja.at("min"));
                rec.max = detail::optional_number(ja.at("max"));
                rec.score = detail::optional_number(ja.at("score"));
                if (!ja.at("exclusion").is_null()) {
                    rec.exclusion = parse_exclusion_reason(ja.at("exclusion").get<std::string>());
                    if (!rec.exclusion) throw ParseError("unknown exclusion reason");
                }
                rec.degenerate = ja.at("degenerate").get<bool>();
                r.audit.push_back(std::move(rec));
            }
            out.results.push_back(std::move(r));
        }
        for (const auto& n : doc.at("notes")) out.notes.push_back(n.get<std::string>());
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed structured report: ") + e.what());
    }
}

inline std::string render_validation(const ValidationReport& report, const Schema& schema) {
    std::ostringstream out;
    out << "Validation: " << report.program << '\n';
    for (const auto c : kAllCategories) {
        const auto& v = report.at(c);
        out << "  " << code(c) << "  " << (v.scorable ? "scorable  " : "UNSCORABLE") << "  present="
            << v.scorable_present.size() << " missing=" << v.missing << " non-scorable=" << v.non_scorable.size()
            << " token-unconverted=" << v.token_unconverted.size() << " rubric=" << v.rubric_responses << '\n';
    }
    if (!report.exclusions.empty()) {
        out << "  Exclusions\n";
        for (const auto& e : report.exclusions) {
            const auto* def = schema.find(e.indicator);
            out << "    - " << e.indicator << " (" << (def ? def->description : std::string("?")) << ")  "
                << to_string(e.reason) << "  raw \"" << e.raw << "\"\n";
        }
    }
    const auto missing = report.unscorable();
    if (missing.empty()) {
        out << "  Result: all categories scorable\n";
    } else {
        out << "  Result: unscorable categories:";
        for (const auto c : missing) out << ' ' << code(c);
        out << '\n';
    }
    return out.str();
}

inline std::string render_program_report(const GmiResult& result, const ValidationReport& validation) {
    if (result.program != validation.program) throw MismatchedProgram(result.program, validation.program);
    std::ostringstream out;
    out << "Program: " << result.program << '\n';
    out << "Composite GMI: " << text::fixed4(result.gmi) << '\n';
    out << "Stage: " << to_string(result.stage) << '\n';

    out << "\nCategory scores (normalized)\n";
    for (const auto c : kAllCategories) {
        out << "  " << code(c) << "  " << detail::pad_right(std::string(label(c)), 34) << "  "
            << detail::cell(result.normalized_category_scores[index_of(c)]) << '\n';
    }

    out << "\nExclusions\n";
    if (validation.exclusions.empty()) out << "  (none)\n";
    for (const auto& e : validation.exclusions)
        out << "  - " << e.indicator << "  " << to_string(e.reason) << "  raw \"" << e.raw << "\"\n";

    std::vector<std::string> qualified;
    for (const auto& rec : result.audit)
        if (rec.qualifier == Qualifier::ApproxUpperBound || rec.qualifier == Qualifier::ApproxLowerBound)
            qualified.push_back(rec.indicator + "  \"" + rec.raw + "\"  " + std::string(to_string(rec.qualifier)) +
                                (rec.score ? ", scored at face value" : ", excluded"));
    out << "\nQualifier notes\n";
    if (qualified.empty()) out << "  (none)\n";
    for (const auto& q : qualified) out << "  - " << q << '\n';
    return out.str();
}

} // namespace gmi

#endif // GMI_REPORT_HPP
