#ifndef GMI_RUBRIC_HPP
#define GMI_RUBRIC_HPP

#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gmi/category.hpp"
#include "gmi/errors.hpp"
#include "gmi/text.hpp"

namespace gmi {

inline constexpr int kRubricMin = 1;
inline constexpr int kRubricMax = 5;

struct Criterion {
    std::string id;
    Category category = Category::FAO;
    std::string prompt;

    bool operator==(const Criterion&) const = default;
};

// Self-assessment instrument: criteria answered on a 1 (Low) to 5 (High) scale.
class RubricTemplate {
public:
    RubricTemplate() = default;

    explicit RubricTemplate(std::vector<Criterion> criteria) : criteria_(std::move(criteria)) {
        std::set<std::string> seen;
        for (const auto& c : criteria_) {
            if (c.id.empty() || c.id.find(text::kDelimiter) != std::string::npos)
                throw ParseError("invalid criterion id '" + c.id + "'");
            if (!seen.insert(c.id).second) throw ParseError("duplicate criterion id '" + c.id + "'");
        }
    }

    const std::vector<Criterion>& criteria() const noexcept { return criteria_; }

    const Criterion* find(std::string_view id) const {
        for (const auto& c : criteria_)
            if (c.id == id) return &c;
        return nullptr;
    }

    static constexpr int scale_min() { return kRubricMin; }
    static constexpr int scale_max() { return kRubricMax; }
    static constexpr std::string_view low_anchor() { return "Low"; }
    static constexpr std::string_view high_anchor() { return "High"; }

    bool operator==(const RubricTemplate&) const = default;

private:
    std::vector<Criterion> criteria_;
};

// The six built-in criteria. Diversity of supported projects sits under FAO
// and organizational clarity under PSO; user templates may reassign them.
inline const RubricTemplate& builtin_template() {
    static const RubricTemplate tmpl({
        {"clarity-of-objectives", Category::GOV,
         "Clarity of Objectives: are the program's goals stated and communicated clearly?"},
        {"alignment-with-ecosystem-needs", Category::FAO,
         "Alignment with Ecosystem Needs: does the program respond to what the ecosystem currently needs?"},
        {"diversity-of-supported-projects", Category::FAO,
         "Diversity of Supported Projects: how varied are the funded projects across verticals?"},
        {"organizational-clarity", Category::PSO,
         "Organizational Clarity: how transparent and efficient is the program's structure?"},
        {"governance", Category::GOV,
         "Governance: how well do decision-making and the overall governance structure work?"},
        {"community-participation-and-engagement", Category::COM,
         "Community Participation and Engagement: how effectively is the community involved in the grant process?"},
    });
    return tmpl;
}

inline void check_rubric_score(const std::string& criterion_id, long score) {
    if (score < kRubricMin || score > kRubricMax) throw RubricRangeError(criterion_id, score);
}

// (score - 1) / 4
inline double rubric_to_unit(int score) {
    check_rubric_score("score", score);
    return static_cast<double>(score - kRubricMin) / (kRubricMax - kRubricMin);
}

// Mean of the unit-mapped responses for one category.
inline double rubric_category_score(const std::vector<int>& responses) {
    if (responses.empty()) throw EmptyCategory("rubric responses");
    double sum = 0.0;
    for (const int r : responses) sum += rubric_to_unit(r);
    return sum / static_cast<double>(responses.size());
}

using RubricAnswers = std::map<std::string, int>;
using GroupedResponses = std::map<Category, std::vector<double>>;

// Groups unit scores by category in template order; unanswered criteria are absent.
inline GroupedResponses collect_responses(const RubricTemplate& tmpl, const RubricAnswers& answers) {
    for (const auto& [id, score] : answers) {
        if (!tmpl.find(id)) throw UnknownCriterion(id);
        check_rubric_score(id, score);
    }
    GroupedResponses grouped;
    for (const auto& c : tmpl.criteria()) {
        const auto it = answers.find(c.id);
        if (it != answers.end()) grouped[c.category].push_back(rubric_to_unit(it->second));
    }
    return grouped;
}

// Template file: header "criterion_id|category|prompt", one criterion per line.
inline RubricTemplate load_template(std::istream& in) {
    text::RecordReader reader(in);
    reader.expect_header({"criterion_id", "category", "prompt"});
    std::vector<Criterion> criteria;
    while (auto rec = reader.next()) {
        if (rec->size() != 3) throw ParseError("expected 3 fields", reader.line());
        const auto cat = parse_category((*rec)[1]);
        if (!cat) throw ParseError("unknown category '" + (*rec)[1] + "'", reader.line());
        criteria.push_back({(*rec)[0], *cat, (*rec)[2]});
    }
    try {
        return RubricTemplate(std::move(criteria));
    } catch (const ParseError& e) {
        throw ParseError(e.what(), reader.line());
    }
}

inline std::string serialize_template(const RubricTemplate& tmpl) {
    std::ostringstream out;
    out << "criterion_id|category|prompt\n";
    for (const auto& c : tmpl.criteria()) out << c.id << '|' << code(c.category) << '|' << c.prompt << '\n';
    return out.str();
}

// Reads "criterion_id|score" rows to end of input. Blank scores are
// unanswered criteria.
inline RubricAnswers read_rubric_rows(text::RecordReader& reader) {
    RubricAnswers answers;
    while (auto rec = reader.next()) {
        const auto line = reader.line();
        if (rec->size() != 2) throw ParseError("expected 'criterion_id|score'", line);
        const auto& id = (*rec)[0];
        const auto& raw = (*rec)[1];
        if (id.empty()) throw ParseError("empty criterion id", line);
        if (answers.contains(id)) throw ParseError("criterion '" + id + "' answered twice", line);
        if (raw.empty()) continue;
        const auto score = text::to_long(raw);
        if (!score) throw ParseError("score '" + raw + "' is not an integer", line);
        check_rubric_score(id, *score);
        answers.emplace(id, static_cast<int>(*score));
    }
    return answers;
}

// Response file: header "criterion_id|score".
inline RubricAnswers load_rubric_responses(std::istream& in) {
    text::RecordReader reader(in);
    reader.expect_header({"criterion_id", "score"});
    return read_rubric_rows(reader);
}

// Blank instrument in the response file format.
inline std::string render_survey_template(const RubricTemplate& tmpl) {
    std::ostringstream out;
    out << "# GMI self-assessment survey\n";
    out << "# Answer each criterion on a " << RubricTemplate::scale_min() << " ("
        << RubricTemplate::low_anchor() << ") to " << RubricTemplate::scale_max() << " ("
        << RubricTemplate::high_anchor() << ") scale.\n";
    out << "# Leave a score blank to skip a criterion.\n";
    out << "#\n";
    for (const auto& c : tmpl.criteria()) out << "# [" << code(c.category) << "] " << c.id << ": " << c.prompt << '\n';
    out << "criterion_id|score\n";
    for (const auto& c : tmpl.criteria()) out << c.id << "|\n";
    return out.str();
}

} // namespace gmi

#endif // GMI_RUBRIC_HPP
