#ifndef GMI_ERRORS_HPP
#define GMI_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gmi {

// Base for every recoverable error raised while loading or scoring inputs.
// kind() is the stable name printed by the CLI ("RubricRangeError", ...).
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

// Malformed document. line is 1-based, 0 when not tied to a line.
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t line = 0)
        : Error("ParseError", line ? "line " + std::to_string(line) + ": " + message : message),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class SchemaError : public Error {
public:
    SchemaError(std::string indicator_id, const std::string& message)
        : Error("SchemaError", indicator_id + ": " + message), id_(std::move(indicator_id)) {}

    const std::string& indicator_id() const noexcept { return id_; }

private:
    std::string id_;
};

class UnknownIndicator : public Error {
public:
    explicit UnknownIndicator(std::string indicator_id)
        : Error("UnknownIndicator", "indicator '" + indicator_id + "' is not defined in the active schema"),
          id_(std::move(indicator_id)) {}

    const std::string& indicator_id() const noexcept { return id_; }

private:
    std::string id_;
};

class DuplicateIndicator : public Error {
public:
    explicit DuplicateIndicator(std::string indicator_id)
        : Error("DuplicateIndicator", "indicator '" + indicator_id + "' appears more than once"),
          id_(std::move(indicator_id)) {}

    const std::string& indicator_id() const noexcept { return id_; }

private:
    std::string id_;
};

class RubricRangeError : public Error {
public:
    RubricRangeError(std::string criterion_id, long score)
        : Error("RubricRangeError", "score " + std::to_string(score) + " for '" + criterion_id +
                                        "' is outside the 1..5 scale"),
          id_(std::move(criterion_id)), score_(score) {}

    const std::string& criterion_id() const noexcept { return id_; }
    long score() const noexcept { return score_; }

private:
    std::string id_;
    long score_;
};

class ValueError : public Error {
public:
    ValueError(std::string raw, std::string indicator_id, const std::string& why)
        : Error("ValueError", "cannot parse '" + raw + "' for " + indicator_id + ": " + why),
          raw_(std::move(raw)), id_(std::move(indicator_id)) {}

    const std::string& raw() const noexcept { return raw_; }
    const std::string& indicator_id() const noexcept { return id_; }

private:
    std::string raw_;
    std::string id_;
};

class UnitError : public Error {
public:
    UnitError(std::string from_unit, std::string to_unit)
        : Error("UnitError", "cannot convert '" + from_unit + "' to '" + to_unit + "'"),
          from_(std::move(from_unit)), to_(std::move(to_unit)) {}

    const std::string& from_unit() const noexcept { return from_; }
    const std::string& to_unit() const noexcept { return to_; }

private:
    std::string from_;
    std::string to_;
};

class EmptyCategory : public Error {
public:
    explicit EmptyCategory(const std::string& what)
        : Error("EmptyCategory", "no inputs to aggregate for " + what) {}
};

class UnknownCriterion : public Error {
public:
    explicit UnknownCriterion(std::string criterion_id)
        : Error("UnknownCriterion", "criterion '" + criterion_id + "' is not in the rubric template"),
          id_(std::move(criterion_id)) {}

    const std::string& criterion_id() const noexcept { return id_; }

private:
    std::string id_;
};

class MismatchedProgram : public Error {
public:
    MismatchedProgram(const std::string& result_program, const std::string& report_program)
        : Error("MismatchedProgram",
                "result is for '" + result_program + "' but validation is for '" + report_program + "'") {}
};

class DuplicateProgram : public Error {
public:
    explicit DuplicateProgram(const std::string& program)
        : Error("DuplicateProgram", "program '" + program + "' is supplied more than once") {}
};

// A (program, category code) pair with no score.
struct AbsentCategory {
    std::string program;
    std::string category;

    bool operator==(const AbsentCategory&) const = default;
};

class PartialDataError : public Error {
public:
    explicit PartialDataError(std::vector<AbsentCategory> absent)
        : Error("PartialDataError", describe(absent)), absent_(std::move(absent)) {}

    const std::vector<AbsentCategory>& absent() const noexcept { return absent_; }

private:
    static std::string describe(const std::vector<AbsentCategory>& absent) {
        std::string msg = "missing category scores:";
        for (const auto& a : absent) msg += " (" + a.program + ", " + a.category + ")";
        return msg;
    }

    std::vector<AbsentCategory> absent_;
};

// Caller broke a documented precondition (e.g. classifying a GMI outside [0,6]).
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace gmi

#endif // GMI_ERRORS_HPP
