#ifndef GMI_TEXT_HPP
#define GMI_TEXT_HPP

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "gmi/errors.hpp"

// Small string helpers shared by the file readers and renderers.
namespace gmi::text {

// Field separator for every line-oriented file the engine reads or writes.
inline constexpr char kDelimiter = '|';

inline std::string_view trim(std::string_view s) {
    const auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

inline std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

inline std::string upper(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return out;
}

inline std::vector<std::string> split(std::string_view line, char delim = kDelimiter) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(delim, start);
        if (pos == std::string_view::npos) {
            fields.emplace_back(trim(line.substr(start)));
            return fields;
        }
        fields.emplace_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
}

inline std::optional<double> to_double(std::string_view s) {
    s = trim(s);
    if (s.empty()) return std::nullopt;
    if (s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

inline std::optional<long> to_long(std::string_view s) {
    s = trim(s);
    if (s.empty()) return std::nullopt;
    if (s.front() == '+') s.remove_prefix(1);
    long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

// Shortest fixed-notation text that reads back to exactly v.
inline std::string shortest(double v) {
    std::array<char, 400> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::fixed);
    return std::string(buf.data(), ptr);
}

// Fixed 4-decimal text; to_chars rounds the exact binary value, ties to even.
inline std::string fixed4(double v) {
    if (v == 0.0) v = 0.0; // drop the sign of -0
    std::array<char, 400> buf{};
    const auto [ptr, ec] =
        std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::fixed, 4);
    std::string out(buf.data(), ptr);
    if (out == "-0.0000") out = "0.0000";
    return out;
}

inline double round4(double v) { return *to_double(fixed4(v)); }

// Reads a delimited document line by line, skipping blanks and '#' comments.
class RecordReader {
public:
    explicit RecordReader(std::istream& in) : in_(in) {}

    // Next non-comment record, or nullopt at end of input.
    std::optional<std::vector<std::string>> next() {
        std::string line;
        while (std::getline(in_, line)) {
            ++line_;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line_ == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
            const auto t = trim(line);
            if (t.empty() || t.front() == '#') continue;
            return split(line);
        }
        return std::nullopt;
    }

    std::size_t line() const noexcept { return line_; }

    // Consumes the header record and checks it names exactly `expected`.
    void expect_header(std::initializer_list<std::string_view> expected) {
        auto rec = next();
        if (!rec) throw ParseError("missing header row", line_);
        std::vector<std::string> want(expected.begin(), expected.end());
        std::vector<std::string> got;
        for (const auto& f : *rec) got.push_back(lower(f));
        if (got != want) {
            std::string w;
            for (const auto& f : want) w += (w.empty() ? "" : "|") + f;
            throw ParseError("expected header '" + w + "'", line_);
        }
    }

private:
    std::istream& in_;
    std::size_t line_ = 0;
};

} // namespace gmi::text

#endif // GMI_TEXT_HPP
