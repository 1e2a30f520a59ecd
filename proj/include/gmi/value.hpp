#ifndef GMI_VALUE_HPP
#define GMI_VALUE_HPP

#include <algorithm>
#include <array>
#include <optional>
#include <regex>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

#include "gmi/errors.hpp"
#include "gmi/schema.hpp"
#include "gmi/text.hpp"

namespace gmi {

enum class Qualifier { Exact, ApproxLowerBound, ApproxUpperBound, Unspecified };

inline constexpr std::string_view to_string(Qualifier q) {
    switch (q) {
    case Qualifier::Exact: return "exact";
    case Qualifier::ApproxLowerBound: return "approximate-lower-bound";
    case Qualifier::ApproxUpperBound: return "approximate-upper-bound";
    case Qualifier::Unspecified: return "unspecified";
    }
    return "";
}

inline std::optional<Qualifier> parse_qualifier(std::string_view s) {
    for (const auto q : {Qualifier::Exact, Qualifier::ApproxLowerBound, Qualifier::ApproxUpperBound,
                         Qualifier::Unspecified})
        if (to_string(q) == s) return q;
    return std::nullopt;
}

// A plain quantity. `unit` is set only when the cell carried its own unit
// ("18 weeks"); empty means the indicator's declared unit.
struct Number {
    double value = 0.0;
    std::string unit;
    bool operator==(const Number&) const = default;
};

// "A:B" with A, B > 0.
struct Ratio {
    double numerator = 1.0;
    double denominator = 1.0;
    double value() const { return numerator / denominator; }
    bool operator==(const Ratio&) const = default;
};

struct Money {
    double amount = 0.0;
    std::string currency = "USD";
    bool operator==(const Money&) const = default;
};

struct TokenAmount {
    double amount = 0.0;
    std::string symbol;
    bool operator==(const TokenAmount&) const = default;
};

struct Binary {
    int value = 0;
    bool operator==(const Binary&) const = default;
};

struct Country {
    std::string code;
    bool operator==(const Country&) const = default;
};

struct Text {
    std::string value;
    bool operator==(const Text&) const = default;
};

struct Missing {
    bool operator==(const Missing&) const = default;
};

struct TypedValue {
    std::variant<Missing, Number, Ratio, Money, TokenAmount, Binary, Country, Text> payload;
    Qualifier qualifier = Qualifier::Unspecified;

    static TypedValue missing() { return {}; }

    template <typename T>
    static TypedValue of(T v, Qualifier q = Qualifier::Exact) {
        return TypedValue{std::move(v), q};
    }

    template <typename T>
    bool is() const { return std::holds_alternative<T>(payload); }

    template <typename T>
    const T& as() const { return std::get<T>(payload); }

    bool operator==(const TypedValue&) const = default;
};

inline std::string_view variant_name(const TypedValue& v) {
    constexpr std::array<std::string_view, 8> names{"Missing",     "Number", "Ratio",   "Money",
                                                    "TokenAmount", "Binary", "Country", "Text"};
    return names[v.payload.index()];
}

// Whether a parsed variant may sit under an indicator of the given data type.
inline bool compatible(const TypedValue& v, DataType type) {
    if (v.is<Missing>()) return true;
    if (v.is<Number>() || v.is<Ratio>() || v.is<Money>() || v.is<TokenAmount>())
        return type == DataType::Numeric || type == DataType::Rational;
    if (v.is<Binary>()) return type == DataType::Binary;
    if (v.is<Country>()) return type == DataType::IsoAlpha3;
    return type == DataType::Text;
}

namespace detail {

inline std::span<const std::string_view> iso_alpha3_codes() {
    static constexpr std::string_view codes[] = {
        "ABW", "AFG", "AGO", "AIA", "ALA", "ALB", "AND", "ARE", "ARG", "ARM", "ASM", "ATA", "ATF", "ATG",
        "AUS", "AUT", "AZE", "BDI", "BEL", "BEN", "BES", "BFA", "BGD", "BGR", "BHR", "BHS", "BIH", "BLM",
        "BLR", "BLZ", "BMU", "BOL", "BRA", "BRB", "BRN", "BTN", "BVT", "BWA", "CAF", "CAN", "CCK", "CHE",
        "CHL", "CHN", "CIV", "CMR", "COD", "COG", "COK", "COL", "COM", "CPV", "CRI", "CUB", "CUW", "CXR",
        "CYM", "CYP", "CZE", "DEU", "DJI", "DMA", "DNK", "DOM", "DZA", "ECU", "EGY", "ERI", "ESH", "ESP",
        "EST", "ETH", "FIN", "FJI", "FLK", "FRA", "FRO", "FSM", "GAB", "GBR", "GEO", "GGY", "GHA", "GIB",
        "GIN", "GLP", "GMB", "GNB", "GNQ", "GRC", "GRD", "GRL", "GTM", "GUF", "GUM", "GUY", "HKG", "HMD",
        "HND", "HRV", "HTI", "HUN", "IDN", "IMN", "IND", "IOT", "IRL", "IRN", "IRQ", "ISL", "ISR", "ITA",
        "JAM", "JEY", "JOR", "JPN", "KAZ", "KEN", "KGZ", "KHM", "KIR", "KNA", "KOR", "KWT", "LAO", "LBN",
        "LBR", "LBY", "LCA", "LIE", "LKA", "LSO", "LTU", "LUX", "LVA", "MAC", "MAF", "MAR", "MCO", "MDA",
        "MDG", "MDV", "MEX", "MHL", "MKD", "MLI", "MLT", "MMR", "MNE", "MNG", "MNP", "MOZ", "MRT", "MSR",
        "MTQ", "MUS", "MWI", "MYS", "MYT", "NAM", "NCL", "NER", "NFK", "NGA", "NIC", "NIU", "NLD", "NOR",
        "NPL", "NRU", "NZL", "OMN", "PAK", "PAN", "PCN", "PER", "PHL", "PLW", "PNG", "POL", "PRI", "PRK",
        "PRT", "PRY", "PSE", "PYF", "QAT", "REU", "ROU", "RUS", "RWA", "SAU", "SDN", "SEN", "SGP", "SGS",
        "SHN", "SJM", "SLB", "SLE", "SLV", "SMR", "SOM", "SPM", "SRB", "SSD", "STP", "SUR", "SVK", "SVN",
        "SWE", "SWZ", "SXM", "SYC", "SYR", "TCA", "TCD", "TGO", "THA", "TJK", "TKL", "TKM", "TLS", "TON",
        "TTO", "TUN", "TUR", "TUV", "TWN", "TZA", "UGA", "UKR", "UMI", "URY", "USA", "UZB", "VAT", "VCT",
        "VEN", "VGB", "VIR", "VNM", "VUT", "WLF", "WSM", "YEM", "ZAF", "ZMB", "ZWE"};
    return codes;
}

// English names of jurisdictions that commonly domicile foundations.
inline std::optional<std::string_view> country_from_name(std::string_view lowered) {
    static constexpr std::array<std::pair<std::string_view, std::string_view>, 22> names{{
        {"british virgin islands", "VGB"}, {"cayman islands", "CYM"},
        {"marshall islands", "MHL"},       {"united arab emirates", "ARE"},
        {"united kingdom", "GBR"},         {"united states", "USA"},
        {"switzerland", "CHE"},            {"singapore", "SGP"},
        {"liechtenstein", "LIE"},          {"gibraltar", "GIB"},
        {"bermuda", "BMU"},                {"bahamas", "BHS"},
        {"seychelles", "SYC"},             {"panama", "PAN"},
        {"hong kong", "HKG"},              {"ireland", "IRL"},
        {"estonia", "EST"},                {"germany", "DEU"},
        {"france", "FRA"},                 {"japan", "JPN"},
        {"korea", "KOR"},                  {"canada", "CAN"},
    }};
    for (const auto& [name, iso] : names) {
        if (lowered == name) return iso;
        if (lowered.starts_with(name) && lowered.size() > name.size() &&
            (lowered[name.size()] == ' ' || lowered[name.size()] == '('))
            return iso;
    }
    return std::nullopt;
}

inline std::optional<std::string> canonical_time_unit(std::string_view unit) {
    const auto u = text::lower(text::trim(unit));
    if (u == "week" || u == "weeks") return "weeks";
    if (u == "month" || u == "months") return "months";
    if (u == "year" || u == "years") return "years";
    return std::nullopt;
}

// Builds "<digits>e<exp>" so the magnitude suffix is applied without a
// second rounding step.
inline double scaled(const std::string& digits, char suffix) {
    int exponent = 0;
    switch (static_cast<char>(std::tolower(static_cast<unsigned char>(suffix)))) {
    case 'k': exponent = 3; break;
    case 'm': exponent = 6; break;
    case 'b': exponent = 9; break;
    default: break;
    }
    std::string s = digits;
    s.erase(std::remove(s.begin(), s.end(), ','), s.end());
    if (exponent) s += "e" + std::to_string(exponent);
    return *text::to_double(s);
}

struct Quantity {
    double value;
    bool suffixed;
    std::string rest;
};

// Leading number with optional thousands separators and k/m/b suffix.
inline std::optional<Quantity> leading_quantity(const std::string& s) {
    static const std::regex pattern(R"(^(-?(?:\d{1,3}(?:,\d{3})+|\d+)(?:\.\d+)?)([kKmMbB](?![A-Za-z]))?(.*)$)");
    std::smatch m;
    if (!std::regex_match(s, m, pattern)) return std::nullopt;
    const char suffix = m[2].matched ? m[2].str()[0] : '\0';
    return Quantity{scaled(m[1].str(), suffix), m[2].matched, std::string(text::trim(m[3].str()))};
}

inline bool is_symbol(std::string_view s) {
    static const std::regex pattern(R"(^[A-Za-z][A-Za-z0-9]{1,9}$)");
    return std::regex_match(s.begin(), s.end(), pattern);
}

inline std::optional<TypedValue> parse_binary(std::string_view s) {
    auto l = text::lower(s);
    if (const auto paren = l.find('('); paren != std::string::npos && l.back() == ')')
        l = std::string(text::trim(std::string_view(l).substr(0, paren)));
    if (l == "1" || l == "yes" || l == "true") return TypedValue::of(Binary{1});
    if (l == "0" || l == "no" || l == "false") return TypedValue::of(Binary{0});
    return std::nullopt;
}

inline std::optional<TypedValue> parse_country(std::string_view s) {
    const auto u = text::upper(s);
    const auto& codes = iso_alpha3_codes();
    if (u.size() == 3 && std::binary_search(codes.begin(), codes.end(), std::string_view(u)))
        return TypedValue::of(Country{u});
    if (const auto iso = country_from_name(text::lower(s))) return TypedValue::of(Country{std::string(*iso)});
    return std::nullopt;
}

inline std::optional<TypedValue> parse_quantity(std::string_view input) {
    std::string s(text::trim(input));
    auto qualifier = Qualifier::Exact;
    if (!s.empty() && (s.front() == '<' || s.front() == '>')) {
        qualifier = s.front() == '<' ? Qualifier::ApproxUpperBound : Qualifier::ApproxLowerBound;
        s = std::string(text::trim(std::string_view(s).substr(1)));
    }

    // "$276m", "\$3.2B", "$823,077 ARB" (trailing symbol kept as a note in raw)
    if (s.starts_with("\\$")) s.erase(0, 1);
    if (s.starts_with("$")) {
        const auto q = leading_quantity(std::string(text::trim(std::string_view(s).substr(1))));
        if (!q || q->value < 0) return std::nullopt;
        if (!q->rest.empty() && !is_symbol(q->rest)) return std::nullopt;
        return TypedValue::of(Money{q->value, "USD"}, qualifier);
    }

    if (const auto colon = s.find(':'); colon != std::string::npos) {
        const auto a = text::to_double(std::string_view(s).substr(0, colon));
        const auto b = text::to_double(std::string_view(s).substr(colon + 1));
        if (!a || !b || *a <= 0 || *b <= 0) return std::nullopt;
        return TypedValue::of(Ratio{*a, *b}, qualifier);
    }

    const auto q = leading_quantity(s);
    if (!q) return std::nullopt;
    if (q->rest.empty()) return TypedValue::of(Number{q->value, {}}, qualifier);
    if (q->rest.front() == '(' && q->rest.back() == ')') return TypedValue::of(Number{q->value, {}}, qualifier);
    if (const auto unit = canonical_time_unit(q->rest)) return TypedValue::of(Number{q->value, *unit}, qualifier);
    if (is_symbol(q->rest)) {
        if (q->value < 0) return std::nullopt;
        const auto symbol = text::upper(q->rest);
        if (symbol == "USD") return TypedValue::of(Money{q->value, "USD"}, qualifier);
        return TypedValue::of(TokenAmount{q->value, symbol}, qualifier);
    }
    return std::nullopt;
}

} // namespace detail

// Parses one raw cell under the indicator's declared data type.
// Throws ValueError when the cell does not fit that type.
inline TypedValue parse_value(std::string_view raw, const IndicatorDef& def) {
    const auto s = text::trim(raw);
    const auto l = text::lower(s);
    if (l.empty() || l == "n.a." || l == "tbc") return TypedValue::missing();
    if (l == "link") {
        if (def.data_type == DataType::Text) return TypedValue::of(Text{std::string(s)});
        return TypedValue::missing();
    }

    std::optional<TypedValue> parsed;
    switch (def.data_type) {
    case DataType::Text: return TypedValue::of(Text{std::string(s)});
    case DataType::IsoAlpha3: parsed = detail::parse_country(s); break;
    case DataType::Binary: parsed = detail::parse_binary(s); break;
    case DataType::Numeric:
    case DataType::Rational: parsed = detail::parse_quantity(s); break;
    }
    if (!parsed) throw ValueError(std::string(raw), def.id, "not a valid " + std::string(to_string(def.data_type)));
    return *parsed;
}

// Inverse of parse_value for every non-Missing variant.
inline std::string format_value(const TypedValue& v) {
    std::string prefix;
    if (v.qualifier == Qualifier::ApproxUpperBound) prefix = "<";
    if (v.qualifier == Qualifier::ApproxLowerBound) prefix = ">";
    return std::visit(
        [&](const auto& p) -> std::string {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, Missing>) return "n.a.";
            else if constexpr (std::is_same_v<T, Number>)
                return prefix + text::shortest(p.value) + (p.unit.empty() ? "" : " " + p.unit);
            else if constexpr (std::is_same_v<T, Ratio>)
                return prefix + text::shortest(p.numerator) + ":" + text::shortest(p.denominator);
            else if constexpr (std::is_same_v<T, Money>) return prefix + "$" + text::shortest(p.amount);
            else if constexpr (std::is_same_v<T, TokenAmount>)
                return prefix + text::shortest(p.amount) + " " + p.symbol;
            else if constexpr (std::is_same_v<T, Binary>) return p.value ? "1" : "0";
            else if constexpr (std::is_same_v<T, Country>) return p.code;
            else return p.value;
        },
        v.payload);
}

inline constexpr double kWeeksPerMonth = 4.345;
inline constexpr double kWeeksPerYear = 52.14;

// Expresses `value` (read in `from_unit`) in the indicator's declared unit.
// Only time units convert; anything else must already match.
inline TypedValue coerce_unit(const TypedValue& value, std::string_view from_unit, const IndicatorDef& def) {
    if (value.is<Missing>()) return value;
    const std::string from = text::trim(from_unit).empty() ? def.unit : std::string(text::trim(from_unit));
    const auto from_time = detail::canonical_time_unit(from);
    const auto to_time = detail::canonical_time_unit(def.unit);

    const bool same = from_time && to_time ? *from_time == *to_time : text::lower(from) == text::lower(def.unit);
    if (same) {
        if (!value.is<Number>()) return value;
        TypedValue out = value;
        std::get<Number>(out.payload).unit.clear();
        return out;
    }
    if (!from_time || !to_time || !value.is<Number>()) throw UnitError(from, def.unit);

    const auto weeks_per = [](const std::string& unit) {
        if (unit == "months") return kWeeksPerMonth;
        if (unit == "years") return kWeeksPerYear;
        return 1.0;
    };
    const double v = value.as<Number>().value;
    const double converted = *from_time == "weeks" ? v / weeks_per(*to_time)
                           : *to_time == "weeks"   ? v * weeks_per(*from_time)
                                                   : v * weeks_per(*from_time) / weeks_per(*to_time);
    return TypedValue::of(Number{converted, {}}, value.qualifier);
}

} // namespace gmi

#endif // GMI_VALUE_HPP
