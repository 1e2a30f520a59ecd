#ifndef GMI_CATEGORY_HPP
#define GMI_CATEGORY_HPP

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

namespace gmi {

// The six GMI categories, in reporting order.
enum class Category { FAO, PSO, GOV, EFI, TAC, COM };

inline constexpr std::size_t kCategoryCount = 6;

inline constexpr std::array<Category, kCategoryCount> kAllCategories{
    Category::FAO, Category::PSO, Category::GOV, Category::EFI, Category::TAC, Category::COM};

inline constexpr std::size_t index_of(Category c) { return static_cast<std::size_t>(c); }

inline constexpr std::string_view code(Category c) {
    constexpr std::array<std::string_view, kCategoryCount> codes{"FAO", "PSO", "GOV", "EFI", "TAC", "COM"};
    return codes[index_of(c)];
}

inline constexpr std::string_view label(Category c) {
    constexpr std::array<std::string_view, kCategoryCount> labels{
        "Focus Areas and Objectives",      "Program Structure and Organisation",
        "Governance",                      "Effectiveness and Impact",
        "Transparency and Accountability", "Community Engagement"};
    return labels[index_of(c)];
}

inline constexpr std::optional<Category> parse_category(std::string_view s) {
    for (const auto c : kAllCategories)
        if (code(c) == s) return c;
    return std::nullopt;
}

// Values keyed by category; unset slots are categories without data.
template <typename T>
using PerCategory = std::array<std::optional<T>, kCategoryCount>;

} // namespace gmi

#endif // GMI_CATEGORY_HPP
