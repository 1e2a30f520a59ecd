#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "gmi/gmi.hpp"

using namespace gmi;

namespace {

Schema from_text(const std::string& doc) {
    std::istringstream in(doc);
    return load_schema(in);
}

std::string minimal_schema(const std::string& extra_row) {
    std::string doc = "schema|test\nid|category|kind|data_type|unit|direction|description\n";
    for (const auto c : kAllCategories) {
        const std::string cc(code(c));
        doc += cc + "-QN|" + cc + "|synthetic|numeric|none|non-scorable|roll-up\n";
        doc += cc + "-QN-1|" + cc + "|quantitative|numeric|none|higher-better|first\n";
    }
    return doc + extra_row;
}

} // namespace

TEST(Schema, BuiltinSpotChecks) {
    const auto& s = builtin_schema();
    const auto& timeframe = s.at("FAO-QN-6");
    EXPECT_EQ(timeframe.unit, "weeks");
    EXPECT_EQ(timeframe.data_type, DataType::Numeric);
    const auto& share = s.at("TAC-QN-4");
    EXPECT_EQ(share.data_type, DataType::Rational);
    EXPECT_EQ(share.unit, "conversion rate");
}

TEST(Schema, BuiltinShape) {
    const auto& s = builtin_schema();
    std::set<Category> categories;
    int synthetic = 0;
    int rubric = 0;
    for (const auto& d : s.indicators()) {
        categories.insert(d.category);
        synthetic += d.kind == IndicatorKind::Synthetic;
        rubric += d.kind == IndicatorKind::Rubric;
    }
    EXPECT_EQ(categories.size(), 6u);
    EXPECT_EQ(synthetic, 6);
    EXPECT_EQ(rubric, 6);
    for (const auto c : kAllCategories) {
        EXPECT_EQ(s.at(rollup_id(c)).kind, IndicatorKind::Synthetic);
        EXPECT_EQ(s.at(std::string(code(c)) + "-QL").unit, "scoring");
    }
}

TEST(Schema, UnknownIndicator) {
    EXPECT_THROW(builtin_schema().at("FAO-QN-99"), UnknownIndicator);
    EXPECT_EQ(builtin_schema().find("nope"), nullptr);
}

TEST(Schema, RoundTrip) {
    const auto text = serialize_schema(builtin_schema());
    EXPECT_EQ(from_text(text), builtin_schema());
    EXPECT_EQ(serialize_schema(from_text(text)), text);
}

TEST(Schema, MinimalIsValid) { EXPECT_NO_THROW(from_text(minimal_schema(""))); }

TEST(Schema, DuplicateId) {
    try {
        from_text(minimal_schema("GOV-QN-1|GOV|quantitative|numeric|none|higher-better|again\n"));
        FAIL() << "expected SchemaError";
    } catch (const SchemaError& e) {
        EXPECT_EQ(e.indicator_id(), "GOV-QN-1");
    }
}

TEST(Schema, TextMustBeNonScorable) {
    try {
        from_text(minimal_schema("EFI-QN-3|EFI|quantitative|text|none|higher-better|link field\n"));
        FAIL() << "expected SchemaError";
    } catch (const SchemaError& e) {
        EXPECT_EQ(e.indicator_id(), "EFI-QN-3");
    }
}

TEST(Schema, MissingRollup) {
    std::string doc = minimal_schema("");
    const auto pos = doc.find("TAC-QN|");
    doc.erase(pos, doc.find('\n', pos) - pos + 1);
    EXPECT_THROW(from_text(doc), SchemaError);
}

TEST(Schema, OtherInvariants) {
    EXPECT_THROW(from_text(minimal_schema("FAO-QL|FAO|rubric|numeric|USD|higher-better|bad unit\n")), SchemaError);
    EXPECT_THROW(from_text(minimal_schema("FAO-QN-2|PSO|quantitative|numeric|none|higher-better|wrong prefix\n")),
                 SchemaError);
    EXPECT_THROW(from_text(minimal_schema("fao-qn-2|FAO|quantitative|numeric|none|higher-better|case\n")),
                 SchemaError);
}

TEST(Schema, NoScorableIndicator) {
    std::string doc = minimal_schema("");
    const auto pos = doc.find("COM-QN-1|");
    doc.replace(doc.find("higher-better", pos), 13, "non-scorable");
    EXPECT_THROW(from_text(doc), SchemaError);
}

TEST(Schema, MalformedDocuments) {
    EXPECT_THROW(from_text("id|category|kind|data_type|unit|direction|description\n"), ParseError);
    EXPECT_THROW(from_text(minimal_schema("FAO-QN-2|FAO|quantitative|numeric|none\n")), ParseError);
    EXPECT_THROW(from_text(minimal_schema("FAO-QN-2|FAO|quantitative|decimal|none|higher-better|x\n")), ParseError);
}
