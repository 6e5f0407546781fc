#include <gtest/gtest.h>

#include "golden.hpp"
#include "regowl/tsv_ingest.hpp"
#include "regowl/vocab.hpp"

using namespace regowl;
using namespace regowl::tsv;

namespace {

AnnotatedDocument load(const std::string& rel) { return parse_tsv(vocab::read_file(golden::fixture(rel))); }

std::string header() {
  return "#FORMAT=WebAnno TSV 3.3\n"
         "#T_SP=webanno.custom.Terms|Term\n"
         "#T_SP=webanno.custom.SemanticTypes|SemanticType\n"
         "#T_SP=webanno.custom.SemanticRoles|SemanticRole\n"
         "#T_RL=webanno.custom.TermRelation|Arrow|BT_webanno.custom.Terms\n"
         "#T_RL=webanno.custom.SemanticTypeRelation|Arrow|BT_webanno.custom.SemanticTypes\n"
         "#T_RL=webanno.custom.SemanticRoleRelation|Arrow|BT_webanno.custom.SemanticRoles\n\n\n";
}

std::string code_of(const std::string& input) {
  try {
    parse_tsv(input);
  } catch (const TsvError& e) {
    return e.code();
  }
  return "";
}

}  // namespace

TEST(TsvIngest, Example1Counts) {
  auto doc = load("example1.tsv");
  EXPECT_EQ(doc.tokens.size(), 25u);
  EXPECT_EQ(doc.count(Layer::Term), 4u);     // FIRESAFETY BUILDING FIREPROTECTION BEAM
  EXPECT_EQ(doc.count(Layer::SemType), 8u);  // 2 Property, 2 Class, 2 Literal, Relation, Only
  EXPECT_EQ(doc.count(Layer::SemRole), 4u);  // two Subject and two Requirement pieces
  EXPECT_EQ(doc.count(Arrow::Domain), 3u);
  EXPECT_EQ(doc.count(Arrow::Range), 3u);
  EXPECT_EQ(doc.count(Arrow::Of), 1u);
  EXPECT_EQ(doc.count(Arrow::To), 1u);
  EXPECT_EQ(doc.count(Arrow::Concatenation), 2u);
}

TEST(TsvIngest, TokenOffsetsAndText) {
  auto doc = load("example1.tsv");
  const Token* t = doc.find_token({1, 25});
  ASSERT_NE(t, nullptr);
  EXPECT_EQ(t->text, "R15");
  EXPECT_EQ(t->char_start, 116u);
  EXPECT_EQ(t->char_end, 119u);
  EXPECT_EQ(doc.source_text.substr(t->char_start, t->char_end - t->char_start), "R15");
}

TEST(TsvIngest, MultiTokenSpanKeepsAllTokens) {
  auto doc = load("example1.tsv");
  for (const auto& s : doc.spans)
    if (s.layer == Layer::Term && s.tag == "FIREPROTECTION") {
      EXPECT_EQ(surface(doc, s.tokens), "fire resistance limit");
      return;
    }
  FAIL() << "FIREPROTECTION span missing";
}

TEST(TsvIngest, RelationEndpointsResolve) {
  auto doc = load("example1.tsv");
  for (const auto& r : doc.relations) {
    ASSERT_NE(doc.find_span(r.source), nullptr);
    ASSERT_NE(doc.find_span(r.target), nullptr);
  }
  // The Of arrow runs from the quantifier "should be" to the requirement property.
  for (const auto& r : doc.relations)
    if (r.arrow == Arrow::Of) {
      EXPECT_EQ(doc.find_span(r.source)->tag, "Only");
      EXPECT_EQ(surface(doc, doc.find_span(r.target)->tokens), "fire resistance limit");
    }
}

TEST(TsvIngest, Example2Parses) {
  auto doc = load("example2.tsv");
  EXPECT_GT(doc.tokens.size(), 0u);
  EXPECT_EQ(doc.count(Arrow::To), 1u);
}

TEST(TsvIngest, BadFixturesReportTheirCode) {
  EXPECT_THROW(load("bad/missing_header.tsv"), TsvError);
  const std::vector<std::pair<std::string, std::string>> cases = {{"bad/missing_header.tsv", "MissingHeader"},
                                                                  {"bad/unknown_layer.tsv", "UnknownLayer"},
                                                                  {"bad/index_gap.tsv", "IndexGap"},
                                                                  {"bad/bad_cell.tsv", "BadCell"},
                                                                  {"bad/dangling_reference.tsv", "DanglingReference"}};
  for (const auto& [file, code] : cases) EXPECT_EQ(code_of(vocab::read_file(golden::fixture(file))), code) << file;
}

TEST(TsvIngest, InlineErrors) {
  EXPECT_EQ(code_of(""), "MissingHeader");
  EXPECT_EQ(code_of("#FORMAT=WebAnno TSV 3.2\n"), "MissingHeader");
  EXPECT_EQ(code_of("#FORMAT=WebAnno TSV 3.3\n#T_SP=webanno.custom.Colours|Colour\n"), "UnknownLayer");
  EXPECT_EQ(code_of("#FORMAT=WebAnno TSV 3.3\n#T_CH=webanno.custom.Chain|x\n"), "UnknownLayer");
  std::string h = header() + "#Text=a b\n";
  EXPECT_EQ(code_of(h + "1-1\t0-1\ta\t_\t_\t_\t_\t_\t_\t_\t_\t_\t\n1-3\t2-3\tb\t_\t_\t_\t_\t_\t_\t_\t_\t_\t\n"), "IndexGap");
  EXPECT_EQ(code_of(h + "1-1\t0-1\ta\t_\t_\t_\n"), "BadCell");
  EXPECT_EQ(code_of(h + "1-1\t0-1\ta\t_\tClass[x]\t_\t_\t_\t_\t_\t_\t\n"), "BadCell");
  EXPECT_EQ(code_of(h + "1-1\t0-1\ta\t_\tClass\t_\t_\t_\tDomain\t1-9\t_\t_\t\n"), "DanglingReference");
}

TEST(TsvIngest, StackedSpansNeedIds) {
  std::string doc = header() + "#Text=a\n1-1\t0-1\ta\t_\tClass[1]|Literal[2]\t_\t_\t_\t_\t_\t_\t_\t\n";
  auto parsed = parse_tsv(doc);
  EXPECT_EQ(parsed.count(Layer::SemType), 2u);
}

TEST(TsvIngest, ArrowNames) {
  EXPECT_EQ(arrow_from_string("Self-Distribution"), Arrow::SelfDistribution);
  EXPECT_FALSE(arrow_from_string("Sideways"));
  EXPECT_TRUE(arrow_allowed(Layer::SemRole, Arrow::To));
  EXPECT_FALSE(arrow_allowed(Layer::SemRole, Arrow::Of));
}
