#include <gtest/gtest.h>

#include "regowl/vocab.hpp"

using namespace regowl;
using namespace regowl::vocab;
using regowl::owl::CardinalityMode;
using regowl::owl::Facet;

static const std::string kData = REGOWL_DATA_DIR;

TEST(CardMap, WordsAndDigits) {
  auto m = CardMap::defaults();
  EXPECT_EQ(card_lookup(m, "two"), 2u);
  EXPECT_EQ(card_lookup(m, " Twenty "), 20u);
  EXPECT_EQ(card_lookup(m, "300"), 300u);
  EXPECT_THROW(card_lookup(m, "several"), UnmappedCardPhrase);
}

TEST(CardMap, ShippedFileMatchesDefaults) {
  EXPECT_EQ(CardMap::load(kData + "/card_map.tsv").entries(), CardMap::defaults().entries());
}

TEST(CardMap, RejectsMalformedAndDuplicateLines) {
  EXPECT_THROW(CardMap::parse("one\tx\n"), VocabError);
  EXPECT_THROW(CardMap::parse("one\t1\nOne\t1\n"), VocabError);
}

TEST(CardMap, SerializeRoundTrips) {
  auto m = CardMap::defaults();
  EXPECT_EQ(CardMap::parse(m.serialize()).entries(), m.entries());
}

TEST(ConstrMap, Lookup) {
  auto m = ConstrMap::defaults();
  EXPECT_EQ(constr_lookup(m, "not more than"), Facet::MaxInclusive);
  EXPECT_EQ(constr_lookup(m, "At  least"), Facet::MinInclusive);
  EXPECT_EQ(constr_lookup(m, "less than"), Facet::MaxExclusive);
  EXPECT_THROW(constr_lookup(m, "about"), UnmappedConstrPhrase);
  EXPECT_EQ(ConstrMap::load(kData + "/constr_map.tsv").entries(), m.entries());
  EXPECT_EQ(ConstrMap::parse(m.serialize()).entries(), m.entries());
}

TEST(ConstrMap, LongestWholeWordPrefix) {
  auto m = ConstrMap::defaults();
  auto p = m.match_prefix("not more than three");
  ASSERT_TRUE(p);
  EXPECT_EQ(p->first, Facet::MaxInclusive);
  EXPECT_EQ(p->second, "three");
  EXPECT_FALSE(m.match_prefix("at leastthree"));
}

TEST(NumberLookup, ModesAndStrictShift) {
  auto c = CardMap::defaults();
  auto k = ConstrMap::defaults();
  EXPECT_EQ(number_lookup(c, k, "two"), (NumberSpec{CardinalityMode::Exact, 2}));
  EXPECT_EQ(number_lookup(c, k, "at least two"), (NumberSpec{CardinalityMode::Min, 2}));
  EXPECT_EQ(number_lookup(c, k, "more than two"), (NumberSpec{CardinalityMode::Min, 3}));
  EXPECT_EQ(number_lookup(c, k, "fewer than two"), (NumberSpec{CardinalityMode::Max, 1}));
  EXPECT_THROW(number_lookup(c, k, "fewer than 0"), UnmappedCardPhrase);
}

TEST(TermVocabulary, FindsExactThenCaseInsensitive) {
  auto v = TermVocabulary::defaults();
  ASSERT_NE(v.find("BEAM"), nullptr);
  EXPECT_EQ(v.find("beam")->iri, "https://example.org/ifc#IfcBeam");
  EXPECT_EQ(v.find("FIREPROTECTION")->kind, TermKind::DataProperty);
  EXPECT_EQ(v.find("ROOF"), nullptr);
  EXPECT_THROW(TermVocabulary::parse("X\n"), VocabError);
  EXPECT_THROW(TermVocabulary::parse("X\turn:x\tweird\n"), VocabError);
  EXPECT_EQ(TermVocabulary::load(kData + "/ifc_terms.tsv").entries(), v.entries());
}

TEST(ReadFile, MissingFileThrows) { EXPECT_THROW(read_file("/nonexistent/regowl.tsv"), Error); }
