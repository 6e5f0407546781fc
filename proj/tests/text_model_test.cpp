#include <gtest/gtest.h>

#include "regowl/owl_model.hpp"
#include "regowl/text.hpp"

using namespace regowl;
using namespace regowl::owl;

TEST(Text, SlugCollapsesPunctuationAndCase) {
  EXPECT_EQ(text::slug("the fire resistance limit should be R15"), "the_fire_resistance_limit_should_be_r15");
  EXPECT_EQ(text::slug("  height must be at least 3.0 m "), "height_must_be_at_least_3_0_m");
  EXPECT_EQ(text::slug("--"), "entity");
}

TEST(Text, NormalizePhrase) {
  EXPECT_EQ(text::normalize_phrase("  Not   More\tthan "), "not more than");
  EXPECT_EQ(text::strip_whitespace("R 15\t"), "R15");
}

TEST(Text, NumericLexicals) {
  EXPECT_TRUE(text::is_integer_lexical("-12"));
  EXPECT_FALSE(text::is_integer_lexical("1.0"));
  EXPECT_TRUE(text::is_decimal_lexical("3.0"));
  EXPECT_TRUE(text::is_decimal_lexical("1e3"));
  EXPECT_FALSE(text::is_decimal_lexical("3"));
  EXPECT_FALSE(text::is_decimal_lexical("."));
  EXPECT_EQ(text::parse_double("2.5"), 2.5);
  EXPECT_FALSE(text::parse_double("III").has_value());
}

TEST(Literal, InferDatatype) {
  EXPECT_EQ(Literal::infer("300").datatype, Datatype::Integer);
  EXPECT_EQ(Literal::infer("3.0").datatype, Datatype::Float);
  EXPECT_EQ(Literal::infer("R15").datatype, Datatype::String);
  EXPECT_FALSE((Literal{"x", Datatype::Integer}).valid());
}

TEST(DataRange, FacetInvariants) {
  EXPECT_THROW(DataRange::restricted(Datatype::Integer, {}), ModelError);
  EXPECT_THROW(DataRange::restricted(Datatype::Integer, {{Facet::Exact, Literal::infer("1")}}), ModelError);
  EXPECT_THROW(DataRange::restricted(Datatype::Integer, {{Facet::MinInclusive, Literal::infer("1.5")}}), ModelError);
  EXPECT_THROW(DataRange::restricted(Datatype::Integer,
                                     {{Facet::MinInclusive, Literal::infer("1")}, {Facet::MinExclusive, Literal::infer("2")}}),
               ModelError);
  EXPECT_NO_THROW(DataRange::restricted(Datatype::Float, {{Facet::MinInclusive, Literal::infer("3")}}));
}

// Every class-expression constructor of the model, one per row of the
// annotation-tag table (Class, Relation/Property with Some/Only/Number,
// Comparison facets, Not, Or, Literal enumeration).
TEST(ClassExpression, ConstructorsProduceExpectedKinds) {
  auto c = ClassExpression::named("urn:C");
  EXPECT_EQ(c.kind, ExprKind::Named);
  EXPECT_EQ(ClassExpression::complement_of(c).kind, ExprKind::ComplementOf);
  EXPECT_EQ(ClassExpression::union_of({c, c}).kind, ExprKind::UnionOf);
  EXPECT_EQ(ClassExpression::intersection_of({c, c}).kind, ExprKind::IntersectionOf);
  EXPECT_EQ(ClassExpression::conjunction({c}).kind, ExprKind::Named);
  EXPECT_EQ(ClassExpression::one_of({"urn:a"}).kind, ExprKind::ObjectOneOf);
  EXPECT_EQ(ClassExpression::object_some("urn:p", c).kind, ExprKind::ObjectSome);
  EXPECT_EQ(ClassExpression::object_only("urn:p", c).kind, ExprKind::ObjectOnly);
  auto card = ClassExpression::object_cardinality("urn:p", CardinalityMode::Min, 2, c);
  EXPECT_EQ(card.kind, ExprKind::ObjectCardinality);
  EXPECT_EQ(card.cardinality, 2u);
  auto r = DataRange::one_of({Literal::infer("R15")});
  EXPECT_EQ(ClassExpression::data_some("urn:d", r).kind, ExprKind::DataSome);
  EXPECT_EQ(ClassExpression::data_only("urn:d", r).kind, ExprKind::DataOnly);
  EXPECT_EQ(ClassExpression::data_cardinality("urn:d", CardinalityMode::Max, 1, std::nullopt).kind,
            ExprKind::DataCardinality);
}

TEST(ClassExpression, CanonicalIgnoresOperandOrder) {
  auto a = ClassExpression::named("urn:A"), b = ClassExpression::named("urn:B");
  EXPECT_TRUE(structurally_equal(ClassExpression::intersection_of({a, b}), ClassExpression::intersection_of({b, a})));
  EXPECT_TRUE(structurally_equal(ClassExpression::one_of({"urn:x", "urn:y"}), ClassExpression::one_of({"urn:y", "urn:x"})));
  EXPECT_FALSE(structurally_equal(ClassExpression::object_some("urn:p", a), ClassExpression::object_only("urn:p", a)));
  EXPECT_FALSE(structurally_equal(ClassExpression::union_of({a, b}), ClassExpression::intersection_of({a, b})));
}

TEST(ClassExpression, SubexpressionsIncludeRootAndLeaves) {
  auto e = ClassExpression::intersection_of(
      {ClassExpression::named("urn:A"), ClassExpression::object_some("urn:p", ClassExpression::named("urn:B"))});
  std::vector<ClassExpression> subs;
  collect_subexpressions(e, subs);
  EXPECT_EQ(subs.size(), 4u);
}

TEST(Ontology, DeclareRejectsKindClash) {
  Ontology o;
  o.declare({EntityKind::Class, "urn:x", ""});
  o.declare({EntityKind::Class, "urn:x", "label"});
  EXPECT_EQ(o.find("urn:x")->label, "label");
  EXPECT_THROW(o.declare({EntityKind::DataProperty, "urn:x", ""}), ModelError);
}

TEST(Ontology, UndeclaredReferences) {
  Ontology o;
  o.declare({EntityKind::Class, "urn:A", ""});
  o.add(Axiom::sub_class_of(ClassExpression::named("urn:A"),
                            ClassExpression::object_some("urn:p", ClassExpression::named("urn:A"))));
  EXPECT_EQ(o.undeclared_references(), std::vector<std::string>{"urn:p"});
}

TEST(Ontology, EqualityIsOrderInsensitive) {
  Ontology a, b;
  a.iri = b.iri = "urn:o";
  auto x = Axiom::sub_class_of(ClassExpression::named("urn:A"), ClassExpression::named("urn:B"));
  auto y = Axiom::equivalent_properties("urn:p", "urn:q", PropertyKind::Object);
  a.add(x), a.add(y);
  b.add(Axiom::equivalent_properties("urn:q", "urn:p", PropertyKind::Object)), b.add(x);
  EXPECT_TRUE(ontologies_equal(a, b));
  b.iri = "urn:other";
  EXPECT_FALSE(ontologies_equal(a, b));
}

TEST(Ontology, MintIriDeduplicates) {
  std::set<std::string> taken;
  EXPECT_EQ(mint_iri("urn:o", "Beam", taken), "urn:o#beam");
  EXPECT_EQ(mint_iri("urn:o", "beam!", taken), "urn:o#beam_2");
  EXPECT_EQ(mint_iri("urn:o/", "x", taken), "urn:o/x");
}
