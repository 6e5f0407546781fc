#include <gtest/gtest.h>

#include <set>

#include "golden.hpp"
#include "regowl/codegen.hpp"

using namespace regowl;
using namespace regowl::codegen;
using owl::ExprKind;

namespace {

tsv::AnnotatedDocument doc(const std::string& rel) { return tsv::parse_tsv(vocab::read_file(golden::fixture(rel))); }

Config with_subject(Quantifier q) {
  Config c;
  c.subject_default = q;
  return c;
}

std::vector<tsv::TokenRef> toks(std::initializer_list<int> ts) {
  std::vector<tsv::TokenRef> out;
  for (int t : ts) out.push_back({1, t});
  return out;
}

// Layer tables written by hand: unit id i covers token i unless told otherwise.
struct Tables {
  pre::LayerTables t;
  pre::TypeRow& type(int id, std::string tag, std::string surface, std::vector<tsv::TokenRef> tk = {}) {
    if (tk.empty()) tk = toks({id});
    t.types.push_back({id, std::move(surface), std::move(tag), std::nullopt, std::nullopt, {}, tk});
    return t.types.back();
  }
  void roles(std::vector<tsv::TokenRef> subject, std::vector<tsv::TokenRef> requirement) {
    t.roles.push_back({100, "subject", "Subject", 101, std::move(subject)});
    t.roles.push_back({101, "requirement", "Requirement", std::nullopt, std::move(requirement)});
  }
};

std::set<ExprKind> kinds(const owl::Ontology& o) {
  std::set<ExprKind> out;
  for (const auto& a : o.axioms)
    for (const auto& c : a.classes) {
      std::vector<owl::ClassExpression> subs;
      owl::collect_subexpressions(c, subs);
      for (const auto& s : subs) out.insert(s.kind);
    }
  return out;
}

const owl::ClassExpression* role_definition(const owl::Ontology& o, const std::string& role_iri) {
  for (const auto& a : o.axioms)
    if (a.kind == owl::AxiomKind::EquivalentClasses && a.classes[0].is_named() && a.classes[0].iri == role_iri)
      return &a.classes[1];
  return nullptr;
}

}  // namespace

TEST(Codegen, Example1MatchesGoldenForBothDefaults) {
  for (auto [q, g] : {std::pair(Quantifier::Some, golden::Q::Some), std::pair(Quantifier::Only, golden::Q::Only)}) {
    auto c = compile(doc("example1.tsv"), with_subject(q));
    EXPECT_TRUE(owl::ontologies_equal(c.onto, golden::example1(g)));
  }
}

TEST(Codegen, Example2MatchesGolden) {
  auto c = compile(doc("example2.tsv"));
  EXPECT_TRUE(owl::ontologies_equal(c.onto, golden::example2()));
}

TEST(Codegen, DefaultToggleChangesOnlyQuantifiers) {
  auto some = compile(doc("example1.tsv"), with_subject(Quantifier::Some)).onto;
  auto only = compile(doc("example1.tsv"), with_subject(Quantifier::Only)).onto;
  ASSERT_EQ(some.axioms.size(), only.axioms.size());
  EXPECT_EQ(some.entities, only.entities);
  auto flip = [](std::string k) {
    for (std::size_t p; (p = k.find("ObjectSomeValuesFrom")) != std::string::npos;)
      k.replace(p, 20, "ObjectAllValuesFrom");
    for (std::size_t p; (p = k.find("DataSomeValuesFrom")) != std::string::npos;) k.replace(p, 18, "DataAllValuesFrom");
    return k;
  };
  for (std::size_t i = 0; i < some.axioms.size(); ++i)
    EXPECT_EQ(flip(owl::key(some.axioms[i])), flip(owl::key(only.axioms[i])));
}

TEST(Codegen, DeterministicAndWarnsOnDefaults) {
  auto a = compile(doc("example1.tsv"));
  auto b = compile(doc("example1.tsv"));
  EXPECT_TRUE(owl::ontologies_equal(a.onto, b.onto));
  int defaults = 0;
  for (const auto& w : a.warnings) defaults += w.code == "DEFAULT_QUANTIFIER";
  EXPECT_EQ(defaults, 2);  // 'degree of fire resistance' and 'in'
}

TEST(Codegen, EntitiesPerTypeRowAndRole) {
  auto c = compile(doc("example2.tsv"));
  auto count = [&](owl::EntityKind k, const std::string& ns) {
    int n = 0;
    for (const auto& [iri, e] : c.onto.entities) n += e.kind == k && iri.rfind(ns, 0) == 0;
    return n;
  };
  const std::string base = golden::kBase + "#";
  EXPECT_EQ(count(owl::EntityKind::Class, base), 4);  // classrooms, buildings, two roles
  EXPECT_EQ(count(owl::EntityKind::ObjectProperty, base), 1);
  EXPECT_EQ(count(owl::EntityKind::DataProperty, base), 2);
  EXPECT_EQ(c.onto.axioms_of_kind(owl::AxiomKind::SubClassOf).size(), 1u);
}

TEST(Codegen, FailingFixturesRaiseValidationFailed) {
  try {
    compile(doc("arrow_rules/range_property_fail_end.tsv"));
    FAIL() << "expected ValidationFailed";
  } catch (const ValidationFailed& e) {
    ASSERT_FALSE(e.diagnostics().empty());
    EXPECT_TRUE(has_errors(e.diagnostics()));
  }
}

// Each annotation tag drives its own constructor.
TEST(Codegen, TagToConstructorCoverage) {
  std::set<ExprKind> seen;
  std::set<owl::DataRange::Kind> ranges;
  for (const char* f : {"example1.tsv", "example2.tsv", "arrow_rules/of_notor_pass_not.tsv", "arrow_rules/of_notor_pass_or.tsv",
                        "arrow_rules/of_quantifier_pass_number.tsv", "arrow_rules/range_relation_pass.tsv"}) {
    auto o = compile(doc(f)).onto;
    auto k = kinds(o);
    seen.insert(k.begin(), k.end());
    for (const auto& a : o.axioms)
      for (const auto& c : a.classes) {
        std::vector<owl::ClassExpression> subs;
        owl::collect_subexpressions(c, subs);
        for (const auto& s : subs)
          if (s.range) ranges.insert(s.range->kind);
      }
  }
  for (ExprKind k : {ExprKind::Named, ExprKind::IntersectionOf, ExprKind::UnionOf, ExprKind::ComplementOf,
                     ExprKind::ObjectSome, ExprKind::ObjectOnly, ExprKind::ObjectCardinality, ExprKind::DataSome,
                     ExprKind::DataOnly})
    EXPECT_TRUE(seen.count(k)) << static_cast<int>(k);
  EXPECT_TRUE(ranges.count(owl::DataRange::Kind::Enumeration));
  EXPECT_TRUE(ranges.count(owl::DataRange::Kind::Restriction));
}

TEST(Codegen, OrOverRangeIsNotRepeated) {
  auto o = compile(doc("arrow_rules/of_notor_pass_or.tsv")).onto;
  const owl::ClassExpression* subject = nullptr;
  for (const auto& a : o.axioms_of_kind(owl::AxiomKind::SubClassOf)) subject = role_definition(o, a->classes[0].iri);
  ASSERT_NE(subject, nullptr);
  ASSERT_EQ(subject->kind, ExprKind::IntersectionOf);
  EXPECT_EQ(subject->operands.size(), 2u);  // beams, in some (walls or columns)
}

TEST(Codegen, NumberOverPropertyIsDataCardinality) {
  // "rooms have at least two heights 3.0": Number -> Property, Property range Literal.
  Tables t;
  t.type(1, "Class", "rooms");
  auto& p = t.type(2, "Property", "heights");
  p.domain_ref = 1;
  p.range_ref = 4;
  t.type(3, "Number", "at least two").of_refs = {2};
  t.type(4, "Literal", "3.0");
  t.type(5, "Class", "spaces");
  t.roles(toks({1, 2, 3, 4}), toks({5}));
  auto c = compile_tables(t.t, {});
  auto* s = role_definition(c.onto, c.unit_iri.at(100));
  ASSERT_NE(s, nullptr);
  ASSERT_EQ(s->kind, ExprKind::IntersectionOf);
  const auto& card = s->operands[1];
  EXPECT_EQ(card.kind, ExprKind::DataCardinality);
  EXPECT_EQ(card.mode, owl::CardinalityMode::Min);
  EXPECT_EQ(card.cardinality, 2u);
}

TEST(Codegen, ExactComparisonIsEnumeration) {
  Tables t;
  t.type(1, "Class", "doors");
  auto& p = t.type(2, "Property", "width");
  p.domain_ref = 1;
  p.range_ref = 4;
  t.type(3, "Comparison", "exactly").of_refs = {4};
  t.type(4, "Literal", "90");
  t.type(5, "Class", "exits");
  t.roles(toks({5}), toks({1, 2, 3, 4}));
  auto c = compile_tables(t.t, {});
  auto* r = role_definition(c.onto, c.unit_iri.at(101));
  ASSERT_NE(r, nullptr);
  ASSERT_EQ(r->operands.size(), 2u);
  EXPECT_EQ(r->operands[1].kind, ExprKind::DataOnly);
  EXPECT_EQ(r->operands[1].range->kind, owl::DataRange::Kind::Enumeration);
  EXPECT_EQ(r->operands[1].range->values[0], (owl::Literal{"90", owl::Datatype::Integer}));
}

TEST(Codegen, EmptyRoleSelection) {
  Tables t;
  t.type(1, "Class", "rooms");
  t.roles(toks({1}), toks({7}));
  try {
    compile_tables(t.t, {});
    FAIL();
  } catch (const CodegenError& e) {
    EXPECT_EQ(e.code(), "EmptyRoleSelection");
  }
}

TEST(Codegen, KindMismatchWarnsAndSkipsAlignment) {
  Tables t;
  t.type(1, "Class", "protection");
  t.roles(toks({1}), toks({1}));
  t.t.terms.push_back({50, "protection", "FIREPROTECTION", "https://example.org/ifc#FIREPROTECTION", toks({1})});
  auto c = compile_tables(t.t, {});
  bool warned = false;
  for (const auto& w : c.warnings) warned = warned || w.code == "KIND_MISMATCH";
  EXPECT_TRUE(warned);
  EXPECT_TRUE(c.onto.axioms_of_kind(owl::AxiomKind::EquivalentProperties).empty());
}

TEST(Codegen, BaseIriIsConfigurable) {
  Config cfg;
  cfg.base_iri = "http://example.com/reg";
  auto c = compile(doc("example2.tsv"), cfg);
  EXPECT_EQ(c.onto.iri, "http://example.com/reg");
  EXPECT_NE(c.onto.find("http://example.com/reg#classrooms"), nullptr);
}
