#include <gtest/gtest.h>

#include "generators.hpp"
#include "golden.hpp"
#include "oracle.hpp"
#include "regowl/abox_checker.hpp"
#include "regowl/codegen.hpp"
#include "regowl/manchester.hpp"

using namespace regowl;
using namespace regowl::check;
using owl::ClassExpression;

namespace {

owl::Ontology compiled_example1(codegen::Quantifier q) {
  codegen::Config cfg;
  cfg.subject_default = q;
  return codegen::compile(tsv::parse_tsv(vocab::read_file(golden::fixture("example1.tsv"))), cfg).onto;
}

ABox listings(const owl::Ontology& tbox, const std::string& r15_value = "R 15") {
  std::string src = vocab::read_file(golden::fixture("listings_abox.omn"));
  if (r15_value != "R 15") src.replace(src.find("\"R 15\""), 6, "\"" + r15_value + "\"");
  return abox_from_ontology(manchester::parse_manchester_subset(src, &tbox));
}

oracle::Model oracle_model(const owl::Ontology& tbox, const ABox& box) {
  std::vector<std::string> domain;
  for (const auto& i : box.individuals) domain.push_back(i.iri);
  return oracle::Model(tbox, domain, abox_to_ontology(box).axioms);
}

// Sub-expressions of every class expression in the TBox, plus each named class.
std::vector<ClassExpression> probes(const owl::Ontology& tbox) {
  std::vector<ClassExpression> out;
  for (const auto& a : tbox.axioms)
    for (const auto& c : a.classes) owl::collect_subexpressions(c, out);
  for (const auto& [iri, e] : tbox.entities)
    if (e.kind == owl::EntityKind::Class) out.push_back(ClassExpression::named(iri));
  return out;
}

int disagreements(const owl::Ontology& tbox, const ABox& box) {
  Evaluator ev(tbox, box);
  auto model = oracle_model(tbox, box);
  int bad = 0;
  for (const auto& e : probes(tbox)) {
    auto ext = model.extension(e);
    for (const auto& i : box.individuals)
      if (ev.evaluate(i.iri, e) != (ext.count(i.iri) > 0)) {
        ++bad;
        ADD_FAILURE() << owl::key(e) << " on " << i.iri;
      }
  }
  return bad;
}

ABox to_abox(const gen::GeneratedABox& g) {
  owl::Ontology data;
  for (const auto& a : g.assertions) data.add(a);
  ABox box = abox_from_ontology(data);
  for (const auto& i : g.individuals) box.get(i);
  return box;
}

}  // namespace

TEST(Literals, EqualityAndRanges) {
  owl::Literal r15{"R15", owl::Datatype::String}, r_15{"R 15", owl::Datatype::String};
  EXPECT_TRUE(literal_equal(r15, r_15));
  EXPECT_FALSE(literal_equal(r15, r_15, Options{true}));
  EXPECT_TRUE(literal_equal({"3.0", owl::Datatype::Float}, {"3", owl::Datatype::Float}));
  EXPECT_FALSE(literal_equal({"3", owl::Datatype::Integer}, {"3", owl::Datatype::Float}));
  auto ge3 = owl::DataRange::restricted(owl::Datatype::Float, {{owl::Facet::MinInclusive, owl::Literal::infer("3.0")}});
  EXPECT_TRUE(literal_in_range(owl::Literal::infer("3"), ge3));
  EXPECT_TRUE(literal_in_range(owl::Literal::infer("3.5"), ge3));
  EXPECT_FALSE(literal_in_range(owl::Literal::infer("2.9"), ge3));
  EXPECT_FALSE(literal_in_range(owl::Literal::infer("III"), ge3));
  auto le300 = owl::DataRange::restricted(owl::Datatype::Integer, {{owl::Facet::MaxInclusive, owl::Literal::infer("300")}});
  EXPECT_TRUE(literal_in_range(owl::Literal::infer("300"), le300));
  EXPECT_FALSE(literal_in_range(owl::Literal::infer("299.5"), le300));
}

TEST(Truth, KleeneConnectives) {
  EXPECT_EQ(t_not(Truth::Unknown), Truth::Unknown);
  EXPECT_EQ(t_and(Truth::True, Truth::Unknown), Truth::Unknown);
  EXPECT_EQ(t_and(Truth::False, Truth::Unknown), Truth::False);
  EXPECT_EQ(t_or(Truth::True, Truth::Unknown), Truth::True);
}

TEST(Closure, AddsNothingOrTargetsAndIsIdempotent) {
  auto tbox = golden::example1(golden::Q::Some);
  ABox box;
  box.get(golden::iri("b1")).object_facts.push_back({golden::iri("in"), golden::iri("x")});
  box.get(golden::iri("b2"));
  auto closed = close_all(box, tbox);
  for (const auto& i : closed.individuals) EXPECT_TRUE(open_properties(i, tbox).empty()) << i.iri;
  const auto* b2 = closed.find(golden::iri("b2"));
  ASSERT_EQ(b2->asserted_classes.size(), 1u);
  EXPECT_EQ(owl::key(b2->asserted_classes[0]),
            owl::key(ClassExpression::object_only(golden::iri("in"), ClassExpression::nothing())));
  const auto* b1 = closed.find(golden::iri("b1"));
  EXPECT_EQ(owl::key(b1->asserted_classes[0]),
            owl::key(ClassExpression::object_only(golden::iri("in"), ClassExpression::one_of({golden::iri("x")}))));
  auto twice = close_all(closed, tbox);
  for (std::size_t i = 0; i < closed.individuals.size(); ++i)
    EXPECT_EQ(twice.individuals[i].asserted_classes.size(), closed.individuals[i].asserted_classes.size());
}

TEST(Evaluator, OpenPropertyIsReported) {
  auto tbox = golden::example1(golden::Q::Some);
  ABox box;
  box.get(golden::iri("b")).asserted_classes.push_back(ClassExpression::named(golden::iri("beams")));
  Evaluator ev(tbox, box);
  auto e = ClassExpression::object_only(golden::iri("in"), ClassExpression::named(golden::iri("building")));
  EXPECT_EQ(ev.truth(golden::iri("b"), e), Truth::Unknown);
  try {
    ev.evaluate(golden::iri("b"), e);
    FAIL();
  } catch (const OpenProperty& err) {
    EXPECT_EQ(err.code(), "OpenProperty");
  }
  // Some with no facts is still unknown under the open world.
  EXPECT_EQ(ev.truth(golden::iri("b"), ClassExpression::object_some(golden::iri("in"), ClassExpression::thing())),
            Truth::Unknown);
}

TEST(Evaluator, EquivalentPropertiesShareFacts) {
  auto tbox = golden::example1(golden::Q::Only);
  ABox box;
  box.get(golden::iri("b")).data_facts.push_back({golden::kIfc + "FIREPROTECTION", owl::Literal::infer("R15")});
  auto req = ClassExpression::data_some(golden::iri("fire_resistance_limit"),
                                        owl::DataRange::one_of({owl::Literal::infer("R15")}));
  EXPECT_TRUE(evaluate(golden::iri("b"), req, box, tbox));
}

TEST(Compliance, EmptyABoxIsConsistent) {
  auto r = check_compliance(golden::example1(golden::Q::Some), {});
  EXPECT_TRUE(r.consistent);
  EXPECT_TRUE(r.classifications.empty());
}

TEST(Compliance, ListingsClassificationsMatchOracle) {
  for (auto q : {codegen::Quantifier::Some, codegen::Quantifier::Only}) {
    auto tbox = compiled_example1(q);
    auto box = listings(tbox);
    auto report = check_compliance(tbox, box);
    EXPECT_TRUE(report.consistent);
    auto model = oracle_model(tbox, box);
    std::set<std::string> expected, got;
    for (const auto* gci : tbox.axioms_of_kind(owl::AxiomKind::SubClassOf))
      for (const auto& i : box.individuals)
        if (model.holds(i.iri, gci->classes[0])) expected.insert(i.iri);
    for (const auto& c : report.classifications) got.insert(c.individual);
    EXPECT_EQ(got, expected);
    EXPECT_TRUE(got.count(golden::iri("beam_in_III_R15")));
  }
}

TEST(Compliance, R14MutationGivesOneReplayableViolation) {
  auto tbox = compiled_example1(codegen::Quantifier::Only);
  auto box = listings(tbox, "R14");
  auto report = check_compliance(tbox, box);
  EXPECT_FALSE(report.consistent);
  ASSERT_EQ(report.violations.size(), 1u);
  const auto& v = report.violations[0];
  EXPECT_EQ(v.individual, golden::iri("beam_in_III_R15"));
  ASSERT_FALSE(v.trace.empty());
  EXPECT_EQ(v.trace[0].axiom.kind, owl::AxiomKind::SubClassOf);
  bool requirement = false, fact = false;
  for (const auto& s : v.trace) {
    requirement = requirement || (s.axiom.kind == owl::AxiomKind::EquivalentClasses &&
                                  s.axiom.classes[0].is_named() && s.axiom.classes[0].iri == golden::kRequirement1);
    fact = fact || (s.axiom.kind == owl::AxiomKind::DataFact && s.axiom.value.lexical == "R14");
  }
  EXPECT_TRUE(requirement);
  EXPECT_TRUE(fact);
  EXPECT_TRUE(replay(v));
  auto text = format_report(report, tbox, box);
  EXPECT_NE(text.find("FIREPROTECTION \"R14\""), std::string::npos) << text;
  auto j = report_to_json(report);
  EXPECT_EQ(j["consistent"], false);
  EXPECT_EQ(j["violations"].size(), 1u);
}

TEST(Compliance, StrictLiteralsTurnR15SpacingIntoAViolation) {
  auto tbox = compiled_example1(codegen::Quantifier::Only);
  auto box = listings(tbox);
  EXPECT_TRUE(check_compliance(tbox, box).consistent);
  EXPECT_FALSE(check_compliance(tbox, box, Options{true}).consistent);
}

TEST(Compliance, ReplayRejectsTamperedTrace) {
  auto tbox = compiled_example1(codegen::Quantifier::Only);
  auto report = check_compliance(tbox, listings(tbox, "R14"));
  ASSERT_EQ(report.violations.size(), 1u);
  auto v = report.violations[0];
  for (auto& s : v.trace)
    if (s.axiom.kind == owl::AxiomKind::DataFact) s.axiom.value.lexical = "R15";
  EXPECT_FALSE(replay(v));
  v.trace.erase(v.trace.begin());
  EXPECT_FALSE(replay(v));
}

TEST(OracleAgreement, GoldenOntologiesOnListings) {
  for (auto q : {codegen::Quantifier::Some, codegen::Quantifier::Only}) {
    auto tbox = compiled_example1(q);
    EXPECT_EQ(disagreements(tbox, listings(tbox)), 0);
    EXPECT_EQ(disagreements(tbox, listings(tbox, "R14")), 0);
  }
}

TEST(OracleAgreement, RandomABoxes) {
  gen::Rng rng(3);
  std::vector<owl::Ontology> tboxes = {golden::example1(golden::Q::Some), golden::example1(golden::Q::Only),
                                       golden::example2()};
  for (int i = 0; i < 60; ++i) {
    const auto tbox = i % 2 ? tboxes[static_cast<std::size_t>(i / 2) % tboxes.size()]
                            : gen::random_ontology(rng, nullptr, false);
    auto box = to_abox(gen::random_abox(rng, tbox));
    ASSERT_EQ(disagreements(tbox, box), 0) << "case " << i;
  }
}
