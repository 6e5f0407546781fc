#pragma once

// Closed-world finite-model checker. The domain is the set of individuals in
// the ABox; object properties count as closed for an individual only when it
// carries an `p only ...` type, data properties are always closed. Results
// are three-valued (Kleene) so an open property surfaces as Unknown instead
// of a wrong answer.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "regowl/error.hpp"
#include "regowl/manchester.hpp"
#include "regowl/owl_model.hpp"
#include "regowl/text.hpp"

namespace regowl::check {

using owl::Axiom;
using owl::AxiomKind;
using owl::ClassExpression;
using owl::DataRange;
using owl::ExprKind;
using owl::Literal;
using owl::Ontology;

class OpenProperty : public Error {
 public:
  OpenProperty(std::string individual, std::string property)
      : Error("OpenProperty", "individual <" + individual + "> is not closed on <" + property + ">"),
        individual_(std::move(individual)),
        property_(std::move(property)) {}
  const std::string& individual() const { return individual_; }
  const std::string& property() const { return property_; }

 private:
  std::string individual_, property_;
};

struct Individual {
  std::string iri;
  std::vector<ClassExpression> asserted_classes;
  std::vector<std::pair<std::string, std::string>> object_facts;
  std::vector<std::pair<std::string, Literal>> data_facts;

  bool operator==(const Individual&) const = default;
};

struct ABox {
  std::vector<Individual> individuals;

  const Individual* find(const std::string& iri) const {
    for (const auto& i : individuals)
      if (i.iri == iri) return &i;
    return nullptr;
  }
  Individual& get(const std::string& iri) {
    for (auto& i : individuals)
      if (i.iri == iri) return i;
    individuals.push_back({iri, {}, {}, {}});
    return individuals.back();
  }

  bool operator==(const ABox&) const = default;
};

/// Individuals, types and facts of a parsed data file. Fact targets that
/// have no frame of their own become empty individuals.
inline ABox abox_from_ontology(const Ontology& data) {
  ABox box;
  for (const auto& [iri, e] : data.entities)
    if (e.kind == owl::EntityKind::NamedIndividual) box.get(iri);
  for (const auto& a : data.axioms) {
    switch (a.kind) {
      case AxiomKind::ClassAssertion: box.get(a.individual).asserted_classes.push_back(a.classes.at(0)); break;
      case AxiomKind::ObjectFact:
        box.get(a.individual).object_facts.emplace_back(a.property, a.object);
        box.get(a.object);
        break;
      case AxiomKind::DataFact: box.get(a.individual).data_facts.emplace_back(a.property, a.value); break;
      default: break;
    }
  }
  return box;
}

/// Inverse of abox_from_ontology, used to write closed data back out.
inline Ontology abox_to_ontology(const ABox& box, const std::string& iri = "") {
  Ontology o;
  o.iri = iri;
  for (const auto& i : box.individuals) o.declare({owl::EntityKind::NamedIndividual, i.iri, ""});
  for (const auto& i : box.individuals) {
    for (const auto& t : i.asserted_classes) o.add(Axiom::class_assertion(t, i.iri));
    for (const auto& [p, b] : i.object_facts) o.add(Axiom::object_fact(i.iri, p, b));
    for (const auto& [p, v] : i.data_facts) o.add(Axiom::data_fact(i.iri, p, v));
  }
  return o;
}

// ---------------------------------------------------------------------------
// Kleene logic

enum class Truth { False, Unknown, True };

inline const char* to_string(Truth t) {
  return t == Truth::True ? "true" : t == Truth::False ? "false" : "unknown";
}
inline Truth t_not(Truth t) {
  return t == Truth::True ? Truth::False : t == Truth::False ? Truth::True : Truth::Unknown;
}
inline Truth t_and(Truth a, Truth b) { return std::min(a, b); }
inline Truth t_or(Truth a, Truth b) { return std::max(a, b); }
inline Truth t_of(bool b) { return b ? Truth::True : Truth::False; }

// ---------------------------------------------------------------------------
// Literals

struct Options {
  bool strict_literals = false;  // off: string equality ignores whitespace
};

inline bool is_numeric(const Literal& l) { return l.datatype != owl::Datatype::String; }

/// Datatype-aware equality: numbers by value within one datatype, strings
/// by lexical form (whitespace-insensitive unless strict).
inline bool literal_equal(const Literal& a, const Literal& b, const Options& opt = {}) {
  if (a.datatype != b.datatype) return false;
  if (!is_numeric(a)) {
    return opt.strict_literals ? a.lexical == b.lexical
                               : text::strip_whitespace(a.lexical) == text::strip_whitespace(b.lexical);
  }
  auto x = text::parse_double(a.lexical), y = text::parse_double(b.lexical);
  return x && y ? *x == *y : a.lexical == b.lexical;
}

/// Three-way comparison for facet bounds; nullopt when not comparable.
inline std::optional<int> compare_literals(const Literal& a, const Literal& b) {
  if (is_numeric(a) != is_numeric(b)) return std::nullopt;
  if (!is_numeric(a)) return a.lexical < b.lexical ? -1 : a.lexical > b.lexical ? 1 : 0;
  auto x = text::parse_double(a.lexical), y = text::parse_double(b.lexical);
  if (!x || !y) return std::nullopt;
  return *x < *y ? -1 : *x > *y ? 1 : 0;
}

inline bool in_base(const Literal& l, owl::Datatype base) {
  if (!l.valid()) return false;
  switch (base) {
    case owl::Datatype::String: return l.datatype == owl::Datatype::String;
    case owl::Datatype::Integer: return l.datatype == owl::Datatype::Integer;
    case owl::Datatype::Float: return is_numeric(l);
  }
  return false;
}

inline bool literal_in_range(const Literal& l, const DataRange& r, const Options& opt = {}) {
  if (r.kind == DataRange::Kind::Enumeration)
    return std::any_of(r.values.begin(), r.values.end(), [&](const Literal& v) { return literal_equal(l, v, opt); });
  if (!in_base(l, r.base)) return false;
  for (const auto& [facet, bound] : r.facets) {
    auto c = compare_literals(l, bound);
    if (!c) return false;
    bool ok = false;
    switch (facet) {
      case owl::Facet::MinInclusive: ok = *c >= 0; break;
      case owl::Facet::MinExclusive: ok = *c > 0; break;
      case owl::Facet::MaxInclusive: ok = *c <= 0; break;
      case owl::Facet::MaxExclusive: ok = *c < 0; break;
      case owl::Facet::Exact: ok = *c == 0; break;
    }
    if (!ok) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Property equivalence

/// Union-find over property IRIs joined by EquivalentProperties axioms.
class PropertyClasses {
 public:
  PropertyClasses() = default;
  explicit PropertyClasses(const Ontology& onto) {
    for (const auto* a : onto.axioms_of_kind(AxiomKind::EquivalentProperties))
      for (std::size_t i = 1; i < a->properties.size(); ++i) unite(a->properties[0], a->properties[i]);
  }

  std::string rep(const std::string& p) const {
    std::string cur = p;
    for (auto it = parent_.find(cur); it != parent_.end() && it->second != cur; it = parent_.find(cur)) cur = it->second;
    return cur;
  }
  bool same(const std::string& a, const std::string& b) const { return rep(a) == rep(b); }

 private:
  void unite(const std::string& a, const std::string& b) {
    parent_.emplace(a, a);
    parent_.emplace(b, b);
    std::string ra = rep(a), rb = rep(b);
    if (ra == rb) return;
    if (rb < ra) std::swap(ra, rb);
    parent_[rb] = ra;  // smallest IRI is the representative
  }
  std::map<std::string, std::string> parent_;
};

// ---------------------------------------------------------------------------
// Closure

inline std::set<std::string> object_properties(const Ontology& onto) {
  std::set<std::string> out;
  for (const auto& [iri, e] : onto.entities)
    if (e.kind == owl::EntityKind::ObjectProperty) out.insert(iri);
  owl::References refs;
  for (const auto& a : onto.axioms) owl::collect_references(a, refs);
  out.insert(refs.object_properties.begin(), refs.object_properties.end());
  return out;
}

inline std::set<std::string> data_properties(const Ontology& onto) {
  std::set<std::string> out;
  for (const auto& [iri, e] : onto.entities)
    if (e.kind == owl::EntityKind::DataProperty) out.insert(iri);
  owl::References refs;
  for (const auto& a : onto.axioms) owl::collect_references(a, refs);
  out.insert(refs.data_properties.begin(), refs.data_properties.end());
  return out;
}

/// True when `ind` carries a universal type on p or on a property equivalent to it.
inline bool is_closed(const Individual& ind, const std::string& p, const PropertyClasses& pc) {
  return std::any_of(ind.asserted_classes.begin(), ind.asserted_classes.end(), [&](const ClassExpression& t) {
    return (t.kind == ExprKind::ObjectOnly || t.kind == ExprKind::DataOnly) && pc.same(t.iri, p);
  });
}

/// Adds `p only {b1 .. bk}` (or `p only owl:Nothing`) for every object
/// property of the ontology the individual is not yet closed on, and
/// `d only {v1 .. vk}` for data properties with values.
inline Individual close_individual(Individual ind, const Ontology& onto) {
  PropertyClasses pc(onto);
  for (const auto& p : object_properties(onto)) {
    if (is_closed(ind, p, pc)) continue;
    std::vector<std::string> targets;
    for (const auto& [q, b] : ind.object_facts)
      if (pc.same(p, q) && std::find(targets.begin(), targets.end(), b) == targets.end()) targets.push_back(b);
    ind.asserted_classes.push_back(ClassExpression::object_only(
        p, targets.empty() ? ClassExpression::nothing() : ClassExpression::one_of(std::move(targets))));
  }
  for (const auto& p : data_properties(onto)) {
    if (is_closed(ind, p, pc)) continue;
    std::vector<Literal> values;
    for (const auto& [q, v] : ind.data_facts)
      if (pc.same(p, q) && std::find(values.begin(), values.end(), v) == values.end()) values.push_back(v);
    if (!values.empty()) ind.asserted_classes.push_back(ClassExpression::data_only(p, DataRange::one_of(values)));
  }
  return ind;
}

inline ABox close_all(ABox box, const Ontology& onto) {
  for (auto& i : box.individuals) i = close_individual(std::move(i), onto);
  return box;
}

/// Object properties used in restrictions of `onto` that `ind` is not closed on.
inline std::vector<std::string> open_properties(const Individual& ind, const Ontology& onto) {
  PropertyClasses pc(onto);
  std::vector<std::string> out;
  for (const auto& p : object_properties(onto))
    if (!is_closed(ind, p, pc)) out.push_back(p);
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation

class Evaluator {
 public:
  Evaluator(const Ontology& onto, const ABox& abox, Options opt = {})
      : onto_(onto), abox_(abox), opt_(opt), pc_(onto) {
    for (const auto& a : onto.axioms)
      if (a.kind == AxiomKind::EquivalentClasses) equivalences_.push_back(&a);
    for (const auto& ind : abox.individuals) {
      for (const auto& [p, b] : ind.object_facts) {
        auto& v = objects_[{ind.iri, pc_.rep(p)}];
        if (std::find(v.begin(), v.end(), b) == v.end()) v.push_back(b);
      }
      for (const auto& [p, l] : ind.data_facts) data_[{ind.iri, pc_.rep(p)}].push_back(l);
      for (const auto& t : ind.asserted_classes) {
        if (t.kind == ExprKind::Named) asserted_[t.iri].insert(ind.iri);
        if (t.kind == ExprKind::ObjectOnly) closed_.insert({ind.iri, pc_.rep(t.iri)});
      }
    }
    fixpoint();
  }

  const Ontology& ontology() const { return onto_; }
  const ABox& abox() const { return abox_; }
  const Options& options() const { return opt_; }
  const PropertyClasses& properties() const { return pc_; }

  bool closed(const std::string& ind, const std::string& p) const { return closed_.count({ind, pc_.rep(p)}) > 0; }

  const std::vector<std::string>& targets(const std::string& ind, const std::string& p) const {
    auto it = objects_.find({ind, pc_.rep(p)});
    return it == objects_.end() ? empty_targets_ : it->second;
  }
  const std::vector<Literal>& values(const std::string& ind, const std::string& p) const {
    auto it = data_.find({ind, pc_.rep(p)});
    return it == data_.end() ? empty_values_ : it->second;
  }

  bool asserted(const std::string& ind, const std::string& cls) const {
    auto it = asserted_.find(cls);
    return it != asserted_.end() && it->second.count(ind);
  }

  const std::vector<const Axiom*>& equivalences() const { return equivalences_; }

  Truth member(const std::string& ind, const std::string& cls) const {
    if (cls == owl::kThing) return Truth::True;
    if (cls == owl::kNothing) return Truth::False;
    auto it = state_.find(cls);
    if (it == state_.end()) return Truth::False;
    auto jt = it->second.find(ind);
    return jt == it->second.end() ? Truth::False : jt->second;
  }

  Truth truth(const std::string& ind, const ClassExpression& e) const { return truth_in(state_, ind, e); }

  /// Two-valued evaluation; Unknown becomes OpenProperty.
  bool evaluate(const std::string& ind, const ClassExpression& e) const {
    Truth t = truth(ind, e);
    if (t == Truth::Unknown) {
      auto [who, prop] = open_witness(ind, e);
      throw OpenProperty(who, prop);
    }
    return t == Truth::True;
  }

  /// Some (individual, property) pair whose openness makes `e` Unknown.
  std::pair<std::string, std::string> open_witness(const std::string& ind, const ClassExpression& e) const {
    std::set<std::pair<std::string, std::string>> seen;
    if (auto w = witness(ind, e, seen)) return *w;
    return {ind, e.iri};
  }

 private:
  using State = std::map<std::string, std::map<std::string, Truth>>;

  // Simultaneous (Jacobi) rounds: every round reads the previous state only,
  // and a membership value never decreases, so the loop terminates.
  void fixpoint() {
    for (const auto& [cls, inds] : asserted_)
      for (const auto& i : inds) state_[cls][i] = Truth::True;
    while (true) {
      State next = state_;
      bool changed = false;
      for (const Axiom* a : equivalences_) {
        for (const auto& ind : abox_.individuals) {
          Truth v = Truth::False;
          for (const auto& m : a->classes) v = t_or(v, truth_in(state_, ind.iri, m));
          for (const auto& m : a->classes) {
            if (m.kind != ExprKind::Named || m.iri == owl::kThing || m.iri == owl::kNothing) continue;
            Truth& slot = next[m.iri][ind.iri];
            if (v > slot) {
              slot = v;
              changed = true;
            }
          }
        }
      }
      state_ = std::move(next);
      if (!changed) break;
    }
  }

  Truth named_in(const State& s, const std::string& ind, const std::string& cls) const {
    if (cls == owl::kThing) return Truth::True;
    if (cls == owl::kNothing) return Truth::False;
    auto it = s.find(cls);
    if (it == s.end()) return Truth::False;
    auto jt = it->second.find(ind);
    return jt == it->second.end() ? Truth::False : jt->second;
  }

  Truth truth_in(const State& s, const std::string& ind, const ClassExpression& e) const {
    switch (e.kind) {
      case ExprKind::Named: return named_in(s, ind, e.iri);
      case ExprKind::ComplementOf: return t_not(truth_in(s, ind, e.operands.at(0)));
      case ExprKind::IntersectionOf: {
        Truth v = Truth::True;
        for (const auto& op : e.operands) v = t_and(v, truth_in(s, ind, op));
        return v;
      }
      case ExprKind::UnionOf: {
        Truth v = Truth::False;
        for (const auto& op : e.operands) v = t_or(v, truth_in(s, ind, op));
        return v;
      }
      case ExprKind::ObjectOneOf:
        return t_of(std::find(e.individuals.begin(), e.individuals.end(), ind) != e.individuals.end());
      case ExprKind::ObjectSome: {
        Truth v = Truth::False;
        for (const auto& b : targets(ind, e.iri)) v = t_or(v, truth_in(s, b, e.operands.at(0)));
        return closed(ind, e.iri) ? v : t_or(v, Truth::Unknown);
      }
      case ExprKind::ObjectOnly: {
        Truth v = Truth::True;
        for (const auto& b : targets(ind, e.iri)) v = t_and(v, truth_in(s, b, e.operands.at(0)));
        return closed(ind, e.iri) ? v : t_and(v, Truth::Unknown);
      }
      case ExprKind::ObjectCardinality: {
        std::uint32_t yes = 0, maybe = 0;
        for (const auto& b : targets(ind, e.iri)) {
          Truth t = e.operands.empty() ? Truth::True : truth_in(s, b, e.operands[0]);
          yes += t == Truth::True;
          maybe += t == Truth::Unknown;
        }
        return cardinality(e.mode, e.cardinality, yes, maybe, !closed(ind, e.iri));
      }
      case ExprKind::DataSome:
      case ExprKind::DataOnly:
      case ExprKind::DataCardinality: {
        std::uint32_t yes = 0, total = 0;
        for (const auto& l : values(ind, e.iri)) {
          ++total;
          yes += !e.range || literal_in_range(l, *e.range, opt_);
        }
        if (e.kind == ExprKind::DataSome) return t_of(yes > 0);
        if (e.kind == ExprKind::DataOnly) return t_of(yes == total);
        return cardinality(e.mode, e.cardinality, yes, 0, false);
      }
    }
    return Truth::False;
  }

  static Truth cardinality(owl::CardinalityMode mode, std::uint32_t n, std::uint32_t yes, std::uint32_t maybe,
                           bool open) {
    auto at_least = [&] { return yes >= n ? Truth::True : (open || yes + maybe >= n) ? Truth::Unknown : Truth::False; };
    auto at_most = [&] { return yes > n ? Truth::False : (!open && yes + maybe <= n) ? Truth::True : Truth::Unknown; };
    switch (mode) {
      case owl::CardinalityMode::Min: return at_least();
      case owl::CardinalityMode::Max: return at_most();
      case owl::CardinalityMode::Exact: return t_and(at_least(), at_most());
    }
    return Truth::False;
  }

  std::optional<std::pair<std::string, std::string>> witness(const std::string& ind, const ClassExpression& e,
                                                             std::set<std::pair<std::string, std::string>>& seen) const {
    if (truth(ind, e) != Truth::Unknown) return std::nullopt;
    if (e.is_object_restriction()) {
      if (!closed(ind, e.iri)) return std::pair(ind, e.iri);
      if (!e.operands.empty())
        for (const auto& b : targets(ind, e.iri))
          if (auto w = witness(b, e.operands[0], seen)) return w;
      return std::nullopt;
    }
    if (e.kind == ExprKind::Named) {
      if (!seen.insert({ind, e.iri}).second) return std::nullopt;
      for (const Axiom* a : equivalences_) {
        if (std::none_of(a->classes.begin(), a->classes.end(),
                         [&](const ClassExpression& m) { return m.kind == ExprKind::Named && m.iri == e.iri; }))
          continue;
        for (const auto& m : a->classes)
          if (auto w = witness(ind, m, seen)) return w;
      }
      return std::nullopt;
    }
    for (const auto& op : e.operands)
      if (auto w = witness(ind, op, seen)) return w;
    return std::nullopt;
  }

  const Ontology& onto_;
  const ABox& abox_;
  Options opt_;
  PropertyClasses pc_;
  std::vector<const Axiom*> equivalences_;
  std::map<std::pair<std::string, std::string>, std::vector<std::string>> objects_;
  std::map<std::pair<std::string, std::string>, std::vector<Literal>> data_;
  std::map<std::string, std::set<std::string>> asserted_;
  std::set<std::pair<std::string, std::string>> closed_;
  State state_;
  std::vector<std::string> empty_targets_;
  std::vector<Literal> empty_values_;
};

inline bool evaluate(const std::string& ind, const ClassExpression& e, const ABox& abox, const Ontology& onto,
                     const Options& opt = {}) {
  return Evaluator(onto, abox, opt).evaluate(ind, e);
}

// ---------------------------------------------------------------------------
// Explanations

struct TraceStep {
  Axiom axiom;
  std::string text;
};

struct Violation {
  std::string individual;
  Axiom gci;
  std::vector<TraceStep> trace;
};

struct Classification {
  std::string individual;
  std::string role_class;

  bool operator==(const Classification&) const = default;
};

struct ComplianceReport {
  std::vector<Classification> classifications;
  std::vector<Violation> violations;
  bool consistent = true;
};

namespace detail {

/// Collects the axioms and facts one evaluation outcome rests on.
class Explainer {
 public:
  explicit Explainer(const Evaluator& ev) : ev_(ev) {}

  void explain(const std::string& ind, const ClassExpression& e, Truth want) {
    switch (e.kind) {
      case ExprKind::Named: return named(ind, e.iri, want);
      case ExprKind::ComplementOf: return explain(ind, e.operands.at(0), t_not(want));
      case ExprKind::IntersectionOf:
      case ExprKind::UnionOf: {
        bool all = (e.kind == ExprKind::IntersectionOf) == (want == Truth::True);
        for (const auto& op : e.operands) {
          if (all) {
            explain(ind, op, want);
          } else if (ev_.truth(ind, op) == want) {
            explain(ind, op, want);
            return;
          }
        }
        return;
      }
      case ExprKind::ObjectOneOf: return;
      case ExprKind::ObjectSome:
      case ExprKind::ObjectOnly:
      case ExprKind::ObjectCardinality: return object(ind, e, want);
      case ExprKind::DataSome:
      case ExprKind::DataOnly:
      case ExprKind::DataCardinality: return data(ind, e, want);
    }
  }

  void add(const Axiom& a) {
    std::string k = owl::key(a);
    if (keys_.insert(k).second) steps_.push_back(a);
  }

  const std::vector<Axiom>& steps() const { return steps_; }

 private:
  void named(const std::string& ind, const std::string& cls, Truth want) {
    if (cls == owl::kThing || cls == owl::kNothing) return;
    if (!visiting_.insert({ind, cls}).second) return;
    if (want == Truth::True && ev_.asserted(ind, cls)) {
      add(Axiom::class_assertion(ClassExpression::named(cls), ind));
      return;
    }
    for (const Axiom* a : ev_.equivalences()) {
      auto is_self = [&](const ClassExpression& m) { return m.kind == ExprKind::Named && m.iri == cls; };
      if (std::none_of(a->classes.begin(), a->classes.end(), is_self)) continue;
      if (want == Truth::True) {
        for (const auto& m : a->classes) {
          if (is_self(m) || ev_.truth(ind, m) != Truth::True) continue;
          add(*a);
          explain(ind, m, want);
          return;
        }
      } else {
        add(*a);
        for (const auto& m : a->classes)
          if (!is_self(m)) explain(ind, m, want);
      }
    }
  }

  void equivalence_path(const std::string& restricted, const std::string& used) {
    if (restricted == used) return;
    for (const auto* a : ev_.ontology().axioms_of_kind(AxiomKind::EquivalentProperties))
      if (ev_.properties().same(a->properties.at(0), restricted)) add(*a);
  }

  void closure(const std::string& ind, const std::string& p) {
    const Individual* i = ev_.abox().find(ind);
    if (!i) return;
    for (const auto& t : i->asserted_classes)
      if (t.kind == ExprKind::ObjectOnly && ev_.properties().same(t.iri, p)) {
        add(Axiom::class_assertion(t, ind));
        return;
      }
  }

  std::vector<std::pair<std::string, std::string>> facts(const std::string& ind, const std::string& p) const {
    std::vector<std::pair<std::string, std::string>> out;
    if (const Individual* i = ev_.abox().find(ind))
      for (const auto& f : i->object_facts)
        if (ev_.properties().same(f.first, p)) out.push_back(f);
    return out;
  }

  void object(const std::string& ind, const ClassExpression& e, Truth want) {
    const ClassExpression* filler = e.operands.empty() ? nullptr : &e.operands[0];
    auto target_truth = [&](const std::string& b) { return filler ? ev_.truth(b, *filler) : Truth::True; };
    // A single witness fact settles Some=true and Only=false.
    bool single = (e.kind == ExprKind::ObjectSome && want == Truth::True) ||
                  (e.kind == ExprKind::ObjectOnly && want == Truth::False);
    for (const auto& [q, b] : facts(ind, e.iri)) {
      Truth t = target_truth(b);
      if (single && t != want) continue;
      equivalence_path(e.iri, q);
      add(Axiom::object_fact(ind, q, b));
      if (filler) explain(b, *filler, t);
      if (single) return;
    }
    closure(ind, e.iri);
  }

  void data(const std::string& ind, const ClassExpression& e, Truth want) {
    const Individual* i = ev_.abox().find(ind);
    if (!i) return;
    bool single = (e.kind == ExprKind::DataSome && want == Truth::True) ||
                  (e.kind == ExprKind::DataOnly && want == Truth::False);
    for (const auto& [q, v] : i->data_facts) {
      if (!ev_.properties().same(q, e.iri)) continue;
      bool in = !e.range || literal_in_range(v, *e.range, ev_.options());
      if (single && in != (e.kind == ExprKind::DataSome)) continue;
      equivalence_path(e.iri, q);
      add(Axiom::data_fact(ind, q, v));
      if (single) return;
    }
  }

  const Evaluator& ev_;
  std::vector<Axiom> steps_;
  std::set<std::string> keys_;
  std::set<std::pair<std::string, std::string>> visiting_;
};

inline int step_rank(const Axiom& a) {
  switch (a.kind) {
    case AxiomKind::SubClassOf: return 0;
    case AxiomKind::EquivalentProperties: return 1;
    case AxiomKind::ClassAssertion: return a.classes.at(0).kind == ExprKind::Named ? 2 : 4;
    case AxiomKind::EquivalentClasses: return 3;
    case AxiomKind::ObjectFact:
    case AxiomKind::DataFact: return 5;
  }
  return 6;
}

}  // namespace detail

/// Ontology holding the individuals, used to name them in reports.
inline Ontology names_of(const ABox& box) { return abox_to_ontology(box); }

/// Ordered trace for `ind` violating `gci`: the GCI, property equivalences,
/// the classification, the requirement definition, then the facts.
inline std::vector<TraceStep> explain_violation(const Evaluator& ev, const std::string& ind, const Axiom& gci) {
  detail::Explainer ex(ev);
  ex.explain(ind, gci.classes.at(1), Truth::False);
  std::vector<Axiom> steps = ex.steps();
  steps.push_back(Axiom::class_assertion(gci.classes.at(0), ind));
  steps.push_back(gci);
  std::stable_sort(steps.begin(), steps.end(),
                   [](const Axiom& a, const Axiom& b) { return detail::step_rank(a) < detail::step_rank(b); });
  Ontology names = names_of(ev.abox());
  std::vector<TraceStep> out;
  for (auto& a : steps) out.push_back({a, manchester::display(a, ev.ontology(), &names)});
  return out;
}

/// Classifies every individual against the left side of each SubClassOf
/// axiom and reports those failing the right side.
inline ComplianceReport check_compliance(const Ontology& onto, const ABox& abox, const Options& opt = {}) {
  Evaluator ev(onto, abox, opt);
  ComplianceReport report;
  for (const auto* gci : onto.axioms_of_kind(AxiomKind::SubClassOf)) {
    const ClassExpression& sub = gci->classes.at(0);
    const ClassExpression& sup = gci->classes.at(1);
    for (const auto& ind : abox.individuals) {
      if (!ev.evaluate(ind.iri, sub)) continue;
      if (sub.kind == ExprKind::Named) report.classifications.push_back({ind.iri, sub.iri});
      if (ev.evaluate(ind.iri, sup)) continue;
      report.violations.push_back({ind.iri, *gci, explain_violation(ev, ind.iri, *gci)});
    }
  }
  report.consistent = report.violations.empty();
  return report;
}

/// Re-derives a violation from its trace alone: the trace's facts and types
/// form a fresh ABox, its axioms a fresh TBox, and the individual must still
/// satisfy the GCI's left side and fail its right side.
inline bool replay(const Violation& v, const Options& opt = {}) {
  if (v.trace.empty() || owl::key(v.trace.front().axiom) != owl::key(v.gci)) return false;
  Ontology tbox;
  Ontology data;
  for (const auto& s : v.trace) {
    switch (s.axiom.kind) {
      case AxiomKind::SubClassOf:
      case AxiomKind::EquivalentClasses:
      case AxiomKind::EquivalentProperties: tbox.add(s.axiom); break;
      default: data.add(s.axiom);
    }
  }
  ABox box = abox_from_ontology(data);
  box.get(v.individual);
  Evaluator ev(tbox, box, opt);
  return ev.truth(v.individual, v.gci.classes.at(0)) == Truth::True &&
         ev.truth(v.individual, v.gci.classes.at(1)) == Truth::False;
}

// ---------------------------------------------------------------------------
// Report output

inline std::string format_report(const ComplianceReport& r, const Ontology& onto, const ABox& abox) {
  Ontology names = names_of(abox);
  manchester::Namer n(onto, true, &names);
  std::string out = "# regowl check report v1\n";
  out += std::string("consistent: ") + (r.consistent ? "true" : "false") + "\n";
  out += "classifications: " + std::to_string(r.classifications.size()) + "\n";
  for (const auto& c : r.classifications) out += "  " + n.ref(c.individual) + " Type " + n.ref(c.role_class) + "\n";
  out += "violations: " + std::to_string(r.violations.size()) + "\n";
  for (std::size_t i = 0; i < r.violations.size(); ++i) {
    const auto& v = r.violations[i];
    out += "\nviolation " + std::to_string(i + 1) + ": " + n.ref(v.individual) + "\n";
    out += "Explanation for: owl:Thing SubClassOf owl:Nothing\n";
    for (std::size_t k = 0; k < v.trace.size(); ++k) out += std::to_string(k + 1) + ") " + v.trace[k].text + "\n";
  }
  return out;
}

inline const char* step_kind(AxiomKind k) {
  switch (k) {
    case AxiomKind::SubClassOf: return "SubClassOf";
    case AxiomKind::EquivalentClasses: return "EquivalentClasses";
    case AxiomKind::EquivalentProperties: return "EquivalentProperties";
    case AxiomKind::ClassAssertion: return "ClassAssertion";
    case AxiomKind::ObjectFact: return "ObjectPropertyAssertion";
    case AxiomKind::DataFact: return "DataPropertyAssertion";
  }
  return "";
}

inline nlohmann::json report_to_json(const ComplianceReport& r) {
  nlohmann::json j = {{"format", "regowl check report"}, {"version", 1}, {"consistent", r.consistent}};
  j["classifications"] = nlohmann::json::array();
  for (const auto& c : r.classifications) j["classifications"].push_back({{"individual", c.individual}, {"class", c.role_class}});
  j["violations"] = nlohmann::json::array();
  for (const auto& v : r.violations) {
    nlohmann::json trace = nlohmann::json::array();
    for (std::size_t k = 0; k < v.trace.size(); ++k)
      trace.push_back({{"step", k + 1}, {"kind", step_kind(v.trace[k].axiom.kind)}, {"axiom", owl::key(v.trace[k].axiom)},
                       {"text", v.trace[k].text}});
    j["violations"].push_back({{"individual", v.individual}, {"gci", owl::key(v.gci)}, {"trace", trace}});
  }
  return j;
}

}  // namespace regowl::check
