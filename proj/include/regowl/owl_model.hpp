#pragma once

// OWL DL abstract syntax for the fragment the compiler generates: entities,
// class expressions, data ranges and axioms.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "regowl/error.hpp"
#include "regowl/text.hpp"

namespace regowl::owl {

inline constexpr std::string_view kOwlNs = "http://www.w3.org/2002/07/owl#";
inline constexpr std::string_view kRdfNs = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view kRdfsNs = "http://www.w3.org/2000/01/rdf-schema#";
inline constexpr std::string_view kXsdNs = "http://www.w3.org/2001/XMLSchema#";
inline const std::string kThing = std::string(kOwlNs) + "Thing";
inline const std::string kNothing = std::string(kOwlNs) + "Nothing";

class ModelError : public Error {
 public:
  explicit ModelError(const std::string& message) : Error("ModelError", message) {}
};

// ---------------------------------------------------------------------------
// Literals and data ranges

enum class Datatype { String, Integer, Float };

inline std::string_view to_string(Datatype d) {
  switch (d) {
    case Datatype::String: return "string";
    case Datatype::Integer: return "integer";
    case Datatype::Float: return "float";
  }
  return "string";
}

inline std::optional<Datatype> datatype_from_local_name(std::string_view name) {
  if (name == "string") return Datatype::String;
  if (name == "integer" || name == "int" || name == "nonNegativeInteger") return Datatype::Integer;
  if (name == "float" || name == "double" || name == "decimal") return Datatype::Float;
  return std::nullopt;
}

struct Literal {
  std::string lexical;
  Datatype datatype = Datatype::String;

  /// Integer lexicals become integers, decimals become floats, anything
  /// else is a string ("III", "R15").
  static Literal infer(std::string_view lexical) {
    if (text::is_integer_lexical(lexical)) return {std::string(lexical), Datatype::Integer};
    if (text::is_decimal_lexical(lexical)) return {std::string(lexical), Datatype::Float};
    return {std::string(lexical), Datatype::String};
  }

  bool valid() const {
    switch (datatype) {
      case Datatype::String: return true;
      case Datatype::Integer: return text::is_integer_lexical(lexical);
      case Datatype::Float: return text::is_integer_lexical(lexical) || text::is_decimal_lexical(lexical);
    }
    return false;
  }

  auto operator<=>(const Literal&) const = default;
};

enum class Facet { MinInclusive, MinExclusive, MaxInclusive, MaxExclusive, Exact };

inline std::string_view to_string(Facet f) {
  switch (f) {
    case Facet::MinInclusive: return "MinInclusive";
    case Facet::MinExclusive: return "MinExclusive";
    case Facet::MaxInclusive: return "MaxInclusive";
    case Facet::MaxExclusive: return "MaxExclusive";
    case Facet::Exact: return "Exact";
  }
  return "Exact";
}

inline std::optional<Facet> facet_from_string(std::string_view s) {
  std::string key = text::to_lower(s);
  if (text::starts_with(key, "xsd:")) key = key.substr(4);
  if (key == "mininclusive") return Facet::MinInclusive;
  if (key == "minexclusive") return Facet::MinExclusive;
  if (key == "maxinclusive") return Facet::MaxInclusive;
  if (key == "maxexclusive") return Facet::MaxExclusive;
  if (key == "exact") return Facet::Exact;
  return std::nullopt;
}

/// Manchester facet symbol; Exact has none.
inline std::string_view facet_symbol(Facet f) {
  switch (f) {
    case Facet::MinInclusive: return ">=";
    case Facet::MinExclusive: return ">";
    case Facet::MaxInclusive: return "<=";
    case Facet::MaxExclusive: return "<";
    case Facet::Exact: return "=";
  }
  return "=";
}

inline bool is_lower_bound(Facet f) { return f == Facet::MinInclusive || f == Facet::MinExclusive; }
inline bool is_upper_bound(Facet f) { return f == Facet::MaxInclusive || f == Facet::MaxExclusive; }

struct DataRange {
  enum class Kind { Enumeration, Restriction };

  Kind kind = Kind::Enumeration;
  Datatype base = Datatype::String;  // Restriction only
  std::vector<Literal> values;       // Enumeration only
  std::vector<std::pair<Facet, Literal>> facets;

  static DataRange one_of(std::vector<Literal> values) {
    DataRange r;
    r.kind = Kind::Enumeration;
    r.values = std::move(values);
    return r;
  }

  static DataRange restricted(Datatype base, std::vector<std::pair<Facet, Literal>> facets) {
    DataRange r;
    r.kind = Kind::Restriction;
    r.base = base;
    r.facets = std::move(facets);
    r.check();
    return r;
  }

  /// Throws ModelError when the facet invariants do not hold.
  void check() const {
    if (kind == Kind::Enumeration) {
      for (const auto& v : values)
        if (!v.valid()) throw ModelError("literal '" + v.lexical + "' does not parse as its datatype");
      return;
    }
    if (facets.empty()) throw ModelError("facet restriction without facets");
    int lower = 0, upper = 0;
    for (const auto& [facet, value] : facets) {
      if (facet == Facet::Exact) throw ModelError("Exact is not an xsd facet");
      lower += is_lower_bound(facet);
      upper += is_upper_bound(facet);
      bool compatible = base == Datatype::String ? value.datatype == Datatype::String
                        : base == Datatype::Integer
                            ? value.datatype == Datatype::Integer
                            : value.datatype != Datatype::String;
      if (!compatible || !value.valid())
        throw ModelError("facet bound '" + value.lexical + "' incompatible with xsd:" +
                         std::string(to_string(base)));
    }
    if (lower > 1 || upper > 1) throw ModelError("more than one lower or upper bound");
  }

  bool operator==(const DataRange&) const = default;
};

// ---------------------------------------------------------------------------
// Class expressions

enum class ExprKind {
  Named,
  ComplementOf,
  UnionOf,
  IntersectionOf,
  ObjectOneOf,
  ObjectSome,
  ObjectOnly,
  ObjectCardinality,
  DataSome,
  DataOnly,
  DataCardinality,
};

enum class CardinalityMode { Min, Max, Exact };

inline std::string_view to_string(CardinalityMode m) {
  switch (m) {
    case CardinalityMode::Min: return "min";
    case CardinalityMode::Max: return "max";
    case CardinalityMode::Exact: return "exactly";
  }
  return "exactly";
}

struct ClassExpression {
  ExprKind kind = ExprKind::Named;
  /// Class IRI for Named, property IRI for every restriction.
  std::string iri;
  /// Complement: one operand. Union/Intersection: two or more.
  /// Object restrictions: the filler (optional for cardinalities).
  std::vector<ClassExpression> operands;
  std::vector<std::string> individuals;  // ObjectOneOf
  std::optional<DataRange> range;        // data restrictions
  CardinalityMode mode = CardinalityMode::Exact;
  std::uint32_t cardinality = 0;

  static ClassExpression named(std::string iri) {
    ClassExpression e;
    e.iri = std::move(iri);
    return e;
  }
  static ClassExpression thing() { return named(kThing); }
  static ClassExpression nothing() { return named(kNothing); }

  static ClassExpression complement_of(ClassExpression operand) {
    ClassExpression e;
    e.kind = ExprKind::ComplementOf;
    e.operands.push_back(std::move(operand));
    return e;
  }

  static ClassExpression union_of(std::vector<ClassExpression> operands) {
    if (operands.size() < 2) throw ModelError("UnionOf needs at least two operands");
    ClassExpression e;
    e.kind = ExprKind::UnionOf;
    e.operands = std::move(operands);
    return e;
  }

  static ClassExpression intersection_of(std::vector<ClassExpression> operands) {
    if (operands.size() < 2) throw ModelError("IntersectionOf needs at least two operands");
    ClassExpression e;
    e.kind = ExprKind::IntersectionOf;
    e.operands = std::move(operands);
    return e;
  }

  /// Single operand is returned as is; no 1-ary intersections.
  static ClassExpression conjunction(std::vector<ClassExpression> operands) {
    if (operands.empty()) throw ModelError("empty conjunction");
    if (operands.size() == 1) return std::move(operands.front());
    return intersection_of(std::move(operands));
  }

  static ClassExpression one_of(std::vector<std::string> individuals) {
    if (individuals.empty()) throw ModelError("ObjectOneOf needs at least one individual");
    ClassExpression e;
    e.kind = ExprKind::ObjectOneOf;
    e.individuals = std::move(individuals);
    return e;
  }

  static ClassExpression object_some(std::string property, ClassExpression filler) {
    return object_restriction(ExprKind::ObjectSome, std::move(property), std::move(filler));
  }
  static ClassExpression object_only(std::string property, ClassExpression filler) {
    return object_restriction(ExprKind::ObjectOnly, std::move(property), std::move(filler));
  }

  static ClassExpression object_cardinality(std::string property, CardinalityMode mode, std::uint32_t n,
                                            std::optional<ClassExpression> filler = std::nullopt) {
    ClassExpression e;
    e.kind = ExprKind::ObjectCardinality;
    e.iri = std::move(property);
    e.mode = mode;
    e.cardinality = n;
    if (filler) e.operands.push_back(std::move(*filler));
    return e;
  }

  static ClassExpression data_some(std::string property, DataRange range) {
    return data_restriction(ExprKind::DataSome, std::move(property), std::move(range));
  }
  static ClassExpression data_only(std::string property, DataRange range) {
    return data_restriction(ExprKind::DataOnly, std::move(property), std::move(range));
  }

  static ClassExpression data_cardinality(std::string property, CardinalityMode mode, std::uint32_t n,
                                          std::optional<DataRange> range = std::nullopt) {
    ClassExpression e;
    e.kind = ExprKind::DataCardinality;
    e.iri = std::move(property);
    e.mode = mode;
    e.cardinality = n;
    e.range = std::move(range);
    return e;
  }

  bool is_named() const { return kind == ExprKind::Named; }
  bool is_object_restriction() const {
    return kind == ExprKind::ObjectSome || kind == ExprKind::ObjectOnly || kind == ExprKind::ObjectCardinality;
  }
  bool is_data_restriction() const {
    return kind == ExprKind::DataSome || kind == ExprKind::DataOnly || kind == ExprKind::DataCardinality;
  }
  const ClassExpression* filler() const { return operands.empty() ? nullptr : &operands.front(); }

  bool operator==(const ClassExpression&) const = default;

 private:
  static ClassExpression object_restriction(ExprKind kind, std::string property, ClassExpression filler) {
    ClassExpression e;
    e.kind = kind;
    e.iri = std::move(property);
    e.operands.push_back(std::move(filler));
    return e;
  }
  static ClassExpression data_restriction(ExprKind kind, std::string property, DataRange range) {
    ClassExpression e;
    e.kind = kind;
    e.iri = std::move(property);
    e.range = std::move(range);
    return e;
  }
};

// Functional-style keys. They identify structure (IRIs, not labels) and
// define the canonical operand order.

inline std::string key(const Literal& l) {
  return "\"" + text::escape_quoted(l.lexical, '"') + "\"^^" + std::string(to_string(l.datatype));
}

inline std::string key(const DataRange& r) {
  std::string out;
  if (r.kind == DataRange::Kind::Enumeration) {
    out = "DataOneOf(";
    for (std::size_t i = 0; i < r.values.size(); ++i) out += (i ? " " : "") + key(r.values[i]);
  } else {
    out = "DatatypeRestriction(" + std::string(to_string(r.base));
    for (const auto& [f, v] : r.facets) out += " " + std::string(to_string(f)) + " " + key(v);
  }
  return out + ")";
}

inline std::string key(const ClassExpression& e) {
  auto wrap = [](std::string_view name, const std::string& body) { return std::string(name) + "(" + body + ")"; };
  auto card = [&](const ClassExpression& x) {
    return std::string(to_string(x.mode)) + " " + std::to_string(x.cardinality) + " <" + x.iri + ">";
  };
  switch (e.kind) {
    case ExprKind::Named: return "<" + e.iri + ">";
    case ExprKind::ComplementOf: return wrap("ObjectComplementOf", key(e.operands.at(0)));
    case ExprKind::UnionOf:
    case ExprKind::IntersectionOf: {
      std::string body;
      for (std::size_t i = 0; i < e.operands.size(); ++i) body += (i ? " " : "") + key(e.operands[i]);
      return wrap(e.kind == ExprKind::UnionOf ? "ObjectUnionOf" : "ObjectIntersectionOf", body);
    }
    case ExprKind::ObjectOneOf: {
      std::string body;
      for (std::size_t i = 0; i < e.individuals.size(); ++i) body += (i ? " <" : "<") + e.individuals[i] + ">";
      return wrap("ObjectOneOf", body);
    }
    case ExprKind::ObjectSome: return wrap("ObjectSomeValuesFrom", "<" + e.iri + "> " + key(e.operands.at(0)));
    case ExprKind::ObjectOnly: return wrap("ObjectAllValuesFrom", "<" + e.iri + "> " + key(e.operands.at(0)));
    case ExprKind::ObjectCardinality:
      return wrap("ObjectCardinality", card(e) + (e.operands.empty() ? "" : " " + key(e.operands[0])));
    case ExprKind::DataSome: return wrap("DataSomeValuesFrom", "<" + e.iri + "> " + key(*e.range));
    case ExprKind::DataOnly: return wrap("DataAllValuesFrom", "<" + e.iri + "> " + key(*e.range));
    case ExprKind::DataCardinality:
      return wrap("DataCardinality", card(e) + (e.range ? " " + key(*e.range) : ""));
  }
  return {};
}

inline DataRange canonical(DataRange r) {
  std::sort(r.values.begin(), r.values.end(), [](const Literal& a, const Literal& b) { return key(a) < key(b); });
  r.values.erase(std::unique(r.values.begin(), r.values.end()), r.values.end());
  std::sort(r.facets.begin(), r.facets.end(),
            [](const auto& a, const auto& b) { return std::pair(a.first, key(a.second)) < std::pair(b.first, key(b.second)); });
  return r;
}

/// Recursively sorts Union/Intersection operands, nominals and enumeration
/// values by key. Idempotent.
inline ClassExpression canonical(ClassExpression e) {
  for (auto& op : e.operands) op = canonical(std::move(op));
  if (e.kind == ExprKind::UnionOf || e.kind == ExprKind::IntersectionOf) {
    std::stable_sort(e.operands.begin(), e.operands.end(),
                     [](const ClassExpression& a, const ClassExpression& b) { return key(a) < key(b); });
  }
  if (e.kind == ExprKind::ObjectOneOf) {
    std::sort(e.individuals.begin(), e.individuals.end());
    e.individuals.erase(std::unique(e.individuals.begin(), e.individuals.end()), e.individuals.end());
  }
  if (e.range) e.range = canonical(std::move(*e.range));
  return e;
}

inline bool structurally_equal(const ClassExpression& a, const ClassExpression& b) {
  return key(canonical(a)) == key(canonical(b));
}

/// Pre-order list of `e` and all nested class expressions.
inline void collect_subexpressions(const ClassExpression& e, std::vector<ClassExpression>& out) {
  out.push_back(e);
  for (const auto& op : e.operands) collect_subexpressions(op, out);
}

// ---------------------------------------------------------------------------
// Entities, axioms, ontologies

enum class EntityKind { Class, ObjectProperty, DataProperty, NamedIndividual, Datatype };

inline std::string_view to_string(EntityKind k) {
  switch (k) {
    case EntityKind::Class: return "Class";
    case EntityKind::ObjectProperty: return "ObjectProperty";
    case EntityKind::DataProperty: return "DataProperty";
    case EntityKind::NamedIndividual: return "Individual";
    case EntityKind::Datatype: return "Datatype";
  }
  return "Class";
}

struct Entity {
  EntityKind kind = EntityKind::Class;
  std::string iri;
  std::string label;

  auto operator<=>(const Entity&) const = default;
};

enum class AxiomKind { SubClassOf, EquivalentClasses, EquivalentProperties, ClassAssertion, ObjectFact, DataFact };
enum class PropertyKind { Object, Data };

struct Axiom {
  AxiomKind kind = AxiomKind::SubClassOf;
  /// SubClassOf: {sub, sup}. EquivalentClasses: members. ClassAssertion: {type}.
  std::vector<ClassExpression> classes;
  std::vector<std::string> properties;  // EquivalentProperties
  PropertyKind property_kind = PropertyKind::Object;
  std::string individual;  // assertion / fact subject
  std::string property;    // facts
  std::string object;      // ObjectFact target
  Literal value;           // DataFact

  static Axiom sub_class_of(ClassExpression sub, ClassExpression sup) {
    Axiom a;
    a.kind = AxiomKind::SubClassOf;
    a.classes = {std::move(sub), std::move(sup)};
    return a;
  }
  static Axiom equivalent_classes(std::vector<ClassExpression> members) {
    if (members.size() < 2) throw ModelError("EquivalentClasses needs two members");
    Axiom a;
    a.kind = AxiomKind::EquivalentClasses;
    a.classes = std::move(members);
    return a;
  }
  static Axiom equivalent_properties(std::string p1, std::string p2, PropertyKind kind) {
    Axiom a;
    a.kind = AxiomKind::EquivalentProperties;
    a.properties = {std::move(p1), std::move(p2)};
    a.property_kind = kind;
    return a;
  }
  static Axiom class_assertion(ClassExpression type, std::string individual) {
    Axiom a;
    a.kind = AxiomKind::ClassAssertion;
    a.classes = {std::move(type)};
    a.individual = std::move(individual);
    return a;
  }
  static Axiom object_fact(std::string individual, std::string property, std::string object) {
    Axiom a;
    a.kind = AxiomKind::ObjectFact;
    a.individual = std::move(individual);
    a.property = std::move(property);
    a.object = std::move(object);
    a.property_kind = PropertyKind::Object;
    return a;
  }
  static Axiom data_fact(std::string individual, std::string property, Literal value) {
    Axiom a;
    a.kind = AxiomKind::DataFact;
    a.individual = std::move(individual);
    a.property = std::move(property);
    a.value = std::move(value);
    a.property_kind = PropertyKind::Data;
    return a;
  }

  bool operator==(const Axiom&) const = default;
};

inline Axiom canonical(Axiom a) {
  for (auto& c : a.classes) c = canonical(std::move(c));
  if (a.kind == AxiomKind::EquivalentClasses)
    std::sort(a.classes.begin(), a.classes.end(),
              [](const ClassExpression& x, const ClassExpression& y) { return key(x) < key(y); });
  if (a.kind == AxiomKind::EquivalentProperties) std::sort(a.properties.begin(), a.properties.end());
  return a;
}

inline std::string key(const Axiom& a) {
  auto list = [](const std::vector<ClassExpression>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? " " : "") + key(xs[i]);
    return out;
  };
  switch (a.kind) {
    case AxiomKind::SubClassOf: return "SubClassOf(" + list(a.classes) + ")";
    case AxiomKind::EquivalentClasses: return "EquivalentClasses(" + list(a.classes) + ")";
    case AxiomKind::EquivalentProperties:
      return std::string(a.property_kind == PropertyKind::Object ? "EquivalentObjectProperties("
                                                                 : "EquivalentDataProperties(") +
             "<" + a.properties.at(0) + "> <" + a.properties.at(1) + ">)";
    case AxiomKind::ClassAssertion: return "ClassAssertion(" + list(a.classes) + " <" + a.individual + ">)";
    case AxiomKind::ObjectFact:
      return "ObjectPropertyAssertion(<" + a.property + "> <" + a.individual + "> <" + a.object + ">)";
    case AxiomKind::DataFact:
      return "DataPropertyAssertion(<" + a.property + "> <" + a.individual + "> " + key(a.value) + ")";
  }
  return {};
}

/// Local part of an IRI: everything after the last '#' or '/'.
inline std::string_view local_name(std::string_view iri) {
  auto pos = iri.find_last_of("#/");
  return pos == std::string_view::npos ? iri : iri.substr(pos + 1);
}

inline std::string_view namespace_of(std::string_view iri) {
  auto pos = iri.find_last_of("#/");
  return pos == std::string_view::npos ? std::string_view{} : iri.substr(0, pos + 1);
}

struct References {
  std::set<std::string> classes, object_properties, data_properties, individuals;
};

inline void collect_references(const ClassExpression& e, References& refs) {
  switch (e.kind) {
    case ExprKind::Named:
      if (e.iri != kThing && e.iri != kNothing) refs.classes.insert(e.iri);
      break;
    case ExprKind::ObjectOneOf: refs.individuals.insert(e.individuals.begin(), e.individuals.end()); break;
    case ExprKind::ObjectSome:
    case ExprKind::ObjectOnly:
    case ExprKind::ObjectCardinality: refs.object_properties.insert(e.iri); break;
    case ExprKind::DataSome:
    case ExprKind::DataOnly:
    case ExprKind::DataCardinality: refs.data_properties.insert(e.iri); break;
    default: break;
  }
  for (const auto& op : e.operands) collect_references(op, refs);
}

inline void collect_references(const Axiom& a, References& refs) {
  for (const auto& c : a.classes) collect_references(c, refs);
  auto& props = a.property_kind == PropertyKind::Object ? refs.object_properties : refs.data_properties;
  for (const auto& p : a.properties) props.insert(p);
  if (!a.property.empty()) props.insert(a.property);
  if (!a.individual.empty()) refs.individuals.insert(a.individual);
  if (!a.object.empty()) refs.individuals.insert(a.object);
}

struct Ontology {
  std::string iri;
  std::map<std::string, Entity> entities;  // keyed by IRI
  std::vector<Axiom> axioms;                // pipeline order

  const Entity* find(std::string_view entity_iri) const {
    auto it = entities.find(std::string(entity_iri));
    return it == entities.end() ? nullptr : &it->second;
  }

  /// Declares an entity. Redeclaring with the same kind keeps the first
  /// non-empty label; a different kind violates IRI uniqueness.
  const Entity& declare(Entity e) {
    auto [it, inserted] = entities.emplace(e.iri, e);
    if (!inserted) {
      if (it->second.kind != e.kind)
        throw ModelError("IRI <" + e.iri + "> declared as both " + std::string(to_string(it->second.kind)) +
                         " and " + std::string(to_string(e.kind)));
      if (it->second.label.empty()) it->second.label = e.label;
    }
    return it->second;
  }

  void add(Axiom a) { axioms.push_back(std::move(a)); }

  /// IRIs referenced by axioms but not declared with a matching kind.
  std::vector<std::string> undeclared_references() const {
    References refs;
    for (const auto& a : axioms) collect_references(a, refs);
    std::vector<std::string> missing;
    auto check = [&](const std::set<std::string>& iris, EntityKind kind) {
      for (const auto& iri : iris) {
        const Entity* e = find(iri);
        if (!e || e->kind != kind) missing.push_back(iri);
      }
    };
    check(refs.classes, EntityKind::Class);
    check(refs.object_properties, EntityKind::ObjectProperty);
    check(refs.data_properties, EntityKind::DataProperty);
    check(refs.individuals, EntityKind::NamedIndividual);
    return missing;
  }

  std::vector<const Axiom*> axioms_of_kind(AxiomKind kind) const {
    std::vector<const Axiom*> out;
    for (const auto& a : axioms)
      if (a.kind == kind) out.push_back(&a);
    return out;
  }
};

/// Same IRI, same entity set and the same multiset of canonical axioms.
inline bool ontologies_equal(const Ontology& a, const Ontology& b) {
  if (a.iri != b.iri || a.entities != b.entities || a.axioms.size() != b.axioms.size()) return false;
  auto keys = [](const Ontology& o) {
    std::vector<std::string> out;
    for (const auto& ax : o.axioms) out.push_back(key(canonical(ax)));
    std::sort(out.begin(), out.end());
    return out;
  };
  return keys(a) == keys(b);
}

/// `<base>#<slug>`, with `_2`, `_3`, ... appended until unused in `taken`.
inline std::string mint_iri(std::string_view base, std::string_view label, std::set<std::string>& taken) {
  std::string stem = std::string(base);
  if (stem.empty() || (stem.back() != '#' && stem.back() != '/')) stem += '#';
  std::string slug = text::slug(label);
  std::string candidate = stem + slug;
  for (int n = 2; taken.count(candidate); ++n) candidate = stem + slug + "_" + std::to_string(n);
  taken.insert(candidate);
  return candidate;
}

}  // namespace regowl::owl
