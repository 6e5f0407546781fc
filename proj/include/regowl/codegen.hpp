#pragma once

// Layer tables -> OWL: entity generation, term alignment, restriction
// construction by backward induction over predicate chains, and the role
// axioms (Subject/Requirement equivalences plus one GCI per To arrow).

#include <algorithm>
#include <cassert>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "regowl/diagnostics.hpp"
#include "regowl/error.hpp"
#include "regowl/owl_model.hpp"
#include "regowl/preprocess.hpp"
#include "regowl/schema_check.hpp"
#include "regowl/tsv_ingest.hpp"
#include "regowl/vocab.hpp"

namespace regowl::codegen {

using owl::ClassExpression;
using owl::Ontology;
using pre::RoleRow;
using pre::TermRow;
using pre::TypeRow;
using tsv::TokenRef;

class CodegenError : public Error {
 public:
  CodegenError(std::string code, const std::string& message) : Error(std::move(code), message) {}
};

/// Thrown by compile() when validation reports errors.
class ValidationFailed : public Error {
 public:
  explicit ValidationFailed(std::vector<Diagnostic> diagnostics)
      : Error("ValidationFailed", summary(diagnostics)), diagnostics_(std::move(diagnostics)) {}
  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  static std::string summary(const std::vector<Diagnostic>& ds) {
    std::string first;
    int n = 0;
    for (const auto& d : ds)
      if (d.severity == Severity::Error && n++ == 0) first = d.code + " unit=" + std::to_string(d.unit_id);
    return std::to_string(n) + " schema error(s), first " + first;
  }
  std::vector<Diagnostic> diagnostics_;
};

enum class Quantifier { Some, Only };

inline std::optional<Quantifier> quantifier_from_string(std::string_view s) {
  std::string k = text::to_lower(s);
  if (k == "some") return Quantifier::Some;
  if (k == "only") return Quantifier::Only;
  return std::nullopt;
}

struct Config {
  std::string base_iri = "https://example.org/regulation";
  vocab::CardMap card = vocab::CardMap::defaults();
  vocab::ConstrMap constr = vocab::ConstrMap::defaults();
  vocab::TermVocabulary terms = vocab::TermVocabulary::defaults();
  Quantifier subject_default = Quantifier::Some;
  Quantifier requirement_default = Quantifier::Only;
};

/// Ontology under construction plus the unit -> IRI map the later steps need.
struct Compilation {
  Ontology onto;
  std::map<int, std::string> unit_iri;
  std::vector<Diagnostic> warnings;
};

using TokenSet = std::set<TokenRef>;

inline TokenSet token_set(const std::vector<TokenRef>& v) { return TokenSet(v.begin(), v.end()); }

inline bool included(const TokenSet& inner, const TokenSet& outer) {
  return !inner.empty() && std::includes(outer.begin(), outer.end(), inner.begin(), inner.end());
}

// ---------------------------------------------------------------------------
// Entities

/// One entity per Class / Relation / Property row and per role row, labelled
/// with the row surface.
inline Compilation generate_entities(const std::vector<TypeRow>& st, const std::vector<RoleRow>& sr,
                                     const std::string& base_iri) {
  Compilation c;
  c.onto.iri = base_iri;
  std::set<std::string> taken;
  auto add = [&](int unit, const std::string& label, owl::EntityKind kind) {
    std::string iri = owl::mint_iri(base_iri, label, taken);
    c.onto.declare({kind, iri, label});
    c.unit_iri[unit] = iri;
  };
  for (const auto& r : st) {
    if (r.type_tag == "Class") add(r.unit_id, r.surface, owl::EntityKind::Class);
    else if (r.type_tag == "Relation") add(r.unit_id, r.surface, owl::EntityKind::ObjectProperty);
    else if (r.type_tag == "Property") add(r.unit_id, r.surface, owl::EntityKind::DataProperty);
  }
  for (const auto& r : sr) add(r.unit_id, r.surface, owl::EntityKind::Class);
  return c;
}

// ---------------------------------------------------------------------------
// Alignment

inline owl::EntityKind entity_kind_for_tag(const std::string& tag) {
  if (tag == "Relation") return owl::EntityKind::ObjectProperty;
  if (tag == "Property") return owl::EntityKind::DataProperty;
  return owl::EntityKind::Class;
}

inline std::optional<owl::EntityKind> entity_kind(vocab::TermKind k) {
  switch (k) {
    case vocab::TermKind::Class: return owl::EntityKind::Class;
    case vocab::TermKind::ObjectProperty: return owl::EntityKind::ObjectProperty;
    case vocab::TermKind::DataProperty: return owl::EntityKind::DataProperty;
    case vocab::TermKind::Unspecified: return std::nullopt;
  }
  return std::nullopt;
}

/// Declares each resolved term and links it to the tightest Class, Relation
/// or Property row whose tokens contain the term's tokens.
inline void align_terms(const std::vector<TermRow>& tr, const std::vector<TypeRow>& st, Compilation& c,
                        const vocab::TermVocabulary& terms) {
  for (const auto& t : tr) {
    if (t.term_iri.empty()) continue;
    TokenSet tt = token_set(t.tokens);
    const TypeRow* best = nullptr;
    for (const auto& r : st) {
      if (!schema::tag_in(r.type_tag, {"Class", "Relation", "Property"})) continue;
      if (!included(tt, token_set(r.tokens))) continue;
      if (!best || r.tokens.size() < best->tokens.size()) best = &r;
    }
    const vocab::TermEntry* entry = terms.find(t.term_label);
    auto declared = entry ? entity_kind(entry->kind) : std::nullopt;
    auto aligned = best ? std::optional(entity_kind_for_tag(best->type_tag)) : std::nullopt;
    owl::EntityKind kind = declared.value_or(aligned.value_or(owl::EntityKind::Class));
    if (const auto* existing = c.onto.find(t.term_iri)) kind = existing->kind;
    c.onto.declare({kind, t.term_iri, t.term_label});
    if (!best) continue;
    if (kind != *aligned) {
      c.warnings.push_back({Severity::Warning, "KIND_MISMATCH", t.unit_id,
                            "term " + t.term_label + " is a " + std::string(owl::to_string(kind)) + " but '" +
                                best->surface + "' is a " + best->type_tag});
      continue;
    }
    const std::string& generated = c.unit_iri.at(best->unit_id);
    if (kind == owl::EntityKind::Class)
      c.onto.add(owl::Axiom::equivalent_classes({ClassExpression::named(t.term_iri), ClassExpression::named(generated)}));
    else
      c.onto.add(owl::Axiom::equivalent_properties(
          t.term_iri, generated,
          kind == owl::EntityKind::ObjectProperty ? owl::PropertyKind::Object : owl::PropertyKind::Data));
  }
}

// ---------------------------------------------------------------------------
// Restrictions

struct PoolEntry {
  int unit_id = 0;  // root class, predicate or Or unit the entry stems from
  ClassExpression expr;
  TokenSet tokens;
};

struct RestrictionPool {
  std::vector<PoolEntry> entries;  // C_restr, in construction order
  std::set<int> consumed;          // predicate units turned into restrictions

  const PoolEntry* find(int unit_id) const {
    for (const auto& e : entries)
      if (e.unit_id == unit_id) return &e;
    return nullptr;
  }
};

namespace detail {

struct Built {
  ClassExpression expr;
  TokenSet tokens;
};

inline void merge(TokenSet& into, const TokenSet& from) { into.insert(from.begin(), from.end()); }

class RestrictionBuilder {
 public:
  RestrictionBuilder(const std::vector<TypeRow>& st, const std::vector<RoleRow>& sr, const Compilation& c,
                     const Config& cfg, std::vector<Diagnostic>& warnings)
      : st_(st), sr_(sr), c_(c), cfg_(cfg), warnings_(warnings) {
    for (const auto& r : st) rows_[r.unit_id] = &r;
    for (const auto& r : st) {
      for (int of : r.of_refs) {
        if (r.type_tag == "Not") not_of_[of] = &r;
        else if (r.type_tag == "Or") or_of_[of] = &r;
        else if (schema::is_quantifier(r.type_tag)) quantifier_of_[of] = &r;
        else if (r.type_tag == "Comparison") comparisons_of_[of].push_back(&r);
      }
    }
  }

  RestrictionPool run() {
    // Predicates hang off their domain anchor and point at their range anchor.
    std::vector<const TypeRow*> predicates;
    for (const auto& r : st_) {
      if (!schema::is_predicate(r.type_tag)) continue;
      auto from = schema::anchor(st_, r.unit_id);
      auto to = r.range_ref ? schema::anchor(st_, *r.range_ref) : std::nullopt;
      if (!from || !to) throw CodegenError("ChainCycle", "cannot anchor predicate '" + r.surface + "'");
      domain_anchor_[r.unit_id] = *from;
      range_anchor_[r.unit_id] = *to;
      outgoing_[*from].push_back(r.unit_id);
      range_targets_.insert(*to);
      predicates.push_back(&r);
    }

    // Backward induction: R starts as the chain ends; a predicate is built once
    // everything its filler depends on is complete, which completes its domain
    // node once all of that node's predicates are built.
    std::set<int> pending;
    for (const auto* p : predicates) pending.insert(p->unit_id);
    while (!pending.empty()) {
      std::size_t before = pending.size();
      for (auto it = pending.begin(); it != pending.end();) {
        if (!filler_ready(*it)) {
          ++it;
          continue;
        }
        built_[*it] = restriction(*rows_.at(*it));
        pool_.consumed.insert(*it);
        it = pending.erase(it);
      }
      if (pending.size() >= before)
        throw CodegenError("ChainCycle", "backward induction stalled with " + std::to_string(pending.size()) +
                                             " predicate(s) left");
      assert(pending.size() < before);  // decreasing measure
    }

    // Roots: classes that never appear as a range. Their atoms and top-level
    // restrictions are the building blocks for the roles.
    std::set<int> emitted_or;
    for (const auto& r : st_) {
      if (r.type_tag != "Class" || range_targets_.count(r.unit_id)) continue;
      if (auto g = or_of_.find(r.unit_id); g != or_of_.end()) {
        const auto& members = g->second->of_refs;
        // A union already used as a filler is not a root.
        if (std::any_of(members.begin(), members.end(), [&](int m) { return range_targets_.count(m) > 0; })) continue;
        if (!emitted_or.insert(g->second->unit_id).second) continue;
        Built u = class_union(*g->second);
        pool_.entries.push_back({g->second->unit_id, u.expr, u.tokens});
        continue;
      }
      Built a = atom(r);
      pool_.entries.push_back({r.unit_id, a.expr, a.tokens});
      std::vector<Built> parts = attached(r.unit_id);
      std::vector<int> units = units_;
      for (std::size_t k = 0; k < parts.size(); ++k) pool_.entries.push_back({units[k], parts[k].expr, parts[k].tokens});
    }
    return pool_;
  }

 private:
  bool node_complete(int node) const {
    auto it = outgoing_.find(node);
    if (it == outgoing_.end()) return true;
    return std::all_of(it->second.begin(), it->second.end(), [&](int p) { return built_.count(p) > 0; });
  }

  bool filler_ready(int predicate) const {
    int target = range_anchor_.at(predicate);
    if (auto g = or_of_.find(target); g != or_of_.end())
      return std::all_of(g->second->of_refs.begin(), g->second->of_refs.end(),
                         [&](int m) { return node_complete(m); });
    return node_complete(target);
  }

  Built atom(const TypeRow& cls) const {
    Built b{ClassExpression::named(c_.unit_iri.at(cls.unit_id)), token_set(cls.tokens)};
    if (auto n = not_of_.find(cls.unit_id); n != not_of_.end()) {
      b.expr = ClassExpression::complement_of(std::move(b.expr));
      merge(b.tokens, token_set(n->second->tokens));
    }
    return b;
  }

  // Restrictions hanging off `node`, one per predicate or per Or over predicates.
  std::vector<Built> attached(int node) {
    std::vector<Built> out;
    units_.clear();
    auto it = outgoing_.find(node);
    if (it == outgoing_.end()) return out;
    std::set<int> done_or;
    for (int p : it->second) {
      if (auto g = or_of_.find(p); g != or_of_.end()) {
        const TypeRow& or_row = *g->second;
        if (!done_or.insert(or_row.unit_id).second) continue;
        std::vector<ClassExpression> alts;
        Built u{ClassExpression{}, token_set(or_row.tokens)};
        for (int m : or_row.of_refs) {
          alts.push_back(built_.at(m).expr);
          merge(u.tokens, built_.at(m).tokens);
        }
        u.expr = ClassExpression::union_of(std::move(alts));
        out.push_back(std::move(u));
        units_.push_back(or_row.unit_id);
        continue;
      }
      out.push_back(built_.at(p));
      units_.push_back(p);
    }
    return out;
  }

  Built node_expr(int node) {
    const TypeRow& row = *rows_.at(node);
    Built a = atom(row);
    std::vector<ClassExpression> parts{a.expr};
    for (Built& b : attached(node)) {
      parts.push_back(std::move(b.expr));
      merge(a.tokens, b.tokens);
    }
    return {ClassExpression::conjunction(std::move(parts)), a.tokens};
  }

  Built class_union(const TypeRow& or_row) {
    std::vector<ClassExpression> alts;
    Built u{ClassExpression{}, token_set(or_row.tokens)};
    for (int m : or_row.of_refs) {
      Built b = node_expr(m);
      alts.push_back(std::move(b.expr));
      merge(u.tokens, b.tokens);
    }
    u.expr = ClassExpression::union_of(std::move(alts));
    return u;
  }

  Built filler_for(int target) {
    if (auto g = or_of_.find(target); g != or_of_.end()) return class_union(*g->second);
    return node_expr(target);
  }

  Built literal_range(const TypeRow& lit) const {
    owl::Literal value = owl::Literal::infer(lit.surface);
    Built b{ClassExpression{}, token_set(lit.tokens)};
    std::vector<std::pair<owl::Facet, owl::Literal>> facets;
    bool exact = false;
    if (auto cs = comparisons_of_.find(lit.unit_id); cs != comparisons_of_.end()) {
      for (const TypeRow* cmp : cs->second) {
        owl::Facet f = vocab::constr_lookup(cfg_.constr, cmp->surface);
        merge(b.tokens, token_set(cmp->tokens));
        if (f == owl::Facet::Exact) exact = true;
        else facets.emplace_back(f, value);
      }
    }
    // Exact, or no comparison at all, is a one-value enumeration.
    owl::DataRange range = facets.empty() || exact ? owl::DataRange::one_of({value})
                                                   : owl::DataRange::restricted(value.datatype, facets);
    b.expr.range = std::move(range);
    return b;
  }

  Quantifier default_for(const TypeRow& p) {
    TokenSet pt = token_set(p.tokens);
    for (const auto& role : sr_)
      if (role.role_tag == "Requirement" && included(pt, token_set(role.tokens))) return cfg_.requirement_default;
    return cfg_.subject_default;
  }

  Built restriction(const TypeRow& p) {
    const std::string& iri = c_.unit_iri.at(p.unit_id);
    int target = range_anchor_.at(p.unit_id);
    bool data = p.type_tag == "Property";
    Built filler = data ? literal_range(*rows_.at(target)) : filler_for(target);
    Built out{ClassExpression{}, token_set(p.tokens)};
    merge(out.tokens, filler.tokens);

    const TypeRow* q = nullptr;
    if (auto it = quantifier_of_.find(p.unit_id); it != quantifier_of_.end()) q = it->second;
    std::string tag;
    if (q) {
      tag = q->type_tag;
      merge(out.tokens, token_set(q->tokens));
    } else {
      Quantifier d = default_for(p);
      tag = d == Quantifier::Some ? "Some" : "Only";
      warnings_.push_back({Severity::Warning, "DEFAULT_QUANTIFIER", p.unit_id,
                           "'" + p.surface + "' has no Some/Only/Number; using " + tag});
    }

    if (tag == "Number") {
      vocab::NumberSpec n = vocab::number_lookup(cfg_.card, cfg_.constr, q->surface);
      out.expr = data ? ClassExpression::data_cardinality(iri, n.mode, n.n, *filler.expr.range)
                      : ClassExpression::object_cardinality(iri, n.mode, n.n, filler.expr);
    } else if (data) {
      out.expr = tag == "Some" ? ClassExpression::data_some(iri, *filler.expr.range)
                               : ClassExpression::data_only(iri, *filler.expr.range);
    } else {
      out.expr = tag == "Some" ? ClassExpression::object_some(iri, filler.expr)
                               : ClassExpression::object_only(iri, filler.expr);
    }
    if (auto n = not_of_.find(p.unit_id); n != not_of_.end()) {
      out.expr = ClassExpression::complement_of(std::move(out.expr));
      merge(out.tokens, token_set(n->second->tokens));
    }
    return out;
  }

  const std::vector<TypeRow>& st_;
  const std::vector<RoleRow>& sr_;
  const Compilation& c_;
  const Config& cfg_;
  std::vector<Diagnostic>& warnings_;

  std::map<int, const TypeRow*> rows_;
  std::map<int, const TypeRow*> not_of_, or_of_, quantifier_of_;
  std::map<int, std::vector<const TypeRow*>> comparisons_of_;
  std::map<int, int> domain_anchor_, range_anchor_;
  std::map<int, std::vector<int>> outgoing_;
  std::set<int> range_targets_;
  std::map<int, Built> built_;
  std::vector<int> units_;  // unit of each entry returned by the last attached()
  RestrictionPool pool_;
};

}  // namespace detail

/// Builds C_restr. Throws ChainCycle, UnmappedCardPhrase, UnmappedConstrPhrase.
inline RestrictionPool build_restrictions(const std::vector<TypeRow>& st, const std::vector<RoleRow>& sr,
                                          const Compilation& c, const Config& cfg,
                                          std::vector<Diagnostic>* warnings = nullptr) {
  std::vector<Diagnostic> sink;
  detail::RestrictionBuilder b(st, sr, c, cfg, warnings ? *warnings : sink);
  return b.run();
}

// ---------------------------------------------------------------------------
// Axioms

/// Role equivalences from token inclusion, then one SubClassOf per To arrow.
inline void build_axioms(const std::vector<RoleRow>& sr, const RestrictionPool& pool, Compilation& c) {
  for (const auto& role : sr) {
    TokenSet rt = token_set(role.tokens);
    std::vector<ClassExpression> selected;
    for (const auto& e : pool.entries)
      if (included(e.tokens, rt)) selected.push_back(e.expr);
    if (selected.empty())
      throw CodegenError("EmptyRoleSelection", role.role_tag + " '" + role.surface + "' contains no restriction");
    c.onto.add(owl::Axiom::equivalent_classes(
        {ClassExpression::named(c.unit_iri.at(role.unit_id)), ClassExpression::conjunction(std::move(selected))}));
  }
  for (const auto& role : sr)
    if (role.to_ref)
      c.onto.add(owl::Axiom::sub_class_of(ClassExpression::named(c.unit_iri.at(role.unit_id)),
                                          ClassExpression::named(c.unit_iri.at(*role.to_ref))));
}

/// Runs the whole pipeline from the layer tables.
inline Compilation compile_tables(const pre::LayerTables& tables, const Config& cfg) {
  auto diagnostics = schema::validate(tables, {cfg.card, cfg.constr});
  if (has_errors(diagnostics)) throw ValidationFailed(diagnostics);
  Compilation c = generate_entities(tables.types, tables.roles, cfg.base_iri);
  for (const auto& d : diagnostics) c.warnings.push_back(d);
  align_terms(tables.terms, tables.types, c, cfg.terms);
  RestrictionPool pool = build_restrictions(tables.types, tables.roles, c, cfg, &c.warnings);
  build_axioms(tables.roles, pool, c);
  if (auto missing = c.onto.undeclared_references(); !missing.empty())
    throw owl::ModelError("undeclared IRI <" + missing.front() + ">");
  return c;
}

inline Compilation compile(const tsv::AnnotatedDocument& doc, const Config& cfg = {}) {
  return compile_tables(pre::extract_layers(pre::apply_linguistic_arrows(doc), cfg.terms), cfg);
}

}  // namespace regowl::codegen
