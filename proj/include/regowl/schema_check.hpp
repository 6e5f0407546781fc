#pragma once

// Arrow-endpoint and role rules over the layer tables.
//
// Codes (E = error, W = warning):
//   E BAD_DOMAIN_START  E BAD_DOMAIN_END  E BAD_RANGE_START  E BAD_RANGE_END
//   E BAD_OF_START      E BAD_OF_END      E BAD_TO_START     E BAD_TO_END
//   E MISSING_SUBJECT   E MISSING_REQUIREMENT
//   E MISSING_OF        E MISSING_DOMAIN  E MISSING_RANGE
//   E OR_ARITY          E OR_MIXED_TARGETS
//   E CONFLICTING_QUANTIFIER  E BAD_INTERVAL  E CHAIN_CYCLE
//   E UNMAPPED_COMPARISON     E UNMAPPED_NUMBER
//   W UNUSED_OPERATOR   W UNRESOLVED_TERM
// DEFAULT_QUANTIFIER and KIND_MISMATCH warnings come from codegen.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "regowl/diagnostics.hpp"
#include "regowl/preprocess.hpp"
#include "regowl/vocab.hpp"

namespace regowl::schema {

using pre::RoleRow;
using pre::TermRow;
using pre::TypeRow;

inline bool tag_in(const std::string& tag, std::initializer_list<const char*> tags) {
  return std::any_of(tags.begin(), tags.end(), [&](const char* t) { return tag == t; });
}

inline bool is_predicate(const std::string& tag) { return tag_in(tag, {"Relation", "Property"}); }
inline bool is_quantifier(const std::string& tag) { return tag_in(tag, {"Some", "Only", "Number"}); }

struct Rules {
  vocab::CardMap card = vocab::CardMap::defaults();
  vocab::ConstrMap constr = vocab::ConstrMap::defaults();
};

/// Follows Domain arrows from a predicate to the class or literal it hangs
/// on. Returns nullopt on a cycle or a missing Domain.
inline std::optional<int> anchor(const std::vector<TypeRow>& st, int unit_id) {
  std::set<int> seen;
  int cur = unit_id;
  while (true) {
    auto it = std::find_if(st.begin(), st.end(), [&](const TypeRow& r) { return r.unit_id == cur; });
    if (it == st.end()) return std::nullopt;
    if (!is_predicate(it->type_tag)) return cur;
    if (!seen.insert(cur).second || !it->domain_ref) return std::nullopt;
    cur = *it->domain_ref;
  }
}

/// True when predicate anchors form a cycle (domain chains looping, or the
/// node graph domain-anchor -> range-anchor containing a cycle).
inline bool has_chain_cycle(const std::vector<TypeRow>& st, int* witness = nullptr) {
  std::map<int, std::vector<int>> edges;
  for (const auto& r : st) {
    if (!is_predicate(r.type_tag) || !r.domain_ref || !r.range_ref) continue;
    auto from = anchor(st, r.unit_id);
    auto to = anchor(st, *r.range_ref);
    if (!from || !to) {
      if (witness) *witness = r.unit_id;
      return true;
    }
    edges[*from].push_back(*to);
  }
  std::map<int, int> state;  // 1 = on stack, 2 = done
  std::function<bool(int)> dfs = [&](int n) {
    state[n] = 1;
    for (int m : edges[n]) {
      if (state[m] == 1 || (state[m] == 0 && dfs(m))) {
        if (witness) *witness = n;
        return true;
      }
    }
    state[n] = 2;
    return false;
  };
  for (const auto& [n, out] : edges)
    if (state[n] == 0 && dfs(n)) return true;
  return false;
}

/// Returns every violated rule. Never mutates the tables.
inline std::vector<Diagnostic> validate(const std::vector<TermRow>& tr, const std::vector<TypeRow>& st,
                                        const std::vector<RoleRow>& sr, const Rules& rules = {}) {
  std::vector<Diagnostic> out;
  auto error = [&](std::string code, int unit, std::string msg) {
    out.push_back({Severity::Error, std::move(code), unit, std::move(msg)});
  };
  auto warning = [&](std::string code, int unit, std::string msg) {
    out.push_back({Severity::Warning, std::move(code), unit, std::move(msg)});
  };
  std::map<int, const TypeRow*> types;
  for (const auto& r : st) types[r.unit_id] = &r;
  std::map<int, const RoleRow*> roles;
  for (const auto& r : sr) roles[r.unit_id] = &r;
  auto tag_of = [&](int id) -> std::string {
    auto it = types.find(id);
    return it == types.end() ? "?" : it->second->type_tag;
  };
  auto names = [&](const TypeRow& r, int target) {
    return "'" + r.surface + "' (" + r.type_tag + ") -> unit " + std::to_string(target) + " (" + tag_of(target) + ")";
  };

  for (const auto& r : st) {
    const std::string& tag = r.type_tag;
    if (r.domain_ref) {
      if (!is_predicate(tag)) error("BAD_DOMAIN_START", r.unit_id, "Domain starts at " + names(r, *r.domain_ref));
      else if (!tag_in(tag_of(*r.domain_ref), {"Class", "Relation"}))
        error("BAD_DOMAIN_END", r.unit_id, "Domain ends at " + names(r, *r.domain_ref));
    }
    if (r.range_ref) {
      std::string end = tag_of(*r.range_ref);
      if (tag == "Relation") {
        if (!tag_in(end, {"Class", "Relation", "Property"}))
          error("BAD_RANGE_END", r.unit_id, "Range ends at " + names(r, *r.range_ref));
      } else if (tag == "Property") {
        if (end != "Literal") error("BAD_RANGE_END", r.unit_id, "Range ends at " + names(r, *r.range_ref));
      } else {
        error("BAD_RANGE_START", r.unit_id, "Range starts at " + names(r, *r.range_ref));
      }
    }
    for (int of : r.of_refs) {
      std::string end = tag_of(of);
      if (tag_in(tag, {"Not", "Or"})) {
        if (!tag_in(end, {"Class", "Relation", "Property"})) error("BAD_OF_END", r.unit_id, "Of ends at " + names(r, of));
      } else if (tag == "Comparison") {
        if (end != "Literal") error("BAD_OF_END", r.unit_id, "Of ends at " + names(r, of));
      } else if (is_quantifier(tag)) {
        if (!is_predicate(end)) error("BAD_OF_END", r.unit_id, "Of ends at " + names(r, of));
      } else {
        error("BAD_OF_START", r.unit_id, "Of starts at " + names(r, of));
      }
    }

    if ((tag == "Comparison" || is_quantifier(tag)) && r.of_refs.empty())
      error("MISSING_OF", r.unit_id, "'" + r.surface + "' (" + tag + ") has no Of arrow");
    if (tag_in(tag, {"Not", "Or"}) && r.of_refs.empty())
      warning("UNUSED_OPERATOR", r.unit_id, "'" + r.surface + "' (" + tag + ") applies to nothing");
    if (is_predicate(tag) && !r.domain_ref)
      error("MISSING_DOMAIN", r.unit_id, "'" + r.surface + "' (" + tag + ") has no Domain arrow");
    if (is_predicate(tag) && !r.range_ref)
      error("MISSING_RANGE", r.unit_id, "'" + r.surface + "' (" + tag + ") has no Range arrow");

    if (tag == "Or" && r.of_refs.size() == 1)
      error("OR_ARITY", r.unit_id, "'" + r.surface + "' (Or) needs at least two operands");
    if (tag == "Or" && r.of_refs.size() >= 2) {
      bool all_classes = std::all_of(r.of_refs.begin(), r.of_refs.end(), [&](int id) { return tag_of(id) == "Class"; });
      bool all_predicates =
          std::all_of(r.of_refs.begin(), r.of_refs.end(), [&](int id) { return is_predicate(tag_of(id)); });
      std::set<std::optional<int>> domains;
      for (int id : r.of_refs) domains.insert(anchor(st, id));
      if (!all_classes && !(all_predicates && domains.size() == 1 && *domains.begin()))
        error("OR_MIXED_TARGETS", r.unit_id,
              "'" + r.surface + "' (Or) must join classes only, or predicates sharing one domain");
    }
    if (tag == "Comparison" && !rules.constr.find(r.surface))
      error("UNMAPPED_COMPARISON", r.unit_id, "comparison phrase '" + r.surface + "' is not in the Constr map");
    if (tag == "Number") {
      try {
        vocab::number_lookup(rules.card, rules.constr, r.surface);
      } catch (const Error&) {
        error("UNMAPPED_NUMBER", r.unit_id, "number phrase '" + r.surface + "' is not in the Card map");
      }
    }
  }

  // One quantifier per predicate; at most one lower and one upper bound per literal.
  std::map<int, std::vector<const TypeRow*>> quantifiers, comparisons;
  for (const auto& r : st) {
    if (r.of_refs.empty()) continue;
    if (is_quantifier(r.type_tag)) quantifiers[r.of_refs.front()].push_back(&r);
    if (r.type_tag == "Comparison") comparisons[r.of_refs.front()].push_back(&r);
  }
  for (const auto& [target, qs] : quantifiers)
    if (qs.size() > 1)
      error("CONFLICTING_QUANTIFIER", qs[1]->unit_id,
            "unit " + std::to_string(target) + " has " + std::to_string(qs.size()) + " quantifiers");
  for (const auto& [target, cs] : comparisons) {
    if (cs.size() < 2) continue;
    int lower = 0, upper = 0, exact = 0;
    for (const auto* c : cs) {
      auto f = rules.constr.find(c->surface);
      if (!f) continue;
      lower += owl::is_lower_bound(*f);
      upper += owl::is_upper_bound(*f);
      exact += *f == owl::Facet::Exact;
    }
    if (cs.size() > 2 || lower > 1 || upper > 1 || exact > 0)
      error("BAD_INTERVAL", cs[1]->unit_id,
            "literal unit " + std::to_string(target) + " needs at most one lower and one upper bound");
  }

  int witness = 0;
  bool structural_errors = std::any_of(out.begin(), out.end(), [](const Diagnostic& d) {
    return d.code == "MISSING_DOMAIN" || d.code == "MISSING_RANGE" || d.code.rfind("BAD_DOMAIN", 0) == 0 ||
           d.code.rfind("BAD_RANGE", 0) == 0;
  });
  if (!structural_errors && has_chain_cycle(st, &witness))
    error("CHAIN_CYCLE", witness, "predicate chain is cyclic");

  for (const auto& r : sr) {
    if (!r.to_ref) continue;
    if (r.role_tag != "Subject") error("BAD_TO_START", r.unit_id, "To starts at a " + r.role_tag);
    auto it = roles.find(*r.to_ref);
    if (it == roles.end() || it->second->role_tag != "Requirement")
      error("BAD_TO_END", r.unit_id, "To must end at a Requirement");
  }
  auto has_role = [&](const char* tag) {
    return std::any_of(sr.begin(), sr.end(), [&](const RoleRow& r) { return r.role_tag == tag; });
  };
  if (!has_role("Subject")) error("MISSING_SUBJECT", 0, "no Subject span");
  if (!has_role("Requirement")) error("MISSING_REQUIREMENT", 0, "no Requirement span");

  for (const auto& t : tr)
    if (t.term_iri.empty())
      warning("UNRESOLVED_TERM", t.unit_id, "term label '" + t.term_label + "' is not in the term vocabulary");

  std::stable_sort(out.begin(), out.end(), [](const Diagnostic& a, const Diagnostic& b) {
    return std::pair(a.severity, a.unit_id) < std::pair(b.severity, b.unit_id);
  });
  return out;
}

inline std::vector<Diagnostic> validate(const pre::LayerTables& t, const Rules& rules = {}) {
  return validate(t.terms, t.types, t.roles, rules);
}

}  // namespace regowl::schema
