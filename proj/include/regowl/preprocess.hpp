#pragma once

// Linguistic arrows (Concatenation, Distribution, SelfDistribution) and the
// extraction of the term, semantic type and semantic role tables.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "regowl/diagnostics.hpp"
#include "regowl/error.hpp"
#include "regowl/tsv_ingest.hpp"
#include "regowl/vocab.hpp"

namespace regowl::pre {

using tsv::AnnotatedDocument;
using tsv::Arrow;
using tsv::Layer;
using tsv::RelationAnnotation;
using tsv::SpanAnnotation;
using tsv::SpanKey;
using tsv::TokenRef;

class PreprocessError : public Error {
 public:
  PreprocessError(std::string code, const std::string& message) : Error(std::move(code), message) {}
};

namespace detail {

inline std::string describe(const SpanAnnotation& s) {
  return std::string(tsv::to_string(s.layer)) + " " + s.tag + "[" + std::to_string(s.span_id) + "]";
}

inline void sort_document(AnnotatedDocument& doc) {
  std::sort(doc.spans.begin(), doc.spans.end(), [](const SpanAnnotation& a, const SpanAnnotation& b) {
    return std::tuple(a.layer, a.tokens.front(), a.span_id) < std::tuple(b.layer, b.tokens.front(), b.span_id);
  });
  std::sort(doc.relations.begin(), doc.relations.end());
  doc.relations.erase(std::unique(doc.relations.begin(), doc.relations.end()), doc.relations.end());
}

}  // namespace detail

/// Applies Concatenation first, then Distribution and SelfDistribution.
/// Semantic arrows touching a replaced span are cloned onto every span
/// derived from it. The result carries no linguistic arrows.
inline AnnotatedDocument apply_linguistic_arrows(const AnnotatedDocument& input) {
  AnnotatedDocument doc = input;
  std::map<SpanKey, const SpanAnnotation*> by_key;
  for (const auto& s : input.spans) by_key[s.key()] = &s;

  std::vector<RelationAnnotation> semantic, concat, distrib;
  for (const auto& r : input.relations) {
    if (!tsv::is_linguistic(r.arrow)) {
      semantic.push_back(r);
      continue;
    }
    auto src = by_key.find(r.source), tgt = by_key.find(r.target);
    if (src == by_key.end() || tgt == by_key.end())
      throw PreprocessError("DanglingReference", std::string(tsv::to_string(r.arrow)) + " arrow with a missing end");
    if (src->second->layer != tgt->second->layer || src->second->tag != tgt->second->tag)
      throw PreprocessError("CrossTagArrow", std::string(tsv::to_string(r.arrow)) + " from " +
                                                 detail::describe(*src->second) + " to " +
                                                 detail::describe(*tgt->second));
    if (r.source == r.target)
      throw PreprocessError("CyclicArrows", std::string(tsv::to_string(r.arrow)) + " loop on " +
                                                detail::describe(*src->second));
    (r.arrow == Arrow::Concatenation ? concat : distrib).push_back(r);
  }

  // Concatenation: a disjoint union of simple paths, each merged into its head.
  std::map<SpanKey, SpanKey> next, prev;
  for (const auto& r : concat) {
    if (!next.emplace(r.source, r.target).second)
      throw PreprocessError("BranchingConcatenation",
                            detail::describe(*by_key[r.source]) + " has two outgoing Concatenation arrows");
    if (!prev.emplace(r.target, r.source).second)
      throw PreprocessError("BranchingConcatenation",
                            detail::describe(*by_key[r.target]) + " has two incoming Concatenation arrows");
  }
  std::map<SpanKey, SpanKey> merged_into;  // member -> head
  std::map<SpanKey, std::vector<TokenRef>> merged_tokens;
  for (const auto& [src, dst] : next) {
    if (prev.count(src)) continue;  // not a head
    SpanKey cur = src;
    auto& toks = merged_tokens[src];
    while (true) {
      merged_into[cur] = src;
      const auto& t = by_key[cur]->tokens;
      toks.insert(toks.end(), t.begin(), t.end());
      auto it = next.find(cur);
      if (it == next.end()) break;
      cur = it->second;
    }
  }
  for (const auto& [src, dst] : next)
    if (!merged_into.count(src))
      throw PreprocessError("CyclicArrows", "Concatenation cycle through " + detail::describe(*by_key[src]));

  auto rep = [&](SpanKey k) {
    auto it = merged_into.find(k);
    return it == merged_into.end() ? k : it->second;
  };

  std::vector<SpanAnnotation> spans;
  for (const auto& s : input.spans) {
    SpanKey head = rep(s.key());
    if (head != s.key()) continue;
    SpanAnnotation copy = s;
    if (auto it = merged_tokens.find(head); it != merged_tokens.end()) copy.tokens = it->second;
    spans.push_back(std::move(copy));
  }

  auto rewrite = [](std::vector<RelationAnnotation> rels, auto&& map_endpoint) {
    std::vector<RelationAnnotation> out;
    for (const auto& r : rels)
      for (SpanKey s : map_endpoint(r.source))
        for (SpanKey t : map_endpoint(r.target))
          if (s != t) out.push_back({r.arrow, s, t});
    return out;
  };
  auto single = [&](SpanKey k) { return std::vector<SpanKey>{rep(k)}; };
  semantic = rewrite(semantic, single);
  distrib = rewrite(distrib, single);

  // Distribution / SelfDistribution.
  std::map<SpanKey, std::vector<SpanKey>> outgoing;
  std::set<SpanKey> self_sources, targets;
  for (const auto& r : distrib) {
    auto& out = outgoing[r.source];
    if (std::find(out.begin(), out.end(), r.target) == out.end()) out.push_back(r.target);
    if (r.arrow == Arrow::SelfDistribution) self_sources.insert(r.source);
    targets.insert(r.target);
  }
  for (const auto& [src, outs] : outgoing)
    if (targets.count(src))
      throw PreprocessError("CyclicArrows", "distributed span " + std::to_string(src.span_id) +
                                                " is itself a distribution target; nested distribution is unsupported");

  if (!outgoing.empty()) {
    std::map<SpanKey, SpanAnnotation> current;
    int next_id = 1;
    for (const auto& s : spans) {
      current[s.key()] = s;
      next_id = std::max(next_id, s.span_id + 1);
    }
    std::map<SpanKey, std::vector<SpanKey>> derived;  // replaced span -> copies
    std::vector<SpanAnnotation> copies;
    for (auto& [src, outs] : outgoing) {
      std::sort(outs.begin(), outs.end(), [&](SpanKey a, SpanKey b) {
        return std::pair(current[a].tokens.front(), a) < std::pair(current[b].tokens.front(), b);
      });
      for (SpanKey tgt : outs) {
        SpanAnnotation copy = current[src];
        copy.span_id = next_id++;
        const auto& extra = current[tgt].tokens;
        copy.tokens.insert(copy.tokens.end(), extra.begin(), extra.end());
        derived[src].push_back(copy.key());
        derived[tgt].push_back(copy.key());
        copies.push_back(std::move(copy));
      }
      if (self_sources.count(src)) derived[src].push_back(src);
    }
    std::vector<SpanAnnotation> kept;
    for (auto& s : spans)
      if (!derived.count(s.key()) || self_sources.count(s.key())) kept.push_back(std::move(s));
    kept.insert(kept.end(), copies.begin(), copies.end());
    spans = std::move(kept);
    semantic = rewrite(semantic, [&](SpanKey k) {
      auto it = derived.find(k);
      return it == derived.end() ? std::vector<SpanKey>{k} : it->second;
    });
  }

  doc.spans = std::move(spans);
  doc.relations = std::move(semantic);
  detail::sort_document(doc);
  return doc;
}

// ---------------------------------------------------------------------------
// Layer tables

struct TermRow {
  int unit_id = 0;
  std::string surface;
  std::string term_label;
  std::string term_iri;  // empty when unresolved
  std::vector<TokenRef> tokens;

  bool operator==(const TermRow&) const = default;
};

struct TypeRow {
  int unit_id = 0;
  std::string surface;
  std::string type_tag;
  std::optional<int> domain_ref;
  std::optional<int> range_ref;
  /// Or may point at several operands; every other tag has at most one.
  std::vector<int> of_refs;
  std::vector<TokenRef> tokens;

  std::optional<int> of_ref() const { return of_refs.empty() ? std::nullopt : std::optional<int>(of_refs.front()); }
  bool operator==(const TypeRow&) const = default;
};

struct RoleRow {
  int unit_id = 0;
  std::string surface;
  std::string role_tag;
  std::optional<int> to_ref;
  std::vector<TokenRef> tokens;

  bool operator==(const RoleRow&) const = default;
};

struct LayerTables {
  std::vector<TermRow> terms;
  std::vector<TypeRow> types;
  std::vector<RoleRow> roles;
  std::vector<Diagnostic> warnings;  // UNRESOLVED_TERM

  const TypeRow* type(int unit_id) const {
    for (const auto& r : types)
      if (r.unit_id == unit_id) return &r;
    return nullptr;
  }
  const RoleRow* role(int unit_id) const {
    for (const auto& r : roles)
      if (r.unit_id == unit_id) return &r;
    return nullptr;
  }
};

/// One row per span. unit_ids run 1..n in order of first token, then layer,
/// tag and span id. Throws DuplicateArrow, MisplacedArrow or
/// LinguisticArrowRemaining.
inline LayerTables extract_layers(const AnnotatedDocument& doc, const vocab::TermVocabulary& terms) {
  std::vector<const SpanAnnotation*> order;
  for (const auto& s : doc.spans) order.push_back(&s);
  std::sort(order.begin(), order.end(), [](const SpanAnnotation* a, const SpanAnnotation* b) {
    return std::tuple(a->tokens.front(), a->layer, a->tag, a->span_id) <
           std::tuple(b->tokens.front(), b->layer, b->tag, b->span_id);
  });
  std::map<SpanKey, int> unit_of;
  for (std::size_t i = 0; i < order.size(); ++i) unit_of[order[i]->key()] = static_cast<int>(i + 1);

  LayerTables t;
  std::map<int, std::size_t> type_index, role_index;
  for (const SpanAnnotation* s : order) {
    int id = unit_of[s->key()];
    std::string surf = tsv::surface(doc, s->tokens);
    switch (s->layer) {
      case Layer::Term: {
        TermRow row{id, surf, s->tag, "", s->tokens};
        if (const auto* e = terms.find(s->tag)) {
          row.term_iri = e->iri;
        } else {
          t.warnings.push_back({Severity::Warning, "UNRESOLVED_TERM", id,
                                "term label '" + s->tag + "' is not in the term vocabulary"});
        }
        t.terms.push_back(std::move(row));
        break;
      }
      case Layer::SemType:
        type_index[id] = t.types.size();
        t.types.push_back({id, surf, s->tag, std::nullopt, std::nullopt, {}, s->tokens});
        break;
      case Layer::SemRole:
        role_index[id] = t.roles.size();
        t.roles.push_back({id, surf, s->tag, std::nullopt, s->tokens});
        break;
    }
  }

  for (const auto& r : doc.relations) {
    if (tsv::is_linguistic(r.arrow))
      throw PreprocessError("LinguisticArrowRemaining",
                            std::string(tsv::to_string(r.arrow)) + " arrow left; apply linguistic arrows first");
    auto src = unit_of.find(r.source), tgt = unit_of.find(r.target);
    if (src == unit_of.end() || tgt == unit_of.end())
      throw PreprocessError("DanglingReference", std::string(tsv::to_string(r.arrow)) + " arrow with a missing end");
    const std::string arrow(tsv::to_string(r.arrow));
    auto duplicate = [&] {
      return PreprocessError("DuplicateArrow", "unit " + std::to_string(src->second) + " has two " + arrow + " arrows");
    };
    bool semtype_arrow = r.arrow != Arrow::To;
    Layer wanted = semtype_arrow ? Layer::SemType : Layer::SemRole;
    if (r.source.layer != wanted || r.target.layer != wanted)
      throw PreprocessError("MisplacedArrow", arrow + " arrow must connect " + std::string(tsv::to_string(wanted)) +
                                                  " spans");
    if (!semtype_arrow) {
      auto& row = t.roles[role_index.at(src->second)];
      if (row.to_ref) throw duplicate();
      row.to_ref = tgt->second;
      continue;
    }
    auto& row = t.types[type_index.at(src->second)];
    if (r.arrow == Arrow::Domain) {
      if (row.domain_ref) throw duplicate();
      row.domain_ref = tgt->second;
    } else if (r.arrow == Arrow::Range) {
      if (row.range_ref) throw duplicate();
      row.range_ref = tgt->second;
    } else {
      if (!row.of_refs.empty() && row.type_tag != "Or") throw duplicate();
      row.of_refs.push_back(tgt->second);
    }
  }
  for (auto& row : t.types) std::sort(row.of_refs.begin(), row.of_refs.end());
  return t;
}

}  // namespace regowl::pre
