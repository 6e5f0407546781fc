#pragma once

// Reader for the WebAnno TSV 3.3 subset produced by the annotation schema:
// three span layers (terms, semantic types, semantic roles) and one relation
// layer per span layer.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "regowl/error.hpp"
#include "regowl/text.hpp"

namespace regowl::tsv {

class TsvError : public Error {
 public:
  TsvError(std::string code, const std::string& message) : Error(std::move(code), message) {}
};

inline TsvError missing_header(const std::string& m) { return {"MissingHeader", m}; }
inline TsvError unknown_layer(const std::string& m) { return {"UnknownLayer", m}; }
inline TsvError dangling_reference(const std::string& m) { return {"DanglingReference", m}; }
inline TsvError index_gap(const std::string& m) { return {"IndexGap", m}; }
inline TsvError bad_cell(const std::string& m) { return {"BadCell", m}; }

enum class Layer { Term, SemType, SemRole };

inline std::string_view to_string(Layer l) {
  switch (l) {
    case Layer::Term: return "TERM";
    case Layer::SemType: return "SEMTYPE";
    case Layer::SemRole: return "SEMROLE";
  }
  return "TERM";
}

enum class Arrow { Domain, Range, Of, To, Concatenation, Distribution, SelfDistribution };

inline std::string_view to_string(Arrow a) {
  switch (a) {
    case Arrow::Domain: return "Domain";
    case Arrow::Range: return "Range";
    case Arrow::Of: return "Of";
    case Arrow::To: return "To";
    case Arrow::Concatenation: return "Concatenation";
    case Arrow::Distribution: return "Distribution";
    case Arrow::SelfDistribution: return "SelfDistribution";
  }
  return "Domain";
}

inline std::optional<Arrow> arrow_from_string(std::string_view s) {
  for (Arrow a : {Arrow::Domain, Arrow::Range, Arrow::Of, Arrow::To, Arrow::Concatenation, Arrow::Distribution,
                  Arrow::SelfDistribution})
    if (s == to_string(a)) return a;
  if (s == "Self-Distribution" || s == "Selfdistribution") return Arrow::SelfDistribution;
  return std::nullopt;
}

inline bool is_linguistic(Arrow a) {
  return a == Arrow::Concatenation || a == Arrow::Distribution || a == Arrow::SelfDistribution;
}

/// Semantic arrows each layer may carry; linguistic arrows are allowed everywhere.
inline bool arrow_allowed(Layer layer, Arrow a) {
  if (is_linguistic(a)) return true;
  if (layer == Layer::SemType) return a == Arrow::Domain || a == Arrow::Range || a == Arrow::Of;
  if (layer == Layer::SemRole) return a == Arrow::To;
  return false;
}

inline const std::vector<std::string>& semtype_tags() {
  static const std::vector<std::string> tags = {"Literal", "Class",   "Not",  "Or",     "Relation",
                                                "Property", "Some", "Only", "Number", "Comparison"};
  return tags;
}

inline const std::vector<std::string>& semrole_tags() {
  static const std::vector<std::string> tags = {"Subject", "Requirement"};
  return tags;
}

struct TokenRef {
  int sentence = 0;
  int token = 0;

  auto operator<=>(const TokenRef&) const = default;
};

inline std::string to_string(TokenRef r) { return std::to_string(r.sentence) + "-" + std::to_string(r.token); }

struct Token {
  int sentence_index = 0;
  int token_index = 0;
  std::size_t char_start = 0;
  std::size_t char_end = 0;
  std::string text;

  TokenRef ref() const { return {sentence_index, token_index}; }
  bool operator==(const Token&) const = default;
};

struct SpanKey {
  Layer layer = Layer::Term;
  int span_id = 0;

  auto operator<=>(const SpanKey&) const = default;
};

struct SpanAnnotation {
  Layer layer = Layer::Term;
  std::string tag;
  int span_id = 0;
  std::vector<TokenRef> tokens;

  SpanKey key() const { return {layer, span_id}; }
  bool operator==(const SpanAnnotation&) const = default;
};

struct RelationAnnotation {
  Arrow arrow = Arrow::Domain;
  SpanKey source;
  SpanKey target;

  auto operator<=>(const RelationAnnotation&) const = default;
};

struct AnnotatedDocument {
  std::string source_text;
  std::vector<Token> tokens;
  std::vector<SpanAnnotation> spans;
  std::vector<RelationAnnotation> relations;

  const SpanAnnotation* find_span(SpanKey k) const {
    for (const auto& s : spans)
      if (s.key() == k) return &s;
    return nullptr;
  }

  const Token* find_token(TokenRef r) const {
    auto it = std::lower_bound(tokens.begin(), tokens.end(), r,
                               [](const Token& t, TokenRef x) { return t.ref() < x; });
    return it != tokens.end() && it->ref() == r ? &*it : nullptr;
  }

  std::size_t count(Layer layer) const {
    return static_cast<std::size_t>(std::count_if(spans.begin(), spans.end(), [&](auto& s) { return s.layer == layer; }));
  }

  std::size_t count(Arrow arrow) const {
    return static_cast<std::size_t>(
        std::count_if(relations.begin(), relations.end(), [&](auto& r) { return r.arrow == arrow; }));
  }

  bool operator==(const AnnotatedDocument&) const = default;
};

/// Space-joined token texts of a span.
inline std::string surface(const AnnotatedDocument& doc, const std::vector<TokenRef>& refs) {
  std::vector<std::string> words;
  for (auto r : refs)
    if (const Token* t = doc.find_token(r)) words.push_back(t->text);
  return text::join(words, " ");
}

namespace detail {

inline std::optional<Layer> layer_from_name(std::string_view qualified) {
  auto dot = qualified.find_last_of('.');
  std::string name = text::to_lower(dot == std::string_view::npos ? qualified : qualified.substr(dot + 1));
  if (name == "term" || name == "terms") return Layer::Term;
  if (name == "semantictype" || name == "semantictypes") return Layer::SemType;
  if (name == "semanticrole" || name == "semanticroles") return Layer::SemRole;
  return std::nullopt;
}

inline std::optional<int> parse_positive(std::string_view s) {
  auto v = text::parse_int<int>(s);
  if (!v || *v <= 0 || s.front() == '+') return std::nullopt;
  return v;
}

inline TokenRef parse_address(std::string_view s, std::string_view what) {
  auto dash = s.find('-');
  if (dash == std::string_view::npos) throw bad_cell(std::string(what) + " '" + std::string(s) + "' is not sent-tok");
  auto tok_part = s.substr(dash + 1);
  if (tok_part.find('.') != std::string_view::npos)
    throw bad_cell("sub-token address '" + std::string(s) + "' is not supported");
  auto sent = parse_positive(s.substr(0, dash));
  auto tok = parse_positive(tok_part);
  if (!sent || !tok) throw bad_cell(std::string(what) + " '" + std::string(s) + "' is not sent-tok");
  return {*sent, *tok};
}

struct CellItem {
  std::string tag;
  int id = 0;  // 0 = no disambiguation id
};

inline std::vector<CellItem> parse_span_cell(std::string_view cell) {
  std::vector<CellItem> out;
  if (cell == "_") return out;
  for (auto item : text::split(cell, '|')) {
    CellItem ci;
    auto open = item.find('[');
    std::string_view tag = item;
    if (open != std::string_view::npos) {
      if (item.back() != ']') throw bad_cell("malformed span cell '" + std::string(cell) + "'");
      auto id = parse_positive(item.substr(open + 1, item.size() - open - 2));
      if (!id) throw bad_cell("malformed span id in '" + std::string(cell) + "'");
      ci.id = *id;
      tag = item.substr(0, open);
    }
    bool ok = !tag.empty() && tag != "_" && tag != "*" &&
              std::none_of(tag.begin(), tag.end(), [](char c) { return c == '[' || c == ']' || c == '\t'; });
    if (!ok) throw bad_cell("malformed span cell '" + std::string(cell) + "'");
    ci.tag = std::string(tag);
    out.push_back(std::move(ci));
  }
  return out;
}

struct PendingRelation {
  Arrow arrow;
  Layer layer;
  TokenRef source_token;
  int source_id;
  TokenRef target_token;
  int target_id;
};

}  // namespace detail

/// Parses a TSV export. Throws TsvError with one of the codes MissingHeader,
/// UnknownLayer, DanglingReference, IndexGap or BadCell.
inline AnnotatedDocument parse_tsv(std::string_view input) {
  using namespace detail;
  auto all_lines = text::lines(input);
  std::size_t i = 0;
  while (i < all_lines.size() && text::trim(all_lines[i]).empty()) ++i;
  if (i == all_lines.size() || text::trim(all_lines[i]) != "#FORMAT=WebAnno TSV 3.3")
    throw missing_header("first line must be '#FORMAT=WebAnno TSV 3.3'");
  ++i;

  // Column plan following the three fixed columns.
  std::vector<Layer> span_columns;
  std::vector<Layer> relation_layers;  // each owns two columns: arrow, BT
  std::set<Layer> seen_span, seen_relation;
  for (; i < all_lines.size(); ++i) {
    auto line = text::trim(all_lines[i]);
    if (line.empty()) continue;
    if (text::starts_with(line, "#T_SP=")) {
      auto parts = text::split(line.substr(6), '|');
      auto layer = layer_from_name(parts[0]);
      if (!layer) throw unknown_layer("span layer '" + std::string(parts[0]) + "'");
      if (parts.size() != 2) throw unknown_layer("span layer '" + std::string(parts[0]) + "' must have one feature");
      if (!seen_span.insert(*layer).second) throw unknown_layer("span layer declared twice: " + std::string(parts[0]));
      span_columns.push_back(*layer);
    } else if (text::starts_with(line, "#T_RL=")) {
      auto parts = text::split(line.substr(6), '|');
      if (parts.size() != 3 || !text::starts_with(parts[2], "BT_"))
        throw unknown_layer("relation layer '" + std::string(parts[0]) + "' must be 'name|feature|BT_layer'");
      auto layer = layer_from_name(parts[2].substr(3));
      if (!layer || !seen_span.count(*layer))
        throw unknown_layer("relation layer '" + std::string(parts[0]) + "' attaches to unknown layer");
      if (!seen_relation.insert(*layer).second)
        throw unknown_layer("second relation layer over " + std::string(to_string(*layer)));
      relation_layers.push_back(*layer);
    } else if (text::starts_with(line, "#T_CH=")) {
      throw unknown_layer("chain layers are not supported");
    } else if (text::starts_with(line, "#T_")) {
      throw unknown_layer("unknown layer declaration '" + std::string(line) + "'");
    } else {
      break;
    }
  }
  const std::size_t expected_columns = 3 + span_columns.size() + 2 * relation_layers.size();

  AnnotatedDocument doc;
  std::vector<std::pair<std::size_t, std::string>> sentence_texts;  // (offset, text)
  std::optional<std::string> pending_text;
  int current_sentence = 0;
  int last_token = 0;

  // Span cells collected per layer: (id, tag) -> tokens; id-less spans keyed per token.
  struct Collected {
    std::map<int, std::pair<std::string, std::vector<TokenRef>>> with_id;
    std::vector<std::pair<std::string, TokenRef>> without_id;
  };
  std::map<Layer, Collected> collected;
  std::vector<PendingRelation> pending;

  for (; i < all_lines.size(); ++i) {
    auto raw = all_lines[i];
    if (text::trim(raw).empty()) continue;
    if (text::starts_with(raw, "#Text=")) {
      pending_text = std::string(raw.substr(6));
      continue;
    }
    if (raw.front() == '#') {
      if (text::starts_with(raw, "#T_")) throw unknown_layer("layer declaration after the header block");
      continue;
    }
    auto cols = text::split(raw, '\t');
    // WebAnno rows end with a trailing tab.
    if (cols.size() == expected_columns + 1 && cols.back().empty()) cols.pop_back();
    if (cols.size() != expected_columns)
      throw bad_cell("row '" + std::string(raw) + "' has " + std::to_string(cols.size()) + " columns, expected " +
                     std::to_string(expected_columns));

    TokenRef ref = parse_address(cols[0], "token index");
    if (ref.sentence != current_sentence) {
      if (ref.sentence != current_sentence + 1)
        throw index_gap("sentence " + std::to_string(ref.sentence) + " follows sentence " +
                        std::to_string(current_sentence));
      current_sentence = ref.sentence;
      last_token = 0;
    }
    if (ref.token != last_token + 1)
      throw index_gap("token " + to_string(ref) + " follows token " + std::to_string(last_token));
    last_token = ref.token;

    auto dash = cols[1].find('-');
    auto start = dash == std::string_view::npos ? std::nullopt : text::parse_int<std::size_t>(cols[1].substr(0, dash));
    auto end = dash == std::string_view::npos ? std::nullopt : text::parse_int<std::size_t>(cols[1].substr(dash + 1));
    if (!start || !end || *start >= *end) throw bad_cell("bad offsets '" + std::string(cols[1]) + "'");
    if (!doc.tokens.empty() && *start < doc.tokens.back().char_end)
      throw bad_cell("token " + to_string(ref) + " overlaps the previous token");
    if (cols[2].empty()) throw bad_cell("empty token text at " + to_string(ref));
    doc.tokens.push_back({ref.sentence, ref.token, *start, *end, std::string(cols[2])});
    if (ref.token == 1) {
      sentence_texts.emplace_back(*start, pending_text.value_or(""));
      pending_text.reset();
    }

    std::size_t c = 3;
    for (Layer layer : span_columns) {
      auto& col = collected[layer];
      std::set<std::pair<std::string, int>> on_token;
      for (auto& item : parse_span_cell(cols[c++])) {
        const auto& inventory = layer == Layer::SemType ? semtype_tags() : semrole_tags();
        if (layer != Layer::Term && std::find(inventory.begin(), inventory.end(), item.tag) == inventory.end())
          throw bad_cell("tag '" + item.tag + "' is not in the " + std::string(to_string(layer)) + " inventory");
        if (!on_token.insert({item.tag, item.id}).second)
          throw bad_cell("span " + item.tag + " repeated on token " + to_string(ref));
        if (item.id == 0) {
          col.without_id.emplace_back(item.tag, ref);
          continue;
        }
        auto& entry = col.with_id[item.id];
        if (entry.second.empty()) entry.first = item.tag;
        if (entry.first != item.tag)
          throw bad_cell("span id " + std::to_string(item.id) + " carries tags " + entry.first + " and " + item.tag);
        entry.second.push_back(ref);
      }
    }
    for (Layer layer : relation_layers) {
      auto arrows_cell = cols[c++];
      auto bt_cell = cols[c++];
      if (arrows_cell == "_" && bt_cell == "_") continue;
      auto arrows = text::split(arrows_cell, '|');
      auto bts = text::split(bt_cell, '|');
      if (arrows.size() != bts.size())
        throw bad_cell("relation cells '" + std::string(arrows_cell) + "' and '" + std::string(bt_cell) +
                       "' differ in length");
      for (std::size_t k = 0; k < arrows.size(); ++k) {
        auto arrow = arrow_from_string(arrows[k]);
        if (!arrow) throw bad_cell("unknown arrow '" + std::string(arrows[k]) + "'");
        if (!arrow_allowed(layer, *arrow))
          throw bad_cell(std::string(to_string(*arrow)) + " arrow is not allowed on the " +
                         std::string(to_string(layer)) + " layer");
        auto bt = bts[k];
        int src_id = 0, tgt_id = 0;
        auto open = bt.find('[');
        std::string_view addr = bt;
        if (open != std::string_view::npos) {
          if (bt.back() != ']') throw bad_cell("malformed relation source '" + std::string(bt) + "'");
          auto ids = bt.substr(open + 1, bt.size() - open - 2);
          auto us = ids.find('_');
          auto a = us == std::string_view::npos ? std::nullopt : text::parse_int<int>(ids.substr(0, us));
          auto b = us == std::string_view::npos ? std::nullopt : text::parse_int<int>(ids.substr(us + 1));
          if (!a || !b || *a < 0 || *b < 0) throw bad_cell("malformed relation ids '" + std::string(bt) + "'");
          src_id = *a;
          tgt_id = *b;
          addr = bt.substr(0, open);
        }
        pending.push_back({*arrow, layer, parse_address(addr, "relation source"), src_id, ref, tgt_id});
      }
    }
  }

  // Assemble spans. Explicit ids first, then synthetic ids for id-less ones.
  int next_id = 1;
  for (auto& [layer, col] : collected)
    for (auto& [id, entry] : col.with_id) next_id = std::max(next_id, id + 1);

  std::map<std::pair<Layer, TokenRef>, std::vector<int>> idless_at;  // id-less spans per token
  auto token_pos = [&](TokenRef r) {
    return std::lower_bound(doc.tokens.begin(), doc.tokens.end(), r,
                            [](const Token& t, TokenRef x) { return t.ref() < x; }) -
           doc.tokens.begin();
  };
  for (Layer layer : span_columns) {
    auto& col = collected[layer];
    std::set<std::pair<std::string, TokenRef>> covered;
    for (auto& [id, entry] : col.with_id) {
      auto& [tag, refs] = entry;
      for (std::size_t k = 1; k < refs.size(); ++k)
        if (token_pos(refs[k]) != token_pos(refs[k - 1]) + 1)
          throw bad_cell("span " + tag + "[" + std::to_string(id) + "] is not contiguous");
      for (auto r : refs)
        if (!covered.insert({tag, r}).second)
          throw bad_cell("overlapping " + tag + " spans on token " + to_string(r));
      doc.spans.push_back({layer, tag, id, refs});
    }
    for (auto& [tag, r] : col.without_id) {
      if (!covered.insert({tag, r}).second) throw bad_cell("overlapping " + tag + " spans on token " + to_string(r));
      idless_at[{layer, r}].push_back(next_id);
      doc.spans.push_back({layer, tag, next_id++, {r}});
    }
  }

  auto resolve = [&](Layer layer, TokenRef at, int id, std::string_view role) -> SpanKey {
    if (id != 0) {
      const SpanAnnotation* s = doc.find_span({layer, id});
      if (!s) throw dangling_reference(std::string(role) + " span id " + std::to_string(id) + " not found in " +
                                       std::string(to_string(layer)));
      if (std::find(s->tokens.begin(), s->tokens.end(), at) == s->tokens.end())
        throw dangling_reference(std::string(role) + " span id " + std::to_string(id) + " does not cover token " +
                                 to_string(at));
      return s->key();
    }
    auto it = idless_at.find({layer, at});
    if (it == idless_at.end())
      throw dangling_reference(std::string(role) + " at " + to_string(at) + " names no single-token span");
    if (it->second.size() != 1)
      throw bad_cell(std::string(role) + " at " + to_string(at) + " is ambiguous between stacked spans");
    return {layer, it->second.front()};
  };

  std::set<RelationAnnotation> seen;
  for (const auto& p : pending) {
    RelationAnnotation rel{p.arrow, resolve(p.layer, p.source_token, p.source_id, "source"),
                           resolve(p.layer, p.target_token, p.target_id, "target")};
    if (seen.insert(rel).second) doc.relations.push_back(rel);
  }

  std::sort(doc.spans.begin(), doc.spans.end(), [](const SpanAnnotation& a, const SpanAnnotation& b) {
    return std::tuple(a.layer, a.tokens.front(), a.span_id) < std::tuple(b.layer, b.tokens.front(), b.span_id);
  });

  // Rebuild the document text: each #Text line sits at its first token's
  // offset; without #Text the tokens themselves are placed.
  for (auto& [offset, sentence] : sentence_texts) {
    if (doc.source_text.size() < offset) doc.source_text.append(offset - doc.source_text.size(), '\n');
    if (doc.source_text.size() == offset) doc.source_text += sentence;
  }
  for (const auto& t : doc.tokens) {
    if (doc.source_text.size() < t.char_end) {
      if (doc.source_text.size() < t.char_start) doc.source_text.append(t.char_start - doc.source_text.size(), ' ');
      if (doc.source_text.size() == t.char_start) doc.source_text += t.text;
    }
    if (doc.source_text.compare(t.char_start, t.char_end - t.char_start, t.text) != 0 ||
        t.char_end - t.char_start != t.text.size())
      throw bad_cell("offsets " + std::to_string(t.char_start) + "-" + std::to_string(t.char_end) +
                     " do not match token '" + t.text + "'");
  }
  return doc;
}

}  // namespace regowl::tsv
