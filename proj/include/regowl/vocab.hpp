#pragma once

// Phrase maps for numbers (Card) and comparisons (Constr), plus the term
// vocabulary that maps Term-layer labels to imported IRIs.

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>

#include "regowl/error.hpp"
#include "regowl/owl_model.hpp"
#include "regowl/text.hpp"

namespace regowl::vocab {

class UnmappedCardPhrase : public Error {
 public:
  explicit UnmappedCardPhrase(const std::string& phrase)
      : Error("UnmappedCardPhrase", "no cardinality for '" + phrase + "'") {}
};

class UnmappedConstrPhrase : public Error {
 public:
  explicit UnmappedConstrPhrase(const std::string& phrase)
      : Error("UnmappedConstrPhrase", "no comparison for '" + phrase + "'") {}
};

class VocabError : public Error {
 public:
  explicit VocabError(const std::string& message) : Error("VocabError", message) {}
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("IoError", "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace detail {

// Calls fn(line_no, fields) for each non-blank, non-comment line.
template <typename Fn>
void for_each_record(std::string_view content, Fn&& fn) {
  int line_no = 0;
  for (auto line : text::lines(content)) {
    ++line_no;
    auto trimmed = text::trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    std::vector<std::string_view> fields;
    for (auto f : text::split(line, '\t')) fields.push_back(text::trim(f));
    fn(line_no, fields);
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Card

inline constexpr std::string_view kDefaultCardMap =
    "# phrase\tinteger\n"
    "one\t1\n"
    "two\t2\n"
    "three\t3\n"
    "four\t4\n"
    "five\t5\n"
    "six\t6\n"
    "seven\t7\n"
    "eight\t8\n"
    "nine\t9\n"
    "ten\t10\n"
    "eleven\t11\n"
    "twelve\t12\n"
    "thirteen\t13\n"
    "fourteen\t14\n"
    "fifteen\t15\n"
    "sixteen\t16\n"
    "seventeen\t17\n"
    "eighteen\t18\n"
    "nineteen\t19\n"
    "twenty\t20\n";

class CardMap {
 public:
  CardMap() = default;

  static CardMap parse(std::string_view content) {
    CardMap m;
    detail::for_each_record(content, [&](int line_no, const std::vector<std::string_view>& f) {
      auto value = f.size() == 2 ? text::parse_int<std::uint32_t>(f[1]) : std::nullopt;
      if (!value) throw VocabError("card map line " + std::to_string(line_no) + ": expected 'phrase<TAB>integer'");
      m.add(f[0], *value);
    });
    return m;
  }

  static CardMap load(const std::string& path) { return parse(read_file(path)); }
  static CardMap defaults() { return parse(kDefaultCardMap); }

  void add(std::string_view phrase, std::uint32_t value) {
    std::string key = text::normalize_phrase(phrase);
    if (key.empty()) throw VocabError("empty card phrase");
    if (!entries_.emplace(key, value).second) throw VocabError("duplicate card phrase '" + key + "'");
  }

  std::optional<std::uint32_t> find(std::string_view phrase) const {
    std::string key = text::normalize_phrase(phrase);
    if (auto it = entries_.find(key); it != entries_.end()) return it->second;
    return text::parse_int<std::uint32_t>(key);
  }

  /// Mapped value, or the phrase itself read as a decimal natural number.
  std::uint32_t lookup(std::string_view phrase) const {
    if (auto v = find(phrase)) return *v;
    throw UnmappedCardPhrase(std::string(phrase));
  }

  std::string serialize() const {
    std::string out = "# phrase\tinteger\n";
    for (const auto& [k, v] : entries_) out += k + "\t" + std::to_string(v) + "\n";
    return out;
  }

  const std::map<std::string, std::uint32_t>& entries() const { return entries_; }

 private:
  std::map<std::string, std::uint32_t> entries_;
};

inline std::uint32_t card_lookup(const CardMap& map, std::string_view phrase) { return map.lookup(phrase); }

// ---------------------------------------------------------------------------
// Constr

inline constexpr std::string_view kDefaultConstrMap =
    "# phrase\tfacet\n"
    "at least\tMinInclusive\n"
    "not less than\tMinInclusive\n"
    "no less than\tMinInclusive\n"
    "more than\tMinExclusive\n"
    "greater than\tMinExclusive\n"
    "at most\tMaxInclusive\n"
    "not more than\tMaxInclusive\n"
    "no more than\tMaxInclusive\n"
    "not exceeding\tMaxInclusive\n"
    "less than\tMaxExclusive\n"
    "fewer than\tMaxExclusive\n"
    "exactly\tExact\n"
    "equal to\tExact\n";

class ConstrMap {
 public:
  ConstrMap() = default;

  static ConstrMap parse(std::string_view content) {
    ConstrMap m;
    detail::for_each_record(content, [&](int line_no, const std::vector<std::string_view>& f) {
      auto facet = f.size() == 2 ? owl::facet_from_string(f[1]) : std::nullopt;
      if (!facet) throw VocabError("constr map line " + std::to_string(line_no) + ": expected 'phrase<TAB>facet'");
      m.add(f[0], *facet);
    });
    return m;
  }

  static ConstrMap load(const std::string& path) { return parse(read_file(path)); }
  static ConstrMap defaults() { return parse(kDefaultConstrMap); }

  void add(std::string_view phrase, owl::Facet facet) {
    std::string key = text::normalize_phrase(phrase);
    if (key.empty()) throw VocabError("empty constr phrase");
    if (!entries_.emplace(key, facet).second) throw VocabError("duplicate constr phrase '" + key + "'");
  }

  std::optional<owl::Facet> find(std::string_view phrase) const {
    auto it = entries_.find(text::normalize_phrase(phrase));
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  owl::Facet lookup(std::string_view phrase) const {
    if (auto f = find(phrase)) return *f;
    throw UnmappedConstrPhrase(std::string(phrase));
  }

  /// Longest entry that is a whole-word prefix of `phrase`, with the
  /// remainder. Used for Number phrases such as "at least two".
  std::optional<std::pair<owl::Facet, std::string>> match_prefix(std::string_view phrase) const {
    std::string norm = text::normalize_phrase(phrase);
    std::optional<std::pair<owl::Facet, std::string>> best;
    std::size_t best_len = 0;
    for (const auto& [k, f] : entries_) {
      if (k.size() <= best_len || !text::starts_with(norm, k)) continue;
      if (norm.size() > k.size() && norm[k.size()] != ' ') continue;
      best_len = k.size();
      best = std::pair(f, std::string(text::trim(std::string_view(norm).substr(k.size()))));
    }
    return best;
  }

  std::string serialize() const {
    std::string out = "# phrase\tfacet\n";
    for (const auto& [k, f] : entries_) out += k + "\t" + std::string(owl::to_string(f)) + "\n";
    return out;
  }

  const std::map<std::string, owl::Facet>& entries() const { return entries_; }

 private:
  std::map<std::string, owl::Facet> entries_;
};

inline owl::Facet constr_lookup(const ConstrMap& map, std::string_view phrase) { return map.lookup(phrase); }

struct NumberSpec {
  owl::CardinalityMode mode = owl::CardinalityMode::Exact;
  std::uint32_t n = 0;

  bool operator==(const NumberSpec&) const = default;
};

/// Resolves a Number unit's phrase: an optional comparison prefix picks the
/// cardinality flavour, the rest goes through Card. Strict bounds shift n.
inline NumberSpec number_lookup(const CardMap& card, const ConstrMap& constr, std::string_view phrase) {
  auto prefix = constr.match_prefix(phrase);
  if (!prefix) return {owl::CardinalityMode::Exact, card.lookup(phrase)};
  std::uint32_t n = card.lookup(prefix->second);
  switch (prefix->first) {
    case owl::Facet::MinInclusive: return {owl::CardinalityMode::Min, n};
    case owl::Facet::MinExclusive: return {owl::CardinalityMode::Min, n + 1};
    case owl::Facet::MaxInclusive: return {owl::CardinalityMode::Max, n};
    case owl::Facet::MaxExclusive:
      if (n == 0) throw UnmappedCardPhrase(std::string(phrase) + " (no natural number below 0)");
      return {owl::CardinalityMode::Max, n - 1};
    case owl::Facet::Exact: return {owl::CardinalityMode::Exact, n};
  }
  return {owl::CardinalityMode::Exact, n};
}

// ---------------------------------------------------------------------------
// Term vocabulary

enum class TermKind { Unspecified, Class, ObjectProperty, DataProperty };

inline std::string_view to_string(TermKind k) {
  switch (k) {
    case TermKind::Unspecified: return "";
    case TermKind::Class: return "class";
    case TermKind::ObjectProperty: return "object";
    case TermKind::DataProperty: return "data";
  }
  return "";
}

struct TermEntry {
  std::string label;
  std::string iri;
  TermKind kind = TermKind::Unspecified;

  bool operator==(const TermEntry&) const = default;
};

inline constexpr std::string_view kDefaultTerms =
    "# label\tiri\tkind\n"
    "BEAM\thttps://example.org/ifc#IfcBeam\tclass\n"
    "BUILDING\thttps://example.org/ifc#IfcBuilding\tclass\n"
    "COLUMN\thttps://example.org/ifc#IfcColumn\tclass\n"
    "SPACE\thttps://example.org/ifc#IfcSpace\tclass\n"
    "WALL\thttps://example.org/ifc#IfcWall\tclass\n"
    "FIRESAFETY\thttps://example.org/ifc#FIRESAFETY\tdata\n"
    "FIREPROTECTION\thttps://example.org/ifc#FIREPROTECTION\tdata\n";

class TermVocabulary {
 public:
  TermVocabulary() = default;

  static TermVocabulary parse(std::string_view content) {
    TermVocabulary v;
    detail::for_each_record(content, [&](int line_no, const std::vector<std::string_view>& f) {
      auto where = "terms line " + std::to_string(line_no);
      if (f.size() < 2 || f.size() > 3 || f[0].empty() || f[1].empty())
        throw VocabError(where + ": expected 'LABEL<TAB>IRI[<TAB>kind]'");
      TermEntry e{std::string(f[0]), std::string(f[1]), TermKind::Unspecified};
      if (f.size() == 3) {
        std::string k = text::to_lower(f[2]);
        if (k == "class") e.kind = TermKind::Class;
        else if (k == "object") e.kind = TermKind::ObjectProperty;
        else if (k == "data") e.kind = TermKind::DataProperty;
        else if (!k.empty()) throw VocabError(where + ": unknown kind '" + k + "'");
      }
      if (!v.entries_.emplace(e.label, e).second) throw VocabError(where + ": duplicate label " + e.label);
    });
    return v;
  }

  static TermVocabulary load(const std::string& path) { return parse(read_file(path)); }
  static TermVocabulary defaults() { return parse(kDefaultTerms); }

  /// Exact label match first, then case-insensitive.
  const TermEntry* find(std::string_view label) const {
    if (auto it = entries_.find(std::string(label)); it != entries_.end()) return &it->second;
    std::string lowered = text::to_lower(label);
    for (const auto& [k, e] : entries_)
      if (text::to_lower(k) == lowered) return &e;
    return nullptr;
  }

  const std::map<std::string, TermEntry>& entries() const { return entries_; }

 private:
  std::map<std::string, TermEntry> entries_;
};

}  // namespace regowl::vocab
