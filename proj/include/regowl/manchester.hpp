#pragma once

// Manchester syntax for the generated OWL fragment: a deterministic emitter
// and a parser for the same subset (plus the hand-written individual frames
// used as compliance data).

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "regowl/error.hpp"
#include "regowl/owl_model.hpp"
#include "regowl/text.hpp"

namespace regowl::manchester {

using owl::Axiom;
using owl::AxiomKind;
using owl::ClassExpression;
using owl::DataRange;
using owl::Entity;
using owl::EntityKind;
using owl::ExprKind;
using owl::Literal;
using owl::Ontology;

class SyntaxError : public Error {
 public:
  SyntaxError(int line, int column, const std::string& message)
      : Error("SyntaxError", std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_, column_;
};

class UnsupportedConstruct : public Error {
 public:
  explicit UnsupportedConstruct(const std::string& message) : Error("UnsupportedConstruct", message) {}
};

inline bool is_keyword(std::string_view w) {
  static const std::set<std::string_view> kw = {"and", "or",    "not",   "some", "only", "min",
                                                "max", "exactly", "value", "that", "inverse", "Self"};
  return kw.count(w) > 0;
}

inline bool is_name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
inline bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
}

/// Usable unquoted: starts with a letter or '_', has only name characters,
/// does not end in '.', and is not a reserved word.
inline bool is_bare_name(std::string_view s) {
  if (s.empty() || !is_name_start(s.front()) || s.back() == '.' || is_keyword(s)) return false;
  return std::all_of(s.begin(), s.end(), is_name_char);
}

inline std::string escape_string(std::string_view s) { return text::escape_quoted(s, '"'); }

inline std::string xsd_name(owl::Datatype d) { return "xsd:" + std::string(owl::to_string(d)); }

inline std::string literal_text(const Literal& l) {
  switch (l.datatype) {
    case owl::Datatype::Integer: return l.lexical;
    case owl::Datatype::Float: return l.lexical + "f";
    case owl::Datatype::String: break;
  }
  return "\"" + escape_string(l.lexical) + "\"^^xsd:string";
}

// ---------------------------------------------------------------------------
// Emission

struct StandardPrefix {
  const char* name;
  std::string_view ns;
};

inline const std::vector<StandardPrefix>& standard_prefixes() {
  static const std::vector<StandardPrefix> p = {
      {"owl", owl::kOwlNs}, {"rdf", owl::kRdfNs}, {"rdfs", owl::kRdfsNs}, {"xsd", owl::kXsdNs}};
  return p;
}

inline std::string default_namespace(std::string_view onto_iri) {
  if (onto_iri.empty()) return {};
  std::string ns(onto_iri);
  if (ns.back() != '#' && ns.back() != '/') ns += '#';
  return ns;
}

/// Renders IRIs as names. In display mode labels win wherever one exists.
class Namer {
 public:
  Namer(const Ontology& onto, bool display, const Ontology* context = nullptr) : display_(display) {
    default_ns_ = default_namespace(onto.iri);
    for (const auto& sp : standard_prefixes()) prefixes_.emplace_back(sp.name, std::string(sp.ns));
    std::set<std::string> used_names = {"owl", "rdf", "rdfs", "xsd"};
    auto add_entities = [&](const Ontology& o) {
      for (const auto& [iri, e] : o.entities) {
        if (!labels_.count(iri)) labels_[iri] = e.label;
        if (!e.label.empty()) label_count_[e.label]++;
      }
    };
    add_entities(onto);
    if (context) add_entities(*context);
    std::set<std::string> namespaces;
    for (const auto& [iri, e] : onto.entities) namespaces.insert(std::string(owl::namespace_of(iri)));
    for (const auto& a : onto.axioms) {
      owl::References refs;
      owl::collect_references(a, refs);
      for (const auto* set : {&refs.classes, &refs.object_properties, &refs.data_properties, &refs.individuals})
        for (const auto& iri : *set) namespaces.insert(std::string(owl::namespace_of(iri)));
    }
    for (const auto& ns : namespaces) {
      if (ns.empty() || ns == default_ns_ || known_namespace(ns)) continue;
      std::string stem = text::slug(owl::local_name(std::string_view(ns).substr(0, ns.size() - 1)));
      if (stem.empty() || !std::isalpha(static_cast<unsigned char>(stem[0]))) stem = "ns";
      std::string name = stem;
      for (int n = 2; used_names.count(name); ++n) name = stem + std::to_string(n);
      used_names.insert(name);
      prefixes_.emplace_back(name, ns);
    }
  }

  const std::string& default_ns() const { return default_ns_; }

  /// Declared prefixes other than the default one, in declaration order.
  std::vector<std::pair<std::string, std::string>> declared_prefixes() const {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& p : prefixes_) out.push_back(p);
    return out;
  }

  /// Name for use as a frame header: never a label.
  std::string frame_name(const std::string& iri) const {
    if (auto n = iri_name(iri)) return *n;
    return "<" + iri + ">";
  }

  std::string ref(const std::string& iri) const {
    if (iri == owl::kThing) return "owl:Thing";
    if (iri == owl::kNothing) return "owl:Nothing";
    auto lab = labels_.find(iri);
    const std::string* label = lab == labels_.end() || lab->second.empty() ? nullptr : &lab->second;
    if (display_ && label) return is_bare_name(*label) ? *label : quoted(*label);
    if (label && !is_bare_name(*label) && label_count_.at(*label) == 1 && quotable(*label)) return quoted(*label);
    if (auto n = iri_name(iri)) return *n;
    if (display_) return std::string(owl::local_name(iri));
    return "<" + iri + ">";
  }

 private:
  static bool quotable(const std::string& s) {
    return std::none_of(s.begin(), s.end(), [](char c) { return c == '\'' || c == '\n' || c == '\r' || c == '\\'; });
  }
  static std::string quoted(const std::string& s) { return "'" + s + "'"; }

  bool known_namespace(const std::string& ns) const {
    return std::any_of(prefixes_.begin(), prefixes_.end(), [&](const auto& p) { return p.second == ns; });
  }

  std::optional<std::string> iri_name(const std::string& iri) const {
    std::string_view ns = owl::namespace_of(iri);
    std::string_view local = owl::local_name(iri);
    if (!default_ns_.empty() && ns == default_ns_ && is_bare_name(local)) return std::string(local);
    for (const auto& [name, pns] : prefixes_)
      if (ns == pns && !local.empty() && std::all_of(local.begin(), local.end(), is_name_char) && local.back() != '.')
        return name + ":" + std::string(local);
    return std::nullopt;
  }

  bool display_;
  std::string default_ns_;
  std::vector<std::pair<std::string, std::string>> prefixes_;
  std::map<std::string, std::string> labels_;
  std::map<std::string, int> label_count_;
};

inline std::string render(const DataRange& r) {
  std::string out;
  if (r.kind == DataRange::Kind::Enumeration) {
    out = "{";
    for (std::size_t i = 0; i < r.values.size(); ++i) out += (i ? ", " : "") + literal_text(r.values[i]);
    return out + "}";
  }
  out = xsd_name(r.base) + "[";
  for (std::size_t i = 0; i < r.facets.size(); ++i)
    out += (i ? ", " : "") + std::string(owl::facet_symbol(r.facets[i].first)) + " " + literal_text(r.facets[i].second);
  return out + "]";
}

inline std::string render(const ClassExpression& e, const Namer& names);

namespace detail {

inline std::string operand(const ClassExpression& e, const Namer& names) {
  if (e.kind == ExprKind::Named || e.kind == ExprKind::ObjectOneOf) return render(e, names);
  return "(" + render(e, names) + ")";
}

}  // namespace detail

inline std::string render(const ClassExpression& e, const Namer& names) {
  auto join_ops = [&](std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < e.operands.size(); ++i)
      out += (i ? std::string(sep) : "") + detail::operand(e.operands[i], names);
    return out;
  };
  switch (e.kind) {
    case ExprKind::Named: return names.ref(e.iri);
    case ExprKind::ComplementOf: return "not " + detail::operand(e.operands.at(0), names);
    case ExprKind::UnionOf: return join_ops(" or ");
    case ExprKind::IntersectionOf: return join_ops(" and ");
    case ExprKind::ObjectOneOf: {
      std::string out = "{";
      for (std::size_t i = 0; i < e.individuals.size(); ++i) out += (i ? ", " : "") + names.ref(e.individuals[i]);
      return out + "}";
    }
    case ExprKind::ObjectSome: return names.ref(e.iri) + " some " + detail::operand(e.operands.at(0), names);
    case ExprKind::ObjectOnly: return names.ref(e.iri) + " only " + detail::operand(e.operands.at(0), names);
    case ExprKind::ObjectCardinality:
      return names.ref(e.iri) + " " + std::string(owl::to_string(e.mode)) + " " + std::to_string(e.cardinality) +
             (e.operands.empty() ? "" : " " + detail::operand(e.operands[0], names));
    case ExprKind::DataSome: return names.ref(e.iri) + " some " + render(*e.range);
    case ExprKind::DataOnly: return names.ref(e.iri) + " only " + render(*e.range);
    case ExprKind::DataCardinality:
      return names.ref(e.iri) + " " + std::string(owl::to_string(e.mode)) + " " + std::to_string(e.cardinality) +
             (e.range ? " " + render(*e.range) : "");
  }
  return {};
}

/// Class expression with labels preferred, for reports.
inline std::string display(const ClassExpression& e, const Ontology& onto, const Ontology* context = nullptr) {
  return render(e, Namer(onto, true, context));
}

/// One-line, label-preferring rendering of an axiom, in the style of a
/// reasoner explanation.
inline std::string display(const Axiom& a, const Ontology& onto, const Ontology* context = nullptr) {
  Namer n(onto, true, context);
  auto list = [&](const std::vector<ClassExpression>& xs, std::size_t from) {
    std::string out;
    for (std::size_t i = from; i < xs.size(); ++i) out += (i > from ? ", " : "") + render(xs[i], n);
    return out;
  };
  switch (a.kind) {
    case AxiomKind::SubClassOf: return render(a.classes[0], n) + " SubClassOf " + render(a.classes[1], n);
    case AxiomKind::EquivalentClasses: return render(a.classes[0], n) + " EquivalentTo " + list(a.classes, 1);
    case AxiomKind::EquivalentProperties:
      return "EquivalentProperties: " + n.ref(a.properties[0]) + ", " + n.ref(a.properties[1]);
    case AxiomKind::ClassAssertion: return n.ref(a.individual) + " Type " + render(a.classes[0], n);
    case AxiomKind::ObjectFact: return n.ref(a.individual) + " " + n.ref(a.property) + " " + n.ref(a.object);
    case AxiomKind::DataFact: return n.ref(a.individual) + " " + n.ref(a.property) + " " + literal_text(a.value);
  }
  return {};
}

/// Deterministic Manchester text: prefixes, ontology header, then frames
/// grouped by kind and sorted by IRI. Axioms keep pipeline order inside
/// each frame section.
inline std::string to_manchester(const Ontology& onto) {
  Namer names(onto, false);
  std::string out;
  if (!names.default_ns().empty()) out += "Prefix: : <" + names.default_ns() + ">\n";
  for (const auto& [name, ns] : names.declared_prefixes()) out += "Prefix: " + name + ": <" + ns + ">\n";
  out += "\n";
  out += onto.iri.empty() ? "Ontology:\n" : "Ontology: <" + onto.iri + ">\n";

  struct Frame {
    std::vector<std::string> equivalent, subclass, types, facts;
  };
  std::map<std::string, Frame> frames;
  std::vector<std::string> misc;
  for (const auto& a : onto.axioms) {
    switch (a.kind) {
      case AxiomKind::SubClassOf:
        if (!a.classes[0].is_named() || a.classes[0].iri == owl::kThing || a.classes[0].iri == owl::kNothing)
          throw UnsupportedConstruct("SubClassOf with a complex left-hand side has no frame form");
        frames[a.classes[0].iri].subclass.push_back(render(a.classes[1], names));
        break;
      case AxiomKind::EquivalentClasses: {
        auto named = std::find_if(a.classes.begin(), a.classes.end(), [&](const ClassExpression& c) {
          return c.is_named() && onto.find(c.iri) && onto.find(c.iri)->kind == EntityKind::Class;
        });
        if (a.classes.size() == 2 && named != a.classes.end()) {
          const ClassExpression& other = a.classes[named == a.classes.begin() ? 1 : 0];
          frames[named->iri].equivalent.push_back(render(other, names));
        } else {
          std::string line = "EquivalentClasses: ";
          for (std::size_t i = 0; i < a.classes.size(); ++i) line += (i ? ", " : "") + render(a.classes[i], names);
          misc.push_back(line);
        }
        break;
      }
      case AxiomKind::EquivalentProperties:
        frames[a.properties[0]].equivalent.push_back(names.ref(a.properties[1]));
        break;
      case AxiomKind::ClassAssertion: frames[a.individual].types.push_back(render(a.classes[0], names)); break;
      case AxiomKind::ObjectFact: frames[a.individual].facts.push_back(names.ref(a.property) + " " + names.ref(a.object)); break;
      case AxiomKind::DataFact:
        frames[a.individual].facts.push_back(names.ref(a.property) + " " + literal_text(a.value));
        break;
    }
  }

  auto section = [&](const char* keyword, const std::vector<std::string>& items) {
    if (items.empty()) return;
    out += std::string("    ") + keyword + "\n";
    for (std::size_t i = 0; i < items.size(); ++i) out += "        " + items[i] + (i + 1 < items.size() ? ",\n" : "\n");
  };
  for (EntityKind kind : {EntityKind::ObjectProperty, EntityKind::DataProperty, EntityKind::Class,
                          EntityKind::NamedIndividual, EntityKind::Datatype}) {
    for (const auto& [iri, e] : onto.entities) {
      if (e.kind != kind) continue;
      out += "\n" + std::string(owl::to_string(kind)) + ": " + names.frame_name(iri) + "\n";
      if (!e.label.empty()) out += "    Annotations:\n        rdfs:label \"" + escape_string(e.label) + "\"\n";
      auto it = frames.find(iri);
      if (it == frames.end()) continue;
      section("EquivalentTo:", it->second.equivalent);
      section("SubClassOf:", it->second.subclass);
      section("Types:", it->second.types);
      section("Facts:", it->second.facts);
      frames.erase(it);
    }
  }
  if (!frames.empty())
    throw owl::ModelError("axiom about undeclared entity <" + frames.begin()->first + ">");
  for (const auto& line : misc) out += "\n" + line + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

enum class Tok { Keyword, Name, PName, Iri, Quoted, String, Number, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;       // keyword word, name, IRI body, string body, punctuation
  std::string datatype;   // String: "^^..." target or "@lang"
  int line = 1, column = 1;
};

inline std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  int line = 1, col = 1;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') ++line, col = 1;
      else ++col;
    }
  };
  auto fail = [&](const std::string& m) { throw SyntaxError(line, col, m); };
  auto at = [&](std::size_t k) { return k < src.size() ? src[k] : '\0'; };
  auto read_name = [&](std::size_t from) {
    std::size_t j = from;
    while (j < src.size() && is_name_char(src[j])) ++j;
    while (j > from && src[j - 1] == '.') --j;  // a trailing '.' is never part of a name
    return j;
  };

  while (i < src.size()) {
    char c = src[i];
    if (text::is_space(c)) {
      advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.column = col;
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (c == '<') {
      char n = at(i + 1);
      if (n == '=' || n == ' ' || n == '\t' || std::isdigit(static_cast<unsigned char>(n)) || n == '-' || n == '"' ||
          n == '+') {
        t.kind = Tok::Punct;
        t.text = n == '=' ? "<=" : "<";
        advance(t.text.size());
      } else {
        auto close = src.find('>', i);
        if (close == std::string_view::npos) fail("unterminated IRI");
        t.kind = Tok::Iri;
        t.text = std::string(src.substr(i + 1, close - i - 1));
        if (std::any_of(t.text.begin(), t.text.end(), text::is_space)) fail("whitespace inside IRI");
        advance(close - i + 1);
      }
    } else if (c == '>') {
      t.kind = Tok::Punct;
      t.text = at(i + 1) == '=' ? ">=" : ">";
      advance(t.text.size());
    } else if (c == '(' || c == ')' || c == '{' || c == '}' || c == '[' || c == ']' || c == ',' || c == '=') {
      t.kind = Tok::Punct;
      t.text = std::string(1, c);
      advance(1);
    } else if (c == '\'') {
      auto close = src.find('\'', i + 1);
      if (close == std::string_view::npos) fail("unterminated quoted name");
      t.kind = Tok::Quoted;
      t.text = std::string(src.substr(i + 1, close - i - 1));
      advance(close - i + 1);
    } else if (c == '"') {
      std::string body;
      std::size_t j = i + 1;
      for (; j < src.size() && src[j] != '"'; ++j) {
        if (src[j] == '\\' && j + 1 < src.size()) ++j;
        body.push_back(src[j]);
      }
      if (j >= src.size()) fail("unterminated string");
      advance(j - i + 1);
      t.kind = Tok::String;
      t.text = std::move(body);
      if (at(i) == '^' && at(i + 1) == '^') {
        advance(2);
        std::size_t k = i;
        if (at(k) == '<') {
          auto close = src.find('>', k);
          if (close == std::string_view::npos) fail("unterminated datatype IRI");
          t.datatype = std::string(src.substr(k, close - k + 1));
          advance(close - k + 1);
        } else {
          std::size_t e = read_name(at(k) == ':' ? k + 1 : k);
          if (at(e) == ':') e = read_name(e + 1);
          if (e == k) fail("datatype expected after ^^");
          t.datatype = std::string(src.substr(k, e - k));
          advance(e - k);
        }
      } else if (at(i) == '@') {
        std::size_t e = read_name(i + 1);
        t.datatype = "@" + std::string(src.substr(i + 1, e - i - 1));
        advance(e - i);
      }
    } else if (std::isdigit(static_cast<unsigned char>(c)) || ((c == '-' || c == '+' || c == '.') &&
                                                                std::isdigit(static_cast<unsigned char>(at(i + 1))))) {
      std::size_t j = i + 1;
      while (j < src.size() && (std::isdigit(static_cast<unsigned char>(src[j])) || src[j] == '.' ||
                                ((src[j] == 'e' || src[j] == 'E') && j + 1 < src.size()) ||
                                ((src[j] == '-' || src[j] == '+') && (src[j - 1] == 'e' || src[j - 1] == 'E'))))
        ++j;
      if (j < src.size() && (src[j] == 'f' || src[j] == 'F')) ++j;
      t.kind = Tok::Number;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (c == ':' || is_name_start(c)) {
      std::size_t j = c == ':' ? i : read_name(i);
      if (at(j) == ':') {
        std::size_t k = j + 1;
        std::size_t e = read_name(k);
        if (e == k) {
          // `Word:` or a lone `:` is a section keyword / prefix declaration name.
          t.kind = Tok::Keyword;
          t.text = std::string(src.substr(i, j - i));
          advance(k - i);
        } else {
          t.kind = Tok::PName;
          t.text = std::string(src.substr(i, e - i));
          advance(e - i);
        }
      } else {
        t.kind = Tok::Name;
        t.text = std::string(src.substr(i, j - i));
        advance(j - i);
      }
    } else {
      fail(std::string("unexpected character '") + c + "'");
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

}  // namespace detail

/// Parses the supported subset. Bare and quoted names that the document does
/// not declare are looked up in `context` (by IRI, label, then local name),
/// and otherwise minted in the default namespace.
class Parser {
 public:
  explicit Parser(std::string_view src, const Ontology* context = nullptr) : context_(context) {
    toks_ = detail::lex(src);
    for (const auto& sp : standard_prefixes()) prefixes_[sp.name] = std::string(sp.ns);
  }

  Ontology parse() {
    collect();
    pos_ = 0;
    while (peek().kind != detail::Tok::End) top_level();
    return std::move(onto_);
  }

 private:
  using Tok = detail::Tok;

  const detail::Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  const detail::Token& next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }
  [[noreturn]] void fail(const detail::Token& t, const std::string& m) const { throw SyntaxError(t.line, t.column, m); }
  bool is_punct(const char* p) const { return peek().kind == Tok::Punct && peek().text == p; }
  bool is_word(const char* w) const { return peek().kind == Tok::Name && peek().text == w; }
  void expect_punct(const char* p) {
    if (!is_punct(p)) fail(peek(), std::string("expected '") + p + "'");
    ++pos_;
  }

  static std::optional<EntityKind> frame_kind(const std::string& kw) {
    if (kw == "Class") return EntityKind::Class;
    if (kw == "ObjectProperty") return EntityKind::ObjectProperty;
    if (kw == "DataProperty") return EntityKind::DataProperty;
    if (kw == "Individual") return EntityKind::NamedIndividual;
    if (kw == "Datatype") return EntityKind::Datatype;
    return std::nullopt;
  }

  // Pass 1: prefixes, ontology IRI, frame entities and their labels.
  void collect() {
    for (pos_ = 0; peek().kind != Tok::End;) {
      const auto& t = next();
      if (t.kind != Tok::Keyword) continue;
      if (t.text == "Prefix") {
        const auto& name = next();
        const auto& iri = next();
        if (name.kind != Tok::Keyword || iri.kind != Tok::Iri) fail(name, "expected 'Prefix: name: <iri>'");
        prefixes_[name.text] = iri.text;
      } else if (t.text == "Ontology") {
        if (peek().kind == Tok::Iri) onto_.iri = next().text;
      } else if (auto kind = frame_kind(t.text)) {
        const auto& name = next();
        std::string iri = frame_iri(name);
        std::string label;
        if (peek().kind == Tok::Keyword && peek().text == "Annotations") {
          ++pos_;
          while (peek().kind == Tok::PName || peek().kind == Tok::Name) {
            std::string prop = next().text;
            const auto& value = next();
            if (value.kind != Tok::String) fail(value, "annotation value must be a string");
            if (prop == "rdfs:label") label = value.text;
            if (!is_punct(",")) break;
            ++pos_;
          }
        }
        try {
          onto_.declare({*kind, iri, label});
        } catch (const owl::ModelError& e) {
          fail(name, e.what());
        }
        if (!label.empty()) labels_[label].push_back(iri);
      }
    }
    if (prefixes_.count("")) default_ns_ = prefixes_[""];
    else if (context_) default_ns_ = default_namespace(context_->iri);
    if (default_ns_.empty()) default_ns_ = default_namespace(onto_.iri);
    if (default_ns_.empty()) default_ns_ = "urn:regowl:data#";
  }

  std::string expand_pname(const detail::Token& t) const {
    auto colon = t.text.find(':');
    auto it = prefixes_.find(t.text.substr(0, colon));
    if (it == prefixes_.end()) fail(t, "unknown prefix in '" + t.text + "'");
    return it->second + t.text.substr(colon + 1);
  }

  std::string frame_iri(const detail::Token& t) {
    switch (t.kind) {
      case Tok::Iri: return t.text;
      case Tok::PName: return expand_pname(t);
      case Tok::Name:
        if (default_ns_.empty() && prefixes_.count("")) default_ns_ = prefixes_.at("");
        return (prefixes_.count("") ? prefixes_.at("") : provisional_ns()) + t.text;
      default: fail(t, "expected an entity name");
    }
  }

  // Before pass 1 finishes the default namespace may still be unknown.
  std::string provisional_ns() const {
    if (context_ && !context_->iri.empty()) return default_namespace(context_->iri);
    if (!onto_.iri.empty()) return default_namespace(onto_.iri);
    return "urn:regowl:data#";
  }

  static bool kind_fits(EntityKind actual, std::initializer_list<EntityKind> wanted) {
    return std::find(wanted.begin(), wanted.end(), actual) != wanted.end();
  }

  std::optional<std::string> lookup(const Ontology& o, const std::string& name, bool by_label, bool by_local,
                                    std::initializer_list<EntityKind> wanted) const {
    std::optional<std::string> found;
    for (const auto& [iri, e] : o.entities) {
      if (!kind_fits(e.kind, wanted)) continue;
      bool hit = (by_label && e.label == name) || (by_local && owl::local_name(iri) == name);
      if (!hit) continue;
      if (found && *found != iri) return std::nullopt;  // ambiguous
      found = iri;
    }
    return found;
  }

  /// IRI for a name in a position expecting one of `wanted`.
  std::string resolve(const detail::Token& t, std::initializer_list<EntityKind> wanted) {
    if (t.kind == Tok::Iri) return t.text;
    if (t.kind == Tok::PName) return expand_pname(t);
    if (t.kind != Tok::Name && t.kind != Tok::Quoted) fail(t, "expected a name");
    if (t.kind == Tok::Name) {
      std::string iri = default_ns_ + t.text;
      if (const Entity* e = onto_.find(iri); e && kind_fits(e->kind, wanted)) return iri;
      if (context_)
        if (const Entity* e = context_->find(iri); e && kind_fits(e->kind, wanted)) return iri;
    }
    if (auto hit = lookup(onto_, t.text, true, false, wanted)) return *hit;
    if (context_) {
      if (auto hit = lookup(*context_, t.text, true, false, wanted)) return *hit;
      if (t.kind == Tok::Name)
        if (auto hit = lookup(*context_, t.text, false, true, wanted)) return *hit;
    }
    if (t.kind == Tok::Quoted) fail(t, "unknown name '" + t.text + "'");
    return default_ns_ + t.text;
  }

  std::optional<EntityKind> known_kind(const std::string& iri) const {
    if (const Entity* e = onto_.find(iri)) return e->kind;
    if (context_)
      if (const Entity* e = context_->find(iri)) return e->kind;
    return std::nullopt;
  }

  std::string individual(const detail::Token& t) {
    std::string iri = resolve(t, {EntityKind::NamedIndividual});
    if (!onto_.find(iri)) onto_.declare({EntityKind::NamedIndividual, iri, ""});
    return iri;
  }

  void top_level() {
    const auto& t = next();
    if (t.kind != Tok::Keyword) fail(t, "expected a frame keyword");
    if (t.text == "Prefix") {
      pos_ += 2;
      return;
    }
    if (t.text == "Ontology") {
      if (peek().kind == Tok::Iri) ++pos_;
      return;
    }
    if (t.text == "EquivalentClasses") {
      std::vector<ClassExpression> members;
      do {
        members.push_back(description());
      } while (is_punct(",") && (++pos_, true));
      if (members.size() < 2) fail(t, "EquivalentClasses needs two members");
      onto_.add(Axiom::equivalent_classes(std::move(members)));
      return;
    }
    auto kind = frame_kind(t.text);
    if (!kind) throw UnsupportedConstruct("'" + t.text + ":' is outside the supported subset");
    const auto& name = next();
    std::string subject = frame_iri(name);
    while (peek().kind == Tok::Keyword && !frame_kind(peek().text) && peek().text != "Prefix" &&
           peek().text != "Ontology" && peek().text != "EquivalentClasses")
      frame_section(*kind, subject);
  }

  void frame_section(EntityKind kind, const std::string& subject) {
    const auto& kw = next();
    const std::string& s = kw.text;
    auto items = [&](auto&& fn) {
      do {
        fn();
      } while (is_punct(",") && (++pos_, true));
    };
    if (s == "Annotations") {
      items([&] {
        pos_ += 2;  // collected in pass 1
      });
    } else if (s == "EquivalentTo" && kind == EntityKind::Class) {
      items([&] { onto_.add(Axiom::equivalent_classes({ClassExpression::named(subject), description()})); });
    } else if (s == "SubClassOf" && kind == EntityKind::Class) {
      items([&] { onto_.add(Axiom::sub_class_of(ClassExpression::named(subject), description())); });
    } else if (s == "EquivalentTo" && (kind == EntityKind::ObjectProperty || kind == EntityKind::DataProperty)) {
      items([&] {
        std::string other = resolve(next(), {kind});
        onto_.add(Axiom::equivalent_properties(
            subject, other, kind == EntityKind::ObjectProperty ? owl::PropertyKind::Object : owl::PropertyKind::Data));
      });
    } else if (s == "Types" && kind == EntityKind::NamedIndividual) {
      items([&] { onto_.add(Axiom::class_assertion(description(), subject)); });
    } else if (s == "Facts" && kind == EntityKind::NamedIndividual) {
      items([&] {
        if (is_word("not")) throw UnsupportedConstruct("negative property assertions");
        const auto& prop_tok = next();
        if (peek().kind == Tok::String || peek().kind == Tok::Number) {
          std::string p = resolve(prop_tok, {EntityKind::DataProperty});
          onto_.add(Axiom::data_fact(subject, p, literal()));
        } else {
          std::string p = resolve(prop_tok, {EntityKind::ObjectProperty});
          onto_.add(Axiom::object_fact(subject, p, individual(next())));
        }
      });
    } else {
      throw UnsupportedConstruct("'" + s + ":' in a " + std::string(owl::to_string(kind)) + " frame");
    }
  }

  // description := conjunction ('or' conjunction)*
  ClassExpression description() {
    std::vector<ClassExpression> ops{conjunction()};
    while (is_word("or")) {
      ++pos_;
      ops.push_back(conjunction());
    }
    return ops.size() == 1 ? std::move(ops[0]) : ClassExpression::union_of(std::move(ops));
  }

  ClassExpression conjunction() {
    std::vector<ClassExpression> ops{primary()};
    while (is_word("and")) {
      ++pos_;
      ops.push_back(primary());
    }
    return ops.size() == 1 ? std::move(ops[0]) : ClassExpression::intersection_of(std::move(ops));
  }

  bool starts_primary() const {
    auto k = peek().kind;
    if (k == Tok::Name) return !is_keyword(peek().text) || peek().text == "not";
    return k == Tok::PName || k == Tok::Iri || k == Tok::Quoted || is_punct("(") || is_punct("{");
  }

  ClassExpression primary() {
    if (is_word("not")) {
      ++pos_;
      return ClassExpression::complement_of(primary());
    }
    if (is_punct("(")) {
      ++pos_;
      ClassExpression e = description();
      expect_punct(")");
      return e;
    }
    if (is_punct("{")) {
      ++pos_;
      std::vector<std::string> inds;
      do {
        inds.push_back(individual(next()));
      } while (is_punct(",") && (++pos_, true));
      expect_punct("}");
      return ClassExpression::one_of(std::move(inds));
    }
    const auto& name = next();
    if (name.kind == Tok::Name && name.text == "inverse") throw UnsupportedConstruct("inverse properties");
    if (name.kind == Tok::Name && is_keyword(name.text)) fail(name, "unexpected '" + name.text + "'");
    if (peek().kind == Tok::Name &&
        (peek().text == "some" || peek().text == "only" || peek().text == "min" || peek().text == "max" ||
         peek().text == "exactly" || peek().text == "value" || peek().text == "that")) {
      return restriction(name);
    }
    return ClassExpression::named(resolve(name, {EntityKind::Class}));
  }

  bool data_filler_ahead() const {
    if (peek().kind == Tok::String || peek().kind == Tok::Number) return true;
    if (is_punct("{"))
      return peek(1).kind == Tok::String || peek(1).kind == Tok::Number;
    if (peek().kind == Tok::PName) return text::starts_with(peek().text, "xsd:");
    return false;
  }

  ClassExpression restriction(const detail::Token& prop_tok) {
    if (prop_tok.kind == Tok::Name && prop_tok.text == "inverse") throw UnsupportedConstruct("inverse properties");
    const auto& op = next();
    if (op.text == "value" || op.text == "that") throw UnsupportedConstruct("'" + op.text + "' restrictions");
    std::string iri = resolve(prop_tok, {EntityKind::ObjectProperty, EntityKind::DataProperty});
    auto kind = known_kind(iri);
    bool data = kind ? *kind == EntityKind::DataProperty : data_filler_ahead();
    if (op.text == "some" || op.text == "only") {
      if (data) {
        DataRange r = data_range();
        return op.text == "some" ? ClassExpression::data_some(iri, r) : ClassExpression::data_only(iri, r);
      }
      ClassExpression f = primary();
      return op.text == "some" ? ClassExpression::object_some(iri, f) : ClassExpression::object_only(iri, f);
    }
    const auto& n_tok = next();
    auto n = n_tok.kind == Tok::Number ? text::parse_int<std::uint32_t>(n_tok.text) : std::nullopt;
    if (!n) fail(n_tok, "expected a cardinality");
    owl::CardinalityMode mode = op.text == "min"   ? owl::CardinalityMode::Min
                                : op.text == "max" ? owl::CardinalityMode::Max
                                                   : owl::CardinalityMode::Exact;
    if (data) {
      std::optional<DataRange> r;
      if (is_punct("{") || peek().kind == Tok::PName || is_punct("(")) r = data_range();
      return ClassExpression::data_cardinality(iri, mode, *n, r);
    }
    std::optional<ClassExpression> f;
    if (starts_primary()) f = primary();
    return ClassExpression::object_cardinality(iri, mode, *n, f);
  }

  DataRange data_range() {
    if (is_punct("(")) {
      ++pos_;
      DataRange r = data_range();
      expect_punct(")");
      return r;
    }
    if (is_punct("{")) {
      ++pos_;
      std::vector<Literal> values;
      do {
        values.push_back(literal());
      } while (is_punct(",") && (++pos_, true));
      expect_punct("}");
      DataRange r = DataRange::one_of(std::move(values));
      check(r);
      return r;
    }
    const auto& dt = next();
    auto base = datatype(dt);
    if (!is_punct("[")) throw UnsupportedConstruct("bare datatype '" + dt.text + "' as a data range");
    ++pos_;
    std::vector<std::pair<owl::Facet, Literal>> facets;
    do {
      const auto& op = next();
      owl::Facet f;
      if (op.text == ">=") f = owl::Facet::MinInclusive;
      else if (op.text == ">") f = owl::Facet::MinExclusive;
      else if (op.text == "<=") f = owl::Facet::MaxInclusive;
      else if (op.text == "<") f = owl::Facet::MaxExclusive;
      else fail(op, "expected a facet");
      facets.emplace_back(f, literal());
    } while (is_punct(",") && (++pos_, true));
    expect_punct("]");
    DataRange r;
    r.kind = DataRange::Kind::Restriction;
    r.base = base;
    r.facets = std::move(facets);
    check(r);
    return r;
  }

  void check(const DataRange& r) const {
    try {
      r.check();
    } catch (const owl::ModelError& e) {
      fail(peek(), e.what());
    }
  }

  owl::Datatype datatype(const detail::Token& t) const {
    std::string iri;
    if (t.kind == Tok::PName) iri = expand_pname(t);
    else if (t.kind == Tok::Iri) iri = t.text;
    else fail(t, "expected a datatype");
    if (owl::namespace_of(iri) != owl::kXsdNs) throw UnsupportedConstruct("datatype <" + iri + ">");
    auto d = owl::datatype_from_local_name(owl::local_name(iri));
    if (!d) throw UnsupportedConstruct("datatype <" + iri + ">");
    return *d;
  }

  Literal literal() {
    const auto& t = next();
    if (t.kind == Tok::Number) {
      std::string lex = t.text;
      if (lex.back() == 'f' || lex.back() == 'F') {
        lex.pop_back();
        return {lex, owl::Datatype::Float};
      }
      if (text::is_integer_lexical(lex)) return {lex, owl::Datatype::Integer};
      if (text::is_decimal_lexical(lex)) return {lex, owl::Datatype::Float};
      fail(t, "bad number '" + t.text + "'");
    }
    if (t.kind != Tok::String) fail(t, "expected a literal");
    if (t.datatype.empty() || t.datatype.front() == '@') return {t.text, owl::Datatype::String};
    detail::Token dt;
    dt.line = t.line;
    dt.column = t.column;
    if (t.datatype.front() == '<') {
      dt.kind = Tok::Iri;
      dt.text = t.datatype.substr(1, t.datatype.size() - 2);
    } else {
      dt.kind = Tok::PName;
      dt.text = t.datatype;
    }
    Literal l{t.text, datatype(dt)};
    if (!l.valid()) fail(t, "'" + t.text + "' is not a valid " + std::string(owl::to_string(l.datatype)));
    return l;
  }

  std::vector<detail::Token> toks_;
  std::size_t pos_ = 0;
  const Ontology* context_;
  std::map<std::string, std::string> prefixes_;
  std::map<std::string, std::vector<std::string>> labels_;
  std::string default_ns_;
  Ontology onto_;
};

inline Ontology parse_manchester_subset(std::string_view src, const Ontology* context = nullptr) {
  return Parser(src, context).parse();
}

}  // namespace regowl::manchester
