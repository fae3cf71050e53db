// Copyright 2026 The kbqa Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "kbqa/pattern.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <tuple>

#include "kbqa/error.hpp"
#include "kbqa/text.hpp"

namespace kbqa::pattern {

Node Node::test(std::vector<TypeExpr> alternatives, Quant q) {
  Node n;
  n.kind = Kind::kTest;
  n.tests = std::move(alternatives);
  n.quant = q;
  return n;
}

Node Node::seq(std::vector<Node> items) {
  Node n;
  n.kind = Kind::kSeq;
  n.children = std::move(items);
  return n;
}

Node Node::alt(std::vector<Node> options) {
  Node n;
  n.kind = Kind::kAlt;
  n.children = std::move(options);
  return n;
}

Node Node::group(Node body, std::string label, Quant q) {
  Node n;
  n.kind = Kind::kGroup;
  n.children.push_back(std::move(body));
  n.label = std::move(label);
  n.quant = q;
  return n;
}

// ---------------------------------------------------------------- lexer

namespace {

enum class Tok {
  kLParen, kRParen, kLBrace, kRBrace, kPipe, kColon, kDot, kEqEq, kEq,
  kComma, kQuant, kArrow, kIdent, kString, kEnd
};

const char* tok_name(Tok t) {
  switch (t) {
    case Tok::kLParen: return "'('";
    case Tok::kRParen: return "')'";
    case Tok::kLBrace: return "'{'";
    case Tok::kRBrace: return "'}'";
    case Tok::kPipe: return "'|'";
    case Tok::kColon: return "':'";
    case Tok::kDot: return "'.'";
    case Tok::kEqEq: return "'=='";
    case Tok::kEq: return "'='";
    case Tok::kComma: return "','";
    case Tok::kQuant: return "quantifier";
    case Tok::kArrow: return "'-->'";
    case Tok::kIdent: return "identifier";
    case Tok::kString: return "string";
    case Tok::kEnd: return "end of input";
  }
  return "?";
}

struct Token {
  Tok kind;
  std::string value;
  int line;
  int column;
};

bool ident_char(char32_t c) {
  if (c == U'_') return true;
  if (c < 0x80) return (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z') || text::is_digit(c);
  return !text::is_space(c) && !text::is_punct(c) && c != U'⇢' && c != U'“' &&
         c != U'”';
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : s_(text::decode(src)) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      int l = line_, c = col_;
      if (i_ >= s_.size()) {
        out.push_back({Tok::kEnd, {}, l, c});
        return out;
      }
      char32_t ch = s_[i_];
      auto single = [&](Tok t) {
        out.push_back({t, text::encode(ch), l, c});
        advance();
      };
      switch (ch) {
        case U'(': single(Tok::kLParen); continue;
        case U')': single(Tok::kRParen); continue;
        case U'{': single(Tok::kLBrace); continue;
        case U'}': single(Tok::kRBrace); continue;
        case U'|': single(Tok::kPipe); continue;
        case U':': single(Tok::kColon); continue;
        case U'.': single(Tok::kDot); continue;
        case U',': single(Tok::kComma); continue;
        case U'?': case U'+': case U'*': single(Tok::kQuant); continue;
        case U'⇢': single(Tok::kArrow); continue;
        default: break;
      }
      if (ch == U'=') {
        advance();
        if (peek() == U'=') {
          advance();
          out.push_back({Tok::kEqEq, "==", l, c});
        } else {
          out.push_back({Tok::kEq, "=", l, c});
        }
        continue;
      }
      if (ch == U'-' && peek(1) == U'-' && peek(2) == U'>') {
        advance(); advance(); advance();
        out.push_back({Tok::kArrow, "-->", l, c});
        continue;
      }
      if (ch == U'"' || ch == U'“') {
        out.push_back({Tok::kString, string_literal(ch == U'"' ? U'"' : U'”'), l, c});
        continue;
      }
      if (ident_char(ch)) {
        std::u32string id;
        while (i_ < s_.size()) {
          char32_t x = s_[i_];
          if (ident_char(x) || (x == U'-' && !id.empty() && peek(1) != U'-' && ident_char(peek(1)))) {
            id.push_back(x);
            advance();
          } else {
            break;
          }
        }
        out.push_back({Tok::kIdent, text::encode(id), l, c});
        continue;
      }
      throw ParseError("unexpected character '" + text::encode(ch) + "'", l, c);
    }
  }

 private:
  char32_t peek(std::size_t ahead = 0) const {
    return i_ + ahead < s_.size() ? s_[i_ + ahead] : U'\0';
  }
  void advance() {
    if (s_[i_] == U'\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++i_;
  }
  void skip_space() {
    while (i_ < s_.size() && text::is_space(s_[i_])) advance();
  }
  std::string string_literal(char32_t close) {
    int l = line_, c = col_;
    advance();
    std::u32string v;
    for (;;) {
      if (i_ >= s_.size()) throw ParseError("unterminated string", l, c, {"'\"'"});
      char32_t x = s_[i_];
      if (x == close) {
        advance();
        return text::encode(v);
      }
      if (x == U'\\' && i_ + 1 < s_.size()) {
        advance();
        char32_t e = s_[i_];
        v.push_back(e == U'n' ? U'\n' : e == U't' ? U'\t' : e);
        advance();
        continue;
      }
      v.push_back(x);
      advance();
    }
  }

  std::u32string s_;
  std::size_t i_ = 0;
  int line_ = 1;
  int col_ = 1;
};

// ---------------------------------------------------------------- parser

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(Lexer(src).run()) {}

  Rule rule() {
    Rule r;
    r.root = condition();
    expect(Tok::kArrow);
    r.postings.push_back(posting());
    while (at(Tok::kComma)) {
      next();
      r.postings.push_back(posting());
    }
    expect(Tok::kEnd);
    auto ls = labels(r.root);
    for (const auto& p : r.postings) {
      if (std::find(ls.begin(), ls.end(), p.label) == ls.end()) {
        throw ValidationError("posting refers to unknown label '" + p.label + "'");
      }
    }
    return r;
  }

  Node bare_condition() {
    Node n = condition();
    expect(Tok::kEnd);
    return n;
  }

  ExtraConstraint extra() {
    ExtraConstraint e;
    e.subject = expect(Tok::kIdent).value;
    expect(Tok::kDot);
    auto kw = expect(Tok::kIdent);
    if (kw.value != "hasAnno") throw ParseError("expected hasAnno", kw.line, kw.column, {"hasAnno"});
    expect(Tok::kEqEq);
    e.contained = expect(Tok::kIdent).value;
    if (at(Tok::kDot)) {
      next();
      std::string f = expect(Tok::kIdent).value;
      expect(Tok::kEqEq);
      e.test = FeatureConstraint{f, value()};
    }
    expect(Tok::kEnd);
    return e;
  }

 private:
  const Token& cur() const { return toks_[pos_]; }
  bool at(Tok t) const { return cur().kind == t; }
  Token next() { return toks_[pos_++]; }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    const auto& t = cur();
    std::string got = t.kind == Tok::kEnd ? "end of input" : "'" + t.value + "'";
    throw ParseError("unexpected " + got, t.line, t.column, std::move(expected));
  }

  Token expect(Tok t) {
    if (!at(t)) fail({tok_name(t)});
    return next();
  }

  std::string value() {
    if (at(Tok::kString) || at(Tok::kIdent)) return next().value;
    fail({"string", "identifier"});
  }

  Node condition() {
    if (!at(Tok::kLParen)) fail({"'('"});
    Node g = group();
    if (g.label.empty()) {
      throw ParseError("the outermost group must carry a label", toks_[0].line,
                       toks_[0].column, {"':'"});
    }
    std::vector<std::string> ls = labels(g);
    std::sort(ls.begin(), ls.end());
    auto dup = std::adjacent_find(ls.begin(), ls.end());
    if (dup != ls.end()) throw ValidationError("duplicate label '" + *dup + "'");
    return g;
  }

  Quant quant() {
    if (!at(Tok::kQuant)) return Quant::kOne;
    char c = next().value[0];
    return c == '?' ? Quant::kOptional : c == '+' ? Quant::kPlus : Quant::kStar;
  }

  Node group() {
    expect(Tok::kLParen);
    Node body = alternation();
    expect(Tok::kRParen);
    std::string label;
    if (at(Tok::kColon)) {
      next();
      label = expect(Tok::kIdent).value;
    }
    return Node::group(std::move(body), std::move(label), quant());
  }

  Node alternation() {
    std::vector<Node> opts;
    opts.push_back(sequence());
    while (at(Tok::kPipe)) {
      next();
      opts.push_back(sequence());
    }
    if (opts.size() == 1) return std::move(opts[0]);
    return Node::alt(std::move(opts));
  }

  Node sequence() {
    std::vector<Node> items;
    while (at(Tok::kLBrace) || at(Tok::kLParen)) items.push_back(item());
    if (items.empty()) fail({"'{'", "'('"});
    if (items.size() == 1) return std::move(items[0]);
    return Node::seq(std::move(items));
  }

  Node item() {
    if (at(Tok::kLParen)) return group();
    expect(Tok::kLBrace);
    std::vector<TypeExpr> tests;
    tests.push_back(type_expr());
    while (at(Tok::kPipe)) {
      next();
      tests.push_back(type_expr());
    }
    expect(Tok::kRBrace);
    return Node::test(std::move(tests), quant());
  }

  TypeExpr type_expr() {
    TypeExpr e;
    e.type = expect(Tok::kIdent).value;
    if (at(Tok::kDot)) {
      next();
      std::string f = expect(Tok::kIdent).value;
      expect(Tok::kEqEq);
      e.test = FeatureConstraint{f, value()};
    }
    return e;
  }

  Posting posting() {
    Posting p;
    expect(Tok::kColon);
    p.label = expect(Tok::kIdent).value;
    expect(Tok::kDot);
    p.type = expect(Tok::kIdent).value;
    expect(Tok::kEq);
    expect(Tok::kLBrace);
    if (at(Tok::kIdent)) {
      for (;;) {
        std::string k = expect(Tok::kIdent).value;
        expect(Tok::kEq);
        if (!at(Tok::kString)) fail({"string"});
        p.features[k] = next().value;
        if (!at(Tok::kComma)) break;
        next();
      }
    }
    expect(Tok::kRBrace);
    return p;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

void collect_labels(const Node& n, std::vector<std::string>& out) {
  if (n.kind == Node::Kind::kGroup && !n.label.empty()) out.push_back(n.label);
  for (const auto& c : n.children) collect_labels(c, out);
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

const char* quant_text(Quant q) {
  switch (q) {
    case Quant::kOptional: return "?";
    case Quant::kPlus: return "+";
    case Quant::kStar: return "*";
    case Quant::kOne: break;
  }
  return "";
}

}  // namespace

Rule parse_rule(std::string_view source) { return Parser(source).rule(); }
Node parse_condition(std::string_view source) { return Parser(source).bare_condition(); }
ExtraConstraint parse_extra(std::string_view source) { return Parser(source).extra(); }

std::vector<std::string> labels(const Node& node) {
  std::vector<std::string> out;
  collect_labels(node, out);
  return out;
}

std::string to_text(const Node& node) {
  std::string out;
  switch (node.kind) {
    case Node::Kind::kTest:
      out = "{";
      for (std::size_t i = 0; i < node.tests.size(); ++i) {
        if (i) out += " | ";
        out += node.tests[i].type;
        if (node.tests[i].test) {
          out += "." + node.tests[i].test->first + " == " + quote(node.tests[i].test->second);
        }
      }
      out += "}";
      break;
    case Node::Kind::kSeq:
      for (std::size_t i = 0; i < node.children.size(); ++i) {
        if (i) out += " ";
        out += to_text(node.children[i]);
      }
      break;
    case Node::Kind::kAlt:
      for (std::size_t i = 0; i < node.children.size(); ++i) {
        if (i) out += " | ";
        out += to_text(node.children[i]);
      }
      break;
    case Node::Kind::kGroup:
      out = "(" + to_text(node.children.at(0)) + ")";
      if (!node.label.empty()) out += ":" + node.label;
      break;
  }
  return out + quant_text(node.quant);
}

std::string to_text(const Rule& rule) {
  std::string out = to_text(rule.root) + " -->";
  for (std::size_t i = 0; i < rule.postings.size(); ++i) {
    const auto& p = rule.postings[i];
    out += (i ? ", :" : " :") + p.label + "." + p.type + " = {";
    bool first = true;
    for (const auto& [k, v] : p.features) {
      if (!first) out += ", ";
      first = false;
      out += k + " = " + quote(v);
    }
    out += "}";
  }
  return out;
}

std::string to_text(const ExtraConstraint& extra) {
  std::string out = extra.subject + ".hasAnno == " + extra.contained;
  if (extra.test) out += "." + extra.test->first + " == " + extra.test->second;
  return out;
}

// ---------------------------------------------------------------- matcher

bool test_matches(const Document& doc, const Annotation& a, const TypeExpr& e) {
  if (a.type != e.type) return false;
  if (!e.test) return true;
  if (e.test->first == "string") return text::key(doc.substr(a.span)) == text::key(e.test->second);
  auto v = a.feature(e.test->first);
  return v && *v == e.test->second;
}

namespace {

using Fn = std::function<bool(std::size_t)>;

// A continuation plus a structural id for the rest of the pattern it stands for.
// Success never depends on bindings, so a failure at (node, pos, id) is final.
struct Cont {
  std::uint64_t id;
  Fn fn;
  bool operator()(std::size_t e) const { return fn(e); }
};

// Continuation-passing backtracking search with failure memoization.
// Alternatives are explored in preference order; a continuation returning
// true stops the search.
class Search {
 public:
  Search(const Document& doc, std::map<std::string, Span>* binds) : doc_(doc), binds_(binds) {}

  bool run(const Node& n, std::size_t pos, const Fn& k) { return run(n, pos, Cont{0, k}); }

  bool run(const Node& n, std::size_t pos, const Cont& k) {
    Key key{&n, kRun, pos, k.id};
    if (failed_.count(key)) return false;
    bool ok = false;
    switch (n.quant) {
      case Quant::kOne:
        ok = once(n, pos, k);
        break;
      case Quant::kOptional:
        ok = once(n, pos, k) || k(pos);
        break;
      case Quant::kStar:
        ok = star(n, pos, k);
        break;
      case Quant::kPlus:
        ok = once(n, pos, Cont{intern(k.id, kPlus, &n, 0),
                               [&](std::size_t e) { return star(n, e, k); }});
        break;
    }
    if (!ok) failed_.insert(key);
    return ok;
  }

 private:
  enum Frame { kRun, kStarFrame, kPlus, kSeq };
  using Key = std::tuple<const void*, int, std::size_t, std::uint64_t>;

  std::uint64_t intern(std::uint64_t parent, int frame, const void* node, std::size_t extra) {
    auto [it, fresh] = ids_.try_emplace(Key{node, frame, extra, parent}, ids_.size() + 1);
    return it->second;
  }

  bool star(const Node& n, std::size_t pos, const Cont& k) {
    Key key{&n, kStarFrame, pos, k.id};
    if (failed_.count(key)) return false;
    Cont again{intern(k.id, kStarFrame, &n, pos),
               [&](std::size_t e) { return e > pos && star(n, e, k); }};
    bool ok = once(n, pos, again) || k(pos);
    if (!ok) failed_.insert(key);
    return ok;
  }

  std::vector<AnnotationId> candidates(const Node& n, std::size_t pos) const {
    pos = doc_.skip_space(pos);
    std::vector<AnnotationId> out;
    for (const auto& t : n.tests) {
      for (AnnotationId id : doc_.starting_at(t.type, pos)) {
        if (test_matches(doc_, doc_.get(id), t)) out.push_back(id);
      }
    }
    std::sort(out.begin(), out.end(), [&](AnnotationId a, AnnotationId b) {
      auto la = doc_.get(a).span.length(), lb = doc_.get(b).span.length();
      return la != lb ? la > lb : a < b;
    });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  bool seq(const std::vector<Node>& items, std::size_t i, std::size_t pos, const Cont& k) {
    if (i == items.size()) return k(pos);
    return run(items[i], pos, Cont{intern(k.id, kSeq, &items, i + 1),
                                   [&](std::size_t e) { return seq(items, i + 1, e, k); }});
  }

  bool once(const Node& n, std::size_t pos, const Cont& k) {
    switch (n.kind) {
      case Node::Kind::kTest:
        for (AnnotationId id : candidates(n, pos)) {
          if (k(doc_.get(id).span.end)) return true;
        }
        return false;
      case Node::Kind::kSeq:
        return seq(n.children, 0, pos, k);
      case Node::Kind::kAlt:
        for (const auto& c : n.children) {
          if (run(c, pos, k)) return true;
        }
        return false;
      case Node::Kind::kGroup: {
        if (n.label.empty() || binds_ == nullptr) return run(n.children.at(0), pos, k);
        std::optional<Span> saved;
        if (auto it = binds_->find(n.label); it != binds_->end()) saved = it->second;
        bool ok = run(n.children.at(0), pos, Cont{k.id, [&](std::size_t e) {
          (*binds_)[n.label] = Span{std::min(doc_.skip_space(pos), e), e};
          return k(e);
        }});
        if (!ok) {
          if (saved) (*binds_)[n.label] = *saved;
          else binds_->erase(n.label);
        }
        return ok;
      }
    }
    return false;
  }

  const Document& doc_;
  std::map<std::string, Span>* binds_;
  std::map<Key, std::uint64_t> ids_;
  std::set<Key> failed_;
};

bool is_final_punct(const Document& doc, const Annotation& a) {
  std::string s = doc.substr(a.span);
  return s == "?" || s == "." || s == "!";
}

}  // namespace

std::set<std::size_t> reachable(const Document& doc, const Node& node, std::size_t start) {
  std::set<std::size_t> ends;
  Search(doc, nullptr).run(node, start, [&](std::size_t e) {
    ends.insert(e);
    return false;
  });
  return ends;
}

std::optional<Span> anchored_span(const Document& doc, const Node& node,
                                  std::string_view base_type) {
  const auto& base = doc.of_type(base_type);
  if (base.empty()) return std::nullopt;
  std::size_t start = doc.get(base.front()).span.start;
  // The last base annotation by end offset, skipping one trailing mark.
  std::vector<const Annotation*> ordered;
  for (AnnotationId id : base) ordered.push_back(&doc.get(id));
  std::stable_sort(ordered.begin(), ordered.end(), [](const Annotation* a, const Annotation* b) {
    return a->span.end < b->span.end;
  });
  const Annotation* last = ordered.back();
  if (ordered.size() > 1 && is_final_punct(doc, *last)) {
    std::size_t punct_start = last->span.start;
    for (auto it = ordered.rbegin(); it != ordered.rend(); ++it) {
      if ((*it)->span.end <= punct_start) {
        last = *it;
        break;
      }
    }
  }
  std::size_t min_end = last->span.end;
  auto ends = reachable(doc, node, start);
  for (auto it = ends.rbegin(); it != ends.rend(); ++it) {
    if (*it >= min_end) return Span{start, *it};
    break;
  }
  return std::nullopt;
}

std::optional<Span> anywhere_span(const Document& doc, const Node& node) {
  std::set<std::size_t> starts;
  for (const auto& a : doc.annotations()) starts.insert(a.span.start);
  for (std::size_t s : starts) {
    auto ends = reachable(doc, node, s);
    if (!ends.empty() && *ends.rbegin() > s) return Span{s, *ends.rbegin()};
  }
  return std::nullopt;
}

MatchResult apply(Document& doc, const Rule& rule, Span span) {
  MatchResult result;
  result.span = span;
  std::map<std::string, Span> binds;
  std::map<std::string, Span> found;
  bool ok = Search(doc, &binds).run(rule.root, span.start, [&](std::size_t e) {
    if (e != span.end) return false;
    found = binds;
    return true;
  });
  if (!ok) throw RangeError("span is not reachable by the pattern");
  result.bindings = std::move(found);
  if (!rule.root.label.empty()) result.bindings[rule.root.label] = span;
  for (const auto& p : rule.postings) {
    auto it = result.bindings.find(p.label);
    if (it == result.bindings.end()) continue;  // label inside an unused optional part
    result.posted.push_back(doc.add(p.type, it->second, p.features));
  }
  return result;
}

std::optional<MatchResult> match_anchored(Document& doc, const Rule& rule,
                                          std::string_view base_type) {
  auto span = anchored_span(doc, rule.root, base_type);
  if (!span) return std::nullopt;
  return apply(doc, rule, *span);
}

std::optional<MatchResult> match_anywhere(Document& doc, const Rule& rule) {
  auto span = anywhere_span(doc, rule.root);
  if (!span) return std::nullopt;
  return apply(doc, rule, *span);
}

bool check_extra(const Document& doc, const MatchResult& match,
                 const ExtraConstraint& constraint) {
  for (AnnotationId s : doc.find_within(match.span, constraint.subject)) {
    if (!doc.find_within(doc.get(s).span, constraint.contained, constraint.test).empty()) {
      return true;
    }
  }
  return false;
}

}  // namespace kbqa::pattern
