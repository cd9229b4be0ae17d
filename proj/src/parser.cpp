/*
 * Copyright 2026 the mettagraph authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "mettagraph/parser.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace mtg::frontend {

std::string ParseError::to_string() const {
  std::ostringstream os;
  os << "parse error at " << span.line << ":" << span.col << ": " << message;
  if (!expected.empty()) {
    os << " (expected";
    for (const auto& e : expected) os << " " << e;
    os << ")";
  }
  return os.str();
}

namespace {

struct Cursor {
  const std::string& text;
  std::size_t pos = 0;
  std::uint32_t line = 1;
  std::uint32_t col = 1;

  bool eof() const { return pos >= text.size(); }
  char peek() const { return eof() ? '\0' : text[pos]; }

  char advance() {
    char c = text[pos++];
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    return c;
  }

  SourceSpan here(std::size_t length = 0) const { return {line, col, pos, length}; }

  void skip_space_and_comments() {
    while (!eof()) {
      char c = peek();
      if (c == ';') {
        while (!eof() && peek() != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }
};

bool symbol_char(char c) {
  return !std::isspace(static_cast<unsigned char>(c)) && c != '(' && c != ')' && c != ';';
}

struct SExprParser {
  Cursor cur;
  std::optional<ParseError> error;

  void fail(std::string message, std::vector<std::string> expected = {}) {
    if (!error) error = ParseError{cur.here(), std::move(message), std::move(expected)};
  }

  std::optional<SExpr> parse_one() {
    cur.skip_space_and_comments();
    if (cur.eof()) {
      fail("unexpected end of input", {"atom"});
      return std::nullopt;
    }
    SourceSpan start = cur.here();
    char c = cur.peek();
    if (c == ')') {
      fail("unexpected ')'", {"atom"});
      return std::nullopt;
    }
    if (c == '(') {
      cur.advance();
      SExpr list;
      list.kind = SExpr::Kind::List;
      list.span = start;
      while (true) {
        cur.skip_space_and_comments();
        if (cur.eof()) {
          fail("unexpected end of input", {")"});
          return std::nullopt;
        }
        if (cur.peek() == ')') {
          cur.advance();
          return list;
        }
        auto item = parse_one();
        if (!item) return std::nullopt;
        list.items.push_back(std::move(*item));
      }
    }
    std::string tok;
    while (!cur.eof() && symbol_char(cur.peek())) tok += cur.advance();
    if (tok.empty()) {
      fail("unexpected character", {"atom"});
      return std::nullopt;
    }
    SExpr s;
    s.span = start;
    s.span.length = tok.size();
    if (tok[0] == '$') {
      s.kind = SExpr::Kind::Variable;
      s.text = tok.substr(1);
    } else {
      s.kind = SExpr::Kind::Symbol;
      s.text = tok;
    }
    return s;
  }

  std::vector<SExpr> parse_all() {
    std::vector<SExpr> out;
    while (true) {
      cur.skip_space_and_comments();
      if (cur.eof()) return out;
      auto s = parse_one();
      if (!s) return out;
      out.push_back(std::move(*s));
    }
  }
};

}  // namespace

Parsed<std::vector<SExpr>> parse_sexprs(const std::string& text) {
  SExprParser p{Cursor{text}, std::nullopt};
  auto out = p.parse_all();
  if (p.error) return {std::nullopt, p.error};
  return {std::move(out), std::nullopt};
}

// ---------------------------------------------------------------------------
// Atom construction from s-expressions

namespace {

using mlang::Builder;
using mlang::Keyword;
using mlang::TermPtr;
using mlang::TypeExpr;

struct AtomBuilder {
  Builder b;
  std::optional<ParseError> error;

  void fail(const SExpr& at, std::string message, std::vector<std::string> expected = {}) {
    if (!error) error = ParseError{at.span, std::move(message), std::move(expected)};
  }

  /// Type position: identifiers are base types, (-> ...) chains, (| ..),
  /// (& ..), (D ..) applications, $vars are schematic.
  TermPtr type_term(const SExpr& s) {
    if (s.kind == SExpr::Kind::Variable) return b.var(s.text, mlang::t_type());
    if (s.kind == SExpr::Kind::Symbol) {
      if (s.text == "Type") return b.tyterm(mlang::t_type());
      if (s.text == "TopType") return b.tyterm(mlang::t_toptype());
      if (s.text == "Top") return b.tyterm(mlang::t_top());
      return b.tyterm(mlang::t_base(s.text));
    }
    if (s.items.empty()) {
      fail(s, "empty type expression", {"type"});
      return b.tyterm(mlang::t_top());
    }
    const SExpr& head = s.items[0];
    std::vector<TermPtr> kids;
    for (std::size_t i = 1; i < s.items.size(); ++i) kids.push_back(type_term(s.items[i]));
    if (head.kind == SExpr::Kind::Symbol && head.text == "->") {
      if (kids.size() < 2) {
        fail(s, "function type needs at least two components", {"type"});
        return b.tyterm(mlang::t_top());
      }
      return mlang::mk_term(mlang::l_key(Keyword::Arrow), mlang::t_type(), b.id(), std::move(kids));
    }
    if (head.kind == SExpr::Kind::Symbol && (head.text == "|" || head.text == "&")) {
      if (kids.size() != 2) {
        fail(s, "type connective needs two components", {"type"});
        return b.tyterm(mlang::t_top());
      }
      return mlang::mk_term(mlang::l_sym(head.text), mlang::t_type(), b.id(), std::move(kids));
    }
    if (head.kind == SExpr::Kind::Symbol) {
      return mlang::mk_term(mlang::l_sym(head.text), mlang::t_type(), b.id(), std::move(kids));
    }
    fail(s, "unsupported type expression", {"type"});
    return b.tyterm(mlang::t_top());
  }

  /// Expression position.  `live` adds activation markers to applications.
  TermPtr expr_term(const SExpr& s, bool live) {
    if (s.kind == SExpr::Kind::Variable) return b.var(s.text, mlang::t_toptype());
    if (s.kind == SExpr::Kind::Symbol) return b.sym(s.text, mlang::t_toptype());
    if (s.items.empty()) {
      fail(s, "empty expression", {"expression"});
      return b.nul();
    }
    const SExpr& head = s.items[0];
    if (head.kind == SExpr::Kind::Symbol && head.text == "@" && s.items.size() == 2) {
      // Idempotent with the automatic activation of live applications.
      TermPtr inner = expr_term(s.items[1], live);
      if (inner->head.is_key(Keyword::Activate)) return inner;
      return b.activate(std::move(inner));
    }
    // Application chain: (f a b) is ((f a) b).
    TermPtr out = expr_term(head, live);
    for (std::size_t i = 1; i < s.items.size(); ++i) {
      out = b.app(std::move(out), expr_term(s.items[i], live), mlang::t_toptype(), live);
    }
    return out;
  }

  TermPtr atom(const SExpr& s) {
    if (s.kind != SExpr::Kind::List || s.items.empty()) {
      return expr_term(s, true);
    }
    const SExpr& head = s.items[0];
    if (head.kind != SExpr::Kind::Symbol) return expr_term(s, true);
    const std::string& h = head.text;
    auto need = [&](std::size_t n) {
      if (s.items.size() != n + 1) {
        fail(s, "'" + h + "' atom needs " + std::to_string(n) + " arguments", {")"});
        return false;
      }
      return true;
    };
    if (h == ":") {
      if (!need(2)) return b.nul();
      return mlang::mk_term(mlang::l_key(Keyword::Colon), mlang::t_judg(), b.id(),
                            {expr_term(s.items[1], false), type_term(s.items[2])});
    }
    if (h == "<=") {
      if (!need(2)) return b.nul();
      return mlang::mk_term(mlang::l_key(Keyword::Leq), mlang::t_judg(), b.id(),
                            {type_term(s.items[1]), type_term(s.items[2])});
    }
    if (h == "=") {
      if (!need(2)) return b.nul();
      return mlang::mk_term(mlang::l_key(Keyword::Equals), mlang::t_judg(), b.id(),
                            {expr_term(s.items[1], false), expr_term(s.items[2], true)});
    }
    if (h == "Eq") {
      if (!need(3)) return b.nul();
      return mlang::mk_term(mlang::l_key(Keyword::EqType), mlang::t_type(), b.id(),
                            {type_term(s.items[1]), expr_term(s.items[2], false),
                             expr_term(s.items[3], false)});
    }
    if (h == "trans") {
      if (!need(2)) return b.nul();
      return b.trans(expr_term(s.items[1], false), expr_term(s.items[2], true));
    }
    if (h == "@") {
      if (!need(1)) return b.nul();
      TermPtr inner = expr_term(s.items[1], true);
      if (inner->head.is_key(Keyword::Activate)) return inner;
      return b.activate(std::move(inner));
    }
    if (h == "!") {
      if (!need(1)) return b.nul();
      return b.pointed(expr_term(s.items[1], true));
    }
    return expr_term(s, true);
  }
};

}  // namespace

Parsed<std::vector<mlang::TermPtr>> parse_atoms(const std::string& text) {
  auto sexprs = parse_sexprs(text);
  if (!sexprs.ok()) return {std::nullopt, sexprs.error};
  AtomBuilder ab;
  std::vector<mlang::TermPtr> out;
  for (const auto& s : *sexprs) {
    out.push_back(ab.atom(s));
    if (ab.error) return {std::nullopt, ab.error};
  }
  return {std::move(out), std::nullopt};
}

namespace {

void print_rec(const TermPtr& t, std::ostringstream& os) {
  const auto& h = t->head;
  if (t->kids.empty()) {
    if (h.is<mlang::BaseLabel::Ty>()) {
      os << h.as<mlang::BaseLabel::Ty>().type.show();
    } else {
      os << h.show();
    }
    return;
  }
  os << "(";
  if (!h.is_key(Keyword::FunApp)) {
    os << h.show();
    for (const auto& k : t->kids) {
      os << " ";
      print_rec(k, os);
    }
  } else {
    print_rec(t->kids[0], os);
    os << " ";
    print_rec(t->kids[1], os);
  }
  os << ")";
}

}  // namespace

std::string print_atom(const mlang::TermPtr& atom) {
  std::ostringstream os;
  print_rec(atom, os);
  return os.str();
}

// ---------------------------------------------------------------------------
// Object-language parsing

namespace {

enum class Tok {
  End,
  LParen,
  RParen,
  LBrack,
  RBrack,
  Lambda,
  Dot,
  Colon,
  Comma,
  Arrow,
  Pipe,
  Amp,
  Ident,
  Number,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  SourceSpan span;
};

struct Lexer {
  Cursor cur;
  std::optional<ParseError> error;

  Token next() {
    cur.skip_space_and_comments();
    Token t;
    t.span = cur.here();
    if (cur.eof()) {
      t.kind = Tok::End;
      return t;
    }
    char c = cur.peek();
    auto single = [&](Tok k) {
      cur.advance();
      t.kind = k;
      t.text = std::string(1, c);
      return t;
    };
    switch (c) {
      case '(': return single(Tok::LParen);
      case ')': return single(Tok::RParen);
      case '[': return single(Tok::LBrack);
      case ']': return single(Tok::RBrack);
      case '\\': return single(Tok::Lambda);
      case '.': return single(Tok::Dot);
      case ':': return single(Tok::Colon);
      case ',': return single(Tok::Comma);
      case '|': return single(Tok::Pipe);
      case '&': return single(Tok::Amp);
      default: break;
    }
    if (c == '-' && cur.pos + 1 < cur.text.size() && cur.text[cur.pos + 1] == '>') {
      cur.advance();
      cur.advance();
      t.kind = Tok::Arrow;
      t.text = "->";
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string num;
      while (!cur.eof() && (std::isdigit(static_cast<unsigned char>(cur.peek())) || cur.peek() == '.')) {
        num += cur.advance();
      }
      t.kind = Tok::Number;
      t.text = num;
      t.span.length = num.size();
      return t;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$') {
      std::string id;
      while (!cur.eof() && (std::isalnum(static_cast<unsigned char>(cur.peek())) ||
                            cur.peek() == '_' || cur.peek() == '\'' || cur.peek() == '$')) {
        id += cur.advance();
      }
      t.kind = Tok::Ident;
      t.text = id;
      t.span.length = id.size();
      return t;
    }
    error = ParseError{t.span, std::string("unexpected character '") + c + "'", {"token"}};
    t.kind = Tok::End;
    return t;
  }
};

struct ObjParser {
  std::vector<Token> toks;
  std::size_t pos = 0;
  std::optional<ParseError> error;

  explicit ObjParser(const std::string& text) {
    Lexer lex{Cursor{text}, std::nullopt};
    while (true) {
      Token t = lex.next();
      if (lex.error) {
        error = lex.error;
        break;
      }
      bool end = t.kind == Tok::End;
      toks.push_back(std::move(t));
      if (end) break;
    }
  }

  const Token& peek() const { return toks[std::min(pos, toks.size() - 1)]; }
  const Token& advance() { return toks[std::min(pos++, toks.size() - 1)]; }

  void fail(std::string message, std::vector<std::string> expected = {}) {
    if (!error) error = ParseError{peek().span, std::move(message), std::move(expected)};
  }

  bool expect(Tok k, const char* what) {
    if (peek().kind == k) {
      advance();
      return true;
    }
    fail(std::string("unexpected token '") + peek().text + "'", {what});
    return false;
  }

  // Types -------------------------------------------------------------

  pdts::TypeP type_atom() {
    if (peek().kind == Tok::LParen) {
      advance();
      pdts::TypeP first = type();
      if (!first) return nullptr;
      if (peek().kind == Tok::Pipe || peek().kind == Tok::Amp) {
        bool is_union = peek().kind == Tok::Pipe;
        advance();
        pdts::TypeP second = type();
        if (!second) return nullptr;
        if (!expect(Tok::RParen, ")")) return nullptr;
        return is_union ? pdts::ty_union(first, second) : pdts::ty_inter(first, second);
      }
      if (!expect(Tok::RParen, ")")) return nullptr;
      return first;
    }
    if (peek().kind == Tok::Ident) {
      std::string name = advance().text;
      if (name == "D" && peek().kind == Tok::LParen) {
        advance();
        pdts::TypeP inner = type();
        if (!inner) return nullptr;
        if (!expect(Tok::RParen, ")")) return nullptr;
        return pdts::ty_dist(inner);
      }
      if (name == "Type") return pdts::ty_type();
      return pdts::ty_base(name);
    }
    fail("expected a type", {"type"});
    return nullptr;
  }

  pdts::TypeP type() {
    pdts::TypeP lhs = type_atom();
    if (!lhs) return nullptr;
    if (peek().kind == Tok::Arrow) {
      advance();
      pdts::TypeP rhs = type();
      if (!rhs) return nullptr;
      return pdts::ty_arrow(lhs, rhs);
    }
    return lhs;
  }

  // Probabilistic expressions ------------------------------------------

  pdts::ExprP pdts_atom() {
    if (peek().kind == Tok::LParen) {
      advance();
      pdts::ExprP e = pdts_expr();
      if (!e) return nullptr;
      if (!expect(Tok::RParen, ")")) return nullptr;
      return e;
    }
    if (peek().kind == Tok::Ident) {
      std::string name = advance().text;
      if (name == "random" && peek().kind == Tok::LBrack) {
        advance();
        if (peek().kind != Tok::Number) {
          fail("expected a weight", {"number"});
          return nullptr;
        }
        double rho = std::stod(advance().text);
        if (!expect(Tok::RBrack, "]")) return nullptr;
        if (!expect(Tok::LParen, "(")) return nullptr;
        pdts::ExprP l = pdts_expr();
        if (!l) return nullptr;
        if (!expect(Tok::Comma, ",")) return nullptr;
        pdts::ExprP r = pdts_expr();
        if (!r) return nullptr;
        if (!expect(Tok::RParen, ")")) return nullptr;
        if (rho < 0.0 || rho > 1.0) {
          fail("weight must lie in [0, 1]");
          return nullptr;
        }
        return pdts::e_random(rho, l, r);
      }
      if ((name == "sample" || name == "thunk") && peek().kind == Tok::LParen) {
        advance();
        pdts::ExprP inner = pdts_expr();
        if (!inner) return nullptr;
        if (!expect(Tok::RParen, ")")) return nullptr;
        return name == "sample" ? pdts::e_sample(inner) : pdts::e_thunk(inner);
      }
      return pdts::e_var(name);
    }
    fail("expected an expression", {"expression"});
    return nullptr;
  }

  pdts::ExprP pdts_expr() {
    if (peek().kind == Tok::Lambda) {
      advance();
      if (peek().kind != Tok::Ident) {
        fail("expected a binder", {"identifier"});
        return nullptr;
      }
      std::string var = advance().text;
      if (!expect(Tok::Colon, ":")) return nullptr;
      pdts::TypeP ty = type();
      if (!ty) return nullptr;
      if (!expect(Tok::Dot, ".")) return nullptr;
      pdts::ExprP body = pdts_expr();
      if (!body) return nullptr;
      return pdts::e_lam(var, ty, body);
    }
    pdts::ExprP out = pdts_atom();
    if (!out) return nullptr;
    while (!error && (peek().kind == Tok::Ident || peek().kind == Tok::LParen)) {
      pdts::ExprP arg = pdts_atom();
      if (!arg) return nullptr;
      out = pdts::e_app(out, arg);
    }
    return out;
  }

  // Simply typed / untyped lambda calculus ------------------------------

  stlc::TypeP stlc_type_of(const pdts::TypeP& t) {
    if (const auto* b = std::get_if<pdts::Type::Base>(&t->v)) return stlc::ty_base(b->name);
    if (const auto* p = std::get_if<pdts::Type::Pi>(&t->v)) {
      if (const auto* tv = std::get_if<pdts::Expr::TyVal>(&p->body->v)) {
        return stlc::ty_arrow(stlc_type_of(p->dom), stlc_type_of(tv->type));
      }
    }
    fail("type is outside the simply typed fragment");
    return nullptr;
  }

  stlc::ExprP stlc_expr() {
    if (peek().kind == Tok::Lambda) {
      advance();
      if (peek().kind != Tok::Ident) {
        fail("expected a binder", {"identifier"});
        return nullptr;
      }
      std::string var = advance().text;
      stlc::TypeP ty;
      if (peek().kind == Tok::Colon) {
        advance();
        pdts::TypeP pt = type();
        if (!pt) return nullptr;
        ty = stlc_type_of(pt);
        if (!ty) return nullptr;
      }
      if (!expect(Tok::Dot, ".")) return nullptr;
      stlc::ExprP body = stlc_expr();
      if (!body) return nullptr;
      return stlc::e_lam(var, ty, body);
    }
    stlc::ExprP out = stlc_atom();
    if (!out) return nullptr;
    while (!error && (peek().kind == Tok::Ident || peek().kind == Tok::LParen)) {
      stlc::ExprP arg = stlc_atom();
      if (!arg) return nullptr;
      out = stlc::e_app(out, arg);
    }
    return out;
  }

  stlc::ExprP stlc_atom() {
    if (peek().kind == Tok::LParen) {
      advance();
      stlc::ExprP e = stlc_expr();
      if (!e) return nullptr;
      if (!expect(Tok::RParen, ")")) return nullptr;
      return e;
    }
    if (peek().kind == Tok::Ident) return stlc::e_var(advance().text);
    fail("expected an expression", {"expression"});
    return nullptr;
  }

  // Sorted calculus ------------------------------------------------------

  pts::ExprP pts_expr() {
    if (peek().kind == Tok::Lambda) {
      advance();
      if (peek().kind != Tok::Ident) {
        fail("expected a binder", {"identifier"});
        return nullptr;
      }
      std::string var = advance().text;
      if (!expect(Tok::Colon, ":")) return nullptr;
      pts::ExprP ty = pts_expr_no_app();
      if (!ty) return nullptr;
      if (!expect(Tok::Dot, ".")) return nullptr;
      pts::ExprP body = pts_expr();
      if (!body) return nullptr;
      return pts::e_lam(var, ty, body);
    }
    if (peek().kind == Tok::Ident && peek().text == "Pi") {
      advance();
      if (peek().kind != Tok::Ident) {
        fail("expected a binder", {"identifier"});
        return nullptr;
      }
      std::string var = advance().text;
      if (!expect(Tok::Colon, ":")) return nullptr;
      pts::ExprP ty = pts_expr_no_app();
      if (!ty) return nullptr;
      if (!expect(Tok::Dot, ".")) return nullptr;
      pts::ExprP body = pts_expr();
      if (!body) return nullptr;
      return pts::e_pi(var, ty, body);
    }
    pts::ExprP out = pts_atom();
    if (!out) return nullptr;
    while (!error && (peek().kind == Tok::Ident || peek().kind == Tok::LParen)) {
      if (peek().text == "Pi") break;
      pts::ExprP arg = pts_atom();
      if (!arg) return nullptr;
      out = pts::e_app(out, arg);
    }
    return out;
  }

  pts::ExprP pts_expr_no_app() { return pts_atom(); }

  pts::ExprP pts_atom() {
    if (peek().kind == Tok::LParen) {
      advance();
      pts::ExprP e = pts_expr();
      if (!e) return nullptr;
      if (!expect(Tok::RParen, ")")) return nullptr;
      return e;
    }
    if (peek().kind == Tok::Ident) {
      std::string name = advance().text;
      if (name.size() > 1 && name[0] == 's' &&
          std::all_of(name.begin() + 1, name.end(),
                      [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
        return pts::e_sort(static_cast<std::uint32_t>(std::stoul(name.substr(1))));
      }
      return pts::e_var(name);
    }
    fail("expected an expression", {"expression"});
    return nullptr;
  }

  bool at_end() { return peek().kind == Tok::End; }
};

template <typename T>
Parsed<T> finish(ObjParser& p, T value) {
  if (p.error) return {std::nullopt, p.error};
  if (!p.at_end()) {
    return {std::nullopt,
            ParseError{p.peek().span, "trailing input after the expression", {"end of input"}}};
  }
  return {std::move(value), std::nullopt};
}

}  // namespace

Parsed<stlc::ExprP> parse_stlc(const std::string& text) {
  ObjParser p(text);
  if (p.error) return {std::nullopt, p.error};
  stlc::ExprP e = p.stlc_expr();
  if (!e) return {std::nullopt, p.error};
  return finish(p, std::move(e));
}

Parsed<pdts::ExprP> parse_pdts(const std::string& text) {
  ObjParser p(text);
  if (p.error) return {std::nullopt, p.error};
  pdts::ExprP e = p.pdts_expr();
  if (!e) return {std::nullopt, p.error};
  return finish(p, std::move(e));
}

Parsed<pts::ExprP> parse_pts_expr(const std::string& text) {
  ObjParser p(text);
  if (p.error) return {std::nullopt, p.error};
  pts::ExprP e = p.pts_expr();
  if (!e) return {std::nullopt, p.error};
  return finish(p, std::move(e));
}

Parsed<pts::Spec> parse_pts_spec(const std::string& text) {
  pts::Spec spec;
  std::istringstream in(text);
  std::string line;
  std::uint32_t lineno = 0;
  auto err = [&](const std::string& msg) -> Parsed<pts::Spec> {
    return {std::nullopt, ParseError{{lineno, 1, 0, 0}, msg, {}}};
  };
  auto sort_index = [](const std::string& s) -> std::optional<std::uint32_t> {
    if (s.size() < 2 || s[0] != 's') return std::nullopt;
    for (std::size_t i = 1; i < s.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) return std::nullopt;
    }
    return static_cast<std::uint32_t>(std::stoul(s.substr(1)));
  };
  while (std::getline(in, line)) {
    ++lineno;
    std::string stripped;
    for (char c : line) {
      if (c == ';') break;
      stripped += c;
    }
    std::istringstream ls(stripped);
    std::string word;
    if (!(ls >> word)) continue;
    if (word == "sorts") {
      if (!(ls >> spec.sorts)) return err("expected a sort count");
    } else if (word == "axiom") {
      std::string rest;
      std::getline(ls, rest);
      auto parsed = parse_sexprs(rest);
      if (!parsed.ok() || (*parsed).size() != 1 || (*parsed)[0].items.size() != 3) {
        return err("expected axiom (s1 : s2)");
      }
      const auto& it = (*parsed)[0].items;
      auto m = sort_index(it[0].text);
      auto n = sort_index(it[2].text);
      if (!m || !n || it[1].text != ":") return err("expected axiom (s1 : s2)");
      spec.axioms.insert({*m, *n});
    } else if (word == "rule") {
      std::string rest;
      std::getline(ls, rest);
      std::string cleaned;
      for (char c : rest) cleaned += (c == ',') ? ' ' : c;
      auto parsed = parse_sexprs(cleaned);
      if (!parsed.ok() || (*parsed).size() != 1 || (*parsed)[0].items.size() != 3) {
        return err("expected rule (s1, s2, s3)");
      }
      const auto& it = (*parsed)[0].items;
      auto l = sort_index(it[0].text);
      auto m = sort_index(it[1].text);
      auto n = sort_index(it[2].text);
      if (!l || !m || !n) return err("expected rule (s1, s2, s3)");
      spec.rules.insert({*l, *m, *n});
    } else {
      return err("unknown directive '" + word + "'");
    }
  }
  return {std::move(spec), std::nullopt};
}

Lang detect_language(const std::string& src, bool has_pts_spec) {
  if (has_pts_spec) return Lang::Pts;
  auto mentions = [&](const std::string& word) {
    std::size_t at = src.find(word);
    while (at != std::string::npos) {
      bool left_ok = at == 0 || !std::isalnum(static_cast<unsigned char>(src[at - 1]));
      std::size_t end = at + word.size();
      bool right_ok = end >= src.size() || !std::isalnum(static_cast<unsigned char>(src[end]));
      if (left_ok && right_ok) return true;
      at = src.find(word, at + 1);
    }
    return false;
  };
  if (mentions("random") || mentions("sample") || mentions("thunk") || mentions("D")) {
    return Lang::Pdts;
  }
  // Untyped when some lambda lacks an annotation: "\x." vs "\x:".
  std::size_t at = 0;
  while ((at = src.find('\\', at)) != std::string::npos) {
    std::size_t i = at + 1;
    while (i < src.size() && (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_' ||
                              src[i] == '\'')) {
      ++i;
    }
    while (i < src.size() && std::isspace(static_cast<unsigned char>(src[i]))) ++i;
    if (i >= src.size() || src[i] != ':') return Lang::Untyped;
    ++at;
  }
  return Lang::Stlc;
}

}  // namespace mtg::frontend
