/*
 * Copyright 2026 the mettagraph authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mettagraph/atomspace.hpp"
#include "mettagraph/pdts.hpp"
#include "mettagraph/pts.hpp"
#include "mettagraph/stlc.hpp"

namespace mtg::frontend {

struct SourceSpan {
  std::uint32_t line = 1;
  std::uint32_t col = 1;
  std::size_t offset = 0;
  std::size_t length = 0;
};

struct ParseError {
  SourceSpan span;
  std::string message;
  std::vector<std::string> expected;

  std::string to_string() const;
};

/// Parse result: a value or a positioned error.
template <typename T>
struct Parsed {
  std::optional<T> value;
  std::optional<ParseError> error;

  bool ok() const { return value.has_value(); }
  const T& operator*() const { return *value; }
};

/// Generic s-expressions: lists, symbols, $-variables.
struct SExpr {
  enum class Kind { List, Symbol, Variable };
  Kind kind = Kind::Symbol;
  std::string text;
  std::vector<SExpr> items;
  SourceSpan span;
};

Parsed<std::vector<SExpr>> parse_sexprs(const std::string& text);

/// Atom files: one atom per expression, `;` comments.
///   (: f (-> A B))   (<= t1 t2)   (= (f $x) $x)   (@ e)   (! e)
Parsed<std::vector<mlang::TermPtr>> parse_atoms(const std::string& text);

/// Surface printing; parse of the output yields the same terms up to ids.
std::string print_atom(const mlang::TermPtr& atom);

/// Object-language expressions:
///   \x:A. e | \x. e | e1 e2 | x | random[0.3](e1,e2) | sample(e) | thunk(e)
/// with types  A | A -> B | D(A) | (A | B) | (A & B).
Parsed<stlc::ExprP> parse_stlc(const std::string& text);
Parsed<pdts::ExprP> parse_pdts(const std::string& text);

/// Adds `Pi x:e. e`, sorts s1..sN, and expression-level annotations.
Parsed<pts::ExprP> parse_pts_expr(const std::string& text);

/// Spec files: `sorts N`, `axiom (s1 : s2)`, `rule (s1, s2, s3)` lines.
Parsed<pts::Spec> parse_pts_spec(const std::string& text);

enum class Lang { Stlc, Untyped, Pdts, Pts };

/// Classifies a source string: spec present means the sorted calculus,
/// probabilistic constructs mean the probabilistic one, annotations decide
/// between the typed and untyped lambda calculi.
Lang detect_language(const std::string& src, bool has_pts_spec);

}  // namespace mtg::frontend
