/*
 * Copyright 2026 the mettagraph authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "mettagraph/error.hpp"

namespace mtg::stlc {

struct Type;
using TypeP = std::shared_ptr<const Type>;

struct Type {
  struct Base {
    std::string name;
  };
  struct Arrow {
    TypeP dom;
    TypeP cod;
  };
  std::variant<Base, Arrow> v;

  bool operator==(const Type& other) const;
  std::string show() const;
};

TypeP ty_base(std::string name);
TypeP ty_arrow(TypeP dom, TypeP cod);

struct Expr;
using ExprP = std::shared_ptr<const Expr>;

struct Expr {
  struct Var {
    std::string name;
  };
  struct App {
    ExprP fn;
    ExprP arg;
  };
  /// Untyped terms carry a null annotation.
  struct Lam {
    std::string var;
    TypeP type;
    ExprP body;
  };
  std::variant<Var, App, Lam> v;
};

ExprP e_var(std::string name);
ExprP e_app(ExprP fn, ExprP arg);
ExprP e_lam(std::string var, TypeP type, ExprP body);

/// Contexts bind each variable at most once.
using Context = std::map<std::string, TypeP>;

struct TypeError : Error {
  using Error::Error;
};

/// Principal type under the context; throws TypeError on unbound variables
/// and application mismatches.
TypeP typecheck(const Context& ctx, const ExprP& e);

/// One result per redex, in leftmost-outermost position order.
/// Substitution is capture-avoiding.
std::vector<ExprP> beta_step(const ExprP& e);

/// Normal form by leftmost-outermost reduction; throws BudgetError.
ExprP normalize(const ExprP& e, std::size_t budget);

ExprP subst(const ExprP& e, const std::string& var, const ExprP& value);

bool alpha_eq(const ExprP& a, const ExprP& b);

std::vector<std::string> free_vars(const ExprP& e);

std::size_t node_count(const ExprP& e);

std::string show(const ExprP& e);

}  // namespace mtg::stlc
