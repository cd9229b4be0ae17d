/*
 * Copyright 2026 the mettagraph authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "mettagraph/error.hpp"

namespace mtg::pdts {

struct Type;
using TypeP = std::shared_ptr<const Type>;
struct Expr;
using ExprP = std::shared_ptr<const Expr>;

struct Type {
  struct Base {
    std::string name;
  };
  struct Pi {
    std::string var;
    TypeP dom;
    ExprP body;  // an expression denoting the codomain
  };
  struct Dist {
    TypeP of;
  };
  struct Union {
    TypeP lhs;
    TypeP rhs;
  };
  struct Inter {
    TypeP lhs;
    TypeP rhs;
  };
  struct TypeU {};
  std::variant<Base, Pi, Dist, Union, Inter, TypeU> v;

  bool operator==(const Type& other) const;
  std::string show() const;
};

TypeP ty_base(std::string name);
TypeP ty_pi(std::string var, TypeP dom, ExprP body);
TypeP ty_arrow(TypeP dom, TypeP cod);  // non-dependent product
TypeP ty_dist(TypeP of);
TypeP ty_union(TypeP lhs, TypeP rhs);
TypeP ty_inter(TypeP lhs, TypeP rhs);
TypeP ty_type();

struct Expr {
  struct Var {
    std::string name;
  };
  struct App {
    ExprP fn;
    ExprP arg;
  };
  struct Lam {
    std::string var;
    TypeP type;
    ExprP body;
  };
  struct Random {
    double rho;  // in [0, 1]
    ExprP left;
    ExprP right;
  };
  struct Sample {
    ExprP of;
  };
  struct Thunk {
    ExprP of;
  };
  /// A type used in expression position (product codomains).
  struct TyVal {
    TypeP type;
  };
  std::variant<Var, App, Lam, Random, Sample, Thunk, TyVal> v;
};

ExprP e_var(std::string name);
ExprP e_app(ExprP fn, ExprP arg);
ExprP e_lam(std::string var, TypeP type, ExprP body);
ExprP e_random(double rho, ExprP left, ExprP right);
ExprP e_sample(ExprP of);
ExprP e_thunk(ExprP of);
ExprP e_tyval(TypeP type);

using Context = std::map<std::string, TypeP>;

struct TypeError : Error {
  using Error::Error;
};

/// Structural subtyping: union introduction, intersection elimination,
/// contravariant product domains.
bool subtype(const TypeP& a, const TypeP& b);

TypeP typecheck(const Context& ctx, const ExprP& e);

struct WeightedStep {
  ExprP to;
  double weight = 1.0;
};

/// Weighted alternatives of the first redex in leftmost-innermost order
/// (weak: no reduction under binders).  Empty at normal forms.
std::vector<WeightedStep> step(const ExprP& e);

struct Distribution {
  /// canonical form -> (representative, total probability)
  std::map<std::string, std::pair<ExprP, double>> mass;
  /// probability stuck beyond the depth budget
  double residual = 0.0;

  double total() const;
};

/// Sums path products over all maximal weighted reduction sequences of
/// depth at most `budget`.
Distribution full_eval(const ExprP& e, std::size_t budget);

/// One stochastic reduction path; reproducible per seed.
ExprP sample_eval(const ExprP& e, std::uint64_t seed, std::size_t budget);

ExprP subst(const ExprP& e, const std::string& var, const ExprP& value);
bool alpha_eq(const ExprP& a, const ExprP& b);
std::string show(const ExprP& e);
std::size_t node_count(const ExprP& e);

}  // namespace mtg::pdts
