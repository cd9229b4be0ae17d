/*
 * Copyright 2026 the mettagraph authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "mettagraph/error.hpp"

namespace mtg::pts {

/// A pure type system: sorts s1..sN, axioms (m : n), product rules
/// (l, m, n).  No restriction on either set.
struct Spec {
  std::uint32_t sorts = 0;
  std::set<std::pair<std::uint32_t, std::uint32_t>> axioms;
  std::set<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>> rules;
};

struct Expr;
using ExprP = std::shared_ptr<const Expr>;

struct Expr {
  struct Var {
    std::string name;
  };
  struct Sort {
    std::uint32_t index;  // 1-based
  };
  struct App {
    ExprP fn;
    ExprP arg;
  };
  struct Lam {
    std::string var;
    ExprP type;
    ExprP body;
  };
  struct Pi {
    std::string var;
    ExprP type;
    ExprP body;
  };
  std::variant<Var, Sort, App, Lam, Pi> v;
};

ExprP e_var(std::string name);
ExprP e_sort(std::uint32_t index);
ExprP e_app(ExprP fn, ExprP arg);
ExprP e_lam(std::string var, ExprP type, ExprP body);
ExprP e_pi(std::string var, ExprP type, ExprP body);

/// Dependent contexts: ordered bindings.
using Context = std::vector<std::pair<std::string, ExprP>>;

struct TypeError : Error {
  using Error::Error;
};
/// Conversion checking in an arbitrary system may not normalize; budget
/// exhaustion is its own failure mode.
struct ConversionBudgetError : Error {
  using Error::Error;
};

/// The type per the system's axioms and rules, with beta-conversion up to
/// `budget` reduction steps per check.
ExprP typecheck(const Spec& spec, const Context& ctx, const ExprP& e, std::size_t budget = 4096);

std::vector<ExprP> beta_step(const ExprP& e);
ExprP normalize(const ExprP& e, std::size_t budget);
ExprP subst(const ExprP& e, const std::string& var, const ExprP& value);
bool alpha_eq(const ExprP& a, const ExprP& b);
std::vector<std::string> free_vars(const ExprP& e);
std::string show(const ExprP& e);

}  // namespace mtg::pts
