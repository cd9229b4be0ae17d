/*
 * Copyright 2026 the mettagraph authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mettagraph/atomspace.hpp"
#include "mettagraph/lts.hpp"

namespace mtg::minisys {

/// The two-value demo system: one type constant with values v1 and v2, the
/// swap function f1, and the sample/thunk pair.  Expressions are bounded
/// to at most three subexpressions.
struct Expr;
using ExprP = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { V1, V2, F1, Thunk, Sample };
  Kind kind;
  ExprP kid;  // null for the values
};

ExprP v1();
ExprP v2();
ExprP f1(ExprP e);
ExprP thunk(ExprP e);
ExprP sample(ExprP e);

std::string show(const ExprP& e);
std::size_t size(const ExprP& e);
bool equal(const ExprP& a, const ExprP& b);

/// "A", "D(A)", "D(D(A))"; empty for ill-typed terms.
std::optional<std::string> type_of(const ExprP& e);

/// One leftmost-innermost reduction: f1 swaps the values, forced thunks
/// collapse.  Empty at normal forms.
std::optional<ExprP> beta3(const ExprP& e);

/// Every well-typed expression with at most three subexpressions.
std::vector<ExprP> enumerate_terms();

/// The pointed atomspace encoding of one expression.  `swapped` replaces
/// the f1 equations with identities (the mutation check).
mlang::Atomspace encode(const ExprP& e, bool swapped = false);

/// Decodes a stored expression atom.
ExprP decode(const mlang::TermPtr& t);

struct Systems {
  lts::System str1;  // atomspace states under compressed engine steps
  lts::System str2;  // expressions under direct case analysis
  /// start-state indices: pairs (str1 index, str2 index) per enumerated
  /// expression, in enumeration order
  std::vector<std::pair<std::size_t, std::size_t>> starts;
};

/// Builds both transition systems over the full enumerated fragment, with
/// typing and constant-identity probes as self-loop observations.
Systems build_systems(bool swapped = false);

struct DemoResult {
  lts::BisimVerdict verdict;
  std::size_t relation_size = 0;
  std::size_t state_count_str1 = 0;
  std::size_t state_count_str2 = 0;
  bool pairing_in_relation = false;  // every (e, encode(e)) pair matched
  bool transfer_verified = false;    // relation re-checked pairwise
};

DemoResult prove_bisim(bool swapped = false);

}  // namespace mtg::minisys
