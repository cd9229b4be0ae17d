/*
 * Copyright 2026 the mettagraph authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mettagraph/atomspace.hpp"

namespace mtg::mlang {

/// Rule metagraphs carry a side marker per node (left-hand side, right-hand
/// side, or both) and input/output markers on the distinguished nodes.
enum class Side : std::uint8_t { L, R, LR };
enum class Marker : std::uint8_t { None, In, Out };

struct RuleTerm;
using RuleTermPtr = std::shared_ptr<const RuleTerm>;

struct RuleTerm {
  BaseLabel head;
  TypeExpr type;
  std::uint64_t id = 0;
  Side side = Side::L;
  Marker marker = Marker::None;
  std::vector<RuleTermPtr> kids;
};

RuleTermPtr annotate(const TermPtr& t, Side side, Marker root_marker = Marker::None);
std::size_t count_markers(const RuleTermPtr& t, Marker m);

/// A grounded rewrite rule: the input assembly (deleted), the output
/// assembly (created), the preserved nodes shared by both sides, and the
/// gluing homomorphism (identity on the preserved nodes).
struct RuleGraph {
  enum class Kind : std::uint8_t { FunApp, Trans };

  Kind kind = Kind::FunApp;
  RuleTermPtr input;
  RuleTermPtr output;
  std::vector<RuleTermPtr> preserved;
  std::map<std::uint64_t, std::uint64_t> glue;

  /// Host position of the redex (the node under its activation marker).
  PointerPos redex;

  /// Trans rules carry their fully instantiated result.
  TermPtr result;
};

using Bindings = std::map<std::string, TermPtr>;

struct Match {
  std::size_t atom = 0;  // for equation matches: the equation atom index
  Path path;
  Bindings bindings;
};

/// Root-anchored structural match.  Pattern variables bind host subtrees
/// (consistently, up to ids); activation wrappers on the host side are
/// transparent; bindings must sit below the variable's type tag.
std::optional<Bindings> match_at(const TermPtr& pattern, const TermPtr& host,
                                 const Atomspace& space);

/// The complete match set of `pattern` over every subterm position of the
/// host, in canonical (atom index, preorder path) order.
std::vector<Match> match(const TermPtr& pattern, const Atomspace& host);

/// Matches against whole atoms only; supports (and p q) conjunctions.
/// Used by transform grounding.
std::vector<Match> match_atoms(const TermPtr& pattern, const Atomspace& host);

/// Instantiates a template: bound variables are replaced by their images,
/// unbound ones are renamed fresh, and every node gets a fresh edge id.
TermPtr instantiate(const TermPtr& tmpl, const Bindings& bindings, Atomspace& host);

/// Builds the grounded function-application rule for the activated redex at
/// `pos`.  Matching the rule against the host enumerates the applicable
/// equations.
RuleGraph instantiate_funapp(const PointerPos& pos, const Atomspace& host);

/// Builds the grounded transform rule: the output tuple holds one
/// instantiated template per pattern match, padded with nul values up to
/// the number of atoms in the host.
RuleGraph instantiate_trans(const PointerPos& pos, const Atomspace& host);

/// Equation matches applicable to a funapp rule (empty for trans rules,
/// which carry their result).
std::vector<Match> rule_matches(const RuleGraph& rule, const Atomspace& host);

/// Applies the rule at one match: deletes the redex and its activation
/// marker, splices the instantiated output, and moves the pointer to the
/// output root.  A result that violates the space constraints yields the
/// host unchanged.
Atomspace apply_rule(const RuleGraph& rule, const Atomspace& host, const Match& m);

struct StepInfo {
  std::size_t step = 0;
  std::string rule;  // "funapp" | "trans" | "move-pointer"
  std::string position;
  std::vector<std::string> successors;  // canonical state hashes
};
using TraceFn = std::function<void(const StepInfo&)>;

/// One evaluation step.  Empty result means the state is a normal form.
///
/// When the pointed node is activated: move the pointer to its first
/// activated target if any; otherwise apply every valid rewrite; otherwise
/// drop the stale activation marker.  When it is not activated: climb to
/// the nearest activated ancestor, or halt.
std::vector<Atomspace> update(const Atomspace& space);

/// Kind of move the next update would make; used for trace labels.
std::string update_kind(const Atomspace& space);

struct EvalResult {
  bool exhausted = false;  // step budget hit
  bool diverged = false;   // some reachable state cannot reach a normal form
  std::size_t steps = 0;
  std::vector<Atomspace> normal_forms;
  std::vector<Atomspace> frontier;

  bool terminated() const { return !exhausted && !diverged; }
};

using Observer = std::function<void(const Atomspace&, const std::vector<Atomspace>&)>;

/// Breadth-first closure of update, visiting at most `budget` states.
EvalResult evaluate(const Atomspace& space, std::size_t budget, const TraceFn& trace = nullptr,
                    const Observer& observer = nullptr);

/// Advances micro-steps (pointer moves, marker drops) until a state with
/// rewrite successors or a halted state is reached.  Bounded by `fuel`.
Atomspace quiesce(const Atomspace& space, std::size_t fuel = 10000);

/// True when the next update of the state applies a rewrite (as opposed to
/// a pointer move or halt).
bool rewrite_pending(const Atomspace& space);

/// One compressed step: rewrites reachable after internal moves, each
/// advanced to its own quiescent state.
std::vector<Atomspace> compressed_step(const Atomspace& space);

}  // namespace mtg::mlang
