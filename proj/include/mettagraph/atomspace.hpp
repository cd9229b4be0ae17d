/*
 * Copyright 2026 the mettagraph authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mettagraph/mtype.hpp"

namespace mtg::mlang {

struct Term;
using TermPtr = std::shared_ptr<const Term>;

/// Kid-index path into a term.
using Path = std::vector<std::uint32_t>;

/// Tree view of an atom.  Every node is one edge: a base label, the node's
/// type tag, the edge id, and the child subgraphs wired to its targets.
struct Term {
  BaseLabel head;
  TypeExpr type;
  std::uint64_t id = 0;
  std::vector<TermPtr> kids;
};

TermPtr mk_term(BaseLabel head, TypeExpr type, std::uint64_t id, std::vector<TermPtr> kids = {});
TermPtr mk_leaf(BaseLabel head, TypeExpr type, std::uint64_t id);

/// Structural equality ignoring edge ids.
bool term_iso(const TermPtr& a, const TermPtr& b);

/// Canonical print, ids stripped; usable as a state key component.
std::string term_key(const TermPtr& t);

/// Surface-style print: (: f (-> A B)), ($x), (@ ...), ...
std::string term_show(const TermPtr& t);

const Term& subterm_at(const TermPtr& root, const Path& path);
TermPtr subterm_ptr_at(const TermPtr& root, const Path& path);
TermPtr replace_at(const TermPtr& root, const Path& path, const TermPtr& replacement);

/// Renders the term as a typed metagraph: the head edge's targets are wired
/// to the kids' roots through one connect layer per kid.
MGraph term_to_graph(const TermPtr& t);

/// Inverse of term_to_graph; throws TypeShapeError on graphs outside the
/// supported encoding.
TermPtr graph_to_term(const MGraph& g);

/// Decodes type-denoting terms: bare type leaves, arrow trees, union and
/// intersection trees, applied constructors.
std::optional<TypeExpr> term_as_type(const TermPtr& t);

/// Builds the term tree denoting a type expression.  `next_id` supplies
/// fresh edge ids and is advanced.
TermPtr type_to_term(const TypeExpr& t, std::uint64_t& next_id);

/// Substitutes `value` for every Var(name) leaf of `t`.
TermPtr term_subst_var(const TermPtr& t, const std::string& name, const TermPtr& value);

/// All variable names occurring in the term.
std::vector<std::string> term_vars(const TermPtr& t);

bool term_contains_pointer(const TermPtr& t);

struct PointerPos {
  std::size_t atom = 0;
  Path path;
  bool operator==(const PointerPos& other) const = default;
};

/// Convenience constructor set for atoms.  Allocates edge ids from its own
/// counter; spaces absorb the ids on insertion.
struct Builder {
  std::uint64_t next_id = 1;

  std::uint64_t id() { return next_id++; }

  TermPtr sym(const std::string& name, TypeExpr type) {
    return mk_leaf(l_sym(name), std::move(type), id());
  }
  TermPtr var(const std::string& name, TypeExpr type) {
    return mk_leaf(l_var(name), std::move(type), id());
  }
  TermPtr tyterm(const TypeExpr& t) { return type_to_term(t, next_id); }
  TermPtr nul() { return mk_leaf(l_nul(), t_top(), id()); }

  /// Application node; `activated` wraps it with an activation marker.
  TermPtr app(TermPtr fn, TermPtr arg, TypeExpr result, bool activated = false) {
    TermPtr node = mk_term(l_key(Keyword::FunApp), std::move(result), id(),
                           {std::move(fn), std::move(arg)});
    if (!activated) return node;
    return activate(std::move(node));
  }
  TermPtr activate(TermPtr node) {
    return mk_term(l_key(Keyword::Activate), t_exec(), id(), {std::move(node)});
  }
  TermPtr typing(TermPtr subject, const TypeExpr& type) {
    return mk_term(l_key(Keyword::Colon), t_judg(), id(), {std::move(subject), tyterm(type)});
  }
  TermPtr leq(const TypeExpr& a, const TypeExpr& b) {
    return mk_term(l_key(Keyword::Leq), t_judg(), id(), {tyterm(a), tyterm(b)});
  }
  TermPtr equation(TermPtr lhs, TermPtr rhs) {
    return mk_term(l_key(Keyword::Equals), t_judg(), id(), {std::move(lhs), std::move(rhs)});
  }
  TermPtr trans(TermPtr pattern, TermPtr tmpl, bool activated = false) {
    TermPtr node = mk_term(l_key(Keyword::Trans), t_top(), id(),
                           {std::move(pattern), std::move(tmpl)});
    if (!activated) return node;
    return activate(std::move(node));
  }
  TermPtr pointed(TermPtr expr) {
    return mk_term(l_key(Keyword::Pointer), t_exec(), id(), {std::move(expr)});
  }
};

struct MViolation {
  std::size_t atom = 0;
  Path path;
  std::string message;
};

/// An interpreter state: stored atoms, the growable subtype relation, and
/// the position of the unique evaluation pointer.
class Atomspace {
 public:
  Atomspace() = default;

  /// Adds a closed atom graph.  Judgment atoms of the form (<= t1 t2)
  /// extend the subtype relation; a (! e) root installs the pointer.
  /// Throws on shape violations or a second pointer.
  Atomspace add_atom(const MGraph& atom) const;
  Atomspace add_term(const TermPtr& atom) const;

  /// Shape and typing-side-condition checks for every stored edge.
  /// Violations are data.
  std::vector<MViolation> check_mconstraints() const;

  bool subtype_query(const TypeExpr& a, const TypeExpr& b) const;

  /// True when a typing atom relates `subject` (up to ids) to a subtype of
  /// `t`, or when the subject's own tag is below `t`.
  bool typing_query(const TermPtr& subject, const TypeExpr& t) const;

  /// Adds the tuple constructors, the projections, and their typing and
  /// equation atoms.
  Atomspace with_prelude_tuples() const;

  std::string fresh_symbol();
  std::uint64_t fresh_edge_id();

  const std::vector<TermPtr>& atoms() const { return atoms_; }
  const SubtypeRelation& relation() const { return rel_; }
  const std::optional<PointerPos>& pointer() const { return pointer_; }

  Atomspace with_pointer(PointerPos p) const;
  Atomspace without_pointer() const;
  Atomspace with_atom_replaced(std::size_t index, const TermPtr& atom) const;

  /// The pointed subterm, or null when no pointer is installed.
  TermPtr pointed() const;

  /// Renders the whole state as one metagraph: the union of the atoms, the
  /// pointed atom wrapped with a pointer marker at the pointer path.
  MGraph to_graph() const;

  /// Canonical state key: atoms up to ids, pointer position, declared
  /// subtype pairs.  Fresh-id counters are excluded.
  std::string canonical_key() const;

  std::uint64_t peek_next_id() const { return next_id_; }
  Atomspace with_next_id(std::uint64_t id) const;

 private:
  std::vector<TermPtr> atoms_;
  SubtypeRelation rel_;
  std::optional<PointerPos> pointer_;
  std::uint64_t next_id_ = 1;
  std::uint32_t next_sym_ = 1;
};

}  // namespace mtg::mlang
