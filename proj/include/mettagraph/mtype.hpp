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
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "mettagraph/metagraph.hpp"

namespace mtg::mlang {

/// The interpreter's key symbols.
enum class Keyword : std::uint8_t {
  Colon,     // :   typing judgment
  Leq,       // <=  subtype judgment
  Equals,    // =   equation
  Arrow,     // ->  function type former
  EqType,    // Eq  equality type former
  FunApp,    // function application
  Trans,     // transform (space query)
  Activate,  // @   activation marker
  Pointer,   // !   evaluation pointer
};

const char* keyword_name(Keyword k);

struct TypeExpr;
using TypeRef = std::shared_ptr<const TypeExpr>;

struct GraphBox;
using GraphRef = std::shared_ptr<const GraphBox>;

/// Type expressions: base types, schematic type variables, applied type
/// constructors, function and dependent function types, equality types,
/// unions/intersections, and the fixed points of the hierarchy.
struct TypeExpr {
  struct Base {
    std::string name;
  };
  struct Var {
    std::string name;
  };
  struct Applied {
    std::string head;
    std::vector<TypeRef> args;
  };
  struct Arrow {
    TypeRef dom;
    TypeRef cod;
  };
  struct Pi {
    std::string var;
    TypeRef dom;
    GraphRef body;  // a metagraph denoting the codomain
  };
  struct EqType {
    TypeRef type;
    GraphRef lhs;
    GraphRef rhs;
  };
  struct Union {
    TypeRef lhs;
    TypeRef rhs;
  };
  struct Inter {
    TypeRef lhs;
    TypeRef rhs;
  };
  struct TypeU {};    // the universe of small types
  struct TopType {};  // union of all small types
  struct Top {};      // union of all types
  struct Judg {};     // judgments
  struct Exec {};     // execution states

  std::variant<Base, Var, Applied, Arrow, Pi, EqType, Union, Inter, TypeU, TopType, Top, Judg,
               Exec>
      v;

  bool operator==(const TypeExpr& other) const;
  bool operator!=(const TypeExpr& other) const { return !(*this == other); }

  template <typename T>
  bool is() const {
    return std::holds_alternative<T>(v);
  }
  template <typename T>
  const T& as() const {
    return std::get<T>(v);
  }

  /// True for the small types: everything below the union of all small
  /// types in the built-in order.
  bool is_small() const;

  /// True when the expression mentions a schematic type variable.
  bool has_var() const;

  std::string show() const;
};

TypeExpr t_base(std::string name);
TypeExpr t_tvar(std::string name);
TypeExpr t_applied(std::string head, std::vector<TypeExpr> args);
TypeExpr t_arrow(TypeExpr dom, TypeExpr cod);
/// Right-nested chain a1 -> a2 -> ... -> an.
TypeExpr t_arrow_chain(const std::vector<TypeExpr>& parts);
TypeExpr t_pi(std::string var, TypeExpr dom, GraphRef body);
TypeExpr t_eqtype(TypeExpr type, GraphRef lhs, GraphRef rhs);
TypeExpr t_union(TypeExpr lhs, TypeExpr rhs);
TypeExpr t_inter(TypeExpr lhs, TypeExpr rhs);
TypeExpr t_type();
TypeExpr t_toptype();
TypeExpr t_top();
TypeExpr t_judg();
TypeExpr t_exec();

TypeRef type_ref(TypeExpr t);

/// Edge labels: a base label paired with an edge-specific id that
/// deduplicates otherwise identical edges.
struct BaseLabel {
  struct Nul {};
  struct Sym {
    std::string name;
  };
  struct Var {
    std::string name;
  };
  struct Key {
    Keyword k;
  };
  struct Ty {
    TypeExpr type;
  };

  std::variant<Nul, Sym, Var, Key, Ty> v;

  bool operator==(const BaseLabel& other) const;
  bool operator!=(const BaseLabel& other) const { return !(*this == other); }

  template <typename T>
  bool is() const {
    return std::holds_alternative<T>(v);
  }
  template <typename T>
  const T& as() const {
    return std::get<T>(v);
  }

  bool is_key(Keyword k) const { return is<Key>() && as<Key>().k == k; }

  std::string show() const;
};

BaseLabel l_nul();
BaseLabel l_sym(std::string name);
BaseLabel l_var(std::string name);
BaseLabel l_key(Keyword k);
BaseLabel l_ty(TypeExpr t);

struct MLabel {
  BaseLabel base;
  std::uint64_t id = 0;

  bool operator==(const MLabel& other) const { return base == other.base && id == other.id; }
  std::string show() const;
};

using MGraph = mtg::Metagraph<TypeExpr, MLabel>;

struct GraphBox {
  MGraph graph;
};

GraphRef graph_ref(MGraph g);

/// Compares labels up to the edge-id component.
bool label_eq_ignoring_id(const MLabel& a, const MLabel& b);

/// Growable subtype relation: declared pairs plus their transitive closure,
/// re-closed incrementally on insertion.
class SubtypeRelation {
 public:
  /// Declares a <= b and re-closes; throws BudgetError when the closure
  /// exceeds `budget` derived pairs.
  void declare(const TypeExpr& a, const TypeExpr& b, std::size_t budget = 100000);

  /// True when (a, b) is in the reflexive-transitive closure of the
  /// declared pairs.
  bool declared_leq(const TypeExpr& a, const TypeExpr& b) const;

  const std::vector<std::pair<TypeExpr, TypeExpr>>& declared() const { return declared_; }

  /// Target expressions of declared edges out of `a`.
  std::vector<TypeExpr> successors(const TypeExpr& a) const;

  std::size_t closure_size() const;
  std::string canonical_key() const;

 private:
  void close(std::size_t budget);

  std::vector<std::pair<TypeExpr, TypeExpr>> declared_;
  std::map<std::string, std::set<std::string>> closure_;
  std::map<std::string, std::vector<TypeExpr>> succ_;
};

/// Full subtype query: declared closure plus the structural rules (every
/// type below Top, small types below the union of small types, union
/// introduction, intersection elimination, and function-type variance).
/// Throws BudgetError when the search visits more than `budget` pairs.
bool subtype_query(const SubtypeRelation& rel, const TypeExpr& a, const TypeExpr& b,
                   std::size_t budget = 100000);

}  // namespace mtg::mlang
