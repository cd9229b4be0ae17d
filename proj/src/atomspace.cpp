/*
 * Copyright 2026 the mettagraph authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "mettagraph/atomspace.hpp"

#include <algorithm>
#include <sstream>

namespace mtg::mlang {

TermPtr mk_term(BaseLabel head, TypeExpr type, std::uint64_t id, std::vector<TermPtr> kids) {
  return std::make_shared<const Term>(
      Term{std::move(head), std::move(type), id, std::move(kids)});
}

TermPtr mk_leaf(BaseLabel head, TypeExpr type, std::uint64_t id) {
  return mk_term(std::move(head), std::move(type), id, {});
}

bool term_iso(const TermPtr& a, const TermPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->head != b->head || a->type != b->type) return false;
  if (a->kids.size() != b->kids.size()) return false;
  for (std::size_t i = 0; i < a->kids.size(); ++i) {
    if (!term_iso(a->kids[i], b->kids[i])) return false;
  }
  return true;
}

std::string term_key(const TermPtr& t) {
  std::ostringstream os;
  os << "(" << t->head.show() << "|" << t->type.show();
  for (const auto& k : t->kids) os << " " << term_key(k);
  os << ")";
  return os.str();
}

std::string term_show(const TermPtr& t) {
  if (t->kids.empty()) return t->head.show();
  std::ostringstream os;
  if (t->head.is_key(Keyword::FunApp)) {
    // Application nodes render MeTTa-style: (f a).
    os << "(";
    for (std::size_t i = 0; i < t->kids.size(); ++i) {
      if (i > 0) os << " ";
      os << term_show(t->kids[i]);
    }
    os << ")";
    return os.str();
  }
  os << "(" << t->head.show();
  for (const auto& k : t->kids) os << " " << term_show(k);
  os << ")";
  return os.str();
}

const Term& subterm_at(const TermPtr& root, const Path& path) {
  const Term* cur = root.get();
  for (auto i : path) {
    if (i >= cur->kids.size()) throw IndexError("subterm_at: path out of range");
    cur = cur->kids[i].get();
  }
  return *cur;
}

TermPtr subterm_ptr_at(const TermPtr& root, const Path& path) {
  TermPtr cur = root;
  for (auto i : path) {
    if (i >= cur->kids.size()) throw IndexError("subterm_at: path out of range");
    cur = cur->kids[i];
  }
  return cur;
}

TermPtr replace_at(const TermPtr& root, const Path& path, const TermPtr& replacement) {
  if (path.empty()) return replacement;
  std::uint32_t i = path.front();
  if (i >= root->kids.size()) throw IndexError("replace_at: path out of range");
  auto kids = root->kids;
  kids[i] = replace_at(kids[i], Path(path.begin() + 1, path.end()), replacement);
  return mk_term(root->head, root->type, root->id, std::move(kids));
}

namespace {

// The head edge's j'th target, seen through d enclosing connect layers on
// the left, sits at index 2^d (j-1) + 1.
std::uint32_t folded_index(std::uint32_t j, std::uint32_t depth) {
  return (1u << depth) * (j - 1) + 1;
}

}  // namespace

MGraph term_to_graph(const TermPtr& t) {
  std::vector<TypeExpr> target_types;
  target_types.reserve(t->kids.size());
  for (const auto& k : t->kids) target_types.push_back(k->type);
  MGraph g = MGraph::edge(static_cast<std::uint32_t>(t->kids.size()), t->type,
                          MLabel{t->head, t->id}, std::move(target_types));
  for (std::uint32_t i = 0; i < t->kids.size(); ++i) {
    Wiring w;
    w[folded_index(i + 1, i)] = 0;
    g = MGraph::connect_unchecked(g, term_to_graph(t->kids[i]), t->type, MLabel{l_nul(), 0},
                                  std::move(w));
  }
  return g;
}

TermPtr graph_to_term(const MGraph& g) {
  if (g.is_edge()) {
    const auto& e = g.as_edge();
    if (!e.targets.empty()) {
      throw TypeShapeError("graph_to_term: edge with unwired targets");
    }
    return mk_leaf(e.label.base, e.type, e.label.id);
  }
  if (g.is_connect()) {
    // Peel the layers down to the head edge, collecting kids inside-out.
    std::vector<MGraph> kids_rev;
    MGraph cur = g;
    while (cur.is_connect()) {
      kids_rev.push_back(cur.right());
      cur = cur.left();
    }
    if (!cur.is_edge()) throw TypeShapeError("graph_to_term: connect chain without a head edge");
    const auto& e = cur.as_edge();
    if (e.targets.size() != kids_rev.size()) {
      throw TypeShapeError("graph_to_term: layer count does not match the head arity");
    }
    // Validate the wiring pattern layer by layer.
    MGraph check = g;
    for (std::uint32_t i = static_cast<std::uint32_t>(kids_rev.size()); i-- > 0;) {
      const auto& c = check.as_connect();
      Wiring expect{{folded_index(i + 1, i), 0}};
      if (c.wiring != expect) throw TypeShapeError("graph_to_term: unsupported wiring layout");
      check = check.left();
    }
    std::vector<TermPtr> kids;
    for (auto it = kids_rev.rbegin(); it != kids_rev.rend(); ++it) {
      kids.push_back(graph_to_term(*it));
    }
    return mk_term(e.label.base, e.type, e.label.id, std::move(kids));
  }
  throw TypeShapeError("graph_to_term: unsupported graph shape");
}

std::optional<TypeExpr> term_as_type(const TermPtr& t) {
  if (t->kids.empty()) {
    if (t->head.is<BaseLabel::Ty>()) return t->head.as<BaseLabel::Ty>().type;
    if (t->head.is<BaseLabel::Var>()) return t_tvar(t->head.as<BaseLabel::Var>().name);
    if (t->head.is<BaseLabel::Sym>()) return t_base(t->head.as<BaseLabel::Sym>().name);
    return std::nullopt;
  }
  if (t->head.is_key(Keyword::Arrow)) {
    std::vector<TypeExpr> parts;
    for (const auto& k : t->kids) {
      auto p = term_as_type(k);
      if (!p) return std::nullopt;
      parts.push_back(*p);
    }
    if (parts.size() < 2) return std::nullopt;
    return t_arrow_chain(parts);
  }
  if (t->head.is_key(Keyword::EqType) && t->kids.size() == 3) {
    auto ty = term_as_type(t->kids[0]);
    if (!ty) return std::nullopt;
    return t_eqtype(*ty, graph_ref(term_to_graph(t->kids[1])),
                    graph_ref(term_to_graph(t->kids[2])));
  }
  if (t->head.is<BaseLabel::Sym>()) {
    const auto& name = t->head.as<BaseLabel::Sym>().name;
    if ((name == "|" || name == "&") && t->kids.size() == 2) {
      auto l = term_as_type(t->kids[0]);
      auto r = term_as_type(t->kids[1]);
      if (!l || !r) return std::nullopt;
      return name == "|" ? t_union(*l, *r) : t_inter(*l, *r);
    }
    if (name == "Pi" && t->kids.size() == 3 && t->kids[0]->head.is<BaseLabel::Var>()) {
      auto dom = term_as_type(t->kids[1]);
      if (!dom) return std::nullopt;
      return t_pi(t->kids[0]->head.as<BaseLabel::Var>().name, *dom,
                  graph_ref(term_to_graph(t->kids[2])));
    }
    std::vector<TypeExpr> args;
    for (const auto& k : t->kids) {
      auto p = term_as_type(k);
      if (!p) return std::nullopt;
      args.push_back(*p);
    }
    return t_applied(name, std::move(args));
  }
  return std::nullopt;
}

TermPtr type_to_term(const TypeExpr& t, std::uint64_t& next_id) {
  if (t.is<TypeExpr::Var>()) {
    return mk_leaf(l_var(t.as<TypeExpr::Var>().name), t_type(), next_id++);
  }
  if (t.is<TypeExpr::Arrow>()) {
    const auto& a = t.as<TypeExpr::Arrow>();
    return mk_term(l_key(Keyword::Arrow), t_type(), next_id++,
                   {type_to_term(*a.dom, next_id), type_to_term(*a.cod, next_id)});
  }
  if (t.is<TypeExpr::Union>()) {
    const auto& u = t.as<TypeExpr::Union>();
    return mk_term(l_sym("|"), t_type(), next_id++,
                   {type_to_term(*u.lhs, next_id), type_to_term(*u.rhs, next_id)});
  }
  if (t.is<TypeExpr::Inter>()) {
    const auto& u = t.as<TypeExpr::Inter>();
    return mk_term(l_sym("&"), t_type(), next_id++,
                   {type_to_term(*u.lhs, next_id), type_to_term(*u.rhs, next_id)});
  }
  if (t.is<TypeExpr::Applied>()) {
    const auto& a = t.as<TypeExpr::Applied>();
    std::vector<TermPtr> kids;
    for (const auto& arg : a.args) kids.push_back(type_to_term(*arg, next_id));
    return mk_term(l_sym(a.head), t_type(), next_id++, std::move(kids));
  }
  if (t.is<TypeExpr::Pi>()) {
    const auto& p = t.as<TypeExpr::Pi>();
    TermPtr body;
    try {
      body = graph_to_term(p.body->graph);
    } catch (const TypeShapeError&) {
      body = mk_leaf(l_nul(), t_top(), next_id++);
    }
    return mk_term(l_sym("Pi"), t_type(), next_id++,
                   {mk_leaf(l_var(p.var), t_type(), next_id++), type_to_term(*p.dom, next_id),
                    body});
  }
  return mk_leaf(l_ty(t), t_type(), next_id++);
}

TermPtr term_subst_var(const TermPtr& t, const std::string& name, const TermPtr& value) {
  if (t->head.is<BaseLabel::Var>() && t->head.as<BaseLabel::Var>().name == name) {
    return value;
  }
  if (t->kids.empty()) return t;
  std::vector<TermPtr> kids;
  kids.reserve(t->kids.size());
  bool changed = false;
  for (const auto& k : t->kids) {
    TermPtr nk = term_subst_var(k, name, value);
    changed = changed || nk != k;
    kids.push_back(std::move(nk));
  }
  if (!changed) return t;
  return mk_term(t->head, t->type, t->id, std::move(kids));
}

namespace {

void collect_vars(const TermPtr& t, std::vector<std::string>& out) {
  if (t->head.is<BaseLabel::Var>()) {
    const auto& n = t->head.as<BaseLabel::Var>().name;
    if (std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
  }
  for (const auto& k : t->kids) collect_vars(k, out);
}

}  // namespace

std::vector<std::string> term_vars(const TermPtr& t) {
  std::vector<std::string> out;
  collect_vars(t, out);
  return out;
}

bool term_contains_pointer(const TermPtr& t) {
  if (t->head.is_key(Keyword::Pointer)) return true;
  for (const auto& k : t->kids) {
    if (term_contains_pointer(k)) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Atomspace

namespace {

std::uint64_t max_id(const TermPtr& t) {
  std::uint64_t m = t->id;
  for (const auto& k : t->kids) m = std::max(m, max_id(k));
  return m;
}

void scan_symbol_indices(const TermPtr& t, std::uint32_t& max_index) {
  if (t->head.is<BaseLabel::Sym>()) {
    const auto& n = t->head.as<BaseLabel::Sym>().name;
    if (n.size() > 1 && n[0] == 's' &&
        std::all_of(n.begin() + 1, n.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      max_index = std::max(max_index, static_cast<std::uint32_t>(std::stoul(n.substr(1))));
    }
  }
  for (const auto& k : t->kids) scan_symbol_indices(k, max_index);
}

bool ground(const TypeExpr& t) { return !t.has_var(); }

}  // namespace

Atomspace Atomspace::add_atom(const MGraph& atom) const { return add_term(graph_to_term(atom)); }

Atomspace Atomspace::add_term(const TermPtr& atom) const {
  Atomspace out = *this;
  TermPtr stored = atom;
  if (atom->head.is_key(Keyword::Pointer)) {
    if (atom->kids.size() != 1) throw TypeShapeError("pointer atom must have one target");
    if (out.pointer_) throw Error("space already contains a pointer edge");
    stored = atom->kids[0];
    Path path;
    if (stored->head.is_key(Keyword::Activate) && !stored->kids.empty()) path = {0};
    out.pointer_ = PointerPos{out.atoms_.size(), std::move(path)};
  } else if (term_contains_pointer(atom)) {
    throw Error("pointer edges may only appear at an atom root");
  }
  out.atoms_.push_back(stored);
  out.next_id_ = std::max(out.next_id_, max_id(stored) + 1);

  if (stored->head.is_key(Keyword::Leq) && stored->kids.size() == 2) {
    auto a = term_as_type(stored->kids[0]);
    auto b = term_as_type(stored->kids[1]);
    if (a && b && ground(*a) && ground(*b)) {
      out.rel_.declare(*a, *b);
    }
  }

  auto violations = out.check_mconstraints();
  if (!violations.empty()) {
    std::ostringstream os;
    os << "atom violates the space constraints:";
    for (const auto& v : violations) os << " [" << v.message << "]";
    throw Error(os.str());
  }
  return out;
}

namespace {

struct ShapeChecker {
  const Atomspace& space;
  std::vector<MViolation>* out;
  std::size_t atom_index = 0;

  void flag(const Path& path, std::string message) {
    out->push_back({atom_index, path, std::move(message)});
  }

  bool sub(const TypeExpr& a, const TypeExpr& b) { return space.subtype_query(a, b); }

  void check(const TermPtr& t, Path& path) {
    const BaseLabel& h = t->head;
    std::size_t n = t->kids.size();
    if (h.is<BaseLabel::Key>()) {
      switch (h.as<BaseLabel::Key>().k) {
        case Keyword::Colon:
          if (n != 2) flag(path, "typing judgment must have 2 targets");
          if (t->type != t_judg()) flag(path, "typing judgment must be tagged Judgment");
          break;
        case Keyword::Leq: {
          if (n != 2) {
            flag(path, "subtype judgment must have 2 targets");
            break;
          }
          if (t->type != t_judg()) flag(path, "subtype judgment must be tagged Judgment");
          auto a = term_as_type(t->kids[0]);
          auto b = term_as_type(t->kids[1]);
          if (a && b && ground(*a) && ground(*b) && !space.relation().declared_leq(*a, *b)) {
            flag(path, "declared subtype pair missing from the relation");
          }
          break;
        }
        case Keyword::Equals:
          if (n != 2) flag(path, "equation must have 2 targets");
          if (t->type != t_judg()) flag(path, "equation must be tagged Judgment");
          break;
        case Keyword::Arrow:
          if (n < 2) flag(path, "function type former needs at least 2 targets");
          if (t->type != t_type()) flag(path, "function type former must be tagged Type");
          break;
        case Keyword::EqType:
          if (n != 3) flag(path, "equality type former needs 3 targets");
          if (t->type != t_type()) flag(path, "equality type former must be tagged Type");
          break;
        case Keyword::Trans:
          if (n != 2) flag(path, "transform node needs 2 targets");
          if (t->type != t_top()) flag(path, "transform node must be tagged Top");
          break;
        case Keyword::Activate:
          if (n != 1) flag(path, "activation marker needs 1 target");
          if (t->type != t_exec()) flag(path, "activation marker must be tagged Exec");
          break;
        case Keyword::Pointer:
          flag(path, "pointer edge stored inside an atom");
          break;
        case Keyword::FunApp:
          check_funapp(t, path);
          break;
      }
    } else if (h.is<BaseLabel::Nul>()) {
      if (n != 0) flag(path, "nul padding must be a bare node");
    }
    // Symbol, variable, and type heads are unconstrained: bare nodes and
    // constructor edges.
    for (std::uint32_t i = 0; i < t->kids.size(); ++i) {
      path.push_back(i);
      check(t->kids[i], path);
      path.pop_back();
    }
  }

  static const TypeExpr& through_activation(const TermPtr& t) {
    if (t->head.is_key(Keyword::Activate) && t->kids.size() == 1) return t->kids[0]->type;
    return t->type;
  }

  void check_funapp(const TermPtr& t, const Path& path) {
    if (t->kids.size() != 2) {
      flag(path, "application needs a function and an argument");
      return;
    }
    const TypeExpr& fty = through_activation(t->kids[0]);
    const TypeExpr& aty = through_activation(t->kids[1]);
    // Pattern variables in argument position are schematic.
    bool schematic_arg = t->kids[1]->head.is<BaseLabel::Var>() || aty.has_var();
    if (fty.is<TypeExpr::Var>() || fty.is<TypeExpr::TopType>() || fty.is<TypeExpr::Top>()) {
      return;  // schematic or untyped
    }
    if (fty.is<TypeExpr::Arrow>()) {
      const auto& fn = fty.as<TypeExpr::Arrow>();
      if (!schematic_arg && ground(*fn.dom) && !sub(aty, *fn.dom)) {
        flag(path, "argument type is not below the function domain");
      }
      if (ground(*fn.cod) && ground(t->type) && !sub(*fn.cod, t->type)) {
        flag(path, "function codomain is not below the application type");
      }
      return;
    }
    if (fty.is<TypeExpr::Pi>()) {
      const auto& fn = fty.as<TypeExpr::Pi>();
      if (!schematic_arg && ground(*fn.dom) && !sub(aty, *fn.dom)) {
        flag(path, "argument type is not below the function domain");
      }
      try {
        TermPtr body = graph_to_term(fn.body->graph);
        TermPtr inst = term_subst_var(body, fn.var, t->kids[1]);
        auto bty = term_as_type(inst);
        if (bty && ground(*bty) && ground(t->type) && !sub(*bty, t->type)) {
          flag(path, "instantiated codomain is not below the application type");
        }
      } catch (const TypeShapeError&) {
        // Body outside the decodable fragment: formation accepted.
      }
      return;
    }
    flag(path, "function position has non-function type");
  }
};

}  // namespace

std::vector<MViolation> Atomspace::check_mconstraints() const {
  std::vector<MViolation> out;
  ShapeChecker checker{*this, &out};
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    checker.atom_index = i;
    Path path;
    checker.check(atoms_[i], path);
  }
  return out;
}

bool Atomspace::subtype_query(const TypeExpr& a, const TypeExpr& b) const {
  return mlang::subtype_query(rel_, a, b);
}

bool Atomspace::typing_query(const TermPtr& subject, const TypeExpr& t) const {
  for (const auto& atom : atoms_) {
    if (!atom->head.is_key(Keyword::Colon) || atom->kids.size() != 2) continue;
    if (!term_iso(atom->kids[0], subject)) continue;
    auto declared = term_as_type(atom->kids[1]);
    if (declared && subtype_query(*declared, t)) return true;
  }
  return subtype_query(subject->type, t);
}

Atomspace Atomspace::with_prelude_tuples() const {
  Atomspace out = *this;
  std::uint64_t id = out.next_id_;
  auto leaf_sym = [&](const std::string& n) { return mk_leaf(l_sym(n), t_toptype(), id++); };
  auto tvar = [&](const std::string& n) { return mk_leaf(l_var(n), t_toptype(), id++); };
  auto app = [&](TermPtr f, TermPtr a) {
    return mk_term(l_key(Keyword::FunApp), t_toptype(), id++,
                   {std::move(f), std::move(a)});
  };
  auto typing = [&](TermPtr subject, const TypeExpr& ty) {
    return mk_term(l_key(Keyword::Colon), t_judg(), id++,
                   {std::move(subject), type_to_term(ty, id)});
  };
  auto equation = [&](TermPtr lhs, TermPtr rhs) {
    return mk_term(l_key(Keyword::Equals), t_judg(), id++, {std::move(lhs), std::move(rhs)});
  };

  // tuple : Pi A:Type. Pi B:Type. A -> B -> Type
  TypeExpr inner = t_arrow(t_tvar("A"), t_arrow(t_tvar("B"), t_type()));
  TypeExpr pi_b = t_pi("B", t_type(), graph_ref(term_to_graph(type_to_term(inner, id))));
  TypeExpr pi_a = t_pi("A", t_type(), graph_ref(term_to_graph(type_to_term(pi_b, id))));
  out.atoms_.push_back(typing(leaf_sym("tuple"), pi_a));

  // Projections are typed schematically; their meaning is the equations.
  out.atoms_.push_back(typing(leaf_sym("pi1"), t_arrow(t_tvar("T"), t_tvar("A"))));
  out.atoms_.push_back(typing(leaf_sym("pi2"), t_arrow(t_tvar("T"), t_tvar("B"))));
  // Dependent tuples: Pi A:Type. Pi B:(A -> Type). Pi a:A. B(a) -> Type
  out.atoms_.push_back(typing(leaf_sym("dtuple"), t_arrow(t_tvar("T"), t_type())));

  auto tuple_pattern = [&]() {
    return app(app(app(app(leaf_sym("tuple"), tvar("A")), tvar("B")), tvar("a")), tvar("b"));
  };
  out.atoms_.push_back(equation(app(leaf_sym("pi1"), tuple_pattern()), tvar("a")));
  out.atoms_.push_back(equation(app(leaf_sym("pi2"), tuple_pattern()), tvar("b")));

  out.next_id_ = id;
  return out;
}

std::string Atomspace::fresh_symbol() {
  std::uint32_t max_index = 0;
  for (const auto& a : atoms_) scan_symbol_indices(a, max_index);
  next_sym_ = std::max(next_sym_, max_index + 1);
  return "s" + std::to_string(next_sym_++);
}

std::uint64_t Atomspace::fresh_edge_id() { return next_id_++; }

Atomspace Atomspace::with_pointer(PointerPos p) const {
  if (p.atom >= atoms_.size()) throw IndexError("with_pointer: atom index out of range");
  subterm_at(atoms_[p.atom], p.path);  // validates the path
  Atomspace out = *this;
  out.pointer_ = std::move(p);
  return out;
}

Atomspace Atomspace::without_pointer() const {
  Atomspace out = *this;
  out.pointer_.reset();
  return out;
}

Atomspace Atomspace::with_atom_replaced(std::size_t index, const TermPtr& atom) const {
  if (index >= atoms_.size()) throw IndexError("with_atom_replaced: index out of range");
  Atomspace out = *this;
  out.atoms_[index] = atom;
  out.next_id_ = std::max(out.next_id_, max_id(atom) + 1);
  return out;
}

TermPtr Atomspace::pointed() const {
  if (!pointer_) return nullptr;
  return subterm_ptr_at(atoms_[pointer_->atom], pointer_->path);
}

MGraph Atomspace::to_graph() const {
  MGraph g = MGraph::empty();
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    TermPtr atom = atoms_[i];
    if (pointer_ && pointer_->atom == i) {
      TermPtr target = subterm_ptr_at(atom, pointer_->path);
      atom = replace_at(atom, pointer_->path,
                        mk_term(l_key(Keyword::Pointer), t_exec(), 0, {target}));
    }
    MGraph ag = term_to_graph(atom);
    g = g.is_empty() ? ag : MGraph::union_of(g, ag, t_top(), MLabel{l_nul(), 0});
  }
  return g;
}

std::string Atomspace::canonical_key() const {
  std::ostringstream os;
  if (pointer_) {
    os << "ptr:" << term_key(atoms_[pointer_->atom]) << "@";
    for (auto i : pointer_->path) os << i << ".";
    os << ";";
  }
  std::vector<std::string> keys;
  keys.reserve(atoms_.size());
  for (const auto& a : atoms_) keys.push_back(term_key(a));
  std::sort(keys.begin(), keys.end());
  for (const auto& k : keys) os << k << ";";
  os << "rel:" << rel_.canonical_key();
  return os.str();
}

Atomspace Atomspace::with_next_id(std::uint64_t id) const {
  Atomspace out = *this;
  out.next_id_ = std::max(out.next_id_, id);
  return out;
}

}  // namespace mtg::mlang
