/*
 * Copyright 2026 the mettagraph authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "mettagraph/encode.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "mettagraph/engine.hpp"

namespace mtg::encode {

using mlang::Atomspace;
using mlang::Builder;
using mlang::Keyword;
using mlang::TermPtr;
using mlang::TypeExpr;

mlang::TypeExpr map_stlc_type(const stlc::TypeP& t) {
  if (!t) return mlang::t_toptype();
  if (const auto* b = std::get_if<stlc::Type::Base>(&t->v)) return mlang::t_base(b->name);
  const auto& a = std::get<stlc::Type::Arrow>(t->v);
  return mlang::t_arrow(map_stlc_type(a.dom), map_stlc_type(a.cod));
}

mlang::TypeExpr map_pdts_type(const pdts::TypeP& t) {
  if (const auto* b = std::get_if<pdts::Type::Base>(&t->v)) return mlang::t_base(b->name);
  if (const auto* p = std::get_if<pdts::Type::Pi>(&t->v)) {
    if (const auto* tv = std::get_if<pdts::Expr::TyVal>(&p->body->v)) {
      return mlang::t_arrow(map_pdts_type(p->dom), map_pdts_type(tv->type));
    }
    return mlang::t_toptype();
  }
  if (const auto* d = std::get_if<pdts::Type::Dist>(&t->v)) {
    return mlang::t_applied("Distribution", {map_pdts_type(d->of)});
  }
  if (const auto* u = std::get_if<pdts::Type::Union>(&t->v)) {
    return mlang::t_union(map_pdts_type(u->lhs), map_pdts_type(u->rhs));
  }
  if (const auto* i = std::get_if<pdts::Type::Inter>(&t->v)) {
    return mlang::t_inter(map_pdts_type(i->lhs), map_pdts_type(i->rhs));
  }
  return mlang::t_type();
}

mlang::TypeExpr map_pts_type(const pts::ExprP& t) {
  if (const auto* s = std::get_if<pts::Expr::Sort>(&t->v)) {
    return mlang::t_base("t" + std::to_string(s->index));
  }
  if (const auto* v = std::get_if<pts::Expr::Var>(&t->v)) return mlang::t_base(v->name);
  if (const auto* p = std::get_if<pts::Expr::Pi>(&t->v)) {
    auto fv = pts::free_vars(p->body);
    if (std::find(fv.begin(), fv.end(), p->var) == fv.end()) {
      return mlang::t_arrow(map_pts_type(p->type), map_pts_type(p->body));
    }
    std::uint64_t id = 1;
    return mlang::t_pi(p->var, map_pts_type(p->type),
                       mlang::graph_ref(mlang::term_to_graph(
                           mlang::type_to_term(map_pts_type(p->body), id))));
  }
  return mlang::t_toptype();
}

namespace {

/// Shared lambda-lifting machinery.  The language adapter supplies type
/// mapping and subterm typing; the skeleton builds atoms.
struct LiftState {
  Builder b;
  std::vector<TermPtr> atoms;
  int next_combinator = 1;

  std::string fresh_combinator() { return "f" + std::to_string(next_combinator++); }
};

TypeExpr arrow_chain_of(const std::vector<TypeExpr>& parts) { return mlang::t_arrow_chain(parts); }

/// Drops the first `n` domains off a right-nested arrow chain.
TypeExpr arrow_drop(const TypeExpr& t, std::size_t n) {
  TypeExpr cur = t;
  for (std::size_t i = 0; i < n; ++i) {
    if (!cur.is<TypeExpr::Arrow>()) return mlang::t_toptype();
    cur = *cur.as<TypeExpr::Arrow>().cod;
  }
  return cur;
}

// ---------------------------------------------------------------------------
// Simply typed / untyped lambda calculus

struct StlcEncoder {
  stlc::Context gamma;
  bool untyped = false;
  LiftState st;
  std::map<std::string, Combinator<stlc::TypeP, stlc::ExprP>> table;

  TypeExpr map_type(const stlc::TypeP& t) { return untyped ? mlang::t_toptype() : map_stlc_type(t); }

  TypeExpr type_of(const stlc::Context& ctx, const stlc::ExprP& e) {
    if (untyped) return mlang::t_toptype();
    return map_type(stlc::typecheck(ctx, e));
  }

  TermPtr ref(const std::string& name, const TypeExpr& type, const std::set<std::string>& params) {
    if (params.count(name)) return st.b.var(name, type);
    return st.b.sym(name, type);
  }

  TermPtr build(const stlc::ExprP& e, const stlc::Context& ctx, const std::set<std::string>& params,
                bool live) {
    if (const auto* v = std::get_if<stlc::Expr::Var>(&e->v)) {
      auto it = ctx.find(v->name);
      TypeExpr ty = it != ctx.end() ? map_type(it->second) : mlang::t_toptype();
      return ref(v->name, ty, params);
    }
    if (const auto* a = std::get_if<stlc::Expr::App>(&e->v)) {
      TypeExpr rt = type_of(ctx, e);
      TermPtr fn = build(a->fn, ctx, params, live);
      TermPtr arg = build(a->arg, ctx, params, live);
      return st.b.app(std::move(fn), std::move(arg), rt, /*activated=*/true);
    }
    const auto& l = std::get<stlc::Expr::Lam>(e->v);

    // Captured parameters: free variables of the lambda bound by enclosing
    // binders (context globals stay as symbol atoms).
    std::vector<std::pair<std::string, stlc::TypeP>> captured;
    for (const auto& name : stlc::free_vars(e)) {
      if (gamma.count(name)) continue;
      captured.emplace_back(name, ctx.count(name) ? ctx.at(name) : nullptr);
    }

    std::string fname = st.fresh_combinator();
    stlc::Context body_ctx = ctx;
    body_ctx[l.var] = l.type;

    std::vector<TypeExpr> chain;
    for (const auto& [_, t] : captured) chain.push_back(map_type(t));
    chain.push_back(map_type(l.type));
    chain.push_back(type_of(body_ctx, l.body));
    TypeExpr fn_type = arrow_chain_of(chain);

    // Equation: (= (f $fv1 ... $fvn $x) body).
    std::set<std::string> body_params;
    for (const auto& [n, _] : captured) body_params.insert(n);
    body_params.insert(l.var);
    TermPtr rhs = build(l.body, body_ctx, body_params, true);

    TermPtr lhs = st.b.sym(fname, fn_type);
    std::size_t applied = 0;
    for (const auto& [n, t] : captured) {
      lhs = st.b.app(std::move(lhs), st.b.var(n, map_type(t)), arrow_drop(fn_type, ++applied));
    }
    lhs = st.b.app(std::move(lhs), st.b.var(l.var, map_type(l.type)), arrow_drop(fn_type, ++applied));

    st.atoms.push_back(st.b.typing(st.b.sym(fname, mlang::t_toptype()), fn_type));
    st.atoms.push_back(st.b.equation(std::move(lhs), std::move(rhs)));
    table[fname] = {captured, e};

    // Expression-position value: the combinator applied to its captures.
    TermPtr value = st.b.sym(fname, fn_type);
    applied = 0;
    for (const auto& [n, t] : captured) {
      value = st.b.app(std::move(value), ref(n, map_type(t), params), arrow_drop(fn_type, ++applied),
                       /*activated=*/true);
    }
    (void)live;
    return value;
  }
};

}  // namespace

StlcEncoding encode_stlc(const stlc::Context& ctx, const stlc::ExprP& e) {
  (void)stlc::typecheck(ctx, e);  // ill-typed input is rejected up front
  StlcEncoder enc;
  enc.gamma = ctx;
  Atomspace space;
  for (const auto& [name, type] : ctx) {
    space = space.add_term(enc.st.b.typing(enc.st.b.sym(name, mlang::t_toptype()),
                                           enc.map_type(type)));
  }
  TermPtr main = enc.build(e, ctx, {}, true);
  for (const auto& atom : enc.st.atoms) space = space.add_term(atom);
  space = space.add_term(enc.st.b.pointed(main));
  return {std::move(space), std::move(enc.table)};
}

StlcEncoding encode_untyped(const stlc::ExprP& e) {
  StlcEncoder enc;
  enc.untyped = true;
  Atomspace space;
  // Free variables of an open term become untyped context symbols.
  for (const auto& name : stlc::free_vars(e)) {
    enc.gamma[name] = nullptr;
    space = space.add_term(enc.st.b.typing(enc.st.b.sym(name, mlang::t_toptype()),
                                           mlang::t_toptype()));
  }
  TermPtr main = enc.build(e, {}, {}, true);
  for (const auto& atom : enc.st.atoms) space = space.add_term(atom);
  space = space.add_term(enc.st.b.pointed(main));
  return {std::move(space), std::move(enc.table)};
}

namespace {

TermPtr strip_activation(const TermPtr& t) {
  if (t->head.is_key(Keyword::Activate) && t->kids.size() == 1) return strip_activation(t->kids[0]);
  return t;
}

}  // namespace

stlc::ExprP decode_stlc_term(const StlcEncoding& enc, const mlang::TermPtr& term) {
  TermPtr t = strip_activation(term);
  if (t->head.is<mlang::BaseLabel::Sym>() && t->kids.empty()) {
    const auto& name = t->head.as<mlang::BaseLabel::Sym>().name;
    auto it = enc.table.find(name);
    if (it == enc.table.end()) return stlc::e_var(name);
    stlc::ExprP out = it->second.lambda;
    for (auto p = it->second.params.rbegin(); p != it->second.params.rend(); ++p) {
      out = stlc::e_lam(p->first, p->second, out);
    }
    return out;
  }
  if (t->head.is<mlang::BaseLabel::Var>() && t->kids.empty()) {
    return stlc::e_var(t->head.as<mlang::BaseLabel::Var>().name);
  }
  if (t->head.is_key(Keyword::FunApp) && t->kids.size() == 2) {
    return stlc::e_app(decode_stlc_term(enc, t->kids[0]), decode_stlc_term(enc, t->kids[1]));
  }
  throw Error("cannot decode term: " + mlang::term_show(t));
}

stlc::ExprP decode_stlc_normal(const StlcEncoding& enc, const mlang::Atomspace& space,
                               std::size_t budget) {
  TermPtr pointed = space.pointed();
  if (!pointed) throw Error("space has no pointed expression");
  return stlc::normalize(decode_stlc_term(enc, pointed), budget);
}

// ---------------------------------------------------------------------------
// Pure type systems

namespace {

struct PtsEncoder {
  pts::Spec spec;
  pts::Context gamma;
  LiftState st;
  std::map<std::string, Combinator<pts::ExprP, pts::ExprP>> table;

  bool in_gamma(const std::string& name) const {
    for (const auto& [n, _] : gamma) {
      if (n == name) return true;
    }
    return false;
  }

  TypeExpr type_of(const pts::Context& ctx, const pts::ExprP& e) {
    try {
      return map_pts_type(pts::typecheck(spec, ctx, e));
    } catch (const Error&) {
      return mlang::t_toptype();
    }
  }

  TermPtr ref(const std::string& name, const TypeExpr& type, const std::set<std::string>& params) {
    if (params.count(name)) return st.b.var(name, type);
    return st.b.sym(name, type);
  }

  TermPtr build(const pts::ExprP& e, const pts::Context& ctx, const std::set<std::string>& params) {
    if (const auto* v = std::get_if<pts::Expr::Var>(&e->v)) {
      return ref(v->name, type_of(ctx, e), params);
    }
    if (const auto* s = std::get_if<pts::Expr::Sort>(&e->v)) {
      return st.b.tyterm(mlang::t_base("t" + std::to_string(s->index)));
    }
    if (const auto* a = std::get_if<pts::Expr::App>(&e->v)) {
      TermPtr fn = build(a->fn, ctx, params);
      TermPtr arg = build(a->arg, ctx, params);
      return st.b.app(std::move(fn), std::move(arg), type_of(ctx, e), true);
    }
    if (const auto* p = std::get_if<pts::Expr::Pi>(&e->v)) {
      // Product expressions are constructor trees; they do not reduce.
      pts::Context inner = ctx;
      inner.emplace_back(p->var, p->type);
      return mlang::mk_term(mlang::l_sym("Pi"), mlang::t_type(), st.b.id(),
                            {st.b.var(p->var, mlang::t_type()), build(p->type, ctx, params),
                             build(p->body, inner, params)});
    }
    const auto& l = std::get<pts::Expr::Lam>(e->v);

    std::vector<std::pair<std::string, pts::ExprP>> captured;
    for (const auto& name : pts::free_vars(e)) {
      if (in_gamma(name)) continue;
      pts::ExprP ty;
      for (auto it = ctx.rbegin(); it != ctx.rend(); ++it) {
        if (it->first == name) {
          ty = it->second;
          break;
        }
      }
      captured.emplace_back(name, ty);
    }

    std::string fname = st.fresh_combinator();
    pts::Context body_ctx = ctx;
    body_ctx.emplace_back(l.var, l.type);

    std::vector<TypeExpr> chain;
    for (const auto& [_, t] : captured) chain.push_back(t ? map_pts_type(t) : mlang::t_toptype());
    chain.push_back(map_pts_type(l.type));
    chain.push_back(type_of(body_ctx, l.body));
    TypeExpr fn_type = arrow_chain_of(chain);

    std::set<std::string> body_params;
    for (const auto& [n, _] : captured) body_params.insert(n);
    body_params.insert(l.var);
    TermPtr rhs = build(l.body, body_ctx, body_params);

    TermPtr lhs = st.b.sym(fname, fn_type);
    std::size_t applied = 0;
    for (const auto& [n, t] : captured) {
      lhs = st.b.app(std::move(lhs), st.b.var(n, t ? map_pts_type(t) : mlang::t_toptype()),
                     arrow_drop(fn_type, ++applied));
    }
    lhs = st.b.app(std::move(lhs), st.b.var(l.var, map_pts_type(l.type)),
                   arrow_drop(fn_type, ++applied));

    st.atoms.push_back(st.b.typing(st.b.sym(fname, mlang::t_toptype()), fn_type));
    st.atoms.push_back(st.b.equation(std::move(lhs), std::move(rhs)));
    table[fname] = {captured, e};

    TermPtr value = st.b.sym(fname, fn_type);
    applied = 0;
    for (const auto& [n, t] : captured) {
      value = st.b.app(std::move(value), ref(n, t ? map_pts_type(t) : mlang::t_toptype(), params),
                       arrow_drop(fn_type, ++applied), true);
    }
    return value;
  }
};

}  // namespace

PtsEncoding encode_pts(const pts::Spec& spec, const pts::Context& ctx, const pts::ExprP& e) {
  if (!std::holds_alternative<pts::Expr::Sort>(e->v)) {
    (void)pts::typecheck(spec, ctx, e);
  }
  PtsEncoder enc;
  enc.spec = spec;
  enc.gamma = ctx;
  Atomspace space;
  Builder& b = enc.st.b;

  // One typing atom per axiom.
  for (const auto& [m, n] : spec.axioms) {
    space = space.add_term(b.typing(b.tyterm(mlang::t_base("t" + std::to_string(m))),
                                    mlang::t_base("t" + std::to_string(n))));
  }
  // Transform-guarded typing rules for products, one pair per rule triple.
  for (const auto& [l, m, n] : spec.rules) {
    auto colon_pattern = [&](const std::string& var, std::uint32_t sort) {
      return mlang::mk_term(mlang::l_key(Keyword::Colon), mlang::t_judg(), b.id(),
                            {b.var(var, mlang::t_type()),
                             b.tyterm(mlang::t_base("t" + std::to_string(sort)))});
    };
    auto rule_object = [&](std::uint32_t target) {
      TermPtr conj = mlang::mk_term(mlang::l_sym("and"), mlang::t_top(), b.id(),
                                    {colon_pattern("ta", l), colon_pattern("tb", m)});
      return b.trans(std::move(conj), b.tyterm(mlang::t_base("t" + std::to_string(target))));
    };
    TermPtr arrow_subject = mlang::mk_term(mlang::l_key(Keyword::Arrow), mlang::t_type(), b.id(),
                                           {b.var("ta", mlang::t_type()), b.var("tb", mlang::t_type())});
    space = space.add_term(mlang::mk_term(mlang::l_key(Keyword::Colon), mlang::t_judg(), b.id(),
                                          {arrow_subject, rule_object(n)}));
    TermPtr pi_subject = mlang::mk_term(mlang::l_sym("Pi"), mlang::t_type(), b.id(),
                                        {b.var("x", mlang::t_type()), b.var("ta", mlang::t_type()),
                                         b.var("m", mlang::t_type())});
    space = space.add_term(mlang::mk_term(mlang::l_key(Keyword::Colon), mlang::t_judg(), b.id(),
                                          {pi_subject, rule_object(n)}));
  }
  for (const auto& [name, type] : ctx) {
    space = space.add_term(b.typing(b.sym(name, mlang::t_toptype()), map_pts_type(type)));
  }
  TermPtr main = enc.build(e, ctx, {});
  for (const auto& atom : enc.st.atoms) space = space.add_term(atom);
  space = space.add_term(b.pointed(main));
  return {std::move(space), std::move(enc.table)};
}

pts::ExprP decode_pts_term(const PtsEncoding& enc, const mlang::TermPtr& term) {
  TermPtr t = strip_activation(term);
  if (t->head.is<mlang::BaseLabel::Sym>() && t->kids.empty()) {
    const auto& name = t->head.as<mlang::BaseLabel::Sym>().name;
    auto it = enc.table.find(name);
    if (it == enc.table.end()) return pts::e_var(name);
    pts::ExprP out = it->second.lambda;
    for (auto p = it->second.params.rbegin(); p != it->second.params.rend(); ++p) {
      out = pts::e_lam(p->first, p->second ? p->second : pts::e_sort(1), out);
    }
    return out;
  }
  if (t->head.is<mlang::BaseLabel::Var>() && t->kids.empty()) {
    return pts::e_var(t->head.as<mlang::BaseLabel::Var>().name);
  }
  if (t->head.is<mlang::BaseLabel::Ty>() && t->kids.empty()) {
    const auto& ty = t->head.as<mlang::BaseLabel::Ty>().type;
    if (ty.is<TypeExpr::Base>()) {
      const auto& name = ty.as<TypeExpr::Base>().name;
      if (name.size() > 1 && name[0] == 't') {
        return pts::e_sort(static_cast<std::uint32_t>(std::stoul(name.substr(1))));
      }
      return pts::e_var(name);
    }
  }
  if (t->head.is_key(Keyword::FunApp) && t->kids.size() == 2) {
    return pts::e_app(decode_pts_term(enc, t->kids[0]), decode_pts_term(enc, t->kids[1]));
  }
  if (t->head == mlang::l_sym("Pi") && t->kids.size() == 3 &&
      t->kids[0]->head.is<mlang::BaseLabel::Var>()) {
    return pts::e_pi(t->kids[0]->head.as<mlang::BaseLabel::Var>().name,
                     decode_pts_term(enc, t->kids[1]), decode_pts_term(enc, t->kids[2]));
  }
  throw Error("cannot decode term: " + mlang::term_show(t));
}

pts::ExprP decode_pts_normal(const PtsEncoding& enc, const mlang::Atomspace& space,
                             std::size_t budget) {
  TermPtr pointed = space.pointed();
  if (!pointed) throw Error("space has no pointed expression");
  return pts::normalize(decode_pts_term(enc, pointed), budget);
}

// ---------------------------------------------------------------------------
// Probabilistic dependent types

namespace {

struct PdtsEncoder {
  pdts::Context gamma;
  LiftState st;
  std::map<std::string, Combinator<pdts::TypeP, pdts::ExprP>> table;

  TypeExpr type_of(const pdts::Context& ctx, const pdts::ExprP& e) {
    return map_pdts_type(pdts::typecheck(ctx, e));
  }

  TermPtr ref(const std::string& name, const TypeExpr& type, const std::set<std::string>& params) {
    if (params.count(name)) return st.b.var(name, type);
    return st.b.sym(name, type);
  }

  TermPtr build(const pdts::ExprP& e, const pdts::Context& ctx, const std::set<std::string>& params) {
    if (const auto* v = std::get_if<pdts::Expr::Var>(&e->v)) {
      auto it = ctx.find(v->name);
      TypeExpr ty = it != ctx.end() ? map_pdts_type(it->second) : mlang::t_toptype();
      return ref(v->name, ty, params);
    }
    if (const auto* a = std::get_if<pdts::Expr::App>(&e->v)) {
      return st.b.app(build(a->fn, ctx, params), build(a->arg, ctx, params), type_of(ctx, e), true);
    }
    if (const auto* r = std::get_if<pdts::Expr::Random>(&e->v)) {
      // The weight is not recorded: both branch equations apply.
      TypeExpr t1 = type_of(ctx, r->left);
      TypeExpr t2 = type_of(ctx, r->right);
      TypeExpr result = mlang::t_union(t1, t2);
      TypeExpr fn2 = mlang::t_arrow(t2, result);
      TypeExpr fn1 = mlang::t_arrow(t1, fn2);
      TermPtr partial = st.b.app(st.b.sym("random", fn1), build(r->left, ctx, params), fn2, true);
      return st.b.app(std::move(partial), build(r->right, ctx, params), result, true);
    }
    if (const auto* s = std::get_if<pdts::Expr::Sample>(&e->v)) {
      TypeExpr result = type_of(ctx, e);
      TypeExpr fn = mlang::t_arrow(mlang::t_applied("Distribution", {result}), result);
      return st.b.app(st.b.sym("sample", fn), build(s->of, ctx, params), result, true);
    }
    if (const auto* t = std::get_if<pdts::Expr::Thunk>(&e->v)) {
      TypeExpr inner = type_of(ctx, t->of);
      TypeExpr result = mlang::t_applied("Distribution", {inner});
      TypeExpr fn = mlang::t_arrow(inner, result);
      return st.b.app(st.b.sym("thunk", fn), build(t->of, ctx, params), result, true);
    }
    if (const auto* tv = std::get_if<pdts::Expr::TyVal>(&e->v)) {
      return st.b.tyterm(map_pdts_type(tv->type));
    }
    const auto& l = std::get<pdts::Expr::Lam>(e->v);

    std::vector<std::pair<std::string, pdts::TypeP>> captured;
    {
      // Free variables in binding order; the context map gives their types.
      std::vector<std::string> fvs;
      std::function<void(const pdts::ExprP&, std::set<std::string>&)> walk =
          [&](const pdts::ExprP& x, std::set<std::string>& bound) {
            if (const auto* xv = std::get_if<pdts::Expr::Var>(&x->v)) {
              if (!bound.count(xv->name) &&
                  std::find(fvs.begin(), fvs.end(), xv->name) == fvs.end()) {
                fvs.push_back(xv->name);
              }
              return;
            }
            if (const auto* xa = std::get_if<pdts::Expr::App>(&x->v)) {
              walk(xa->fn, bound);
              walk(xa->arg, bound);
              return;
            }
            if (const auto* xl = std::get_if<pdts::Expr::Lam>(&x->v)) {
              bool fresh = bound.insert(xl->var).second;
              walk(xl->body, bound);
              if (fresh) bound.erase(xl->var);
              return;
            }
            if (const auto* xr = std::get_if<pdts::Expr::Random>(&x->v)) {
              walk(xr->left, bound);
              walk(xr->right, bound);
              return;
            }
            if (const auto* xs = std::get_if<pdts::Expr::Sample>(&x->v)) {
              walk(xs->of, bound);
              return;
            }
            if (const auto* xt = std::get_if<pdts::Expr::Thunk>(&x->v)) {
              walk(xt->of, bound);
            }
          };
      std::set<std::string> bound;
      walk(e, bound);
      for (const auto& n : fvs) {
        if (gamma.count(n)) continue;
        captured.emplace_back(n, ctx.count(n) ? ctx.at(n) : nullptr);
      }
    }

    std::string fname = st.fresh_combinator();
    pdts::Context body_ctx = ctx;
    body_ctx[l.var] = l.type;

    std::vector<TypeExpr> chain;
    for (const auto& [_, t] : captured) chain.push_back(t ? map_pdts_type(t) : mlang::t_toptype());
    chain.push_back(map_pdts_type(l.type));
    chain.push_back(type_of(body_ctx, l.body));
    TypeExpr fn_type = arrow_chain_of(chain);

    std::set<std::string> body_params;
    for (const auto& [n, _] : captured) body_params.insert(n);
    body_params.insert(l.var);
    TermPtr rhs = build(l.body, body_ctx, body_params);

    TermPtr lhs = st.b.sym(fname, fn_type);
    std::size_t applied = 0;
    for (const auto& [n, t] : captured) {
      lhs = st.b.app(std::move(lhs), st.b.var(n, t ? map_pdts_type(t) : mlang::t_toptype()),
                     arrow_drop(fn_type, ++applied));
    }
    lhs = st.b.app(std::move(lhs), st.b.var(l.var, map_pdts_type(l.type)),
                   arrow_drop(fn_type, ++applied));

    st.atoms.push_back(st.b.typing(st.b.sym(fname, mlang::t_toptype()), fn_type));
    st.atoms.push_back(st.b.equation(std::move(lhs), std::move(rhs)));
    table[fname] = {captured, e};

    TermPtr value = st.b.sym(fname, fn_type);
    applied = 0;
    for (const auto& [n, t] : captured) {
      value = st.b.app(std::move(value), ref(n, t ? map_pdts_type(t) : mlang::t_toptype(), params),
                       arrow_drop(fn_type, ++applied), true);
    }
    return value;
  }
};

Atomspace pdts_prelude(Builder& b, Atomspace space) {
  auto tv = [&](const std::string& n) { return b.var(n, mlang::t_toptype()); };
  auto sy = [&](const std::string& n) { return b.sym(n, mlang::t_toptype()); };

  space = space.add_term(b.typing(sy("Distribution"), mlang::t_arrow(mlang::t_type(), mlang::t_type())));
  space = space.add_term(
      b.typing(sy("random"), mlang::t_arrow(mlang::t_tvar("t1"),
                                            mlang::t_arrow(mlang::t_tvar("t2"),
                                                           mlang::t_union(mlang::t_tvar("t1"),
                                                                          mlang::t_tvar("t2"))))));
  auto random_lhs = [&] {
    TermPtr partial = b.app(sy("random"), tv("a"), mlang::t_toptype());
    return b.app(std::move(partial), tv("bv"), mlang::t_toptype());
  };
  space = space.add_term(b.equation(random_lhs(), tv("a")));
  space = space.add_term(b.equation(random_lhs(), tv("bv")));
  space = space.add_term(
      b.typing(sy("sample"), mlang::t_arrow(mlang::t_applied("Distribution", {mlang::t_tvar("t1")}),
                                            mlang::t_tvar("t1"))));
  space = space.add_term(
      b.typing(sy("thunk"), mlang::t_arrow(mlang::t_tvar("t1"),
                                           mlang::t_applied("Distribution", {mlang::t_tvar("t1")}))));
  TermPtr sample_thunk = b.app(sy("sample"), b.app(sy("thunk"), tv("a"), mlang::t_toptype()),
                               mlang::t_toptype());
  space = space.add_term(b.equation(std::move(sample_thunk), tv("a")));
  return space;
}

}  // namespace

PdtsEncoding encode_pdts(const pdts::Context& ctx, const pdts::ExprP& e) {
  (void)pdts::typecheck(ctx, e);
  PdtsEncoder enc;
  enc.gamma = ctx;
  Atomspace space = pdts_prelude(enc.st.b, Atomspace());
  for (const auto& [name, type] : ctx) {
    space = space.add_term(enc.st.b.typing(enc.st.b.sym(name, mlang::t_toptype()),
                                           map_pdts_type(type)));
  }
  TermPtr main = enc.build(e, ctx, {});
  for (const auto& atom : enc.st.atoms) space = space.add_term(atom);
  space = space.add_term(enc.st.b.pointed(main));
  return {std::move(space), std::move(enc.table)};
}

pdts::ExprP decode_pdts_term(const PdtsEncoding& enc, const mlang::TermPtr& term) {
  TermPtr t = strip_activation(term);
  if (t->head.is<mlang::BaseLabel::Sym>() && t->kids.empty()) {
    const auto& name = t->head.as<mlang::BaseLabel::Sym>().name;
    auto it = enc.table.find(name);
    if (it == enc.table.end()) return pdts::e_var(name);
    pdts::ExprP out = it->second.lambda;
    for (auto p = it->second.params.rbegin(); p != it->second.params.rend(); ++p) {
      out = pdts::e_lam(p->first, p->second ? p->second : pdts::ty_type(), out);
    }
    return out;
  }
  if (t->head.is<mlang::BaseLabel::Var>() && t->kids.empty()) {
    return pdts::e_var(t->head.as<mlang::BaseLabel::Var>().name);
  }
  if (t->head.is_key(Keyword::FunApp) && t->kids.size() == 2) {
    TermPtr fn = strip_activation(t->kids[0]);
    if (fn->head == mlang::l_sym("sample")) {
      return pdts::e_sample(decode_pdts_term(enc, t->kids[1]));
    }
    if (fn->head == mlang::l_sym("thunk")) {
      return pdts::e_thunk(decode_pdts_term(enc, t->kids[1]));
    }
    if (fn->head.is_key(Keyword::FunApp) && fn->kids.size() == 2) {
      TermPtr inner = strip_activation(fn->kids[0]);
      if (inner->head == mlang::l_sym("random")) {
        // The encoding drops the weight; 1/2 stands in for it.
        return pdts::e_random(0.5, decode_pdts_term(enc, fn->kids[1]),
                              decode_pdts_term(enc, t->kids[1]));
      }
    }
    return pdts::e_app(decode_pdts_term(enc, t->kids[0]), decode_pdts_term(enc, t->kids[1]));
  }
  throw Error("cannot decode term: " + mlang::term_show(t));
}

// ---------------------------------------------------------------------------
// Transition-system wrappers with observation probes

lts::Lts<pdts::ExprP> pdts_lts(const pdts::Context& ctx, const ProbeSet& probes, bool weighted) {
  lts::Lts<pdts::ExprP> out;
  out.key = [](const pdts::ExprP& e) { return pdts::show(e); };
  out.show = out.key;
  out.step = [ctx, probes, weighted](const pdts::ExprP& e) {
    std::vector<lts::Lts<pdts::ExprP>::Succ> succ;
    for (const auto& s : pdts::step(e)) {
      succ.push_back({"update", s.to,
                      weighted ? std::optional<double>(s.weight) : std::nullopt});
    }
    for (const auto& t : probes.types) {
      bool holds = false;
      try {
        holds = pdts::subtype(pdts::typecheck(ctx, e), t);
      } catch (const Error&) {
      }
      succ.push_back({(holds ? "is-of-type(" : "not-is-of-type(") + t->show() + ")", e,
                      std::nullopt});
    }
    for (const auto& c : probes.consts) {
      bool holds = pdts::alpha_eq(e, pdts::e_var(c));
      succ.push_back({(holds ? "is-const(" : "not-is-const(") + c + ")", e, std::nullopt});
    }
    return succ;
  };
  return out;
}

lts::Lts<mlang::Atomspace> space_lts(const PdtsEncoding& enc, const pdts::Context& ctx,
                                     const ProbeSet& probes) {
  lts::Lts<mlang::Atomspace> out;
  out.key = [](const mlang::Atomspace& s) { return s.canonical_key(); };
  out.show = [](const mlang::Atomspace& s) {
    return s.pointed() ? mlang::term_show(s.pointed()) : "<no pointer>";
  };
  out.step = [enc, ctx, probes](const mlang::Atomspace& s) {
    std::vector<lts::Lts<mlang::Atomspace>::Succ> succ;
    for (const auto& next : mlang::compressed_step(s)) {
      succ.push_back({"update", next, std::nullopt});
    }
    // Probes observe the state's expression: the subtree the pointer's
    // atom denotes, decoded back into the object language.
    TermPtr pointed = s.pointer() ? s.atoms()[s.pointer()->atom] : nullptr;
    for (const auto& t : probes.types) {
      bool holds = false;
      if (pointed) {
        try {
          holds = pdts::subtype(pdts::typecheck(ctx, decode_pdts_term(enc, pointed)), t);
        } catch (const Error&) {
        }
      }
      succ.push_back({(holds ? "is-of-type(" : "not-is-of-type(") + t->show() + ")", s,
                      std::nullopt});
    }
    for (const auto& c : probes.consts) {
      bool holds = false;
      if (pointed) {
        TermPtr core = strip_activation(pointed);
        holds = core->kids.empty() && core->head == mlang::l_sym(c);
      }
      succ.push_back({(holds ? "is-const(" : "not-is-const(") + c + ")", s, std::nullopt});
    }
    return succ;
  };
  return out;
}

}  // namespace mtg::encode
