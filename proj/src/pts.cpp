/*
 * Copyright 2026 the mettagraph authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "mettagraph/pts.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace mtg::pts {

ExprP e_var(std::string name) { return std::make_shared<const Expr>(Expr{Expr::Var{std::move(name)}}); }
ExprP e_sort(std::uint32_t index) { return std::make_shared<const Expr>(Expr{Expr::Sort{index}}); }
ExprP e_app(ExprP fn, ExprP arg) {
  return std::make_shared<const Expr>(Expr{Expr::App{std::move(fn), std::move(arg)}});
}
ExprP e_lam(std::string var, ExprP type, ExprP body) {
  return std::make_shared<const Expr>(Expr{Expr::Lam{std::move(var), std::move(type), std::move(body)}});
}
ExprP e_pi(std::string var, ExprP type, ExprP body) {
  return std::make_shared<const Expr>(Expr{Expr::Pi{std::move(var), std::move(type), std::move(body)}});
}

namespace {

void collect_free(const ExprP& e, std::set<std::string>& bound, std::vector<std::string>& out) {
  if (const auto* v = std::get_if<Expr::Var>(&e->v)) {
    if (!bound.count(v->name) && std::find(out.begin(), out.end(), v->name) == out.end()) {
      out.push_back(v->name);
    }
    return;
  }
  if (const auto* a = std::get_if<Expr::App>(&e->v)) {
    collect_free(a->fn, bound, out);
    collect_free(a->arg, bound, out);
    return;
  }
  auto binder = [&](const std::string& var, const ExprP& type, const ExprP& body) {
    collect_free(type, bound, out);
    bool inserted = bound.insert(var).second;
    collect_free(body, bound, out);
    if (inserted) bound.erase(var);
  };
  if (const auto* l = std::get_if<Expr::Lam>(&e->v)) {
    binder(l->var, l->type, l->body);
    return;
  }
  if (const auto* p = std::get_if<Expr::Pi>(&e->v)) {
    binder(p->var, p->type, p->body);
  }
}

std::string fresh_name(const std::string& base, const std::set<std::string>& taken) {
  std::string name = base;
  while (taken.count(name)) name += "'";
  return name;
}

}  // namespace

std::vector<std::string> free_vars(const ExprP& e) {
  std::set<std::string> bound;
  std::vector<std::string> out;
  collect_free(e, bound, out);
  return out;
}

ExprP subst(const ExprP& e, const std::string& var, const ExprP& value) {
  if (const auto* v = std::get_if<Expr::Var>(&e->v)) {
    return v->name == var ? value : e;
  }
  if (std::holds_alternative<Expr::Sort>(e->v)) return e;
  if (const auto* a = std::get_if<Expr::App>(&e->v)) {
    return e_app(subst(a->fn, var, value), subst(a->arg, var, value));
  }
  auto binder = [&](const std::string& bv, const ExprP& type, const ExprP& body, bool is_lam) {
    ExprP ntype = subst(type, var, value);
    if (bv == var) {
      return is_lam ? e_lam(bv, ntype, body) : e_pi(bv, ntype, body);
    }
    auto fv_value = free_vars(value);
    std::string nv = bv;
    ExprP nbody = body;
    if (std::find(fv_value.begin(), fv_value.end(), bv) != fv_value.end()) {
      std::set<std::string> taken(fv_value.begin(), fv_value.end());
      for (const auto& n : free_vars(body)) taken.insert(n);
      taken.insert(var);
      nv = fresh_name(bv, taken);
      nbody = subst(body, bv, e_var(nv));
    }
    nbody = subst(nbody, var, value);
    return is_lam ? e_lam(nv, ntype, nbody) : e_pi(nv, ntype, nbody);
  };
  if (const auto* l = std::get_if<Expr::Lam>(&e->v)) return binder(l->var, l->type, l->body, true);
  const auto& p = std::get<Expr::Pi>(e->v);
  return binder(p.var, p.type, p.body, false);
}

namespace {

void beta_rec(const ExprP& e, const std::function<ExprP(ExprP)>& wrap, std::vector<ExprP>& out) {
  if (const auto* a = std::get_if<Expr::App>(&e->v)) {
    if (const auto* l = std::get_if<Expr::Lam>(&a->fn->v)) {
      out.push_back(wrap(subst(l->body, l->var, a->arg)));
    }
    beta_rec(a->fn, [&](ExprP r) { return wrap(e_app(std::move(r), a->arg)); }, out);
    beta_rec(a->arg, [&](ExprP r) { return wrap(e_app(a->fn, std::move(r))); }, out);
    return;
  }
  if (const auto* l = std::get_if<Expr::Lam>(&e->v)) {
    beta_rec(l->type, [&](ExprP r) { return wrap(e_lam(l->var, std::move(r), l->body)); }, out);
    beta_rec(l->body, [&](ExprP r) { return wrap(e_lam(l->var, l->type, std::move(r))); }, out);
    return;
  }
  if (const auto* p = std::get_if<Expr::Pi>(&e->v)) {
    beta_rec(p->type, [&](ExprP r) { return wrap(e_pi(p->var, std::move(r), p->body)); }, out);
    beta_rec(p->body, [&](ExprP r) { return wrap(e_pi(p->var, p->type, std::move(r))); }, out);
  }
}

}  // namespace

std::vector<ExprP> beta_step(const ExprP& e) {
  std::vector<ExprP> out;
  beta_rec(e, [](ExprP r) { return r; }, out);
  return out;
}

ExprP normalize(const ExprP& e, std::size_t budget) {
  ExprP cur = e;
  while (budget-- > 0) {
    auto steps = beta_step(cur);
    if (steps.empty()) return cur;
    cur = steps.front();
  }
  throw ConversionBudgetError("normalization budget exceeded");
}

namespace {

bool alpha_rec(const ExprP& a, const ExprP& b,
               std::vector<std::pair<std::string, std::string>>& binders) {
  if (a->v.index() != b->v.index()) return false;
  if (const auto* va = std::get_if<Expr::Var>(&a->v)) {
    const auto& vb = std::get<Expr::Var>(b->v);
    for (auto it = binders.rbegin(); it != binders.rend(); ++it) {
      bool la = it->first == va->name;
      bool lb = it->second == vb.name;
      if (la || lb) return la && lb;
    }
    return va->name == vb.name;
  }
  if (const auto* sa = std::get_if<Expr::Sort>(&a->v)) {
    return sa->index == std::get<Expr::Sort>(b->v).index;
  }
  if (const auto* aa = std::get_if<Expr::App>(&a->v)) {
    const auto& ab = std::get<Expr::App>(b->v);
    return alpha_rec(aa->fn, ab.fn, binders) && alpha_rec(aa->arg, ab.arg, binders);
  }
  auto binder = [&](const std::string& v1, const ExprP& t1, const ExprP& b1, const std::string& v2,
                    const ExprP& t2, const ExprP& b2) {
    if (!alpha_rec(t1, t2, binders)) return false;
    binders.emplace_back(v1, v2);
    bool ok = alpha_rec(b1, b2, binders);
    binders.pop_back();
    return ok;
  };
  if (const auto* la = std::get_if<Expr::Lam>(&a->v)) {
    const auto& lb = std::get<Expr::Lam>(b->v);
    return binder(la->var, la->type, la->body, lb.var, lb.type, lb.body);
  }
  const auto& pa = std::get<Expr::Pi>(a->v);
  const auto& pb = std::get<Expr::Pi>(b->v);
  return binder(pa.var, pa.type, pa.body, pb.var, pb.type, pb.body);
}

bool beta_equal(const ExprP& a, const ExprP& b, std::size_t budget) {
  std::vector<std::pair<std::string, std::string>> binders;
  if (alpha_rec(a, b, binders)) return true;
  ExprP na = normalize(a, budget);
  ExprP nb = normalize(b, budget);
  return alpha_eq(na, nb);
}

std::uint32_t sort_of(const ExprP& type_of_type, std::size_t budget, const char* what) {
  ExprP n = normalize(type_of_type, budget);
  if (const auto* s = std::get_if<Expr::Sort>(&n->v)) return s->index;
  throw TypeError(std::string(what) + " does not live in a sort");
}

}  // namespace

bool alpha_eq(const ExprP& a, const ExprP& b) {
  std::vector<std::pair<std::string, std::string>> binders;
  return alpha_rec(a, b, binders);
}

ExprP typecheck(const Spec& spec, const Context& ctx, const ExprP& e, std::size_t budget) {
  if (const auto* s = std::get_if<Expr::Sort>(&e->v)) {
    for (const auto& [m, n] : spec.axioms) {
      if (m == s->index) return e_sort(n);
    }
    throw TypeError("no axiom types sort s" + std::to_string(s->index));
  }
  if (const auto* v = std::get_if<Expr::Var>(&e->v)) {
    for (auto it = ctx.rbegin(); it != ctx.rend(); ++it) {
      if (it->first == v->name) return it->second;
    }
    throw TypeError("unbound variable: " + v->name);
  }
  if (const auto* a = std::get_if<Expr::App>(&e->v)) {
    ExprP tf = normalize(typecheck(spec, ctx, a->fn, budget), budget);
    const auto* pi = std::get_if<Expr::Pi>(&tf->v);
    if (pi == nullptr) throw TypeError("applying a non-function of type " + show(tf));
    ExprP ta = typecheck(spec, ctx, a->arg, budget);
    if (!beta_equal(ta, pi->type, budget)) {
      throw TypeError("argument type " + show(ta) + " does not convert to " + show(pi->type));
    }
    return subst(pi->body, pi->var, a->arg);
  }
  if (const auto* l = std::get_if<Expr::Lam>(&e->v)) {
    // The domain must live in a sort, the body gives the codomain, and the
    // resulting product must itself be well-formed.
    (void)sort_of(typecheck(spec, ctx, l->type, budget), budget, "lambda domain");
    Context inner = ctx;
    inner.emplace_back(l->var, l->type);
    ExprP tb = typecheck(spec, inner, l->body, budget);
    ExprP pi = e_pi(l->var, l->type, tb);
    (void)typecheck(spec, ctx, pi, budget);
    return pi;
  }
  const auto& p = std::get<Expr::Pi>(e->v);
  std::uint32_t l = sort_of(typecheck(spec, ctx, p.type, budget), budget, "product domain");
  Context inner = ctx;
  inner.emplace_back(p.var, p.type);
  std::uint32_t m = sort_of(typecheck(spec, inner, p.body, budget), budget, "product codomain");
  for (const auto& [rl, rm, rn] : spec.rules) {
    if (rl == l && rm == m) return e_sort(rn);
  }
  throw TypeError("no rule for product over (s" + std::to_string(l) + ", s" + std::to_string(m) +
                  ")");
}

std::string show(const ExprP& e) {
  if (const auto* v = std::get_if<Expr::Var>(&e->v)) return v->name;
  if (const auto* s = std::get_if<Expr::Sort>(&e->v)) return "s" + std::to_string(s->index);
  if (const auto* a = std::get_if<Expr::App>(&e->v)) {
    return "(" + show(a->fn) + " " + show(a->arg) + ")";
  }
  if (const auto* l = std::get_if<Expr::Lam>(&e->v)) {
    return "(\\" + l->var + ":" + show(l->type) + ". " + show(l->body) + ")";
  }
  const auto& p = std::get<Expr::Pi>(e->v);
  return "(Pi " + p.var + ":" + show(p.type) + ". " + show(p.body) + ")";
}

}  // namespace mtg::pts
