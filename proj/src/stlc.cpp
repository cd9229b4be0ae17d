/*
 * Copyright 2026 the mettagraph authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "mettagraph/stlc.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace mtg::stlc {

bool Type::operator==(const Type& other) const {
  if (v.index() != other.v.index()) return false;
  if (const auto* b = std::get_if<Base>(&v)) {
    return b->name == std::get<Base>(other.v).name;
  }
  const auto& a1 = std::get<Arrow>(v);
  const auto& a2 = std::get<Arrow>(other.v);
  return *a1.dom == *a2.dom && *a1.cod == *a2.cod;
}

std::string Type::show() const {
  if (const auto* b = std::get_if<Base>(&v)) return b->name;
  const auto& a = std::get<Arrow>(v);
  std::string dom = a.dom->show();
  if (std::holds_alternative<Arrow>(a.dom->v)) dom = "(" + dom + ")";
  return dom + " -> " + a.cod->show();
}

TypeP ty_base(std::string name) { return std::make_shared<const Type>(Type{Type::Base{std::move(name)}}); }
TypeP ty_arrow(TypeP dom, TypeP cod) {
  return std::make_shared<const Type>(Type{Type::Arrow{std::move(dom), std::move(cod)}});
}

ExprP e_var(std::string name) { return std::make_shared<const Expr>(Expr{Expr::Var{std::move(name)}}); }
ExprP e_app(ExprP fn, ExprP arg) {
  return std::make_shared<const Expr>(Expr{Expr::App{std::move(fn), std::move(arg)}});
}
ExprP e_lam(std::string var, TypeP type, ExprP body) {
  return std::make_shared<const Expr>(Expr{Expr::Lam{std::move(var), std::move(type), std::move(body)}});
}

TypeP typecheck(const Context& ctx, const ExprP& e) {
  if (const auto* v = std::get_if<Expr::Var>(&e->v)) {
    auto it = ctx.find(v->name);
    if (it == ctx.end()) throw TypeError("unbound variable: " + v->name);
    return it->second;
  }
  if (const auto* a = std::get_if<Expr::App>(&e->v)) {
    TypeP tf = typecheck(ctx, a->fn);
    TypeP ta = typecheck(ctx, a->arg);
    const auto* arrow = std::get_if<Type::Arrow>(&tf->v);
    if (arrow == nullptr) throw TypeError("applying a non-function of type " + tf->show());
    if (!(*arrow->dom == *ta)) {
      throw TypeError("argument type " + ta->show() + " does not match " + arrow->dom->show());
    }
    return arrow->cod;
  }
  const auto& l = std::get<Expr::Lam>(e->v);
  if (!l.type) throw TypeError("untyped lambda in a typed context");
  Context inner = ctx;
  inner[l.var] = l.type;
  return ty_arrow(l.type, typecheck(inner, l.body));
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
  const auto& l = std::get<Expr::Lam>(e->v);
  bool inserted = bound.insert(l.var).second;
  collect_free(l.body, bound, out);
  if (inserted) bound.erase(l.var);
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
  if (const auto* a = std::get_if<Expr::App>(&e->v)) {
    return e_app(subst(a->fn, var, value), subst(a->arg, var, value));
  }
  const auto& l = std::get<Expr::Lam>(e->v);
  if (l.var == var) return e;  // shadowed
  auto fv_value = free_vars(value);
  if (std::find(fv_value.begin(), fv_value.end(), l.var) != fv_value.end()) {
    // The binder would capture a free variable of the value: rename it.
    std::set<std::string> taken(fv_value.begin(), fv_value.end());
    for (const auto& n : free_vars(l.body)) taken.insert(n);
    taken.insert(var);
    std::string renamed = fresh_name(l.var, taken);
    ExprP body = subst(l.body, l.var, e_var(renamed));
    return e_lam(renamed, l.type, subst(body, var, value));
  }
  return e_lam(l.var, l.type, subst(l.body, var, value));
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
    beta_rec(l->body, [&](ExprP r) { return wrap(e_lam(l->var, l->type, std::move(r))); }, out);
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
    cur = steps.front();  // leftmost-outermost
  }
  throw BudgetError("normalization budget exceeded");
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
  if (const auto* aa = std::get_if<Expr::App>(&a->v)) {
    const auto& ab = std::get<Expr::App>(b->v);
    return alpha_rec(aa->fn, ab.fn, binders) && alpha_rec(aa->arg, ab.arg, binders);
  }
  const auto& la = std::get<Expr::Lam>(a->v);
  const auto& lb = std::get<Expr::Lam>(b->v);
  if (static_cast<bool>(la.type) != static_cast<bool>(lb.type)) return false;
  if (la.type && !(*la.type == *lb.type)) return false;
  binders.emplace_back(la.var, lb.var);
  bool ok = alpha_rec(la.body, lb.body, binders);
  binders.pop_back();
  return ok;
}

}  // namespace

bool alpha_eq(const ExprP& a, const ExprP& b) {
  std::vector<std::pair<std::string, std::string>> binders;
  return alpha_rec(a, b, binders);
}

std::size_t node_count(const ExprP& e) {
  if (std::holds_alternative<Expr::Var>(e->v)) return 1;
  if (const auto* a = std::get_if<Expr::App>(&e->v)) {
    return 1 + node_count(a->fn) + node_count(a->arg);
  }
  return 1 + node_count(std::get<Expr::Lam>(e->v).body);
}

std::string show(const ExprP& e) {
  if (const auto* v = std::get_if<Expr::Var>(&e->v)) return v->name;
  if (const auto* a = std::get_if<Expr::App>(&e->v)) {
    return "(" + show(a->fn) + " " + show(a->arg) + ")";
  }
  const auto& l = std::get<Expr::Lam>(e->v);
  std::string ann = l.type ? ":" + l.type->show() : "";
  return "(\\" + l.var + ann + ". " + show(l.body) + ")";
}

}  // namespace mtg::stlc
