/*
 * Copyright 2026 the mettagraph authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "mettagraph/pdts.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <set>

namespace mtg::pdts {

bool Type::operator==(const Type& other) const {
  if (v.index() != other.v.index()) return false;
  if (const auto* b = std::get_if<Base>(&v)) return b->name == std::get<Base>(other.v).name;
  if (const auto* p = std::get_if<Pi>(&v)) {
    const auto& q = std::get<Pi>(other.v);
    return p->var == q.var && *p->dom == *q.dom && alpha_eq(p->body, q.body);
  }
  if (const auto* d = std::get_if<Dist>(&v)) return *d->of == *std::get<Dist>(other.v).of;
  if (const auto* u = std::get_if<Union>(&v)) {
    const auto& w = std::get<Union>(other.v);
    return *u->lhs == *w.lhs && *u->rhs == *w.rhs;
  }
  if (const auto* i = std::get_if<Inter>(&v)) {
    const auto& w = std::get<Inter>(other.v);
    return *i->lhs == *w.lhs && *i->rhs == *w.rhs;
  }
  return true;  // TypeU
}

std::string Type::show() const {
  if (const auto* b = std::get_if<Base>(&v)) return b->name;
  if (const auto* p = std::get_if<Pi>(&v)) {
    return "(Pi " + p->var + ":" + p->dom->show() + ". " + pdts::show(p->body) + ")";
  }
  if (const auto* d = std::get_if<Dist>(&v)) return "D(" + d->of->show() + ")";
  if (const auto* u = std::get_if<Union>(&v)) return "(" + u->lhs->show() + " | " + u->rhs->show() + ")";
  if (const auto* i = std::get_if<Inter>(&v)) return "(" + i->lhs->show() + " & " + i->rhs->show() + ")";
  return "Type";
}

TypeP ty_base(std::string name) { return std::make_shared<const Type>(Type{Type::Base{std::move(name)}}); }
TypeP ty_pi(std::string var, TypeP dom, ExprP body) {
  return std::make_shared<const Type>(Type{Type::Pi{std::move(var), std::move(dom), std::move(body)}});
}
TypeP ty_arrow(TypeP dom, TypeP cod) {
  return ty_pi("_", std::move(dom), e_tyval(std::move(cod)));
}
TypeP ty_dist(TypeP of) { return std::make_shared<const Type>(Type{Type::Dist{std::move(of)}}); }
TypeP ty_union(TypeP lhs, TypeP rhs) {
  return std::make_shared<const Type>(Type{Type::Union{std::move(lhs), std::move(rhs)}});
}
TypeP ty_inter(TypeP lhs, TypeP rhs) {
  return std::make_shared<const Type>(Type{Type::Inter{std::move(lhs), std::move(rhs)}});
}
TypeP ty_type() { return std::make_shared<const Type>(Type{Type::TypeU{}}); }

ExprP e_var(std::string name) { return std::make_shared<const Expr>(Expr{Expr::Var{std::move(name)}}); }
ExprP e_app(ExprP fn, ExprP arg) {
  return std::make_shared<const Expr>(Expr{Expr::App{std::move(fn), std::move(arg)}});
}
ExprP e_lam(std::string var, TypeP type, ExprP body) {
  return std::make_shared<const Expr>(Expr{Expr::Lam{std::move(var), std::move(type), std::move(body)}});
}
ExprP e_random(double rho, ExprP left, ExprP right) {
  if (rho < 0.0 || rho > 1.0) throw TypeError("random weight must lie in [0, 1]");
  return std::make_shared<const Expr>(Expr{Expr::Random{rho, std::move(left), std::move(right)}});
}
ExprP e_sample(ExprP of) { return std::make_shared<const Expr>(Expr{Expr::Sample{std::move(of)}}); }
ExprP e_thunk(ExprP of) { return std::make_shared<const Expr>(Expr{Expr::Thunk{std::move(of)}}); }
ExprP e_tyval(TypeP type) { return std::make_shared<const Expr>(Expr{Expr::TyVal{std::move(type)}}); }

bool subtype(const TypeP& a, const TypeP& b) {
  if (*a == *b) return true;
  if (const auto* u = std::get_if<Type::Union>(&a->v)) {
    if (subtype(u->lhs, b) && subtype(u->rhs, b)) return true;
  }
  if (const auto* u = std::get_if<Type::Union>(&b->v)) {
    if (subtype(a, u->lhs) || subtype(a, u->rhs)) return true;
  }
  if (const auto* i = std::get_if<Type::Inter>(&a->v)) {
    if (subtype(i->lhs, b) || subtype(i->rhs, b)) return true;
  }
  if (const auto* i = std::get_if<Type::Inter>(&b->v)) {
    if (subtype(a, i->lhs) && subtype(a, i->rhs)) return true;
  }
  if (const auto* da = std::get_if<Type::Dist>(&a->v)) {
    if (const auto* db = std::get_if<Type::Dist>(&b->v)) {
      return subtype(da->of, db->of);
    }
  }
  if (const auto* pa = std::get_if<Type::Pi>(&a->v)) {
    if (const auto* pb = std::get_if<Type::Pi>(&b->v)) {
      return subtype(pb->dom, pa->dom) && alpha_eq(pa->body, pb->body);
    }
  }
  return false;
}

TypeP typecheck(const Context& ctx, const ExprP& e) {
  if (const auto* v = std::get_if<Expr::Var>(&e->v)) {
    auto it = ctx.find(v->name);
    if (it == ctx.end()) throw TypeError("unbound variable: " + v->name);
    return it->second;
  }
  if (const auto* a = std::get_if<Expr::App>(&e->v)) {
    TypeP tf = typecheck(ctx, a->fn);
    const auto* pi = std::get_if<Type::Pi>(&tf->v);
    if (pi == nullptr) throw TypeError("applying a non-function of type " + tf->show());
    TypeP ta = typecheck(ctx, a->arg);
    if (!subtype(ta, pi->dom)) {
      throw TypeError("argument type " + ta->show() + " is not below " + pi->dom->show());
    }
    ExprP body = subst(pi->body, pi->var, a->arg);
    // The codomain expression must denote a type (possibly after a few
    // reduction steps).
    for (std::size_t fuel = 0; fuel < 64; ++fuel) {
      if (const auto* tv = std::get_if<Expr::TyVal>(&body->v)) return tv->type;
      auto next = step(body);
      if (next.size() != 1) break;
      body = next.front().to;
    }
    throw TypeError("application codomain does not reduce to a type");
  }
  if (const auto* l = std::get_if<Expr::Lam>(&e->v)) {
    Context inner = ctx;
    inner[l->var] = l->type;
    TypeP tb = typecheck(inner, l->body);
    return ty_pi(l->var, l->type, e_tyval(tb));
  }
  if (const auto* r = std::get_if<Expr::Random>(&e->v)) {
    TypeP t1 = typecheck(ctx, r->left);
    TypeP t2 = typecheck(ctx, r->right);
    return ty_union(std::move(t1), std::move(t2));
  }
  if (const auto* s = std::get_if<Expr::Sample>(&e->v)) {
    TypeP t = typecheck(ctx, s->of);
    const auto* d = std::get_if<Type::Dist>(&t->v);
    if (d == nullptr) throw TypeError("sampling a non-distribution of type " + t->show());
    return d->of;
  }
  if (const auto* t = std::get_if<Expr::Thunk>(&e->v)) {
    return ty_dist(typecheck(ctx, t->of));
  }
  return ty_type();  // TyVal
}

ExprP subst(const ExprP& e, const std::string& var, const ExprP& value) {
  if (const auto* v = std::get_if<Expr::Var>(&e->v)) {
    return v->name == var ? value : e;
  }
  if (const auto* a = std::get_if<Expr::App>(&e->v)) {
    return e_app(subst(a->fn, var, value), subst(a->arg, var, value));
  }
  if (const auto* l = std::get_if<Expr::Lam>(&e->v)) {
    if (l->var == var) return e;
    // Binders in the generated corpus are unique; a collision check keeps
    // hand-written terms safe.
    return e_lam(l->var, l->type, subst(l->body, var, value));
  }
  if (const auto* r = std::get_if<Expr::Random>(&e->v)) {
    return e_random(r->rho, subst(r->left, var, value), subst(r->right, var, value));
  }
  if (const auto* s = std::get_if<Expr::Sample>(&e->v)) return e_sample(subst(s->of, var, value));
  if (const auto* t = std::get_if<Expr::Thunk>(&e->v)) return e_thunk(subst(t->of, var, value));
  return e;
}

namespace {

using Wrap = std::function<ExprP(ExprP)>;

/// First redex, leftmost-innermost, not under binders.
bool step_rec(const ExprP& e, const Wrap& wrap, std::vector<WeightedStep>& out) {
  if (const auto* a = std::get_if<Expr::App>(&e->v)) {
    if (step_rec(a->fn, [&](ExprP r) { return wrap(e_app(std::move(r), a->arg)); }, out)) return true;
    if (step_rec(a->arg, [&](ExprP r) { return wrap(e_app(a->fn, std::move(r))); }, out)) return true;
    if (const auto* l = std::get_if<Expr::Lam>(&a->fn->v)) {
      out.push_back({wrap(subst(l->body, l->var, a->arg)), 1.0});
      return true;
    }
    return false;
  }
  if (const auto* r = std::get_if<Expr::Random>(&e->v)) {
    if (step_rec(r->left, [&](ExprP x) { return wrap(e_random(r->rho, std::move(x), r->right)); }, out)) return true;
    if (step_rec(r->right, [&](ExprP x) { return wrap(e_random(r->rho, r->left, std::move(x))); }, out)) return true;
    out.push_back({wrap(r->left), r->rho});
    out.push_back({wrap(r->right), 1.0 - r->rho});
    return true;
  }
  if (const auto* s = std::get_if<Expr::Sample>(&e->v)) {
    if (step_rec(s->of, [&](ExprP x) { return wrap(e_sample(std::move(x))); }, out)) return true;
    if (const auto* t = std::get_if<Expr::Thunk>(&s->of->v)) {
      out.push_back({wrap(t->of), 1.0});
      return true;
    }
    return false;
  }
  if (const auto* t = std::get_if<Expr::Thunk>(&e->v)) {
    return step_rec(t->of, [&](ExprP x) { return wrap(e_thunk(std::move(x))); }, out);
  }
  return false;
}

}  // namespace

std::vector<WeightedStep> step(const ExprP& e) {
  std::vector<WeightedStep> out;
  step_rec(e, [](ExprP r) { return r; }, out);
  return out;
}

double Distribution::total() const {
  double t = residual;
  for (const auto& [_, entry] : mass) t += entry.second;
  return t;
}

namespace {

void full_eval_rec(const ExprP& e, double prob, std::size_t depth, std::size_t budget,
                   Distribution& out) {
  auto alts = step(e);
  if (alts.empty()) {
    auto& slot = out.mass[show(e)];
    slot.first = e;
    slot.second += prob;
    return;
  }
  if (depth >= budget) {
    out.residual += prob;
    return;
  }
  for (const auto& alt : alts) {
    if (alt.weight == 0.0) continue;
    full_eval_rec(alt.to, prob * alt.weight, depth + 1, budget, out);
  }
}

}  // namespace

Distribution full_eval(const ExprP& e, std::size_t budget) {
  if (budget == 0) throw BudgetError("full evaluation needs a positive budget");
  Distribution out;
  full_eval_rec(e, 1.0, 0, budget, out);
  return out;
}

ExprP sample_eval(const ExprP& e, std::uint64_t seed, std::size_t budget) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  ExprP cur = e;
  while (budget-- > 0) {
    auto alts = step(cur);
    if (alts.empty()) return cur;
    if (alts.size() == 1) {
      cur = alts.front().to;
      continue;
    }
    double x = unit(rng);
    double acc = 0.0;
    cur = alts.back().to;
    for (const auto& alt : alts) {
      acc += alt.weight;
      if (x < acc) {
        cur = alt.to;
        break;
      }
    }
  }
  throw BudgetError("sampling budget exceeded");
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
  if (const auto* la = std::get_if<Expr::Lam>(&a->v)) {
    const auto& lb = std::get<Expr::Lam>(b->v);
    if (!(*la->type == *lb.type)) return false;
    binders.emplace_back(la->var, lb.var);
    bool ok = alpha_rec(la->body, lb.body, binders);
    binders.pop_back();
    return ok;
  }
  if (const auto* ra = std::get_if<Expr::Random>(&a->v)) {
    const auto& rb = std::get<Expr::Random>(b->v);
    return ra->rho == rb.rho && alpha_rec(ra->left, rb.left, binders) &&
           alpha_rec(ra->right, rb.right, binders);
  }
  if (const auto* sa = std::get_if<Expr::Sample>(&a->v)) {
    return alpha_rec(sa->of, std::get<Expr::Sample>(b->v).of, binders);
  }
  if (const auto* ta = std::get_if<Expr::Thunk>(&a->v)) {
    return alpha_rec(ta->of, std::get<Expr::Thunk>(b->v).of, binders);
  }
  return *std::get<Expr::TyVal>(a->v).type == *std::get<Expr::TyVal>(b->v).type;
}

}  // namespace

bool alpha_eq(const ExprP& a, const ExprP& b) {
  std::vector<std::pair<std::string, std::string>> binders;
  return alpha_rec(a, b, binders);
}

std::string show(const ExprP& e) {
  if (const auto* v = std::get_if<Expr::Var>(&e->v)) return v->name;
  if (const auto* a = std::get_if<Expr::App>(&e->v)) {
    return "(" + show(a->fn) + " " + show(a->arg) + ")";
  }
  if (const auto* l = std::get_if<Expr::Lam>(&e->v)) {
    return "(\\" + l->var + ":" + l->type->show() + ". " + show(l->body) + ")";
  }
  if (const auto* r = std::get_if<Expr::Random>(&e->v)) {
    std::string w = std::to_string(r->rho);
    w.erase(w.find_last_not_of('0') + 1);
    if (!w.empty() && w.back() == '.') w.pop_back();
    return "random[" + w + "](" + show(r->left) + ", " + show(r->right) + ")";
  }
  if (const auto* s = std::get_if<Expr::Sample>(&e->v)) return "sample(" + show(s->of) + ")";
  if (const auto* t = std::get_if<Expr::Thunk>(&e->v)) return "thunk(" + show(t->of) + ")";
  return std::get<Expr::TyVal>(e->v).type->show();
}

std::size_t node_count(const ExprP& e) {
  if (std::holds_alternative<Expr::Var>(e->v) || std::holds_alternative<Expr::TyVal>(e->v)) return 1;
  if (const auto* a = std::get_if<Expr::App>(&e->v)) return 1 + node_count(a->fn) + node_count(a->arg);
  if (const auto* l = std::get_if<Expr::Lam>(&e->v)) return 1 + node_count(l->body);
  if (const auto* r = std::get_if<Expr::Random>(&e->v)) {
    return 1 + node_count(r->left) + node_count(r->right);
  }
  if (const auto* s = std::get_if<Expr::Sample>(&e->v)) return 1 + node_count(s->of);
  return 1 + node_count(std::get<Expr::Thunk>(e->v).of);
}

}  // namespace mtg::pdts
