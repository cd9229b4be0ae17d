/*
 * Copyright 2026 the mettagraph authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "mettagraph/mtype.hpp"

#include <deque>
#include <sstream>

namespace mtg::mlang {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool graph_eq(const GraphRef& a, const GraphRef& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return MGraph::iso(a->graph, b->graph, label_eq_ignoring_id);
}

std::string graph_show(const GraphRef& g);

}  // namespace

const char* keyword_name(Keyword k) {
  switch (k) {
    case Keyword::Colon: return ":";
    case Keyword::Leq: return "<=";
    case Keyword::Equals: return "=";
    case Keyword::Arrow: return "->";
    case Keyword::EqType: return "Eq";
    case Keyword::FunApp: return "funapp";
    case Keyword::Trans: return "trans";
    case Keyword::Activate: return "@";
    case Keyword::Pointer: return "!";
  }
  return "?";
}

bool TypeExpr::operator==(const TypeExpr& other) const {
  if (v.index() != other.v.index()) return false;
  return std::visit(
      overloaded{
          [&](const Base& a) { return a.name == other.as<Base>().name; },
          [&](const Var& a) { return a.name == other.as<Var>().name; },
          [&](const Applied& a) {
            const auto& b = other.as<Applied>();
            if (a.head != b.head || a.args.size() != b.args.size()) return false;
            for (std::size_t i = 0; i < a.args.size(); ++i) {
              if (*a.args[i] != *b.args[i]) return false;
            }
            return true;
          },
          [&](const Arrow& a) {
            const auto& b = other.as<Arrow>();
            return *a.dom == *b.dom && *a.cod == *b.cod;
          },
          [&](const Pi& a) {
            const auto& b = other.as<Pi>();
            return a.var == b.var && *a.dom == *b.dom && graph_eq(a.body, b.body);
          },
          [&](const EqType& a) {
            const auto& b = other.as<EqType>();
            return *a.type == *b.type && graph_eq(a.lhs, b.lhs) && graph_eq(a.rhs, b.rhs);
          },
          [&](const Union& a) {
            const auto& b = other.as<Union>();
            return *a.lhs == *b.lhs && *a.rhs == *b.rhs;
          },
          [&](const Inter& a) {
            const auto& b = other.as<Inter>();
            return *a.lhs == *b.lhs && *a.rhs == *b.rhs;
          },
          [&](const TypeU&) { return true; },
          [&](const TopType&) { return true; },
          [&](const Top&) { return true; },
          [&](const Judg&) { return true; },
          [&](const Exec&) { return true; },
      },
      v);
}

bool TypeExpr::is_small() const {
  return is<Base>() || is<Applied>() || is<Arrow>() || is<Pi>() || is<EqType>() || is<Union>() ||
         is<Inter>();
}

bool TypeExpr::has_var() const {
  return std::visit(overloaded{
                        [](const Base&) { return false; },
                        [](const Var&) { return true; },
                        [](const Applied& a) {
                          for (const auto& arg : a.args) {
                            if (arg->has_var()) return true;
                          }
                          return false;
                        },
                        [](const Arrow& a) { return a.dom->has_var() || a.cod->has_var(); },
                        [](const Pi& a) { return a.dom->has_var(); },
                        [](const EqType& a) { return a.type->has_var(); },
                        [](const Union& a) { return a.lhs->has_var() || a.rhs->has_var(); },
                        [](const Inter& a) { return a.lhs->has_var() || a.rhs->has_var(); },
                        [](const auto&) { return false; },
                    },
                    v);
}

std::string TypeExpr::show() const {
  return std::visit(
      overloaded{
          [](const Base& a) { return a.name; },
          [](const Var& a) { return "$" + a.name; },
          [](const Applied& a) {
            std::string out = "(" + a.head;
            for (const auto& arg : a.args) out += " " + arg->show();
            return out + ")";
          },
          [](const Arrow& a) { return "(-> " + a.dom->show() + " " + a.cod->show() + ")"; },
          [](const Pi& a) {
            return "(Pi $" + a.var + " " + a.dom->show() + " " + graph_show(a.body) + ")";
          },
          [](const EqType& a) {
            return "(Eq " + a.type->show() + " " + graph_show(a.lhs) + " " + graph_show(a.rhs) +
                   ")";
          },
          [](const Union& a) { return "(| " + a.lhs->show() + " " + a.rhs->show() + ")"; },
          [](const Inter& a) { return "(& " + a.lhs->show() + " " + a.rhs->show() + ")"; },
          [](const TypeU&) { return std::string("Type"); },
          [](const TopType&) { return std::string("TopType"); },
          [](const Top&) { return std::string("Top"); },
          [](const Judg&) { return std::string("Judgment"); },
          [](const Exec&) { return std::string("Exec"); },
      },
      v);
}

TypeExpr t_base(std::string name) { return TypeExpr{TypeExpr::Base{std::move(name)}}; }
TypeExpr t_tvar(std::string name) { return TypeExpr{TypeExpr::Var{std::move(name)}}; }
TypeExpr t_applied(std::string head, std::vector<TypeExpr> args) {
  std::vector<TypeRef> refs;
  refs.reserve(args.size());
  for (auto& a : args) refs.push_back(type_ref(std::move(a)));
  return TypeExpr{TypeExpr::Applied{std::move(head), std::move(refs)}};
}
TypeExpr t_arrow(TypeExpr dom, TypeExpr cod) {
  return TypeExpr{TypeExpr::Arrow{type_ref(std::move(dom)), type_ref(std::move(cod))}};
}
TypeExpr t_arrow_chain(const std::vector<TypeExpr>& parts) {
  if (parts.empty()) throw Error("t_arrow_chain: empty chain");
  TypeExpr out = parts.back();
  for (std::size_t i = parts.size() - 1; i-- > 0;) {
    out = t_arrow(parts[i], std::move(out));
  }
  return out;
}
TypeExpr t_pi(std::string var, TypeExpr dom, GraphRef body) {
  return TypeExpr{TypeExpr::Pi{std::move(var), type_ref(std::move(dom)), std::move(body)}};
}
TypeExpr t_eqtype(TypeExpr type, GraphRef lhs, GraphRef rhs) {
  return TypeExpr{TypeExpr::EqType{type_ref(std::move(type)), std::move(lhs), std::move(rhs)}};
}
TypeExpr t_union(TypeExpr lhs, TypeExpr rhs) {
  return TypeExpr{TypeExpr::Union{type_ref(std::move(lhs)), type_ref(std::move(rhs))}};
}
TypeExpr t_inter(TypeExpr lhs, TypeExpr rhs) {
  return TypeExpr{TypeExpr::Inter{type_ref(std::move(lhs)), type_ref(std::move(rhs))}};
}
TypeExpr t_type() { return TypeExpr{TypeExpr::TypeU{}}; }
TypeExpr t_toptype() { return TypeExpr{TypeExpr::TopType{}}; }
TypeExpr t_top() { return TypeExpr{TypeExpr::Top{}}; }
TypeExpr t_judg() { return TypeExpr{TypeExpr::Judg{}}; }
TypeExpr t_exec() { return TypeExpr{TypeExpr::Exec{}}; }

TypeRef type_ref(TypeExpr t) { return std::make_shared<const TypeExpr>(std::move(t)); }

bool BaseLabel::operator==(const BaseLabel& other) const {
  if (v.index() != other.v.index()) return false;
  return std::visit(overloaded{
                        [](const Nul&) { return true; },
                        [&](const Sym& a) { return a.name == other.as<Sym>().name; },
                        [&](const Var& a) { return a.name == other.as<Var>().name; },
                        [&](const Key& a) { return a.k == other.as<Key>().k; },
                        [&](const Ty& a) { return a.type == other.as<Ty>().type; },
                    },
                    v);
}

std::string BaseLabel::show() const {
  return std::visit(overloaded{
                        [](const Nul&) { return std::string("nul"); },
                        [](const Sym& a) { return a.name; },
                        [](const Var& a) { return "$" + a.name; },
                        [](const Key& a) { return std::string(keyword_name(a.k)); },
                        [](const Ty& a) { return a.type.show(); },
                    },
                    v);
}

BaseLabel l_nul() { return BaseLabel{BaseLabel::Nul{}}; }
BaseLabel l_sym(std::string name) { return BaseLabel{BaseLabel::Sym{std::move(name)}}; }
BaseLabel l_var(std::string name) { return BaseLabel{BaseLabel::Var{std::move(name)}}; }
BaseLabel l_key(Keyword k) { return BaseLabel{BaseLabel::Key{k}}; }
BaseLabel l_ty(TypeExpr t) { return BaseLabel{BaseLabel::Ty{std::move(t)}}; }

std::string MLabel::show() const { return base.show() + "#" + std::to_string(id); }

GraphRef graph_ref(MGraph g) { return std::make_shared<const GraphBox>(GraphBox{std::move(g)}); }

bool label_eq_ignoring_id(const MLabel& a, const MLabel& b) { return a.base == b.base; }

namespace {

std::string graph_show(const GraphRef& g) {
  if (!g) return "eps";
  return g->graph.to_sexpr([](const TypeExpr& t) { return t.show(); },
                           [](const MLabel& l) { return l.base.show(); });
}

}  // namespace

void SubtypeRelation::declare(const TypeExpr& a, const TypeExpr& b, std::size_t budget) {
  declared_.emplace_back(a, b);
  succ_[a.show()].push_back(b);
  close(budget);
}

void SubtypeRelation::close(std::size_t budget) {
  // Worklist transitive closure over the declared pairs.
  std::deque<std::pair<std::string, std::string>> work;
  closure_.clear();
  for (const auto& [a, b] : declared_) {
    std::string ka = a.show(), kb = b.show();
    if (closure_[ka].insert(kb).second) work.emplace_back(ka, kb);
  }
  std::size_t derived = 0;
  while (!work.empty()) {
    auto [a, b] = work.front();
    work.pop_front();
    auto it = closure_.find(b);
    if (it == closure_.end()) continue;
    for (const auto& c : it->second) {
      if (closure_[a].insert(c).second) {
        if (++derived > budget) throw BudgetError("subtype closure budget exceeded");
        work.emplace_back(a, c);
      }
    }
  }
}

bool SubtypeRelation::declared_leq(const TypeExpr& a, const TypeExpr& b) const {
  if (a == b) return true;
  auto it = closure_.find(a.show());
  return it != closure_.end() && it->second.count(b.show()) > 0;
}

std::vector<TypeExpr> SubtypeRelation::successors(const TypeExpr& a) const {
  auto it = succ_.find(a.show());
  if (it == succ_.end()) return {};
  return it->second;
}

std::size_t SubtypeRelation::closure_size() const {
  std::size_t n = 0;
  for (const auto& [_, s] : closure_) n += s.size();
  return n;
}

std::string SubtypeRelation::canonical_key() const {
  std::set<std::string> lines;
  for (const auto& [a, b] : declared_) lines.insert(a.show() + " <= " + b.show());
  std::string out;
  for (const auto& l : lines) out += l + ";";
  return out;
}

namespace {

struct SubQuery {
  const SubtypeRelation& rel;
  std::map<std::string, bool> memo;
  std::size_t budget;

  bool run(const TypeExpr& a, const TypeExpr& b) {
    if (budget == 0) throw BudgetError("subtype query budget exceeded");
    --budget;

    if (a == b) return true;
    if (b.is<TypeExpr::Top>()) return true;
    if (b.is<TypeExpr::TopType>() && (a.is_small() || a.is<TypeExpr::TopType>())) return true;

    std::string key = a.show() + "\x01" + b.show();
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    memo[key] = false;  // in-progress pairs resolve inductively

    bool out = false;
    if (rel.declared_leq(a, b)) {
      out = true;
    }
    if (!out && a.is<TypeExpr::Union>()) {
      const auto& u = a.as<TypeExpr::Union>();
      out = run(*u.lhs, b) && run(*u.rhs, b);
    }
    if (!out && b.is<TypeExpr::Union>()) {
      const auto& u = b.as<TypeExpr::Union>();
      out = run(a, *u.lhs) || run(a, *u.rhs);
    }
    if (!out && a.is<TypeExpr::Inter>()) {
      const auto& i = a.as<TypeExpr::Inter>();
      out = run(*i.lhs, b) || run(*i.rhs, b);
    }
    if (!out && b.is<TypeExpr::Inter>()) {
      const auto& i = b.as<TypeExpr::Inter>();
      out = run(a, *i.lhs) && run(a, *i.rhs);
    }
    if (!out && a.is<TypeExpr::Applied>() && b.is<TypeExpr::Applied>()) {
      // Applied constructors are covariant in their arguments.
      const auto& fa = a.as<TypeExpr::Applied>();
      const auto& fb = b.as<TypeExpr::Applied>();
      if (fa.head == fb.head && fa.args.size() == fb.args.size()) {
        out = true;
        for (std::size_t i = 0; i < fa.args.size() && out; ++i) {
          out = run(*fa.args[i], *fb.args[i]);
        }
      }
    }
    if (!out && a.is<TypeExpr::Arrow>() && b.is<TypeExpr::Arrow>()) {
      const auto& fa = a.as<TypeExpr::Arrow>();
      const auto& fb = b.as<TypeExpr::Arrow>();
      out = run(*fb.dom, *fa.dom) && run(*fa.cod, *fb.cod);
    }
    if (!out && a.is<TypeExpr::Pi>() && b.is<TypeExpr::Pi>()) {
      // Contravariant domain; bodies must agree structurally.
      const auto& pa = a.as<TypeExpr::Pi>();
      const auto& pb = b.as<TypeExpr::Pi>();
      out = run(*pb.dom, *pa.dom) && pa.var == pb.var &&
            MGraph::iso(pa.body->graph, pb.body->graph, label_eq_ignoring_id);
    }
    if (!out) {
      // Follow one declared step from a.
      for (const auto& mid : rel.successors(a)) {
        if (run(mid, b)) {
          out = true;
          break;
        }
      }
    }
    memo[key] = out;
    return out;
  }
};

}  // namespace

bool subtype_query(const SubtypeRelation& rel, const TypeExpr& a, const TypeExpr& b,
                   std::size_t budget) {
  SubQuery q{rel, {}, budget};
  return q.run(a, b);
}

}  // namespace mtg::mlang
