/*
 * Copyright 2026 the mettagraph authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "mettagraph/minisys.hpp"

#include <set>

#include "mettagraph/engine.hpp"

namespace mtg::minisys {

using mlang::Atomspace;
using mlang::Builder;
using mlang::Keyword;
using mlang::TermPtr;
using mlang::TypeExpr;

namespace {

ExprP mk(Expr::Kind k, ExprP kid = nullptr) {
  return std::make_shared<const Expr>(Expr{k, std::move(kid)});
}

}  // namespace

ExprP v1() { return mk(Expr::Kind::V1); }
ExprP v2() { return mk(Expr::Kind::V2); }
ExprP f1(ExprP e) { return mk(Expr::Kind::F1, std::move(e)); }
ExprP thunk(ExprP e) { return mk(Expr::Kind::Thunk, std::move(e)); }
ExprP sample(ExprP e) { return mk(Expr::Kind::Sample, std::move(e)); }

std::string show(const ExprP& e) {
  switch (e->kind) {
    case Expr::Kind::V1: return "v1";
    case Expr::Kind::V2: return "v2";
    case Expr::Kind::F1: return "(f1 " + show(e->kid) + ")";
    case Expr::Kind::Thunk: return "(thunk " + show(e->kid) + ")";
    case Expr::Kind::Sample: return "(sample " + show(e->kid) + ")";
  }
  return "?";
}

std::size_t size(const ExprP& e) { return e->kid ? 1 + size(e->kid) : 1; }

bool equal(const ExprP& a, const ExprP& b) { return show(a) == show(b); }

std::optional<std::string> type_of(const ExprP& e) {
  switch (e->kind) {
    case Expr::Kind::V1:
    case Expr::Kind::V2:
      return "A";
    case Expr::Kind::F1: {
      auto t = type_of(e->kid);
      if (t && *t == "A") return "A";
      return std::nullopt;
    }
    case Expr::Kind::Thunk: {
      auto t = type_of(e->kid);
      if (t) return "D(" + *t + ")";
      return std::nullopt;
    }
    case Expr::Kind::Sample: {
      auto t = type_of(e->kid);
      if (t && t->rfind("D(", 0) == 0) return t->substr(2, t->size() - 3);
      return std::nullopt;
    }
  }
  return std::nullopt;
}

std::optional<ExprP> beta3(const ExprP& e) {
  switch (e->kind) {
    case Expr::Kind::V1:
    case Expr::Kind::V2:
      return std::nullopt;
    case Expr::Kind::F1: {
      if (auto inner = beta3(e->kid)) return f1(*inner);
      if (e->kid->kind == Expr::Kind::V1) return v2();
      if (e->kid->kind == Expr::Kind::V2) return v1();
      return std::nullopt;
    }
    case Expr::Kind::Thunk: {
      if (auto inner = beta3(e->kid)) return thunk(*inner);
      return std::nullopt;
    }
    case Expr::Kind::Sample: {
      if (auto inner = beta3(e->kid)) return sample(*inner);
      if (e->kid->kind == Expr::Kind::Thunk) return e->kid->kid;
      return std::nullopt;
    }
  }
  return std::nullopt;
}

std::vector<ExprP> enumerate_terms() {
  std::vector<ExprP> out;
  std::vector<ExprP> frontier{v1(), v2()};
  for (const auto& e : frontier) out.push_back(e);
  for (int sz = 2; sz <= 3; ++sz) {
    std::vector<ExprP> next;
    for (const auto& e : frontier) {
      for (auto wrap : {f1, thunk, sample}) {
        ExprP candidate = wrap(e);
        if (type_of(candidate)) next.push_back(candidate);
      }
    }
    for (const auto& e : next) out.push_back(e);
    frontier = std::move(next);
  }
  return out;
}

namespace {

const TypeExpr kA = mlang::t_base("A");

TypeExpr mini_tag(const ExprP& e) {
  auto t = type_of(e);
  if (!t) return mlang::t_toptype();
  // "A" / "D(A)" / "D(D(A))"
  int depth = 0;
  std::string s = *t;
  while (s.rfind("D(", 0) == 0) {
    ++depth;
    s = s.substr(2, s.size() - 3);
  }
  TypeExpr out = kA;
  for (int i = 0; i < depth; ++i) out = mlang::t_applied("Distribution", {out});
  return out;
}

TermPtr build_expr(Builder& b, const ExprP& e) {
  switch (e->kind) {
    case Expr::Kind::V1: return b.sym("v1", kA);
    case Expr::Kind::V2: return b.sym("v2", kA);
    case Expr::Kind::F1:
      return b.app(b.sym("f1", mlang::t_arrow(kA, kA)), build_expr(b, e->kid), kA, true);
    case Expr::Kind::Thunk: {
      TypeExpr inner = mini_tag(e->kid);
      return b.app(b.sym("thunk", mlang::t_arrow(inner, mlang::t_applied("Distribution", {inner}))),
                   build_expr(b, e->kid), mini_tag(e), true);
    }
    case Expr::Kind::Sample: {
      TypeExpr result = mini_tag(e);
      return b.app(b.sym("sample", mlang::t_arrow(mini_tag(e->kid), result)), build_expr(b, e->kid),
                   result, true);
    }
  }
  throw Error("unreachable");
}

Atomspace base_space(Builder& b, bool swapped) {
  Atomspace space;
  space = space.add_term(b.typing(b.sym("v1", mlang::t_toptype()), kA));
  space = space.add_term(b.typing(b.sym("v2", mlang::t_toptype()), kA));
  space = space.add_term(b.typing(b.sym("f1", mlang::t_toptype()), mlang::t_arrow(kA, kA)));
  space = space.add_term(
      b.typing(b.sym("sample", mlang::t_toptype()),
               mlang::t_arrow(mlang::t_applied("Distribution", {mlang::t_tvar("t")}),
                              mlang::t_tvar("t"))));
  space = space.add_term(
      b.typing(b.sym("thunk", mlang::t_toptype()),
               mlang::t_arrow(mlang::t_tvar("t"),
                              mlang::t_applied("Distribution", {mlang::t_tvar("t")}))));

  auto f1_app = [&](const char* value) {
    return b.app(b.sym("f1", mlang::t_arrow(kA, kA)), b.sym(value, kA), kA);
  };
  if (!swapped) {
    space = space.add_term(b.equation(f1_app("v1"), b.sym("v2", kA)));
    space = space.add_term(b.equation(f1_app("v2"), b.sym("v1", kA)));
  } else {
    space = space.add_term(b.equation(f1_app("v1"), b.sym("v1", kA)));
    space = space.add_term(b.equation(f1_app("v2"), b.sym("v2", kA)));
  }
  TermPtr st = b.app(b.sym("sample", mlang::t_toptype()),
                     b.app(b.sym("thunk", mlang::t_toptype()), b.var("a", mlang::t_toptype()),
                           mlang::t_toptype()),
                     mlang::t_toptype());
  space = space.add_term(b.equation(std::move(st), b.var("a", mlang::t_toptype())));
  return space;
}

}  // namespace

Atomspace encode(const ExprP& e, bool swapped) {
  Builder b;
  Atomspace space = base_space(b, swapped);
  return space.add_term(b.pointed(build_expr(b, e)));
}

ExprP decode(const TermPtr& t) {
  TermPtr cur = t;
  while (cur->head.is_key(Keyword::Activate) && cur->kids.size() == 1) cur = cur->kids[0];
  if (cur->kids.empty()) {
    if (cur->head == mlang::l_sym("v1")) return v1();
    if (cur->head == mlang::l_sym("v2")) return v2();
    throw Error("cannot decode value: " + mlang::term_show(cur));
  }
  if (cur->head.is_key(Keyword::FunApp) && cur->kids.size() == 2) {
    TermPtr fn = cur->kids[0];
    while (fn->head.is_key(Keyword::Activate) && fn->kids.size() == 1) fn = fn->kids[0];
    ExprP arg = decode(cur->kids[1]);
    if (fn->head == mlang::l_sym("f1")) return f1(arg);
    if (fn->head == mlang::l_sym("thunk")) return thunk(arg);
    if (fn->head == mlang::l_sym("sample")) return sample(arg);
  }
  throw Error("cannot decode term: " + mlang::term_show(cur));
}

namespace {

const std::vector<std::string> kProbeTypes = {"A", "D(A)", "D(D(A))"};
const std::vector<std::string> kProbeConsts = {"v1", "v2"};

template <typename S, typename TypeOf, typename IsConst>
void add_probes(std::vector<typename lts::Lts<S>::Succ>& succ, const S& state, TypeOf type_of_fn,
                IsConst is_const_fn) {
  for (const auto& t : kProbeTypes) {
    bool holds = type_of_fn(t);
    succ.push_back({(holds ? "is-of-type(" : "not-is-of-type(") + t + ")", state, std::nullopt});
  }
  for (const auto& c : kProbeConsts) {
    bool holds = is_const_fn(c);
    succ.push_back({(holds ? "is-const(" : "not-is-const(") + c + ")", state, std::nullopt});
  }
}

}  // namespace

Systems build_systems(bool swapped) {
  // str2: direct case analysis over expressions.
  lts::Lts<ExprP> obj;
  obj.key = [](const ExprP& e) { return show(e); };
  obj.show = obj.key;
  obj.step = [](const ExprP& e) {
    std::vector<lts::Lts<ExprP>::Succ> succ;
    if (auto next = beta3(e)) succ.push_back({"update", *next, std::nullopt});
    add_probes<ExprP>(succ, e,
                      [&](const std::string& t) {
                        auto ty = type_of(e);
                        return ty && *ty == t;
                      },
                      [&](const std::string& c) { return show(e) == c; });
    return succ;
  };

  // str1: the pattern matcher over encoded spaces, pointer moves
  // compressed away.
  lts::Lts<Atomspace> eng;
  eng.key = [](const Atomspace& s) { return s.canonical_key(); };
  eng.show = [](const Atomspace& s) {
    return s.pointer() ? mlang::term_show(s.atoms()[s.pointer()->atom]) : "<halted>";
  };
  eng.step = [](const Atomspace& s) {
    std::vector<lts::Lts<Atomspace>::Succ> succ;
    for (const auto& next : mlang::compressed_step(s)) {
      succ.push_back({"update", next, std::nullopt});
    }
    ExprP decoded = nullptr;
    if (s.pointer()) {
      try {
        decoded = decode(s.atoms()[s.pointer()->atom]);
      } catch (const Error&) {
      }
    }
    add_probes<Atomspace>(succ, s,
                          [&](const std::string& t) {
                            if (!decoded) return false;
                            auto ty = type_of(decoded);
                            return ty && *ty == t;
                          },
                          [&](const std::string& c) { return decoded && show(decoded) == c; });
    return succ;
  };

  std::vector<ExprP> terms = enumerate_terms();
  std::vector<Atomspace> starts1;
  starts1.reserve(terms.size());
  for (const auto& e : terms) starts1.push_back(mlang::quiesce(encode(e, swapped)));

  Systems out;
  out.str1 = lts::reachable(eng, starts1, 4096);
  out.str2 = lts::reachable(obj, terms, 4096);
  for (std::size_t i = 0; i < terms.size(); ++i) {
    // Start states intern first, in order, on both sides.
    std::size_t left = 0, right = 0;
    for (std::size_t k = 0; k < out.str1.size(); ++k) {
      if (out.str1.keys[k] == starts1[i].canonical_key()) {
        left = k;
        break;
      }
    }
    for (std::size_t k = 0; k < out.str2.size(); ++k) {
      if (out.str2.keys[k] == show(terms[i])) {
        right = k;
        break;
      }
    }
    out.starts.emplace_back(left, right);
  }
  return out;
}

DemoResult prove_bisim(bool swapped) {
  Systems sys = build_systems(swapped);
  DemoResult out;
  out.state_count_str1 = sys.str1.size();
  out.state_count_str2 = sys.str2.size();
  out.verdict = lts::bisim_check_pairs(sys.str1, sys.str2, sys.starts);
  out.relation_size = out.verdict.relation.size();
  if (out.verdict.bisimilar()) {
    std::set<std::pair<std::size_t, std::size_t>> rel(out.verdict.relation.begin(),
                                                      out.verdict.relation.end());
    out.pairing_in_relation = true;
    for (const auto& [left, right] : sys.starts) {
      if (!rel.count({left, right})) out.pairing_in_relation = false;
    }
    out.transfer_verified = lts::verify_transfer(sys.str1, sys.str2, out.verdict.relation);
  }
  return out;
}

}  // namespace mtg::minisys
