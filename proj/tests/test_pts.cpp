#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mettagraph/encode.hpp"
#include "mettagraph/engine.hpp"
#include "mettagraph/pts.hpp"
#include "mettagraph/stlc.hpp"

using namespace mtg;
using namespace mtg::pts;

namespace {

// Two sorts, terms typed by s1, s1 typed by s2, products over s1.
Spec simply_typed_spec() {
  Spec s;
  s.sorts = 2;
  s.axioms = {{1, 2}};
  s.rules = {{1, 1, 1}};
  return s;
}

Spec quine_spec() {
  Spec s;
  s.sorts = 1;
  s.axioms = {{1, 1}};
  s.rules = {{1, 1, 1}};
  return s;
}

}  // namespace

TEST_CASE("axioms type the sorts") {
  Spec s = simply_typed_spec();
  ExprP t = typecheck(s, {}, e_sort(1));
  CHECK(alpha_eq(t, e_sort(2)));
  CHECK_THROWS_AS(typecheck(s, {}, e_sort(2)), TypeError);
}

TEST_CASE("a self-typing sort is accepted") {
  Spec s = quine_spec();
  CHECK(alpha_eq(typecheck(s, {}, e_sort(1)), e_sort(1)));
}

TEST_CASE("products need a matching rule triple") {
  Spec s = simply_typed_spec();
  Context ctx{{"A", e_sort(1)}};
  ExprP pi = e_pi("x", e_var("A"), e_var("A"));
  CHECK(alpha_eq(typecheck(s, ctx, pi), e_sort(1)));

  Spec no_rules = s;
  no_rules.rules.clear();
  CHECK_THROWS_AS(typecheck(no_rules, ctx, pi), TypeError);
}

TEST_CASE("identity functions typecheck and reduce") {
  Spec s = simply_typed_spec();
  Context ctx{{"A", e_sort(1)}, {"y", e_var("A")}};
  ExprP id = e_lam("x", e_var("A"), e_var("x"));
  CHECK(alpha_eq(typecheck(s, ctx, id), e_pi("x", e_var("A"), e_var("A"))));

  auto steps = beta_step(e_app(id, e_var("y")));
  REQUIRE(steps.size() == 1);
  CHECK(alpha_eq(steps[0], e_var("y")));

  // Redexes under binders reduce too.
  ExprP nested = e_pi("z", e_var("A"), e_app(id, e_var("z")));
  CHECK_FALSE(beta_step(nested).empty());

  CHECK(beta_step(e_var("y")).empty());
}

TEST_CASE("conversion checks that exceed the budget fail distinctly") {
  // Conversion in an arbitrary system may have to chase reductions without
  // bound.  A chain of identity applications longer than the budget drives
  // the same path deterministically.
  Spec s = quine_spec();
  ExprP id = e_lam("x", e_sort(1), e_var("x"));
  ExprP chain = e_var("A");
  for (int i = 0; i < 300; ++i) chain = e_app(id, chain);
  Context ctx{{"A", e_sort(1)}, {"h", e_pi("z", chain, e_sort(1))}, {"w", e_var("A")}};
  CHECK_THROWS_AS(typecheck(s, ctx, e_app(e_var("h"), e_var("w")), 200), ConversionBudgetError);
  // The same judgment goes through once the budget accommodates the chain.
  CHECK_NOTHROW(typecheck(s, ctx, e_app(e_var("h"), e_var("w")), 100000));
}

TEST_CASE("the two-sorted instance agrees with the simply typed checker") {
  // Shared corpus: simply typed terms translated into the system with
  // base types as s1-context variables.
  stlc::Context sctx{{"a", stlc::ty_base("A")}, {"b", stlc::ty_base("B")}};
  Context pctx{{"A", e_sort(1)}, {"B", e_sort(1)},
               {"a", e_var("A")}, {"b", e_var("B")}};
  Spec spec = simply_typed_spec();

  std::function<ExprP(const stlc::ExprP&)> tr_ty_expr;
  std::function<ExprP(const stlc::TypeP&)> tr_ty = [&](const stlc::TypeP& t) -> ExprP {
    if (const auto* base = std::get_if<stlc::Type::Base>(&t->v)) return e_var(base->name);
    const auto& a = std::get<stlc::Type::Arrow>(t->v);
    return e_pi("_", tr_ty(a.dom), tr_ty(a.cod));
  };
  std::function<ExprP(const stlc::ExprP&)> tr = [&](const stlc::ExprP& e) -> ExprP {
    if (const auto* v = std::get_if<stlc::Expr::Var>(&e->v)) return e_var(v->name);
    if (const auto* a = std::get_if<stlc::Expr::App>(&e->v)) return e_app(tr(a->fn), tr(a->arg));
    const auto& l = std::get<stlc::Expr::Lam>(e->v);
    return e_lam(l.var, tr_ty(l.type), tr(l.body));
  };

  auto accepted_stlc = [&](const stlc::ExprP& e) {
    try {
      (void)stlc::typecheck(sctx, e);
      return true;
    } catch (const stlc::TypeError&) {
      return false;
    }
  };
  auto accepted_pts = [&](const stlc::ExprP& e) {
    try {
      (void)typecheck(spec, pctx, tr(e));
      return true;
    } catch (const TypeError&) {
      return false;
    }
  };

  std::vector<stlc::ExprP> corpus = {
      stlc::e_var("a"),
      stlc::e_app(stlc::e_lam("x", stlc::ty_base("A"), stlc::e_var("x")), stlc::e_var("a")),
      stlc::e_app(stlc::e_lam("x", stlc::ty_base("A"), stlc::e_var("x")), stlc::e_var("b")),
      stlc::e_lam("x", stlc::ty_base("B"), stlc::e_var("a")),
      stlc::e_app(stlc::e_var("a"), stlc::e_var("b")),
  };
  for (const auto& e : corpus) {
    CAPTURE(stlc::show(e));
    CHECK(accepted_stlc(e) == accepted_pts(e));
  }
}

TEST_CASE("encoded systems carry the axiom and rule atoms") {
  Spec s = quine_spec();
  auto enc = encode::encode_pts(s, {}, e_sort(1));

  // The self-typing axiom is queryable.
  mlang::Builder b;
  mlang::TermPtr t1 = b.tyterm(mlang::t_base("t1"));
  CHECK(enc.space.typing_query(t1, mlang::t_base("t1")));

  // Rule atoms guard both type formers.
  int rule_atoms = 0;
  for (const auto& atom : enc.space.atoms()) {
    if (atom->head.is_key(mlang::Keyword::Colon) && atom->kids.size() == 2 &&
        atom->kids[1]->head.is_key(mlang::Keyword::Trans)) {
      ++rule_atoms;
    }
  }
  CHECK(rule_atoms == 2);
}

TEST_CASE("encoded reduction matches the simply typed path on shared terms") {
  Spec spec = simply_typed_spec();
  Context pctx{{"A", e_sort(1)}, {"a", e_var("A")}};
  stlc::Context sctx{{"a", stlc::ty_base("A")}};

  // (\x:A. x) a under both encoders.
  ExprP pid = e_lam("x", e_var("A"), e_var("x"));
  ExprP pterm = e_app(pid, e_var("a"));
  auto penc = encode::encode_pts(spec, pctx, pterm);
  auto pr = mlang::evaluate(penc.space, 1000);
  CHECK(pr.terminated());
  REQUIRE(pr.normal_forms.size() == 1);
  ExprP pgot = encode::decode_pts_normal(penc, pr.normal_forms[0], 1000);
  CHECK(alpha_eq(pgot, e_var("a")));

  stlc::ExprP sterm = stlc::e_app(stlc::e_lam("x", stlc::ty_base("A"), stlc::e_var("x")),
                                  stlc::e_var("a"));
  auto senc = encode::encode_stlc(sctx, sterm);
  auto sr = mlang::evaluate(senc.space, 1000);
  REQUIRE(sr.normal_forms.size() == 1);
  stlc::ExprP sgot = encode::decode_stlc_normal(senc, sr.normal_forms[0], 1000);
  CHECK(stlc::show(sgot) == "a");
  CHECK(show(pgot) == "a");
}
