#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mettagraph/encode.hpp"
#include "mettagraph/engine.hpp"
#include "mettagraph/stlc.hpp"

using namespace mtg;
using namespace mtg::stlc;

namespace {

const TypeP A = ty_base("A");
const TypeP B = ty_base("B");

ExprP id_a() { return e_lam("x", A, e_var("x")); }

}  // namespace

TEST_CASE("typechecking follows the standard rules") {
  Context ctx;
  CHECK(*typecheck(ctx, id_a()) == *ty_arrow(A, A));

  ctx["a"] = A;
  CHECK(*typecheck(ctx, e_app(id_a(), e_var("a"))) == *A);

  ctx["b"] = B;
  CHECK_THROWS_AS(typecheck(ctx, e_app(id_a(), e_var("b"))), TypeError);
  CHECK_THROWS_AS(typecheck({}, e_var("zzz")), TypeError);
}

TEST_CASE("beta steps cover every redex and avoid capture") {
  ExprP r = e_app(id_a(), e_var("a"));
  auto steps = beta_step(r);
  REQUIRE(steps.size() == 1);
  CHECK(alpha_eq(steps[0], e_var("a")));

  // (\x. \y. x) y  steps to  \y'. y  under renaming.
  ExprP k = e_lam("x", A, e_lam("y", A, e_var("x")));
  ExprP applied = e_app(k, e_var("y"));
  auto capture = beta_step(applied);
  REQUIRE(capture.size() == 1);
  CHECK(alpha_eq(capture[0], e_lam("z", A, e_var("y"))));
  CHECK_FALSE(alpha_eq(capture[0], e_lam("y", A, e_var("y"))));

  CHECK(beta_step(e_var("a")).empty());
}

TEST_CASE("normalization terminates on typed terms") {
  ExprP twice = e_app(id_a(), e_app(id_a(), e_var("a")));
  CHECK(alpha_eq(normalize(twice, 100), e_var("a")));

  // The untyped loop exhausts any finite budget.
  ExprP self = e_lam("x", nullptr, e_app(e_var("x"), e_var("x")));
  ExprP omega = e_app(self, self);
  CHECK_THROWS_AS(normalize(omega, 100), mtg::BudgetError);
}

TEST_CASE("encoding produces one combinator per lambda") {
  Context ctx{{"a", A}};
  auto enc = encode::encode_stlc(ctx, e_app(id_a(), e_var("a")));
  CHECK(enc.table.size() == 1);

  // Nested lambdas lift one combinator each.
  ExprP k = e_lam("x", A, e_lam("y", A, e_var("x")));
  auto enc_k = encode::encode_stlc(ctx, e_app(e_app(k, e_var("a")), e_var("a")));
  CHECK(enc_k.table.size() == 2);

  CHECK_THROWS_AS(encode::encode_stlc({}, e_app(id_a(), e_var("zzz"))), TypeError);
}

TEST_CASE("encoded identity application evaluates to its argument") {
  Context ctx{{"a", A}};
  auto enc = encode::encode_stlc(ctx, e_app(id_a(), e_var("a")));
  auto r = mlang::evaluate(enc.space, 1000);
  CHECK(r.terminated());
  REQUIRE(r.normal_forms.size() == 1);
  ExprP decoded = encode::decode_stlc_normal(enc, r.normal_forms[0], 1000);
  CHECK(alpha_eq(decoded, e_var("a")));
}

TEST_CASE("closed normal forms pass through unchanged") {
  Context ctx{{"a", A}};
  auto enc = encode::encode_stlc(ctx, e_var("a"));
  // No applications, hence no activation markers anywhere.
  bool has_activation = false;
  std::function<void(const mlang::TermPtr&)> scan = [&](const mlang::TermPtr& t) {
    if (t->head.is_key(mlang::Keyword::Activate)) has_activation = true;
    for (const auto& k : t->kids) scan(k);
  };
  for (const auto& atom : enc.space.atoms()) scan(atom);
  CHECK_FALSE(has_activation);

  auto r = mlang::evaluate(enc.space, 100);
  CHECK(r.terminated());
  REQUIRE(r.normal_forms.size() == 1);
  CHECK(alpha_eq(encode::decode_stlc_normal(enc, r.normal_forms[0], 100), e_var("a")));
}

TEST_CASE("two-step reduction through the engine matches the object oracle") {
  // (\f:A->A. \x:A. f (f x)) id a  ==>  a
  Context ctx{{"a", A}};
  ExprP doubler = e_lam("f", ty_arrow(A, A), e_lam("x", A, e_app(e_var("f"), e_app(e_var("f"), e_var("x")))));
  ExprP term = e_app(e_app(doubler, id_a()), e_var("a"));

  ExprP want = normalize(term, 10000);
  auto enc = encode::encode_stlc(ctx, term);
  auto r = mlang::evaluate(enc.space, 10000);
  CHECK(r.terminated());
  REQUIRE(r.normal_forms.size() == 1);
  ExprP got = encode::decode_stlc_normal(enc, r.normal_forms[0], 10000);
  CHECK(alpha_eq(got, want));
}

TEST_CASE("lambdas returned as results decode through the table") {
  // (\x:A->A. x) id  ==>  id
  Context ctx;
  ExprP pick = e_lam("x", ty_arrow(A, A), e_var("x"));
  ExprP term = e_app(pick, id_a());
  auto enc = encode::encode_stlc(ctx, term);
  auto r = mlang::evaluate(enc.space, 1000);
  CHECK(r.terminated());
  REQUIRE(r.normal_forms.size() == 1);
  CHECK(alpha_eq(encode::decode_stlc_normal(enc, r.normal_forms[0], 1000), id_a()));
}

TEST_CASE("untyped encoding runs the K combinator") {
  // (\x. \y. x) a b  ==>  a
  ExprP k = e_lam("x", nullptr, e_lam("y", nullptr, e_var("x")));
  ExprP term = e_app(e_app(k, e_var("a")), e_var("b"));
  auto enc = encode::encode_untyped(term);
  auto r = mlang::evaluate(enc.space, 10000);
  CHECK(r.terminated());
  REQUIRE(r.normal_forms.size() == 1);
  ExprP got = encode::decode_stlc_normal(enc, r.normal_forms[0], 1000);
  CHECK(alpha_eq(got, e_var("a")));
}

TEST_CASE("untyped self-application exhausts the engine budget") {
  ExprP self = e_lam("x", nullptr, e_app(e_var("x"), e_var("x")));
  ExprP omega = e_app(self, self);
  auto enc = encode::encode_untyped(omega);
  auto r = mlang::evaluate(enc.space, 60);
  CHECK_FALSE(r.terminated());
}
