#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mettagraph/atomspace.hpp"

using namespace mtg::mlang;

namespace {

std::uint64_t gid = 100;

TermPtr sym(const std::string& n, TypeExpr t) { return mk_leaf(l_sym(n), std::move(t), gid++); }
TermPtr tvar(const std::string& n) { return mk_leaf(l_var(n), t_toptype(), gid++); }
TermPtr tyleaf(TypeExpr t) { return mk_leaf(l_ty(std::move(t)), t_type(), gid++); }

TermPtr typing(TermPtr subject, TermPtr type_term) {
  return mk_term(l_key(Keyword::Colon), t_judg(), gid++, {std::move(subject), std::move(type_term)});
}

TermPtr leq_atom(TypeExpr a, TypeExpr b) {
  return mk_term(l_key(Keyword::Leq), t_judg(), gid++, {tyleaf(std::move(a)), tyleaf(std::move(b))});
}

TermPtr funapp(TermPtr f, TermPtr a, TypeExpr result) {
  return mk_term(l_key(Keyword::FunApp), std::move(result), gid++, {std::move(f), std::move(a)});
}

TermPtr arrow_term(TypeExpr dom, TypeExpr cod) {
  return mk_term(l_key(Keyword::Arrow), t_type(), gid++,
                 {tyleaf(std::move(dom)), tyleaf(std::move(cod))});
}

const TypeExpr A = t_base("A");
const TypeExpr B = t_base("B");
const TypeExpr C = t_base("C");

}  // namespace

TEST_CASE("terms render to graphs and back") {
  TermPtr atom = typing(sym("f", t_toptype()), arrow_term(A, B));
  MGraph g = term_to_graph(atom);
  TermPtr back = graph_to_term(g);
  CHECK(term_iso(atom, back));
  CHECK(back->head.is_key(Keyword::Colon));
  CHECK(term_show(atom) == "(: f (-> A B))");

  // Wiring constraints of the rendering hold under the subtype order.
  SubtypeRelation rel;
  auto order = [&](const TypeExpr& x, const TypeExpr& y) { return subtype_query(rel, x, y); };
  CHECK(g.check_constraints(order).empty());
}

TEST_CASE("add_atom stores typing atoms and grows the relation") {
  Atomspace space;
  space = space.add_atom(term_to_graph(typing(sym("f", t_toptype()), arrow_term(A, B))));
  CHECK(space.atoms().size() == 1);
  CHECK(space.check_mconstraints().empty());

  CHECK_FALSE(space.subtype_query(t_base("t1"), t_base("t2")));
  space = space.add_term(leq_atom(t_base("t1"), t_base("t2")));
  CHECK(space.subtype_query(t_base("t1"), t_base("t2")));
}

TEST_CASE("the evaluation pointer is unique") {
  Atomspace space;
  TermPtr e = funapp(sym("f", t_arrow(A, A)), sym("a", A), A);
  TermPtr activated = mk_term(l_key(Keyword::Activate), t_exec(), gid++, {e});
  TermPtr pointed = mk_term(l_key(Keyword::Pointer), t_exec(), gid++, {activated});
  space = space.add_term(pointed);
  REQUIRE(space.pointer().has_value());
  CHECK(space.pointer()->path == Path{0});
  CHECK(space.pointed()->head.is_key(Keyword::FunApp));

  TermPtr second = mk_term(l_key(Keyword::Pointer), t_exec(), gid++, {sym("a", A)});
  CHECK_THROWS_AS(space.add_term(second), mtg::Error);
}

TEST_CASE("shape checking accepts legal applications and flags bad codomains") {
  SubtypeRelation rel;

  // funapp tagged B with function of codomain B' <= B is legal.
  Atomspace space;
  space = space.add_term(leq_atom(t_base("B'"), B));
  TermPtr good = funapp(sym("f", t_arrow(A, t_base("B'"))), sym("a", A), B);
  space = space.add_term(good);
  CHECK(space.check_mconstraints().empty());

  // Without the subtype declaration the same atom is a violation.
  Atomspace bare;
  CHECK_THROWS_AS(bare.add_term(good), mtg::Error);

  CHECK(Atomspace().check_mconstraints().empty());
}

TEST_CASE("argument subsumption is honored by the shape checker") {
  Atomspace space;
  space = space.add_term(leq_atom(A, t_union(A, B)));
  // f : (A|B) -> C applied to a : A.
  TermPtr app = funapp(sym("f", t_arrow(t_union(A, B), C)), sym("a", A), C);
  CHECK_NOTHROW(space.add_term(app));

  // f : C -> C applied to a : A is flagged.
  TermPtr bad = funapp(sym("f", t_arrow(C, C)), sym("a", A), C);
  CHECK_THROWS_AS(space.add_term(bad), mtg::Error);
}

TEST_CASE("subtype queries follow the structural rules") {
  SubtypeRelation rel;
  CHECK(subtype_query(rel, A, t_union(A, B)));
  CHECK(subtype_query(rel, t_inter(A, B), A));
  CHECK(subtype_query(rel, t_inter(A, B), t_top()));
  CHECK(subtype_query(rel, A, t_toptype()));
  CHECK_FALSE(subtype_query(rel, A, B));

  rel.declare(A, B);
  rel.declare(B, C);
  CHECK(rel.declared_leq(A, C));
  CHECK(subtype_query(rel, A, C));

  // Re-closing a closed relation is the identity.
  std::size_t before = rel.closure_size();
  rel.declare(A, B);
  CHECK(rel.closure_size() == before);

  // Function types: contravariant domain, covariant codomain.
  CHECK(subtype_query(rel, t_arrow(C, A), t_arrow(A, C)));
  CHECK_FALSE(subtype_query(rel, t_arrow(A, C), t_arrow(C, A)));
}

TEST_CASE("pi types are contravariant in the domain") {
  SubtypeRelation rel;
  rel.declare(A, B);
  std::uint64_t id = 1;
  GraphRef body = graph_ref(term_to_graph(type_to_term(C, id)));
  CHECK(subtype_query(rel, t_pi("x", B, body), t_pi("x", A, body)));
  CHECK_FALSE(subtype_query(rel, t_pi("x", A, body), t_pi("x", B, body)));
}

TEST_CASE("typing queries combine atoms with the subtype closure") {
  Atomspace space;
  TermPtr v1 = sym("v1", t_toptype());
  space = space.add_term(typing(v1, tyleaf(A)));
  CHECK(space.typing_query(v1, A));
  CHECK(space.typing_query(v1, t_union(A, B)));
  CHECK_FALSE(space.typing_query(sym("v2", t_toptype()), A));

  // Tag route: a node whose own tag sits below the queried type.
  CHECK(space.typing_query(sym("w", A), t_union(A, C)));
}

TEST_CASE("typing is monotone in the subtype relation") {
  Atomspace space;
  TermPtr v1 = sym("v1", t_toptype());
  space = space.add_term(typing(v1, tyleaf(A)));
  CHECK_FALSE(space.typing_query(v1, C));
  space = space.add_term(leq_atom(A, C));
  CHECK(space.typing_query(v1, C));
}

TEST_CASE("tuple prelude installs constructors and projections") {
  Atomspace space = Atomspace().with_prelude_tuples();
  CHECK(space.check_mconstraints().empty());
  bool has_tuple_typing = false;
  bool has_pi1_equation = false;
  for (const auto& a : space.atoms()) {
    if (a->head.is_key(Keyword::Colon) && a->kids[0]->head == l_sym("tuple")) {
      auto ty = term_as_type(a->kids[1]);
      has_tuple_typing = ty && ty->is<TypeExpr::Pi>();
    }
    if (a->head.is_key(Keyword::Equals) && !a->kids.empty() &&
        a->kids[0]->head.is_key(Keyword::FunApp) &&
        a->kids[0]->kids[0]->head == l_sym("pi1")) {
      has_pi1_equation = true;
    }
  }
  CHECK(has_tuple_typing);
  CHECK(has_pi1_equation);
}

TEST_CASE("fresh symbols avoid names used in the space") {
  Atomspace empty;
  CHECK(empty.fresh_symbol() == "s1");

  Atomspace used;
  used = used.add_term(typing(sym("s1", t_toptype()), tyleaf(A)));
  used = used.add_term(typing(sym("s2", t_toptype()), tyleaf(A)));
  used = used.add_term(typing(sym("s3", t_toptype()), tyleaf(A)));
  CHECK(used.fresh_symbol() == "s4");

  Atomspace two;
  std::string a = two.fresh_symbol();
  std::string b = two.fresh_symbol();
  CHECK(a != b);
}

TEST_CASE("canonical keys ignore edge ids") {
  auto build = [](std::uint64_t base) {
    gid = base;
    Atomspace s;
    return s.add_term(typing(sym("f", t_toptype()), arrow_term(A, B)));
  };
  CHECK(build(10).canonical_key() == build(5000).canonical_key());
}

TEST_CASE("state graphs carry the pointer as a marker") {
  Atomspace space;
  TermPtr e = funapp(sym("f", t_arrow(A, A)), sym("a", A), A);
  TermPtr activated = mk_term(l_key(Keyword::Activate), t_exec(), gid++, {e});
  space = space.add_term(mk_term(l_key(Keyword::Pointer), t_exec(), gid++, {activated}));
  MGraph g = space.to_graph();
  std::string s = g.to_sexpr([](const TypeExpr& t) { return t.show(); },
                             [](const MLabel& l) { return l.base.show(); });
  CHECK(s.find("!") != std::string::npos);
  CHECK(s.find("@") != std::string::npos);
}
