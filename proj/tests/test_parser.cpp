#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "mettagraph/parser.hpp"
#include "mettagraph/runner.hpp"

using namespace mtg;
using namespace mtg::frontend;

TEST_CASE("atom files parse into judgment terms") {
  auto atoms = parse_atoms("(: f (-> A B))\n(= (f $x) $x)\n(<= t1 t2) ; comment\n");
  REQUIRE(atoms.ok());
  REQUIRE((*atoms).size() == 3);
  CHECK((*atoms)[0]->head.is_key(mlang::Keyword::Colon));
  CHECK((*atoms)[1]->head.is_key(mlang::Keyword::Equals));
  CHECK((*atoms)[2]->head.is_key(mlang::Keyword::Leq));

  // The equation binds one variable on each side.
  auto vars = mlang::term_vars((*atoms)[1]);
  REQUIRE(vars.size() == 1);
  CHECK(vars[0] == "x");
}

TEST_CASE("unterminated atoms report the position and expectation") {
  auto bad = parse_atoms("(: f");
  REQUIRE_FALSE(bad.ok());
  CHECK(bad.error->span.line == 1);
  REQUIRE_FALSE(bad.error->expected.empty());
  CHECK(bad.error->expected[0] == ")");
  CHECK(bad.error->to_string().find("1:") != std::string::npos);
}

TEST_CASE("print and parse agree on the golden corpus") {
  const char* corpus[] = {
      "(: f (-> A B))",
      "(: v1 A)",
      "(= (f $x) $x)",
      "(= (f $x $y) (g $y))",
      "(<= t1 t2)",
      "(@ (f a))",
      "(! (@ (f a)))",
      "(trans (: $x A) $x)",
      "(Eq A a b)",
  };
  for (const char* src : corpus) {
    CAPTURE(src);
    auto first = parse_atoms(src);
    REQUIRE(first.ok());
    std::string printed = print_atom((*first)[0]);
    auto second = parse_atoms(printed);
    REQUIRE(second.ok());
    CHECK(mlang::term_iso((*first)[0], (*second)[0]));
    // Printing is a fixpoint.
    CHECK(print_atom((*second)[0]) == printed);
  }
}

TEST_CASE("object expressions parse across the languages") {
  auto typed = parse_stlc("(\\x:A. x) a");
  REQUIRE(typed.ok());
  CHECK(stlc::show(*typed) == "((\\x:A. x) a)");

  auto untyped = parse_stlc("(\\x. x x) (\\x. x x)");
  REQUIRE(untyped.ok());

  auto prob = parse_pdts("sample(thunk(random[0.3](v1, v2)))");
  REQUIRE(prob.ok());
  CHECK(pdts::show(*prob) == "sample(thunk(random[0.3](v1, v2)))");

  auto dep = parse_pts_expr("\\A:s1. \\x:A. x");
  REQUIRE(dep.ok());
  CHECK(pts::show(*dep) == "(\\A:s1. (\\x:A. x))");

  auto pi = parse_pts_expr("Pi x:s1. s1");
  REQUIRE(pi.ok());

  auto arrow_ty = parse_pdts("\\x:(A | B). x");
  REQUIRE(arrow_ty.ok());

  auto bad = parse_pdts("random[1.5](a, b)");
  CHECK_FALSE(bad.ok());

  auto trailing = parse_stlc("a b)");
  CHECK_FALSE(trailing.ok());
}

TEST_CASE("language detection") {
  CHECK(detect_language("(\\x:A. x) a", false) == Lang::Stlc);
  CHECK(detect_language("(\\x. x) a", false) == Lang::Untyped);
  CHECK(detect_language("sample(thunk(v1))", false) == Lang::Pdts);
  CHECK(detect_language("\\x:A. x", true) == Lang::Pts);
}

TEST_CASE("spec files list sorts, axioms, and rules") {
  auto spec = parse_pts_spec("sorts 2\naxiom (s1 : s2)\nrule (s1, s1, s1)\n; comment\n");
  REQUIRE(spec.ok());
  CHECK((*spec).sorts == 2);
  CHECK((*spec).axioms.count({1, 2}) == 1);
  CHECK((*spec).rules.count({1, 1, 1}) == 1);

  CHECK_FALSE(parse_pts_spec("axiom (s1 s2)").ok());
  CHECK_FALSE(parse_pts_spec("bogus line").ok());
}

TEST_CASE("fuzzing never crashes the parsers") {
  std::mt19937 rng(20260810);
  const std::string alphabet = "()[]\\.:,|&->$abcxyz123 \n;\"";
  for (int i = 0; i < 3000; ++i) {
    std::string input;
    std::size_t len = rng() % 40;
    for (std::size_t k = 0; k < len; ++k) input += alphabet[rng() % alphabet.size()];
    // Every input either parses or yields a positioned error.
    auto a = parse_atoms(input);
    if (!a.ok()) CHECK(a.error->span.line >= 1);
    auto e = parse_pdts(input);
    if (!e.ok()) CHECK(e.error->span.line >= 1);
    auto s = parse_stlc(input);
    if (!s.ok()) CHECK(s.error->span.line >= 1);
  }
}

TEST_CASE("the runner dispatches and reports") {
  RunConfig cfg;
  cfg.mode = Mode::FullEval;
  Report r = run(cfg, "sample(thunk(random[0.3](v1, v2)))");
  CHECK(r.exit_code == 0);
  CHECK(r.text.find("v1: 0.3") != std::string::npos);
  CHECK(r.text.find("v2: 0.7") != std::string::npos);

  cfg.mode = Mode::Demo;
  cfg.demo = "minisys";
  Report d = run(cfg, "");
  CHECK(d.exit_code == 0);
  CHECK(d.text.find("Bisimilar") != std::string::npos);

  cfg.mode = Mode::Eval;
  cfg.demo.clear();
  cfg.context = "(: a A)";
  Report ev = run(cfg, "(\\x:A. x) a");
  CHECK(ev.exit_code == 0);
  CHECK(ev.text.find("a") != std::string::npos);

  // A normal form echoes itself with no rewrites.
  Report echo = run(cfg, "a");
  CHECK(echo.exit_code == 0);
  CHECK(echo.text.rfind("a\n", 0) == 0);

  cfg.mode = Mode::Typecheck;
  Report tc = run(cfg, "(\\x:A. x) a");
  CHECK(tc.exit_code == 0);
  CHECK(tc.text.find("A") != std::string::npos);

  Report bad = run(cfg, "(\\x:A. x) (\\y:A. y)");
  CHECK(bad.exit_code == 1);

  cfg.mode = Mode::Sample;
  cfg.seed = 7;
  Report sm = run(cfg, "sample(thunk(v1))");
  CHECK(sm.exit_code == 0);
  CHECK(sm.text == "v1\n");
}

TEST_CASE("the runner surfaces parse errors with exit code 1") {
  RunConfig cfg;
  cfg.mode = Mode::Eval;
  Report r = run(cfg, "(\\x:A. x");
  CHECK(r.exit_code == 1);
  CHECK(r.text.find("error") != std::string::npos);
  CHECK(r.json.find("\"status\"") != std::string::npos);
}

TEST_CASE("bisim mode consumes imported systems") {
  RunConfig cfg;
  cfg.mode = Mode::Bisim;
  cfg.lts_a = R"({"states":["x"],"transitions":[{"from":"x","action":"a","to":"x"}]})";
  cfg.lts_b = R"({"states":["y","z"],"transitions":[
      {"from":"y","action":"a","to":"z"},{"from":"z","action":"a","to":"y"}]})";
  Report r = run(cfg, "");
  CHECK(r.exit_code == 0);
  CHECK(r.text.find("Bisimilar") != std::string::npos);

  cfg.lts_b = R"({"states":["y"],"transitions":[{"from":"y","action":"b","to":"y"}]})";
  Report d = run(cfg, "");
  CHECK(d.exit_code == 1);
  CHECK(d.text.find("Distinguished") != std::string::npos);
}

TEST_CASE("eval trace lines are one json object per step") {
  RunConfig cfg;
  cfg.mode = Mode::Eval;
  cfg.trace = true;
  cfg.context = "(: a A)";
  Report r = run(cfg, "(\\x:A. x) a");
  CHECK(r.exit_code == 0);
  REQUIRE_FALSE(r.artifacts.empty());
  CHECK(r.artifacts[0].name == "trace.jsonl");
  CHECK(r.artifacts[0].data.find("\"rule\"") != std::string::npos);
  CHECK(r.artifacts[0].data.find("funapp") != std::string::npos);
}
