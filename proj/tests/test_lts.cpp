#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "mettagraph/lts.hpp"

using namespace mtg::lts;

namespace {

// Independent oracle: greatest fixpoint by pair removal over the coproduct.
bool brute_force_bisimilar(const System& a, std::size_t s1, const System& b, std::size_t s2) {
  std::size_t n = a.size() + b.size();
  auto step = [&](std::size_t s) -> const std::vector<Transition>& {
    return s < a.size() ? a.steps[s] : b.steps[s - a.size()];
  };
  auto to_index = [&](std::size_t s, std::size_t target) {
    return s < a.size() ? target : target + a.size();
  };
  std::vector<std::vector<bool>> rel(n, std::vector<bool>(n, true));
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) {
        if (!rel[x][y]) continue;
        auto transfer = [&](std::size_t p, std::size_t q, bool flip) {
          for (const auto& t : step(p)) {
            bool ok = false;
            for (const auto& u : step(q)) {
              if (u.action != t.action) continue;
              std::size_t ti = to_index(p, t.to), ui = to_index(q, u.to);
              if (flip ? rel[ui][ti] : rel[ti][ui]) {
                ok = true;
                break;
              }
            }
            if (!ok) return false;
          }
          return true;
        };
        if (!transfer(x, y, false) || !transfer(y, x, true)) {
          rel[x][y] = false;
          changed = true;
        }
      }
    }
  }
  return rel[s1][a.size() + s2];
}

System random_system(std::mt19937& rng, std::size_t max_states) {
  std::size_t n = 1 + rng() % max_states;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("q" + std::to_string(i));
  std::vector<std::tuple<std::size_t, std::string, std::size_t>> edges;
  const char* acts[] = {"a", "b"};
  std::size_t m = rng() % (2 * n + 1);
  for (std::size_t i = 0; i < m; ++i) {
    edges.emplace_back(rng() % n, acts[rng() % 2], rng() % n);
  }
  return make_system(names, edges);
}

}  // namespace

TEST_CASE("reachable explores breadth-first with a budget") {
  Lts<int> loop;
  loop.step = [](const int& s) { return std::vector<Lts<int>::Succ>{{"a", s, std::nullopt}}; };
  loop.key = [](const int& s) { return std::to_string(s); };
  System sys = reachable(loop, {7}, 10);
  CHECK(sys.size() == 1);
  CHECK_FALSE(sys.truncated);

  Lts<int> chain;
  chain.step = [](const int& s) {
    if (s >= 1) return std::vector<Lts<int>::Succ>{};
    return std::vector<Lts<int>::Succ>{{"a", s + 1, std::nullopt}};
  };
  chain.key = loop.key;
  System cut = reachable(chain, {0}, 1);
  CHECK(cut.truncated);
}

TEST_CASE("identical systems are bisimilar with the pair in the relation") {
  System sys = make_system({"s0", "s1"}, {{0, "a", 1}});
  auto v = bisim_check(sys, 0, sys, 0);
  CHECK(v.bisimilar());
  bool has_start = false;
  for (auto [i, j] : v.relation) has_start = has_start || (i == 0 && j == 0);
  CHECK(has_start);
  CHECK(verify_transfer(sys, sys, v.relation));
}

TEST_CASE("branching choice is distinguished with a depth-2 witness") {
  // a.(b+c) versus a.b + a.c
  System left = make_system({"p0", "p1", "p2", "p3"},
                            {{0, "a", 1}, {1, "b", 2}, {1, "c", 3}});
  System right = make_system({"q0", "q1", "q2", "q3", "q4"},
                             {{0, "a", 1}, {0, "a", 2}, {1, "b", 3}, {2, "c", 4}});
  auto v = bisim_check(left, 0, right, 0);
  CHECK(v.kind == BisimVerdict::Kind::Distinguished);
  REQUIRE(v.witness.size() == 2);
  CHECK(v.witness[0] == "a");
  CHECK((v.witness[1] == "b" || v.witness[1] == "c"));
}

TEST_CASE("a two-state cycle collapses onto its one-state quotient") {
  System cycle = make_system({"c0", "c1"}, {{0, "a", 1}, {1, "a", 0}});
  System point = make_system({"p"}, {{0, "a", 0}});
  auto v = bisim_check(cycle, 0, point, 0);
  CHECK(v.bisimilar());
  CHECK(verify_transfer(cycle, point, v.relation));
}

TEST_CASE("truncated exploration is inconclusive") {
  System sys = make_system({"s"}, {});
  System cut = sys;
  cut.truncated = true;
  auto v = bisim_check(sys, 0, cut, 0);
  CHECK(v.kind == BisimVerdict::Kind::Inconclusive);
}

TEST_CASE("probabilistic: matching unit steps are bisimilar") {
  System a = make_weighted_system({"x", "v"}, {{0, "u", 1, 1.0}});
  System b = make_weighted_system({"y", "w"}, {{0, "u", 1, 1.0}});
  auto v = prob_bisim_check(a, 0, b, 0);
  CHECK(v.bisimilar());
}

TEST_CASE("probabilistic: block aggregation merges equivalent targets") {
  // Half/half split into two states that are themselves bisimilar versus a
  // single weight-one step.
  System split = make_weighted_system(
      {"x", "y1", "y2", "z"},
      {{0, "a", 1, 0.5}, {0, "a", 2, 0.5}, {1, "b", 3, 1.0}, {2, "b", 3, 1.0}});
  System direct = make_weighted_system({"x'", "y'", "z'"}, {{0, "a", 1, 1.0}, {1, "b", 2, 1.0}});
  auto v = prob_bisim_check(split, 0, direct, 0, 1e-9);
  CHECK(v.bisimilar());
}

TEST_CASE("probabilistic: diverging masses are distinguished") {
  // Targets are distinguishable (one loops on b, the other on c).
  System a = make_weighted_system({"x", "p", "q"},
                                  {{0, "a", 1, 0.3}, {0, "a", 2, 0.7}, {1, "b", 1, 1.0}, {2, "c", 2, 1.0}});
  System b = make_weighted_system({"y", "p", "q"},
                                  {{0, "a", 1, 0.5}, {0, "a", 2, 0.5}, {1, "b", 1, 1.0}, {2, "c", 2, 1.0}});
  auto v = prob_bisim_check(a, 0, b, 0, 1e-9);
  CHECK(v.kind == BisimVerdict::Kind::Distinguished);
  CHECK_FALSE(v.witness.empty());
}

TEST_CASE("probabilistic: non-normalized weights are rejected") {
  System bad = make_weighted_system({"x", "y"}, {{0, "a", 1, 0.4}});
  CHECK_THROWS_AS(prob_bisim_check(bad, 0, bad, 0), mtg::Error);
}

TEST_CASE("probabilistic checking reduces to plain checking on unit weights") {
  std::mt19937 rng(11);
  for (int i = 0; i < 100; ++i) {
    System a = random_system(rng, 4);
    System b = random_system(rng, 4);
    // Deterministic single successors with weight one.
    auto determinize = [](System s) {
      for (auto& ts : s.steps) {
        std::map<std::string, bool> seen;
        std::vector<Transition> kept;
        for (auto& t : ts) {
          if (!seen[t.action]) {
            seen[t.action] = true;
            t.weight = 1.0;
            kept.push_back(t);
          }
        }
        ts = kept;
      }
      return s;
    };
    System da = determinize(a), db = determinize(b);
    CHECK(prob_bisim_check(da, 0, db, 0).bisimilar() == bisim_check(da, 0, db, 0).bisimilar());
  }
}

TEST_CASE("extract_maps pairs states and rejects partial relations") {
  std::vector<std::pair<std::size_t, std::size_t>> identity{{0, 0}, {1, 1}};
  auto [g1, g2] = extract_maps(identity, 2, 2);
  CHECK(g1.at(0) == 0);
  CHECK(g2.at(1) == 1);

  std::vector<std::pair<std::size_t, std::size_t>> partial{{0, 0}};
  CHECK_THROWS_AS(extract_maps(partial, 2, 1), mtg::Error);
}

TEST_CASE("checker agrees with the brute-force greatest fixpoint") {
  std::mt19937 rng(20260810);
  int bisimilar_count = 0;
  for (int i = 0; i < 300; ++i) {
    System a = random_system(rng, 6);
    System b = random_system(rng, 6);
    bool got = bisim_check(a, 0, b, 0).bisimilar();
    bool want = brute_force_bisimilar(a, 0, b, 0);
    CAPTURE(i);
    CHECK(got == want);
    if (got) ++bisimilar_count;
  }
  CHECK(bisimilar_count > 0);  // the corpus exercises both verdicts
}

TEST_CASE("bisimilar relations are post-fixpoints of the transfer conditions") {
  std::mt19937 rng(77);
  for (int i = 0; i < 100; ++i) {
    System a = random_system(rng, 5);
    System b = random_system(rng, 5);
    auto v = bisim_check(a, 0, b, 0);
    if (v.bisimilar()) {
      CHECK(verify_transfer(a, b, v.relation));
    }
  }
}

TEST_CASE("json and dot round trips") {
  System sys = make_weighted_system({"s0", "s1"}, {{0, "u", 1, 0.25}, {0, "u", 0, 0.75}});
  std::string js = system_to_json(sys);
  System back = system_from_json(js);
  REQUIRE(back.size() == 2);
  CHECK(back.steps[0].size() == 2);
  CHECK(back.steps[0][0].weight.has_value());

  std::string dot = system_to_dot(sys, "sys");
  CHECK(dot.find("digraph") != std::string::npos);
  CHECK(dot.find("s1") != std::string::npos);
}
