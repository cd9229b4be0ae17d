/*
 * Copyright 2026 the mettagraph authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "mettagraph/lts.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

namespace mtg::lts {

std::set<std::string> System::actions() const {
  std::set<std::string> out;
  for (const auto& ts : steps) {
    for (const auto& t : ts) out.insert(t.action);
  }
  return out;
}

namespace {

/// Coproduct of two systems: left states first, right states shifted.
System coproduct(const System& a, const System& b) {
  System out;
  out.truncated = a.truncated || b.truncated;
  out.keys.reserve(a.size() + b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    out.keys.push_back("L:" + a.keys[i]);
    out.names.push_back(a.names[i]);
    out.steps.push_back(a.steps[i]);
  }
  for (std::size_t i = 0; i < b.size(); ++i) {
    out.keys.push_back("R:" + b.keys[i]);
    out.names.push_back(b.names[i]);
    auto ts = b.steps[i];
    for (auto& t : ts) t.to += a.size();
    out.steps.push_back(std::move(ts));
  }
  return out;
}

/// Rounds of partition refinement; round k distinguishes behaviors up to
/// depth k.  The block count never decreases, so at most n rounds run.
std::vector<std::vector<std::size_t>> refine(const System& sys) {
  std::size_t n = sys.size();
  std::vector<std::vector<std::size_t>> rounds;
  rounds.emplace_back(n, 0);
  while (true) {
    const auto& prev = rounds.back();
    std::map<std::string, std::size_t> groups;
    std::vector<std::size_t> next(n, 0);
    for (std::size_t s = 0; s < n; ++s) {
      std::set<std::pair<std::string, std::size_t>> sig;
      for (const auto& t : sys.steps[s]) sig.emplace(t.action, prev[t.to]);
      std::ostringstream os;
      os << prev[s] << "#";
      for (const auto& [act, blk] : sig) os << act << ":" << blk << ";";
      auto [it, fresh] = groups.emplace(os.str(), groups.size());
      next[s] = it->second;
    }
    bool stable = true;
    std::size_t prev_count = *std::max_element(prev.begin(), prev.end()) + 1;
    std::size_t next_count = groups.size();
    if (next_count != prev_count) {
      stable = false;
    } else {
      for (std::size_t s = 0; s < n && stable; ++s) {
        for (std::size_t t = s + 1; t < n; ++t) {
          if ((prev[s] == prev[t]) != (next[s] == next[t])) {
            stable = false;
            break;
          }
        }
      }
    }
    rounds.push_back(std::move(next));
    if (stable) break;
  }
  return rounds;
}

std::size_t first_separating_round(const std::vector<std::vector<std::size_t>>& rounds,
                                   std::size_t x, std::size_t y) {
  for (std::size_t r = 0; r < rounds.size(); ++r) {
    if (rounds[r][x] != rounds[r][y]) return r;
  }
  return rounds.size();
}

/// Minimal-depth separating trace; ties broken by action order.
void build_witness(const System& sys, const std::vector<std::vector<std::size_t>>& rounds,
                   std::size_t x, std::size_t y, std::vector<std::string>& out) {
  std::size_t r = first_separating_round(rounds, x, y);
  if (r == 0 || r >= rounds.size()) return;
  const auto& prev = rounds[r - 1];

  // Collect the (action, block) pairs reachable from each side.
  auto profile = [&](std::size_t s) {
    std::set<std::pair<std::string, std::size_t>> sig;
    for (const auto& t : sys.steps[s]) sig.emplace(t.action, prev[t.to]);
    return sig;
  };
  auto px = profile(x);
  auto py = profile(y);

  // A pair present on one side only, preferring the x side.
  const System* side = &sys;
  std::size_t from = x, other = y;
  std::optional<std::pair<std::string, std::size_t>> gap;
  for (const auto& p : px) {
    if (!py.count(p)) {
      gap = p;
      break;
    }
  }
  if (!gap) {
    for (const auto& p : py) {
      if (!px.count(p)) {
        gap = p;
        from = y;
        other = x;
        break;
      }
    }
  }
  if (!gap) return;  // profiles equal: separation came from the prefix blocks

  out.push_back(gap->first);
  // Successor on the `from` side witnessing the gap.
  std::size_t xs = from;
  for (const auto& t : side->steps[from]) {
    if (t.action == gap->first && prev[t.to] == gap->second) {
      xs = t.to;
      break;
    }
  }
  // Any matching-action successor on the other side; if none, the single
  // action is already separating.
  std::optional<std::size_t> ys;
  for (const auto& t : side->steps[other]) {
    if (t.action == gap->first) {
      ys = t.to;
      break;
    }
  }
  if (!ys) return;
  build_witness(sys, rounds, xs, *ys, out);
}

}  // namespace

BisimVerdict bisim_check(const System& a, std::size_t s1, const System& b, std::size_t s2) {
  BisimVerdict v;
  if (a.truncated || b.truncated) {
    v.kind = BisimVerdict::Kind::Inconclusive;
    v.reason = "state space truncated by the exploration budget";
    return v;
  }
  System co = coproduct(a, b);
  auto rounds = refine(co);
  const auto& final_blocks = rounds.back();
  if (final_blocks[s1] == final_blocks[a.size() + s2]) {
    v.kind = BisimVerdict::Kind::Bisimilar;
    for (std::size_t i = 0; i < a.size(); ++i) {
      for (std::size_t j = 0; j < b.size(); ++j) {
        if (final_blocks[i] == final_blocks[a.size() + j]) v.relation.emplace_back(i, j);
      }
    }
  } else {
    v.kind = BisimVerdict::Kind::Distinguished;
    build_witness(co, rounds, s1, a.size() + s2, v.witness);
  }
  return v;
}

BisimVerdict bisim_check_total(const System& a, const System& b) {
  BisimVerdict v;
  if (a.truncated || b.truncated) {
    v.kind = BisimVerdict::Kind::Inconclusive;
    v.reason = "state space truncated by the exploration budget";
    return v;
  }
  System co = coproduct(a, b);
  auto rounds = refine(co);
  const auto& blocks = rounds.back();
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (blocks[i] == blocks[a.size() + j]) v.relation.emplace_back(i, j);
    }
  }
  // Totality on both sides.
  std::vector<bool> left(a.size(), false), right(b.size(), false);
  for (const auto& [i, j] : v.relation) {
    left[i] = true;
    right[j] = true;
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!left[i]) {
      v.kind = BisimVerdict::Kind::Distinguished;
      std::size_t nearest = 0;
      build_witness(co, rounds, i, a.size() + nearest, v.witness);
      v.reason = "unmatched state: " + a.names[i];
      return v;
    }
  }
  for (std::size_t j = 0; j < b.size(); ++j) {
    if (!right[j]) {
      v.kind = BisimVerdict::Kind::Distinguished;
      build_witness(co, rounds, 0, a.size() + j, v.witness);
      v.reason = "unmatched state: " + b.names[j];
      return v;
    }
  }
  v.kind = BisimVerdict::Kind::Bisimilar;
  return v;
}

BisimVerdict bisim_check_pairs(const System& a, const System& b,
                               const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
  BisimVerdict v;
  if (a.truncated || b.truncated) {
    v.kind = BisimVerdict::Kind::Inconclusive;
    v.reason = "state space truncated by the exploration budget";
    return v;
  }
  System co = coproduct(a, b);
  auto rounds = refine(co);
  const auto& blocks = rounds.back();
  for (const auto& [i, j] : pairs) {
    if (blocks[i] != blocks[a.size() + j]) {
      v.kind = BisimVerdict::Kind::Distinguished;
      v.reason = "pair (" + a.names[i] + ", " + b.names[j] + ") separated";
      build_witness(co, rounds, i, a.size() + j, v.witness);
      return v;
    }
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (blocks[i] == blocks[a.size() + j]) v.relation.emplace_back(i, j);
    }
  }
  std::vector<bool> left(a.size(), false), right(b.size(), false);
  for (const auto& [i, j] : v.relation) {
    left[i] = true;
    right[j] = true;
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!left[i]) {
      v.kind = BisimVerdict::Kind::Distinguished;
      v.reason = "unmatched state: " + a.names[i];
      return v;
    }
  }
  for (std::size_t j = 0; j < b.size(); ++j) {
    if (!right[j]) {
      v.kind = BisimVerdict::Kind::Distinguished;
      v.reason = "unmatched state: " + b.names[j];
      return v;
    }
  }
  v.kind = BisimVerdict::Kind::Bisimilar;
  return v;
}

namespace {

void validate_weights(const System& sys, double tol) {
  for (std::size_t s = 0; s < sys.size(); ++s) {
    std::map<std::string, double> mass;
    std::map<std::string, bool> weighted;
    for (const auto& t : sys.steps[s]) {
      mass[t.action] += t.weight.value_or(1.0);
      weighted[t.action] = weighted[t.action] || t.weight.has_value();
    }
    for (const auto& [act, m] : mass) {
      if (weighted[act] && std::abs(m - 1.0) > tol) {
        throw Error("non-normalized weights on action '" + act + "'");
      }
    }
  }
}

}  // namespace

BisimVerdict prob_bisim_check(const System& a, std::size_t s1, const System& b, std::size_t s2,
                              double tol) {
  BisimVerdict v;
  if (a.truncated || b.truncated) {
    v.kind = BisimVerdict::Kind::Inconclusive;
    v.reason = "state space truncated by the exploration budget";
    return v;
  }
  validate_weights(a, tol);
  validate_weights(b, tol);
  System co = coproduct(a, b);
  std::size_t n = co.size();

  std::vector<std::size_t> blocks(n, 0);
  while (true) {
    // Signature: per action and target block, the cumulative weight.
    using Sig = std::map<std::pair<std::string, std::size_t>, double>;
    std::vector<Sig> sigs(n);
    for (std::size_t s = 0; s < n; ++s) {
      for (const auto& t : co.steps[s]) {
        sigs[s][{t.action, blocks[t.to]}] += t.weight.value_or(1.0);
      }
    }
    auto same = [&](std::size_t x, std::size_t y) {
      if (blocks[x] != blocks[y]) return false;
      if (sigs[x].size() != sigs[y].size()) return false;
      for (const auto& [k, w] : sigs[x]) {
        auto it = sigs[y].find(k);
        if (it == sigs[y].end() || std::abs(it->second - w) > tol) return false;
      }
      return true;
    };
    // Greedy grouping by tolerant signature equality.
    std::vector<std::size_t> next(n, 0);
    std::vector<std::size_t> reps;
    for (std::size_t s = 0; s < n; ++s) {
      bool placed = false;
      for (std::size_t g = 0; g < reps.size(); ++g) {
        if (same(reps[g], s)) {
          next[s] = g;
          placed = true;
          break;
        }
      }
      if (!placed) {
        next[s] = reps.size();
        reps.push_back(s);
      }
    }
    bool stable = true;
    for (std::size_t x = 0; x < n && stable; ++x) {
      for (std::size_t y = x + 1; y < n; ++y) {
        if ((blocks[x] == blocks[y]) != (next[x] == next[y])) {
          stable = false;
          break;
        }
      }
    }
    blocks = std::move(next);
    if (stable) break;
  }

  if (blocks[s1] == blocks[a.size() + s2]) {
    v.kind = BisimVerdict::Kind::Bisimilar;
    for (std::size_t i = 0; i < a.size(); ++i) {
      for (std::size_t j = 0; j < b.size(); ++j) {
        if (blocks[i] == blocks[a.size() + j]) v.relation.emplace_back(i, j);
      }
    }
  } else {
    v.kind = BisimVerdict::Kind::Distinguished;
    // First action whose per-block mass diverges.
    std::map<std::pair<std::string, std::size_t>, double> mx, my;
    for (const auto& t : a.steps[s1]) mx[{t.action, blocks[t.to]}] += t.weight.value_or(1.0);
    for (const auto& t : b.steps[s2]) my[{t.action, blocks[a.size() + t.to]}] += t.weight.value_or(1.0);
    for (const auto& [k, w] : mx) {
      auto it = my.find(k);
      if (it == my.end() || std::abs(it->second - w) > tol) {
        v.witness.push_back(k.first);
        break;
      }
    }
    if (v.witness.empty() && !my.empty()) v.witness.push_back(my.begin()->first.first);
  }
  return v;
}

std::pair<std::map<std::size_t, std::size_t>, std::map<std::size_t, std::size_t>> extract_maps(
    const std::vector<std::pair<std::size_t, std::size_t>>& relation, std::size_t left_count,
    std::size_t right_count) {
  std::map<std::size_t, std::size_t> g1, g2;
  for (const auto& [i, j] : relation) {
    g1.emplace(i, j);  // first partner in index order wins
    g2.emplace(j, i);
  }
  if (g1.size() != left_count || g2.size() != right_count) {
    throw Error("extract_maps: relation is not total");
  }
  return {g1, g2};
}

bool verify_transfer(const System& a, const System& b,
                     const std::vector<std::pair<std::size_t, std::size_t>>& relation) {
  std::set<std::pair<std::size_t, std::size_t>> rel(relation.begin(), relation.end());
  for (const auto& [x, y] : relation) {
    for (const auto& t : a.steps[x]) {
      bool matched = false;
      for (const auto& u : b.steps[y]) {
        if (u.action == t.action && rel.count({t.to, u.to})) {
          matched = true;
          break;
        }
      }
      if (!matched) return false;
    }
    for (const auto& u : b.steps[y]) {
      bool matched = false;
      for (const auto& t : a.steps[x]) {
        if (u.action == t.action && rel.count({t.to, u.to})) {
          matched = true;
          break;
        }
      }
      if (!matched) return false;
    }
  }
  return true;
}

System system_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  System sys;
  std::map<std::string, std::size_t> index;
  for (const auto& s : j.at("states")) {
    std::string name = s.get<std::string>();
    index[name] = sys.size();
    sys.keys.push_back(name);
    sys.names.push_back(name);
    sys.steps.emplace_back();
  }
  for (const auto& t : j.at("transitions")) {
    std::size_t from = index.at(t.at("from").get<std::string>());
    std::size_t to = index.at(t.at("to").get<std::string>());
    Transition tr;
    tr.action = t.at("action").get<std::string>();
    tr.to = to;
    if (t.contains("weight")) tr.weight = t.at("weight").get<double>();
    sys.steps[from].push_back(std::move(tr));
  }
  return sys;
}

std::string system_to_json(const System& sys) {
  nlohmann::json j;
  j["states"] = sys.names;
  j["actions"] = sys.actions();
  nlohmann::json ts = nlohmann::json::array();
  for (std::size_t s = 0; s < sys.size(); ++s) {
    for (const auto& t : sys.steps[s]) {
      nlohmann::json e{{"from", sys.names[s]}, {"action", t.action}, {"to", sys.names[t.to]}};
      if (t.weight) e["weight"] = *t.weight;
      ts.push_back(std::move(e));
    }
  }
  j["transitions"] = std::move(ts);
  return j.dump(2);
}

std::string system_to_dot(const System& sys, const std::string& name) {
  std::ostringstream os;
  os << "digraph \"" << name << "\" {\n";
  for (std::size_t s = 0; s < sys.size(); ++s) {
    os << "  n" << s << " [label=\"" << sys.names[s] << "\"];\n";
  }
  for (std::size_t s = 0; s < sys.size(); ++s) {
    for (const auto& t : sys.steps[s]) {
      os << "  n" << s << " -> n" << t.to << " [label=\"" << t.action;
      if (t.weight) os << " (" << *t.weight << ")";
      os << "\"];\n";
    }
  }
  os << "}\n";
  return os.str();
}

System make_system(const std::vector<std::string>& names,
                   const std::vector<std::tuple<std::size_t, std::string, std::size_t>>& edges) {
  System sys;
  sys.keys = names;
  sys.names = names;
  sys.steps.resize(names.size());
  for (const auto& [from, act, to] : edges) sys.steps[from].push_back({act, to, std::nullopt});
  return sys;
}

System make_weighted_system(
    const std::vector<std::string>& names,
    const std::vector<std::tuple<std::size_t, std::string, std::size_t, double>>& edges) {
  System sys;
  sys.keys = names;
  sys.names = names;
  sys.steps.resize(names.size());
  for (const auto& [from, act, to, w] : edges) sys.steps[from].push_back({act, to, w});
  return sys;
}

}  // namespace mtg::lts
