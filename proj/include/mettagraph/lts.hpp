/*
 * Copyright 2026 the mettagraph authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mettagraph/error.hpp"

namespace mtg::lts {

struct Transition {
  std::string action;
  std::size_t to = 0;
  std::optional<double> weight;
};

/// An explored, indexed transition system.
struct System {
  std::vector<std::string> keys;   // canonical state keys
  std::vector<std::string> names;  // display names
  std::vector<std::vector<Transition>> steps;
  bool truncated = false;

  std::size_t size() const { return keys.size(); }
  std::set<std::string> actions() const;
};

/// A lazily generated transition system over states S.
template <typename S>
struct Lts {
  struct Succ {
    std::string action;
    S to;
    std::optional<double> weight;
  };
  std::function<std::vector<Succ>(const S&)> step;
  std::function<std::string(const S&)> key;
  std::function<std::string(const S&)> show;
};

/// Breadth-first exploration from the start states, at most `budget`
/// states; sets `truncated` when the budget cuts the frontier.
template <typename S>
System reachable(const Lts<S>& lts, const std::vector<S>& starts, std::size_t budget) {
  System sys;
  std::map<std::string, std::size_t> index;
  std::deque<S> queue;
  std::vector<S> states;

  auto intern = [&](const S& s) {
    std::string k = lts.key(s);
    auto it = index.find(k);
    if (it != index.end()) return it->second;
    std::size_t id = sys.keys.size();
    index.emplace(k, id);
    sys.keys.push_back(k);
    sys.names.push_back(lts.show ? lts.show(s) : k);
    sys.steps.emplace_back();
    states.push_back(s);
    queue.push_back(s);
    return id;
  };

  for (const auto& s : starts) intern(s);
  std::size_t expanded = 0;
  while (!queue.empty()) {
    if (expanded >= budget) {
      sys.truncated = true;
      break;
    }
    S cur = queue.front();
    queue.pop_front();
    std::size_t from = index.at(lts.key(cur));
    ++expanded;
    for (const auto& succ : lts.step(cur)) {
      if (sys.keys.size() >= budget && index.find(lts.key(succ.to)) == index.end()) {
        sys.truncated = true;
        continue;
      }
      std::size_t to = intern(succ.to);
      sys.steps[from].push_back({succ.action, to, succ.weight});
    }
  }
  return sys;
}

struct BisimVerdict {
  enum class Kind { Bisimilar, Distinguished, Inconclusive };
  Kind kind = Kind::Inconclusive;
  /// For Bisimilar: matched pairs (left state, right state), closed under
  /// the transfer conditions on the explored fragment.
  std::vector<std::pair<std::size_t, std::size_t>> relation;
  /// For Distinguished: a minimal-depth separating action trace.
  std::vector<std::string> witness;
  std::string reason;

  bool bisimilar() const { return kind == Kind::Bisimilar; }
};

/// Partition refinement over the coproduct of the two systems.  Verdicts
/// are exact on fully explored systems; truncation yields Inconclusive.
BisimVerdict bisim_check(const System& a, std::size_t s1, const System& b, std::size_t s2);

/// Full-relation variant: Bisimilar when every left state has a partner
/// and vice versa; the relation covers all matched pairs.
BisimVerdict bisim_check_total(const System& a, const System& b);

/// One refinement pass, verdict over a set of required pairs: Bisimilar
/// when every pair lands in one block (and the relation is total both
/// ways); otherwise Distinguished with a witness for the first failing
/// pair.
BisimVerdict bisim_check_pairs(const System& a, const System& b,
                               const std::vector<std::pair<std::size_t, std::size_t>>& pairs);

/// Probabilistic bisimulation: per action and per block, cumulative
/// transition weights must agree within tol.  Weights must sum to one per
/// state and action (within tol); throws on non-normalized input.
BisimVerdict prob_bisim_check(const System& a, std::size_t s1, const System& b, std::size_t s2,
                              double tol = 1e-9);

/// Extracts pairing functions from a total relation; choices are the first
/// partner in index order.
std::pair<std::map<std::size_t, std::size_t>, std::map<std::size_t, std::size_t>> extract_maps(
    const std::vector<std::pair<std::size_t, std::size_t>>& relation, std::size_t left_count,
    std::size_t right_count);

/// Verifies both transfer conditions for every pair of the relation.
bool verify_transfer(const System& a, const System& b,
                     const std::vector<std::pair<std::size_t, std::size_t>>& relation);

System system_from_json(const std::string& text);
std::string system_to_json(const System& sys);
std::string system_to_dot(const System& sys, const std::string& name);

/// Table-building convenience for tests and small examples.
System make_system(const std::vector<std::string>& names,
                   const std::vector<std::tuple<std::size_t, std::string, std::size_t>>& edges);
System make_weighted_system(
    const std::vector<std::string>& names,
    const std::vector<std::tuple<std::size_t, std::string, std::size_t, double>>& edges);

}  // namespace mtg::lts
