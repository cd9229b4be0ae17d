/*
 * Copyright 2026 the mettagraph authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "mettagraph/engine.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

namespace mtg::mlang {

namespace {

bool is_activation(const TermPtr& t) {
  return t->head.is_key(Keyword::Activate) && t->kids.size() == 1;
}

/// The node a pointer should land on when pointed at `root`: activation
/// wrappers are entered so the pointer targets the activated node itself.
Path entry_path(const TermPtr& root, Path base) {
  if (is_activation(root)) base.push_back(0);
  return base;
}

std::string path_string(const PointerPos& p) {
  std::ostringstream os;
  os << p.atom;
  for (auto i : p.path) os << "." << i;
  return os.str();
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string state_hash(const Atomspace& s) {
  std::ostringstream os;
  os << std::hex << fnv1a(s.canonical_key());
  return os.str();
}

}  // namespace

RuleTermPtr annotate(const TermPtr& t, Side side, Marker root_marker) {
  std::vector<RuleTermPtr> kids;
  kids.reserve(t->kids.size());
  for (const auto& k : t->kids) kids.push_back(annotate(k, side));
  return std::make_shared<const RuleTerm>(
      RuleTerm{t->head, t->type, t->id, side, root_marker, std::move(kids)});
}

std::size_t count_markers(const RuleTermPtr& t, Marker m) {
  std::size_t n = t->marker == m ? 1 : 0;
  for (const auto& k : t->kids) n += count_markers(k, m);
  return n;
}

namespace {

bool match_rec(const TermPtr& pattern, const TermPtr& host, const Atomspace& space,
               Bindings& bindings) {
  // Activation markers on the host side are transparent to patterns.
  if (is_activation(host) && !pattern->head.is_key(Keyword::Activate)) {
    return match_rec(pattern, host->kids[0], space, bindings);
  }
  if (pattern->head.is<BaseLabel::Var>()) {
    const auto& name = pattern->head.as<BaseLabel::Var>().name;
    TermPtr value = is_activation(host) ? host->kids[0] : host;
    auto it = bindings.find(name);
    if (it != bindings.end()) return term_iso(it->second, value);
    const TypeExpr& want = pattern->type;
    if (!want.has_var() && !want.is<TypeExpr::TopType>() && !want.is<TypeExpr::Top>()) {
      if (!value->type.has_var() && !space.subtype_query(value->type, want)) return false;
    }
    bindings.emplace(name, value);
    return true;
  }
  if (pattern->head != host->head) return false;
  if (pattern->kids.size() != host->kids.size()) return false;
  for (std::size_t i = 0; i < pattern->kids.size(); ++i) {
    if (!match_rec(pattern->kids[i], host->kids[i], space, bindings)) return false;
  }
  return true;
}

void positions_rec(const TermPtr& t, Path& path, std::vector<Path>& out) {
  out.push_back(path);
  for (std::uint32_t i = 0; i < t->kids.size(); ++i) {
    path.push_back(i);
    positions_rec(t->kids[i], path, out);
    path.pop_back();
  }
}

}  // namespace

std::optional<Bindings> match_at(const TermPtr& pattern, const TermPtr& host,
                                 const Atomspace& space) {
  Bindings b;
  if (match_rec(pattern, host, space, b)) return b;
  return std::nullopt;
}

std::vector<Match> match(const TermPtr& pattern, const Atomspace& host) {
  std::vector<Match> out;
  for (std::size_t a = 0; a < host.atoms().size(); ++a) {
    std::vector<Path> positions;
    Path p;
    positions_rec(host.atoms()[a], p, positions);
    for (const auto& pos : positions) {
      auto b = match_at(pattern, subterm_ptr_at(host.atoms()[a], pos), host);
      if (b) out.push_back({a, pos, std::move(*b)});
    }
  }
  return out;
}

std::vector<Match> match_atoms(const TermPtr& pattern, const Atomspace& host) {
  std::vector<Match> out;
  bool conjunction = pattern->head == l_sym("and") && pattern->kids.size() == 2;
  for (std::size_t a = 0; a < host.atoms().size(); ++a) {
    if (!conjunction) {
      auto b = match_at(pattern, host.atoms()[a], host);
      if (b) out.push_back({a, {}, std::move(*b)});
      continue;
    }
    auto b1 = match_at(pattern->kids[0], host.atoms()[a], host);
    if (!b1) continue;
    for (std::size_t a2 = 0; a2 < host.atoms().size(); ++a2) {
      Bindings merged = *b1;
      if (match_rec(pattern->kids[1], host.atoms()[a2], host, merged)) {
        out.push_back({a, {static_cast<std::uint32_t>(a2)}, std::move(merged)});
      }
    }
  }
  return out;
}

namespace {

TermPtr instantiate_rec(const TermPtr& tmpl, const Bindings& bindings, Atomspace& host,
                        std::map<std::string, std::string>& renames) {
  if (tmpl->head.is<BaseLabel::Var>()) {
    const auto& name = tmpl->head.as<BaseLabel::Var>().name;
    auto it = bindings.find(name);
    if (it != bindings.end()) return it->second;
    auto rit = renames.find(name);
    if (rit == renames.end()) {
      rit = renames.emplace(name, name + "'" + std::to_string(host.fresh_edge_id())).first;
    }
    return mk_leaf(l_var(rit->second), tmpl->type, host.fresh_edge_id());
  }
  std::vector<TermPtr> kids;
  kids.reserve(tmpl->kids.size());
  for (const auto& k : tmpl->kids) kids.push_back(instantiate_rec(k, bindings, host, renames));
  return mk_term(tmpl->head, tmpl->type, host.fresh_edge_id(), std::move(kids));
}

TermPtr refresh_ids(const TermPtr& t, Atomspace& host) {
  std::vector<TermPtr> kids;
  kids.reserve(t->kids.size());
  for (const auto& k : t->kids) kids.push_back(refresh_ids(k, host));
  return mk_term(t->head, t->type, host.fresh_edge_id(), std::move(kids));
}

}  // namespace

TermPtr instantiate(const TermPtr& tmpl, const Bindings& bindings, Atomspace& host) {
  std::map<std::string, std::string> renames;
  TermPtr out = instantiate_rec(tmpl, bindings, host, renames);
  return refresh_ids(out, host);
}

namespace {

TermPtr redex_at(const PointerPos& pos, const Atomspace& host) {
  return subterm_ptr_at(host.atoms()[pos.atom], pos.path);
}

bool redex_activated(const PointerPos& pos, const Atomspace& host) {
  if (pos.path.empty()) return false;
  Path parent(pos.path.begin(), pos.path.end() - 1);
  return is_activation(subterm_ptr_at(host.atoms()[pos.atom], parent));
}

}  // namespace

RuleGraph instantiate_funapp(const PointerPos& pos, const Atomspace& host) {
  TermPtr redex = redex_at(pos, host);
  if (!redex->head.is_key(Keyword::FunApp)) {
    throw TypeShapeError("instantiate_funapp: pointed node is not an application");
  }
  if (!redex_activated(pos, host)) {
    throw TypeShapeError("instantiate_funapp: redex is not activated");
  }
  RuleGraph rule;
  rule.kind = RuleGraph::Kind::FunApp;
  rule.redex = pos;

  Path parent(pos.path.begin(), pos.path.end() - 1);
  TermPtr wrapper = subterm_ptr_at(host.atoms()[pos.atom], parent);
  rule.input = annotate(wrapper, Side::L);
  {
    // Mark the redex node (the wrapper's target) as the rule input.
    auto in = std::make_shared<RuleTerm>(*rule.input->kids[0]);
    in->marker = Marker::In;
    auto top = std::make_shared<RuleTerm>(*rule.input);
    top->kids[0] = in;
    rule.input = top;
  }

  // Preserved shape: the equation pattern (= (f $a1 ... $ak) $rhs) built
  // from the redex spine, shared by both sides of the rule.
  Atomspace scratch = host;
  std::uint64_t base = scratch.fresh_edge_id();
  TermPtr lhs_shape = redex;
  std::vector<TermPtr> arg_vars;
  {
    // Copy the redex replacing each argument with a fresh variable.
    std::function<TermPtr(const TermPtr&, int)> walk = [&](const TermPtr& t, int depth) -> TermPtr {
      if (!t->head.is_key(Keyword::FunApp)) return t;
      TermPtr fn = walk(t->kids[0], depth + 1);
      TermPtr arg = mk_leaf(l_var("a" + std::to_string(base + arg_vars.size())), t_toptype(),
                            scratch.fresh_edge_id());
      arg_vars.push_back(arg);
      return mk_term(t->head, t->type, scratch.fresh_edge_id(), {fn, arg});
    };
    lhs_shape = walk(redex, 0);
  }
  TermPtr rhs_var = mk_leaf(l_var("rhs" + std::to_string(base)), t_toptype(), scratch.fresh_edge_id());
  TermPtr eq_shape =
      mk_term(l_key(Keyword::Equals), t_judg(), scratch.fresh_edge_id(), {lhs_shape, rhs_var});
  rule.preserved.push_back(annotate(eq_shape, Side::LR));
  for (const auto& n : rule.preserved) {
    std::deque<RuleTermPtr> work{n};
    while (!work.empty()) {
      auto cur = work.front();
      work.pop_front();
      rule.glue[cur->id] = cur->id;
      for (const auto& k : cur->kids) work.push_back(k);
    }
  }
  rule.output = annotate(rhs_var, Side::R, Marker::Out);
  return rule;
}

RuleGraph instantiate_trans(const PointerPos& pos, const Atomspace& host) {
  TermPtr redex = redex_at(pos, host);
  if (!redex->head.is_key(Keyword::Trans) || redex->kids.size() != 2) {
    throw TypeShapeError("instantiate_trans: pointed node is not a transform");
  }
  if (!redex_activated(pos, host)) {
    throw TypeShapeError("instantiate_trans: redex is not activated");
  }
  RuleGraph rule;
  rule.kind = RuleGraph::Kind::Trans;
  rule.redex = pos;

  const TermPtr& pattern = redex->kids[0];
  const TermPtr& tmpl = redex->kids[1];

  std::vector<Match> matches = match_atoms(pattern, host);
  std::size_t width = host.atoms().size();

  Atomspace scratch = host;
  std::vector<TermPtr> slots;
  for (std::size_t i = 0; i < width; ++i) {
    if (i < matches.size()) {
      slots.push_back(instantiate(tmpl, matches[i].bindings, scratch));
    } else {
      slots.push_back(mk_leaf(l_nul(), t_top(), scratch.fresh_edge_id()));
    }
  }
  rule.result = mk_term(l_sym("tuple"), t_top(), scratch.fresh_edge_id(), std::move(slots));

  Path parent(pos.path.begin(), pos.path.end() - 1);
  rule.input = annotate(subterm_ptr_at(host.atoms()[pos.atom], parent), Side::L);
  {
    auto in = std::make_shared<RuleTerm>(*rule.input->kids[0]);
    in->marker = Marker::In;
    auto top = std::make_shared<RuleTerm>(*rule.input);
    top->kids[0] = in;
    rule.input = top;
  }
  rule.output = annotate(rule.result, Side::R, Marker::Out);
  for (const auto& m : matches) {
    rule.preserved.push_back(annotate(host.atoms()[m.atom], Side::LR));
  }
  for (const auto& n : rule.preserved) {
    std::deque<RuleTermPtr> work{n};
    while (!work.empty()) {
      auto cur = work.front();
      work.pop_front();
      rule.glue[cur->id] = cur->id;
      for (const auto& k : cur->kids) work.push_back(k);
    }
  }
  return rule;
}

std::vector<Match> rule_matches(const RuleGraph& rule, const Atomspace& host) {
  std::vector<Match> out;
  if (rule.kind != RuleGraph::Kind::FunApp) return out;
  TermPtr redex = redex_at(rule.redex, host);
  for (std::size_t a = 0; a < host.atoms().size(); ++a) {
    const TermPtr& atom = host.atoms()[a];
    if (!atom->head.is_key(Keyword::Equals) || atom->kids.size() != 2) continue;
    auto b = match_at(atom->kids[0], redex, host);
    if (b) out.push_back({a, {}, std::move(*b)});
  }
  return out;
}

namespace {

/// Splices `result` over the redex and its activation wrapper; the pointer
/// lands on the result (entering a fresh activation wrapper if present).
Atomspace splice_result(const Atomspace& host, const PointerPos& pos, const TermPtr& result,
                        std::uint64_t next_id) {
  Path parent(pos.path.begin(), pos.path.end() - 1);
  TermPtr atom = replace_at(host.atoms()[pos.atom], parent, result);
  Atomspace out = host.with_atom_replaced(pos.atom, atom).with_next_id(next_id);
  return out.with_pointer({pos.atom, entry_path(result, parent)});
}

}  // namespace

namespace {

std::optional<Atomspace> try_apply(const RuleGraph& rule, const Atomspace& host, const Match& m) {
  Atomspace scratch = host;
  TermPtr result;
  if (rule.kind == RuleGraph::Kind::FunApp) {
    const TermPtr& equation = host.atoms()[m.atom];
    result = instantiate(equation->kids[1], m.bindings, scratch);
  } else {
    result = refresh_ids(rule.result, scratch);
  }
  Atomspace out = splice_result(host, rule.redex, result, scratch.peek_next_id());
  if (!out.check_mconstraints().empty()) return std::nullopt;
  return out;
}

}  // namespace

Atomspace apply_rule(const RuleGraph& rule, const Atomspace& host, const Match& m) {
  auto out = try_apply(rule, host, m);
  return out ? *out : host;  // invalid rewrite result: identity
}

std::string update_kind(const Atomspace& space) {
  if (!space.pointer()) return "halt";
  const PointerPos& pos = *space.pointer();
  TermPtr focus = redex_at(pos, space);
  if (redex_activated(pos, space)) {
    for (const auto& kid : focus->kids) {
      if (is_activation(kid)) return "move-pointer";
    }
    if (focus->head.is_key(Keyword::FunApp)) {
      RuleGraph rule = instantiate_funapp(pos, space);
      for (const auto& m : rule_matches(rule, space)) {
        if (try_apply(rule, space, m)) return "funapp";
      }
      return "move-pointer";  // stale marker drop
    }
    if (focus->head.is_key(Keyword::Trans)) return "trans";
    return "move-pointer";
  }
  for (std::size_t len = pos.path.size(); len-- > 0;) {
    PointerPos up{pos.atom, Path(pos.path.begin(), pos.path.begin() + len)};
    if (redex_activated(up, space)) return "move-pointer";
  }
  return "halt";
}

std::vector<Atomspace> update(const Atomspace& space) {
  if (!space.pointer()) return {};
  const PointerPos& pos = *space.pointer();
  TermPtr focus = redex_at(pos, space);

  if (redex_activated(pos, space)) {
    // First activated target, in edge order.
    for (std::uint32_t i = 0; i < focus->kids.size(); ++i) {
      if (is_activation(focus->kids[i])) {
        Path p = pos.path;
        p.push_back(i);
        p.push_back(0);
        return {space.with_pointer({pos.atom, std::move(p)})};
      }
    }
    // Rewrites.  Invalid results fall back to identity and are never
    // emitted as successors.
    if (focus->head.is_key(Keyword::FunApp)) {
      RuleGraph rule = instantiate_funapp(pos, space);
      std::vector<Atomspace> out;
      std::set<std::string> seen;
      for (const auto& m : rule_matches(rule, space)) {
        auto next = try_apply(rule, space, m);
        if (!next) continue;
        if (seen.insert(next->canonical_key()).second) out.push_back(std::move(*next));
      }
      if (!out.empty()) return out;
    } else if (focus->head.is_key(Keyword::Trans)) {
      RuleGraph rule = instantiate_trans(pos, space);
      auto next = try_apply(rule, space, Match{});
      if (next) return {std::move(*next)};
    }
    // Activated but stuck: drop the stale activation marker.
    Path parent(pos.path.begin(), pos.path.end() - 1);
    TermPtr atom = replace_at(space.atoms()[pos.atom], parent, focus);
    Atomspace next = space.with_atom_replaced(pos.atom, atom);
    return {next.with_pointer({pos.atom, std::move(parent)})};
  }

  // Not activated: climb to the nearest activated ancestor.
  for (std::size_t len = pos.path.size(); len-- > 0;) {
    PointerPos up{pos.atom, Path(pos.path.begin(), pos.path.begin() + len)};
    if (redex_activated(up, space)) {
      return {space.with_pointer(up)};
    }
  }
  return {};
}

EvalResult evaluate(const Atomspace& space, std::size_t budget, const TraceFn& trace,
                    const Observer& observer) {
  EvalResult result;
  std::deque<Atomspace> queue{space};
  std::set<std::string> visited{space.canonical_key()};
  std::map<std::string, Atomspace> normals;
  std::map<std::string, std::vector<std::string>> predecessors;

  while (!queue.empty()) {
    if (result.steps >= budget) {
      result.exhausted = true;
      result.frontier.assign(queue.begin(), queue.end());
      break;
    }
    Atomspace cur = queue.front();
    queue.pop_front();
    ++result.steps;
    std::string cur_key = cur.canonical_key();

    std::string kind = trace ? update_kind(cur) : std::string();
    std::vector<Atomspace> succ = update(cur);
    if (observer) observer(cur, succ);
    if (trace) {
      StepInfo info;
      info.step = result.steps;
      info.rule = kind;
      info.position = cur.pointer() ? path_string(*cur.pointer()) : "-";
      for (const auto& s : succ) info.successors.push_back(state_hash(s));
      trace(info);
    }
    if (succ.empty()) {
      normals.emplace(std::move(cur_key), cur);
      continue;
    }
    for (auto& s : succ) {
      std::string key = s.canonical_key();
      predecessors[key].push_back(cur_key);
      if (visited.insert(key).second) {
        queue.push_back(std::move(s));
      }
    }
  }
  for (auto& [_, s] : normals) result.normal_forms.push_back(std::move(s));

  if (!result.exhausted) {
    // Divergence check: every explored state must reach a normal form.
    // Re-visiting a state is fine (confluent diamonds); a state with no
    // path into the normal set is not.
    std::set<std::string> reaches;
    std::deque<std::string> work;
    for (const auto& [k, _] : normals) {
      reaches.insert(k);
      work.push_back(k);
    }
    while (!work.empty()) {
      std::string key = work.front();
      work.pop_front();
      auto it = predecessors.find(key);
      if (it == predecessors.end()) continue;
      for (const auto& p : it->second) {
        if (reaches.insert(p).second) work.push_back(p);
      }
    }
    result.diverged = reaches.size() < visited.size();
  }
  return result;
}

bool rewrite_pending(const Atomspace& space) {
  std::string kind = update_kind(space);
  return kind == "funapp" || kind == "trans";
}

Atomspace quiesce(const Atomspace& space, std::size_t fuel) {
  Atomspace cur = space;
  while (fuel-- > 0) {
    if (rewrite_pending(cur)) return cur;
    std::vector<Atomspace> succ = update(cur);
    if (succ.empty()) return cur;
    if (succ.size() != 1) return cur;
    cur = std::move(succ.front());
  }
  throw BudgetError("quiesce: internal move budget exceeded");
}

std::vector<Atomspace> compressed_step(const Atomspace& space) {
  Atomspace q = quiesce(space);
  if (!rewrite_pending(q)) return {};
  std::vector<Atomspace> out;
  for (auto& s : update(q)) out.push_back(quiesce(s));
  return out;
}

}  // namespace mtg::mlang
