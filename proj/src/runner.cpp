/*
 * Copyright 2026 the mettagraph authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "mettagraph/runner.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

#include <json.hpp>

#include "mettagraph/encode.hpp"
#include "mettagraph/engine.hpp"
#include "mettagraph/minisys.hpp"
#include "mettagraph/parser.hpp"

namespace mtg::frontend {

namespace {

using nlohmann::json;

constexpr int kReportVersion = 1;

struct Contexts {
  stlc::Context stlc;
  pdts::Context pdts;
  pts::Context pts;
};

stlc::TypeP stlc_type_from(const mlang::TypeExpr& t) {
  if (t.is<mlang::TypeExpr::Base>()) return stlc::ty_base(t.as<mlang::TypeExpr::Base>().name);
  if (t.is<mlang::TypeExpr::Arrow>()) {
    const auto& a = t.as<mlang::TypeExpr::Arrow>();
    stlc::TypeP dom = stlc_type_from(*a.dom);
    stlc::TypeP cod = stlc_type_from(*a.cod);
    if (dom && cod) return stlc::ty_arrow(dom, cod);
  }
  return nullptr;
}

pts::ExprP pts_type_from(const mlang::TypeExpr& t) {
  if (t.is<mlang::TypeExpr::Base>()) {
    const auto& name = t.as<mlang::TypeExpr::Base>().name;
    if (name.size() > 1 && name[0] == 's' &&
        std::all_of(name.begin() + 1, name.end(),
                    [](char c) { return c >= '0' && c <= '9'; })) {
      return pts::e_sort(static_cast<std::uint32_t>(std::stoul(name.substr(1))));
    }
    return pts::e_var(name);
  }
  if (t.is<mlang::TypeExpr::Arrow>()) {
    const auto& a = t.as<mlang::TypeExpr::Arrow>();
    pts::ExprP dom = pts_type_from(*a.dom);
    pts::ExprP cod = pts_type_from(*a.cod);
    if (dom && cod) return pts::e_pi("_", dom, cod);
  }
  return nullptr;
}

pdts::TypeP pdts_type_from(const mlang::TypeExpr& t) {
  if (t.is<mlang::TypeExpr::Base>()) return pdts::ty_base(t.as<mlang::TypeExpr::Base>().name);
  if (t.is<mlang::TypeExpr::Arrow>()) {
    const auto& a = t.as<mlang::TypeExpr::Arrow>();
    pdts::TypeP dom = pdts_type_from(*a.dom);
    pdts::TypeP cod = pdts_type_from(*a.cod);
    if (dom && cod) return pdts::ty_arrow(dom, cod);
  }
  if (t.is<mlang::TypeExpr::Union>()) {
    const auto& u = t.as<mlang::TypeExpr::Union>();
    pdts::TypeP l = pdts_type_from(*u.lhs);
    pdts::TypeP r = pdts_type_from(*u.rhs);
    if (l && r) return pdts::ty_union(l, r);
  }
  if (t.is<mlang::TypeExpr::Inter>()) {
    const auto& u = t.as<mlang::TypeExpr::Inter>();
    pdts::TypeP l = pdts_type_from(*u.lhs);
    pdts::TypeP r = pdts_type_from(*u.rhs);
    if (l && r) return pdts::ty_inter(l, r);
  }
  if (t.is<mlang::TypeExpr::Applied>()) {
    const auto& a = t.as<mlang::TypeExpr::Applied>();
    if (a.head == "Distribution" && a.args.size() == 1) {
      pdts::TypeP inner = pdts_type_from(*a.args[0]);
      if (inner) return pdts::ty_dist(inner);
    }
  }
  return nullptr;
}

/// Context files are atom lists of typing judgments.
Contexts parse_contexts(const std::string& text) {
  Contexts out;
  if (text.empty()) return out;
  auto atoms = parse_atoms(text);
  if (!atoms.ok()) throw Error(atoms.error->to_string());
  for (const auto& atom : *atoms) {
    if (!atom->head.is_key(mlang::Keyword::Colon) || atom->kids.size() != 2) {
      throw Error("context entries must be typing atoms: " + print_atom(atom));
    }
    if (!atom->kids[0]->head.is<mlang::BaseLabel::Sym>()) {
      throw Error("context subjects must be symbols: " + print_atom(atom));
    }
    std::string name = atom->kids[0]->head.as<mlang::BaseLabel::Sym>().name;
    auto ty = mlang::term_as_type(atom->kids[1]);
    if (!ty) throw Error("context entry has no type: " + print_atom(atom));
    if (auto st = stlc_type_from(*ty)) out.stlc[name] = st;
    if (auto pt = pdts_type_from(*ty)) out.pdts[name] = pt;
    if (auto pe = pts_type_from(*ty)) out.pts.emplace_back(name, pe);
  }
  return out;
}

Report finish(const RunConfig&, json j, std::string text, int exit_code,
              std::vector<Artifact> artifacts = {}) {
  Report r;
  j["version"] = kReportVersion;
  r.exit_code = exit_code;
  r.json = j.dump(2);
  r.text = std::move(text);
  r.artifacts = std::move(artifacts);
  return r;
}

const char* mode_name(Mode m) {
  switch (m) {
    case Mode::Eval: return "eval";
    case Mode::FullEval: return "full-eval";
    case Mode::Sample: return "sample";
    case Mode::Typecheck: return "typecheck";
    case Mode::Encode: return "encode";
    case Mode::Bisim: return "bisim";
    case Mode::Demo: return "demo";
  }
  return "?";
}

struct Program {
  Lang lang;
  stlc::ExprP stlc_expr;
  pdts::ExprP pdts_expr;
  pts::ExprP pts_expr;
  pts::Spec spec;
};

Program parse_program(const RunConfig& config, const std::string& input) {
  Program p;
  p.lang = detect_language(input, !config.pts_spec.empty());
  if (p.lang == Lang::Pts) {
    auto spec = parse_pts_spec(config.pts_spec);
    if (!spec.ok()) throw Error(spec.error->to_string());
    p.spec = *spec;
    auto e = parse_pts_expr(input);
    if (!e.ok()) throw Error(e.error->to_string());
    p.pts_expr = *e;
    return p;
  }
  if (p.lang == Lang::Pdts) {
    auto e = parse_pdts(input);
    if (!e.ok()) throw Error(e.error->to_string());
    p.pdts_expr = *e;
    return p;
  }
  auto e = parse_stlc(input);
  if (!e.ok()) throw Error(e.error->to_string());
  p.stlc_expr = *e;
  return p;
}

Report run_eval(const RunConfig& config, const std::string& input) {
  Contexts ctx = parse_contexts(config.context);
  Program p = parse_program(config, input);

  mlang::Atomspace space;
  std::function<std::string(const mlang::Atomspace&)> decode_nf;
  if (p.lang == Lang::Pts) {
    auto enc = std::make_shared<encode::PtsEncoding>(encode::encode_pts(p.spec, ctx.pts, p.pts_expr));
    space = enc->space;
    decode_nf = [enc, &config](const mlang::Atomspace& s) {
      return pts::show(encode::decode_pts_normal(*enc, s, config.budget));
    };
  } else if (p.lang == Lang::Pdts) {
    auto enc = std::make_shared<encode::PdtsEncoding>(encode::encode_pdts(ctx.pdts, p.pdts_expr));
    space = enc->space;
    decode_nf = [enc](const mlang::Atomspace& s) {
      return pdts::show(encode::decode_pdts_term(*enc, s.pointed() ? s.atoms()[s.pointer()->atom]
                                                                   : nullptr));
    };
  } else {
    auto enc = std::make_shared<encode::StlcEncoding>(
        p.lang == Lang::Untyped ? encode::encode_untyped(p.stlc_expr)
                                : encode::encode_stlc(ctx.stlc, p.stlc_expr));
    space = enc->space;
    decode_nf = [enc, &config](const mlang::Atomspace& s) {
      return stlc::show(encode::decode_stlc_normal(*enc, s, config.budget));
    };
  }

  std::vector<std::string> trace_lines;
  mlang::TraceFn trace;
  if (config.trace) {
    trace = [&trace_lines](const mlang::StepInfo& info) {
      json line{{"step", info.step},
                {"rule", info.rule},
                {"position", info.position},
                {"successors", info.successors}};
      trace_lines.push_back(line.dump());
    };
  }
  mlang::EvalResult r = mlang::evaluate(space, config.budget, trace);

  json j{{"mode", mode_name(config.mode)}, {"steps", r.steps}};
  std::ostringstream text;
  std::vector<Artifact> artifacts;
  if (config.trace) {
    std::string blob;
    for (const auto& l : trace_lines) blob += l + "\n";
    artifacts.push_back({"trace.jsonl", blob});
    text << blob;
  }
  if (!r.terminated()) {
    j["status"] = "budget-exhausted";
    if (r.exhausted) {
      text << "budget exhausted after " << r.steps << " steps\n";
    } else {
      text << "no normal form: evaluation diverges (after " << r.steps << " steps)\n";
    }
    return finish(config, std::move(j), text.str(), 2, std::move(artifacts));
  }
  std::vector<std::string> forms;
  for (const auto& nf : r.normal_forms) forms.push_back(decode_nf(nf));
  std::sort(forms.begin(), forms.end());
  forms.erase(std::unique(forms.begin(), forms.end()), forms.end());
  j["normal_forms"] = forms;
  j["status"] = "ok";
  for (const auto& f : forms) text << f << "\n";
  text << "steps: " << r.steps << "\n";
  return finish(config, std::move(j), text.str(), 0, std::move(artifacts));
}

Report run_full_eval(const RunConfig& config, const std::string& input) {
  auto e = parse_pdts(input);
  if (!e.ok()) throw Error(e.error->to_string());
  pdts::Distribution d = pdts::full_eval(*e, config.budget);

  // Canonical order keeps golden output stable.
  std::map<std::string, double> sorted;
  for (const auto& [k, entry] : d.mass) sorted[k] = entry.second;

  json j{{"mode", mode_name(config.mode)}, {"residual", d.residual}};
  json dist = json::object();
  std::ostringstream text;
  for (const auto& [k, p] : sorted) {
    dist[k] = p;
    text << k << ": " << p << "\n";
  }
  j["distribution"] = dist;
  if (d.residual > 0) {
    j["status"] = "budget-exhausted";
    text << "residual mass: " << d.residual << "\n";
    return finish(config, std::move(j), text.str(), 2);
  }
  j["status"] = "ok";
  return finish(config, std::move(j), text.str(), 0);
}

Report run_sample(const RunConfig& config, const std::string& input) {
  auto e = parse_pdts(input);
  if (!e.ok()) throw Error(e.error->to_string());
  try {
    pdts::ExprP nf = pdts::sample_eval(*e, config.seed, config.budget);
    json j{{"mode", mode_name(config.mode)}, {"status", "ok"}, {"normal_form", pdts::show(nf)},
           {"seed", config.seed}};
    return finish(config, std::move(j), pdts::show(nf) + "\n", 0);
  } catch (const BudgetError& ex) {
    json j{{"mode", mode_name(config.mode)}, {"status", "budget-exhausted"}, {"error", ex.what()}};
    return finish(config, std::move(j), std::string(ex.what()) + "\n", 2);
  }
}

Report run_typecheck(const RunConfig& config, const std::string& input) {
  Contexts ctx = parse_contexts(config.context);
  Program p = parse_program(config, input);
  json j{{"mode", mode_name(config.mode)}};
  try {
    std::string shown;
    if (p.lang == Lang::Pts) {
      shown = pts::show(pts::typecheck(p.spec, ctx.pts, p.pts_expr, config.budget));
    } else if (p.lang == Lang::Pdts) {
      shown = pdts::typecheck(ctx.pdts, p.pdts_expr)->show();
    } else if (p.lang == Lang::Untyped) {
      throw stlc::TypeError("untyped terms have no simple type");
    } else {
      shown = stlc::typecheck(ctx.stlc, p.stlc_expr)->show();
    }
    j["status"] = "ok";
    j["type"] = shown;
    return finish(config, std::move(j), shown + "\n", 0);
  } catch (const pts::ConversionBudgetError& ex) {
    j["status"] = "budget-exhausted";
    j["error"] = ex.what();
    return finish(config, std::move(j), std::string("conversion budget: ") + ex.what() + "\n", 2);
  } catch (const Error& ex) {
    j["status"] = "type-error";
    j["error"] = ex.what();
    return finish(config, std::move(j), std::string("type error: ") + ex.what() + "\n", 1);
  }
}

Report run_encode(const RunConfig& config, const std::string& input) {
  Contexts ctx = parse_contexts(config.context);
  Program p = parse_program(config, input);
  mlang::Atomspace space;
  if (p.lang == Lang::Pts) {
    space = encode::encode_pts(p.spec, ctx.pts, p.pts_expr).space;
  } else if (p.lang == Lang::Pdts) {
    space = encode::encode_pdts(ctx.pdts, p.pdts_expr).space;
  } else if (p.lang == Lang::Untyped) {
    space = encode::encode_untyped(p.stlc_expr).space;
  } else {
    space = encode::encode_stlc(ctx.stlc, p.stlc_expr).space;
  }

  std::ostringstream text;
  json atoms = json::array();
  for (std::size_t i = 0; i < space.atoms().size(); ++i) {
    std::string line = print_atom(space.atoms()[i]);
    if (space.pointer() && space.pointer()->atom == i) line = "(! " + line + ")";
    atoms.push_back(line);
    text << line << "\n";
  }
  json j{{"mode", mode_name(config.mode)}, {"status", "ok"}, {"atoms", atoms}};
  j["metagraph"] = space.to_graph().to_sexpr(
      [](const mlang::TypeExpr& t) { return t.show(); },
      [](const mlang::MLabel& l) { return l.base.show(); });
  return finish(config, std::move(j), text.str(), 0);
}

Report report_verdict(const RunConfig& config, const lts::BisimVerdict& v, json j,
                      std::ostringstream& text, std::vector<Artifact> artifacts) {
  switch (v.kind) {
    case lts::BisimVerdict::Kind::Bisimilar:
      j["verdict"] = "bisimilar";
      j["relation_size"] = v.relation.size();
      text << "Bisimilar (relation size " << v.relation.size() << ")\n";
      return finish(config, std::move(j), text.str(), 0, std::move(artifacts));
    case lts::BisimVerdict::Kind::Distinguished: {
      j["verdict"] = "distinguished";
      j["witness"] = v.witness;
      text << "Distinguished";
      if (!v.witness.empty()) {
        text << " (witness:";
        for (const auto& w : v.witness) text << " " << w;
        text << ")";
      }
      if (!v.reason.empty()) text << " [" << v.reason << "]";
      text << "\n";
      return finish(config, std::move(j), text.str(), 1, std::move(artifacts));
    }
    case lts::BisimVerdict::Kind::Inconclusive: break;
  }
  j["verdict"] = "inconclusive";
  j["reason"] = v.reason;
  text << "Inconclusive: " << v.reason << "\n";
  return finish(config, std::move(j), text.str(), 2, std::move(artifacts));
}

Report run_demo(const RunConfig& config) {
  if (config.demo != "minisys") {
    throw Error("unknown demo '" + config.demo + "' (available: minisys)");
  }
  minisys::DemoResult r = minisys::prove_bisim();
  json j{{"mode", mode_name(config.mode)},
         {"demo", "minisys"},
         {"states_str1", r.state_count_str1},
         {"states_str2", r.state_count_str2},
         {"pairing_in_relation", r.pairing_in_relation},
         {"transfer_verified", r.transfer_verified}};
  std::ostringstream text;
  text << "states: " << r.state_count_str1 << " (atomspace) / " << r.state_count_str2
       << " (expressions)\n";
  std::vector<Artifact> artifacts;
  if (config.emit_dot) {
    minisys::Systems sys = minisys::build_systems();
    artifacts.push_back({"str1.dot", lts::system_to_dot(sys.str1, "str1")});
    artifacts.push_back({"str2.dot", lts::system_to_dot(sys.str2, "str2")});
  }
  return report_verdict(config, r.verdict, std::move(j), text, std::move(artifacts));
}

Report run_bisim(const RunConfig& config) {
  if (!config.demo.empty()) return run_demo(config);
  if (config.lts_a.empty() || config.lts_b.empty()) {
    throw Error("bisim needs either --demo or two transition systems");
  }
  lts::System a = lts::system_from_json(config.lts_a);
  lts::System b = lts::system_from_json(config.lts_b);
  auto v = lts::bisim_check(a, 0, b, 0);
  json j{{"mode", mode_name(config.mode)}};
  std::ostringstream text;
  std::vector<Artifact> artifacts;
  if (config.emit_dot) {
    artifacts.push_back({"lts_a.dot", lts::system_to_dot(a, "a")});
    artifacts.push_back({"lts_b.dot", lts::system_to_dot(b, "b")});
  }
  return report_verdict(config, v, std::move(j), text, std::move(artifacts));
}

}  // namespace

Report run_or_throw(const RunConfig& config, const std::string& input) {
  switch (config.mode) {
    case Mode::Eval: return run_eval(config, input);
    case Mode::FullEval: return run_full_eval(config, input);
    case Mode::Sample: return run_sample(config, input);
    case Mode::Typecheck: return run_typecheck(config, input);
    case Mode::Encode: return run_encode(config, input);
    case Mode::Bisim: return run_bisim(config);
    case Mode::Demo: return run_demo(config);
  }
  throw Error("unknown mode");
}

Report run(const RunConfig& config, const std::string& input) {
  try {
    return run_or_throw(config, input);
  } catch (const BudgetError& ex) {
    json j{{"mode", mode_name(config.mode)}, {"status", "budget-exhausted"}, {"error", ex.what()},
           {"version", kReportVersion}};
    return {2, std::string(ex.what()) + "\n", j.dump(2), {}};
  } catch (const std::exception& ex) {
    json j{{"mode", mode_name(config.mode)}, {"status", "error"}, {"error", ex.what()},
           {"version", kReportVersion}};
    return {1, std::string("error: ") + ex.what() + "\n", j.dump(2), {}};
  }
}

}  // namespace mtg::frontend
