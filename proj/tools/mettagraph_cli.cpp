/*
 * Copyright 2026 the mettagraph authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */

// Command-line driver.  All functionality goes through the C API; this
// translation unit only handles argument and file plumbing.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "mettagraph.h"

namespace {

std::string read_file(const std::string& path) {
  if (path == "-") {
    std::ostringstream os;
    os << std::cin.rdbuf();
    return os.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CLI::ValidationError("cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct CommonArgs {
  std::string expr;
  std::string file;
  std::string context_file;
  std::string pts_spec_file;
  std::uint64_t budget = 0;
  std::uint64_t seed = 0;
  bool json = false;
  bool emit_dot = false;
  bool trace = false;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool wants_input) {
  if (wants_input) {
    cmd->add_option("expr", args.expr, "expression (omit when using --file)");
    cmd->add_option("-f,--file", args.file, "read the input from a file ('-' for stdin)");
  }
  cmd->add_option("--budget", args.budget, "evaluation step budget");
  cmd->add_option("--seed", args.seed, "random seed");
  cmd->add_option("--context", args.context_file, "typing atoms file");
  cmd->add_option("--pts-spec", args.pts_spec_file, "sorted-calculus spec file");
  cmd->add_flag("--json", args.json, "emit the JSON report");
  cmd->add_flag("--emit-dot", args.emit_dot, "write dot dumps of the transition systems");
  cmd->add_flag("--trace", args.trace, "emit one JSON line per evaluation step");
}

int run_mode(mtg_mode mode, const CommonArgs& args, const std::string& demo,
             const std::string& lts_a, const std::string& lts_b) {
  std::string input = args.expr;
  if (!args.file.empty()) input = read_file(args.file);
  std::string context = args.context_file.empty() ? "" : read_file(args.context_file);
  std::string spec = args.pts_spec_file.empty() ? "" : read_file(args.pts_spec_file);

  mtg_context* ctx = mtg_context_new();
  mtg_options opts;
  mtg_options_init(&opts, mode);
  opts.budget = args.budget;
  opts.seed = args.seed;
  opts.json = args.json ? 1 : 0;
  opts.emit_dot = args.emit_dot ? 1 : 0;
  opts.trace = args.trace ? 1 : 0;
  if (!context.empty()) opts.context = context.c_str();
  if (!spec.empty()) opts.pts_spec = spec.c_str();
  if (!demo.empty()) opts.demo = demo.c_str();
  if (!lts_a.empty()) opts.lts_a = lts_a.c_str();
  if (!lts_b.empty()) opts.lts_b = lts_b.c_str();

  mtg_result* result = nullptr;
  mtg_status status = mtg_run(ctx, &opts, input.c_str(), &result);
  if (status != MTG_OK) {
    std::cerr << "error: " << mtg_last_error(ctx) << "\n";
    mtg_context_free(ctx);
    return status == MTG_ERR_BUDGET ? 2 : 1;
  }

  std::cout << (args.json ? mtg_result_json(result) : mtg_result_text(result));
  if (args.json) std::cout << "\n";
  for (size_t i = 0; i < mtg_result_artifact_count(result); ++i) {
    std::string name = mtg_result_artifact_name(result, i);
    std::ofstream out(name, std::ios::binary);
    out << mtg_result_artifact_data(result, i);
    std::cerr << "wrote " << name << "\n";
  }
  int code = mtg_result_exit_code(result);
  mtg_result_free(result);
  mtg_context_free(ctx);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"metagraph rewriting interpreter"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(mtg_version()));

  CommonArgs eval_args, full_args, sample_args, tc_args, enc_args, bisim_args, demo_args;
  std::string bisim_demo, demo_name;
  std::string lts_a_file, lts_b_file;

  CLI::App* eval = app.add_subcommand("eval", "evaluate an expression to normal form");
  add_common(eval, eval_args, true);

  CLI::App* full = app.add_subcommand("full-eval", "exhaustive weighted evaluation");
  add_common(full, full_args, true);

  CLI::App* sample = app.add_subcommand("sample", "one stochastic reduction path");
  add_common(sample, sample_args, true);

  CLI::App* tc = app.add_subcommand("typecheck", "typecheck an expression");
  add_common(tc, tc_args, true);

  CLI::App* enc = app.add_subcommand("encode", "print the encoded atomspace");
  add_common(enc, enc_args, true);

  CLI::App* bisim = app.add_subcommand("bisim", "check two systems for bisimilarity");
  add_common(bisim, bisim_args, false);
  bisim->add_option("--demo", bisim_demo, "run a built-in demo (minisys)");
  bisim->add_option("--lts-a", lts_a_file, "first transition system (JSON)");
  bisim->add_option("--lts-b", lts_b_file, "second transition system (JSON)");

  CLI::App* demo = app.add_subcommand("demo", "run a built-in demonstration");
  demo->add_option("name", demo_name, "demo name (minisys)")->required();
  add_common(demo, demo_args, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (eval->parsed()) return run_mode(MTG_MODE_EVAL, eval_args, "", "", "");
    if (full->parsed()) return run_mode(MTG_MODE_FULL_EVAL, full_args, "", "", "");
    if (sample->parsed()) return run_mode(MTG_MODE_SAMPLE, sample_args, "", "", "");
    if (tc->parsed()) return run_mode(MTG_MODE_TYPECHECK, tc_args, "", "", "");
    if (enc->parsed()) return run_mode(MTG_MODE_ENCODE, enc_args, "", "", "");
    if (bisim->parsed()) {
      std::string a = lts_a_file.empty() ? "" : read_file(lts_a_file);
      std::string b = lts_b_file.empty() ? "" : read_file(lts_b_file);
      return run_mode(MTG_MODE_BISIM, bisim_args, bisim_demo, a, b);
    }
    if (demo->parsed()) return run_mode(MTG_MODE_DEMO, demo_args, demo_name, "", "");
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 1;
}
