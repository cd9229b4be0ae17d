/*
 * Copyright 2026 the mettagraph authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mtg::frontend {

enum class Mode {
  Eval,
  FullEval,
  Sample,
  Typecheck,
  Encode,
  Bisim,
  Demo,
};

struct RunConfig {
  Mode mode = Mode::Eval;
  std::size_t budget = 10000;
  std::uint64_t seed = 0;
  bool json = false;
  bool emit_dot = false;
  bool trace = false;
  std::string pts_spec;   // spec file contents, empty when absent
  std::string context;    // typing atoms, empty when absent
  std::string demo;       // demo name for Demo/Bisim
  std::string lts_a;      // JSON system for Bisim
  std::string lts_b;
};

struct Artifact {
  std::string name;
  std::string data;
};

/// Exit codes: 0 success, 1 distinguished or typecheck/parse failure,
/// 2 budget exhaustion.
struct Report {
  int exit_code = 0;
  std::string text;
  std::string json;
  std::vector<Artifact> artifacts;
};

/// Never throws: failures become reports with nonzero exit codes.
Report run(const RunConfig& config, const std::string& input);

/// Throws on malformed input (parse, config, io); verdicts and budget
/// outcomes still come back as reports.
Report run_or_throw(const RunConfig& config, const std::string& input);

}  // namespace mtg::frontend
