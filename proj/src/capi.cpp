/*
 * Copyright 2026 the mettagraph authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "mettagraph.h"

#include <cstring>
#include <string>

#include "mettagraph/parser.hpp"
#include "mettagraph/pts.hpp"
#include "mettagraph/runner.hpp"
#include "mettagraph/stlc.hpp"

struct mtg_context {
  std::string last_error;
};

struct mtg_result {
  mtg::frontend::Report report;
};

namespace {

const char* kVersion = "0.1.0";

mtg_status classify(const std::exception& ex) {
  if (dynamic_cast<const mtg::BudgetError*>(&ex) != nullptr) return MTG_ERR_BUDGET;
  if (dynamic_cast<const mtg::pts::ConversionBudgetError*>(&ex) != nullptr) return MTG_ERR_BUDGET;
  if (dynamic_cast<const mtg::stlc::TypeError*>(&ex) != nullptr) return MTG_ERR_TYPE;
  if (dynamic_cast<const mtg::pts::TypeError*>(&ex) != nullptr) return MTG_ERR_TYPE;
  std::string what = ex.what();
  if (what.find("parse error") != std::string::npos) return MTG_ERR_PARSE;
  if (what.find("type error") != std::string::npos) return MTG_ERR_TYPE;
  return MTG_ERR_RUNTIME;
}

}  // namespace

extern "C" {

const char* mtg_version(void) { return kVersion; }

mtg_context* mtg_context_new(void) { return new (std::nothrow) mtg_context{}; }

void mtg_context_free(mtg_context* ctx) { delete ctx; }

const char* mtg_last_error(const mtg_context* ctx) {
  return ctx == nullptr ? "null context" : ctx->last_error.c_str();
}

void mtg_options_init(mtg_options* opts, mtg_mode mode) {
  if (opts == nullptr) return;
  std::memset(opts, 0, sizeof(*opts));
  opts->mode = mode;
}

mtg_status mtg_run(mtg_context* ctx, const mtg_options* opts, const char* input,
                   mtg_result** out) {
  if (out != nullptr) *out = nullptr;
  if (ctx == nullptr) return MTG_ERR_INVALID_ARGUMENT;
  if (opts == nullptr || out == nullptr) {
    ctx->last_error = "options and result pointers must be non-null";
    return MTG_ERR_INVALID_ARGUMENT;
  }

  mtg::frontend::RunConfig config;
  switch (opts->mode) {
    case MTG_MODE_EVAL: config.mode = mtg::frontend::Mode::Eval; break;
    case MTG_MODE_FULL_EVAL: config.mode = mtg::frontend::Mode::FullEval; break;
    case MTG_MODE_SAMPLE: config.mode = mtg::frontend::Mode::Sample; break;
    case MTG_MODE_TYPECHECK: config.mode = mtg::frontend::Mode::Typecheck; break;
    case MTG_MODE_ENCODE: config.mode = mtg::frontend::Mode::Encode; break;
    case MTG_MODE_BISIM: config.mode = mtg::frontend::Mode::Bisim; break;
    case MTG_MODE_DEMO: config.mode = mtg::frontend::Mode::Demo; break;
    default:
      ctx->last_error = "unknown mode";
      return MTG_ERR_INVALID_ARGUMENT;
  }
  if (opts->budget > 0) config.budget = static_cast<std::size_t>(opts->budget);
  config.seed = opts->seed;
  config.json = opts->json != 0;
  config.emit_dot = opts->emit_dot != 0;
  config.trace = opts->trace != 0;
  if (opts->pts_spec != nullptr) config.pts_spec = opts->pts_spec;
  if (opts->context != nullptr) config.context = opts->context;
  if (opts->demo != nullptr) config.demo = opts->demo;
  if (opts->lts_a != nullptr) config.lts_a = opts->lts_a;
  if (opts->lts_b != nullptr) config.lts_b = opts->lts_b;

  try {
    mtg::frontend::Report report = mtg::frontend::run_or_throw(config, input ? input : "");
    *out = new mtg_result{std::move(report)};
    ctx->last_error.clear();
    return MTG_OK;
  } catch (const std::exception& ex) {
    ctx->last_error = ex.what();
    return classify(ex);
  } catch (...) {
    ctx->last_error = "unknown failure";
    return MTG_ERR_RUNTIME;
  }
}

int mtg_result_exit_code(const mtg_result* r) { return r == nullptr ? 1 : r->report.exit_code; }

const char* mtg_result_text(const mtg_result* r) {
  return r == nullptr ? "" : r->report.text.c_str();
}

const char* mtg_result_json(const mtg_result* r) {
  return r == nullptr ? "" : r->report.json.c_str();
}

size_t mtg_result_artifact_count(const mtg_result* r) {
  return r == nullptr ? 0 : r->report.artifacts.size();
}

const char* mtg_result_artifact_name(const mtg_result* r, size_t index) {
  if (r == nullptr || index >= r->report.artifacts.size()) return nullptr;
  return r->report.artifacts[index].name.c_str();
}

const char* mtg_result_artifact_data(const mtg_result* r, size_t index) {
  if (r == nullptr || index >= r->report.artifacts.size()) return nullptr;
  return r->report.artifacts[index].data.c_str();
}

void mtg_result_free(mtg_result* r) { delete r; }

}  // extern "C"
