/*
 * Copyright 2026 the mettagraph authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#ifndef METTAGRAPH_H
#define METTAGRAPH_H

/* C interface to the metagraph interpreter.  All functionality is reached
 * through opaque handles; strings returned by accessors stay valid until
 * the owning handle is freed. */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mtg_status {
  MTG_OK = 0,
  MTG_ERR_INVALID_ARGUMENT = 1,
  MTG_ERR_PARSE = 2,
  MTG_ERR_TYPE = 3,
  MTG_ERR_BUDGET = 4,
  MTG_ERR_RUNTIME = 5,
} mtg_status;

typedef enum mtg_mode {
  MTG_MODE_EVAL = 0,
  MTG_MODE_FULL_EVAL = 1,
  MTG_MODE_SAMPLE = 2,
  MTG_MODE_TYPECHECK = 3,
  MTG_MODE_ENCODE = 4,
  MTG_MODE_BISIM = 5,
  MTG_MODE_DEMO = 6,
} mtg_mode;

typedef struct mtg_context mtg_context;
typedef struct mtg_result mtg_result;

typedef struct mtg_options {
  mtg_mode mode;
  uint64_t budget; /* 0 selects the default (10000) */
  uint64_t seed;
  int json;
  int emit_dot;
  int trace;
  const char* pts_spec; /* spec file contents, or NULL */
  const char* context;  /* typing atoms, or NULL */
  const char* demo;     /* demo name for bisim/demo modes, or NULL */
  const char* lts_a;    /* JSON transition system, or NULL */
  const char* lts_b;
} mtg_options;

const char* mtg_version(void);

mtg_context* mtg_context_new(void);
void mtg_context_free(mtg_context* ctx);

/* Message for the most recent failure on this context; never NULL. */
const char* mtg_last_error(const mtg_context* ctx);

/* Fills an options struct with the defaults for `mode`. */
void mtg_options_init(mtg_options* opts, mtg_mode mode);

/* Runs one request.  On MTG_OK the caller owns *out and must free it;
 * on failure *out is NULL and mtg_last_error describes the problem. */
mtg_status mtg_run(mtg_context* ctx, const mtg_options* opts, const char* input,
                   mtg_result** out);

/* 0 success, 1 distinguished or typecheck/parse failure, 2 budget. */
int mtg_result_exit_code(const mtg_result* r);
const char* mtg_result_text(const mtg_result* r);
const char* mtg_result_json(const mtg_result* r);

/* Side outputs (dot dumps, trace logs), addressed by index. */
size_t mtg_result_artifact_count(const mtg_result* r);
const char* mtg_result_artifact_name(const mtg_result* r, size_t index);
const char* mtg_result_artifact_data(const mtg_result* r, size_t index);

void mtg_result_free(mtg_result* r);

#ifdef __cplusplus
}
#endif

#endif /* METTAGRAPH_H */
