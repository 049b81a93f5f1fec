/* Copyright 2026 The lexipipe Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to lexipipe. Every call that can fail returns an lp_status;
 * on failure, lp_last_error() holds a message for the calling thread until
 * its next lexipipe call. Strings returned through char** outputs are
 * owned by the caller and released with lp_string_free(). */

#ifndef LEXIPIPE_LEXIPIPE_H_
#define LEXIPIPE_LEXIPIPE_H_

#include <stddef.h>

#if defined(_WIN32)
#  if defined(LEXIPIPE_BUILDING_LIBRARY)
#    define LP_API __declspec(dllexport)
#  else
#    define LP_API __declspec(dllimport)
#  endif
#else
#  define LP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lp_status {
  LP_OK = 0,
  LP_ERR_INVALID_ARGUMENT = 1,
  LP_ERR_UNSCORABLE = 2,  /* text has no words */
  LP_ERR_CONFIG = 3,
  LP_ERR_CREDENTIAL = 4,
  LP_ERR_TRANSIENT = 5,   /* retries exhausted */
  LP_ERR_BACKEND = 6,
  LP_ERR_PROTOCOL = 7,
  LP_ERR_IO = 8,
  LP_ERR_PARSE = 9,
  LP_ERR_RUNTIME = 10,    /* evaluation failed after work began */
  LP_ERR_INTERNAL = 11
} lp_status;

typedef struct lp_config lp_config;
typedef struct lp_session lp_session;

LP_API const char* lp_version(void);
LP_API const char* lp_status_string(lp_status status);
LP_API const char* lp_last_error(void);
LP_API void lp_string_free(char* s);

/* --- configuration ------------------------------------------------------ */

/* Starts from built-in defaults. Later calls overwrite earlier ones, so
 * apply file, then environment, then explicit settings. */
LP_API lp_status lp_config_create(lp_config** out);
LP_API void lp_config_destroy(lp_config* config);
LP_API lp_status lp_config_set(lp_config* config, const char* key,
                               const char* value);
LP_API lp_status lp_config_get(const lp_config* config, const char* key,
                               char** out);
LP_API lp_status lp_config_load_file(lp_config* config, const char* path);
/* Reads LEXIPIPE_<KEY> variables, including LEXIPIPE_API_KEY. */
LP_API lp_status lp_config_apply_env(lp_config* config);
/* Resolved settings as JSON; the API key is reported only as set/unset. */
LP_API lp_status lp_config_snapshot(const lp_config* config, char** out_json);

/* --- stateless scoring --------------------------------------------------- */

LP_API lp_status lp_flesch_reading_ease(const char* text, double* out);
/* Equal weights. */
LP_API lp_status lp_composite_score(double fre, double semantic_f1,
                                    double* out);

/* --- sessions ------------------------------------------------------------ */

/* Builds the backend and scorer. Fails with LP_ERR_CREDENTIAL for the live
 * backend without an API key. The config may be destroyed afterwards. */
LP_API lp_status lp_session_create(const lp_config* config,
                                   lp_session** out);
LP_API void lp_session_destroy(lp_session* session);

/* Readability of `text`; with a non-NULL reference, also ROUGE-1/2, BLEU,
 * semantic score and composite. */
LP_API lp_status lp_session_score(lp_session* session, const char* text,
                                  const char* reference, char** out_json);

/* Iterative refinement of one article; writes the trace as JSON. A
 * reference is required for dynamic stopping. */
LP_API lp_status lp_session_summarize(lp_session* session,
                                      const char* article,
                                      const char* reference, char** out_json);

/* Single-prompt baseline summary. */
LP_API lp_status lp_session_baseline(lp_session* session,
                                     const char* article,
                                     const char* reference, char** out_json);

/* Called after each newly evaluated article; return nonzero to stop the run
 * early. May be called from several threads at once. */
typedef int (*lp_progress_fn)(void* user_data, const char* article_id,
                              int succeeded);

/* Evaluates a JSONL corpus and writes the report files into out_dir.
 * Corpus and checkpoint problems are reported before any backend call;
 * failures after work began return LP_ERR_RUNTIME. The output JSON holds
 * the aggregate report, the files written, and cached/evaluated counts. */
LP_API lp_status lp_session_evaluate(lp_session* session,
                                     const char* corpus_path,
                                     const char* out_dir,
                                     lp_progress_fn progress, void* user_data,
                                     char** out_json);

#ifdef __cplusplus
}
#endif

#endif /* LEXIPIPE_LEXIPIPE_H_ */
