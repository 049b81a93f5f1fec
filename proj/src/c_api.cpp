// Copyright 2026 The lexipipe Authors
// SPDX-License-Identifier: Apache-2.0

#include "lexipipe/lexipipe.h"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <new>
#include <stop_token>
#include <string>

#include "lexipipe/corpus_harness.hpp"
#include "lexipipe/error.hpp"
#include "lexipipe/fidelity_metrics.hpp"
#include "lexipipe/refinement.hpp"
#include "lexipipe/settings.hpp"
#include "lexipipe/text_analysis.hpp"
#include "lexipipe/version.hpp"

struct lp_config {
  lexipipe::Settings settings;
};

struct lp_session {
  explicit lp_session(const lexipipe::Settings& s) : session(s) {}
  lexipipe::Session session;
};

namespace {

using json = nlohmann::json;
using lexipipe::ErrorCode;

thread_local std::string t_last_error;

lp_status status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return LP_ERR_INVALID_ARGUMENT;
    case ErrorCode::unscorable_text: return LP_ERR_UNSCORABLE;
    case ErrorCode::config: return LP_ERR_CONFIG;
    case ErrorCode::credential: return LP_ERR_CREDENTIAL;
    case ErrorCode::transient: return LP_ERR_TRANSIENT;
    case ErrorCode::backend: return LP_ERR_BACKEND;
    case ErrorCode::protocol: return LP_ERR_PROTOCOL;
    case ErrorCode::io: return LP_ERR_IO;
    case ErrorCode::parse: return LP_ERR_PARSE;
    case ErrorCode::internal: return LP_ERR_INTERNAL;
  }
  return LP_ERR_INTERNAL;
}

lp_status fail(lp_status status, std::string message) {
  t_last_error = std::move(message);
  return status;
}

template <typename Fn>
lp_status guarded(Fn&& fn) {
  t_last_error.clear();
  try {
    fn();
    return LP_OK;
  } catch (const lexipipe::Error& e) {
    return fail(status_for(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(LP_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(LP_ERR_INTERNAL, e.what());
  }
}

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(const void* p, const char* what) {
  if (p == nullptr)
    throw lexipipe::Error(ErrorCode::invalid_argument,
                          std::string(what) + " must not be NULL");
}

json stats_json(const lexipipe::TextStats& s) {
  return {{"sentences", s.sentence_count},
          {"words", s.word_count},
          {"syllables", s.syllable_count}};
}

json fidelity_json(const lexipipe::FidelityScores& f) {
  auto pr = [](const lexipipe::PrecisionRecall& p) {
    return json{{"precision", p.precision}, {"recall", p.recall}, {"f1", p.f1}};
  };
  return {{"rouge1", pr(f.rouge1)},
          {"rouge2", pr(f.rouge2)},
          {"bleu", f.bleu},
          {"semantic_f1", f.semantic_f1},
          {"composite", f.composite}};
}

json scorer_json(const lexipipe::SemanticScorer& scorer) {
  const auto id = scorer.identity();
  return {{"name", id.name}, {"version", id.version}};
}

// Readability plus, with a reference, the fidelity suite.
json scored_text(const lexipipe::Session& session, const std::string& text,
                 const char* reference) {
  const auto r = lexipipe::score_readability(text);
  json j = {{"fre", r.fre}, {"stats", stats_json(r.stats)}};
  if (reference != nullptr) {
    j["fidelity"] = fidelity_json(lexipipe::score_fidelity(
        text, reference, r.fre, session.scorer(), session.config().weights));
    j["scorer"] = scorer_json(session.scorer());
  }
  return j;
}

json envelope(std::string_view schema, const lexipipe::Session& session) {
  return {{"schema", schema},
          {"schema_version", 1},
          {"tool_version", lexipipe::version()},
          {"settings", session.settings().snapshot()}};
}

}  // namespace

extern "C" {

const char* lp_version(void) {
  static const std::string v(lexipipe::version());
  return v.c_str();
}

const char* lp_status_string(lp_status status) {
  switch (status) {
    case LP_OK: return "ok";
    case LP_ERR_INVALID_ARGUMENT: return "invalid argument";
    case LP_ERR_UNSCORABLE: return "unscorable text";
    case LP_ERR_CONFIG: return "configuration error";
    case LP_ERR_CREDENTIAL: return "credential error";
    case LP_ERR_TRANSIENT: return "transient failure";
    case LP_ERR_BACKEND: return "backend error";
    case LP_ERR_PROTOCOL: return "protocol error";
    case LP_ERR_IO: return "i/o error";
    case LP_ERR_PARSE: return "parse error";
    case LP_ERR_RUNTIME: return "runtime failure";
    case LP_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* lp_last_error(void) { return t_last_error.c_str(); }

void lp_string_free(char* s) { std::free(s); }

lp_status lp_config_create(lp_config** out) {
  return guarded([&] {
    require(out, "out");
    *out = new lp_config();
  });
}

void lp_config_destroy(lp_config* config) { delete config; }

lp_status lp_config_set(lp_config* config, const char* key,
                        const char* value) {
  return guarded([&] {
    require(config, "config");
    require(key, "key");
    require(value, "value");
    config->settings.set(key, value);
  });
}

lp_status lp_config_get(const lp_config* config, const char* key,
                        char** out) {
  return guarded([&] {
    require(config, "config");
    require(key, "key");
    require(out, "out");
    *out = duplicate(config->settings.get(key));
  });
}

lp_status lp_config_load_file(lp_config* config, const char* path) {
  return guarded([&] {
    require(config, "config");
    require(path, "path");
    config->settings.load_file(path);
  });
}

lp_status lp_config_apply_env(lp_config* config) {
  return guarded([&] {
    require(config, "config");
    config->settings.apply_env();
  });
}

lp_status lp_config_snapshot(const lp_config* config, char** out_json) {
  return guarded([&] {
    require(config, "config");
    require(out_json, "out_json");
    *out_json = duplicate(config->settings.snapshot().dump());
  });
}

lp_status lp_flesch_reading_ease(const char* text, double* out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    *out = lexipipe::score_readability(text).fre;
  });
}

lp_status lp_composite_score(double fre, double semantic_f1, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = lexipipe::composite_score(fre, semantic_f1);
  });
}

lp_status lp_session_create(const lp_config* config, lp_session** out) {
  return guarded([&] {
    require(config, "config");
    require(out, "out");
    *out = new lp_session(config->settings);
  });
}

void lp_session_destroy(lp_session* session) { delete session; }

lp_status lp_session_score(lp_session* session, const char* text,
                           const char* reference, char** out_json) {
  return guarded([&] {
    require(session, "session");
    require(text, "text");
    require(out_json, "out_json");
    json j = envelope("lexipipe.score", session->session);
    j.update(scored_text(session->session, text, reference));
    *out_json = duplicate(j.dump(2));
  });
}

lp_status lp_session_summarize(lp_session* session, const char* article,
                               const char* reference, char** out_json) {
  return guarded([&] {
    require(session, "session");
    require(article, "article");
    require(out_json, "out_json");
    auto& s = session->session;
    lexipipe::RefinementTrace trace;
    if (reference != nullptr) {
      const lexipipe::FidelityContext context{reference, s.scorer()};
      trace = lexipipe::refine(article, s.backend(), s.config(), &context);
    } else {
      trace = lexipipe::refine(article, s.backend(), s.config(), nullptr);
    }
    json j = lexipipe::to_json(trace);
    j["tool_version"] = lexipipe::version();
    j["settings"] = s.settings().snapshot();
    *out_json = duplicate(j.dump(2));
  });
}

lp_status lp_session_baseline(lp_session* session, const char* article,
                              const char* reference, char** out_json) {
  return guarded([&] {
    require(session, "session");
    require(article, "article");
    require(out_json, "out_json");
    auto& s = session->session;
    const std::string summary = lexipipe::baseline_summarize(
        article, s.backend(), s.config().generation);
    json j = envelope("lexipipe.baseline", s);
    j["backend_id"] = s.backend().id();
    j["prompt_text"] = lexipipe::kBaselinePrompt;
    j["summary"] = summary;
    j.update(scored_text(s, summary, reference));
    *out_json = duplicate(j.dump(2));
  });
}

lp_status lp_session_evaluate(lp_session* session, const char* corpus_path,
                              const char* out_dir, lp_progress_fn progress,
                              void* user_data, char** out_json) {
  lexipipe::Session* s = nullptr;
  std::vector<lexipipe::ArticleRecord> corpus;
  lp_status status = guarded([&] {
    require(session, "session");
    require(corpus_path, "corpus_path");
    require(out_dir, "out_dir");
    require(out_json, "out_json");
    s = &session->session;
    corpus = lexipipe::load_corpus(corpus_path);
    s->backend();
  });
  if (status != LP_OK) return status;

  std::stop_source stop;
  lexipipe::RunOptions options;
  options.parallelism = s->settings().parallelism();
  options.checkpoint_path = s->settings().get("checkpoint");
  options.stop = stop.get_token();
  if (progress != nullptr) {
    options.on_result = [&](const lexipipe::EvaluationResult& r) {
      const bool ok = std::holds_alternative<lexipipe::EvaluationRecord>(r);
      if (progress(user_data, lexipipe::article_id(r).c_str(), ok ? 1 : 0))
        stop.request_stop();
    };
  }

  // Checkpoint and configuration problems surface before the first backend
  // call and keep their own status; anything later is a runtime failure.
  std::atomic<bool> started{false};
  options.on_result = [inner = std::move(options.on_result),
                       &started](const lexipipe::EvaluationResult& r) {
    started = true;
    if (inner) inner(r);
  };
  status = guarded([&] {
    const auto run = lexipipe::run_evaluation(corpus, s->backend(), s->config(),
                                              s->scorer(), options);
    started = true;
    if (run.interrupted)
      throw lexipipe::Error(ErrorCode::internal,
                            "interrupted after " +
                                std::to_string(run.evaluated) +
                                " new evaluations; progress is in the checkpoint");
    // Where results go and how fast they are computed do not change them,
    // so those keys stay out of the report.
    json snapshot = s->settings().snapshot();
    for (const char* key : {"out", "checkpoint", "parallelism", "format"})
      snapshot.erase(key);
    const auto report = lexipipe::aggregate(run.results,
                                            s->config().max_attempts,
                                            std::move(snapshot));
    const auto files = lexipipe::emit_report(report, run.results, out_dir);
    json j = {{"cached", run.cached},
              {"evaluated", run.evaluated},
              {"files", json::array()},
              {"report", lexipipe::to_json(report)}};
    for (const auto& f : files) j["files"].push_back(f.string());
    *out_json = duplicate(j.dump(2));
  });
  if (status != LP_OK && started) {
    std::string message = t_last_error;
    return fail(LP_ERR_RUNTIME, std::move(message));
  }
  return status;
}

}  // extern "C"
