// Copyright 2026 The lexipipe Authors
// SPDX-License-Identifier: Apache-2.0

#include "lexipipe/refinement.hpp"

#include <cmath>
#include <cstdio>

#include "lexipipe/error.hpp"

namespace lexipipe {

namespace {

using json = nlohmann::json;

constexpr std::string_view kCorrectiveHead =
    "Your previous summary scored ";
constexpr std::string_view kCorrectiveTail =
    " on the Flesch Reading Ease scale. Please simplify further: break long "
    "sentences, replace difficult words, and prefer concrete nouns.";

std::string one_decimal(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1f", value);
  return buf;
}

json optional_number(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

std::optional<double> number_or_null(const json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return j[key].get<double>();
}

int argmax_first(const std::vector<RefinementAttempt>& attempts,
                 double (*key)(const RefinementAttempt&)) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < attempts.size(); ++i)
    if (key(attempts[i]) > key(attempts[best])) best = i;
  return static_cast<int>(best) + 1;
}

}  // namespace

std::string_view to_string(StoppingMode mode) {
  return mode == StoppingMode::fixed_cap ? "fixed" : "dynamic";
}

std::string_view to_string(SelectionPolicy policy) {
  switch (policy) {
    case SelectionPolicy::last_attempt: return "last";
    case SelectionPolicy::best_composite: return "best-composite";
    case SelectionPolicy::best_fre: return "best-fre";
  }
  return "best-fre";
}

std::string_view to_string(StopReason reason) {
  switch (reason) {
    case StopReason::threshold_met: return "threshold_met";
    case StopReason::cap_exhausted: return "cap_exhausted";
    case StopReason::composite_declined: return "composite_declined";
  }
  return "cap_exhausted";
}

StoppingMode parse_stopping_mode(std::string_view text) {
  if (text == "fixed" || text == "fixed_cap") return StoppingMode::fixed_cap;
  if (text == "dynamic" || text == "dynamic_composite")
    return StoppingMode::dynamic_composite;
  throw Error(ErrorCode::config,
              "unknown stopping mode '" + std::string(text) +
                  "' (expected fixed or dynamic)");
}

SelectionPolicy parse_selection_policy(std::string_view text) {
  if (text == "last" || text == "last_attempt")
    return SelectionPolicy::last_attempt;
  if (text == "best-composite" || text == "best_composite")
    return SelectionPolicy::best_composite;
  if (text == "best-fre" || text == "best_fre") return SelectionPolicy::best_fre;
  throw Error(ErrorCode::config,
              "unknown selection policy '" + std::string(text) +
                  "' (expected last, best-composite or best-fre)");
}

StopReason parse_stop_reason(std::string_view text) {
  if (text == "threshold_met") return StopReason::threshold_met;
  if (text == "cap_exhausted") return StopReason::cap_exhausted;
  if (text == "composite_declined") return StopReason::composite_declined;
  throw Error(ErrorCode::parse, "unknown stop reason '" + std::string(text) + "'");
}

void PipelineConfig::validate() const {
  if (max_attempts < 1)
    throw Error(ErrorCode::config, "max_attempts must be >= 1");
  auto in_unit = [](double w) { return w >= 0.0 && w <= 1.0; };
  if (!in_unit(weights.readability) || !in_unit(weights.fidelity) ||
      std::abs(weights.readability + weights.fidelity - 1.0) > 1e-9)
    throw Error(ErrorCode::config,
                "composite weights must lie in [0, 1] and sum to 1");
  if (!std::isfinite(fre_target))
    throw Error(ErrorCode::config, "fre_target must be finite");
  if (generation.temperature < 0.0)
    throw Error(ErrorCode::config, "temperature must be >= 0");
  if (generation.max_output_tokens < 1)
    throw Error(ErrorCode::config, "max_output_tokens must be >= 1");
}

InitialPrompt build_initial_prompt(const PipelineConfig& config) {
  InitialPrompt prompt{std::string(kInitialPrompt), {}};
  if (config.few_shot) {
    if (config.few_shot_examples.empty())
      throw Error(ErrorCode::config,
                  "few-shot requested but no examples are configured");
    prompt.examples = config.few_shot_examples;
  }
  return prompt;
}

std::string build_corrective_prompt(double previous_fre) {
  std::string out(kCorrectiveHead);
  out += one_decimal(previous_fre);
  out += kCorrectiveTail;
  return out;
}

std::optional<std::string> corrective_prompt_score(std::string_view prompt) {
  if (!prompt.starts_with(kCorrectiveHead) || !prompt.ends_with(kCorrectiveTail))
    return std::nullopt;
  return std::string(prompt.substr(
      kCorrectiveHead.size(),
      prompt.size() - kCorrectiveHead.size() - kCorrectiveTail.size()));
}

RefinementTrace refine(std::string_view article, SummarizerBackend& backend,
                       const PipelineConfig& config,
                       const FidelityContext* fidelity) {
  config.validate();
  if (config.stopping == StoppingMode::dynamic_composite && fidelity == nullptr)
    throw Error(ErrorCode::config,
                "dynamic stopping needs a reference summary and a scorer");
  const SelectionPolicy selection = config.selection.value_or(
      fidelity ? SelectionPolicy::best_composite : SelectionPolicy::best_fre);
  if (selection == SelectionPolicy::best_composite && fidelity == nullptr)
    throw Error(ErrorCode::config,
                "best-composite selection needs a reference summary and a "
                "scorer");
  if (article.empty())
    throw Error(ErrorCode::invalid_argument, "refine: empty article");

  const InitialPrompt initial = build_initial_prompt(config);
  SummarizeRequest request;
  request.instruction = initial.instruction;
  request.article = std::string(article);
  request.few_shot_examples = initial.examples;
  request.params = config.generation;

  RefinementTrace trace;
  trace.config = config;
  trace.selection = selection;
  if (fidelity) trace.scorer = fidelity->scorer.identity();

  std::optional<StopReason> stop;
  for (int t = 1; t <= config.max_attempts && !stop; ++t) {
    SummarizeResponse response = backend.summarize(request);
    if (trace.backend_id.empty()) trace.backend_id = response.backend_id;

    RefinementAttempt attempt;
    attempt.index = t;
    attempt.prompt_text = request.history.empty()
                              ? request.instruction
                              : request.history.back().follow_up;
    attempt.summary = std::move(response.summary);
    const ReadabilityScore readability = score_readability(attempt.summary);
    attempt.fre = readability.fre;
    attempt.stats = readability.stats;
    if (fidelity) {
      attempt.semantic_f1 =
          fidelity->scorer.score(attempt.summary, fidelity->reference);
      attempt.composite =
          composite_score(attempt.fre, *attempt.semantic_f1, config.weights);
    }
    trace.attempts.push_back(attempt);

    if (config.stopping == StoppingMode::dynamic_composite && t > 1 &&
        *attempt.composite < *trace.attempts[t - 2].composite) {
      stop = StopReason::composite_declined;
    } else if (attempt.fre >= config.fre_target) {
      stop = StopReason::threshold_met;
    } else if (t == config.max_attempts) {
      stop = StopReason::cap_exhausted;
    } else {
      request.history.push_back(
          {trace.attempts.back().summary, build_corrective_prompt(attempt.fre)});
    }
  }
  trace.stop_reason = *stop;

  if (trace.stop_reason == StopReason::composite_declined) {
    trace.final_index = static_cast<int>(trace.attempts.size()) - 1;
  } else {
    switch (selection) {
      case SelectionPolicy::last_attempt:
        trace.final_index = static_cast<int>(trace.attempts.size());
        break;
      case SelectionPolicy::best_fre:
        trace.final_index = argmax_first(
            trace.attempts, [](const RefinementAttempt& a) { return a.fre; });
        break;
      case SelectionPolicy::best_composite:
        trace.final_index =
            argmax_first(trace.attempts, [](const RefinementAttempt& a) {
              return *a.composite;
            });
        break;
    }
  }
  return trace;
}

std::string baseline_summarize(std::string_view article,
                               SummarizerBackend& backend,
                               const GenerationParams& params) {
  if (article.empty())
    throw Error(ErrorCode::invalid_argument, "baseline: empty article");
  SummarizeRequest request;
  request.instruction = std::string(kBaselinePrompt);
  request.article = std::string(article);
  request.params = params;
  return backend.summarize(request).summary;
}

// --- serialization ------------------------------------------------------------

json to_json(const PipelineConfig& c) {
  json examples = json::array();
  for (const auto& ex : c.few_shot_examples)
    examples.push_back({{"source", ex.source}, {"summary", ex.summary}});
  return {
      {"fre_target", c.fre_target},
      {"max_attempts", c.max_attempts},
      {"w_readability", c.weights.readability},
      {"w_fidelity", c.weights.fidelity},
      {"stopping", to_string(c.stopping)},
      {"few_shot", c.few_shot},
      {"few_shot_examples", std::move(examples)},
      {"selection",
       c.selection ? json(to_string(*c.selection)) : json("auto")},
      {"temperature", c.generation.temperature},
      {"max_tokens", c.generation.max_output_tokens},
      {"seed", c.generation.seed ? json(*c.generation.seed) : json(nullptr)},
  };
}

PipelineConfig pipeline_config_from_json(const json& j) {
  PipelineConfig c;
  c.fre_target = j.at("fre_target").get<double>();
  c.max_attempts = j.at("max_attempts").get<int>();
  c.weights.readability = j.at("w_readability").get<double>();
  c.weights.fidelity = j.at("w_fidelity").get<double>();
  c.stopping = parse_stopping_mode(j.at("stopping").get<std::string>());
  c.few_shot = j.at("few_shot").get<bool>();
  for (const auto& ex : j.at("few_shot_examples"))
    c.few_shot_examples.push_back({ex.at("source").get<std::string>(),
                                   ex.at("summary").get<std::string>()});
  const std::string selection = j.at("selection").get<std::string>();
  if (selection != "auto") c.selection = parse_selection_policy(selection);
  c.generation.temperature = j.at("temperature").get<double>();
  c.generation.max_output_tokens = j.at("max_tokens").get<int>();
  if (!j.at("seed").is_null())
    c.generation.seed = j.at("seed").get<std::int64_t>();
  return c;
}

json to_json(const RefinementTrace& trace) {
  json attempts = json::array();
  for (const auto& a : trace.attempts) {
    attempts.push_back({
        {"index", a.index},
        {"prompt_text", a.prompt_text},
        {"summary", a.summary},
        {"fre", a.fre},
        {"stats",
         {{"sentences", a.stats.sentence_count},
          {"words", a.stats.word_count},
          {"syllables", a.stats.syllable_count}}},
        {"semantic_f1", optional_number(a.semantic_f1)},
        {"composite", optional_number(a.composite)},
    });
  }
  json scorer = nullptr;
  if (trace.scorer)
    scorer = {{"name", trace.scorer->name}, {"version", trace.scorer->version}};
  return {
      {"schema", "lexipipe.trace"},
      {"schema_version", kTraceSchemaVersion},
      {"backend_id", trace.backend_id},
      {"scorer", std::move(scorer)},
      {"config", to_json(trace.config)},
      {"selection_policy", to_string(trace.selection)},
      {"stop_reason", to_string(trace.stop_reason)},
      {"final_index", trace.final_index},
      {"attempts", std::move(attempts)},
  };
}

RefinementTrace trace_from_json(const json& j) {
  if (j.value("schema_version", 0) != kTraceSchemaVersion)
    throw Error(ErrorCode::parse, "unsupported trace schema version");
  RefinementTrace trace;
  trace.backend_id = j.at("backend_id").get<std::string>();
  if (!j.at("scorer").is_null())
    trace.scorer = ScorerIdentity{j["scorer"].at("name").get<std::string>(),
                                  j["scorer"].at("version").get<std::string>()};
  trace.config = pipeline_config_from_json(j.at("config"));
  trace.selection =
      parse_selection_policy(j.at("selection_policy").get<std::string>());
  trace.stop_reason = parse_stop_reason(j.at("stop_reason").get<std::string>());
  trace.final_index = j.at("final_index").get<int>();
  for (const auto& a : j.at("attempts")) {
    RefinementAttempt attempt;
    attempt.index = a.at("index").get<int>();
    attempt.prompt_text = a.at("prompt_text").get<std::string>();
    attempt.summary = a.at("summary").get<std::string>();
    attempt.fre = a.at("fre").get<double>();
    const json& s = a.at("stats");
    attempt.stats = {s.at("sentences").get<std::int64_t>(),
                     s.at("words").get<std::int64_t>(),
                     s.at("syllables").get<std::int64_t>()};
    attempt.semantic_f1 = number_or_null(a, "semantic_f1");
    attempt.composite = number_or_null(a, "composite");
    trace.attempts.push_back(std::move(attempt));
  }
  return trace;
}

}  // namespace lexipipe
