// Copyright 2026 The lexipipe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "lexipipe/fidelity_metrics.hpp"
#include "lexipipe/summarizer.hpp"
#include "lexipipe/text_analysis.hpp"

namespace lexipipe {

inline constexpr std::string_view kBaselinePrompt =
    "Summarize the following article concisely.";

inline constexpr std::string_view kInitialPrompt =
    "Summarize the following article for a reader with dyslexia. Use short "
    "sentences (under 15 words), common everyday words, and active voice. "
    "Avoid jargon and complex clauses.";

inline constexpr int kTraceSchemaVersion = 1;

enum class StoppingMode { fixed_cap, dynamic_composite };
enum class SelectionPolicy { last_attempt, best_composite, best_fre };
enum class StopReason { threshold_met, cap_exhausted, composite_declined };

std::string_view to_string(StoppingMode mode);
std::string_view to_string(SelectionPolicy policy);
std::string_view to_string(StopReason reason);
StoppingMode parse_stopping_mode(std::string_view text);
SelectionPolicy parse_selection_policy(std::string_view text);
StopReason parse_stop_reason(std::string_view text);

struct PipelineConfig {
  double fre_target = 90.0;
  int max_attempts = 4;
  CompositeWeights weights;
  StoppingMode stopping = StoppingMode::fixed_cap;
  bool few_shot = false;
  std::vector<FewShotExample> few_shot_examples;
  /// Unset: best_composite when a reference is scored, else best_fre.
  std::optional<SelectionPolicy> selection;
  GenerationParams generation;

  /// Throws Error(config) on max_attempts < 1, weights outside [0, 1] or
  /// not summing to 1 within 1e-9.
  void validate() const;

  friend bool operator==(const PipelineConfig&,
                         const PipelineConfig&) = default;
};

struct RefinementAttempt {
  int index = 0;  // 1-based
  std::string prompt_text;
  std::string summary;
  double fre = 0.0;
  TextStats stats;
  std::optional<double> semantic_f1;
  std::optional<double> composite;

  friend bool operator==(const RefinementAttempt&,
                         const RefinementAttempt&) = default;
};

struct RefinementTrace {
  std::vector<RefinementAttempt> attempts;
  StopReason stop_reason = StopReason::cap_exhausted;
  int final_index = 1;  // 1-based index into attempts
  SelectionPolicy selection = SelectionPolicy::best_fre;
  std::string backend_id;
  std::optional<ScorerIdentity> scorer;
  PipelineConfig config;

  const RefinementAttempt& final_attempt() const {
    return attempts.at(static_cast<std::size_t>(final_index - 1));
  }

  friend bool operator==(const RefinementTrace&,
                         const RefinementTrace&) = default;
};

/// Reference summary plus the scorer that compares attempts against it.
struct FidelityContext {
  std::string_view reference;
  const SemanticScorer& scorer;
};

struct InitialPrompt {
  std::string instruction;
  std::vector<FewShotExample> examples;
};

/// Throws Error(config) when few-shot is requested with no examples.
InitialPrompt build_initial_prompt(const PipelineConfig& config);

/// Corrective follow-up carrying the previous score to one decimal.
std::string build_corrective_prompt(double previous_fre);

/// Generate-score-refine loop.
///
/// Attempt 1 sends the initial prompt; every later attempt resends the
/// conversation with the corrective prompt for the previous score appended.
/// Stops at the first attempt reaching config.fre_target or after
/// config.max_attempts. In dynamic_composite mode it also stops as soon as
/// an attempt's composite falls below its predecessor's, shipping the
/// predecessor.
///
/// Backend errors propagate unchanged (the partial trace is dropped). An
/// attempt with no scorable words throws Error(unscorable_text). Dynamic
/// mode or best_composite selection without `fidelity` throws
/// Error(config).
RefinementTrace refine(std::string_view article, SummarizerBackend& backend,
                       const PipelineConfig& config,
                       const FidelityContext* fidelity = nullptr);

/// One backend call with kBaselinePrompt; no scoring.
std::string baseline_summarize(std::string_view article,
                               SummarizerBackend& backend,
                               const GenerationParams& params = {});

nlohmann::json to_json(const PipelineConfig& config);
PipelineConfig pipeline_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RefinementTrace& trace);
RefinementTrace trace_from_json(const nlohmann::json& j);

/// The score embedded in a corrective prompt, or nullopt if `prompt` is
/// not one.
std::optional<std::string> corrective_prompt_score(std::string_view prompt);

}  // namespace lexipipe
