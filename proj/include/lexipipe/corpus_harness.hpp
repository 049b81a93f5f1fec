// Copyright 2026 The lexipipe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <stop_token>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"
#include "lexipipe/error.hpp"
#include "lexipipe/fidelity_metrics.hpp"
#include "lexipipe/refinement.hpp"
#include "lexipipe/summarizer.hpp"

namespace lexipipe {

inline constexpr int kRecordSchemaVersion = 1;
inline constexpr int kReportSchemaVersion = 1;
inline constexpr int kFreBinWidth = 5;

struct ArticleRecord {
  std::string id;
  std::string article;
  std::string reference_summary;

  friend bool operator==(const ArticleRecord&, const ArticleRecord&) = default;
};

/// JSONL, one {"id", "article", "reference_summary"} object per line.
/// Blank lines are skipped. Throws Error(parse) naming the 1-based line of a
/// malformed or incomplete record, or the repeated id.
std::vector<ArticleRecord> parse_corpus(std::istream& in,
                                        std::string_view source_name);
std::vector<ArticleRecord> load_corpus(const std::filesystem::path& path);

struct ConditionResult {
  std::string summary;
  double fre = 0.0;
  TextStats stats;
  FidelityScores fidelity;

  friend bool operator==(const ConditionResult&,
                         const ConditionResult&) = default;
};

struct PhaseTiming {
  double baseline_ms = 0.0;
  double pipeline_ms = 0.0;
  double scoring_ms = 0.0;
};

struct EvaluationRecord {
  std::string article_id;
  ConditionResult baseline;
  RefinementTrace trace;
  ConditionResult pipeline;  // the trace's final attempt, fully scored
  PhaseTiming timing;

  /// Compares everything except wall-clock timing.
  friend bool operator==(const EvaluationRecord& a,
                         const EvaluationRecord& b) {
    return a.article_id == b.article_id && a.baseline == b.baseline &&
           a.trace == b.trace && a.pipeline == b.pipeline;
  }
};

struct FailedEvaluation {
  std::string article_id;
  ErrorCode code = ErrorCode::internal;
  std::string reason;

  friend bool operator==(const FailedEvaluation&,
                         const FailedEvaluation&) = default;
};

using EvaluationResult = std::variant<EvaluationRecord, FailedEvaluation>;

const std::string& article_id(const EvaluationResult& result);

/// Baseline and pipeline on the same article, both scored against the
/// reference with the same scorer. Backend and scoring failures become a
/// FailedEvaluation; configuration errors propagate.
EvaluationResult evaluate_article(const ArticleRecord& record,
                                  SummarizerBackend& backend,
                                  const PipelineConfig& config,
                                  const SemanticScorer& scorer);

struct RunOptions {
  int parallelism = 1;
  /// JSONL of finished records; empty disables checkpointing.
  std::filesystem::path checkpoint_path;
  std::stop_token stop;
  /// Called once per newly evaluated article, from worker threads, after
  /// the record is checkpointed.
  std::function<void(const EvaluationResult&)> on_result;
};

struct EvaluationRun {
  std::vector<EvaluationResult> results;  // corpus order
  std::size_t cached = 0;                 // restored from the checkpoint
  std::size_t evaluated = 0;              // computed in this run
  bool interrupted = false;
};

/// Evaluates every article with at most `parallelism` in flight. Finished
/// records are appended to the checkpoint as they complete; ids already in
/// the checkpoint are restored rather than recomputed. Failures are not
/// checkpointed, so a resumed run retries them.
///
/// Throws Error(io) before any backend call if the checkpoint cannot be
/// opened for appending, Error(config) for parallelism < 1.
EvaluationRun run_evaluation(std::span<const ArticleRecord> corpus,
                             SummarizerBackend& backend,
                             const PipelineConfig& config,
                             const SemanticScorer& scorer,
                             const RunOptions& options = {});

nlohmann::json to_json(const EvaluationResult& result, bool include_timing);
EvaluationResult evaluation_result_from_json(const nlohmann::json& j);

// --- aggregation ---------------------------------------------------------------

struct AttemptHistogram {
  /// threshold_met traces by length; slot 0 is "met on attempt 1".
  std::vector<std::int64_t> threshold_met_at;
  std::int64_t cap_exhausted = 0;
  std::int64_t composite_declined = 0;

  std::int64_t total() const;
  friend bool operator==(const AttemptHistogram&,
                         const AttemptHistogram&) = default;
};

/// Half-open [low, high).
struct FreBin {
  int low = 0;
  int high = 0;
  std::int64_t count = 0;

  friend bool operator==(const FreBin&, const FreBin&) = default;
};

struct CompositePoint {
  std::size_t article_index = 0;  // position in the corpus
  std::string article_id;
  double composite = 0.0;

  friend bool operator==(const CompositePoint&,
                         const CompositePoint&) = default;
};

struct SummaryStats {
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation; 0 for fewer than 2 values
  double min = 0.0;
  double max = 0.0;

  friend bool operator==(const SummaryStats&, const SummaryStats&) = default;
};

struct PairedDeltas {
  double baseline_mean_fre = 0.0;
  double pipeline_mean_fre = 0.0;
  double mean_fre_delta = 0.0;  // mean of (pipeline - baseline)
  double baseline_mean_composite = 0.0;
  double pipeline_mean_composite = 0.0;
  double mean_composite_delta = 0.0;

  friend bool operator==(const PairedDeltas&, const PairedDeltas&) = default;
};

struct AggregateReport {
  int schema_version = kReportSchemaVersion;
  std::string tool_version;
  std::int64_t n_articles = 0;  // successful records
  std::int64_t n_failed = 0;
  int max_attempts = 0;
  AttemptHistogram attempt_histogram;
  std::vector<FreBin> fre_histogram;
  double pass_rate_at_cap = 0.0;
  std::vector<CompositePoint> composite_series;
  SummaryStats composite_stats;
  PairedDeltas baseline_vs_pipeline;
  std::optional<ScorerIdentity> scorer;
  nlohmann::json config = nlohmann::json::object();

  friend bool operator==(const AggregateReport&,
                         const AggregateReport&) = default;
};

/// Failed entries are counted but excluded. An empty input gives an empty
/// report; input made only of failures throws Error(invalid_argument).
AggregateReport aggregate(std::span<const EvaluationResult> results,
                          int max_attempts,
                          nlohmann::json config_snapshot =
                              nlohmann::json::object());

nlohmann::json to_json(const AggregateReport& report);
AggregateReport aggregate_report_from_json(const nlohmann::json& j);

/// Writes report.json, attempts_hist.csv, fre_hist.csv,
/// composite_series.csv and records.jsonl into `out_dir` (created if
/// missing) and returns their paths. Output bytes depend only on the
/// inputs. Throws Error(io) naming the path that failed.
std::vector<std::filesystem::path> emit_report(
    const AggregateReport& report, std::span<const EvaluationResult> results,
    const std::filesystem::path& out_dir);

}  // namespace lexipipe
