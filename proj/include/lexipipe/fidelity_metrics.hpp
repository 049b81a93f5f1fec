// Copyright 2026 The lexipipe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lexipipe/http.hpp"

namespace lexipipe {

/// Case-folded n-gram multiset of one token list.
struct NGramProfile {
  int order = 1;
  std::map<std::vector<std::string>, std::int64_t> counts;

  /// Sum of all counts: max(0, tokens - order + 1).
  std::int64_t total() const;
};

struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  friend bool operator==(const PrecisionRecall&,
                         const PrecisionRecall&) = default;
};

struct CompositeWeights {
  double readability = 0.5;
  double fidelity = 0.5;

  friend bool operator==(const CompositeWeights&,
                         const CompositeWeights&) = default;
};

/// Throws Error(invalid_argument) for n < 1.
NGramProfile ngram_profile(std::span<const std::string> tokens, int n);

/// ROUGE-N with clipped overlap. An empty candidate scores all zeros.
/// Throws Error(unscorable_text) for an empty reference.
PrecisionRecall rouge_n(std::span<const std::string> candidate,
                        std::span<const std::string> reference, int n);

/// Sentence-level BLEU: geometric mean of clipped precisions for orders
/// 1..max_n, add-one smoothing on orders n >= 2 with zero matches, brevity
/// penalty exp(1 - |ref|/|cand|) when the candidate is shorter. No unigram
/// overlap or an empty candidate -> 0.
double bleu(std::span<const std::string> candidate,
            std::span<const std::string> reference, int max_n = 4);

/// Cosine similarity of case-folded unigram count vectors. Identical count
/// vectors score exactly 1.
double lexical_semantic_score(std::span<const std::string> candidate,
                              std::span<const std::string> reference);

/// w_r * clip(fre / 100, 0, 1) + w_f * semantic_f1.
/// Throws Error(invalid_argument) if semantic_f1 is outside [0, 1].
double composite_score(double fre, double semantic_f1,
                       CompositeWeights weights = {});

struct ScorerIdentity {
  std::string name;
  std::string version;

  friend bool operator==(const ScorerIdentity&,
                         const ScorerIdentity&) = default;
};

/// Seam for the embedding-based fidelity scorer. Implementations return a
/// value in [0, 1] with score(a, a) == 1 up to their own tolerance.
class SemanticScorer {
 public:
  virtual ~SemanticScorer() = default;
  virtual double score(std::string_view candidate,
                       std::string_view reference) const = 0;
  virtual ScorerIdentity identity() const = 0;
};

/// Offline fallback built on lexical_semantic_score.
class LexicalScorer final : public SemanticScorer {
 public:
  double score(std::string_view candidate,
               std::string_view reference) const override;
  ScorerIdentity identity() const override {
    return {"lexical-cosine", "1"};
  }
};

struct RemoteScorerConfig {
  std::string url;  // full endpoint URL, POSTed to directly
  std::chrono::milliseconds timeout{30'000};
  RetryPolicy retry;
};

struct RemoteScore {
  double f1 = 0.0;
  std::string model;
};

/// POSTs {"candidate", "reference"} and reads {"f1", "model"}.
/// Network failures and 429/5xx are retried; a malformed body throws
/// Error(protocol) without retry, as does an f1 outside [0, 1].
RemoteScore remote_semantic_score(std::string_view candidate,
                                  std::string_view reference,
                                  const RemoteScorerConfig& config,
                                  HttpTransport& transport,
                                  const Sleeper& sleep = default_sleeper());

class RemoteScorer final : public SemanticScorer {
 public:
  RemoteScorer(RemoteScorerConfig config,
               std::shared_ptr<HttpTransport> transport,
               Sleeper sleep = default_sleeper());

  double score(std::string_view candidate,
               std::string_view reference) const override;

  /// name is "remote:<url>"; version is the model the service last
  /// reported, or "unknown" before the first call.
  ScorerIdentity identity() const override;

 private:
  RemoteScorerConfig config_;
  std::shared_ptr<HttpTransport> transport_;
  Sleeper sleep_;
  mutable std::mutex mu_;
  mutable std::string model_ = "unknown";
};

struct FidelityScores {
  PrecisionRecall rouge1;
  PrecisionRecall rouge2;
  double bleu = 0.0;
  double semantic_f1 = 0.0;
  double composite = 0.0;

  friend bool operator==(const FidelityScores&,
                         const FidelityScores&) = default;
};

/// Full suite for one candidate/reference pair; `fre` is the candidate's
/// readability, used only for the composite.
FidelityScores score_fidelity(std::string_view candidate,
                              std::string_view reference, double fre,
                              const SemanticScorer& scorer,
                              CompositeWeights weights = {});

}  // namespace lexipipe
