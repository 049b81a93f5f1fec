// Copyright 2026 The lexipipe Authors
// SPDX-License-Identifier: Apache-2.0

#include "lexipipe/fidelity_metrics.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "lexipipe/error.hpp"
#include "lexipipe/text_analysis.hpp"

namespace lexipipe {

namespace {

using json = nlohmann::json;

std::string fold_case(std::string_view s) {
  std::string out(s);
  for (char& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

void require_reference(std::span<const std::string> reference) {
  if (reference.empty())
    throw Error(ErrorCode::unscorable_text,
                "unscorable pair: reference has no tokens");
}

std::int64_t clipped_overlap(const NGramProfile& candidate,
                             const NGramProfile& reference) {
  std::int64_t overlap = 0;
  for (const auto& [gram, count] : candidate.counts) {
    const auto it = reference.counts.find(gram);
    if (it != reference.counts.end()) overlap += std::min(count, it->second);
  }
  return overlap;
}

}  // namespace

std::int64_t NGramProfile::total() const {
  std::int64_t sum = 0;
  for (const auto& [gram, count] : counts) sum += count;
  return sum;
}

NGramProfile ngram_profile(std::span<const std::string> tokens, int n) {
  if (n < 1)
    throw Error(ErrorCode::invalid_argument,
                "n-gram order must be >= 1, got " + std::to_string(n));
  NGramProfile profile;
  profile.order = n;
  const auto order = static_cast<std::size_t>(n);
  if (tokens.size() < order) return profile;
  std::vector<std::string> folded;
  folded.reserve(tokens.size());
  for (const auto& t : tokens) folded.push_back(fold_case(t));
  for (std::size_t i = 0; i + order <= folded.size(); ++i) {
    std::vector<std::string> gram(folded.begin() + i,
                                  folded.begin() + i + order);
    ++profile.counts[std::move(gram)];
  }
  return profile;
}

PrecisionRecall rouge_n(std::span<const std::string> candidate,
                        std::span<const std::string> reference, int n) {
  require_reference(reference);
  const NGramProfile ref = ngram_profile(reference, n);
  if (candidate.empty()) return {};
  const NGramProfile cand = ngram_profile(candidate, n);
  const std::int64_t overlap = clipped_overlap(cand, ref);
  const std::int64_t cand_total = cand.total();
  const std::int64_t ref_total = ref.total();

  PrecisionRecall pr;
  if (cand_total > 0)
    pr.precision =
        static_cast<double>(overlap) / static_cast<double>(cand_total);
  if (ref_total > 0)
    pr.recall = static_cast<double>(overlap) / static_cast<double>(ref_total);
  if (pr.precision + pr.recall > 0.0)
    pr.f1 = 2.0 * pr.precision * pr.recall / (pr.precision + pr.recall);
  return pr;
}

double bleu(std::span<const std::string> candidate,
            std::span<const std::string> reference, int max_n) {
  require_reference(reference);
  if (max_n < 1)
    throw Error(ErrorCode::invalid_argument, "BLEU max_n must be >= 1");
  if (candidate.empty()) return 0.0;

  double log_sum = 0.0;
  for (int n = 1; n <= max_n; ++n) {
    const NGramProfile cand = ngram_profile(candidate, n);
    const NGramProfile ref = ngram_profile(reference, n);
    const std::int64_t matches = clipped_overlap(cand, ref);
    const std::int64_t total = cand.total();
    // Only higher orders are smoothed; no shared word at all scores 0.
    if (n == 1 && matches == 0) return 0.0;
    const double precision =
        matches > 0
            ? static_cast<double>(matches) / static_cast<double>(total)
            : 1.0 / static_cast<double>(total + 1);
    log_sum += std::log(precision);
  }
  const double geo_mean = std::exp(log_sum / static_cast<double>(max_n));
  const auto c = static_cast<double>(candidate.size());
  const auto r = static_cast<double>(reference.size());
  const double brevity = c < r ? std::exp(1.0 - r / c) : 1.0;
  return std::clamp(geo_mean * brevity, 0.0, 1.0);
}

double lexical_semantic_score(std::span<const std::string> candidate,
                              std::span<const std::string> reference) {
  require_reference(reference);
  if (candidate.empty()) return 0.0;
  const NGramProfile a = ngram_profile(candidate, 1);
  const NGramProfile b = ngram_profile(reference, 1);
  if (a.counts == b.counts) return 1.0;

  double dot = 0.0;
  for (const auto& [gram, count] : a.counts) {
    const auto it = b.counts.find(gram);
    if (it != b.counts.end())
      dot += static_cast<double>(count) * static_cast<double>(it->second);
  }
  auto norm = [](const NGramProfile& p) {
    double sq = 0.0;
    for (const auto& [gram, count] : p.counts)
      sq += static_cast<double>(count) * static_cast<double>(count);
    return std::sqrt(sq);
  };
  return std::clamp(dot / (norm(a) * norm(b)), 0.0, 1.0);
}

double composite_score(double fre, double semantic_f1,
                       CompositeWeights weights) {
  if (!(semantic_f1 >= 0.0 && semantic_f1 <= 1.0))
    throw Error(ErrorCode::invalid_argument,
                "semantic_f1 must lie in [0, 1], got " +
                    std::to_string(semantic_f1));
  const double readability = std::clamp(fre / 100.0, 0.0, 1.0);
  return std::clamp(
      weights.readability * readability + weights.fidelity * semantic_f1, 0.0,
      1.0);
}

double LexicalScorer::score(std::string_view candidate,
                            std::string_view reference) const {
  return lexical_semantic_score(tokenize_words(candidate),
                                tokenize_words(reference));
}

RemoteScore remote_semantic_score(std::string_view candidate,
                                  std::string_view reference,
                                  const RemoteScorerConfig& config,
                                  HttpTransport& transport,
                                  const Sleeper& sleep) {
  if (candidate.empty() || reference.empty())
    throw Error(ErrorCode::invalid_argument,
                "remote scorer needs non-empty candidate and reference");
  HttpRequest request;
  request.url = config.url;
  request.timeout = config.timeout;
  request.headers = {{"Content-Type", "application/json"}};
  request.body = json{{"candidate", std::string(candidate)},
                      {"reference", std::string(reference)}}
                     .dump();

  const HttpResponse response =
      with_retries(config.retry, sleep, [&] {
        HttpResponse r = transport.post(request);
        if (r.status == 408 || r.status == 429 || r.status >= 500)
          throw Error(ErrorCode::transient,
                      "scorer service returned HTTP " +
                          std::to_string(r.status));
        return r;
      });
  if (response.status != 200)
    throw Error(ErrorCode::backend, "scorer service returned HTTP " +
                                        std::to_string(response.status));

  const json body = json::parse(response.body, nullptr, false);
  if (body.is_discarded() || !body.is_object() || !body.contains("f1") ||
      !body["f1"].is_number())
    throw Error(ErrorCode::protocol,
                "scorer service returned a malformed body: " +
                    response.body.substr(0, 200));
  RemoteScore score;
  score.f1 = body["f1"].get<double>();
  if (!(score.f1 >= 0.0 && score.f1 <= 1.0))
    throw Error(ErrorCode::protocol, "scorer service returned f1 = " +
                                         std::to_string(score.f1) +
                                         " outside [0, 1]");
  if (body.contains("model") && body["model"].is_string())
    score.model = body["model"].get<std::string>();
  return score;
}

RemoteScorer::RemoteScorer(RemoteScorerConfig config,
                           std::shared_ptr<HttpTransport> transport,
                           Sleeper sleep)
    : config_(std::move(config)),
      transport_(std::move(transport)),
      sleep_(std::move(sleep)) {}

double RemoteScorer::score(std::string_view candidate,
                           std::string_view reference) const {
  RemoteScore s =
      remote_semantic_score(candidate, reference, config_, *transport_, sleep_);
  if (!s.model.empty()) {
    std::lock_guard lock(mu_);
    model_ = std::move(s.model);
  }
  return s.f1;
}

ScorerIdentity RemoteScorer::identity() const {
  std::lock_guard lock(mu_);
  return {"remote:" + config_.url, model_};
}

FidelityScores score_fidelity(std::string_view candidate,
                              std::string_view reference, double fre,
                              const SemanticScorer& scorer,
                              CompositeWeights weights) {
  const std::vector<std::string> cand = tokenize_words(candidate);
  const std::vector<std::string> ref = tokenize_words(reference);
  FidelityScores scores;
  scores.rouge1 = rouge_n(cand, ref, 1);
  scores.rouge2 = rouge_n(cand, ref, 2);
  scores.bleu = bleu(cand, ref);
  scores.semantic_f1 = scorer.score(candidate, reference);
  scores.composite = composite_score(fre, scores.semantic_f1, weights);
  return scores;
}

}  // namespace lexipipe
