// Copyright 2026 The lexipipe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <semaphore>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lexipipe/http.hpp"

namespace lexipipe {

struct FewShotExample {
  std::string source;
  std::string summary;

  friend bool operator==(const FewShotExample&,
                         const FewShotExample&) = default;
};

struct GenerationParams {
  double temperature = 0.3;
  int max_output_tokens = 512;
  std::optional<std::int64_t> seed;

  friend bool operator==(const GenerationParams&,
                         const GenerationParams&) = default;
};

/// One earlier round of a refinement conversation: what the model answered
/// and the follow-up prompt it was sent.
struct ConversationTurn {
  std::string summary;
  std::string follow_up;
};

struct SummarizeRequest {
  std::string instruction;
  std::string article;
  std::vector<FewShotExample> few_shot_examples;
  std::vector<ConversationTurn> history;
  GenerationParams params;

  /// Throws Error(invalid_argument) on an empty instruction or article.
  void validate() const;
};

struct TokenUsage {
  std::int64_t input_tokens = 0;
  std::int64_t output_tokens = 0;
};

struct SummarizeResponse {
  std::string summary;
  std::string backend_id;
  std::optional<TokenUsage> usage;
};

/// Contract every summarizer honours. Implementations must be safe to call
/// from several threads at once. Failures surface as lexipipe::Error; only
/// ErrorCode::transient is worth retrying.
class SummarizerBackend {
 public:
  virtual ~SummarizerBackend() = default;
  virtual SummarizeResponse summarize(const SummarizeRequest& request) = 0;
  virtual std::string id() const = 0;
};

// --- chat-completion client -------------------------------------------------

struct ChatMessage {
  std::string role;
  std::string content;

  friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

/// system: instruction; then each few-shot pair as user/assistant; then the
/// article as user; then each history turn as assistant/user.
std::vector<ChatMessage> build_chat_messages(const SummarizeRequest& request);

struct LlmEndpointConfig {
  std::string base_url = "https://api.openai.com";
  std::string model = "gpt-4o";
  std::string api_key;
  std::chrono::milliseconds timeout{120'000};
  RetryPolicy retry;
  int max_in_flight = 4;
};

/// OpenAI-compatible client: POST <base_url>/v1/chat/completions.
///
/// 401/403 -> Error(credential); 408/429/5xx and network failures are
/// retried with exponential backoff, then surface as Error(transient);
/// other statuses and empty completions -> Error(backend); unparsable
/// bodies -> Error(protocol).
class LlmBackend final : public SummarizerBackend {
 public:
  /// Throws Error(credential) when no API key is configured.
  LlmBackend(LlmEndpointConfig config,
             std::shared_ptr<HttpTransport> transport = make_http_transport(),
             Sleeper sleep = default_sleeper());

  SummarizeResponse summarize(const SummarizeRequest& request) override;
  std::string id() const override { return "live:" + config_.model; }

  /// The JSON body sent for `request`.
  std::string request_body(const SummarizeRequest& request) const;

 private:
  LlmEndpointConfig config_;
  std::shared_ptr<HttpTransport> transport_;
  Sleeper sleep_;
  std::counting_semaphore<> in_flight_;
};

// --- deterministic mock ------------------------------------------------------

/// Word-level rewrite table, hard form -> plain form. Keys are lowercase
/// single tokens; values may span several words.
class SimplificationLexicon {
 public:
  SimplificationLexicon() = default;

  /// data/simplification_lexicon.tsv, compiled into the library.
  static const SimplificationLexicon& builtin();

  /// Tab-separated "hard<TAB>plain" lines; '#' starts a comment line.
  static SimplificationLexicon parse(std::string_view contents);
  static SimplificationLexicon from_file(const std::filesystem::path& path);

  const std::string* find(std::string_view word) const;
  std::size_t size() const noexcept { return entries_.size(); }

 private:
  std::unordered_map<std::string, std::string> entries_;
};

enum class MockProfile {
  monotone,
  /// On even attempts (odd round hints) the sentence-split rule runs in
  /// reverse: neighbouring sentences are re-joined, so readability drops
  /// before the next round recovers it.
  oscillating,
};

struct MockOptions {
  int lead_sentences = 5;
  MockProfile profile = MockProfile::monotone;
};

/// Rule-based simplifier standing in for an LLM. Keeps the first
/// `lead_sentences` sentences of the article, then runs one rewrite pass per
/// round: split sentences over 15 words at the conjunction or comma nearest
/// their middle, then swap words through the lexicon. A rewrite is kept only
/// if neither words/sentence nor syllables/word rises above the pass's
/// starting value, so readability never drops from one round to the next
/// under the monotone profile.
class MockBackend final : public SummarizerBackend {
 public:
  explicit MockBackend(
      MockOptions options = {},
      SimplificationLexicon lexicon = SimplificationLexicon::builtin());

  /// round_hint = number of earlier turns in request.history.
  SummarizeResponse summarize(const SummarizeRequest& request) override;
  std::string id() const override;

  /// Throws Error(invalid_argument) if the article has no sentences.
  SummarizeResponse mock_summarize(const SummarizeRequest& request,
                                   int round_hint) const;

 private:
  MockOptions options_;
  SimplificationLexicon lexicon_;
};

/// Reads JSONL lines of {"source": ..., "summary": ...}.
std::vector<FewShotExample> load_few_shot_examples(
    const std::filesystem::path& path);

}  // namespace lexipipe
