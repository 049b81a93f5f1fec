// Copyright 2026 The lexipipe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "lexipipe/fidelity_metrics.hpp"
#include "lexipipe/refinement.hpp"
#include "lexipipe/summarizer.hpp"

namespace lexipipe {

/// Every recognized setting key, in snapshot order.
const std::vector<std::string_view>& setting_keys();

/// Flat key/value view of everything a run needs. Values are validated when
/// set, so a Settings object never holds an unparsable value. Layering is
/// up to the caller: apply defaults, then file, then environment, then
/// flags, each overwriting the last.
class Settings {
 public:
  Settings();  // defaults

  /// Throws Error(config) for an unknown key or a malformed value.
  void set(std::string_view key, std::string_view value);
  const std::string& get(std::string_view key) const;

  /// key=value lines; '#' starts a comment, blank lines are skipped.
  /// Throws Error(io) if unreadable, Error(config) naming the bad line.
  void load_file(const std::filesystem::path& path);
  void load_text(std::string_view contents, std::string_view source_name);

  /// LEXIPIPE_<KEY> for each key (upper-cased), e.g. LEXIPIPE_MAX_ATTEMPTS.
  /// LEXIPIPE_API_KEY supplies api_key.
  using EnvLookup = std::function<std::optional<std::string>(const char*)>;
  void apply_env(const EnvLookup& lookup);
  void apply_env();  // process environment

  /// Typed snapshot; api_key is reported only as set or unset.
  nlohmann::json snapshot() const;

  /// Loads few-shot examples from few_shot_file when few_shot is on.
  PipelineConfig pipeline_config() const;
  LlmEndpointConfig endpoint_config() const;
  MockOptions mock_options() const;

  int parallelism() const;

 private:
  std::map<std::string, std::string, std::less<>> values_;
};

/// Backend and scorer built from Settings, owned together.
class Session {
 public:
  /// Throws Error(config) for an unusable pipeline or scorer selection.
  explicit Session(const Settings& settings);

  const Settings& settings() const { return settings_; }
  const PipelineConfig& config() const { return config_; }
  /// Built on first use. Throws Error(credential) for the live backend
  /// without an api_key. Not safe to race with itself.
  SummarizerBackend& backend();
  const SemanticScorer& scorer() const { return *scorer_; }

 private:
  Settings settings_;
  PipelineConfig config_;
  std::unique_ptr<SummarizerBackend> backend_;
  std::unique_ptr<SemanticScorer> scorer_;
};

}  // namespace lexipipe
