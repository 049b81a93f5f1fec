// Copyright 2026 The lexipipe Authors
// SPDX-License-Identifier: Apache-2.0

#include "lexipipe/settings.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "builtin_resources.hpp"
#include "lexipipe/error.hpp"

namespace lexipipe {

namespace {

using json = nlohmann::json;

enum class Kind { text, choice, integer, real, boolean, optional_integer };

struct KeySpec {
  std::string_view name;
  std::string_view default_value;
  Kind kind;
  std::vector<std::string_view> choices = {};
  long long min_int = 0;
};

const std::vector<KeySpec>& specs() {
  static const std::vector<KeySpec> table = {
      {"backend", "mock", Kind::choice, {"mock", "live"}},
      {"model", "gpt-4o", Kind::text},
      {"base_url", "https://api.openai.com", Kind::text},
      {"api_key", "", Kind::text},
      {"scorer", "lexical", Kind::text},
      {"target_fre", "90", Kind::real},
      {"max_attempts", "4", Kind::integer, {}, 1},
      {"stopping", "fixed", Kind::choice, {"fixed", "dynamic"}},
      {"few_shot", "false", Kind::boolean},
      {"few_shot_file", "", Kind::text},
      {"selection",
       "auto",
       Kind::choice,
       {"auto", "last", "best-composite", "best-fre"}},
      {"w_readability", "0.5", Kind::real},
      {"w_fidelity", "0.5", Kind::real},
      {"temperature", "0.3", Kind::real},
      {"max_tokens", "512", Kind::integer, {}, 1},
      {"seed", "", Kind::optional_integer},
      {"timeout_ms", "120000", Kind::integer, {}, 1},
      {"max_retries", "3", Kind::integer, {}, 1},
      {"max_in_flight", "4", Kind::integer, {}, 1},
      {"mock_sentences", "5", Kind::integer, {}, 1},
      {"mock_profile", "monotone", Kind::choice, {"monotone", "oscillating"}},
      {"mock_lexicon", "", Kind::text},
      {"parallelism", "1", Kind::integer, {}, 1},
      {"checkpoint", "", Kind::text},
      {"out", "results", Kind::text},
      {"format", "text", Kind::choice, {"text", "json"}},
  };
  return table;
}

const KeySpec& spec_for(std::string_view key) {
  for (const auto& s : specs())
    if (s.name == key) return s;
  throw Error(ErrorCode::config, "unknown setting '" + std::string(key) + "'");
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

std::optional<long long> to_integer(std::string_view s) {
  long long v = 0;
  const auto* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || p != end || s.empty()) return std::nullopt;
  return v;
}

std::optional<double> to_real(std::string_view s) {
  if (s.empty()) return std::nullopt;
  const std::string copy(s);
  char* end = nullptr;
  const double v = std::strtod(copy.c_str(), &end);
  if (end != copy.c_str() + copy.size() || !std::isfinite(v))
    return std::nullopt;
  return v;
}

std::optional<bool> to_bool(std::string_view s) {
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "true" || lower == "1" || lower == "yes" || lower == "on")
    return true;
  if (lower == "false" || lower == "0" || lower == "no" || lower == "off")
    return false;
  return std::nullopt;
}

std::string normalize(const KeySpec& spec, std::string_view raw) {
  const std::string_view value = trim(raw);
  auto bad = [&](std::string_view expected) {
    return Error(ErrorCode::config, "invalid value '" + std::string(value) +
                                        "' for " + std::string(spec.name) +
                                        " (expected " + std::string(expected) +
                                        ")");
  };
  switch (spec.kind) {
    case Kind::text:
      return std::string(value);
    case Kind::choice: {
      if (std::find(spec.choices.begin(), spec.choices.end(), value) !=
          spec.choices.end())
        return std::string(value);
      std::string options;
      for (auto c : spec.choices) {
        if (!options.empty()) options += "|";
        options += c;
      }
      throw bad(options);
    }
    case Kind::integer: {
      const auto v = to_integer(value);
      if (!v || *v < spec.min_int)
        throw bad("an integer >= " + std::to_string(spec.min_int));
      return std::to_string(*v);
    }
    case Kind::optional_integer: {
      if (value.empty()) return "";
      const auto v = to_integer(value);
      if (!v) throw bad("an integer");
      return std::to_string(*v);
    }
    case Kind::real: {
      if (!to_real(value)) throw bad("a number");
      return std::string(value);
    }
    case Kind::boolean: {
      const auto v = to_bool(value);
      if (!v) throw bad("true or false");
      return *v ? "true" : "false";
    }
  }
  return std::string(value);
}

std::vector<FewShotExample> builtin_few_shot_examples() {
  std::vector<FewShotExample> out;
  std::istringstream in{std::string(detail::builtin_few_shot_text())};
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const json j = json::parse(line);
    out.push_back({j.at("source").get<std::string>(),
                   j.at("summary").get<std::string>()});
  }
  return out;
}

std::unique_ptr<SemanticScorer> make_scorer(const Settings& s) {
  const std::string& spec = s.get("scorer");
  if (spec == "lexical") return std::make_unique<LexicalScorer>();
  constexpr std::string_view prefix = "remote:";
  if (spec.rfind(prefix, 0) == 0 && spec.size() > prefix.size()) {
    RemoteScorerConfig cfg;
    cfg.url = spec.substr(prefix.size());
    split_base_url(cfg.url);  // validates the scheme
    cfg.timeout = std::chrono::milliseconds(std::stoll(s.get("timeout_ms")));
    cfg.retry.max_attempts = std::stoi(s.get("max_retries"));
    return std::make_unique<RemoteScorer>(std::move(cfg),
                                          make_http_transport());
  }
  throw Error(ErrorCode::config, "invalid scorer '" + spec +
                                     "' (expected lexical or remote:<url>)");
}

}  // namespace

const std::vector<std::string_view>& setting_keys() {
  static const std::vector<std::string_view> keys = [] {
    std::vector<std::string_view> out;
    for (const auto& s : specs()) out.push_back(s.name);
    return out;
  }();
  return keys;
}

Settings::Settings() {
  for (const auto& s : specs()) values_.emplace(s.name, s.default_value);
}

void Settings::set(std::string_view key, std::string_view value) {
  const KeySpec& spec = spec_for(key);
  values_.insert_or_assign(std::string(spec.name), normalize(spec, value));
}

const std::string& Settings::get(std::string_view key) const {
  const auto it = values_.find(key);
  if (it == values_.end())
    throw Error(ErrorCode::config,
                "unknown setting '" + std::string(key) + "'");
  return it->second;
}

void Settings::load_text(std::string_view contents,
                         std::string_view source_name) {
  std::istringstream in{std::string(contents)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto eq = body.find('=');
    try {
      if (eq == std::string_view::npos)
        throw Error(ErrorCode::config, "expected key=value");
      set(trim(body.substr(0, eq)), trim(body.substr(eq + 1)));
    } catch (const Error& e) {
      throw Error(ErrorCode::config, std::string(source_name) + ":" +
                                         std::to_string(line_no) + ": " +
                                         e.what());
    }
  }
}

void Settings::load_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot read config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  load_text(buf.str(), path.string());
}

void Settings::apply_env(const EnvLookup& lookup) {
  for (const auto& s : specs()) {
    std::string var = "LEXIPIPE_";
    for (char c : s.name)
      var.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    if (auto v = lookup(var.c_str())) {
      try {
        set(s.name, *v);
      } catch (const Error& e) {
        throw Error(ErrorCode::config, var + ": " + e.what());
      }
    }
  }
}

void Settings::apply_env() {
  apply_env([](const char* name) -> std::optional<std::string> {
    if (const char* v = std::getenv(name)) return std::string(v);
    return std::nullopt;
  });
}

json Settings::snapshot() const {
  json j = json::object();
  for (const auto& s : specs()) {
    const std::string& v = values_.at(std::string(s.name));
    if (s.name == "api_key") {
      j["api_key"] = v.empty() ? "unset" : "set";
      continue;
    }
    switch (s.kind) {
      case Kind::integer:
        j[std::string(s.name)] = *to_integer(v);
        break;
      case Kind::optional_integer:
        j[std::string(s.name)] = v.empty() ? json(nullptr) : json(*to_integer(v));
        break;
      case Kind::real:
        j[std::string(s.name)] = *to_real(v);
        break;
      case Kind::boolean:
        j[std::string(s.name)] = v == "true";
        break;
      default:
        j[std::string(s.name)] = v;
    }
  }
  return j;
}

PipelineConfig Settings::pipeline_config() const {
  PipelineConfig c;
  c.fre_target = *to_real(get("target_fre"));
  c.max_attempts = static_cast<int>(*to_integer(get("max_attempts")));
  c.weights.readability = *to_real(get("w_readability"));
  c.weights.fidelity = *to_real(get("w_fidelity"));
  c.stopping = parse_stopping_mode(get("stopping"));
  c.few_shot = get("few_shot") == "true";
  if (c.few_shot) {
    const std::string& file = get("few_shot_file");
    c.few_shot_examples =
        file.empty() ? builtin_few_shot_examples() : load_few_shot_examples(file);
  }
  if (get("selection") != "auto")
    c.selection = parse_selection_policy(get("selection"));
  c.generation.temperature = *to_real(get("temperature"));
  c.generation.max_output_tokens =
      static_cast<int>(*to_integer(get("max_tokens")));
  if (!get("seed").empty()) c.generation.seed = *to_integer(get("seed"));
  c.validate();
  return c;
}

LlmEndpointConfig Settings::endpoint_config() const {
  LlmEndpointConfig e;
  e.base_url = get("base_url");
  e.model = get("model");
  e.api_key = get("api_key");
  e.timeout = std::chrono::milliseconds(*to_integer(get("timeout_ms")));
  e.retry.max_attempts = static_cast<int>(*to_integer(get("max_retries")));
  e.max_in_flight = static_cast<int>(*to_integer(get("max_in_flight")));
  return e;
}

MockOptions Settings::mock_options() const {
  MockOptions m;
  m.lead_sentences = static_cast<int>(*to_integer(get("mock_sentences")));
  m.profile = get("mock_profile") == "oscillating" ? MockProfile::oscillating
                                                   : MockProfile::monotone;
  return m;
}

int Settings::parallelism() const {
  return static_cast<int>(*to_integer(get("parallelism")));
}

Session::Session(const Settings& settings)
    : settings_(settings),
      config_(settings.pipeline_config()),
      scorer_(make_scorer(settings_)) {}

SummarizerBackend& Session::backend() {
  if (backend_) return *backend_;
  if (settings_.get("backend") == "live") {
    backend_ = std::make_unique<LlmBackend>(settings_.endpoint_config());
  } else {
    const std::string& lexicon = settings_.get("mock_lexicon");
    backend_ = std::make_unique<MockBackend>(
        settings_.mock_options(),
        lexicon.empty() ? SimplificationLexicon::builtin()
                        : SimplificationLexicon::from_file(lexicon));
  }
  return *backend_;
}

}  // namespace lexipipe
