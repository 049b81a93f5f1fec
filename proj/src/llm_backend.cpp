// Copyright 2026 The lexipipe Authors
// SPDX-License-Identifier: Apache-2.0

#include <fstream>

#include "json.hpp"
#include "lexipipe/error.hpp"
#include "lexipipe/summarizer.hpp"

namespace lexipipe {

namespace {

using json = nlohmann::json;

class SlotGuard {
 public:
  explicit SlotGuard(std::counting_semaphore<>& sem) : sem_(sem) {
    sem_.acquire();
  }
  ~SlotGuard() { sem_.release(); }
  SlotGuard(const SlotGuard&) = delete;
  SlotGuard& operator=(const SlotGuard&) = delete;

 private:
  std::counting_semaphore<>& sem_;
};

bool is_blank(const std::string& s) {
  return s.find_first_not_of(" \t\r\n") == std::string::npos;
}

std::string chat_url(std::string base) {
  while (!base.empty() && base.back() == '/') base.pop_back();
  return base + "/v1/chat/completions";
}

}  // namespace

void SummarizeRequest::validate() const {
  if (instruction.empty())
    throw Error(ErrorCode::invalid_argument, "summarize: empty instruction");
  if (article.empty())
    throw Error(ErrorCode::invalid_argument, "summarize: empty article");
}

std::vector<ChatMessage> build_chat_messages(const SummarizeRequest& request) {
  std::vector<ChatMessage> messages;
  messages.push_back({"system", request.instruction});
  for (const auto& ex : request.few_shot_examples) {
    messages.push_back({"user", ex.source});
    messages.push_back({"assistant", ex.summary});
  }
  messages.push_back({"user", request.article});
  for (const auto& turn : request.history) {
    messages.push_back({"assistant", turn.summary});
    messages.push_back({"user", turn.follow_up});
  }
  return messages;
}

LlmBackend::LlmBackend(LlmEndpointConfig config,
                       std::shared_ptr<HttpTransport> transport, Sleeper sleep)
    : config_(std::move(config)),
      transport_(std::move(transport)),
      sleep_(std::move(sleep)),
      in_flight_(std::max(1, config_.max_in_flight)) {
  if (config_.api_key.empty())
    throw Error(ErrorCode::credential,
                "live backend needs an API key (set LEXIPIPE_API_KEY)");
  if (config_.model.empty())
    throw Error(ErrorCode::config, "live backend needs a model name");
  split_base_url(config_.base_url);  // validates the scheme
}

std::string LlmBackend::request_body(const SummarizeRequest& request) const {
  json messages = json::array();
  for (const auto& m : build_chat_messages(request))
    messages.push_back({{"role", m.role}, {"content", m.content}});
  json body = {{"model", config_.model},
               {"messages", std::move(messages)},
               {"temperature", request.params.temperature},
               {"max_tokens", request.params.max_output_tokens}};
  if (request.params.seed) body["seed"] = *request.params.seed;
  return body.dump();
}

SummarizeResponse LlmBackend::summarize(const SummarizeRequest& request) {
  request.validate();
  HttpRequest http;
  http.url = chat_url(config_.base_url);
  http.timeout = config_.timeout;
  http.headers = {{"Content-Type", "application/json"},
                  {"Authorization", "Bearer " + config_.api_key}};
  http.body = request_body(request);

  const HttpResponse response = with_retries(config_.retry, sleep_, [&] {
    HttpResponse r;
    {
      SlotGuard slot(in_flight_);
      r = transport_->post(http);
    }
    if (r.status == 408 || r.status == 429 || r.status >= 500)
      throw Error(ErrorCode::transient,
                  "chat endpoint returned HTTP " + std::to_string(r.status));
    return r;
  });

  if (response.status == 401 || response.status == 403)
    throw Error(ErrorCode::credential,
                "chat endpoint rejected the credential (HTTP " +
                    std::to_string(response.status) + ")");
  if (response.status != 200)
    throw Error(ErrorCode::backend,
                "chat endpoint returned HTTP " +
                    std::to_string(response.status) + ": " +
                    response.body.substr(0, 200));

  const json body = json::parse(response.body, nullptr, false);
  if (body.is_discarded() || !body.is_object())
    throw Error(ErrorCode::protocol, "chat endpoint returned non-JSON body");
  const json* content = nullptr;
  if (body.contains("choices") && body["choices"].is_array() &&
      !body["choices"].empty()) {
    const json& first = body["choices"][0];
    if (first.contains("message") && first["message"].is_object() &&
        first["message"].contains("content"))
      content = &first["message"]["content"];
  }
  if (content == nullptr)
    throw Error(ErrorCode::protocol,
                "chat endpoint response has no choices[0].message.content");
  if (!content->is_string() || is_blank(content->get<std::string>()))
    throw Error(ErrorCode::backend, "chat endpoint returned an empty completion");

  SummarizeResponse out;
  out.summary = content->get<std::string>();
  out.backend_id = id();
  if (body.contains("usage") && body["usage"].is_object()) {
    const json& u = body["usage"];
    TokenUsage usage;
    usage.input_tokens = u.value("prompt_tokens", std::int64_t{0});
    usage.output_tokens = u.value("completion_tokens", std::int64_t{0});
    out.usage = usage;
  }
  return out;
}

std::vector<FewShotExample> load_few_shot_examples(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::config,
                "cannot read few-shot examples: " + path.string());
  std::vector<FewShotExample> examples;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    const json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("source") ||
        !j.contains("summary") || !j["source"].is_string() ||
        !j["summary"].is_string())
      throw Error(ErrorCode::config, path.string() + ":" +
                                         std::to_string(line_no) +
                                         ": expected {\"source\", \"summary\"}");
    examples.push_back(
        {j["source"].get<std::string>(), j["summary"].get<std::string>()});
  }
  return examples;
}

}  // namespace lexipipe
