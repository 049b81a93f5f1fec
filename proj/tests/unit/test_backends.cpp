// Copyright 2026 The lexipipe Authors
// SPDX-License-Identifier: Apache-2.0

#include <atomic>
#include <fstream>
#include <thread>

#include "doctest.h"
#include "fakes.hpp"
#include "httplib.h"
#include "lexipipe/error.hpp"
#include "lexipipe/summarizer.hpp"

using namespace lexipipe;
using fakes::completion;
using fakes::ScriptedTransport;
using nlohmann::json;
using std::chrono::milliseconds;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected lexipipe::Error");
  return ErrorCode::internal;
}

SummarizeRequest simple_request() {
  SummarizeRequest r;
  r.instruction = "Summarize.";
  r.article = "An article. It has two sentences.";
  return r;
}

LlmEndpointConfig endpoint(const std::string& base = "http://fake.local") {
  LlmEndpointConfig c;
  c.base_url = base;
  c.model = "test-model";
  c.api_key = "sk-test";
  return c;
}

}  // namespace

TEST_SUITE("summarizer_backends") {

TEST_CASE("retry policy backoff") {
  RetryPolicy p;
  CHECK(p.backoff(1) == milliseconds(500));
  CHECK(p.backoff(2) == milliseconds(1000));
  CHECK(p.backoff(3) == milliseconds(2000));
  CHECK(p.backoff(10) == milliseconds(8000));
}

TEST_CASE("split_base_url") {
  CHECK(split_base_url("https://api.example.com/v1/x") ==
        std::pair<std::string, std::string>{"https://api.example.com", "/v1/x"});
  CHECK(split_base_url("http://127.0.0.1:8080").second == "/");
  CHECK(code_of([] { split_base_url("api.example.com"); }) == ErrorCode::config);
}

TEST_CASE("chat message order") {
  SummarizeRequest r = simple_request();
  r.few_shot_examples = {{"src1", "sum1"}, {"src2", "sum2"}};
  r.history = {{"draft one", "simplify more"}};
  const auto m = build_chat_messages(r);
  const std::vector<ChatMessage> want = {
      {"system", "Summarize."}, {"user", "src1"},      {"assistant", "sum1"},
      {"user", "src2"},         {"assistant", "sum2"}, {"user", r.article},
      {"assistant", "draft one"}, {"user", "simplify more"}};
  CHECK(m == want);
}

TEST_CASE("request validation") {
  SummarizeRequest r = simple_request();
  r.article = "";
  CHECK(code_of([&] { r.validate(); }) == ErrorCode::invalid_argument);
  r = simple_request();
  r.instruction = "";
  CHECK(code_of([&] { r.validate(); }) == ErrorCode::invalid_argument);
}

TEST_CASE("live client: 429 then 200 succeeds after one backoff") {
  auto transport = std::make_shared<ScriptedTransport>(
      std::vector<HttpResponse>{{429, "slow down", {}}, completion("Short text.")});
  fakes::RecordingSleeper sleeper;
  LlmBackend backend(endpoint(), transport, sleeper.fn());
  const auto out = backend.summarize(simple_request());
  CHECK(out.summary == "Short text.");
  CHECK(out.backend_id == "live:test-model");
  REQUIRE(out.usage.has_value());
  CHECK(out.usage->input_tokens == 12);
  CHECK(transport->requests.size() == 2);
  CHECK(sleeper.calls == std::vector<milliseconds>{milliseconds(500)});
}

TEST_CASE("live client: error mapping") {
  fakes::RecordingSleeper sleeper;
  auto run = [&](std::vector<HttpResponse> script) {
    auto t = std::make_shared<ScriptedTransport>(std::move(script));
    LlmBackend backend(endpoint(), t, sleeper.fn());
    return code_of([&] { backend.summarize(simple_request()); });
  };
  CHECK(run({{401, "", {}}}) == ErrorCode::credential);
  CHECK(run({{403, "", {}}}) == ErrorCode::credential);
  CHECK(run({{400, "bad", {}}}) == ErrorCode::backend);
  CHECK(run({{200, "not json", {}}}) == ErrorCode::protocol);
  CHECK(run({{200, R"({"choices": []})", {}}}) == ErrorCode::protocol);
  CHECK(run({completion("   ")}) == ErrorCode::backend);
  sleeper.calls.clear();
  CHECK(run({{503, "", {}}, {0, "", {}}, {500, "", {}}}) == ErrorCode::transient);
  CHECK(sleeper.calls ==
        std::vector<milliseconds>{milliseconds(500), milliseconds(1000)});
}

TEST_CASE("live client: needs credentials and a model") {
  auto cfg = endpoint();
  cfg.api_key = "";
  CHECK(code_of([&] { LlmBackend b(cfg); }) == ErrorCode::credential);
  cfg = endpoint();
  cfg.model = "";
  CHECK(code_of([&] { LlmBackend b(cfg); }) == ErrorCode::config);
}

TEST_CASE("live client: payload shape against a local server") {
  httplib::Server server;
  json seen_body;
  std::string seen_auth, seen_path;
  server.Post("/v1/chat/completions",
              [&](const httplib::Request& req, httplib::Response& res) {
                seen_body = json::parse(req.body);
                seen_auth = req.get_header_value("Authorization");
                seen_path = req.path;
                res.set_content(completion("Plain words.").body,
                                "application/json");
              });
  const int port = server.bind_to_any_port("127.0.0.1");
  std::thread serve([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  LlmBackend backend(endpoint("http://127.0.0.1:" + std::to_string(port)));
  SummarizeRequest r = simple_request();
  r.params.temperature = 0.2;
  r.params.max_output_tokens = 64;
  r.params.seed = 7;
  r.few_shot_examples = {{"src", "sum"}};
  const auto out = backend.summarize(r);
  server.stop();
  serve.join();

  CHECK(out.summary == "Plain words.");
  CHECK(seen_path == "/v1/chat/completions");
  CHECK(seen_auth == "Bearer sk-test");
  std::vector<std::string> keys;
  for (const auto& [k, v] : seen_body.items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"max_tokens", "messages", "model",
                                         "seed", "temperature"});
  CHECK(seen_body["model"] == "test-model");
  CHECK(seen_body["temperature"] == 0.2);
  CHECK(seen_body["max_tokens"] == 64);
  CHECK(seen_body["seed"] == 7);
  REQUIRE(seen_body["messages"].size() == 4);
  CHECK(seen_body["messages"][0] == json{{"role", "system"}, {"content", "Summarize."}});
  CHECK(seen_body["messages"][3]["content"] == r.article);
  for (const auto& m : seen_body["messages"]) CHECK(m.size() == 2);

  // Without a seed the field is absent.
  r.params.seed.reset();
  CHECK_FALSE(json::parse(backend.request_body(r)).contains("seed"));
}

TEST_CASE("live client: bounded in-flight requests") {
  struct SlowTransport : HttpTransport {
    std::atomic<int> active{0}, peak{0};
    HttpResponse post(const HttpRequest&) override {
      const int now = ++active;
      int prev = peak.load();
      while (now > prev && !peak.compare_exchange_weak(prev, now)) {
      }
      std::this_thread::sleep_for(milliseconds(20));
      --active;
      return completion("ok.");
    }
  };
  auto transport = std::make_shared<SlowTransport>();
  auto cfg = endpoint();
  cfg.max_in_flight = 2;
  LlmBackend backend(cfg, transport);
  {
    std::vector<std::jthread> threads;
    for (int i = 0; i < 8; ++i)
      threads.emplace_back([&] { backend.summarize(simple_request()); });
  }
  CHECK(transport->peak.load() <= 2);
  CHECK(transport->peak.load() >= 1);
}

TEST_CASE("remote scorer") {
  fakes::RecordingSleeper sleeper;
  RemoteScorerConfig cfg{"http://scorer.local/score", milliseconds(100), {}};
  auto t = std::make_shared<ScriptedTransport>(std::vector<HttpResponse>{
      {503, "", {}}, {200, R"({"f1": 0.91, "model": "roberta-large"})", {}}});
  RemoteScorer scorer(cfg, t, sleeper.fn());
  CHECK(scorer.identity().version == "unknown");
  CHECK(scorer.score("a", "b") == 0.91);
  CHECK(scorer.identity() ==
        ScorerIdentity{"remote:http://scorer.local/score", "roberta-large"});
  CHECK(json::parse(t->requests.back().body) ==
        json{{"candidate", "a"}, {"reference", "b"}});
  CHECK(sleeper.calls.size() == 1);

  auto run = [&](HttpResponse r) {
    auto tr = std::make_shared<ScriptedTransport>(std::vector<HttpResponse>{r});
    RemoteScorer s(cfg, tr, sleeper.fn());
    return code_of([&] { s.score("a", "b"); });
  };
  CHECK(run({200, R"({"f1": 1.5, "model": "m"})", {}}) == ErrorCode::protocol);
  CHECK(run({200, R"({"model": "m"})", {}}) == ErrorCode::protocol);
  CHECK(run({200, "<html>", {}}) == ErrorCode::protocol);
  CHECK(run({404, "", {}}) == ErrorCode::backend);
}

TEST_CASE("few-shot example files") {
  const auto path = std::filesystem::temp_directory_path() / "lp_fewshot.jsonl";
  {
    std::ofstream out(path);
    out << R"({"source": "s1", "summary": "t1"})" << "\n\n"
        << R"({"source": "s2", "summary": "t2"})" << "\n";
  }
  CHECK(load_few_shot_examples(path) ==
        std::vector<FewShotExample>{{"s1", "t1"}, {"s2", "t2"}});
  {
    std::ofstream out(path);
    out << R"({"source": "s1"})" << "\n";
  }
  CHECK(code_of([&] { load_few_shot_examples(path); }) == ErrorCode::config);
  CHECK(code_of([] { load_few_shot_examples("/nonexistent.jsonl"); }) ==
        ErrorCode::config);
  std::filesystem::remove(path);
}

}  // TEST_SUITE
