// Copyright 2026 The lexipipe Authors
// SPDX-License-Identifier: Apache-2.0

#include <fstream>
#include <map>

#include "doctest.h"
#include "lexipipe/error.hpp"
#include "lexipipe/settings.hpp"

using namespace lexipipe;

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

Settings::EnvLookup env(std::map<std::string, std::string> vars) {
  return [vars = std::move(vars)](const char* name) -> std::optional<std::string> {
    const auto it = vars.find(name);
    if (it == vars.end()) return std::nullopt;
    return it->second;
  };
}

}  // namespace

TEST_SUITE("settings") {

TEST_CASE("defaults") {
  Settings s;
  CHECK(s.get("backend") == "mock");
  CHECK(s.get("scorer") == "lexical");
  const auto cfg = s.pipeline_config();
  CHECK(cfg == PipelineConfig{});
  CHECK(s.mock_options().lead_sentences == 5);
  CHECK(s.endpoint_config().max_in_flight == 4);
  CHECK(s.snapshot()["api_key"] == "unset");
  CHECK(s.snapshot().size() == setting_keys().size());
}

TEST_CASE("values are validated when set") {
  Settings s;
  CHECK(code_of([&] { s.set("nope", "1"); }) == ErrorCode::config);
  CHECK(code_of([&] { s.set("max_attempts", "0"); }) == ErrorCode::config);
  CHECK(code_of([&] { s.set("max_attempts", "four"); }) == ErrorCode::config);
  CHECK(code_of([&] { s.set("backend", "remote"); }) == ErrorCode::config);
  CHECK(code_of([&] { s.set("target_fre", "high"); }) == ErrorCode::config);
  CHECK(code_of([&] { s.set("few_shot", "maybe"); }) == ErrorCode::config);
  s.set("few_shot", "YES");
  CHECK(s.get("few_shot") == "true");
  s.set("seed", "");
  CHECK(s.snapshot()["seed"].is_null());
}

TEST_CASE("precedence: file < environment < explicit") {
  Settings s;
  s.load_text("# comment\nmax_attempts = 6\ntarget_fre=85\nstopping=dynamic\n",
              "cfg");
  s.apply_env(env({{"LEXIPIPE_MAX_ATTEMPTS", "5"},
                   {"LEXIPIPE_API_KEY", "secret"}}));
  s.set("target_fre", "80");
  const auto cfg = s.pipeline_config();
  CHECK(cfg.max_attempts == 5);
  CHECK(cfg.fre_target == 80.0);
  CHECK(cfg.stopping == StoppingMode::dynamic_composite);
  CHECK(s.endpoint_config().api_key == "secret");
  CHECK(s.snapshot()["api_key"] == "set");
  CHECK(s.snapshot().dump().find("secret") == std::string::npos);
}

TEST_CASE("config file errors name the line") {
  Settings s;
  try {
    s.load_text("backend=mock\nthis line is wrong\n", "my.cfg");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::config);
    CHECK(std::string(e.what()).find("my.cfg:2") != std::string::npos);
  }
  CHECK(code_of([&] { s.load_file("/nonexistent.cfg"); }) == ErrorCode::io);
  CHECK(code_of([&] {
          s.apply_env(env({{"LEXIPIPE_PARALLELISM", "-1"}}));
        }) == ErrorCode::config);
}

TEST_CASE("few-shot examples") {
  Settings s;
  s.set("few_shot", "true");
  CHECK(s.pipeline_config().few_shot_examples.size() == 2);
  const auto path = std::filesystem::temp_directory_path() / "lp_settings_fs.jsonl";
  {
    std::ofstream out(path);
    out << R"({"source": "a", "summary": "b"})" << "\n";
  }
  s.set("few_shot_file", path.string());
  CHECK(s.pipeline_config().few_shot_examples ==
        std::vector<FewShotExample>{{"a", "b"}});
  std::filesystem::remove(path);
}

TEST_CASE("sessions") {
  Settings s;
  Session mock(s);
  CHECK(mock.backend().id() == "mock:monotone:k5");
  CHECK(mock.scorer().identity().name == "lexical-cosine");

  s.set("backend", "live");
  Session live(s);  // the backend is built lazily
  CHECK(code_of([&] { live.backend(); }) == ErrorCode::credential);
  s.set("api_key", "k");
  Session keyed(s);
  CHECK(keyed.backend().id() == "live:gpt-4o");

  Settings r;
  r.set("scorer", "remote:http://127.0.0.1:9/score");
  Session remote(r);
  CHECK(remote.scorer().identity().name == "remote:http://127.0.0.1:9/score");
  r.set("scorer", "bertscore");
  CHECK(code_of([&] { Session bad(r); }) == ErrorCode::config);
  r.set("scorer", "remote:no-scheme");
  CHECK(code_of([&] { Session bad(r); }) == ErrorCode::config);

  Settings w;
  w.set("w_readability", "0.9");
  CHECK(code_of([&] { Session bad(w); }) == ErrorCode::config);
}

}  // TEST_SUITE
