// Copyright 2026 The lexipipe Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end. Talks to the library only through lexipipe.h.

#include <atomic>
#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "lexipipe/lexipipe.h"

namespace {

using json = nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

std::atomic<bool> g_interrupted{false};

extern "C" void on_sigint(int) { g_interrupted.store(true); }

// Raised with the exit code already decided; main prints and returns it.
struct Exit {
  int code;
  std::string message;
};

int exit_code_for(lp_status status) {
  switch (status) {
    case LP_ERR_INVALID_ARGUMENT:
    case LP_ERR_CONFIG:
    case LP_ERR_CREDENTIAL:
    case LP_ERR_IO:
    case LP_ERR_PARSE:
      return kExitUsage;
    default:
      return kExitRuntime;
  }
}

void check(lp_status status, int code) {
  if (status != LP_OK) throw Exit{code, lp_last_error()};
}

void check(lp_status status) { check(status, exit_code_for(status)); }

class OwnedString {
 public:
  ~OwnedString() { lp_string_free(p_); }
  char** out() { return &p_; }
  std::string str() const { return p_ ? p_ : ""; }

 private:
  char* p_ = nullptr;
};

std::string read_input(const std::string& path) {
  if (path.empty() || path == "-") {
    return {std::istreambuf_iterator<char>(std::cin),
            std::istreambuf_iterator<char>()};
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Exit{kExitUsage, "cannot read " + path};
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct Options {
  std::string config_file;
  std::map<std::string, std::string> flags;  // setting key -> value
  std::vector<std::string> overrides;        // --set key=value
  bool few_shot = false;
};

// defaults < config file < environment < flags
lp_config* resolve_config(const Options& opts) {
  lp_config* config = nullptr;
  check(lp_config_create(&config), kExitUsage);
  try {
    if (!opts.config_file.empty())
      check(lp_config_load_file(config, opts.config_file.c_str()), kExitUsage);
    check(lp_config_apply_env(config), kExitUsage);
    for (const auto& [key, value] : opts.flags)
      check(lp_config_set(config, key.c_str(), value.c_str()), kExitUsage);
    if (opts.few_shot) check(lp_config_set(config, "few_shot", "true"), kExitUsage);
    for (const auto& kv : opts.overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos)
        throw Exit{kExitUsage, "--set expects key=value, got '" + kv + "'"};
      check(lp_config_set(config, kv.substr(0, eq).c_str(),
                          kv.substr(eq + 1).c_str()),
            kExitUsage);
    }
  } catch (...) {
    lp_config_destroy(config);
    throw;
  }
  return config;
}

struct SessionHandle {
  lp_config* config = nullptr;
  lp_session* session = nullptr;
  ~SessionHandle() {
    lp_session_destroy(session);
    lp_config_destroy(config);
  }
  std::string get(const char* key) const {
    OwnedString s;
    check(lp_config_get(config, key, s.out()), kExitUsage);
    return s.str();
  }
};

void open_session(const Options& opts, SessionHandle& h) {
  h.config = resolve_config(opts);
  check(lp_session_create(h.config, &h.session), kExitUsage);
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

void print_scores(const json& j, std::ostream& out) {
  const json& st = j.at("stats");
  out << "fre        " << fixed(j.at("fre").get<double>(), 2) << "\n"
      << "sentences  " << st.at("sentences") << "\n"
      << "words      " << st.at("words") << "\n"
      << "syllables  " << st.at("syllables") << "\n";
  if (!j.contains("fidelity")) return;
  const json& f = j["fidelity"];
  for (const char* n : {"rouge1", "rouge2"}) {
    const json& pr = f.at(n);
    out << n << "     P=" << fixed(pr.at("precision").get<double>(), 4)
        << " R=" << fixed(pr.at("recall").get<double>(), 4)
        << " F1=" << fixed(pr.at("f1").get<double>(), 4) << "\n";
  }
  out << "bleu       " << fixed(f.at("bleu").get<double>(), 4) << "\n"
      << "semantic   " << fixed(f.at("semantic_f1").get<double>(), 4) << " ("
      << j.at("scorer").at("name").get<std::string>() << "/"
      << j.at("scorer").at("version").get<std::string>() << ")\n"
      << "composite  " << fixed(f.at("composite").get<double>(), 4) << "\n";
}

int cmd_score(const Options& opts, const std::string& input,
              const std::string& reference_path) {
  SessionHandle h;
  open_session(opts, h);
  const std::string text = read_input(input);
  std::optional<std::string> reference;
  if (!reference_path.empty()) reference = read_input(reference_path);
  OwnedString out;
  // Scoring happens before any backend work, so every failure is an input
  // problem.
  check(lp_session_score(h.session, text.c_str(),
                         reference ? reference->c_str() : nullptr, out.out()),
        kExitUsage);
  if (h.get("format") == "json") {
    std::cout << out.str() << "\n";
  } else {
    print_scores(json::parse(out.str()), std::cout);
  }
  return kExitOk;
}

int cmd_summarize(const Options& opts, const std::string& article_path,
                  const std::string& reference_path, bool baseline) {
  SessionHandle h;
  open_session(opts, h);
  const std::string article = read_input(article_path);
  std::optional<std::string> reference;
  if (!reference_path.empty()) reference = read_input(reference_path);
  const char* ref = reference ? reference->c_str() : nullptr;
  OwnedString out;
  if (baseline)
    check(lp_session_baseline(h.session, article.c_str(), ref, out.out()));
  else
    check(lp_session_summarize(h.session, article.c_str(), ref, out.out()));

  if (h.get("format") == "json") {
    std::cout << out.str() << "\n";
    return kExitOk;
  }
  const json j = json::parse(out.str());
  if (baseline) {
    std::cout << j.at("summary").get<std::string>() << "\n\n";
    print_scores(j, std::cout);
    return kExitOk;
  }
  for (const auto& a : j.at("attempts")) {
    std::cout << "attempt " << a.at("index") << ": fre "
              << fixed(a.at("fre").get<double>(), 2);
    if (!a.at("composite").is_null())
      std::cout << ", composite " << fixed(a["composite"].get<double>(), 4);
    std::cout << "\n";
  }
  const int final_index = j.at("final_index").get<int>();
  std::cout << "stop: " << j.at("stop_reason").get<std::string>()
            << ", selected attempt " << final_index << " ("
            << j.at("selection_policy").get<std::string>() << ")\n\n"
            << j.at("attempts")
                   .at(static_cast<std::size_t>(final_index - 1))
                   .at("summary")
                   .get<std::string>()
            << "\n";
  return kExitOk;
}

int report_progress(void*, const char*, int) {
  return g_interrupted.load() ? 1 : 0;
}

int cmd_evaluate(const Options& opts, const std::string& corpus_path) {
  SessionHandle h;
  open_session(opts, h);
  const std::string out_dir = h.get("out");
  std::signal(SIGINT, on_sigint);
  OwnedString out;
  check(lp_session_evaluate(h.session, corpus_path.c_str(), out_dir.c_str(),
                            report_progress, nullptr, out.out()));
  const json j = json::parse(out.str());
  if (h.get("format") == "json") {
    std::cout << j.dump(2) << "\n";
    return kExitOk;
  }
  const json& r = j.at("report");
  const auto cached = j.at("cached").get<std::size_t>();
  if (cached > 0) std::cout << "skipped " << cached << " cached\n";
  std::cout << "articles: " << r.at("n_articles") << " scored, "
            << r.at("n_failed") << " failed, " << j.at("evaluated")
            << " evaluated this run\n";
  std::cout << "pass rate at cap: "
            << fixed(r.at("pass_rate_at_cap").get<double>(), 2) << "\n";
  const json& cs = r.at("composite_stats");
  std::cout << "composite: mean " << fixed(cs.at("mean").get<double>(), 3)
            << ", sd " << fixed(cs.at("sd").get<double>(), 3) << ", range "
            << fixed(cs.at("min").get<double>(), 3) << "-"
            << fixed(cs.at("max").get<double>(), 3) << "\n";
  const json& d = r.at("baseline_vs_pipeline");
  std::cout << "mean fre: baseline "
            << fixed(d.at("baseline_mean_fre").get<double>(), 2)
            << ", pipeline "
            << fixed(d.at("pipeline_mean_fre").get<double>(), 2) << "\n";
  const json& hist = r.at("attempt_histogram");
  std::cout << "threshold met by attempt:";
  int attempt = 1;
  for (const auto& c : hist.at("threshold_met_at"))
    std::cout << " " << attempt++ << "=" << c;
  std::cout << "; cap exhausted " << hist.at("cap_exhausted")
            << "; composite declined " << hist.at("composite_declined")
            << "\n";
  std::cout << "report written to " << out_dir << "\n";
  return kExitOk;
}

void add_setting_flag(CLI::App& app, Options& opts, const std::string& flag,
                      const std::string& key, const std::string& help) {
  app.add_option_function<std::string>(
      flag, [&opts, key](const std::string& v) { opts.flags[key] = v; }, help);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Readability-targeted summarization and evaluation", "lexipipe"};
  app.set_version_flag("--version", std::string(lp_version()));
  app.require_subcommand(1);

  Options opts;
  app.add_option("--config", opts.config_file, "key=value settings file")
      ->check(CLI::ExistingFile);
  add_setting_flag(app, opts, "--backend", "backend", "mock or live");
  add_setting_flag(app, opts, "--model", "model", "chat model name");
  add_setting_flag(app, opts, "--base-url", "base_url", "chat endpoint base URL");
  add_setting_flag(app, opts, "--scorer", "scorer", "lexical or remote:<url>");
  add_setting_flag(app, opts, "--target-fre", "target_fre", "readability target");
  add_setting_flag(app, opts, "--max-attempts", "max_attempts", "attempt cap");
  add_setting_flag(app, opts, "--stopping", "stopping", "fixed or dynamic");
  app.add_flag("--few-shot", opts.few_shot, "attach few-shot examples");
  add_setting_flag(app, opts, "--few-shot-file", "few_shot_file",
                   "JSONL of {source, summary} examples");
  add_setting_flag(app, opts, "--selection", "selection",
                   "last, best-composite or best-fre");
  add_setting_flag(app, opts, "--parallelism", "parallelism",
                   "articles evaluated concurrently");
  add_setting_flag(app, opts, "--checkpoint", "checkpoint",
                   "JSONL checkpoint for resumable runs");
  add_setting_flag(app, opts, "--out", "out", "report directory");
  add_setting_flag(app, opts, "--format", "format", "text or json");
  app.add_option("--set", opts.overrides, "any setting as key=value")
      ->allow_extra_args(false);

  std::string input, reference, article, corpus;
  bool baseline = false;

  auto* score = app.add_subcommand("score", "readability and fidelity metrics");
  score->fallthrough();
  score->add_option("input", input, "text file, or - for stdin");
  score->add_option("--reference", reference, "reference summary file");

  auto* summarize = app.add_subcommand("summarize", "refine one article");
  summarize->fallthrough();
  summarize->add_option("article", article, "article file, or - for stdin")
      ->required();
  summarize->add_option("--reference", reference, "reference summary file");
  summarize->add_flag("--baseline", baseline, "single-prompt baseline instead");

  auto* evaluate = app.add_subcommand("evaluate", "evaluate a JSONL corpus");
  evaluate->fallthrough();
  evaluate->add_option("corpus", corpus, "JSONL corpus")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*score) return cmd_score(opts, input, reference);
    if (*summarize) return cmd_summarize(opts, article, reference, baseline);
    return cmd_evaluate(opts, corpus);
  } catch (const Exit& e) {
    std::cerr << "lexipipe: " << e.message << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "lexipipe: " << e.what() << "\n";
    return kExitRuntime;
  }
}
