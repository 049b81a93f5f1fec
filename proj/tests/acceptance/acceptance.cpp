// Copyright 2026 The lexipipe Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite. Prints one PASS/FAIL line per criterion.
//   acceptance                 criteria 1-7
//   acceptance --criterion N   one criterion; 8 is the opt-in live smoke run

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fakes.hpp"
#include "json.hpp"
#include "lexipipe/corpus_harness.hpp"
#include "lexipipe/fidelity_metrics.hpp"
#include "lexipipe/refinement.hpp"
#include "lexipipe/summarizer.hpp"
#include "lexipipe/text_analysis.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace lexipipe;

namespace {

// Tolerances and runtime limits.
constexpr double kAnchorTolerance = 6.0;
constexpr double kFormulaTolerance = 1e-9;
constexpr double kCompositeTolerance = 1e-12;
constexpr int kSkipExit = 77;
constexpr int kLiveArticles = 20;

const fs::path kSource = LEXIPIPE_SOURCE_DIR;
const std::string kCli = LEXIPIPE_CLI_PATH;

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

struct Criterion {
  int number;
  const char* title;
  double limit_s;
  std::function<Outcome()> run;
};

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Captured {
  int exit = -1;
  std::string out;
};

Captured run_command(const std::string& cmd) {
  Captured c;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return c;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0)
    c.out.append(buf.data(), n);
  const int status = ::pclose(pipe);
  c.exit = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return c;
}

std::string quote(const fs::path& p) { return "'" + p.string() + "'"; }

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("lexipipe_accept_" + name);
  fs::remove_all(p);
  return p;
}

std::string fmt(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

// 1. FRE anchors through the CLI score command.
Outcome anchors() {
  Outcome o;
  const std::array<std::pair<const char*, double>, 3> cases{
      {{"anchor_source.txt", 41.0},
       {"anchor_baseline.txt", 53.0},
       {"anchor_pipeline.txt", 88.0}}};
  for (const auto& [file, expected] : cases) {
    const auto r = run_command(kCli + " --format json score " +
                               quote(kSource / "tests" / "data" / file) + " 2>&1");
    if (r.exit != 0) {
      o.require(false, std::string(file) + ": exit " + std::to_string(r.exit));
      continue;
    }
    const double fre = json::parse(r.out)["fre"].get<double>();
    const bool ok = std::abs(fre - expected) <= kAnchorTolerance;
    o.require(ok, std::string(file) + " fre " + fmt(fre) + " vs " +
                      fmt(expected, 0) + " +/- " + fmt(kAnchorTolerance, 0));
    if (ok) o.detail += (o.detail.empty() ? "" : "; ") + std::string(file) + " " + fmt(fre);
  }
  return o;
}

// 2. FRE formula on random valid stats.
Outcome formula() {
  Outcome o;
  std::mt19937_64 rng(20260101);
  std::uniform_int_distribution<std::int64_t> sentences(1, 500);
  std::uniform_int_distribution<std::int64_t> words(1, 20000);
  std::uniform_int_distribution<std::int64_t> extra(0, 40000);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    TextStats s;
    s.sentence_count = sentences(rng);
    s.word_count = words(rng);
    s.syllable_count = s.word_count + extra(rng);
    const double got = flesch_reading_ease(s).fre;
    const double want = oracle::flesch(static_cast<double>(s.sentence_count),
                                       static_cast<double>(s.word_count),
                                       static_cast<double>(s.syllable_count));
    worst = std::max(worst, std::abs(got - want));
  }
  char err[32];
  std::snprintf(err, sizeof err, "%.3g", worst);
  o.require(worst <= kFormulaTolerance, std::string("max error ") + err);
  if (o.pass) o.detail = std::string("10000 stats, max error ") + err;
  return o;
}

// 3. ROUGE and BLEU against the brute-force oracle.
Outcome metric_oracle() {
  Outcome o;
  std::mt19937_64 rng(777);
  std::uniform_int_distribution<int> len(0, 30), word(0, 9);
  auto draw = [&](int min_len) {
    std::vector<std::string> t(static_cast<std::size_t>(std::max(min_len, len(rng))));
    for (auto& w : t) w = "w" + std::to_string(word(rng));
    return t;
  };
  int mismatches = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto cand = draw(0);
    const auto ref = draw(1);
    for (int n = 1; n <= 2; ++n) {
      const auto got = rouge_n(cand, ref, n);
      const auto want = oracle::rouge(cand, ref, n);
      if (got.precision != want.p || got.recall != want.r || got.f1 != want.f)
        ++mismatches;
    }
    if (bleu(cand, ref) != oracle::bleu(cand, ref, 4)) ++mismatches;
  }
  o.require(mismatches == 0, std::to_string(mismatches) + " oracle mismatches");

  const std::vector<std::string> same{"a", "b", "c", "d", "e"};
  const std::vector<std::string> other{"v", "w", "x", "y", "z"};
  for (int n = 1; n <= 2; ++n) {
    const auto id = rouge_n(same, same, n);
    o.require(id.precision == 1.0 && id.recall == 1.0 && id.f1 == 1.0,
              "identity rouge-" + std::to_string(n) + " != 1");
    const auto dis = rouge_n(same, other, n);
    o.require(dis.precision == 0.0 && dis.recall == 0.0 && dis.f1 == 0.0,
              "disjoint rouge-" + std::to_string(n) + " != 0");
  }
  o.require(bleu(same, same) == 1.0, "identity bleu != 1");
  o.require(bleu(same, other) == 0.0, "disjoint bleu != 0");
  if (o.pass) o.detail = "1000 pairs exact, identity 1, disjoint 0";
  return o;
}

// 4. Composite range, formula, saturation and endpoints.
Outcome composite() {
  Outcome o;
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> fre(-50.0, 130.0), sem(0.0, 1.0);
  int bad = 0;
  for (int i = 0; i < 10000; ++i) {
    const double f = fre(rng), s = sem(rng);
    const double c = composite_score(f, s);
    if (!(c >= 0.0 && c <= 1.0)) ++bad;
    if (std::abs(c - oracle::composite(f, s)) > kCompositeTolerance) ++bad;
    if (f > 100.0 && composite_score(100.0 + (f - 100.0) * 7.0, s) != c) ++bad;
  }
  o.require(bad == 0, std::to_string(bad) + " property violations");
  const double low = composite_score(-10, 0.26);
  const double high = composite_score(46, 1.0);
  o.require(std::abs(low - 0.13) <= kCompositeTolerance, "low endpoint " + std::to_string(low));
  o.require(std::abs(high - 0.73) <= kCompositeTolerance, "high endpoint " + std::to_string(high));
  if (o.pass) o.detail = "10000 pairs, endpoints " + fmt(low) + " and " + fmt(high);
  return o;
}

// 5. Offline evaluation of the bundled corpus through the CLI, twice.
Outcome end_to_end() {
  Outcome o;
  const fs::path corpus = kSource / "data" / "synthetic_corpus.jsonl";
  const fs::path a = scratch("e2e_a"), b = scratch("e2e_b");
  const std::string base = "env -u LEXIPIPE_API_KEY -u LEXIPIPE_BACKEND " + kCli +
                           " --backend mock --parallelism 4 --out ";
  const auto ra = run_command(base + quote(a) + " evaluate " + quote(corpus) + " 2>&1");
  const auto rb = run_command(base + quote(b) + " evaluate " + quote(corpus) + " 2>&1");
  o.require(ra.exit == 0 && rb.exit == 0,
            "evaluate exit " + std::to_string(ra.exit) + "/" + std::to_string(rb.exit) +
                ": " + ra.out.substr(0, 200));
  if (!o.pass) return o;

  for (const char* name : {"report.json", "attempts_hist.csv", "fre_hist.csv",
                           "composite_series.csv", "records.jsonl"}) {
    const std::string x = read_file(a / name), y = read_file(b / name);
    o.require(!x.empty() && x == y, std::string(name) + " differs between runs");
  }

  const json report = json::parse(read_file(a / "report.json"));
  const double pass_rate = report["pass_rate_at_cap"].get<double>();
  o.require(pass_rate == 1.0, "pass_rate_at_cap " + fmt(pass_rate, 4));
  o.require(report["n_articles"] == 200, "n_articles " + report["n_articles"].dump());
  const auto& deltas = report["baseline_vs_pipeline"];
  const double base_fre = deltas["baseline_mean_fre"].get<double>();
  const double pipe_fre = deltas["pipeline_mean_fre"].get<double>();
  o.require(pipe_fre > base_fre, "pipeline mean fre not above baseline");

  std::ifstream records(a / "records.jsonl");
  std::string line;
  int traces = 0;
  while (std::getline(records, line)) {
    const json r = json::parse(line);
    const auto& attempts = r["pipeline"]["trace"]["attempts"];
    o.require(attempts.size() <= 4, r["article_id"].get<std::string>() + " has > 4 attempts");
    for (std::size_t i = 1; i < attempts.size(); ++i)
      o.require(attempts[i]["fre"].get<double>() >= attempts[i - 1]["fre"].get<double>(),
                r["article_id"].get<std::string>() + " fre decreased");
    ++traces;
  }
  o.require(traces == 200, std::to_string(traces) + " records");
  if (o.pass)
    o.detail = "200 articles, pass rate 1.00, mean fre " + fmt(base_fre) + " -> " +
               fmt(pipe_fre) + ", byte-identical";
  fs::remove_all(a);
  fs::remove_all(b);
  return o;
}

// 6. Dynamic stopping on a declining composite; none on a rising one.
Outcome dynamic_stopping() {
  Outcome o;
  const std::string article =
      "The council met for hours. It argued about roads. Then it voted.";
  PipelineConfig cfg;
  cfg.fre_target = 200;  // readability saturates, so composite = 0.5 + sem / 2
  cfg.stopping = StoppingMode::dynamic_composite;

  fakes::TableScorer falling({{"Go.", 0.0}, {"Go now.", 0.2}, {"Go home.", 0.1}});
  const FidelityContext down{"ref", falling};
  fakes::ScriptedBackend b1({"Go.", "Go now.", "Go home.", "Go on."});
  const auto t = refine(article, b1, cfg, &down);
  std::vector<double> seq;
  for (const auto& a : t.attempts) seq.push_back(*a.composite);
  o.require(seq.size() == 3 && std::abs(seq[0] - 0.50) < 1e-12 &&
                std::abs(seq[1] - 0.60) < 1e-12 && std::abs(seq[2] - 0.55) < 1e-12,
            "unexpected composite sequence");
  o.require(t.stop_reason == StopReason::composite_declined, "no composite_declined");
  o.require(t.final_index == 2, "final_index " + std::to_string(t.final_index));

  fakes::TableScorer rising({{"Go.", 0.1}, {"Go now.", 0.2}, {"Go home.", 0.3}, {"Go on.", 0.4}});
  const FidelityContext up{"ref", rising};
  fakes::ScriptedBackend b2({"Go.", "Go now.", "Go home.", "Go on."});
  const auto full = refine(article, b2, cfg, &up);
  o.require(full.stop_reason == StopReason::cap_exhausted && full.attempts.size() == 4,
            "monotone sequence stopped early");

  // The oscillating mock on real articles: whenever it declines, the
  // predecessor ships.
  MockBackend osc({5, MockProfile::oscillating});
  LexicalScorer scorer;
  PipelineConfig mock_cfg;
  mock_cfg.fre_target = 200;
  mock_cfg.stopping = StoppingMode::dynamic_composite;
  const auto corpus = load_corpus(kSource / "data" / "synthetic_corpus.jsonl");
  int declined = 0;
  for (std::size_t i = 0; i < 40; ++i) {
    const FidelityContext ctx{corpus[i].reference_summary, scorer};
    const auto tr = refine(corpus[i].article, osc, mock_cfg, &ctx);
    if (tr.stop_reason != StopReason::composite_declined) continue;
    ++declined;
    const auto n = tr.attempts.size();
    o.require(*tr.attempts[n - 1].composite < *tr.attempts[n - 2].composite &&
                  tr.final_index == static_cast<int>(n - 1),
              corpus[i].id + " declined without shipping its predecessor");
  }
  o.require(declined > 0, "oscillating mock never declined");
  if (o.pass)
    o.detail = "0.50/0.60/0.55 -> final 2; rising runs to cap; oscillating mock declined on " +
               std::to_string(declined) + "/40";
  return o;
}

// 7. Interrupt after k checkpointed records, resume, compare.
Outcome resume() {
  Outcome o;
  auto corpus = load_corpus(kSource / "data" / "synthetic_corpus.jsonl");
  corpus.resize(50);
  const std::size_t n = corpus.size(), k = 17;
  const fs::path dir = scratch("resume");
  fs::create_directories(dir);
  const fs::path checkpoint = dir / "ckpt.jsonl";
  MockBackend mock;
  LexicalScorer scorer;

  std::stop_source stop;
  std::atomic<std::size_t> seen{0};
  RunOptions first;
  first.checkpoint_path = checkpoint;
  first.stop = stop.get_token();
  first.on_result = [&](const EvaluationResult&) {
    if (++seen == k) stop.request_stop();
  };
  const auto partial = run_evaluation(corpus, mock, {}, scorer, first);
  o.require(partial.interrupted && partial.evaluated == k,
            "first run evaluated " + std::to_string(partial.evaluated));

  // Each new evaluation starts with exactly one baseline-prompt call.
  std::atomic<std::size_t> baselines{0};
  struct Counting : SummarizerBackend {
    SummarizerBackend& inner;
    std::atomic<std::size_t>& count;
    Counting(SummarizerBackend& i, std::atomic<std::size_t>& c) : inner(i), count(c) {}
    SummarizeResponse summarize(const SummarizeRequest& r) override {
      if (r.instruction == kBaselinePrompt) ++count;
      return inner.summarize(r);
    }
    std::string id() const override { return inner.id(); }
  } counting(mock, baselines);
  RunOptions second;
  second.checkpoint_path = checkpoint;
  const auto resumed = run_evaluation(corpus, counting, {}, scorer, second);
  o.require(resumed.cached == k && resumed.evaluated == n - k && baselines == n - k,
            "resume evaluated " + std::to_string(resumed.evaluated) + " with " +
                std::to_string(baselines.load()) + " baseline calls");

  const auto fresh = run_evaluation(corpus, mock, {}, scorer);
  o.require(resumed.results == fresh.results, "resumed records differ from a fresh run");
  std::string a, b;
  for (const auto& r : resumed.results) a += to_json(r, false).dump() + "\n";
  for (const auto& r : fresh.results) b += to_json(r, false).dump() + "\n";
  o.require(a == b, "serialized records differ");
  if (o.pass)
    o.detail = "n=" + std::to_string(n) + " k=" + std::to_string(k) + ", " +
               std::to_string(n - k) + " new evaluations, records identical";
  fs::remove_all(dir);
  return o;
}

// 8. Live smoke run, opt-in.
Outcome live_smoke() {
  Outcome o;
  std::ifstream in(kSource / "data" / "synthetic_corpus.jsonl");
  const fs::path dir = scratch("live");
  fs::create_directories(dir);
  const fs::path subset = dir / "subset.jsonl";
  {
    std::ofstream out(subset);
    std::string line;
    for (int i = 0; i < kLiveArticles && std::getline(in, line); ++i) out << line << "\n";
  }
  const auto r = run_command(kCli + " --backend live --format json --out " +
                             quote(dir / "out") + " evaluate " + quote(subset) + " 2>&1");
  o.require(r.exit == 0, "evaluate exit " + std::to_string(r.exit) + ": " + r.out.substr(0, 300));
  if (!o.pass) return o;
  const json report = json::parse(read_file(dir / "out" / "report.json"));
  const auto& d = report["baseline_vs_pipeline"];
  const double base = d["baseline_mean_fre"].get<double>();
  const double pipe = d["pipeline_mean_fre"].get<double>();
  const double pass_rate = report["pass_rate_at_cap"].get<double>();
  o.require(pipe > base, "pipeline mean fre " + fmt(pipe) + " <= baseline " + fmt(base));
  o.require(pass_rate > 0.5, "pass rate " + fmt(pass_rate));
  o.detail += (o.detail.empty() ? "" : "; ") + std::string("mean fre ") + fmt(base) +
              " -> " + fmt(pipe) + ", pass rate " + fmt(pass_rate);
  return o;
}

bool report(const Criterion& c) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = c.run();
  } catch (const std::exception& e) {
    o.require(false, std::string("exception: ") + e.what());
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.require(secs < c.limit_s, "runtime " + fmt(secs) + " s over " + fmt(c.limit_s, 0) + " s");
  std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c.number << " ("
            << c.title << ", " << fmt(secs, 3) << " s): " << o.detail << std::endl;
  return o.pass;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "FRE anchors", 1.0, anchors},
      {2, "FRE formula", 1.0, formula},
      {3, "metric oracle", 5.0, metric_oracle},
      {4, "composite properties", 1.0, composite},
      {5, "offline end-to-end", 30.0, end_to_end},
      {6, "dynamic stopping", 1.0, dynamic_stopping},
      {7, "resume idempotence", 30.0, resume},
      {8, "live smoke", 900.0, live_smoke},
  };

  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::cerr << "usage: acceptance [--criterion N]\n";
      return 2;
    }
  }
  if (only < 0 || only > static_cast<int>(criteria.size())) {
    std::cerr << "no criterion " << only << "\n";
    return 2;
  }

  if (only == 8) {
    const char* opt_in = std::getenv("LEXIPIPE_LIVE_SMOKE");
    const char* key = std::getenv("LEXIPIPE_API_KEY");
    if (!opt_in || std::string(opt_in) != "1" || !key || !*key) {
      std::cout << "SKIP criterion 8 (live smoke): set LEXIPIPE_LIVE_SMOKE=1 and "
                   "LEXIPIPE_API_KEY to run\n";
      return kSkipExit;
    }
  }

  bool all = true;
  for (const auto& c : criteria) {
    if (only == 0 && c.number == 8) continue;
    if (only != 0 && c.number != only) continue;
    all = report(c) && all;
  }
  return all ? 0 : 1;
}
