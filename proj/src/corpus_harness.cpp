// Copyright 2026 The lexipipe Authors
// SPDX-License-Identifier: Apache-2.0

#include "lexipipe/corpus_harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "lexipipe/version.hpp"

namespace lexipipe {

namespace {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since)
      .count();
}

json stats_json(const TextStats& s) {
  return {{"sentences", s.sentence_count},
          {"words", s.word_count},
          {"syllables", s.syllable_count}};
}

TextStats stats_from_json(const json& j) {
  return {j.at("sentences").get<std::int64_t>(),
          j.at("words").get<std::int64_t>(),
          j.at("syllables").get<std::int64_t>()};
}

json pr_json(const PrecisionRecall& pr) {
  return {{"precision", pr.precision}, {"recall", pr.recall}, {"f1", pr.f1}};
}

PrecisionRecall pr_from_json(const json& j) {
  return {j.at("precision").get<double>(), j.at("recall").get<double>(),
          j.at("f1").get<double>()};
}

json fidelity_json(const FidelityScores& f) {
  return {{"rouge1", pr_json(f.rouge1)},
          {"rouge2", pr_json(f.rouge2)},
          {"bleu", f.bleu},
          {"semantic_f1", f.semantic_f1},
          {"composite", f.composite}};
}

FidelityScores fidelity_from_json(const json& j) {
  FidelityScores f;
  f.rouge1 = pr_from_json(j.at("rouge1"));
  f.rouge2 = pr_from_json(j.at("rouge2"));
  f.bleu = j.at("bleu").get<double>();
  f.semantic_f1 = j.at("semantic_f1").get<double>();
  f.composite = j.at("composite").get<double>();
  return f;
}

json condition_json(const ConditionResult& c) {
  return {{"summary", c.summary},
          {"fre", c.fre},
          {"stats", stats_json(c.stats)},
          {"fidelity", fidelity_json(c.fidelity)}};
}

ConditionResult condition_from_json(const json& j) {
  return {j.at("summary").get<std::string>(), j.at("fre").get<double>(),
          stats_from_json(j.at("stats")), fidelity_from_json(j.at("fidelity"))};
}

ErrorCode error_code_from_string(std::string_view s) {
  for (auto code :
       {ErrorCode::invalid_argument, ErrorCode::unscorable_text,
        ErrorCode::config, ErrorCode::credential, ErrorCode::transient,
        ErrorCode::backend, ErrorCode::protocol, ErrorCode::io,
        ErrorCode::parse, ErrorCode::internal})
    if (to_string(code) == s) return code;
  return ErrorCode::internal;
}

ConditionResult score_condition(std::string summary, const ArticleRecord& rec,
                                const SemanticScorer& scorer,
                                const PipelineConfig& config) {
  ConditionResult c;
  const ReadabilityScore r = score_readability(summary);
  c.fre = r.fre;
  c.stats = r.stats;
  c.fidelity = score_fidelity(summary, rec.reference_summary, c.fre, scorer,
                              config.weights);
  c.summary = std::move(summary);
  return c;
}

SummaryStats summarize_values(const std::vector<double>& xs) {
  SummaryStats s;
  if (xs.empty()) return s;
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / static_cast<double>(xs.size());
  s.min = *std::min_element(xs.begin(), xs.end());
  s.max = *std::max_element(xs.begin(), xs.end());
  if (xs.size() > 1) {
    double sq = 0.0;
    for (double x : xs) sq += (x - s.mean) * (x - s.mean);
    s.sd = std::sqrt(sq / static_cast<double>(xs.size() - 1));
  }
  return s;
}

double mean_of(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  double sum = 0.0;
  for (double x : xs) sum += x;
  return sum / static_cast<double>(xs.size());
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string format_number(double v) { return json(v).dump(); }

std::string csv_preamble(const AggregateReport& report, std::string_view kind) {
  std::string scorer = report.scorer
                           ? report.scorer->name + "/" + report.scorer->version
                           : "none";
  std::ostringstream out;
  out << "# lexipipe " << report.tool_version << " " << kind
      << " schema_version=" << report.schema_version << " scorer=" << scorer
      << " config=" << report.config.dump() << "\n";
  return out.str();
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::io, "cannot write " + path.string());
  out << bytes;
  out.flush();
  if (!out) throw Error(ErrorCode::io, "write failed: " + path.string());
}

std::map<std::string, EvaluationRecord> read_checkpoint(
    const std::filesystem::path& path, bool& ends_with_newline) {
  std::map<std::string, EvaluationRecord> cached;
  ends_with_newline = true;
  std::ifstream in(path, std::ios::binary);
  if (!in) return cached;
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string contents = buf.str();
  ends_with_newline = contents.empty() || contents.back() == '\n';
  std::istringstream lines(contents);
  std::string line;
  while (std::getline(lines, line)) {
    const json j = json::parse(line, nullptr, false);
    // A torn final line from an interrupted run is skipped.
    if (j.is_discarded() || !j.is_object()) continue;
    try {
      EvaluationResult r = evaluation_result_from_json(j);
      if (auto* rec = std::get_if<EvaluationRecord>(&r))
        cached.insert_or_assign(rec->article_id, std::move(*rec));
    } catch (const std::exception&) {
      continue;
    }
  }
  return cached;
}

}  // namespace

// --- corpus ------------------------------------------------------------------

std::vector<ArticleRecord> parse_corpus(std::istream& in,
                                        std::string_view source_name) {
  std::vector<ArticleRecord> records;
  std::map<std::string, int> seen;
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& what) {
    throw Error(ErrorCode::parse, std::string(source_name) + ":" +
                                      std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) fail("line is not a JSON object");
    ArticleRecord rec;
    for (const char* key : {"id", "article", "reference_summary"}) {
      if (!j.contains(key) || !j[key].is_string())
        fail(std::string("missing string field \"") + key + "\"");
      if (j[key].get_ref<const std::string&>().empty())
        fail(std::string("field \"") + key + "\" is empty");
    }
    rec.id = j["id"].get<std::string>();
    rec.article = j["article"].get<std::string>();
    rec.reference_summary = j["reference_summary"].get<std::string>();
    if (const auto it = seen.find(rec.id); it != seen.end())
      fail("duplicate id \"" + rec.id + "\" (first seen on line " +
           std::to_string(it->second) + ")");
    seen.emplace(rec.id, line_no);
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<ArticleRecord> load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot read corpus " + path.string());
  return parse_corpus(in, path.string());
}

// --- evaluation ----------------------------------------------------------------

const std::string& article_id(const EvaluationResult& result) {
  return std::visit([](const auto& r) -> const std::string& {
    return r.article_id;
  }, result);
}

EvaluationResult evaluate_article(const ArticleRecord& record,
                                  SummarizerBackend& backend,
                                  const PipelineConfig& config,
                                  const SemanticScorer& scorer) {
  EvaluationRecord out;
  out.article_id = record.id;
  try {
    auto t0 = Clock::now();
    std::string baseline =
        baseline_summarize(record.article, backend, config.generation);
    out.timing.baseline_ms = elapsed_ms(t0);

    t0 = Clock::now();
    out.baseline = score_condition(std::move(baseline), record, scorer, config);
    double scoring = elapsed_ms(t0);

    t0 = Clock::now();
    const FidelityContext context{record.reference_summary, scorer};
    out.trace = refine(record.article, backend, config, &context);
    out.timing.pipeline_ms = elapsed_ms(t0);

    t0 = Clock::now();
    out.pipeline = score_condition(out.trace.final_attempt().summary, record,
                                   scorer, config);
    out.timing.scoring_ms = scoring + elapsed_ms(t0);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::config) throw;
    return FailedEvaluation{record.id, e.code(), e.what()};
  }
  return out;
}

EvaluationRun run_evaluation(std::span<const ArticleRecord> corpus,
                             SummarizerBackend& backend,
                             const PipelineConfig& config,
                             const SemanticScorer& scorer,
                             const RunOptions& options) {
  if (options.parallelism < 1)
    throw Error(ErrorCode::config, "parallelism must be >= 1");
  config.validate();

  std::map<std::string, EvaluationRecord> cached;
  std::ofstream checkpoint;
  if (!options.checkpoint_path.empty()) {
    bool ends_with_newline = true;
    cached = read_checkpoint(options.checkpoint_path, ends_with_newline);
    checkpoint.open(options.checkpoint_path, std::ios::binary | std::ios::app);
    if (!checkpoint)
      throw Error(ErrorCode::io, "cannot open checkpoint for appending: " +
                                     options.checkpoint_path.string());
    if (!ends_with_newline) checkpoint << '\n';
  }

  EvaluationRun run;
  std::vector<std::optional<EvaluationResult>> slots(corpus.size());
  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (auto it = cached.find(corpus[i].id); it != cached.end()) {
      slots[i] = it->second;
      ++run.cached;
    } else {
      pending.push_back(i);
    }
  }

  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> evaluated{0};
  std::atomic<bool> abort{false};
  std::mutex write_mu;
  std::exception_ptr first_error;

  auto worker = [&] {
    while (!abort.load() && !options.stop.stop_requested()) {
      const std::size_t k = next.fetch_add(1);
      if (k >= pending.size()) return;
      const std::size_t idx = pending[k];
      try {
        EvaluationResult result =
            evaluate_article(corpus[idx], backend, config, scorer);
        if (checkpoint.is_open() &&
            std::holds_alternative<EvaluationRecord>(result)) {
          const std::string line = to_json(result, true).dump() + "\n";
          std::lock_guard lock(write_mu);
          checkpoint << line;
          checkpoint.flush();
          if (!checkpoint)
            throw Error(ErrorCode::io, "checkpoint write failed: " +
                                           options.checkpoint_path.string());
        }
        slots[idx] = std::move(result);
        evaluated.fetch_add(1);
        if (options.on_result) options.on_result(*slots[idx]);
      } catch (...) {
        std::lock_guard lock(write_mu);
        if (!first_error) first_error = std::current_exception();
        abort.store(true);
        return;
      }
    }
  };

  const auto n_threads = std::min<std::size_t>(
      static_cast<std::size_t>(options.parallelism),
      std::max<std::size_t>(pending.size(), 1));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> threads;
    threads.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) threads.emplace_back(worker);
  }
  if (first_error) std::rethrow_exception(first_error);

  run.evaluated = evaluated.load();
  for (auto& slot : slots) {
    if (slot)
      run.results.push_back(std::move(*slot));
    else
      run.interrupted = true;
  }
  return run;
}

json to_json(const EvaluationResult& result, bool include_timing) {
  if (const auto* failed = std::get_if<FailedEvaluation>(&result)) {
    return {{"schema", "lexipipe.record"},
            {"schema_version", kRecordSchemaVersion},
            {"article_id", failed->article_id},
            {"status", "failed"},
            {"error_code", to_string(failed->code)},
            {"reason", failed->reason}};
  }
  const auto& rec = std::get<EvaluationRecord>(result);
  json pipeline = condition_json(rec.pipeline);
  pipeline["trace"] = to_json(rec.trace);
  json j = {{"schema", "lexipipe.record"},
            {"schema_version", kRecordSchemaVersion},
            {"article_id", rec.article_id},
            {"status", "ok"},
            {"baseline", condition_json(rec.baseline)},
            {"pipeline", std::move(pipeline)}};
  if (include_timing)
    j["timing_ms"] = {{"baseline", rec.timing.baseline_ms},
                      {"pipeline", rec.timing.pipeline_ms},
                      {"scoring", rec.timing.scoring_ms}};
  return j;
}

EvaluationResult evaluation_result_from_json(const json& j) {
  if (j.value("schema_version", 0) != kRecordSchemaVersion)
    throw Error(ErrorCode::parse, "unsupported record schema version");
  const std::string status = j.at("status").get<std::string>();
  if (status == "failed")
    return FailedEvaluation{
        j.at("article_id").get<std::string>(),
        error_code_from_string(j.at("error_code").get<std::string>()),
        j.at("reason").get<std::string>()};
  EvaluationRecord rec;
  rec.article_id = j.at("article_id").get<std::string>();
  rec.baseline = condition_from_json(j.at("baseline"));
  rec.pipeline = condition_from_json(j.at("pipeline"));
  rec.trace = trace_from_json(j.at("pipeline").at("trace"));
  if (j.contains("timing_ms")) {
    const json& t = j["timing_ms"];
    rec.timing = {t.value("baseline", 0.0), t.value("pipeline", 0.0),
                  t.value("scoring", 0.0)};
  }
  return rec;
}

// --- aggregation ---------------------------------------------------------------

std::int64_t AttemptHistogram::total() const {
  std::int64_t sum = cap_exhausted + composite_declined;
  for (auto c : threshold_met_at) sum += c;
  return sum;
}

AggregateReport aggregate(std::span<const EvaluationResult> results,
                          int max_attempts, json config_snapshot) {
  if (max_attempts < 1)
    throw Error(ErrorCode::invalid_argument, "max_attempts must be >= 1");
  AggregateReport report;
  report.tool_version = std::string(version());
  report.max_attempts = max_attempts;
  report.config = std::move(config_snapshot);
  report.attempt_histogram.threshold_met_at.assign(
      static_cast<std::size_t>(max_attempts), 0);

  std::vector<double> pipeline_fre, baseline_fre, pipeline_comp,
      baseline_comp, fre_delta, comp_delta;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto* rec = std::get_if<EvaluationRecord>(&results[i]);
    if (rec == nullptr) {
      ++report.n_failed;
      continue;
    }
    ++report.n_articles;
    if (!report.scorer) report.scorer = rec->trace.scorer;
    switch (rec->trace.stop_reason) {
      case StopReason::threshold_met: {
        const std::size_t len = rec->trace.attempts.size();
        if (len < 1 || len > static_cast<std::size_t>(max_attempts))
          throw Error(ErrorCode::invalid_argument,
                      "trace for " + rec->article_id +
                          " is longer than max_attempts");
        ++report.attempt_histogram.threshold_met_at[len - 1];
        break;
      }
      case StopReason::cap_exhausted:
        ++report.attempt_histogram.cap_exhausted;
        break;
      case StopReason::composite_declined:
        ++report.attempt_histogram.composite_declined;
        break;
    }
    pipeline_fre.push_back(rec->pipeline.fre);
    baseline_fre.push_back(rec->baseline.fre);
    pipeline_comp.push_back(rec->pipeline.fidelity.composite);
    baseline_comp.push_back(rec->baseline.fidelity.composite);
    fre_delta.push_back(rec->pipeline.fre - rec->baseline.fre);
    comp_delta.push_back(rec->pipeline.fidelity.composite -
                         rec->baseline.fidelity.composite);
    report.composite_series.push_back(
        {i, rec->article_id, rec->pipeline.fidelity.composite});
  }
  if (report.n_articles == 0 && report.n_failed > 0)
    throw Error(ErrorCode::invalid_argument,
                "empty aggregate: all " + std::to_string(report.n_failed) +
                    " records failed");

  if (!pipeline_fre.empty()) {
    report.pass_rate_at_cap =
        static_cast<double>(std::accumulate(
            report.attempt_histogram.threshold_met_at.begin(),
            report.attempt_histogram.threshold_met_at.end(),
            std::int64_t{0})) /
        static_cast<double>(report.n_articles);
    auto bin_of = [](double fre) {
      return static_cast<int>(std::floor(fre / kFreBinWidth));
    };
    const auto [lo, hi] =
        std::minmax_element(pipeline_fre.begin(), pipeline_fre.end());
    const int first = bin_of(*lo);
    const int last = bin_of(*hi);
    for (int k = first; k <= last; ++k)
      report.fre_histogram.push_back(
          {k * kFreBinWidth, (k + 1) * kFreBinWidth, 0});
    for (double fre : pipeline_fre)
      ++report.fre_histogram[static_cast<std::size_t>(bin_of(fre) - first)]
            .count;
  }

  report.composite_stats = summarize_values(pipeline_comp);
  report.baseline_vs_pipeline = {mean_of(baseline_fre),  mean_of(pipeline_fre),
                                 mean_of(fre_delta),     mean_of(baseline_comp),
                                 mean_of(pipeline_comp), mean_of(comp_delta)};
  return report;
}

json to_json(const AggregateReport& r) {
  json fre_bins = json::array();
  for (const auto& b : r.fre_histogram)
    fre_bins.push_back({{"low", b.low}, {"high", b.high}, {"count", b.count}});
  json series = json::array();
  for (const auto& p : r.composite_series)
    series.push_back({{"article_index", p.article_index},
                      {"article_id", p.article_id},
                      {"composite", p.composite}});
  json scorer = nullptr;
  if (r.scorer) scorer = {{"name", r.scorer->name}, {"version", r.scorer->version}};
  const auto& d = r.baseline_vs_pipeline;
  return {
      {"schema", "lexipipe.report"},
      {"schema_version", r.schema_version},
      {"tool_version", r.tool_version},
      {"n_articles", r.n_articles},
      {"n_failed", r.n_failed},
      {"max_attempts", r.max_attempts},
      {"attempt_histogram",
       {{"threshold_met_at", r.attempt_histogram.threshold_met_at},
        {"cap_exhausted", r.attempt_histogram.cap_exhausted},
        {"composite_declined", r.attempt_histogram.composite_declined}}},
      {"fre_histogram", std::move(fre_bins)},
      {"pass_rate_at_cap", r.pass_rate_at_cap},
      {"composite_series", std::move(series)},
      {"composite_stats",
       {{"mean", r.composite_stats.mean},
        {"sd", r.composite_stats.sd},
        {"min", r.composite_stats.min},
        {"max", r.composite_stats.max}}},
      {"baseline_vs_pipeline",
       {{"baseline_mean_fre", d.baseline_mean_fre},
        {"pipeline_mean_fre", d.pipeline_mean_fre},
        {"mean_fre_delta", d.mean_fre_delta},
        {"baseline_mean_composite", d.baseline_mean_composite},
        {"pipeline_mean_composite", d.pipeline_mean_composite},
        {"mean_composite_delta", d.mean_composite_delta}}},
      {"scorer", std::move(scorer)},
      {"config", r.config},
  };
}

AggregateReport aggregate_report_from_json(const json& j) {
  AggregateReport r;
  r.schema_version = j.at("schema_version").get<int>();
  if (r.schema_version != kReportSchemaVersion)
    throw Error(ErrorCode::parse, "unsupported report schema version");
  r.tool_version = j.at("tool_version").get<std::string>();
  r.n_articles = j.at("n_articles").get<std::int64_t>();
  r.n_failed = j.at("n_failed").get<std::int64_t>();
  r.max_attempts = j.at("max_attempts").get<int>();
  const json& h = j.at("attempt_histogram");
  r.attempt_histogram.threshold_met_at =
      h.at("threshold_met_at").get<std::vector<std::int64_t>>();
  r.attempt_histogram.cap_exhausted = h.at("cap_exhausted").get<std::int64_t>();
  r.attempt_histogram.composite_declined =
      h.at("composite_declined").get<std::int64_t>();
  for (const auto& b : j.at("fre_histogram"))
    r.fre_histogram.push_back({b.at("low").get<int>(), b.at("high").get<int>(),
                               b.at("count").get<std::int64_t>()});
  r.pass_rate_at_cap = j.at("pass_rate_at_cap").get<double>();
  for (const auto& p : j.at("composite_series"))
    r.composite_series.push_back({p.at("article_index").get<std::size_t>(),
                                  p.at("article_id").get<std::string>(),
                                  p.at("composite").get<double>()});
  const json& s = j.at("composite_stats");
  r.composite_stats = {s.at("mean").get<double>(), s.at("sd").get<double>(),
                       s.at("min").get<double>(), s.at("max").get<double>()};
  const json& d = j.at("baseline_vs_pipeline");
  r.baseline_vs_pipeline = {d.at("baseline_mean_fre").get<double>(),
                            d.at("pipeline_mean_fre").get<double>(),
                            d.at("mean_fre_delta").get<double>(),
                            d.at("baseline_mean_composite").get<double>(),
                            d.at("pipeline_mean_composite").get<double>(),
                            d.at("mean_composite_delta").get<double>()};
  if (!j.at("scorer").is_null())
    r.scorer = ScorerIdentity{j["scorer"].at("name").get<std::string>(),
                              j["scorer"].at("version").get<std::string>()};
  r.config = j.at("config");
  return r;
}

std::vector<std::filesystem::path> emit_report(
    const AggregateReport& report, std::span<const EvaluationResult> results,
    const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec)
    throw Error(ErrorCode::io,
                "cannot create " + out_dir.string() + ": " + ec.message());

  std::vector<std::filesystem::path> written;
  auto emit = [&](const char* name, const std::string& bytes) {
    const auto path = out_dir / name;
    write_file(path, bytes);
    written.push_back(path);
  };

  emit("report.json", to_json(report).dump(2) + "\n");

  {
    std::string csv = csv_preamble(report, "attempts_hist");
    csv += "attempt,count\n";
    const auto& h = report.attempt_histogram;
    for (std::size_t i = 0; i < h.threshold_met_at.size(); ++i)
      csv += std::to_string(i + 1) + "," +
             std::to_string(h.threshold_met_at[i]) + "\n";
    csv += "cap_exhausted," + std::to_string(h.cap_exhausted) + "\n";
    csv += "composite_declined," + std::to_string(h.composite_declined) + "\n";
    emit("attempts_hist.csv", csv);
  }
  {
    std::string csv = csv_preamble(report, "fre_hist");
    csv += "bin_low,bin_high,count\n";
    for (const auto& b : report.fre_histogram)
      csv += std::to_string(b.low) + "," + std::to_string(b.high) + "," +
             std::to_string(b.count) + "\n";
    emit("fre_hist.csv", csv);
  }
  {
    std::string csv = csv_preamble(report, "composite_series");
    csv += "article_index,article_id,composite\n";
    for (const auto& p : report.composite_series)
      csv += std::to_string(p.article_index) + "," + csv_field(p.article_id) +
             "," + format_number(p.composite) + "\n";
    emit("composite_series.csv", csv);
  }
  {
    std::string lines;
    for (const auto& r : results) lines += to_json(r, false).dump() + "\n";
    emit("records.jsonl", lines);
  }
  return written;
}

}  // namespace lexipipe
