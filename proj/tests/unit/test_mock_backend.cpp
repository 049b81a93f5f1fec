// Copyright 2026 The lexipipe Authors
// SPDX-License-Identifier: Apache-2.0

#include <fstream>
#include <sstream>

#include "doctest.h"
#include "lexipipe/corpus_harness.hpp"
#include "lexipipe/error.hpp"
#include "lexipipe/summarizer.hpp"
#include "lexipipe/text_analysis.hpp"

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

SummarizeRequest request_for(std::string article) {
  SummarizeRequest r;
  r.instruction = "Summarize.";
  r.article = std::move(article);
  return r;
}

const char* kLongSentence =
    "The committee convened on Thursday to deliberate on the proposal, and "
    "the members requested additional information regarding the budget "
    "before the final vote.";

std::vector<ArticleRecord> bundled_corpus() {
  return load_corpus(std::filesystem::path(LEXIPIPE_SOURCE_DIR) / "data" /
                     "synthetic_corpus.jsonl");
}

}  // namespace

TEST_SUITE("summarizer_backends") {

TEST_CASE("mock: lead sentences and determinism") {
  MockBackend mock({2, MockProfile::monotone});
  const auto req = request_for("One here. Two here. Three here.");
  CHECK(mock.mock_summarize(req, 0).summary == "One here. Two here.");
  CHECK(mock.id() == "mock:monotone:k2");
  for (int round = 0; round < 4; ++round)
    CHECK(mock.mock_summarize(req, round).summary ==
          mock.mock_summarize(req, round).summary);
  CHECK(code_of([&] { mock.mock_summarize(request_for(""), 0); }) ==
        ErrorCode::invalid_argument);
  CHECK(code_of([&] { mock.mock_summarize(request_for("..."), 0); }) ==
        ErrorCode::invalid_argument);
  CHECK(code_of([] { MockBackend m({0, MockProfile::monotone}); }) ==
        ErrorCode::config);
}

TEST_CASE("mock: a pass splits long sentences") {
  MockBackend mock;
  const auto req = request_for(kLongSentence);
  REQUIRE(tokenize_words(kLongSentence).size() > 15);
  const auto before = segment_sentences(mock.mock_summarize(req, 0).summary);
  const auto after = segment_sentences(mock.mock_summarize(req, 1).summary);
  CHECK(after.size() > before.size());
}

TEST_CASE("mock: substitution keeps capitals and article agreement") {
  MockBackend mock;
  const auto out =
      mock.mock_summarize(request_for("Purchase an enormous vehicle."), 1);
  CHECK(out.summary == "Buy a huge car.");
}

TEST_CASE("mock: summarize uses the history length as the round") {
  MockBackend mock;
  auto req = request_for(kLongSentence);
  req.history = {{"x", "y"}, {"x", "y"}};
  CHECK(mock.summarize(req).summary == mock.mock_summarize(req, 2).summary);
}

TEST_CASE("mock: oscillating profile overshoots on even attempts") {
  MockBackend mono({5, MockProfile::monotone});
  MockBackend osc({5, MockProfile::oscillating});
  const auto req = request_for(
      "The board met today. It set a plan. The plan is new. Staff liked it.");
  CHECK(osc.mock_summarize(req, 0).summary == mono.mock_summarize(req, 0).summary);
  const auto odd = segment_sentences(osc.mock_summarize(req, 1).summary);
  CHECK(odd.size() < segment_sentences(mono.mock_summarize(req, 1).summary).size());
  CHECK(osc.mock_summarize(req, 2).summary == mono.mock_summarize(req, 2).summary);
}

TEST_CASE("lexicon: parsing and lookup") {
  const auto lex = SimplificationLexicon::parse("# c\nutilize\tuse\nVehicle\tcar\n");
  CHECK(lex.size() == 2);
  REQUIRE(lex.find("UTILIZE") != nullptr);
  CHECK(*lex.find("vehicle") == "car");
  CHECK(lex.find("car") == nullptr);
  CHECK(code_of([] { SimplificationLexicon::parse("no tab here\n"); }) ==
        ErrorCode::parse);
  CHECK(code_of([] { SimplificationLexicon::from_file("/nonexistent.tsv"); }) ==
        ErrorCode::io);
}

TEST_CASE("lexicon: every built-in entry lowers syllables per word") {
  const auto text = [] {
    std::ifstream in(std::filesystem::path(LEXIPIPE_SOURCE_DIR) / "data" /
                     "simplification_lexicon.tsv");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  }();
  std::istringstream lines(text);
  std::string line;
  int entries = 0;
  while (std::getline(lines, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    const std::string hard = line.substr(0, tab), plain = line.substr(tab + 1);
    const auto plain_words = tokenize_words(plain);
    int plain_syllables = 0;
    for (const auto& w : plain_words) plain_syllables += count_syllables(w);
    CAPTURE(hard);
    CHECK(static_cast<double>(plain_syllables) /
              static_cast<double>(plain_words.size()) <
          static_cast<double>(count_syllables(hard)));
    ++entries;
  }
  CHECK(entries >= 180);
  CHECK(SimplificationLexicon::builtin().size() == static_cast<std::size_t>(entries));
}

TEST_CASE("mock: readability never drops across rounds on the bundled corpus") {
  MockBackend mock;
  const auto corpus = bundled_corpus();
  REQUIRE(corpus.size() == 200);
  for (const auto& rec : corpus) {
    const auto req = request_for(rec.article);
    double previous = -1e9;
    TextStats prev_stats{};
    for (int round = 0; round <= 4; ++round) {
      const auto summary = mock.mock_summarize(req, round).summary;
      const auto stats = text_stats(summary);
      const double fre = flesch_reading_ease(stats).fre;
      CAPTURE(rec.id);
      CAPTURE(round);
      CHECK(fre >= previous);
      if (round > 0) {
        // Words per sentence and syllables per word never rise.
        CHECK(stats.word_count * prev_stats.sentence_count <=
              prev_stats.word_count * stats.sentence_count);
        CHECK(stats.syllable_count * prev_stats.word_count <=
              prev_stats.syllable_count * stats.word_count);
      }
      previous = fre;
      prev_stats = stats;
    }
  }
}

}  // TEST_SUITE
