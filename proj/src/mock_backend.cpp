// Copyright 2026 The lexipipe Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

#include "builtin_resources.hpp"
#include "lexipipe/error.hpp"
#include "lexipipe/summarizer.hpp"
#include "lexipipe/text_analysis.hpp"

namespace lexipipe {

namespace {

constexpr std::size_t kLongSentenceWords = 15;
constexpr std::size_t kMinFragmentWords = 3;

constexpr std::array<std::string_view, 16> kConjunctions = {
    "and",   "but",    "or",    "so",     "yet",   "because",
    "while", "although", "though", "whereas", "which", "after",
    "before", "since",  "until", "when"};

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_lower(char c) { return c >= 'a' && c <= 'z'; }

std::string join(const std::vector<std::string>& sentences) {
  std::string out;
  for (const auto& s : sentences) {
    if (!out.empty()) out.push_back(' ');
    out += s;
  }
  return out;
}

struct Span {
  std::size_t begin;
  std::size_t end;
};

// Byte spans of tokenize_words() output within `s`.
std::vector<Span> token_spans(const std::string& s) {
  std::vector<Span> spans;
  std::size_t cursor = 0;
  for (const auto& tok : tokenize_words(s)) {
    const std::size_t at = s.find(tok, cursor);
    spans.push_back({at, at + tok.size()});
    cursor = at + tok.size();
  }
  return spans;
}

// Readability never drops if neither ratio rises.
bool ratios_not_worse(const TextStats& now, const TextStats& base) {
  return now.word_count * base.sentence_count <=
             base.word_count * now.sentence_count &&
         now.syllable_count * base.word_count <=
             base.syllable_count * now.word_count;
}

TextStats stats_of(const std::vector<std::string>& sentences) {
  return text_stats(join(sentences));
}

std::string trim_right(std::string s, std::string_view chars) {
  while (!s.empty() && chars.find(s.back()) != std::string_view::npos)
    s.pop_back();
  return s;
}

// Splits at the comma or conjunction closest to the middle word.
std::optional<std::pair<std::string, std::string>> split_sentence(
    const std::string& s) {
  const std::vector<Span> spans = token_spans(s);
  const std::size_t n = spans.size();
  if (n <= kLongSentenceWords) return std::nullopt;

  struct Cut {
    std::size_t left_end;     // bytes kept on the left
    std::size_t right_begin;  // first byte of the right half
    std::size_t words_left;
  };
  std::vector<Cut> cuts;
  for (std::size_t w = 1; w < n; ++w) {
    const std::size_t gap_begin = spans[w - 1].end;
    const std::size_t gap_end = spans[w].begin;
    const std::string_view gap(s.data() + gap_begin, gap_end - gap_begin);
    const std::string word = lower(s.substr(spans[w].begin,
                                            spans[w].end - spans[w].begin));
    const bool conj = std::find(kConjunctions.begin(), kConjunctions.end(),
                                word) != kConjunctions.end();
    if (conj && gap.find_first_not_of(", ") == std::string_view::npos) {
      cuts.push_back({gap_begin, spans[w].begin, w});
    } else if (gap == ", ") {
      cuts.push_back({gap_begin, gap_end, w});
    }
  }
  const double middle = static_cast<double>(n) / 2.0;
  const Cut* best = nullptr;
  double best_dist = 0.0;
  for (const auto& c : cuts) {
    if (c.words_left < kMinFragmentWords || n - c.words_left < kMinFragmentWords)
      continue;
    if (!is_lower(s[c.right_begin]) && !is_upper(s[c.right_begin])) continue;
    const double dist =
        std::abs(static_cast<double>(c.words_left) - middle);
    if (best == nullptr || dist < best_dist) {
      best = &c;
      best_dist = dist;
    }
  }
  if (best == nullptr) return std::nullopt;
  std::string left = trim_right(s.substr(0, best->left_end), " ,;:") + ".";
  std::string right = s.substr(best->right_begin);
  right[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(right[0])));
  return std::make_pair(std::move(left), std::move(right));
}

// Keeps "a"/"an" agreeing with the word that now follows it.
void fix_article(std::string& sentence, const Span& article,
                 const std::string& next_word) {
  const std::string current =
      lower(sentence.substr(article.begin, article.end - article.begin));
  if (current != "a" && current != "an") return;
  const bool vowel =
      std::string_view("aeiouAEIOU").find(next_word[0]) != std::string_view::npos;
  std::string wanted = vowel ? "an" : "a";
  if (is_upper(sentence[article.begin])) wanted[0] = 'A';
  sentence.replace(article.begin, article.end - article.begin, wanted);
}

std::string rejoin(const std::string& a, const std::string& b) {
  std::string left = trim_right(a, " .!?");
  std::string right = b;
  if (right.size() >= 2 && is_upper(right[0]) && is_lower(right[1]))
    right[0] = static_cast<char>(right[0] - 'A' + 'a');
  return left + ", and " + right;
}

}  // namespace

// --- SimplificationLexicon ---------------------------------------------------

const SimplificationLexicon& SimplificationLexicon::builtin() {
  static const SimplificationLexicon lexicon =
      parse(detail::builtin_lexicon_text());
  return lexicon;
}

SimplificationLexicon SimplificationLexicon::parse(std::string_view contents) {
  SimplificationLexicon lexicon;
  std::istringstream in{std::string(contents)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 >= line.size())
      throw Error(ErrorCode::parse, "lexicon line " + std::to_string(line_no) +
                                        ": expected 'hard<TAB>plain'");
    lexicon.entries_[lower(line.substr(0, tab))] = line.substr(tab + 1);
  }
  return lexicon;
}

SimplificationLexicon SimplificationLexicon::from_file(
    const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorCode::io, "cannot read lexicon: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

const std::string* SimplificationLexicon::find(std::string_view word) const {
  const auto it = entries_.find(lower(word));
  return it == entries_.end() ? nullptr : &it->second;
}

// --- MockBackend -------------------------------------------------------------

MockBackend::MockBackend(MockOptions options, SimplificationLexicon lexicon)
    : options_(options), lexicon_(std::move(lexicon)) {
  if (options_.lead_sentences < 1)
    throw Error(ErrorCode::config, "mock lead_sentences must be >= 1");
}

std::string MockBackend::id() const {
  return std::string("mock:") +
         (options_.profile == MockProfile::monotone ? "monotone"
                                                     : "oscillating") +
         ":k" + std::to_string(options_.lead_sentences);
}

SummarizeResponse MockBackend::summarize(const SummarizeRequest& request) {
  return mock_summarize(request, static_cast<int>(request.history.size()));
}

SummarizeResponse MockBackend::mock_summarize(const SummarizeRequest& request,
                                              int round_hint) const {
  request.validate();
  std::vector<std::string> sentences = segment_sentences(request.article);
  if (sentences.empty())
    throw Error(ErrorCode::invalid_argument,
                "mock summarizer: article has no sentences");
  if (sentences.size() > static_cast<std::size_t>(options_.lead_sentences))
    sentences.resize(static_cast<std::size_t>(options_.lead_sentences));

  for (int pass = 0; pass < round_hint; ++pass) {
    const TextStats base = stats_of(sentences);

    std::vector<std::string> next;
    next.reserve(sentences.size() * 2);
    for (std::size_t i = 0; i < sentences.size(); ++i) {
      auto halves = split_sentence(sentences[i]);
      if (!halves) {
        next.push_back(sentences[i]);
        continue;
      }
      std::vector<std::string> trial = next;
      trial.push_back(halves->first);
      trial.push_back(halves->second);
      trial.insert(trial.end(), sentences.begin() + static_cast<long>(i) + 1,
                   sentences.end());
      if (ratios_not_worse(stats_of(trial), base)) {
        next.push_back(std::move(halves->first));
        next.push_back(std::move(halves->second));
      } else {
        next.push_back(sentences[i]);
      }
    }
    sentences = std::move(next);

    for (auto& sentence : sentences) {
      std::size_t idx = 0;
      while (true) {
        const std::vector<Span> spans = token_spans(sentence);
        if (idx >= spans.size()) break;
        const Span span = spans[idx];
        const std::string word =
            sentence.substr(span.begin, span.end - span.begin);
        const std::string* plain = lexicon_.find(word);
        if (plain == nullptr) {
          ++idx;
          continue;
        }
        std::string replacement = *plain;
        if (is_upper(word[0]) && is_lower(replacement[0]))
          replacement[0] = static_cast<char>(replacement[0] - 'a' + 'A');
        const std::string original = sentence;
        sentence.replace(span.begin, span.end - span.begin, replacement);
        if (idx > 0) fix_article(sentence, spans[idx - 1], replacement);
        if (ratios_not_worse(stats_of(sentences), base)) {
          idx += std::max<std::size_t>(1, tokenize_words(replacement).size());
        } else {
          sentence = original;
          ++idx;
        }
      }
    }
  }

  if (options_.profile == MockProfile::oscillating && round_hint % 2 == 1) {
    std::vector<std::string> merged;
    for (std::size_t i = 0; i < sentences.size(); i += 2) {
      if (i + 1 < sentences.size())
        merged.push_back(rejoin(sentences[i], sentences[i + 1]));
      else
        merged.push_back(sentences[i]);
    }
    sentences = std::move(merged);
  }

  SummarizeResponse out;
  out.summary = join(sentences);
  out.backend_id = id();
  return out;
}

}  // namespace lexipipe
