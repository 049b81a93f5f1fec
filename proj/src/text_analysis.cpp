// Copyright 2026 The lexipipe Authors
// SPDX-License-Identifier: Apache-2.0

#include "lexipipe/text_analysis.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "builtin_resources.hpp"
#include "lexipipe/error.hpp"
#include "utf8.hpp"

namespace lexipipe {

namespace {

using detail::CodePoint;
using detail::decode_utf8;
using detail::is_apostrophe;
using detail::is_ascii_digit;
using detail::is_hyphen;
using detail::is_letter;
using detail::is_word_char;

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

bool is_terminal(char c) { return c == '.' || c == '!' || c == '?'; }

// Returns the byte length of a closing quote/bracket at `pos`, or 0.
std::size_t closing_mark_at(std::string_view text, std::size_t pos) {
  if (pos >= text.size()) return 0;
  const char c = text[pos];
  if (c == '"' || c == '\'' || c == ')' || c == ']') return 1;
  // U+2019 and U+201D
  if (text.substr(pos, 3) == "\xE2\x80\x99" ||
      text.substr(pos, 3) == "\xE2\x80\x9D")
    return 3;
  return 0;
}

std::size_t opening_mark_at(std::string_view text, std::size_t pos) {
  if (pos >= text.size()) return 0;
  const char c = text[pos];
  if (c == '"' || c == '\'' || c == '(' || c == '[') return 1;
  // U+2018 and U+201C
  if (text.substr(pos, 3) == "\xE2\x80\x98" ||
      text.substr(pos, 3) == "\xE2\x80\x9C")
    return 3;
  return 0;
}

bool starts_with_capital(std::string_view text, std::size_t pos) {
  if (pos >= text.size()) return false;
  const auto c = static_cast<unsigned char>(text[pos]);
  if (c >= 'A' && c <= 'Z') return true;
  // Latin-1 capitals U+00C0..U+00DE (minus U+00D7) encode as C3 80..9E.
  if (c == 0xC3 && pos + 1 < text.size()) {
    const auto c1 = static_cast<unsigned char>(text[pos + 1]);
    return c1 >= 0x80 && c1 <= 0x9E && c1 != 0x97;
  }
  return false;
}

std::string_view trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return s.substr(b, e - b);
}

bool has_word_char(std::string_view s) {
  for (const auto& cp : decode_utf8(s))
    if (is_word_char(cp.value)) return true;
  return false;
}

// Token that ends with the period at `period_pos`: back to the previous
// whitespace, minus any opening quotes or brackets.
std::string_view token_ending_at(std::string_view text,
                                 std::size_t period_pos) {
  std::size_t b = period_pos;
  while (b > 0 && !is_space(text[b - 1])) --b;
  while (b < period_pos) {
    const std::size_t skip = opening_mark_at(text, b);
    if (skip == 0) break;
    b += skip;
  }
  return text.substr(b, period_pos + 1 - b);
}

// Folds ASCII and Latin-1 letters to lowercase ASCII; other letters map to
// a consonant placeholder so they still count as letters.
char fold_letter(char32_t c) {
  if (c >= U'A' && c <= U'Z') return static_cast<char>(c - U'A' + U'a');
  if (c >= U'a' && c <= U'z') return static_cast<char>(c);
  if ((c >= 0xC0 && c <= 0xC6) || (c >= 0xE0 && c <= 0xE6)) return 'a';
  if ((c >= 0xC8 && c <= 0xCB) || (c >= 0xE8 && c <= 0xEB)) return 'e';
  if ((c >= 0xCC && c <= 0xCF) || (c >= 0xEC && c <= 0xEF)) return 'i';
  if ((c >= 0xD2 && c <= 0xD6) || (c >= 0xF2 && c <= 0xF6)) return 'o';
  if ((c >= 0xD9 && c <= 0xDC) || (c >= 0xF9 && c <= 0xFC)) return 'u';
  if (c == 0xDD || c == 0xFD || c == 0xFF) return 'y';
  return 'x';
}

bool is_vowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y';
}

int vowel_group_estimate(const std::string& w) {
  int groups = 0;
  bool prev_vowel = false;
  for (char c : w) {
    const bool v = is_vowel(c);
    if (v && !prev_vowel) ++groups;
    prev_vowel = v;
  }
  const std::size_t n = w.size();
  if (n >= 2 && w[n - 1] == 'e') {
    const bool consonant_le =
        w[n - 2] == 'l' && n >= 3 && !is_vowel(w[n - 3]);
    if (!consonant_le && !is_vowel(w[n - 2])) --groups;
  } else if (n > 3 && w[n - 2] == 'e' && w[n - 1] == 'd') {
    const char before = w[n - 3];
    if (!is_vowel(before) && before != 't' && before != 'd') --groups;
  }
  return std::max(groups, 1);
}

}  // namespace

// --- AbbreviationList -------------------------------------------------------

const AbbreviationList& AbbreviationList::builtin() {
  static const AbbreviationList list =
      parse(detail::builtin_abbreviations_text());
  return list;
}

AbbreviationList AbbreviationList::parse(std::string_view contents) {
  AbbreviationList list;
  std::size_t pos = 0;
  while (pos <= contents.size()) {
    const std::size_t nl = contents.find('\n', pos);
    const std::size_t end = nl == std::string_view::npos ? contents.size() : nl;
    const std::string_view line = trim(contents.substr(pos, end - pos));
    if (!line.empty() && line.front() != '#')
      list.entries_.emplace(line);
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return list;
}

AbbreviationList AbbreviationList::from_file(
    const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorCode::io,
                "cannot read abbreviation list: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

bool AbbreviationList::contains(std::string_view token) const {
  return entries_.find(std::string(token)) != entries_.end();
}

// --- tokenization -----------------------------------------------------------

std::vector<std::string> tokenize_words(std::string_view text) {
  const std::vector<CodePoint> cps = decode_utf8(text);
  std::vector<std::string> tokens;
  const std::size_t n = cps.size();
  std::size_t i = 0;
  while (i < n) {
    if (!is_word_char(cps[i].value)) {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j < n) {
      const char32_t c = cps[j].value;
      if (is_word_char(c)) {
        ++j;
        continue;
      }
      const bool next_word = j + 1 < n && is_word_char(cps[j + 1].value);
      if ((is_apostrophe(c) || is_hyphen(c)) && next_word) {
        j += 2;
        continue;
      }
      if ((c == U',' || c == U'.') && is_ascii_digit(cps[j - 1].value) &&
          j + 1 < n && is_ascii_digit(cps[j + 1].value)) {
        j += 2;
        continue;
      }
      break;
    }
    const std::size_t begin = cps[i].offset;
    const std::size_t end = cps[j - 1].offset + cps[j - 1].length;
    tokens.emplace_back(text.substr(begin, end - begin));
    i = j;
  }
  return tokens;
}

std::vector<std::string> segment_sentences(
    std::string_view text, const AbbreviationList& abbreviations) {
  std::vector<std::string> sentences;
  auto emit = [&](std::size_t b, std::size_t e) {
    const std::string_view s = trim(text.substr(b, e - b));
    if (!s.empty() && has_word_char(s)) sentences.emplace_back(s);
  };

  const std::size_t n = text.size();
  std::size_t seg_start = 0;
  std::size_t i = 0;
  while (i < n) {
    if (!is_terminal(text[i])) {
      ++i;
      continue;
    }
    const std::size_t run_start = i;
    std::size_t j = i;
    while (j < n && is_terminal(text[j])) ++j;
    const std::size_t run_len = j - run_start;
    while (std::size_t skip = closing_mark_at(text, j)) j += skip;

    std::size_t k = j;
    while (k < n && is_space(text[k])) ++k;

    bool boundary = false;
    if (k == n) {
      boundary = true;
    } else if (k > j) {
      std::size_t m = k;
      while (std::size_t skip = opening_mark_at(text, m)) m += skip;
      boundary = starts_with_capital(text, m);
    }
    if (boundary && run_len == 1 && text[run_start] == '.' &&
        abbreviations.contains(token_ending_at(text, run_start)))
      boundary = false;

    if (boundary) {
      emit(seg_start, j);
      seg_start = k;
      i = k;
    } else {
      i = j;
    }
  }
  if (seg_start < n) emit(seg_start, n);
  return sentences;
}

// --- syllables and readability ---------------------------------------------

int count_syllables(std::string_view word) {
  const std::vector<CodePoint> cps = decode_utf8(word);
  int total = 0;
  bool any_content = false;
  std::string letters;
  bool part_has_digit = false;
  auto flush_part = [&] {
    if (!letters.empty()) {
      total += vowel_group_estimate(letters);
    } else if (part_has_digit) {
      total += 1;
    }
    letters.clear();
    part_has_digit = false;
  };
  for (const auto& cp : cps) {
    if (is_hyphen(cp.value)) {
      flush_part();
    } else if (is_letter(cp.value)) {
      letters.push_back(fold_letter(cp.value));
      any_content = true;
    } else if (is_ascii_digit(cp.value)) {
      part_has_digit = true;
      any_content = true;
    }
  }
  flush_part();
  if (!any_content)
    throw Error(ErrorCode::invalid_argument,
                "untokenizable input: '" + std::string(word) +
                    "' has no letters or digits");
  return std::max(total, 1);
}

TextStats text_stats(std::string_view text,
                     const AbbreviationList& abbreviations) {
  const std::vector<std::string> words = tokenize_words(text);
  if (words.empty())
    throw Error(ErrorCode::unscorable_text, "no scorable text");
  TextStats stats;
  stats.sentence_count = std::max<std::int64_t>(
      1, static_cast<std::int64_t>(
             segment_sentences(text, abbreviations).size()));
  stats.word_count = static_cast<std::int64_t>(words.size());
  for (const auto& w : words) stats.syllable_count += count_syllables(w);
  return stats;
}

ReadabilityScore flesch_reading_ease(const TextStats& stats) {
  if (!stats.valid())
    throw Error(ErrorCode::invalid_argument,
                "TextStats violates its invariants (sentences >= 1, words >= "
                "1, syllables >= words)");
  const double words_per_sentence = static_cast<double>(stats.word_count) /
                                    static_cast<double>(stats.sentence_count);
  const double syllables_per_word = static_cast<double>(stats.syllable_count) /
                                    static_cast<double>(stats.word_count);
  return {206.835 - 1.015 * words_per_sentence - 84.6 * syllables_per_word,
          stats};
}

ReadabilityScore score_readability(std::string_view text) {
  return flesch_reading_ease(text_stats(text));
}

}  // namespace lexipipe
