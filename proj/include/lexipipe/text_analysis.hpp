// Copyright 2026 The lexipipe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace lexipipe {

/// Counts feeding the Flesch Reading Ease formula.
///
/// A valid value has sentence_count >= 1, word_count >= 1 and
/// syllable_count >= word_count.
struct TextStats {
  std::int64_t sentence_count = 0;
  std::int64_t word_count = 0;
  std::int64_t syllable_count = 0;

  bool valid() const noexcept {
    return sentence_count >= 1 && word_count >= 1 &&
           syllable_count >= word_count;
  }

  friend bool operator==(const TextStats&, const TextStats&) = default;
};

struct ReadabilityScore {
  double fre = 0.0;  // unclipped
  TextStats stats;
};

/// Abbreviations that do not end a sentence ("Mr.", "U.S.", "e.g.").
/// Entries keep their trailing period and match case-sensitively.
class AbbreviationList {
 public:
  AbbreviationList() = default;

  /// The list shipped in data/abbreviations.txt, compiled into the library.
  static const AbbreviationList& builtin();

  /// One abbreviation per line; blank lines and lines starting with '#'
  /// are ignored.
  static AbbreviationList parse(std::string_view contents);
  static AbbreviationList from_file(const std::filesystem::path& path);

  bool contains(std::string_view token) const;
  std::size_t size() const noexcept { return entries_.size(); }

 private:
  std::unordered_set<std::string> entries_;
};

/// Maximal runs of letters/digits. Apostrophes and hyphens are kept when
/// they sit between two word characters, and ',' or '.' when they sit
/// between two digits ("2,000"). Case is preserved.
std::vector<std::string> tokenize_words(std::string_view text);

/// Splits after '.', '!' or '?' (plus any closing quotes or brackets) when
/// followed by whitespace and a capital letter, or by the end of the text.
/// A single '.' closing a listed abbreviation never splits. Segments with
/// no word characters are dropped; returned sentences are trimmed
/// substrings of the input.
std::vector<std::string> segment_sentences(
    std::string_view text,
    const AbbreviationList& abbreviations = AbbreviationList::builtin());

/// Vowel-group syllable estimate for one token. Hyphenated compounds sum
/// over their parts and pure numerals count as one syllable.
///
/// Throws Error(invalid_argument) when the token has no letters or digits.
int count_syllables(std::string_view word);

/// Throws Error(unscorable_text) when the text has no word tokens.
TextStats text_stats(
    std::string_view text,
    const AbbreviationList& abbreviations = AbbreviationList::builtin());

/// 206.835 - 1.015 * (words / sentences) - 84.6 * (syllables / words).
///
/// Throws Error(invalid_argument) if `stats` violates its invariants.
ReadabilityScore flesch_reading_ease(const TextStats& stats);

/// Convenience: flesch_reading_ease(text_stats(text)).
ReadabilityScore score_readability(std::string_view text);

}  // namespace lexipipe
