// Copyright 2026 The lexipipe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string_view>

namespace lexipipe::detail {

// Contents of the files under data/, embedded at configure time.
std::string_view builtin_abbreviations_text();
std::string_view builtin_lexicon_text();
std::string_view builtin_few_shot_text();

}  // namespace lexipipe::detail
