// Copyright 2026 The lexipipe Authors
// SPDX-License-Identifier: Apache-2.0

#include "lexipipe/version.hpp"

namespace lexipipe {

std::string_view version() { return LEXIPIPE_VERSION; }

}  // namespace lexipipe
