// Copyright 2026 The lexipipe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string_view>

namespace lexipipe {

std::string_view version();

}  // namespace lexipipe
