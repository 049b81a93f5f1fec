// Copyright 2026 The lexipipe Authors
// SPDX-License-Identifier: Apache-2.0

#include "lexipipe/error.hpp"

namespace lexipipe {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::unscorable_text: return "unscorable_text";
    case ErrorCode::config: return "config";
    case ErrorCode::credential: return "credential";
    case ErrorCode::transient: return "transient";
    case ErrorCode::backend: return "backend";
    case ErrorCode::protocol: return "protocol";
    case ErrorCode::io: return "io";
    case ErrorCode::parse: return "parse";
    case ErrorCode::internal: return "internal";
  }
  return "unknown";
}

}  // namespace lexipipe
