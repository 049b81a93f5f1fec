// Copyright 2026 The lexipipe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lexipipe {

enum class ErrorCode {
  invalid_argument,
  unscorable_text,
  config,
  credential,
  transient,  // network failure, timeout, rate limit, 5xx
  backend,    // terminal backend failure
  protocol,   // peer answered with something we cannot accept
  io,
  parse,
  internal,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  bool retryable() const noexcept { return code_ == ErrorCode::transient; }

 private:
  ErrorCode code_;
};

}  // namespace lexipipe
