// Copyright 2026 The lexipipe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "lexipipe/error.hpp"

namespace lexipipe {

struct HttpRequest {
  std::string url;  // scheme://host[:port]/path
  std::vector<std::pair<std::string, std::string>> headers;
  std::string body;
  std::chrono::milliseconds timeout{60'000};
};

struct HttpResponse {
  int status = 0;
  std::string body;
  std::map<std::string, std::string> headers;
};

/// Blocking JSON POST. Connection failures and timeouts throw
/// Error(transient); any HTTP status is returned to the caller.
class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  virtual HttpResponse post(const HttpRequest& request) = 0;
};

std::shared_ptr<HttpTransport> make_http_transport();

/// Splits "https://host:port/prefix" into ("https://host:port", "/prefix");
/// a bare origin gets the path "/".
std::pair<std::string, std::string> split_base_url(const std::string& url);

struct RetryPolicy {
  int max_attempts = 3;
  std::chrono::milliseconds initial_backoff{500};
  double multiplier = 2.0;
  std::chrono::milliseconds max_backoff{8'000};

  /// Delay before retry number `retry` (1-based).
  std::chrono::milliseconds backoff(int retry) const;
};

using Sleeper = std::function<void(std::chrono::milliseconds)>;

Sleeper default_sleeper();

/// Runs `fn` until it returns or throws a non-retryable error, sleeping
/// between attempts per `policy`. The last retryable error is rethrown once
/// attempts run out.
template <typename Fn>
auto with_retries(const RetryPolicy& policy, const Sleeper& sleep, Fn&& fn)
    -> decltype(fn()) {
  for (int attempt = 1;; ++attempt) {
    try {
      return fn();
    } catch (const Error& e) {
      if (!e.retryable() || attempt >= policy.max_attempts) throw;
    }
    sleep(policy.backoff(attempt));
  }
}

}  // namespace lexipipe
