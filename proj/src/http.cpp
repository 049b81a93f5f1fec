// Copyright 2026 The lexipipe Authors
// SPDX-License-Identifier: Apache-2.0

#include "lexipipe/http.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <thread>

#include "httplib.h"

namespace lexipipe {

namespace {

bool iequals(const std::string& a, const std::string& b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

class HttplibTransport final : public HttpTransport {
 public:
  HttpResponse post(const HttpRequest& request) override {
    const auto [origin, path] = split_base_url(request.url);
    httplib::Client client(origin);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(
        request.timeout);
    const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(
        request.timeout - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());
    client.set_write_timeout(secs.count(), usecs.count());

    httplib::Headers headers;
    std::string content_type = "application/json";
    for (const auto& [k, v] : request.headers) {
      if (iequals(k, "Content-Type"))
        content_type = v;
      else
        headers.emplace(k, v);
    }
    auto result = client.Post(path.empty() ? "/" : path, headers,
                              request.body, content_type);
    if (!result)
      throw Error(ErrorCode::transient,
                  "HTTP request to " + request.url +
                      " failed: " + httplib::to_string(result.error()));
    HttpResponse response;
    response.status = result->status;
    response.body = result->body;
    for (const auto& [k, v] : result->headers) response.headers.emplace(k, v);
    return response;
  }
};

}  // namespace

std::shared_ptr<HttpTransport> make_http_transport() {
  return std::make_shared<HttplibTransport>();
}

std::pair<std::string, std::string> split_base_url(const std::string& url) {
  const std::size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos)
    throw Error(ErrorCode::config, "URL must include a scheme: " + url);
  const std::size_t path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

std::chrono::milliseconds RetryPolicy::backoff(int retry) const {
  const double scaled = static_cast<double>(initial_backoff.count()) *
                        std::pow(multiplier, std::max(0, retry - 1));
  const double capped =
      std::min(scaled, static_cast<double>(max_backoff.count()));
  return std::chrono::milliseconds(static_cast<std::int64_t>(capped));
}

Sleeper default_sleeper() {
  return [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

}  // namespace lexipipe
