// Copyright 2026 The ctxprobe Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ctxprobe/remote_scorer.h"

#include <cmath>
#include <optional>
#include <nlohmann/json.hpp>
#include <thread>

#include "ctxprobe/errors.h"
#include "httplib.h"

namespace ctxprobe {
namespace {

using nlohmann::json;

std::string Truncated(std::string_view body) {
  constexpr std::size_t kMax = 512;
  if (body.size() <= kMax) return std::string(body);
  return std::string(body.substr(0, kMax)) + "...";
}

}  // namespace

std::string EncodeScoreRequest(const ScoreRequest& req) {
  json body;
  body["id"] = req.id;
  body["text"] = req.input_text;
  body["mask_token"] = req.mask_token;
  json candidates = json::array();
  for (const auto& c : req.candidates) candidates.push_back(c.surface);
  body["candidates"] = std::move(candidates);
  return body.dump();
}

std::vector<CandidateScore> DecodeScoreResponse(int status,
                                                std::string_view body,
                                                const ScoreRequest& req) {
  const std::string raw = Truncated(body);
  if (status == 422) {
    std::vector<std::size_t> indices;
    try {
      json parsed = json::parse(body);
      for (const auto& i : parsed.at("indices")) {
        indices.push_back(i.get<std::size_t>());
      }
    } catch (const json::exception&) {
      throw ScoreError(ScoreError::Kind::kProtocol,
                       "422 without candidate indices: " + raw);
    }
    for (auto i : indices) {
      if (i >= req.candidates.size()) {
        throw ScoreError(ScoreError::Kind::kProtocol,
                         "422 index out of range: " + raw);
      }
    }
    throw ScoreError(ScoreError::Kind::kUntokenizable,
                     "untokenizable candidates", std::move(indices));
  }
  if (status == 503) {
    throw ScoreError(ScoreError::Kind::kUnavailable, "model unavailable: " + raw);
  }
  if (status == 413) {
    throw ScoreError(ScoreError::Kind::kOverLength, "input over length: " + raw);
  }
  if (status == 400) {
    throw ScoreError(ScoreError::Kind::kProtocol,
                     "sidecar rejected request: " + raw);
  }
  if (status != 200) {
    throw ScoreError(ScoreError::Kind::kModel,
                     "sidecar status " + std::to_string(status) + ": " + raw);
  }

  json parsed;
  try {
    parsed = json::parse(body);
  } catch (const json::parse_error&) {
    throw ScoreError(ScoreError::Kind::kProtocol, "malformed body: " + raw);
  }
  if (!parsed.is_object() || !parsed.contains("id") ||
      !parsed["id"].is_string() || !parsed.contains("scores") ||
      !parsed["scores"].is_array()) {
    throw ScoreError(ScoreError::Kind::kProtocol,
                     "response lacks id/scores: " + raw);
  }
  if (parsed["id"].get<std::string>() != req.id) {
    throw ScoreError(ScoreError::Kind::kProtocol,
                     "response id mismatch for request '" + req.id + "': " + raw);
  }
  const auto& scores = parsed["scores"];
  if (scores.size() != req.candidates.size()) {
    throw ScoreError(ScoreError::Kind::kProtocol,
                     "expected " + std::to_string(req.candidates.size()) +
                         " scores: " + raw);
  }
  std::vector<CandidateScore> out;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!scores[i].is_number() || !std::isfinite(scores[i].get<double>())) {
      throw ScoreError(ScoreError::Kind::kProtocol,
                       "non-numeric score at index " + std::to_string(i) +
                           ": " + raw);
    }
    out.push_back({req.candidates[i].entity, scores[i].get<double>()});
  }
  return out;
}

SidecarHealth DecodeHealth(std::string_view body) {
  try {
    json parsed = json::parse(body);
    return SidecarHealth{parsed.at("model").get<std::string>(),
                         parsed.at("max_length").get<int>()};
  } catch (const json::exception&) {
    throw ScoreError(ScoreError::Kind::kProtocol,
                     "malformed /health body: " + Truncated(body));
  }
}

void RemoteScorer::Gate::Acquire() {
  std::unique_lock lock(mu_);
  cv_.wait(lock, [&] { return free_ > 0; });
  --free_;
}

void RemoteScorer::Gate::Release() {
  {
    std::lock_guard lock(mu_);
    ++free_;
  }
  cv_.notify_one();
}

RemoteScorer::RemoteScorer(std::string endpoint, RemoteOptions options)
    : endpoint_(std::move(endpoint)),
      options_(std::move(options)),
      gate_(options_.max_in_flight) {
  const auto scheme = endpoint_.find("://");
  if (scheme == std::string::npos || endpoint_.compare(0, scheme, "http") != 0) {
    throw ContractViolation("endpoint must look like http://host:port, got '" +
                            endpoint_ + "'");
  }
  const auto path = endpoint_.find('/', scheme + 3);
  host_ = endpoint_.substr(0, path);
  if (path != std::string::npos) {
    prefix_ = endpoint_.substr(path);
    while (!prefix_.empty() && prefix_.back() == '/') prefix_.pop_back();
  }
}

std::vector<CandidateScore> RemoteScorer::Score(const ScoreRequest& req) const {
  ValidateRequest(req);
  const std::string body = EncodeScoreRequest(req);
  auto backoff = options_.initial_backoff;
  for (int attempt = 0;; ++attempt) {
    httplib::Result res = [&] {
      gate_.Acquire();
      struct Release {
        Gate& gate;
        ~Release() { gate.Release(); }
      } release{gate_};
      httplib::Client client(host_);
      client.set_connection_timeout(options_.timeout);
      client.set_read_timeout(options_.timeout);
      client.set_write_timeout(options_.timeout);
      return client.Post(prefix_ + "/score", body, "application/json");
    }();

    std::optional<ScoreError> failure;
    if (!res) {
      const auto err = res.error();
      const auto kind = err == httplib::Error::Read
                            ? ScoreError::Kind::kTimeout
                            : ScoreError::Kind::kUnavailable;
      failure.emplace(kind, "request '" + req.id + "' failed: " +
                                httplib::to_string(err));
    } else {
      try {
        return DecodeScoreResponse(res->status, res->body, req);
      } catch (const ScoreError& e) {
        if (e.kind() == ScoreError::Kind::kProtocol && options_.log) {
          options_.log("protocol error on request '" + req.id + "': " +
                       e.what());
        }
        if (!e.retryable()) throw;
        failure.emplace(e);
      }
    }
    if (attempt >= options_.max_retries) throw *failure;
    std::this_thread::sleep_for(backoff);
    backoff *= 2;
  }
}

SidecarHealth RemoteScorer::Health() const {
  httplib::Client client(host_);
  client.set_connection_timeout(options_.timeout);
  client.set_read_timeout(options_.timeout);
  auto res = client.Get(prefix_ + "/health");
  if (!res) {
    throw ScoreError(ScoreError::Kind::kUnavailable,
                     "health check failed: " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw ScoreError(ScoreError::Kind::kUnavailable,
                     "health status " + std::to_string(res->status));
  }
  return DecodeHealth(res->body);
}

}  // namespace ctxprobe
