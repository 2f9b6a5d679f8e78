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

#ifndef CTXPROBE_REMOTE_SCORER_H_
#define CTXPROBE_REMOTE_SCORER_H_

#include <chrono>
#include <condition_variable>
#include <functional>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "ctxprobe/scorer.h"

namespace ctxprobe {

// Wire format of POST /score:
//   request  {"id": str, "text": str, "mask_token": str, "candidates": [str]}
//   response {"id": str, "scores": [number]}   scores aligned with candidates
// Status 400 malformed request, 422 untokenizable candidates (body carries
// "indices"), 503 model unavailable. 413 is read as an over-length input.
std::string EncodeScoreRequest(const ScoreRequest& req);

// Turns an HTTP status and body into scores for `req`, or throws ScoreError.
std::vector<CandidateScore> DecodeScoreResponse(int status,
                                                std::string_view body,
                                                const ScoreRequest& req);

struct SidecarHealth {
  std::string model;
  int max_length = 0;
};

SidecarHealth DecodeHealth(std::string_view body);

struct RemoteOptions {
  int max_retries = 3;
  std::chrono::milliseconds initial_backoff{100};
  std::chrono::milliseconds timeout{30000};
  int max_in_flight = 4;
  // Receives protocol diagnostics, including raw payloads.
  std::function<void(std::string_view)> log;
};

// Client for a scoring sidecar at "http://host:port[/prefix]". Retries
// unavailable/timeout failures with exponential backoff; requests are
// idempotent and matched to responses by id.
class RemoteScorer : public Scorer {
 public:
  explicit RemoteScorer(std::string endpoint, RemoteOptions options = {});

  std::string Name() const override { return "remote:" + endpoint_; }
  std::vector<CandidateScore> Score(const ScoreRequest& req) const override;

  SidecarHealth Health() const;

  const std::string& endpoint() const { return endpoint_; }

 private:
  class Gate {
   public:
    explicit Gate(int limit) : free_(limit < 1 ? 1 : limit) {}
    void Acquire();
    void Release();

   private:
    std::mutex mu_;
    std::condition_variable cv_;
    int free_;
  };

  std::string endpoint_;
  std::string host_;    // scheme://host:port
  std::string prefix_;  // path prefix without trailing slash
  RemoteOptions options_;
  mutable Gate gate_;
};

}  // namespace ctxprobe

#endif  // CTXPROBE_REMOTE_SCORER_H_
