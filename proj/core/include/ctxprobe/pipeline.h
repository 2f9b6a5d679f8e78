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

#ifndef CTXPROBE_PIPELINE_H_
#define CTXPROBE_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <nlohmann/json.hpp>
#include <string>

#include "ctxprobe/config.h"
#include "ctxprobe/knowledge_base.h"
#include "ctxprobe/scorer.h"

namespace ctxprobe {

struct RunSummary {
  std::string run_id;
  std::string config_hash;
  std::string status;  // "ok", or "empty" when no series was scored
  std::filesystem::path run_dir;

  // triples_in == triples_scored + triples_skipped
  std::uint64_t triples_in = 0;
  std::uint64_t triples_scored = 0;
  std::uint64_t triples_skipped = 0;
  std::map<std::string, std::uint64_t> triple_skips;

  std::uint64_t series_planned = 0;
  std::uint64_t series_scored = 0;
  std::uint64_t series_truncated = 0;
  std::map<std::string, std::uint64_t> series_skips;
  std::uint64_t rc_records = 0;

  nlohmann::json aggregate;
};

// Mock backend by name, or a RemoteScorer for remote configs.
std::unique_ptr<Scorer> MakeScorer(const RunConfig& config,
                                   const KnowledgeBase& kb);

// Runs every (triple, document, variant) unit end to end and writes
// records.jsonl, aggregate.json, report.txt and config.json under
// <out>/<run id>. The run id derives from the config hash, so identical
// configs map to the same id. Throws only on config or load errors;
// per-unit failures are recorded and counted.
RunSummary Run(const RunConfig& config);

// Same, with a caller-provided backend.
RunSummary Run(const RunConfig& config, const Scorer& scorer);

}  // namespace ctxprobe

#endif  // CTXPROBE_PIPELINE_H_
