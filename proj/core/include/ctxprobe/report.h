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

#ifndef CTXPROBE_REPORT_H_
#define CTXPROBE_REPORT_H_

#include <filesystem>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <string_view>

#include "ctxprobe/evaluator.h"

namespace ctxprobe {

inline constexpr std::string_view kAggregateSchema = "ctxprobe.aggregate/1";
inline constexpr std::string_view kAggregateFile = "aggregate.json";
inline constexpr std::string_view kReportFile = "report.txt";
inline constexpr std::string_view kRecordsFile = "records.jsonl";
inline constexpr std::string_view kConfigEchoFile = "config.json";

// {"n": N, "understand": u, "confuse": c, "misunderstand": m}; the three
// proportions are null when N == 0.
nlohmann::json UcmToJson(const UcmScore& score);
nlohmann::json RcBehaviorToJson(const RcBehavior& behavior);

// Canonical on-disk form of an aggregate (two-space indent, trailing newline).
std::string SerializeAggregate(const nlohmann::json& aggregate);

// Plain-text tables: rank-change behavior, UCM_k against Top-k accuracy, and
// target against negative-target UCM_m. A pure function of the aggregate, so
// re-parsing aggregate.json reproduces the printed report byte for byte.
std::string RenderReport(const nlohmann::json& aggregate);

// Reads <out_dir>/<run_id>/aggregate.json, rewrites report.txt beside it and
// returns the text. Throws std::runtime_error for an unknown run id.
std::string EmitReport(const std::filesystem::path& out_dir,
                       std::string_view run_id);

}  // namespace ctxprobe

#endif  // CTXPROBE_REPORT_H_
