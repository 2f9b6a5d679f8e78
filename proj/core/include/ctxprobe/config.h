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

#ifndef CTXPROBE_CONFIG_H_
#define CTXPROBE_CONFIG_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "ctxprobe/context_builder.h"

namespace ctxprobe {

// Overrides the endpoint of a remote backend when set.
inline constexpr const char* kEndpointEnvVar = "CTXPROBE_SCORER_ENDPOINT";

struct CorpusSpec {
  std::filesystem::path path;
  std::string source;  // resource tag, e.g. "ehr" or "pmc"
};

struct RunConfig {
  std::filesystem::path kb_path;
  std::vector<CorpusSpec> corpora;
  std::filesystem::path templates_path;
  std::vector<SeriesVariant> variants;
  // "uniform", "copycat", "oracle", "remote" or an http:// endpoint.
  std::string backend = "copycat";
  std::vector<int> k_values{1, 5};
  std::uint64_t seed = 42;
  int concurrency = 1;
  std::size_t max_segments = 0;     // 0 = every pool mention
  std::size_t max_input_bytes = 0;  // 0 = no budget
  std::string mask_token = "[MASK]";
  std::filesystem::path out_dir = "runs";
  int retries = 3;
  int timeout_ms = 30000;

  bool remote() const;
};

// Parses a config object. Relative paths resolve against `base_dir`.
// Throws ConfigError listing every offending field.
RunConfig ParseConfig(const nlohmann::json& doc,
                      const std::filesystem::path& base_dir);

// Reads, merges `overrides` over the file's fields, applies the endpoint
// environment override, and validates.
RunConfig ValidateConfig(const std::filesystem::path& path,
                         const nlohmann::json& overrides =
                             nlohmann::json::object());

// Normalized echo with every default filled in.
nlohmann::json ConfigToJson(const RunConfig& config);

// Hex digest over everything that can change results (not the output
// directory or the concurrency limit).
std::string ConfigHash(const RunConfig& config);

}  // namespace ctxprobe

#endif  // CTXPROBE_CONFIG_H_
