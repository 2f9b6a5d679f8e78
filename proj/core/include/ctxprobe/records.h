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

#ifndef CTXPROBE_RECORDS_H_
#define CTXPROBE_RECORDS_H_

#include <filesystem>
#include <fstream>
#include <mutex>
#include <nlohmann/json.hpp>
#include <string>
#include <string_view>
#include <vector>

namespace ctxprobe {

// Append-only run log, one JSON object per line:
//   {"kind": ..., "run_id": ..., "config_hash": ..., "ts": ..., "payload": ...}
// Each line is flushed as written so a crashed run leaves a valid prefix.
// Safe to share between threads.
class RecordWriter {
 public:
  RecordWriter(const std::filesystem::path& file, std::string run_id,
               std::string config_hash);

  void Write(std::string_view kind, nlohmann::json payload);
  void WriteBatch(std::vector<std::pair<std::string, nlohmann::json>> records);

 private:
  std::string Line(std::string_view kind, nlohmann::json payload) const;

  std::mutex mu_;
  std::ofstream out_;
  std::string run_id_;
  std::string config_hash_;
};

// Reads every complete record; a torn final line is ignored.
std::vector<nlohmann::json> ReadRecords(const std::filesystem::path& file);

}  // namespace ctxprobe

#endif  // CTXPROBE_RECORDS_H_
