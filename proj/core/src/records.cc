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

#include "ctxprobe/records.h"

#include <chrono>
#include <ctime>

#include "ctxprobe/errors.h"

namespace ctxprobe {
namespace {

std::string UtcTimestamp() {
  const auto now = std::chrono::system_clock::now();
  const auto secs = std::chrono::system_clock::to_time_t(now);
  const auto millis = std::chrono::duration_cast<std::chrono::milliseconds>(
                          now.time_since_epoch())
                          .count() %
                      1000;
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%S", &tm);
  char out[40];
  std::snprintf(out, sizeof(out), "%s.%03dZ", buf, static_cast<int>(millis));
  return out;
}

}  // namespace

RecordWriter::RecordWriter(const std::filesystem::path& file,
                           std::string run_id, std::string config_hash)
    : out_(file, std::ios::out | std::ios::trunc),
      run_id_(std::move(run_id)),
      config_hash_(std::move(config_hash)) {
  if (!out_) {
    throw std::runtime_error("cannot open record file '" + file.string() + "'");
  }
}

std::string RecordWriter::Line(std::string_view kind,
                               nlohmann::json payload) const {
  nlohmann::json record;
  record["kind"] = kind;
  record["run_id"] = run_id_;
  record["config_hash"] = config_hash_;
  record["ts"] = UtcTimestamp();
  record["payload"] = std::move(payload);
  return record.dump() + "\n";
}

void RecordWriter::Write(std::string_view kind, nlohmann::json payload) {
  const std::string line = Line(kind, std::move(payload));
  std::lock_guard lock(mu_);
  out_ << line;
  out_.flush();
}

void RecordWriter::WriteBatch(
    std::vector<std::pair<std::string, nlohmann::json>> records) {
  std::string block;
  for (auto& [kind, payload] : records) block += Line(kind, std::move(payload));
  std::lock_guard lock(mu_);
  out_ << block;
  out_.flush();
}

std::vector<nlohmann::json> ReadRecords(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ParseError(file.string(), 0, "cannot open file");
  std::vector<nlohmann::json> out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    try {
      out.push_back(nlohmann::json::parse(line));
    } catch (const nlohmann::json::parse_error&) {
      if (in.peek() == std::char_traits<char>::eof()) break;  // torn tail
      throw ParseError(file.string(), number, "corrupt record");
    }
  }
  return out;
}

}  // namespace ctxprobe
