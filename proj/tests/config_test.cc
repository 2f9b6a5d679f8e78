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

#include "ctxprobe/config.h"

#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>

#include "ctxprobe/errors.h"
#include "synthetic.h"

namespace ctxprobe {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

const json kMinimal = {{"kb", "kb.jsonl"},
                       {"corpus", "corpus.jsonl"},
                       {"templates", "templates.jsonl"}};

std::vector<std::string> ErrorFields(const json& doc) {
  try {
    ParseConfig(doc, "/base");
  } catch (const ConfigError& e) {
    std::vector<std::string> fields;
    for (const auto& f : e.errors()) fields.push_back(f.field);
    return fields;
  }
  return {};
}

TEST(ParseConfig, DefaultsFilled) {
  const RunConfig cfg = ParseConfig(kMinimal, "/base");
  EXPECT_EQ(cfg.kb_path, fs::path("/base/kb.jsonl"));
  ASSERT_EQ(cfg.corpora.size(), 1u);
  EXPECT_EQ(cfg.corpora[0].source, "corpus");
  EXPECT_EQ(cfg.variants.size(), 8u);
  EXPECT_EQ(cfg.backend, "copycat");
  EXPECT_EQ(cfg.k_values, (std::vector<int>{1, 5}));
  EXPECT_EQ(cfg.seed, 42u);
  EXPECT_EQ(cfg.max_segments, 0u);
  EXPECT_EQ(cfg.out_dir, fs::path("/base/runs"));
}

TEST(ParseConfig, MissingKbIsFieldError) {
  json doc = kMinimal;
  doc.erase("kb");
  EXPECT_EQ(ErrorFields(doc), std::vector<std::string>{"kb"});
}

TEST(ParseConfig, KZeroIsRangeError) {
  json doc = kMinimal;
  doc["k"] = {0, 5};
  EXPECT_EQ(ErrorFields(doc), std::vector<std::string>{"k"});
}

TEST(ParseConfig, ReportsEveryBadField) {
  json doc = kMinimal;
  doc["variants"] = {"real", "bogus"};
  doc["backend"] = "gpt";
  doc["seed"] = -1;
  doc["concurrency"] = 0;
  doc["colour"] = "blue";
  auto fields = ErrorFields(doc);
  std::sort(fields.begin(), fields.end());
  EXPECT_EQ(fields, (std::vector<std::string>{"backend", "colour", "concurrency",
                                              "seed", "variants"}));
}

TEST(ParseConfig, VariantsSubsetAndDedup) {
  json doc = kMinimal;
  doc["variants"] = {"real", "knowledge_random:negative", "real"};
  const RunConfig cfg = ParseConfig(doc, "/base");
  ASSERT_EQ(cfg.variants.size(), 2u);
  EXPECT_EQ(cfg.variants[1].Name(), "knowledge_random:negative");
}

TEST(ParseConfig, CorpusWithSourceTags) {
  json doc = kMinimal;
  doc["corpus"] = {{{"path", "/data/ehr"}, {"source", "ehr"}}, "pmc.jsonl"};
  const RunConfig cfg = ParseConfig(doc, "/base");
  ASSERT_EQ(cfg.corpora.size(), 2u);
  EXPECT_EQ(cfg.corpora[0].path, fs::path("/data/ehr"));
  EXPECT_EQ(cfg.corpora[0].source, "ehr");
  EXPECT_EQ(cfg.corpora[1].source, "pmc");
}

TEST(ValidateConfig, FileWithOverridesIsEchoedNormalized) {
  const auto dir = testing::ScratchDir("config");
  std::ofstream(dir / "c.json") << kMinimal.dump();
  const RunConfig cfg = ValidateConfig(
      dir / "c.json", {{"seed", 7}, {"k", {10, 1}}, {"backend", "oracle"}});
  EXPECT_EQ(cfg.seed, 7u);
  EXPECT_EQ(cfg.k_values, (std::vector<int>{1, 10}));
  const json echo = ConfigToJson(cfg);
  EXPECT_EQ(echo["backend"], "oracle");
  EXPECT_EQ(echo["kb"], (dir / "kb.jsonl").string());
  EXPECT_EQ(echo["variants"].size(), 8u);
  EXPECT_EQ(ParseConfig(echo, "/elsewhere").seed, 7u);
}

TEST(ValidateConfig, MissingFileAndBadJson) {
  const auto dir = testing::ScratchDir("config-bad");
  EXPECT_THROW(ValidateConfig(dir / "absent.json"), ConfigError);
  std::ofstream(dir / "bad.json") << "{ nope";
  EXPECT_THROW(ValidateConfig(dir / "bad.json"), ConfigError);
}

TEST(ValidateConfig, EndpointEnvironmentOverride) {
  const auto dir = testing::ScratchDir("config-env");
  json doc = kMinimal;
  doc["backend"] = "remote";
  std::ofstream(dir / "c.json") << doc.dump();
  ::unsetenv(kEndpointEnvVar);
  EXPECT_THROW(ValidateConfig(dir / "c.json"), ConfigError);
  ::setenv(kEndpointEnvVar, "http://127.0.0.1:9999", 1);
  EXPECT_EQ(ValidateConfig(dir / "c.json").backend, "http://127.0.0.1:9999");
  ::unsetenv(kEndpointEnvVar);
}

TEST(ConfigHash, IgnoresExecutionKnobsOnly) {
  const RunConfig a = ParseConfig(kMinimal, "/base");
  RunConfig b = a;
  b.concurrency = 8;
  b.out_dir = "/tmp/elsewhere";
  b.retries = 0;
  EXPECT_EQ(ConfigHash(a), ConfigHash(b));
  b.seed = 43;
  EXPECT_NE(ConfigHash(a), ConfigHash(b));
  EXPECT_EQ(ConfigHash(a).size(), 16u);
}

}  // namespace
}  // namespace ctxprobe
