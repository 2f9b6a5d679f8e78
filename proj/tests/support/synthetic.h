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

// Generators and brute-force reference implementations shared by the tests,
// the acceptance binary and the benchmarks.

#ifndef CTXPROBE_TESTS_SUPPORT_SYNTHETIC_H_
#define CTXPROBE_TESTS_SUPPORT_SYNTHETIC_H_

#include <cstdint>
#include <filesystem>
#include <nlohmann/json.hpp>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ctxprobe/knowledge_base.h"
#include "ctxprobe/mentions.h"
#include "ctxprobe/random.h"
#include "ctxprobe/retrieval.h"
#include "ctxprobe/segmenter.h"
#include "ctxprobe/templates.h"

namespace ctxprobe::testing {

struct SyntheticOptions {
  std::uint64_t seed = 7;
  int triples = 24;
  int min_pool = 5;  // pool mentions per document, target included
  int max_pool = 9;
  int gold_per_subject = 3;
  int symptoms = 120;
  std::vector<std::string> sources = {"ehr", "pmc", "notes"};
};

// A disease/symptom knowledge base with one document per triple. Every
// document mentions its subject, the target object, at least one more gold
// object and at least one incorrect object.
struct SyntheticData {
  std::string kb_jsonl;
  std::string corpus_jsonl;
  std::string templates_jsonl;
  KnowledgeBase kb;
  std::vector<Document> docs;
  TemplateSet templates;
};

SyntheticData MakeSynthetic(const SyntheticOptions& options = {});

// Writes kb/corpus/templates plus a config.json (merged with `config`) into
// `dir` and returns the config path.
std::filesystem::path WriteSynthetic(const SyntheticData& data,
                                     const std::filesystem::path& dir,
                                     const nlohmann::json& config);

// Fresh empty directory under the system temp dir.
std::filesystem::path ScratchDir(std::string_view name);

// A random document with `pool_mentions` pool mentions (entities may repeat)
// plus a few same-text distractor mentions outside the pool.
struct SegmentationCase {
  Document doc;
  std::vector<EntityMention> mentions;
  PoolClassification pool;
  EntityMention center;
};

SegmentationCase MakeSegmentationCase(SeededRng& rng, int pool_mentions);

// Checks a segmentation from first principles. Returns "" when valid,
// otherwise a description of the first violation.
std::string CheckSegmentation(const SegmentationCase& c,
                              const Segmentation& seg,
                              std::size_t max_segments = 0);

// Leftmost-longest, non-overlapping matches found by trying every substring.
std::vector<EntityMention> BruteForceMentions(
    std::string_view text,
    const std::vector<std::pair<EntityId, std::string>>& aliases);

// Syllable word for `i`, unique for i < 4096.
std::string Word(int i);

}  // namespace ctxprobe::testing

#endif  // CTXPROBE_TESTS_SUPPORT_SYNTHETIC_H_
