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

#ifndef CTXPROBE_CONTEXT_BUILDER_H_
#define CTXPROBE_CONTEXT_BUILDER_H_

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ctxprobe/ids.h"
#include "ctxprobe/segmenter.h"

namespace ctxprobe {

enum class ContextVariant {
  kReal,
  kKnowledgeOnly,
  kKnowledgeSorted,
  kKnowledgeRandom,
};

enum class Centering { kTarget, kNegative };

std::string_view ContextVariantName(ContextVariant v);
std::optional<ContextVariant> ParseContextVariant(std::string_view name);
std::string_view CenteringName(Centering c);

struct SeriesVariant {
  ContextVariant context = ContextVariant::kReal;
  Centering centering = Centering::kTarget;

  // "real", "knowledge_only:negative", ...; target centering is implied when
  // the suffix is absent.
  std::string Name() const;
  static std::optional<SeriesVariant> Parse(std::string_view name);

  friend auto operator<=>(const SeriesVariant&, const SeriesVariant&) = default;
};

// The four context variants, target-centered then negative.
std::vector<SeriesVariant> AllSeriesVariants();

enum class AddedClass { kNone, kCenter, kCor, kIncor };

std::string_view AddedClassName(AddedClass c);

// Joins mention surfaces in synthetic contexts; the context ends with ".".
inline constexpr std::string_view kKnowledgeSeparator = ". ";

struct ProbeInput {
  int step = 0;
  std::string context_text;
  std::string prompt_text;
  std::optional<EntityId> added_entity;
  AddedClass added_class = AddedClass::kNone;
  // Segment labels in the order they appear in context_text.
  std::vector<int> arrangement;

  // context_text, a space, then prompt_text; just the prompt at step 0.
  std::string FullText() const;
};

struct ProbeSeries {
  std::string triple_key;
  DocId doc_id;
  SeriesVariant variant;
  std::uint64_t seed = 0;
  EntityId center;
  // inputs[k] carries k segments; inputs.size() == segments + 1.
  std::vector<ProbeInput> inputs;
};

// input0 is the bare prompt; input k places segment Sk at its document
// position relative to the segments already placed.
ProbeSeries BuildRealSeries(const Segmentation& seg, std::string_view prompt);

// Same arrangement as `real`, each segment reduced to its mention surface.
ProbeSeries BuildKnowledgeOnly(const ProbeSeries& real,
                               const Segmentation& seg);

// Step k holds S1..Sk in label order.
ProbeSeries BuildKnowledgeSorted(const ProbeSeries& knowledge_only,
                                 const Segmentation& seg);

// S1 first; each later step draws one of the remaining segments uniformly
// and inserts it at a uniformly drawn segment boundary.
ProbeSeries BuildKnowledgeRandom(const ProbeSeries& knowledge_only,
                                 const Segmentation& seg, std::uint64_t seed);

// Dispatches to the builders above. The series is tagged target-centered.
ProbeSeries BuildSeries(const Segmentation& seg, std::string_view prompt,
                        ContextVariant variant, std::uint64_t seed);

// Builds `variant` around the re-centered segmentation; nullopt when the
// document has no incorrect pool entity.
std::optional<ProbeSeries> BuildNegativeSeries(
    const Segmentation& seg, const Document& doc,
    std::span<const EntityMention> mentions, std::string_view prompt,
    ContextVariant variant, std::uint64_t seed,
    const SegmentOptions& options = {});

// Drops the first step whose full input exceeds `max_bytes` and every step
// after it. Returns the number of steps dropped.
std::size_t TruncateSeries(ProbeSeries& series, std::size_t max_bytes);

}  // namespace ctxprobe

#endif  // CTXPROBE_CONTEXT_BUILDER_H_
