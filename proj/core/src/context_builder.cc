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

#include "ctxprobe/context_builder.h"

#include <algorithm>

#include "ctxprobe/errors.h"
#include "ctxprobe/random.h"

namespace ctxprobe {
namespace {

const Segment& ByLabel(const Segmentation& seg, int label) {
  return seg.segments.at(static_cast<std::size_t>(label - 1));
}

AddedClass ClassOf(const Segmentation& seg, const EntityId& id) {
  if (id == seg.center) return AddedClass::kCenter;
  if (seg.classification.cor.count(id) != 0) return AddedClass::kCor;
  if (seg.classification.incor.count(id) != 0) return AddedClass::kIncor;
  return AddedClass::kNone;
}

std::string RenderReal(const Segmentation& seg, std::span<const int> labels) {
  std::string out;
  for (int label : labels) out += ByLabel(seg, label).text;
  return out;
}

std::string RenderKnowledge(const Segmentation& seg,
                            std::span<const int> labels) {
  std::string out;
  for (int label : labels) {
    if (!out.empty()) out += kKnowledgeSeparator;
    out += ByLabel(seg, label).mention.surface;
  }
  if (!out.empty()) out += '.';
  return out;
}

ProbeInput StepInput(const Segmentation& seg, std::string_view prompt,
                     int step, int added_label, std::vector<int> arrangement,
                     bool real) {
  ProbeInput in;
  in.step = step;
  in.prompt_text = std::string(prompt);
  if (added_label > 0) {
    const auto& added = ByLabel(seg, added_label).mention.entity;
    in.added_entity = added;
    in.added_class = ClassOf(seg, added);
  }
  in.context_text =
      real ? RenderReal(seg, arrangement) : RenderKnowledge(seg, arrangement);
  in.arrangement = std::move(arrangement);
  return in;
}

ProbeSeries SeriesShell(const Segmentation& seg, ContextVariant variant) {
  ProbeSeries series;
  series.doc_id = seg.doc_id;
  series.center = seg.center;
  series.variant = SeriesVariant{variant, Centering::kTarget};
  return series;
}

// Label added at each step of an existing series (index 0 unused).
std::vector<int> AddedLabels(const ProbeSeries& series) {
  std::vector<int> labels(series.inputs.size(), 0);
  for (std::size_t k = 1; k < series.inputs.size(); ++k) {
    const auto& prev = series.inputs[k - 1].arrangement;
    for (int label : series.inputs[k].arrangement) {
      if (std::find(prev.begin(), prev.end(), label) == prev.end()) {
        labels[k] = label;
        break;
      }
    }
  }
  return labels;
}

std::string_view PromptOf(const ProbeSeries& series) {
  if (series.inputs.empty()) {
    throw ContractViolation("series has no inputs");
  }
  return series.inputs.front().prompt_text;
}

}  // namespace

std::string_view ContextVariantName(ContextVariant v) {
  switch (v) {
    case ContextVariant::kReal:
      return "real";
    case ContextVariant::kKnowledgeOnly:
      return "knowledge_only";
    case ContextVariant::kKnowledgeSorted:
      return "knowledge_sorted";
    case ContextVariant::kKnowledgeRandom:
      return "knowledge_random";
  }
  return "?";
}

std::optional<ContextVariant> ParseContextVariant(std::string_view name) {
  for (auto v : {ContextVariant::kReal, ContextVariant::kKnowledgeOnly,
                 ContextVariant::kKnowledgeSorted,
                 ContextVariant::kKnowledgeRandom}) {
    if (ContextVariantName(v) == name) return v;
  }
  return std::nullopt;
}

std::string_view CenteringName(Centering c) {
  return c == Centering::kTarget ? "target" : "negative";
}

std::string SeriesVariant::Name() const {
  std::string out(ContextVariantName(context));
  if (centering == Centering::kNegative) out += ":negative";
  return out;
}

std::optional<SeriesVariant> SeriesVariant::Parse(std::string_view name) {
  SeriesVariant out;
  auto colon = name.find(':');
  std::string_view base = name.substr(0, colon);
  if (colon != std::string_view::npos) {
    std::string_view suffix = name.substr(colon + 1);
    if (suffix == "negative") {
      out.centering = Centering::kNegative;
    } else if (suffix != "target") {
      return std::nullopt;
    }
  }
  auto context = ParseContextVariant(base);
  if (!context) return std::nullopt;
  out.context = *context;
  return out;
}

std::vector<SeriesVariant> AllSeriesVariants() {
  std::vector<SeriesVariant> out;
  for (auto c : {Centering::kTarget, Centering::kNegative}) {
    for (auto v : {ContextVariant::kReal, ContextVariant::kKnowledgeOnly,
                   ContextVariant::kKnowledgeSorted,
                   ContextVariant::kKnowledgeRandom}) {
      out.push_back(SeriesVariant{v, c});
    }
  }
  return out;
}

std::string_view AddedClassName(AddedClass c) {
  switch (c) {
    case AddedClass::kNone:
      return "none";
    case AddedClass::kCenter:
      return "center";
    case AddedClass::kCor:
      return "cor";
    case AddedClass::kIncor:
      return "incor";
  }
  return "?";
}

std::string ProbeInput::FullText() const {
  if (context_text.empty()) return prompt_text;
  return context_text + " " + prompt_text;
}

ProbeSeries BuildRealSeries(const Segmentation& seg, std::string_view prompt) {
  ProbeSeries series = SeriesShell(seg, ContextVariant::kReal);
  series.inputs.push_back(StepInput(seg, prompt, 0, 0, {}, true));
  std::vector<int> placed;
  for (const auto& s : seg.segments) {
    auto pos = std::find_if(placed.begin(), placed.end(), [&](int label) {
      return ByLabel(seg, label).span.begin > s.span.begin;
    });
    placed.insert(pos, s.label);
    series.inputs.push_back(StepInput(seg, prompt, s.label, s.label, placed,
                                      true));
  }
  return series;
}

ProbeSeries BuildKnowledgeOnly(const ProbeSeries& real,
                               const Segmentation& seg) {
  ProbeSeries series = SeriesShell(seg, ContextVariant::kKnowledgeOnly);
  series.triple_key = real.triple_key;
  const auto added = AddedLabels(real);
  for (std::size_t k = 0; k < real.inputs.size(); ++k) {
    series.inputs.push_back(StepInput(seg, PromptOf(real), static_cast<int>(k),
                                      added[k], real.inputs[k].arrangement,
                                      false));
  }
  return series;
}

ProbeSeries BuildKnowledgeSorted(const ProbeSeries& knowledge_only,
                                 const Segmentation& seg) {
  ProbeSeries series = SeriesShell(seg, ContextVariant::kKnowledgeSorted);
  series.triple_key = knowledge_only.triple_key;
  const auto added = AddedLabels(knowledge_only);
  std::vector<int> labels;
  for (std::size_t k = 0; k < knowledge_only.inputs.size(); ++k) {
    if (k > 0) labels.push_back(added[k]);
    std::vector<int> sorted = labels;
    std::sort(sorted.begin(), sorted.end());
    series.inputs.push_back(StepInput(seg, PromptOf(knowledge_only),
                                      static_cast<int>(k), added[k],
                                      std::move(sorted), false));
  }
  return series;
}

ProbeSeries BuildKnowledgeRandom(const ProbeSeries& knowledge_only,
                                 const Segmentation& seg, std::uint64_t seed) {
  ProbeSeries series = SeriesShell(seg, ContextVariant::kKnowledgeRandom);
  series.triple_key = knowledge_only.triple_key;
  series.seed = seed;
  const std::string_view prompt = PromptOf(knowledge_only);
  series.inputs.push_back(StepInput(seg, prompt, 0, 0, {}, false));
  if (knowledge_only.inputs.size() < 2) return series;

  const auto added = AddedLabels(knowledge_only);
  std::vector<int> remaining(added.begin() + 2, added.end());
  std::vector<int> arrangement{added[1]};
  series.inputs.push_back(StepInput(seg, prompt, 1, added[1], arrangement,
                                    false));

  SeededRng rng(seed);
  for (int step = 2; !remaining.empty(); ++step) {
    const std::size_t pick = rng.Uniform(remaining.size());
    const int label = remaining[pick];
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pick));
    const std::size_t at = rng.Uniform(arrangement.size() + 1);
    arrangement.insert(arrangement.begin() + static_cast<std::ptrdiff_t>(at),
                       label);
    series.inputs.push_back(StepInput(seg, prompt, step, label, arrangement,
                                      false));
  }
  return series;
}

ProbeSeries BuildSeries(const Segmentation& seg, std::string_view prompt,
                        ContextVariant variant, std::uint64_t seed) {
  ProbeSeries real = BuildRealSeries(seg, prompt);
  if (variant == ContextVariant::kReal) return real;
  ProbeSeries only = BuildKnowledgeOnly(real, seg);
  switch (variant) {
    case ContextVariant::kKnowledgeOnly:
      return only;
    case ContextVariant::kKnowledgeSorted:
      return BuildKnowledgeSorted(only, seg);
    case ContextVariant::kKnowledgeRandom:
      return BuildKnowledgeRandom(only, seg, seed);
    case ContextVariant::kReal:
      break;
  }
  return real;
}

std::optional<ProbeSeries> BuildNegativeSeries(
    const Segmentation& seg, const Document& doc,
    std::span<const EntityMention> mentions, std::string_view prompt,
    ContextVariant variant, std::uint64_t seed, const SegmentOptions& options) {
  auto recentered = RecenterNegative(seg, doc, mentions, options);
  if (!recentered) return std::nullopt;
  ProbeSeries series = BuildSeries(*recentered, prompt, variant, seed);
  series.variant.centering = Centering::kNegative;
  return series;
}

std::size_t TruncateSeries(ProbeSeries& series, std::size_t max_bytes) {
  if (max_bytes == 0) return 0;
  for (std::size_t k = 0; k < series.inputs.size(); ++k) {
    if (series.inputs[k].FullText().size() > max_bytes) {
      const std::size_t dropped = series.inputs.size() - k;
      series.inputs.resize(k);
      return dropped;
    }
  }
  return 0;
}

}  // namespace ctxprobe
