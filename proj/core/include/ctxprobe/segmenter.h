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

#ifndef CTXPROBE_SEGMENTER_H_
#define CTXPROBE_SEGMENTER_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ctxprobe/ids.h"
#include "ctxprobe/knowledge_base.h"
#include "ctxprobe/mentions.h"
#include "ctxprobe/retrieval.h"

namespace ctxprobe {

enum class Side { kCenter, kLeft, kRight };

std::string_view SideName(Side side);

struct Segment {
  int label = 0;  // 1 for the center, then discovery order
  Span span;
  std::string text;       // document text under span
  EntityMention mention;  // the single pool mention inside span
  Side side = Side::kCenter;
};

// Segments in discovery order; segments[0] is S1, the center.
struct Segmentation {
  DocId doc_id;
  EntityId center;
  std::vector<Segment> segments;
  PoolClassification classification;

  // Union of all segment spans; contiguous by construction.
  Span Covered() const;
};

struct SegmentOptions {
  // Upper bound on segments, 0 for no limit.
  std::size_t max_segments = 0;
};

// Splits `doc` around `center` so each segment holds exactly one pool
// mention. S1 runs from just after the nearest pool mention on the left to
// just before the nearest one on the right. Later segments take one more pool
// mention at a time, alternating sides starting on the left, and keep to the
// remaining side once the other runs out. A left segment ends where the
// previous frontier began; a right segment stops just before the next pool
// mention. Text past the outermost mentions joins the outermost segment.
//
// Throws ContractViolation when `center` is not a pool mention of `doc`.
Segmentation SegmentAround(const Document& doc,
                           std::span<const EntityMention> mentions,
                           const PoolClassification& pool,
                           const EntityMention& center,
                           const SegmentOptions& options = {});

// Re-centers on the first incorrect pool entity found scanning S1, S2, ...;
// the old target becomes an ordinary correct object. Returns nullopt when the
// segmentation holds no incorrect entity.
std::optional<Segmentation> RecenterNegative(
    const Segmentation& seg, const Document& doc,
    std::span<const EntityMention> mentions,
    const SegmentOptions& options = {});

}  // namespace ctxprobe

#endif  // CTXPROBE_SEGMENTER_H_
