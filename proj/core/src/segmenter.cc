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

#include "ctxprobe/segmenter.h"

#include <algorithm>

#include "ctxprobe/errors.h"

namespace ctxprobe {

std::string_view SideName(Side side) {
  switch (side) {
    case Side::kCenter:
      return "center";
    case Side::kLeft:
      return "left";
    case Side::kRight:
      return "right";
  }
  return "?";
}

Span Segmentation::Covered() const {
  if (segments.empty()) return {};
  Span out = segments.front().span;
  for (const auto& s : segments) {
    out.begin = std::min(out.begin, s.span.begin);
    out.end = std::max(out.end, s.span.end);
  }
  return out;
}

Segmentation SegmentAround(const Document& doc,
                           std::span<const EntityMention> mentions,
                           const PoolClassification& pool,
                           const EntityMention& center,
                           const SegmentOptions& options) {
  std::vector<const EntityMention*> anchors;
  for (const auto& m : mentions) {
    if (pool.pool.count(m.entity) != 0) anchors.push_back(&m);
  }
  std::sort(anchors.begin(), anchors.end(),
            [](const EntityMention* a, const EntityMention* b) {
              return a->span.begin < b->span.begin;
            });

  auto found = std::find_if(anchors.begin(), anchors.end(),
                            [&](const EntityMention* m) {
                              return m->entity == center.entity &&
                                     m->span == center.span;
                            });
  if (found == anchors.end()) {
    throw ContractViolation("center '" + center.entity.str() + "' at " +
                            std::to_string(center.span.begin) +
                            " is not a pool mention of doc '" + doc.id.str() +
                            "'");
  }

  const std::size_t n = anchors.size();
  const std::size_t c = static_cast<std::size_t>(found - anchors.begin());
  const std::size_t cap =
      options.max_segments == 0 ? n : std::min(n, options.max_segments);

  // Discovery order over anchor indices.
  std::vector<std::pair<std::size_t, Side>> order;
  order.emplace_back(c, Side::kCenter);
  std::size_t left = c;       // next left anchor is left - 1
  std::size_t right = c + 1;  // next right anchor
  bool want_left = true;
  while (order.size() < cap) {
    const bool has_left = left > 0;
    const bool has_right = right < n;
    if (!has_left && !has_right) break;
    if ((want_left && has_left) || !has_right) {
      order.emplace_back(--left, Side::kLeft);
      want_left = false;
    } else {
      order.emplace_back(right++, Side::kRight);
      want_left = true;
    }
  }

  auto begin_of = [&](std::size_t i) {
    return i == 0 ? std::size_t{0} : anchors[i - 1]->span.end;
  };
  auto end_of = [&](std::size_t i) {
    return i + 1 == n ? doc.text.size() : anchors[i + 1]->span.begin;
  };

  Segmentation seg;
  seg.doc_id = doc.id;
  seg.center = center.entity;
  seg.classification = pool;
  seg.classification.target = center.entity;
  int label = 0;
  for (const auto& [i, side] : order) {
    Segment s;
    s.label = ++label;
    s.side = side;
    s.mention = *anchors[i];
    switch (side) {
      case Side::kCenter:
        s.span = {begin_of(i), end_of(i)};
        break;
      case Side::kLeft:
        s.span = {begin_of(i), anchors[i]->span.end};
        break;
      case Side::kRight:
        s.span = {anchors[i]->span.begin, end_of(i)};
        break;
    }
    s.text = doc.text.substr(s.span.begin, s.span.size());
    seg.segments.push_back(std::move(s));
  }
  return seg;
}

std::optional<Segmentation> RecenterNegative(
    const Segmentation& seg, const Document& doc,
    std::span<const EntityMention> mentions, const SegmentOptions& options) {
  const auto& incor = seg.classification.incor;
  for (const auto& s : seg.segments) {
    if (incor.count(s.mention.entity) == 0) continue;
    PoolClassification pool = seg.classification;
    pool.target = s.mention.entity;
    pool.incor.erase(s.mention.entity);
    pool.cor.insert(seg.center);
    return SegmentAround(doc, mentions, pool, s.mention, options);
  }
  return std::nullopt;
}

}  // namespace ctxprobe
