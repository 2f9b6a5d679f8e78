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

#ifndef CTXPROBE_IDS_H_
#define CTXPROBE_IDS_H_

#include <compare>
#include <cstddef>
#include <functional>
#include <ostream>
#include <string>
#include <utility>

namespace ctxprobe {

// Opaque string identifier tagged by the domain concept it names, so an
// entity id cannot be passed where a relation id is expected.
template <typename Tag>
class StrongId {
 public:
  StrongId() = default;
  explicit StrongId(std::string value) : value_(std::move(value)) {}

  const std::string& str() const { return value_; }
  bool empty() const { return value_.empty(); }

  friend auto operator<=>(const StrongId&, const StrongId&) = default;
  friend bool operator==(const StrongId&, const StrongId&) = default;

  friend std::ostream& operator<<(std::ostream& os, const StrongId& id) {
    return os << id.value_;
  }

 private:
  std::string value_;
};

using EntityId = StrongId<struct EntityIdTag>;
using RelationId = StrongId<struct RelationIdTag>;
using DocId = StrongId<struct DocIdTag>;

// Half-open byte range [begin, end) into a UTF-8 document.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool contains(const Span& other) const {
    return begin <= other.begin && other.end <= end;
  }
  friend bool operator==(const Span&, const Span&) = default;
};

}  // namespace ctxprobe

template <typename Tag>
struct std::hash<ctxprobe::StrongId<Tag>> {
  std::size_t operator()(const ctxprobe::StrongId<Tag>& id) const noexcept {
    return std::hash<std::string>{}(id.str());
  }
};

#endif  // CTXPROBE_IDS_H_
