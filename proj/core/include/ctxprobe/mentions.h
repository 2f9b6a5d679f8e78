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

#ifndef CTXPROBE_MENTIONS_H_
#define CTXPROBE_MENTIONS_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ctxprobe/ids.h"

namespace ctxprobe {

class KnowledgeBase;
struct Document;

struct EntityMention {
  EntityId entity;
  Span span;
  std::string surface;  // text[span.begin, span.end)

  friend bool operator==(const EntityMention&, const EntityMention&) = default;
};

// Lowercases ASCII, collapses whitespace runs to one space, trims, and strips
// trailing sentence punctuation (. , ; : ! ?).
std::string NormalizeSurface(std::string_view text);

// True for bytes that belong to a word: ASCII alphanumerics and any UTF-8
// non-ASCII byte. A match may not start or end between two word bytes.
bool IsWordByte(unsigned char c);

// Dictionary matcher over normalized aliases. Matching is case-insensitive,
// treats any whitespace run as one space, respects word boundaries, and picks
// the longest alias at each position scanning left to right; matches never
// overlap. When two entities share an alias the smaller id wins.
class Lexicon {
 public:
  Lexicon();
  explicit Lexicon(const KnowledgeBase& kb);

  void Add(const EntityId& entity, std::string_view alias);

  std::vector<EntityMention> Find(std::string_view text) const;

  std::size_t alias_count() const { return alias_count_; }

 private:
  struct Node {
    std::unordered_map<unsigned char, std::uint32_t> children;
    EntityId entity;  // empty unless an alias ends here
  };

  std::vector<Node> nodes_;
  std::size_t alias_count_ = 0;
};

std::vector<EntityMention> FindMentions(const Document& doc,
                                        const Lexicon& lexicon);
// Convenience overload; builds a lexicon from the whole knowledge base.
std::vector<EntityMention> FindMentions(const Document& doc,
                                        const KnowledgeBase& kb);

}  // namespace ctxprobe

#endif  // CTXPROBE_MENTIONS_H_
