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

#include "ctxprobe/mentions.h"

#include "ctxprobe/knowledge_base.h"

namespace ctxprobe {
namespace {

bool IsSpace(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

bool IsTerminalPunct(unsigned char c) {
  return c == '.' || c == ',' || c == ';' || c == ':' || c == '!' || c == '?';
}

unsigned char Lower(unsigned char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<unsigned char>(c - 'A' + 'a')
                                : c;
}

}  // namespace

bool IsWordByte(unsigned char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') ||
         (c >= 'A' && c <= 'Z') || c >= 0x80;
}

std::string NormalizeSurface(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (unsigned char c : text) {
    if (IsSpace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(static_cast<char>(Lower(c)));
  }
  while (!out.empty() && (IsTerminalPunct(out.back()) || out.back() == ' ')) {
    out.pop_back();
  }
  return out;
}

Lexicon::Lexicon() : nodes_(1) {}

Lexicon::Lexicon(const KnowledgeBase& kb) : Lexicon() {
  for (const auto& [id, entity] : kb.entities()) {
    for (const auto& alias : entity.aliases) Add(id, alias);
  }
}

void Lexicon::Add(const EntityId& entity, std::string_view alias) {
  const std::string normalized = NormalizeSurface(alias);
  if (normalized.empty()) return;
  std::uint32_t node = 0;
  for (unsigned char c : normalized) {
    auto it = nodes_[node].children.find(c);
    if (it == nodes_[node].children.end()) {
      const auto next = static_cast<std::uint32_t>(nodes_.size());
      nodes_[node].children.emplace(c, next);
      nodes_.emplace_back();
      node = next;
    } else {
      node = it->second;
    }
  }
  EntityId& slot = nodes_[node].entity;
  if (slot.empty()) {
    slot = entity;
    ++alias_count_;
  } else if (entity < slot) {
    slot = entity;
  }
}

std::vector<EntityMention> Lexicon::Find(std::string_view text) const {
  std::vector<EntityMention> mentions;
  const std::size_t n = text.size();
  auto byte = [&](std::size_t i) { return static_cast<unsigned char>(text[i]); };

  std::size_t pos = 0;
  while (pos < n) {
    const bool boundary_before =
        pos == 0 || !(IsWordByte(byte(pos - 1)) && IsWordByte(byte(pos)));
    if (IsSpace(byte(pos)) || !boundary_before) {
      ++pos;
      continue;
    }

    std::uint32_t node = 0;
    std::size_t best_end = 0;
    const EntityId* best = nullptr;
    std::size_t i = pos;
    while (i < n) {
      unsigned char c = byte(i);
      std::size_t next = i + 1;
      if (IsSpace(c)) {
        while (next < n && IsSpace(byte(next))) ++next;
        c = ' ';
      } else {
        c = Lower(c);
      }
      auto it = nodes_[node].children.find(c);
      if (it == nodes_[node].children.end()) break;
      node = it->second;
      i = next;
      if (!nodes_[node].entity.empty() && c != ' ') {
        const bool boundary_after =
            i == n || !(IsWordByte(byte(i - 1)) && IsWordByte(byte(i)));
        if (boundary_after) {
          best_end = i;
          best = &nodes_[node].entity;
        }
      }
    }

    if (best != nullptr) {
      mentions.push_back(EntityMention{
          *best, Span{pos, best_end},
          std::string(text.substr(pos, best_end - pos))});
      pos = best_end;
    } else {
      ++pos;
    }
  }
  return mentions;
}

std::vector<EntityMention> FindMentions(const Document& doc,
                                        const Lexicon& lexicon) {
  return lexicon.Find(doc.text);
}

std::vector<EntityMention> FindMentions(const Document& doc,
                                        const KnowledgeBase& kb) {
  return Lexicon(kb).Find(doc.text);
}

}  // namespace ctxprobe
