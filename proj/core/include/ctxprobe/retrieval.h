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

#ifndef CTXPROBE_RETRIEVAL_H_
#define CTXPROBE_RETRIEVAL_H_

#include <set>
#include <span>
#include <vector>

#include "ctxprobe/ids.h"
#include "ctxprobe/knowledge_base.h"
#include "ctxprobe/mentions.h"

namespace ctxprobe {

// The same-type entities found in one document, split against the gold map.
// Invariants: cor and incor are disjoint, neither contains the target, and
// cor + incor + {target} == pool whenever the target is mentioned.
struct PoolClassification {
  EntityId target;
  std::set<EntityId> pool;
  std::set<EntityId> cor;
  std::set<EntityId> incor;
};

// A document with its mentions, computed once per corpus.
struct AnnotatedDocument {
  const Document* document = nullptr;
  std::vector<EntityMention> mentions;
};

std::vector<AnnotatedDocument> AnnotateCorpus(std::span<const Document> docs,
                                              const Lexicon& lexicon);

// Documents mentioning both the subject and the target object, in input
// order. An empty result means the triple has no usable context.
std::vector<AnnotatedDocument> RetrieveContextDocs(
    const Triple& triple, std::span<const AnnotatedDocument> corpus);
std::vector<AnnotatedDocument> RetrieveContextDocs(
    const Triple& triple, std::span<const Document> corpus,
    const KnowledgeBase& kb);

// The pool holds every mentioned entity sharing the target's type, except
// the subject itself.
PoolClassification ClassifyPool(const Triple& triple,
                                std::span<const EntityMention> mentions,
                                const KnowledgeBase& kb);

bool Mentions(std::span<const EntityMention> mentions, const EntityId& id);

// First (lowest offset) mention of `id`, or nullptr.
const EntityMention* FirstMentionOf(std::span<const EntityMention> mentions,
                                    const EntityId& id);

}  // namespace ctxprobe

#endif  // CTXPROBE_RETRIEVAL_H_
