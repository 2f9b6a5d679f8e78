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

#include "ctxprobe/retrieval.h"

#include <algorithm>

namespace ctxprobe {

std::vector<AnnotatedDocument> AnnotateCorpus(std::span<const Document> docs,
                                              const Lexicon& lexicon) {
  std::vector<AnnotatedDocument> out;
  out.reserve(docs.size());
  for (const auto& doc : docs) {
    out.push_back(AnnotatedDocument{&doc, FindMentions(doc, lexicon)});
  }
  return out;
}

bool Mentions(std::span<const EntityMention> mentions, const EntityId& id) {
  return FirstMentionOf(mentions, id) != nullptr;
}

const EntityMention* FirstMentionOf(std::span<const EntityMention> mentions,
                                    const EntityId& id) {
  auto it = std::find_if(mentions.begin(), mentions.end(),
                         [&](const EntityMention& m) { return m.entity == id; });
  return it == mentions.end() ? nullptr : &*it;
}

std::vector<AnnotatedDocument> RetrieveContextDocs(
    const Triple& triple, std::span<const AnnotatedDocument> corpus) {
  std::vector<AnnotatedDocument> out;
  for (const auto& doc : corpus) {
    if (Mentions(doc.mentions, triple.subject) &&
        Mentions(doc.mentions, triple.object)) {
      out.push_back(doc);
    }
  }
  return out;
}

std::vector<AnnotatedDocument> RetrieveContextDocs(
    const Triple& triple, std::span<const Document> corpus,
    const KnowledgeBase& kb) {
  const Lexicon lexicon(kb);
  auto annotated = AnnotateCorpus(corpus, lexicon);
  return RetrieveContextDocs(triple, annotated);
}

PoolClassification ClassifyPool(const Triple& triple,
                                std::span<const EntityMention> mentions,
                                const KnowledgeBase& kb) {
  PoolClassification out;
  out.target = triple.object;
  const std::string& type = kb.Get(triple.object).type;
  const auto& gold = kb.GoldObjects(triple.subject, triple.relation);
  for (const auto& m : mentions) {
    if (m.entity == triple.subject) continue;
    const Entity* e = kb.Find(m.entity);
    if (e == nullptr || e->type != type) continue;
    out.pool.insert(m.entity);
  }
  for (const auto& id : out.pool) {
    if (id == triple.object) continue;
    if (gold.count(id) != 0) {
      out.cor.insert(id);
    } else {
      out.incor.insert(id);
    }
  }
  return out;
}

}  // namespace ctxprobe
