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

#ifndef CTXPROBE_KNOWLEDGE_BASE_H_
#define CTXPROBE_KNOWLEDGE_BASE_H_

#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ctxprobe/ids.h"

namespace ctxprobe {

struct Entity {
  EntityId id;
  std::string type;
  std::string canonical_name;
  // Surface forms; always contains canonical_name.
  std::vector<std::string> aliases;
};

struct Triple {
  EntityId subject;
  RelationId relation;
  EntityId object;

  // Stable textual key, "subject|relation|object".
  std::string Key() const;
  friend bool operator==(const Triple&, const Triple&) = default;
};

// Entities, probed triples and the gold map (subject, relation) -> objects.
// Built through the loader, which checks every invariant; immutable after.
class KnowledgeBase {
 public:
  using GoldKey = std::pair<EntityId, RelationId>;

  void AddEntity(Entity entity);
  void AddTriple(Triple triple);
  void AddGold(const EntityId& subject, const RelationId& relation,
               const std::vector<EntityId>& objects);

  // Throws IntegrityError on dangling ids, duplicate triples, triples whose
  // object is missing from their gold set, or duplicate canonical names
  // within an entity type.
  void Validate() const;

  const Entity* Find(const EntityId& id) const;
  const Entity& Get(const EntityId& id) const;

  const std::map<EntityId, Entity>& entities() const { return entities_; }
  const std::vector<Triple>& triples() const { return triples_; }
  const std::map<GoldKey, std::set<EntityId>>& gold() const { return gold_; }

  // Empty set when the pair has no gold record.
  const std::set<EntityId>& GoldObjects(const EntityId& subject,
                                        const RelationId& relation) const;
  bool IsGold(const EntityId& subject, const RelationId& relation,
              const EntityId& object) const;

 private:
  std::map<EntityId, Entity> entities_;
  std::vector<Triple> triples_;
  std::map<GoldKey, std::set<EntityId>> gold_;
};

// Line-delimited JSON records with "kind" in {entity, triple, gold}. Blank
// lines are ignored. Throws ParseError (with line number) or IntegrityError.
KnowledgeBase ParseKb(std::istream& in, std::string_view source_name);
KnowledgeBase LoadKb(const std::filesystem::path& path);

struct Document {
  DocId id;
  std::string source;
  std::string text;
};

struct Corpus {
  std::vector<Document> documents;  // sorted by id
  std::size_t skipped_empty = 0;
};

// Line-delimited {doc_id, source, text} records. `path` is a file or a
// directory whose *.jsonl files are read in name order. Records without a
// source take `default_source`. Empty-text documents are skipped and
// counted. Throws EmptyCorpusError when nothing usable is found.
Corpus LoadCorpus(const std::filesystem::path& path,
                  std::string_view default_source = "");
Corpus ParseCorpus(std::istream& in, std::string_view source_name,
                   std::string_view default_source = "");

// Merges corpora, re-sorting by id. Throws IntegrityError on duplicate ids.
Corpus MergeCorpora(std::vector<Corpus> parts);

}  // namespace ctxprobe

#endif  // CTXPROBE_KNOWLEDGE_BASE_H_
