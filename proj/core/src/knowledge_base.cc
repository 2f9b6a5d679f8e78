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

#include "ctxprobe/knowledge_base.h"

#include <algorithm>
#include <fstream>
#include <nlohmann/json.hpp>

#include "ctxprobe/errors.h"
#include "ctxprobe/mentions.h"

namespace ctxprobe {
namespace {

using nlohmann::json;

const std::set<EntityId>& EmptyIdSet() {
  static const std::set<EntityId> empty;
  return empty;
}

std::string RequireString(const json& record, const char* field,
                          std::string_view source, int line) {
  auto it = record.find(field);
  if (it == record.end() || !it->is_string()) {
    throw ParseError(std::string(source), line,
                     std::string("missing string field '") + field + "'");
  }
  std::string value = it->get<std::string>();
  if (value.empty()) {
    throw ParseError(std::string(source), line,
                     std::string("empty field '") + field + "'");
  }
  return value;
}

std::vector<std::string> RequireStringArray(const json& record,
                                            const char* field,
                                            std::string_view source,
                                            int line) {
  auto it = record.find(field);
  if (it == record.end() || !it->is_array()) {
    throw ParseError(std::string(source), line,
                     std::string("missing array field '") + field + "'");
  }
  std::vector<std::string> values;
  for (const auto& v : *it) {
    if (!v.is_string() || v.get<std::string>().empty()) {
      throw ParseError(std::string(source), line,
                       std::string("field '") + field +
                           "' must hold non-empty strings");
    }
    values.push_back(v.get<std::string>());
  }
  return values;
}

json ParseLine(const std::string& line, std::string_view source, int number) {
  json record;
  try {
    record = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string(source), number, e.what());
  }
  if (!record.is_object()) {
    throw ParseError(std::string(source), number, "record is not an object");
  }
  return record;
}

bool IsBlank(const std::string& line) {
  return std::all_of(line.begin(), line.end(), [](unsigned char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n';
  });
}

}  // namespace

std::string Triple::Key() const {
  return subject.str() + "|" + relation.str() + "|" + object.str();
}

void KnowledgeBase::AddEntity(Entity entity) {
  if (entities_.count(entity.id) != 0) {
    throw IntegrityError("duplicate entity id '" + entity.id.str() + "'");
  }
  if (std::find(entity.aliases.begin(), entity.aliases.end(),
                entity.canonical_name) == entity.aliases.end()) {
    entity.aliases.insert(entity.aliases.begin(), entity.canonical_name);
  }
  EntityId id = entity.id;
  entities_.emplace(std::move(id), std::move(entity));
}

void KnowledgeBase::AddTriple(Triple triple) {
  triples_.push_back(std::move(triple));
}

void KnowledgeBase::AddGold(const EntityId& subject,
                            const RelationId& relation,
                            const std::vector<EntityId>& objects) {
  auto& set = gold_[{subject, relation}];
  set.insert(objects.begin(), objects.end());
}

void KnowledgeBase::Validate() const {
  std::map<std::pair<std::string, std::string>, EntityId> canonical;
  for (const auto& [id, entity] : entities_) {
    if (entity.aliases.empty()) {
      throw IntegrityError("entity '" + id.str() + "' has no names");
    }
    for (const auto& alias : entity.aliases) {
      if (NormalizeSurface(alias).empty()) {
        throw IntegrityError("entity '" + id.str() + "' alias '" + alias +
                             "' normalizes to nothing");
      }
    }
    auto key = std::make_pair(entity.type, entity.canonical_name);
    auto [it, inserted] = canonical.emplace(key, id);
    if (!inserted) {
      throw IntegrityError("entities '" + it->second.str() + "' and '" +
                           id.str() + "' share canonical name '" +
                           entity.canonical_name + "' within type '" +
                           entity.type + "'");
    }
  }
  std::set<std::string> seen;
  for (const auto& t : triples_) {
    for (const EntityId* id : {&t.subject, &t.object}) {
      if (entities_.count(*id) == 0) {
        throw IntegrityError("triple " + t.Key() + " references unknown entity '" +
                             id->str() + "'");
      }
    }
    if (t.subject == t.object) {
      throw IntegrityError("triple " + t.Key() + " has subject == object");
    }
    if (!seen.insert(t.Key()).second) {
      throw IntegrityError("duplicate triple " + t.Key());
    }
    if (!IsGold(t.subject, t.relation, t.object)) {
      throw IntegrityError("triple " + t.Key() +
                           " target is absent from its gold set");
    }
  }
  for (const auto& [key, objects] : gold_) {
    if (entities_.count(key.first) == 0) {
      throw IntegrityError("gold record references unknown subject '" +
                           key.first.str() + "'");
    }
    for (const auto& o : objects) {
      if (entities_.count(o) == 0) {
        throw IntegrityError("gold record references unknown object '" +
                             o.str() + "'");
      }
    }
  }
}

const Entity* KnowledgeBase::Find(const EntityId& id) const {
  auto it = entities_.find(id);
  return it == entities_.end() ? nullptr : &it->second;
}

const Entity& KnowledgeBase::Get(const EntityId& id) const {
  const Entity* e = Find(id);
  if (e == nullptr) throw ContractViolation("unknown entity '" + id.str() + "'");
  return *e;
}

const std::set<EntityId>& KnowledgeBase::GoldObjects(
    const EntityId& subject, const RelationId& relation) const {
  auto it = gold_.find({subject, relation});
  return it == gold_.end() ? EmptyIdSet() : it->second;
}

bool KnowledgeBase::IsGold(const EntityId& subject, const RelationId& relation,
                           const EntityId& object) const {
  return GoldObjects(subject, relation).count(object) != 0;
}

KnowledgeBase ParseKb(std::istream& in, std::string_view source_name) {
  KnowledgeBase kb;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (IsBlank(line)) continue;
    json record = ParseLine(line, source_name, number);
    std::string kind = RequireString(record, "kind", source_name, number);
    try {
      if (kind == "entity") {
        Entity e;
        e.id = EntityId(RequireString(record, "id", source_name, number));
        e.type = RequireString(record, "type", source_name, number);
        e.aliases = RequireStringArray(record, "names", source_name, number);
        if (e.aliases.empty()) {
          throw ParseError(std::string(source_name), number,
                           "entity needs at least one name");
        }
        e.canonical_name = e.aliases.front();
        kb.AddEntity(std::move(e));
      } else if (kind == "triple") {
        kb.AddTriple(Triple{
            EntityId(RequireString(record, "subject", source_name, number)),
            RelationId(RequireString(record, "relation", source_name, number)),
            EntityId(RequireString(record, "object", source_name, number))});
      } else if (kind == "gold") {
        std::vector<EntityId> objects;
        for (auto& o :
             RequireStringArray(record, "objects", source_name, number)) {
          objects.emplace_back(std::move(o));
        }
        kb.AddGold(
            EntityId(RequireString(record, "subject", source_name, number)),
            RelationId(RequireString(record, "relation", source_name, number)),
            objects);
      } else {
        throw ParseError(std::string(source_name), number,
                         "unknown record kind '" + kind + "'");
      }
    } catch (const IntegrityError& e) {
      throw IntegrityError(std::string(source_name) + ":" +
                           std::to_string(number) + ": " + e.what());
    }
  }
  kb.Validate();
  return kb;
}

KnowledgeBase LoadKb(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  return ParseKb(in, path.string());
}

Corpus ParseCorpus(std::istream& in, std::string_view source_name,
                   std::string_view default_source) {
  Corpus corpus;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (IsBlank(line)) continue;
    json record = ParseLine(line, source_name, number);
    Document doc;
    doc.id = DocId(RequireString(record, "doc_id", source_name, number));
    auto source = record.find("source");
    if (source != record.end() && source->is_string() &&
        !source->get<std::string>().empty()) {
      doc.source = source->get<std::string>();
    } else {
      doc.source = std::string(default_source);
    }
    auto text = record.find("text");
    if (text == record.end() || !text->is_string()) {
      throw ParseError(std::string(source_name), number,
                       "missing string field 'text'");
    }
    doc.text = text->get<std::string>();
    if (doc.text.empty()) {
      ++corpus.skipped_empty;
      continue;
    }
    corpus.documents.push_back(std::move(doc));
  }
  std::vector<Corpus> parts;
  parts.push_back(std::move(corpus));
  return MergeCorpora(std::move(parts));
}

Corpus LoadCorpus(const std::filesystem::path& path,
                  std::string_view default_source) {
  namespace fs = std::filesystem;
  std::vector<fs::path> files;
  if (fs::is_directory(path)) {
    for (const auto& entry : fs::directory_iterator(path)) {
      if (entry.is_regular_file() && entry.path().extension() == ".jsonl") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
  } else if (fs::exists(path)) {
    files.push_back(path);
  } else {
    throw ParseError(path.string(), 0, "no such file or directory");
  }
  std::vector<Corpus> parts;
  for (const auto& file : files) {
    std::ifstream in(file);
    if (!in) throw ParseError(file.string(), 0, "cannot open file");
    parts.push_back(ParseCorpus(in, file.string(), default_source));
  }
  Corpus merged = MergeCorpora(std::move(parts));
  if (merged.documents.empty()) {
    throw EmptyCorpusError("corpus at '" + path.string() +
                           "' holds no documents");
  }
  return merged;
}

Corpus MergeCorpora(std::vector<Corpus> parts) {
  Corpus merged;
  for (auto& part : parts) {
    merged.skipped_empty += part.skipped_empty;
    for (auto& doc : part.documents) merged.documents.push_back(std::move(doc));
  }
  std::stable_sort(
      merged.documents.begin(), merged.documents.end(),
      [](const Document& a, const Document& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < merged.documents.size(); ++i) {
    if (merged.documents[i].id == merged.documents[i - 1].id) {
      throw IntegrityError("duplicate doc_id '" +
                           merged.documents[i].id.str() + "'");
    }
  }
  return merged;
}

}  // namespace ctxprobe
