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

#include "ctxprobe/templates.h"

#include <fstream>
#include <nlohmann/json.hpp>

#include "ctxprobe/errors.h"
#include "ctxprobe/mentions.h"

namespace ctxprobe {
namespace {

std::size_t CountOccurrences(std::string_view text, std::string_view needle) {
  std::size_t count = 0;
  for (auto pos = text.find(needle); pos != std::string_view::npos;
       pos = text.find(needle, pos + needle.size())) {
    ++count;
  }
  return count;
}

void ReplaceOnce(std::string& text, std::string_view needle,
                 std::string_view replacement) {
  auto pos = text.find(needle);
  text.replace(pos, needle.size(), replacement);
}

}  // namespace

void ValidateTemplate(const PromptTemplate& tmpl) {
  const std::string where = "template for relation '" + tmpl.relation.str() + "'";
  if (CountOccurrences(tmpl.pattern, kSubjectPlaceholder) != 1) {
    throw TemplateError(where + " needs exactly one " +
                        std::string(kSubjectPlaceholder));
  }
  if (CountOccurrences(tmpl.pattern, kObjectPlaceholder) != 1) {
    throw TemplateError(where + " needs exactly one " +
                        std::string(kObjectPlaceholder));
  }
  auto after = tmpl.pattern.find(kObjectPlaceholder) + kObjectPlaceholder.size();
  if (after < tmpl.pattern.size() &&
      IsWordByte(static_cast<unsigned char>(tmpl.pattern[after]))) {
    throw TemplateError(where + ": " + std::string(kObjectPlaceholder) +
                        " is followed by a word character");
  }
}

std::string InstantiateTemplate(const PromptTemplate& tmpl,
                                const Triple& triple, const KnowledgeBase& kb,
                                std::string_view mask_token) {
  ValidateTemplate(tmpl);
  std::string out = tmpl.pattern;
  // Mask first so a subject name containing "[Y]" cannot be rewritten.
  ReplaceOnce(out, kObjectPlaceholder, mask_token);
  ReplaceOnce(out, kSubjectPlaceholder, kb.Get(triple.subject).canonical_name);
  return out;
}

TemplateSet ParseTemplates(std::istream& in, std::string_view source_name) {
  TemplateSet out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(std::string(source_name), number, e.what());
    }
    if (!record.is_object() || !record.contains("relation") ||
        !record["relation"].is_string() || !record.contains("pattern") ||
        !record["pattern"].is_string()) {
      throw ParseError(std::string(source_name), number,
                       "expected {relation, pattern} strings");
    }
    PromptTemplate tmpl{RelationId(record["relation"].get<std::string>()),
                        record["pattern"].get<std::string>()};
    try {
      ValidateTemplate(tmpl);
    } catch (const TemplateError& e) {
      throw ParseError(std::string(source_name), number, e.what());
    }
    if (!out.emplace(tmpl.relation, tmpl).second) {
      throw ParseError(std::string(source_name), number,
                       "duplicate template for relation '" +
                           tmpl.relation.str() + "'");
    }
  }
  return out;
}

TemplateSet LoadTemplates(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  return ParseTemplates(in, path.string());
}

}  // namespace ctxprobe
