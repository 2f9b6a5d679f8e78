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

#ifndef CTXPROBE_TEMPLATES_H_
#define CTXPROBE_TEMPLATES_H_

#include <filesystem>
#include <istream>
#include <map>
#include <string>
#include <string_view>

#include "ctxprobe/ids.h"
#include "ctxprobe/knowledge_base.h"

namespace ctxprobe {

inline constexpr std::string_view kSubjectPlaceholder = "[X]";
inline constexpr std::string_view kObjectPlaceholder = "[Y]";
inline constexpr std::string_view kDefaultMaskToken = "[MASK]";

struct PromptTemplate {
  RelationId relation;
  std::string pattern;  // e.g. "[X] has symptoms such as [Y]."
};

// Throws TemplateError unless both placeholders occur exactly once and the
// object placeholder is not glued to a following word character.
void ValidateTemplate(const PromptTemplate& tmpl);

std::string InstantiateTemplate(const PromptTemplate& tmpl,
                                const Triple& triple, const KnowledgeBase& kb,
                                std::string_view mask_token = kDefaultMaskToken);

using TemplateSet = std::map<RelationId, PromptTemplate>;

// Line-delimited {relation, pattern} records; one template per relation.
TemplateSet ParseTemplates(std::istream& in, std::string_view source_name);
TemplateSet LoadTemplates(const std::filesystem::path& path);

}  // namespace ctxprobe

#endif  // CTXPROBE_TEMPLATES_H_
