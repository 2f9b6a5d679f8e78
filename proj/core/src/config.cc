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

#include "ctxprobe/config.h"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>

#include "ctxprobe/errors.h"
#include "ctxprobe/random.h"

namespace ctxprobe {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

const std::set<std::string>& KnownFields() {
  static const std::set<std::string> fields = {
      "kb",          "corpus",       "templates",       "variants",
      "backend",     "k",            "seed",            "concurrency",
      "max_segments", "max_input_bytes", "mask_token",   "out",
      "retries",     "timeout_ms"};
  return fields;
}

fs::path Resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  if (path.is_relative()) path = base / path;
  return path.lexically_normal();
}

template <typename T>
void ReadInt(const json& doc, const char* field, T& out, long long min,
             std::vector<FieldError>& errors) {
  auto it = doc.find(field);
  if (it == doc.end()) return;
  if (!it->is_number_integer()) {
    errors.push_back({field, "must be an integer"});
    return;
  }
  const auto v = it->get<long long>();
  if (v < min) {
    errors.push_back({field, "must be >= " + std::to_string(min)});
    return;
  }
  out = static_cast<T>(v);
}

}  // namespace

bool RunConfig::remote() const {
  return backend == "remote" || backend.rfind("http://", 0) == 0 ||
         backend.rfind("https://", 0) == 0;
}

RunConfig ParseConfig(const json& doc, const fs::path& base_dir) {
  std::vector<FieldError> errors;
  RunConfig cfg;
  if (!doc.is_object()) throw ConfigError("<root>", "must be an object");

  for (const auto& [key, value] : doc.items()) {
    if (KnownFields().count(key) == 0) {
      errors.push_back({key, "unknown field"});
    }
  }

  auto path_field = [&](const char* field, fs::path& out) {
    auto it = doc.find(field);
    if (it == doc.end()) {
      errors.push_back({field, "missing"});
    } else if (!it->is_string() || it->get<std::string>().empty()) {
      errors.push_back({field, "must be a non-empty path string"});
    } else {
      out = Resolve(base_dir, it->get<std::string>());
    }
  };
  path_field("kb", cfg.kb_path);
  path_field("templates", cfg.templates_path);

  if (auto it = doc.find("corpus"); it == doc.end()) {
    errors.push_back({"corpus", "missing"});
  } else {
    json list = it->is_array() ? *it : json::array({*it});
    for (const auto& entry : list) {
      CorpusSpec spec;
      if (entry.is_string()) {
        spec.path = Resolve(base_dir, entry.get<std::string>());
      } else if (entry.is_object() && entry.contains("path") &&
                 entry["path"].is_string()) {
        spec.path = Resolve(base_dir, entry["path"].get<std::string>());
        if (entry.contains("source")) {
          if (!entry["source"].is_string()) {
            errors.push_back({"corpus.source", "must be a string"});
          } else {
            spec.source = entry["source"].get<std::string>();
          }
        }
      } else {
        errors.push_back({"corpus", "entries must be paths or {path, source}"});
        continue;
      }
      if (spec.source.empty()) spec.source = spec.path.stem().string();
      cfg.corpora.push_back(std::move(spec));
    }
    if (cfg.corpora.empty() && errors.empty()) {
      errors.push_back({"corpus", "needs at least one entry"});
    }
  }

  if (auto it = doc.find("variants"); it == doc.end() ||
                                      (it->is_string() && *it == "all")) {
    cfg.variants = AllSeriesVariants();
  } else {
    json list = it->is_array() ? *it : json::array({*it});
    std::set<SeriesVariant> seen;
    for (const auto& v : list) {
      auto parsed = v.is_string() ? SeriesVariant::Parse(v.get<std::string>())
                                  : std::nullopt;
      if (!parsed) {
        errors.push_back({"variants", "unknown variant " + v.dump()});
      } else if (seen.insert(*parsed).second) {
        cfg.variants.push_back(*parsed);
      }
    }
    if (cfg.variants.empty() && errors.empty()) {
      errors.push_back({"variants", "needs at least one variant"});
    }
  }

  if (auto it = doc.find("backend"); it != doc.end()) {
    if (!it->is_string() || it->get<std::string>().empty()) {
      errors.push_back({"backend", "must be a non-empty string"});
    } else {
      cfg.backend = it->get<std::string>();
      const std::set<std::string> mocks = {"uniform", "copycat", "oracle"};
      if (mocks.count(cfg.backend) == 0 && !cfg.remote()) {
        errors.push_back({"backend", "expected uniform, copycat, oracle, "
                                     "remote or an http:// endpoint"});
      }
    }
  }

  if (auto it = doc.find("k"); it != doc.end()) {
    json list = it->is_array() ? *it : json::array({*it});
    cfg.k_values.clear();
    for (const auto& k : list) {
      if (!k.is_number_integer() || k.get<long long>() < 1) {
        errors.push_back({"k", "values must be integers >= 1, got " + k.dump()});
      } else {
        cfg.k_values.push_back(k.get<int>());
      }
    }
    std::sort(cfg.k_values.begin(), cfg.k_values.end());
    cfg.k_values.erase(std::unique(cfg.k_values.begin(), cfg.k_values.end()),
                       cfg.k_values.end());
    if (cfg.k_values.empty() && errors.empty()) {
      errors.push_back({"k", "needs at least one value"});
    }
  }

  if (auto it = doc.find("seed"); it != doc.end()) {
    if (!it->is_number_unsigned() && !(it->is_number_integer() && *it >= 0)) {
      errors.push_back({"seed", "must be a non-negative integer"});
    } else {
      cfg.seed = it->get<std::uint64_t>();
    }
  }
  ReadInt(doc, "concurrency", cfg.concurrency, 1, errors);
  ReadInt(doc, "max_segments", cfg.max_segments, 0, errors);
  ReadInt(doc, "max_input_bytes", cfg.max_input_bytes, 0, errors);
  ReadInt(doc, "retries", cfg.retries, 0, errors);
  ReadInt(doc, "timeout_ms", cfg.timeout_ms, 1, errors);

  if (auto it = doc.find("mask_token"); it != doc.end()) {
    if (!it->is_string() || it->get<std::string>().empty()) {
      errors.push_back({"mask_token", "must be a non-empty string"});
    } else {
      cfg.mask_token = it->get<std::string>();
    }
  }
  if (auto it = doc.find("out"); it != doc.end()) {
    if (!it->is_string() || it->get<std::string>().empty()) {
      errors.push_back({"out", "must be a non-empty path string"});
    } else {
      cfg.out_dir = Resolve(base_dir, it->get<std::string>());
    }
  } else {
    cfg.out_dir = Resolve(base_dir, "runs");
  }

  if (!errors.empty()) throw ConfigError(std::move(errors));
  return cfg;
}

RunConfig ValidateConfig(const fs::path& path, const json& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("<file>", e.what());
  }
  if (!doc.is_object()) throw ConfigError("<root>", "must be an object");
  for (const auto& [key, value] : overrides.items()) doc[key] = value;

  const fs::path base = fs::absolute(path).parent_path();
  // Command-line relative paths resolve against the working directory.
  if (overrides.contains("out") && overrides["out"].is_string()) {
    doc["out"] = fs::absolute(overrides["out"].get<std::string>()).string();
  }
  RunConfig cfg = ParseConfig(doc, base);

  if (cfg.remote()) {
    const char* env = std::getenv(kEndpointEnvVar);
    if (env != nullptr && *env != '\0') cfg.backend = env;
    if (cfg.backend == "remote") {
      throw ConfigError({{"backend", std::string("remote backend needs an "
                                                 "endpoint; set ") +
                                         kEndpointEnvVar}});
    }
  }
  return cfg;
}

json ConfigToJson(const RunConfig& cfg) {
  json out;
  out["kb"] = cfg.kb_path.string();
  json corpora = json::array();
  for (const auto& c : cfg.corpora) {
    corpora.push_back({{"path", c.path.string()}, {"source", c.source}});
  }
  out["corpus"] = std::move(corpora);
  out["templates"] = cfg.templates_path.string();
  json variants = json::array();
  for (const auto& v : cfg.variants) variants.push_back(v.Name());
  out["variants"] = std::move(variants);
  out["backend"] = cfg.backend;
  out["k"] = cfg.k_values;
  out["seed"] = cfg.seed;
  out["concurrency"] = cfg.concurrency;
  out["max_segments"] = cfg.max_segments;
  out["max_input_bytes"] = cfg.max_input_bytes;
  out["mask_token"] = cfg.mask_token;
  out["out"] = cfg.out_dir.string();
  out["retries"] = cfg.retries;
  out["timeout_ms"] = cfg.timeout_ms;
  return out;
}

std::string ConfigHash(const RunConfig& cfg) {
  json j = ConfigToJson(cfg);
  for (const char* volatile_field : {"out", "concurrency", "retries",
                                     "timeout_ms"}) {
    j.erase(volatile_field);
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(Fnv1a64(j.dump())));
  return buf;
}

}  // namespace ctxprobe
