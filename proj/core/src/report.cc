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

#include "ctxprobe/report.h"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "ctxprobe/errors.h"

namespace ctxprobe {
namespace {

using nlohmann::json;

std::string Fixed(const json& v) {
  if (v.is_null()) return "-";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v.get<double>());
  return buf;
}

std::string Pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::string LeftPad(std::string s, std::size_t width) {
  if (s.size() < width) s.insert(0, width - s.size(), ' ');
  return s;
}

json StreamToJson(const RcBehavior::Stream& s) {
  const auto mean = s.Mean();
  return {{"mean", mean ? json(*mean) : json(nullptr)}, {"n", s.n}};
}

json ConditionToJson(const RcBehavior::Condition& c) {
  return {{"target", StreamToJson(c.target)},
          {"added", StreamToJson(c.added)},
          {"cor", StreamToJson(c.cor)},
          {"incor", StreamToJson(c.incor)}};
}

// A UCM cell, or nulls when the entry is missing or was not run.
json UcmField(const json& ucm, const char* field) {
  if (!ucm.is_object()) return nullptr;
  return ucm.value(field, json(nullptr));
}

void UcmRow(std::ostream& out, const std::string& label, const json& ucm,
            std::size_t label_width) {
  out << Pad(label, label_width);
  for (const char* f : {"understand", "confuse", "misunderstand"}) {
    out << LeftPad(Fixed(UcmField(ucm, f)), 10);
  }
  const json n = ucm.is_object() ? ucm.value("n", json(0)) : json(nullptr);
  out << LeftPad(n.is_null() ? "-" : std::to_string(n.get<std::uint64_t>()), 8)
      << "\n";
}

void UcmHeader(std::ostream& out, const std::string& label,
               std::size_t label_width) {
  out << Pad(label, label_width) << LeftPad("U", 10) << LeftPad("C", 10)
      << LeftPad("M", 10) << LeftPad("n", 8) << "\n";
}

void RcTable(std::ostream& out, const json& behavior) {
  out << Pad("added", 10) << LeftPad("target", 10) << LeftPad("added", 10)
      << LeftPad("cor avg", 10) << LeftPad("incor avg", 10) << "\n";
  for (const auto& [label, key] :
       {std::pair{"cor", "on_cor"}, std::pair{"incor", "on_incor"}}) {
    out << Pad(label, 10);
    const json& cond = behavior.at(key);
    for (const char* f : {"target", "added", "cor", "incor"}) {
      out << LeftPad(Fixed(cond.at(f).at("mean")), 10);
    }
    out << "\n";
  }
}

}  // namespace

json UcmToJson(const UcmScore& score) {
  if (!score.defined()) {
    return {{"n", 0},
            {"understand", nullptr},
            {"confuse", nullptr},
            {"misunderstand", nullptr}};
  }
  return {{"n", score.n},
          {"understand", score.understand},
          {"confuse", score.confuse},
          {"misunderstand", score.misunderstand}};
}

json RcBehaviorToJson(const RcBehavior& behavior) {
  return {{"on_cor", ConditionToJson(behavior.on_cor)},
          {"on_incor", ConditionToJson(behavior.on_incor)}};
}

std::string SerializeAggregate(const json& aggregate) {
  return aggregate.dump(2) + "\n";
}

std::string RenderReport(const json& agg) {
  std::ostringstream out;
  out << "run " << agg.value("run_id", "") << "  model "
      << agg.value("model", "") << "  seed " << agg.value("seed", 0) << "  status "
      << agg.value("status", "") << "\n";
  if (agg.contains("counts")) {
    const json& c = agg["counts"];
    out << "triples " << c.value("triples_scored", 0) << "/"
        << c.value("triples_in", 0) << " scored, series "
        << c.value("series_scored", 0) << "/" << c.value("series_planned", 0)
        << " scored (" << c.value("series_truncated", 0) << " truncated), "
        << c.value("rc_records", 0) << " rc records\n";
  }
  out << "\n";

  out << "Rank change by added object (target-centered, pooled)\n";
  RcTable(out, agg.at("rc_behavior").at("pooled"));
  for (const auto& [variant, behavior] :
       agg.at("rc_behavior").at("by_variant").items()) {
    out << "\n  " << variant << "\n";
    RcTable(out, behavior);
  }
  out << "\n";

  const json& ucm_k = agg.at("ucm_k");
  out << "Knowledge-level UCM by relation\n";
  for (const char* centering : {"target", "negative"}) {
    out << "  " << centering << "\n";
    if (ucm_k.at(centering).is_null()) {
      out << "  not run\n";
      continue;
    }
    UcmHeader(out, "  relation", 24);
    for (const auto& [rel, ucm] : ucm_k.at(centering).items()) {
      UcmRow(out, "  " + rel, ucm, 24);
    }
  }
  out << "\n";

  const json& ucm_m = agg.at("ucm_m");
  out << "Model-level UCM\n";
  UcmHeader(out, "", 32);
  for (const char* centering : {"target", "negative"}) {
    if (ucm_m.at(centering).is_null()) {
      out << Pad(centering, 32) << "not run\n";
    } else {
      UcmRow(out, centering, ucm_m.at(centering), 32);
    }
  }
  for (const auto& [variant, ucm] : ucm_m.at("by_variant").items()) {
    UcmRow(out, "  " + variant, ucm, 32);
  }
  out << "\n";

  out << "Model-level UCM by source\n";
  UcmHeader(out, "", 32);
  for (const char* centering : {"target", "negative"}) {
    const json& per_source = ucm_m.at("by_source").at(centering);
    if (per_source.is_null()) {
      out << Pad(centering, 32) << "not run\n";
      continue;
    }
    for (const auto& [src, ucm] : per_source.items()) {
      UcmRow(out, std::string(centering) + " " + src, ucm, 32);
    }
    UcmRow(out, std::string(centering) + " macro",
           ucm_m.at("macro_by_source").at(centering), 32);
  }
  out << "\n";

  out << "Top-k accuracy by relation (without / with context)\n";
  const json& topk = agg.at("topk");
  if (topk.empty()) out << "  none\n";
  for (const auto& [rel, row] : topk.items()) {
    out << "  " << Pad(rel, 22) << " n=" << row.value("n", 0);
    for (const auto& [k, v] : row.at("without_context").items()) {
      out << "  top" << k << " " << Fixed(v) << " / "
          << Fixed(row.at("with_context").at(k));
    }
    out << "\n";
  }
  return out.str();
}

std::string EmitReport(const std::filesystem::path& out_dir,
                       std::string_view run_id) {
  const auto file = out_dir / std::string(run_id) / kAggregateFile;
  std::ifstream in(file);
  if (!in) {
    throw std::runtime_error("unknown run id '" + std::string(run_id) +
                             "' (no " + file.string() + ")");
  }
  json agg;
  try {
    in >> agg;
  } catch (const json::exception& e) {
    throw ParseError(file.string(), 0, e.what());
  }
  if (agg.value("schema", "") != kAggregateSchema) {
    throw ParseError(file.string(), 0, "unsupported aggregate schema");
  }
  return RenderReport(agg);
}

}  // namespace ctxprobe
