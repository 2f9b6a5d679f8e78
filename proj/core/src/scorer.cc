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

#include "ctxprobe/scorer.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "ctxprobe/errors.h"
#include "ctxprobe/knowledge_base.h"
#include "ctxprobe/mentions.h"
#include "ctxprobe/random.h"

namespace ctxprobe {

void ValidateRequest(const ScoreRequest& req) {
  if (req.mask_token.empty()) throw ContractViolation("empty mask token");
  const auto first = req.input_text.find(req.mask_token);
  if (first == std::string::npos ||
      req.input_text.find(req.mask_token, first + 1) != std::string::npos) {
    throw ContractViolation("mask token must occur exactly once in '" +
                            req.input_text + "'");
  }
  if (req.candidates.empty()) throw ContractViolation("no candidates");
  std::set<EntityId> ids;
  std::set<std::string> surfaces;
  for (const auto& c : req.candidates) {
    if (!ids.insert(c.entity).second || !surfaces.insert(c.surface).second) {
      throw ContractViolation("duplicate candidate '" + c.entity.str() + "'");
    }
  }
}

std::string_view ScoreErrorKindName(ScoreError::Kind kind) {
  switch (kind) {
    case ScoreError::Kind::kUnavailable:
      return "unavailable";
    case ScoreError::Kind::kTimeout:
      return "timeout";
    case ScoreError::Kind::kOverLength:
      return "over_length";
    case ScoreError::Kind::kUntokenizable:
      return "untokenizable";
    case ScoreError::Kind::kProtocol:
      return "protocol";
    case ScoreError::Kind::kModel:
      return "model";
  }
  return "?";
}

double CandidatePrior(std::uint64_t run_seed, const EntityId& entity) {
  return 0.01 * UnitInterval(DeriveSeed(run_seed, {"prior", entity.str()}));
}

std::vector<CandidateScore> UniformScorer::Score(const ScoreRequest& req) const {
  ValidateRequest(req);
  std::vector<CandidateScore> out;
  for (const auto& c : req.candidates) out.push_back({c.entity, 0.0});
  return out;
}

std::vector<CandidateScore> CopycatScorer::Score(const ScoreRequest& req) const {
  ValidateRequest(req);
  Lexicon lexicon;
  for (const auto& c : req.candidates) {
    lexicon.Add(c.entity, c.surface);
    for (const auto& a : c.aliases) lexicon.Add(c.entity, a);
  }
  const std::size_t mask = req.input_text.find(req.mask_token);
  const double length =
      static_cast<double>(std::max<std::size_t>(1, req.input_text.size()));

  struct Seen {
    int count = 0;
    std::size_t last_end = 0;
    std::size_t last_begin = 0;
  };
  std::map<EntityId, Seen> seen;
  for (const auto& m : lexicon.Find(req.input_text)) {
    auto& s = seen[m.entity];
    ++s.count;
    s.last_begin = m.span.begin;
    s.last_end = m.span.end;
  }

  std::vector<CandidateScore> out;
  for (const auto& c : req.candidates) {
    double score = CandidatePrior(run_seed_, c.entity);
    auto it = seen.find(c.entity);
    if (it != seen.end()) {
      const auto& s = it->second;
      const std::size_t distance =
          s.last_end <= mask ? mask - s.last_end
                             : s.last_begin - (mask + req.mask_token.size());
      score += kOccurrenceWeight * s.count -
               kDistanceWeight * static_cast<double>(distance) / length;
    }
    out.push_back({c.entity, score});
  }
  return out;
}

std::vector<CandidateScore> OracleScorer::Score(const ScoreRequest& req) const {
  ValidateRequest(req);
  const auto& gold = kb_.GoldObjects(req.subject, req.relation);
  std::vector<CandidateScore> out;
  for (const auto& c : req.candidates) {
    const double base = gold.count(c.entity) != 0 ? 1.0 : 0.0;
    out.push_back({c.entity, base + CandidatePrior(run_seed_, c.entity)});
  }
  return out;
}

std::unique_ptr<Scorer> MakeMockScorer(std::string_view name,
                                       const KnowledgeBase& kb,
                                       std::uint64_t run_seed) {
  if (name == "uniform") return std::make_unique<UniformScorer>();
  if (name == "copycat") return std::make_unique<CopycatScorer>(run_seed);
  if (name == "oracle") return std::make_unique<OracleScorer>(kb, run_seed);
  return nullptr;
}

RankMap RanksFromScores(std::span<const CandidateScore> scores) {
  std::vector<const CandidateScore*> order;
  order.reserve(scores.size());
  for (const auto& s : scores) {
    if (!std::isfinite(s.score)) {
      throw ContractViolation("non-finite score for '" + s.entity.str() + "'");
    }
    order.push_back(&s);
  }
  std::sort(order.begin(), order.end(),
            [](const CandidateScore* a, const CandidateScore* b) {
              if (a->score != b->score) return a->score > b->score;
              return a->entity < b->entity;
            });
  RankMap ranks;
  int rank = 0;
  for (const auto* s : order) {
    if (!ranks.emplace(s->entity, ++rank).second) {
      throw ContractViolation("duplicate candidate '" + s->entity.str() + "'");
    }
  }
  return ranks;
}

}  // namespace ctxprobe
