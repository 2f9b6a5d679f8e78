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

#ifndef CTXPROBE_SCORER_H_
#define CTXPROBE_SCORER_H_

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ctxprobe/ids.h"

namespace ctxprobe {

class KnowledgeBase;

struct Candidate {
  EntityId entity;
  std::string surface;  // sent to remote backends
  // Extra surface forms the in-process scorers may look for in the context.
  std::vector<std::string> aliases;
};

struct ScoreRequest {
  std::string id;
  std::string input_text;  // contains mask_token exactly once
  std::vector<Candidate> candidates;
  std::string mask_token;
  // Probe identity; never sent over the wire.
  EntityId subject;
  RelationId relation;
};

struct CandidateScore {
  EntityId entity;
  double score = 0.0;  // higher is better
};

// Throws ContractViolation unless the mask occurs once and candidates are
// non-empty with distinct entities and surfaces.
void ValidateRequest(const ScoreRequest& req);

class ScoreError : public std::runtime_error {
 public:
  enum class Kind {
    kUnavailable,    // retryable
    kTimeout,        // retryable
    kOverLength,     // input exceeds the model budget
    kUntokenizable,  // see candidate_indices()
    kProtocol,
    kModel,
  };

  ScoreError(Kind kind, const std::string& message,
             std::vector<std::size_t> candidate_indices = {})
      : std::runtime_error(message),
        kind_(kind),
        candidate_indices_(std::move(candidate_indices)) {}

  Kind kind() const { return kind_; }
  bool retryable() const {
    return kind_ == Kind::kUnavailable || kind_ == Kind::kTimeout;
  }
  const std::vector<std::size_t>& candidate_indices() const {
    return candidate_indices_;
  }

 private:
  Kind kind_;
  std::vector<std::size_t> candidate_indices_;
};

std::string_view ScoreErrorKindName(ScoreError::Kind kind);

// Scoring backend. Implementations must be safe to call concurrently and
// return exactly one finite score per candidate, in candidate order.
class Scorer {
 public:
  virtual ~Scorer() = default;
  virtual std::string Name() const = 0;
  virtual std::vector<CandidateScore> Score(const ScoreRequest& req) const = 0;
};

// Hash-derived tie breaker in [0, 0.01), fixed per (run seed, entity).
double CandidatePrior(std::uint64_t run_seed, const EntityId& entity);

// Every candidate scores 0.
class UniformScorer : public Scorer {
 public:
  std::string Name() const override { return "uniform"; }
  std::vector<CandidateScore> Score(const ScoreRequest& req) const override;
};

// Ranks by how often and how recently a candidate appears in the input:
//   score = kOccurrenceWeight * occurrences
//           - kDistanceWeight * (distance from last occurrence to the mask)
//             / input length
//           + prior
// Candidates absent from the input score their prior.
class CopycatScorer : public Scorer {
 public:
  static constexpr double kOccurrenceWeight = 1.0;
  static constexpr double kDistanceWeight = 0.25;

  explicit CopycatScorer(std::uint64_t run_seed) : run_seed_(run_seed) {}
  std::string Name() const override { return "copycat"; }
  std::vector<CandidateScore> Score(const ScoreRequest& req) const override;

 private:
  std::uint64_t run_seed_;
};

// Knows the gold map: gold candidates score 1 + prior, others their prior.
// The input text is ignored.
class OracleScorer : public Scorer {
 public:
  OracleScorer(const KnowledgeBase& kb, std::uint64_t run_seed)
      : kb_(kb), run_seed_(run_seed) {}
  std::string Name() const override { return "oracle"; }
  std::vector<CandidateScore> Score(const ScoreRequest& req) const override;

 private:
  const KnowledgeBase& kb_;
  std::uint64_t run_seed_;
};

// Builds "uniform", "copycat" or "oracle"; nullptr for other names.
std::unique_ptr<Scorer> MakeMockScorer(std::string_view name,
                                       const KnowledgeBase& kb,
                                       std::uint64_t run_seed);

// Entity -> 1-based rank; a permutation of 1..N.
using RankMap = std::map<EntityId, int>;

// Orders by descending score, breaking ties by ascending entity id.
RankMap RanksFromScores(std::span<const CandidateScore> scores);

}  // namespace ctxprobe

#endif  // CTXPROBE_SCORER_H_
