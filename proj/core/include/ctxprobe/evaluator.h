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

#ifndef CTXPROBE_EVALUATOR_H_
#define CTXPROBE_EVALUATOR_H_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "ctxprobe/context_builder.h"
#include "ctxprobe/ids.h"
#include "ctxprobe/retrieval.h"
#include "ctxprobe/scorer.h"

namespace ctxprobe {

// Candidate ranks for every step of one series.
struct RankTable {
  std::vector<RankMap> steps;
};

// Rank changes between input k-1 and input k. Negative means the entity
// moved up. The averages cover correct / incorrect entities already present
// in input k-1, excluding the target and the entity added at step k; they
// are absent when that set is empty.
struct RcRecord {
  int step = 0;
  EntityId added;
  AddedClass added_class = AddedClass::kNone;
  int rc_target = 0;
  int rc_added = 0;
  std::optional<double> rc_cor_avg;
  std::optional<double> rc_incor_avg;
};

// Throws ContractViolation if a needed rank is missing. Entities listed in
// `unscored` (dropped by the backend) are left out of the averages and steps
// adding them emit no record.
std::vector<RcRecord> ComputeRc(const RankTable& table,
                                const ProbeSeries& series,
                                const PoolClassification& classification,
                                const std::set<EntityId>& unscored = {});

// Mergeable Understand / Confuse / Misunderstand tallies. Merging is
// associative and commutative, so batches may be reduced in any order.
struct UcmCounts {
  std::uint64_t understand = 0;
  std::uint64_t confuse = 0;
  std::uint64_t misunderstand = 0;

  void Add(int rc_target);
  std::uint64_t n() const { return understand + confuse + misunderstand; }
  UcmCounts& operator+=(const UcmCounts& other);
  friend bool operator==(const UcmCounts&, const UcmCounts&) = default;
};

struct UcmScore {
  double understand = 0.0;
  double confuse = 0.0;
  double misunderstand = 0.0;
  std::uint64_t n = 0;

  // Proportions are meaningless when n == 0.
  bool defined() const { return n > 0; }
};

UcmScore ToScore(const UcmCounts& counts);

// Tallies records whose added object is correct; other steps are ignored.
UcmCounts CountUcm(std::span<const RcRecord> records);

using RecordsByRelation = std::map<RelationId, std::vector<RcRecord>>;

// Knowledge-level scores, one per relation.
std::map<RelationId, UcmScore> UcmK(const RecordsByRelation& records);

// Model-level score: one distribution pooled over all relations.
UcmScore UcmM(const RecordsByRelation& records);

// 1 if any gold entity ranks within the top k, else 0. k must be >= 1.
int TopKAcc(const RankMap& ranks, const std::set<EntityId>& gold, int k);

// Running means of the four rank-change streams, split by whether the added
// object is correct or incorrect.
struct RcBehavior {
  struct Stream {
    double sum = 0.0;
    std::uint64_t n = 0;
    void Add(double v) {
      sum += v;
      ++n;
    }
    std::optional<double> Mean() const {
      if (n == 0) return std::nullopt;
      return sum / static_cast<double>(n);
    }
  };
  struct Condition {
    Stream target;
    Stream added;
    Stream cor;
    Stream incor;
  };

  Condition on_cor;
  Condition on_incor;

  void Add(const RcRecord& record);
  RcBehavior& operator+=(const RcBehavior& other);
};

}  // namespace ctxprobe

#endif  // CTXPROBE_EVALUATOR_H_
