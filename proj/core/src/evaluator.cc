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

#include "ctxprobe/evaluator.h"

#include "ctxprobe/errors.h"

namespace ctxprobe {
namespace {

int RankAt(const RankTable& table, std::size_t step, const EntityId& id) {
  const auto& ranks = table.steps[step];
  auto it = ranks.find(id);
  if (it == ranks.end()) {
    throw ContractViolation("no rank for '" + id.str() + "' at step " +
                            std::to_string(step));
  }
  return it->second;
}

std::optional<double> MeanChange(const RankTable& table, std::size_t step,
                                 const std::set<EntityId>& entities) {
  if (entities.empty()) return std::nullopt;
  double sum = 0.0;
  for (const auto& id : entities) {
    sum += RankAt(table, step, id) - RankAt(table, step - 1, id);
  }
  return sum / static_cast<double>(entities.size());
}

}  // namespace

std::vector<RcRecord> ComputeRc(const RankTable& table,
                                const ProbeSeries& series,
                                const PoolClassification& classification,
                                const std::set<EntityId>& unscored) {
  if (table.steps.size() < series.inputs.size()) {
    throw ContractViolation("rank table has " +
                            std::to_string(table.steps.size()) +
                            " steps for a series of " +
                            std::to_string(series.inputs.size()));
  }
  std::vector<RcRecord> out;
  std::set<EntityId> present;
  for (std::size_t k = 1; k < series.inputs.size(); ++k) {
    const auto& input = series.inputs[k];
    if (!input.added_entity) {
      throw ContractViolation("step " + std::to_string(k) +
                              " has no added entity");
    }
    const EntityId& added = *input.added_entity;
    if (unscored.count(added) != 0) continue;

    std::set<EntityId> cor;
    std::set<EntityId> incor;
    for (const auto& id : present) {
      if (id == series.center || id == added || unscored.count(id) != 0) {
        continue;
      }
      if (classification.cor.count(id) != 0) cor.insert(id);
      if (classification.incor.count(id) != 0) incor.insert(id);
    }

    RcRecord r;
    r.step = static_cast<int>(k);
    r.added = added;
    r.added_class = input.added_class;
    r.rc_target = RankAt(table, k, series.center) -
                  RankAt(table, k - 1, series.center);
    r.rc_added = RankAt(table, k, added) - RankAt(table, k - 1, added);
    r.rc_cor_avg = MeanChange(table, k, cor);
    r.rc_incor_avg = MeanChange(table, k, incor);
    out.push_back(std::move(r));

    present.insert(added);
  }
  return out;
}

void UcmCounts::Add(int rc_target) {
  if (rc_target < 0) {
    ++understand;
  } else if (rc_target == 0) {
    ++confuse;
  } else {
    ++misunderstand;
  }
}

UcmCounts& UcmCounts::operator+=(const UcmCounts& other) {
  understand += other.understand;
  confuse += other.confuse;
  misunderstand += other.misunderstand;
  return *this;
}

UcmScore ToScore(const UcmCounts& counts) {
  UcmScore s;
  s.n = counts.n();
  if (s.n == 0) return s;
  const double n = static_cast<double>(s.n);
  s.understand = static_cast<double>(counts.understand) / n;
  s.confuse = static_cast<double>(counts.confuse) / n;
  s.misunderstand = static_cast<double>(counts.misunderstand) / n;
  return s;
}

UcmCounts CountUcm(std::span<const RcRecord> records) {
  UcmCounts counts;
  for (const auto& r : records) {
    if (r.added_class == AddedClass::kCor) counts.Add(r.rc_target);
  }
  return counts;
}

std::map<RelationId, UcmScore> UcmK(const RecordsByRelation& records) {
  std::map<RelationId, UcmScore> out;
  for (const auto& [relation, list] : records) {
    out[relation] = ToScore(CountUcm(list));
  }
  return out;
}

UcmScore UcmM(const RecordsByRelation& records) {
  UcmCounts pooled;
  for (const auto& [relation, list] : records) pooled += CountUcm(list);
  return ToScore(pooled);
}

int TopKAcc(const RankMap& ranks, const std::set<EntityId>& gold, int k) {
  if (k < 1) throw ContractViolation("k must be >= 1");
  for (const auto& id : gold) {
    auto it = ranks.find(id);
    if (it != ranks.end() && it->second <= k) return 1;
  }
  return 0;
}

void RcBehavior::Add(const RcRecord& record) {
  Condition* c = nullptr;
  if (record.added_class == AddedClass::kCor) c = &on_cor;
  if (record.added_class == AddedClass::kIncor) c = &on_incor;
  if (c == nullptr) return;
  c->target.Add(record.rc_target);
  c->added.Add(record.rc_added);
  if (record.rc_cor_avg) c->cor.Add(*record.rc_cor_avg);
  if (record.rc_incor_avg) c->incor.Add(*record.rc_incor_avg);
}

RcBehavior& RcBehavior::operator+=(const RcBehavior& other) {
  auto merge = [](Stream& a, const Stream& b) {
    a.sum += b.sum;
    a.n += b.n;
  };
  for (auto [mine, theirs] :
       {std::pair{&on_cor, &other.on_cor}, std::pair{&on_incor, &other.on_incor}}) {
    merge(mine->target, theirs->target);
    merge(mine->added, theirs->added);
    merge(mine->cor, theirs->cor);
    merge(mine->incor, theirs->incor);
  }
  return *this;
}

}  // namespace ctxprobe
