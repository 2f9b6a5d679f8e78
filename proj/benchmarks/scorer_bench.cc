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

#include <benchmark/benchmark.h>

#include <string>

#include "ctxprobe/scorer.h"
#include "synthetic.h"

namespace ctxprobe {
namespace {

ScoreRequest MakeRequest(int candidates) {
  ScoreRequest req;
  req.id = "bench";
  req.mask_token = "[MASK]";
  std::string context;
  for (int i = 0; i < candidates; ++i) {
    const std::string surface = "finding " + testing::Word(i);
    req.candidates.push_back({EntityId("S" + std::to_string(i)), surface, {}});
    if (i % 2 == 0) context += "Noted " + surface + " on exam. ";
  }
  req.input_text = context + "disorder x has symptoms such as [MASK].";
  return req;
}

void BM_CopycatScore(benchmark::State& state) {
  const auto req = MakeRequest(static_cast<int>(state.range(0)));
  const CopycatScorer scorer(42);
  for (auto _ : state) {
    benchmark::DoNotOptimize(scorer.Score(req));
  }
}
BENCHMARK(BM_CopycatScore)->Arg(5)->Arg(20)->Arg(100);

void BM_RanksFromScores(benchmark::State& state) {
  const auto req = MakeRequest(static_cast<int>(state.range(0)));
  const auto scores = CopycatScorer(42).Score(req);
  for (auto _ : state) {
    benchmark::DoNotOptimize(RanksFromScores(scores));
  }
}
BENCHMARK(BM_RanksFromScores)->Arg(20)->Arg(100);

}  // namespace
}  // namespace ctxprobe
