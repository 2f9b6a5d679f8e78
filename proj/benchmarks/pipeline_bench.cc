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

#include <filesystem>

#include "ctxprobe/config.h"
#include "ctxprobe/pipeline.h"
#include "synthetic.h"

namespace ctxprobe {
namespace {

// Full copycat run over all eight series variants, including file output.
void BM_PipelineCopycat(benchmark::State& state) {
  testing::SyntheticOptions options;
  options.triples = static_cast<int>(state.range(0));
  const auto data = testing::MakeSynthetic(options);
  const auto dir = testing::ScratchDir("bench-pipeline");
  const auto cfg_path = testing::WriteSynthetic(
      data, dir,
      {{"backend", "copycat"},
       {"concurrency", static_cast<int>(state.range(1))},
       {"out", (dir / "runs").string()}});
  const RunConfig config = ValidateConfig(cfg_path);
  for (auto _ : state) {
    benchmark::DoNotOptimize(Run(config));
  }
  std::filesystem::remove_all(dir);
}
BENCHMARK(BM_PipelineCopycat)
    ->Args({24, 1})
    ->Args({24, 4})
    ->Args({200, 1})
    ->Args({200, 4})
    ->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace ctxprobe
