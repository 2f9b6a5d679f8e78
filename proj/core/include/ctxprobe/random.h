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

#ifndef CTXPROBE_RANDOM_H_
#define CTXPROBE_RANDOM_H_

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace ctxprobe {

// 64-bit FNV-1a. Stable across platforms; used for seeds, priors and
// config hashes.
std::uint64_t Fnv1a64(std::string_view data,
                      std::uint64_t basis = 0xcbf29ce484222325ULL);

// SplitMix64 finalizer.
std::uint64_t Mix64(std::uint64_t x);

// Derives an independent stream seed from a run seed and a key path, e.g.
// (run seed, triple key, doc id, variant name).
std::uint64_t DeriveSeed(std::uint64_t run_seed,
                         std::initializer_list<std::string_view> parts);

// Maps a hash to [0, 1) using its top 53 bits.
double UnitInterval(std::uint64_t hash);

// Bit-reproducible generator. std::mt19937_64 output is fixed by the
// standard, but the std distributions are not, so bounded draws are done
// here by rejection sampling.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t Next() { return engine_(); }

  // Uniform integer in [0, n). n must be positive.
  std::size_t Uniform(std::size_t n);

  // Uniform double in [0, 1).
  double Unit() { return UnitInterval(engine_()); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ctxprobe

#endif  // CTXPROBE_RANDOM_H_
