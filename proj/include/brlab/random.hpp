// Copyright 2026 The brlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <random>

namespace brlab {

using Stream = std::mt19937_64;

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Seed of trial `trial` for a run at size K. Counter-based, so trials can be
// evaluated in any order and on any worker.
constexpr std::uint64_t trial_seed(std::uint64_t base_seed, std::uint64_t K,
                                   std::uint64_t trial) {
  return mix64(mix64(mix64(base_seed) ^ K) ^ trial);
}

inline Stream make_stream(std::uint64_t seed) { return Stream(seed); }

inline Stream trial_stream(std::uint64_t base_seed, std::uint64_t K,
                           std::uint64_t trial) {
  return Stream(trial_seed(base_seed, K, trial));
}

}  // namespace brlab
