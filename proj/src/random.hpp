// Copyright 2026 The Apportion Authors.
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

#ifndef APPORTION_RANDOM_HPP_
#define APPORTION_RANDOM_HPP_

#include <cstdint>
#include <random>
#include <span>

#include "rational.hpp"

namespace apportion {

// Independent generator for trial `trial` of a run seeded with `seed`.
std::mt19937_64 substream(std::uint64_t seed, std::uint64_t trial);

// Draws an index with probability weights[j] (weights are non-negative and
// sum to 1). A uniform 64-bit draw k selects the first j whose cumulative
// weight exceeds k / 2^64; the comparison is exact.
std::size_t sample_index(std::mt19937_64& rng,
                         std::span<const Rational> weights);

}  // namespace apportion

#endif  // APPORTION_RANDOM_HPP_
