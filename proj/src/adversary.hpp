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

#ifndef APPORTION_ADVERSARY_HPP_
#define APPORTION_ADVERSARY_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "greedy.hpp"
#include "instance.hpp"
#include "rational.hpp"
#include "trajectory.hpp"

namespace apportion {

// Two-party election on (i, j) that leaves their surpluses exactly one
// apart with the same average, whatever seat the method picks. Requires
// 0 <= s_i - s_j < 1; throws DomainError otherwise.
VoteVector splitter(const TrajectoryState& state, std::size_t i, std::size_t j);

struct AdversaryConfig {
  std::vector<std::size_t> parties;
  Rational epsilon;
  std::optional<std::uint64_t> max_steps;
};

struct TranscriptEntry {
  std::size_t step;
  std::string rule;  // "splitter" at the top level, "booster-descend" below
  std::size_t depth;
  std::pair<std::size_t, std::size_t> pair;
  VoteVector votes;
  std::vector<std::size_t> allocation;
};

// One pass of the outer splitter loop of a booster on `size` parties.
// `extreme` is the largest surplus (type I) or smallest surplus (type II)
// in the party set when the iteration starts; `ell` counts iterations of
// the same type at the same call.
struct BoosterIteration {
  std::size_t depth;
  std::size_t size;
  Rational epsilon;
  bool type_one;
  std::size_t ell;
  Rational extreme;
};

struct AdversaryRun {
  TrajectoryState state;
  std::vector<TranscriptEntry> transcript;
  std::vector<BoosterIteration> iterations;
  std::size_t witness = 0;
  Rational achieved;  // |surplus| of the witness at the end
};

// Drives some party of cfg.parties to |surplus| >= (|P| - 1)/2 - epsilon by
// querying `method` adaptively, starting from `state`. Throws TimeoutError
// when more than cfg.max_steps steps (default one million) are needed.
AdversaryRun booster(OnlineMethod& method, TrajectoryState state,
                     const AdversaryConfig& cfg);

// Number of outer iterations after which a booster with this epsilon is
// guaranteed to stop: L + 2 for the least even L with 2^(-L/2) <= eps / 2.
std::size_t booster_iteration_bound(const Rational& epsilon);

// Fixed splitter schedules on fresh n-party state (n = 3: 7 steps, n = 4:
// 10 steps). Pairs are chosen by current surplus rank.
AdversaryRun figure3_schedule(OnlineMethod& method, std::size_t n);

std::string transcript_to_json(const std::vector<TranscriptEntry>& transcript);

}  // namespace apportion

#endif  // APPORTION_ADVERSARY_HPP_
