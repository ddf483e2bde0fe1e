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

#ifndef APPORTION_GREEDY_HPP_
#define APPORTION_GREEDY_HPP_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "instance.hpp"
#include "rational.hpp"
#include "trajectory.hpp"

namespace apportion {

// An online apportionment method: sees the cumulative history and the
// current votes and returns exactly v.house() parties with positive votes.
class OnlineMethod {
 public:
  virtual ~OnlineMethod() = default;
  virtual std::string name() const = 0;
  virtual std::vector<std::size_t> select(std::span<const Rational> V_prev,
                                          std::span<const std::int64_t> A_prev,
                                          const VoteVector& v) = 0;
  // Forgets per-run state; called before each fresh trajectory.
  virtual void reset() {}
};

// The house-many parties with the smallest (A - V) - v among those with
// positive votes; ties go to the lower index. Result is sorted.
std::vector<std::size_t> greedy_step(std::span<const Rational> V_prev,
                                     std::span<const std::int64_t> A_prev,
                                     const VoteVector& v);

class GreedyMethod : public OnlineMethod {
 public:
  std::string name() const override { return "greedy"; }
  std::vector<std::size_t> select(std::span<const Rational> V_prev,
                                  std::span<const std::int64_t> A_prev,
                                  const VoteVector& v) override {
    return greedy_step(V_prev, A_prev, v);
  }
};

// Seats the house-many lowest indices in the support.
class LowestIndexMethod : public OnlineMethod {
 public:
  std::string name() const override { return "lowest-index"; }
  std::vector<std::size_t> select(std::span<const Rational> V_prev,
                                  std::span<const std::int64_t> A_prev,
                                  const VoteVector& v) override;
};

// Uniformly random feasible set.
class RandomFeasibleMethod : public OnlineMethod {
 public:
  explicit RandomFeasibleMethod(std::uint64_t seed) : seed_(seed), rng_(seed) {}
  std::string name() const override { return "random-feasible"; }
  std::vector<std::size_t> select(std::span<const Rational> V_prev,
                                  std::span<const std::int64_t> A_prev,
                                  const VoteVector& v) override;
  void reset() override { rng_.seed(seed_); }

 private:
  std::uint64_t seed_;
  std::mt19937_64 rng_;
};

// Minimises the largest |surplus| after the step by exhaustive search over
// feasible sets (falls back to greedy above 20 supported parties).
class MinMaxDeviationMethod : public OnlineMethod {
 public:
  std::string name() const override { return "min-max"; }
  std::vector<std::size_t> select(std::span<const Rational> V_prev,
                                  std::span<const std::int64_t> A_prev,
                                  const VoteVector& v) override;
};

// Appends one step chosen by `method` to `state`.
void step_method(OnlineMethod& method, TrajectoryState& state,
                 const VoteVector& v);

// Resets the method and folds it over the instance.
TrajectoryState run_method(OnlineMethod& method, const Instance& inst);

// Largest-remainder allocation of `house` seats for weights v (quotas
// house * v_i / sum v). Residue ties go to the lower index.
std::vector<std::int64_t> hamilton_allocation(std::span<const Rational> v,
                                              std::int64_t house);

}  // namespace apportion

#endif  // APPORTION_GREEDY_HPP_
