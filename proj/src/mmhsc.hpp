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

#ifndef APPORTION_MMHSC_HPP_
#define APPORTION_MMHSC_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "randmethod.hpp"
#include "rational.hpp"

namespace apportion {

// Multi-resource, multi-stage covering on a d-uniform hypergraph together
// with a fractional solution y*(u, i, t) to be rounded online.
struct CoveringInstance {
  std::size_t d = 0;
  std::size_t n = 0;  // resources
  std::size_t T = 0;
  std::size_t vertices = 0;
  std::vector<std::vector<std::size_t>> hyperedges;
  std::vector<std::vector<std::int64_t>> C;                 // [u][t]
  std::vector<std::vector<Rational>> D;                     // [i][t]
  std::optional<std::vector<std::vector<std::vector<Rational>>>> cost;  // [u][i][t]
  std::vector<std::vector<std::vector<Rational>>> y_star;   // [u][i][t]
};

// Throws RejectedInputError on shape errors, negative values, decreasing
// demands, uncovered demand or capacities that y* exceeds or leaves slack.
void validate_covering(const CoveringInstance& ci);

CoveringInstance covering_from_json(std::string_view text);
std::string covering_to_json(const CoveringInstance& ci);

using IntegralSolution = std::vector<std::vector<std::vector<std::int64_t>>>;

struct CoveringAudit {
  bool capacity_ok = true;       // equality (near-feasible) or <= ceil(alpha C)
  Rational max_violation;        // largest D(i,t) - coverage, or 0
  Rational min_slack;            // smallest coverage - D(i,t)
  std::optional<Rational> cost;  // of Y, when costs are given
};

// Capacity bound per (u, t) and the covering audit of Y.
CoveringAudit audit_solution(const CoveringInstance& ci, const IntegralSolution& Y,
                             bool capacity_equality, const Rational& alpha);

// Greedy per vertex on the fractional parts of y*. Coverage is short by at
// most d(n-1)/2.
IntegralSolution round_near_feasible(const CoveringInstance& ci);

// Network flow method per vertex on the fractional parts of alpha * y*,
// alpha = max (d + D - 1) / D. Built once, sampled many times.
class MinCostRounder {
 public:
  // Throws RejectedInputError unless n = 3, every demand is positive and
  // every alpha * C(u, t) is an integer.
  explicit MinCostRounder(const CoveringInstance& ci);

  const Rational& alpha() const { return alpha_; }
  IntegralSolution sample(std::mt19937_64& rng) const;
  // Expected cost of the rounded solution, from per-cell marginals.
  std::optional<Rational> expected_cost() const;

 private:
  CoveringInstance ci_;
  Rational alpha_;
  std::vector<std::vector<std::vector<std::int64_t>>> base_;  // [u][i][t]
  std::vector<NetflowPlan> plans_;                           // per vertex
};

Rational covering_alpha(const CoveringInstance& ci);

std::string solution_to_json(const IntegralSolution& Y, const CoveringAudit& audit,
                             const std::optional<Rational>& alpha,
                             const std::optional<Rational>& bound,
                             const std::optional<Rational>& expected_cost);

}  // namespace apportion

#endif  // APPORTION_MMHSC_HPP_
