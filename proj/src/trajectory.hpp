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

#ifndef APPORTION_TRAJECTORY_HPP_
#define APPORTION_TRAJECTORY_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "instance.hpp"
#include "rational.hpp"

namespace apportion {

// Cumulative votes and seats of an allocation run, with every prefix kept so
// that prefix predicates can be evaluated after the fact.
class TrajectoryState {
 public:
  TrajectoryState() = default;
  explicit TrajectoryState(std::size_t parties);

  std::size_t parties() const { return n_; }
  std::size_t t() const { return votes_.size(); }

  const std::vector<Rational>& V() const { return V_.back(); }
  const std::vector<std::int64_t>& A() const { return A_.back(); }
  // Prefix k in [0, t]; k = 0 is the initial all-zero state.
  const std::vector<Rational>& V_at(std::size_t k) const { return V_[k]; }
  const std::vector<std::int64_t>& A_at(std::size_t k) const { return A_[k]; }
  // Step k in [1, t].
  const VoteVector& votes_at(std::size_t k) const { return votes_[k - 1]; }
  const std::vector<std::uint8_t>& seats_at(std::size_t k) const {
    return seats_[k - 1];
  }

  // Records one step. Throws DomainError unless `chosen` has exactly
  // v.house() distinct parties, each with positive vote.
  void push(const VoteVector& v, std::span<const std::size_t> chosen);

  Instance instance() const;

 private:
  std::size_t n_ = 0;
  std::vector<VoteVector> votes_;
  std::vector<std::vector<std::uint8_t>> seats_;
  std::vector<std::vector<Rational>> V_;
  std::vector<std::vector<std::int64_t>> A_;
};

std::vector<Rational> surplus(std::span<const Rational> V,
                              std::span<const std::int64_t> A);
std::vector<Rational> surplus(const TrajectoryState& state);

struct QuotaViolation {
  std::size_t t;
  std::size_t party;
};

// True iff A_i is the floor or the ceiling of V_i for every party.
bool within_global_quota(std::span<const Rational> V,
                         std::span<const std::int64_t> A);
// First prefix and party at which the global quota fails, if any.
std::optional<QuotaViolation> check_global_quota(const TrajectoryState& state);

// max over prefixes and parties of |A - V|; zero for the empty trajectory.
Rational max_deviation(const TrajectoryState& state);

// CSV with header t,i,v,V,a,A,s; one row per (step, party). With
// float_report an extra s_float column echoes the surplus as a decimal.
std::string trajectory_to_csv(const TrajectoryState& state,
                              bool float_report = false);

struct CsvRow {
  std::int64_t t;
  std::int64_t i;
  Rational v, V, s;
  std::int64_t a, A;
};

// Parses the CSV form. Columns are located by header name; extra columns
// are ignored. Throws ParseError on malformed input.
std::vector<CsvRow> parse_trajectory_csv(std::string_view text);

struct VerifyReport {
  bool consistent = true;        // cumulative sums, surplus and indexing
  bool locally_feasible = true;  // 0/1 seats, house respected, support
  bool global_quota = true;
  std::optional<bool> alpha_ok;
  Rational max_deviation;
  std::size_t steps = 0;
  std::size_t parties = 0;
  std::vector<std::string> messages;
};

// Audits parsed rows. The trajectory must list every party at every step in
// order t = 1..T, i = 0..n-1.
VerifyReport verify_rows(const std::vector<CsvRow>& rows,
                         const std::optional<Rational>& alpha);

}  // namespace apportion

#endif  // APPORTION_TRAJECTORY_HPP_
