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

#ifndef APPORTION_INSTANCE_HPP_
#define APPORTION_INSTANCE_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rational.hpp"

namespace apportion {

// One election: fractional entitlements in [0, 1) whose sum (the house) is a
// non-negative integer.
class VoteVector {
 public:
  VoteVector() = default;
  // Throws DomainError if an entry is outside [0, 1) or the sum is not
  // integral.
  explicit VoteVector(std::vector<Rational> entries);

  std::size_t size() const { return entries_.size(); }
  std::int64_t house() const { return house_; }
  const Rational& operator[](std::size_t i) const { return entries_[i]; }
  const std::vector<Rational>& entries() const { return entries_; }
  std::span<const Rational> span() const { return entries_; }
  // Number of strictly positive entries.
  std::size_t support_size() const;

 private:
  std::vector<Rational> entries_;
  std::int64_t house_ = 0;
};

struct Violation {
  enum class Kind { kLength, kRange, kNonIntegralHouse };
  Kind kind;
  std::size_t step;  // 1-based
  std::optional<std::size_t> party;
  std::string message;
};

// A finite vote sequence. Rows are stored as given so that malformed input
// can be reported by validate_instance rather than rejected on load.
class Instance {
 public:
  Instance() = default;
  Instance(std::size_t parties, std::vector<std::vector<Rational>> rows)
      : parties_(parties), rows_(std::move(rows)) {}
  Instance(std::size_t parties, const std::vector<VoteVector>& rows);

  std::size_t parties() const { return parties_; }
  std::size_t steps() const { return rows_.size(); }
  const std::vector<Rational>& row(std::size_t k) const { return rows_[k]; }
  const std::vector<std::vector<Rational>>& rows() const { return rows_; }
  void append(const VoteVector& v);

  // Validated view of step k (0-based). Throws DomainError if invalid.
  VoteVector votes(std::size_t k) const;

 private:
  std::size_t parties_ = 0;
  std::vector<std::vector<Rational>> rows_;
};

std::vector<Violation> validate_instance(const Instance& inst);

// Throws InvalidInstanceError listing every violation.
void require_valid(const Instance& inst);

// {"n": <int>, "votes": [["p/q", ...], ...]}; entries may also be decimal
// strings or JSON integers.
Instance instance_from_json(std::string_view text);
std::string instance_to_json(const Instance& inst);

// FNV-1a digest of the canonical JSON form, as 16 hex digits.
std::string instance_digest(const Instance& inst);

// Parses a comma separated list of rationals ("3/5,3/10,1/10").
std::vector<Rational> parse_rational_list(std::string_view text);

}  // namespace apportion

#endif  // APPORTION_INSTANCE_HPP_
