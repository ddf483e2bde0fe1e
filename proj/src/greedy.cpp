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

#include "greedy.hpp"

#include <algorithm>
#include <numeric>

#include "errors.hpp"

namespace apportion {

namespace {

std::vector<std::size_t> support(const VoteVector& v) {
  std::vector<std::size_t> s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i].sign() > 0) s.push_back(i);
  }
  if (static_cast<std::int64_t>(s.size()) < v.house()) {
    throw InfeasibleStepError("only " + std::to_string(s.size()) +
                              " parties have votes, house is " +
                              std::to_string(v.house()));
  }
  return s;
}

void check_lengths(std::span<const Rational> V, std::span<const std::int64_t> A,
                   const VoteVector& v) {
  if (V.size() != v.size() || A.size() != v.size()) {
    throw DomainError("history and vote vector lengths differ");
  }
}

}  // namespace

std::vector<std::size_t> greedy_step(std::span<const Rational> V_prev,
                                     std::span<const std::int64_t> A_prev,
                                     const VoteVector& v) {
  check_lengths(V_prev, A_prev, v);
  std::vector<std::size_t> cand = support(v);
  std::vector<Rational> key(v.size());
  for (std::size_t i : cand) key[i] = Rational(A_prev[i]) - V_prev[i] - v[i];
  std::stable_sort(cand.begin(), cand.end(), [&key](std::size_t a, std::size_t b) {
    return key[a] < key[b];
  });
  cand.resize(static_cast<std::size_t>(v.house()));
  std::sort(cand.begin(), cand.end());
  return cand;
}

std::vector<std::size_t> LowestIndexMethod::select(
    std::span<const Rational> V_prev, std::span<const std::int64_t> A_prev,
    const VoteVector& v) {
  check_lengths(V_prev, A_prev, v);
  std::vector<std::size_t> s = support(v);
  s.resize(static_cast<std::size_t>(v.house()));
  return s;
}

std::vector<std::size_t> RandomFeasibleMethod::select(
    std::span<const Rational> V_prev, std::span<const std::int64_t> A_prev,
    const VoteVector& v) {
  check_lengths(V_prev, A_prev, v);
  std::vector<std::size_t> s = support(v);
  std::shuffle(s.begin(), s.end(), rng_);
  s.resize(static_cast<std::size_t>(v.house()));
  std::sort(s.begin(), s.end());
  return s;
}

std::vector<std::size_t> MinMaxDeviationMethod::select(
    std::span<const Rational> V_prev, std::span<const std::int64_t> A_prev,
    const VoteVector& v) {
  check_lengths(V_prev, A_prev, v);
  const std::vector<std::size_t> sup = support(v);
  const std::size_t h = static_cast<std::size_t>(v.house());
  if (sup.size() > 20) return greedy_step(V_prev, A_prev, v);
  const std::size_t n = v.size();
  std::vector<Rational> base(n);
  for (std::size_t i = 0; i < n; ++i) {
    base[i] = Rational(A_prev[i]) - V_prev[i] - v[i];
  }
  std::vector<bool> pick(sup.size(), false);
  std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(h), true);
  std::vector<std::size_t> best;
  Rational best_dev;
  bool have = false;
  do {
    std::vector<Rational> s = base;
    std::vector<std::size_t> set;
    for (std::size_t k = 0; k < sup.size(); ++k) {
      if (pick[k]) {
        s[sup[k]] += 1;
        set.push_back(sup[k]);
      }
    }
    Rational dev;
    for (const Rational& x : s) dev = max(dev, x.abs());
    if (!have || dev < best_dev) {
      best = set;
      best_dev = dev;
      have = true;
    }
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return best;
}

void step_method(OnlineMethod& method, TrajectoryState& state,
                 const VoteVector& v) {
  std::vector<std::size_t> chosen = method.select(state.V(), state.A(), v);
  state.push(v, chosen);
}

TrajectoryState run_method(OnlineMethod& method, const Instance& inst) {
  require_valid(inst);
  method.reset();
  TrajectoryState state(inst.parties());
  for (std::size_t k = 0; k < inst.steps(); ++k) {
    step_method(method, state, inst.votes(k));
  }
  return state;
}

std::vector<std::int64_t> hamilton_allocation(std::span<const Rational> v,
                                              std::int64_t house) {
  if (house < 0) throw DomainError("negative house");
  Rational total;
  for (const Rational& x : v) {
    if (x.sign() < 0) throw DomainError("negative weight");
    total += x;
  }
  std::vector<std::int64_t> seats(v.size(), 0);
  if (house == 0) return seats;
  if (total.is_zero()) throw DomainError("all weights zero with positive house");
  std::vector<Rational> rem(v.size());
  std::int64_t given = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Rational q = Rational(house) * v[i] / total;
    seats[i] = q.floor().to_int64();
    rem[i] = q.frac();
    given += seats[i];
  }
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&rem](std::size_t a, std::size_t b) {
    return rem[b] < rem[a];
  });
  for (std::size_t k = 0; given < house; ++k, ++given) seats[order[k]] += 1;
  return seats;
}

}  // namespace apportion
