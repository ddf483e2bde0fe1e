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

#include "adversary.hpp"

#include <algorithm>
#include <json.hpp>
#include <numeric>

#include "errors.hpp"

namespace apportion {

VoteVector splitter(const TrajectoryState& state, std::size_t i,
                    std::size_t j) {
  const std::size_t n = state.parties();
  if (i >= n || j >= n || i == j) {
    throw DomainError("splitter needs two distinct parties");
  }
  const auto s = surplus(state);
  const Rational gap = s[i] - s[j];
  if (gap.sign() < 0 || gap >= Rational(1)) {
    throw DomainError("splitter needs 0 <= s_i - s_j < 1, got " + gap.str());
  }
  std::vector<Rational> v(n);
  v[i] = (Rational(1) + gap) / Rational(2);
  v[j] = (Rational(1) - gap) / Rational(2);
  return VoteVector(std::move(v));
}

std::size_t booster_iteration_bound(const Rational& epsilon) {
  if (epsilon.sign() <= 0) throw DomainError("epsilon must be positive");
  const Rational half_eps = epsilon / Rational(2);
  std::size_t h = 0;
  Rational p(1);
  while (p > half_eps) {
    p /= Rational(2);
    ++h;
  }
  return 2 * h + 2;
}

namespace {

class Adversary {
 public:
  Adversary(OnlineMethod& method, TrajectoryState state, std::uint64_t cap)
      : method_(method), cap_(cap) {
    run_.state = std::move(state);
  }

  void boost(std::vector<std::size_t> parties, const Rational& eps,
             std::size_t depth);
  void split(std::size_t i, std::size_t j, std::size_t depth);
  AdversaryRun finish(const std::vector<std::size_t>& parties);
  AdversaryRun& run() { return run_; }

 private:
  std::vector<std::size_t> ranked(std::vector<std::size_t> parties) const {
    const auto s = surplus(run_.state);
    std::stable_sort(parties.begin(), parties.end(),
                     [&s](std::size_t a, std::size_t b) { return s[b] < s[a]; });
    return parties;
  }
  Rational s(std::size_t i) const {
    return Rational(run_.state.A()[i]) - run_.state.V()[i];
  }

  OnlineMethod& method_;
  std::uint64_t cap_;
  std::uint64_t steps_ = 0;
  AdversaryRun run_;
};

void Adversary::split(std::size_t i, std::size_t j, std::size_t depth) {
  if (++steps_ > cap_) {
    throw TimeoutError("adversary exceeded " + std::to_string(cap_) + " steps");
  }
  VoteVector v = splitter(run_.state, i, j);
  std::vector<std::size_t> chosen =
      method_.select(run_.state.V(), run_.state.A(), v);
  run_.state.push(v, chosen);
  run_.transcript.push_back({run_.state.t(),
                             depth == 0 ? "splitter" : "booster-descend", depth,
                             {i, j}, std::move(v), std::move(chosen)});
}

void Adversary::boost(std::vector<std::size_t> parties, const Rational& eps,
                      std::size_t depth) {
  const std::size_t k = parties.size();
  if (k <= 1) return;
  const Rational goal = Rational(static_cast<long long>(k) - 1) / Rational(2) - eps;
  auto done = [&](const std::vector<std::size_t>& p) {
    return s(p.front()) >= goal || s(p.back()) <= -goal;
  };
  std::vector<std::size_t> p = ranked(parties);
  if (done(p)) return;
  if (k == 2) {
    split(p[0], p[1], depth);
    return;
  }
  const Rational inner_eps = eps / Rational(2);
  const Rational thr = Rational(static_cast<long long>(k) - 3) / Rational(2) - inner_eps;
  auto inner_ok = [&](const std::vector<std::size_t>& q) {
    return s(q[1]) >= thr || s(q[k - 2]) <= -thr;
  };
  auto reboost = [&]() {
    std::size_t rounds = 0;
    while (!done(p) && !inner_ok(p)) {
      if (++rounds > 2 * k + 8) {
        throw TimeoutError("inner boosters failed to make progress");
      }
      boost(std::vector<std::size_t>(p.begin() + 1, p.end() - 1), inner_eps,
            depth + 1);
      p = ranked(parties);
    }
  };
  reboost();
  std::size_t type_one = 0, type_two = 0;
  while (!done(p)) {
    if (s(p[1]) >= thr) {
      run_.iterations.push_back({depth, k, eps, true, type_one++, s(p.front())});
      split(p[0], p[1], depth);
    } else {
      run_.iterations.push_back({depth, k, eps, false, type_two++, s(p.back())});
      split(p[k - 2], p[k - 1], depth);
    }
    p = ranked(parties);
    reboost();
  }
}

AdversaryRun Adversary::finish(const std::vector<std::size_t>& parties) {
  run_.achieved = Rational(-1);
  for (std::size_t i : parties) {
    if (s(i).abs() > run_.achieved) {
      run_.achieved = s(i).abs();
      run_.witness = i;
    }
  }
  return std::move(run_);
}

}  // namespace

AdversaryRun booster(OnlineMethod& method, TrajectoryState state,
                     const AdversaryConfig& cfg) {
  if (cfg.epsilon.sign() <= 0) throw DomainError("epsilon must be positive");
  if (cfg.parties.empty()) throw DomainError("booster needs at least one party");
  std::vector<std::size_t> sorted = cfg.parties;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end() ||
      sorted.back() >= state.parties()) {
    throw DomainError("booster parties must be distinct valid indices");
  }
  Adversary adv(method, std::move(state), cfg.max_steps.value_or(1000000));
  adv.boost(cfg.parties, cfg.epsilon, 0);
  return adv.finish(cfg.parties);
}

AdversaryRun figure3_schedule(OnlineMethod& method, std::size_t n) {
  // Each entry is a pair of surplus ranks, highest surplus first.
  using Ranks = std::pair<std::size_t, std::size_t>;
  std::vector<Ranks> plan;
  if (n == 3) {
    const Ranks top{0, 1}, bottom{1, 2};
    plan = {top, top, bottom, top, bottom, top, bottom};
  } else if (n == 4) {
    const Ranks top{0, 1}, middle{1, 2}, bottom{2, 3};
    plan = {top, middle, top, bottom, middle, top, bottom, middle, top, bottom};
  } else {
    throw DomainError("the fixed schedule exists for n = 3 and n = 4 only");
  }
  method.reset();
  AdversaryRun run;
  run.state = TrajectoryState(n);
  for (const Ranks& r : plan) {
    const auto s = surplus(run.state);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&s](std::size_t a, std::size_t b) { return s[b] < s[a]; });
    const std::size_t i = order[r.first], j = order[r.second];
    VoteVector v = splitter(run.state, i, j);
    std::vector<std::size_t> chosen = method.select(run.state.V(), run.state.A(), v);
    run.state.push(v, chosen);
    run.transcript.push_back(
        {run.state.t(), "splitter", 0, {i, j}, std::move(v), std::move(chosen)});
  }
  const auto s = surplus(run.state);
  for (std::size_t i = 0; i < n; ++i) {
    if (s[i].abs() > run.achieved) {
      run.achieved = s[i].abs();
      run.witness = i;
    }
  }
  return run;
}

std::string transcript_to_json(const std::vector<TranscriptEntry>& transcript) {
  nlohmann::json out = nlohmann::json::array();
  for (const TranscriptEntry& e : transcript) {
    std::vector<std::string> votes;
    for (const Rational& x : e.votes.entries()) votes.push_back(x.str());
    out.push_back({{"step", e.step},
                   {"rule", e.rule},
                   {"depth", e.depth},
                   {"pair", {e.pair.first, e.pair.second}},
                   {"vote_vector", votes},
                   {"allocation", e.allocation}});
  }
  return out.dump();
}

}  // namespace apportion
