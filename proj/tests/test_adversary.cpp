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


#include <doctest.h>

#include <json.hpp>
#include <map>
#include <random>
#include <tuple>

#include "adversary.hpp"
#include "errors.hpp"
#include "greedy.hpp"
#include "randmethod.hpp"
#include "support.hpp"

using namespace apportion;
using namespace apportion::testing;

namespace {

// Surpluses recomputed from the transcript alone.
std::vector<Rational> replay_surplus(const AdversaryRun& run, std::size_t n) {
  std::vector<std::vector<Rational>> votes;
  std::vector<std::vector<std::size_t>> sets;
  for (const auto& e : run.transcript) {
    votes.push_back(e.votes.entries());
    sets.push_back(e.allocation);
  }
  const Reference ref = reference_trajectory(votes, sets, n);
  std::vector<Rational> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = Rational(ref.A.back()[i]) - ref.V.back()[i];
  return s;
}

Rational max_abs(const std::vector<Rational>& s) {
  Rational m;
  for (const auto& x : s) m = max(m, x.abs());
  return m;
}

std::vector<std::size_t> all_parties(std::size_t n) {
  std::vector<std::size_t> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = i;
  return p;
}

}  // namespace

TEST_CASE("splitter examples") {
  TrajectoryState fresh(3);
  const VoteVector v = splitter(fresh, 0, 1);
  CHECK(v.entries() == Rs({"1/2", "1/2", "0"}));

  TrajectoryState t(2);
  const std::size_t first[] = {0};
  t.push(VV({"3/4", "1/4"}), first);  // surpluses (1/4, -1/4)
  const VoteVector w = splitter(t, 0, 1);
  CHECK(w.entries() == Rs({"3/4", "1/4"}));

  TrajectoryState u(2);
  u.push(VV({"1/2", "1/2"}), first);  // gap 1
  CHECK_THROWS_AS(splitter(u, 0, 1), DomainError);
  CHECK_THROWS_AS(splitter(u, 0, 0), DomainError);
}

TEST_CASE("property: splitters force a unit gap and keep the pair average") {
  std::mt19937_64 rng(1001);
  int checked = 0;
  while (checked < 400) {
    const std::size_t n = 2 + rng() % 4;
    TrajectoryState s(n);
    RandomFeasibleMethod rnd(rng());
    const Instance warm = random_instance(rng, n, rng() % 6);
    for (std::size_t t = 0; t < warm.steps(); ++t) step_method(rnd, s, warm.votes(t));
    const auto sur = surplus(s);
    const std::size_t i = rng() % n, j = rng() % n;
    if (i == j || sur[i] - sur[j] < Rational(0) || sur[i] - sur[j] >= Rational(1)) continue;
    ++checked;
    const VoteVector v = splitter(s, i, j);
    CHECK(v.house() == 1);
    CHECK(v.support_size() <= 2);
    for (std::size_t winner : {i, j}) {
      if (v[winner].is_zero()) continue;
      TrajectoryState next = s;
      const std::size_t chosen[] = {winner};
      next.push(v, chosen);
      const auto after = surplus(next);
      CHECK((after[i] - after[j]).abs() == Rational(1));
      CHECK(after[i] + after[j] == sur[i] + sur[j]);
    }
  }
}

TEST_CASE("booster base cases") {
  GreedyMethod g;
  AdversaryRun one = booster(g, TrajectoryState(3), {{1}, R("1/10"), {}});
  CHECK(one.state.t() == 0);
  CHECK(one.achieved >= -R("1/10"));

  AdversaryRun two = booster(g, TrajectoryState(2), {{0, 1}, R("1/100"), {}});
  CHECK(two.state.t() == 1);
  CHECK(two.achieved == R("1/2"));
  REQUIRE(two.transcript.size() == 1);
  CHECK(two.transcript[0].rule == "splitter");

  CHECK_THROWS_AS(booster(g, TrajectoryState(2), {{0, 1}, R("0"), {}}), DomainError);
  CHECK_THROWS_AS(booster(g, TrajectoryState(2), {{0, 0}, R("1/2"), {}}), DomainError);
  CHECK_THROWS_AS(booster(g, TrajectoryState(2), {{}, R("1/2"), {}}), DomainError);
}

TEST_CASE("booster with three parties and eps 1/64 against greedy") {
  GreedyMethod g;
  const AdversaryRun run = booster(g, TrajectoryState(3), {all_parties(3), R("1/64"), {}});
  const auto s = replay_surplus(run, 3);
  CHECK(s == surplus(run.state));
  CHECK(max_abs(s) >= Rational(1) - R("1/64"));
  CHECK(run.achieved == max_abs(s));
  CHECK(run.state.t() == run.transcript.size());
}

TEST_CASE("booster reaches the target against several methods") {
  std::vector<std::unique_ptr<OnlineMethod>> methods;
  methods.push_back(std::make_unique<GreedyMethod>());
  methods.push_back(std::make_unique<LowestIndexMethod>());
  methods.push_back(std::make_unique<RandomFeasibleMethod>(5));
  methods.push_back(std::make_unique<MinMaxDeviationMethod>());
  for (auto& m : methods) {
    for (std::size_t n = 2; n <= 5; ++n) {
      const Rational eps = R("1/16");
      const AdversaryRun run = booster(*m, TrajectoryState(n), {all_parties(n), eps, {}});
      const Rational target = Rational(static_cast<long long>(n) - 1, 2) - eps;
      INFO(m->name() << " n=" << n);
      CHECK(max_abs(replay_surplus(run, n)) >= target);
      for (const auto& e : run.transcript) {
        CHECK(e.votes.house() == 1);
        CHECK(e.votes.support_size() <= 2);
        CHECK((e.rule == "splitter") == (e.depth == 0));
      }
    }
  }
  // The network flow method also works as a black box for three parties.
  NetworkFlowMethod nf(3);
  const AdversaryRun run = booster(nf, TrajectoryState(3), {all_parties(3), R("1/8"), {}});
  CHECK(max_abs(surplus(run.state)) >= R("7/8"));
  CHECK_FALSE(check_global_quota(run.state).has_value());
}

TEST_CASE("booster on a party subset leaves other parties untouched") {
  GreedyMethod g;
  const AdversaryRun run = booster(g, TrajectoryState(5), {{1, 3, 4}, R("1/10"), {}});
  CHECK(run.state.V()[0] == Rational(0));
  CHECK(run.state.V()[2] == Rational(0));
  CHECK(run.witness != 0);
  CHECK(run.witness != 2);
  CHECK(run.achieved >= R("9/10"));
}

TEST_CASE("property: outer iterations make geometric progress within the bound") {
  GreedyMethod g;
  RandomFeasibleMethod rnd(77);
  for (OnlineMethod* m : {static_cast<OnlineMethod*>(&g), static_cast<OnlineMethod*>(&rnd)}) {
    for (std::size_t n = 3; n <= 6; ++n) {
      const AdversaryRun run =
          booster(*m, TrajectoryState(n), {all_parties(n), R("1/32"), {}});
      std::map<std::tuple<std::size_t, std::size_t, bool>, std::size_t> seen;
      for (const BoosterIteration& it : run.iterations) {
        const Rational thr =
            Rational(static_cast<long long>(it.size) - 3, 2) - it.epsilon / Rational(2);
        Rational step(1);
        for (std::size_t l = 0; l < it.ell; ++l) step /= Rational(2);
        const Rational floor_value = thr + Rational(1) - step;
        INFO(m->name() << " n=" << n << " size=" << it.size << " ell=" << it.ell);
        if (it.type_one) {
          CHECK(it.extreme >= floor_value);
        } else {
          CHECK(it.extreme <= -floor_value);
        }
        CHECK(it.ell < booster_iteration_bound(it.epsilon));
      }
    }
  }
}

TEST_CASE("booster step cap raises a timeout") {
  GreedyMethod g;
  CHECK_THROWS_AS(booster(g, TrajectoryState(4), {all_parties(4), R("1/64"), 3}),
                  TimeoutError);
}

TEST_CASE("iteration bound uses base-two logarithms") {
  CHECK(booster_iteration_bound(R("1/20")) == 2 * 6 + 2);  // 2^-6 <= 1/40
  CHECK(booster_iteration_bound(R("2")) == 2);
  CHECK_THROWS_AS(booster_iteration_bound(R("0")), DomainError);
}

TEST_CASE("fixed schedule for three parties") {
  GreedyMethod g;
  const AdversaryRun run = figure3_schedule(g, 3);
  REQUIRE(run.state.t() == 7);
  const auto s = surplus(run.state);
  Rational hi = s[0], lo = s[0];
  for (const auto& x : s) {
    hi = max(hi, x);
    lo = min(lo, x);
  }
  CHECK(hi == R("63/64"));
  CHECK(lo == R("-127/128"));
  CHECK(max_deviation(run.state) == R("127/128"));
  CHECK(run.achieved == R("127/128"));

  TrajectoryState first(3);
  const std::size_t p[] = {run.state.seats_at(1)[0] ? 0u : 1u};
  first.push(run.state.votes_at(1), p);
  std::vector<Rational> s1 = surplus(first);
  std::sort(s1.begin(), s1.end());
  CHECK(s1 == Rs({"-1/2", "0", "1/2"}));
}

TEST_CASE("fixed schedule for four parties") {
  GreedyMethod g;
  const AdversaryRun run = figure3_schedule(g, 4);
  REQUIRE(run.state.t() == 10);
  const auto s = surplus(run.state);
  CHECK(*std::max_element(s.begin(), s.end()) == R("11/8"));
  CHECK(*std::min_element(s.begin(), s.end()) == R("-11/8"));
  CHECK(max_deviation(run.state) == R("11/8"));
  CHECK_THROWS_AS(figure3_schedule(g, 5), DomainError);
}

TEST_CASE("transcript JSON lists every step") {
  GreedyMethod g;
  const AdversaryRun run = booster(g, TrajectoryState(4), {all_parties(4), R("1/4"), {}});
  const auto j = nlohmann::json::parse(transcript_to_json(run.transcript));
  REQUIRE(j.size() == run.transcript.size());
  CHECK(j[0].contains("rule"));
  CHECK(j[0]["vote_vector"].size() == 4);
  CHECK(j.back()["step"].get<std::size_t>() == run.state.t());
}
