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

#ifndef APPORTION_RANDMETHOD_HPP_
#define APPORTION_RANDMETHOD_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "flow.hpp"
#include "greedy.hpp"
#include "instance.hpp"
#include "rational.hpp"
#include "trajectory.hpp"

namespace apportion {

// Bitmask over parties; bit i set means party i belongs to the set.
using PartySet = std::uint32_t;
inline constexpr std::size_t kMaxNetflowParties = 20;

std::vector<std::size_t> members(PartySet u);
PartySet to_party_set(std::span<const std::size_t> parties);

// Upper-quota set of a history: parties with A_i = ceil(V_i). Parties with
// integral V_i always belong to it.
PartySet upper_quota_set(std::span<const Rational> V,
                         std::span<const std::int64_t> A);

// Distribution over upper-quota sets after t steps.
struct QuotaDistribution {
  std::size_t t = 0;
  std::size_t n = 0;
  std::vector<Rational> V;
  std::map<PartySet, Rational> pi;

  // Fresh state: all parties hold their (zero) ceiling with probability one.
  static QuotaDistribution initial(std::size_t n);
};

struct StepNetwork {
  CapacitatedNetwork net;
  std::vector<PartySet> sets;          // the u nodes, in map order
  std::vector<std::size_t> source_arc; // (o, u) per set
  std::vector<std::vector<std::size_t>> assign_arc;  // (u, i) per set, party
  std::vector<std::size_t> sink_arc;   // (i, d) per party
};

// The per-step network for votes v given the current distribution. Zero
// capacity arcs are kept so arc indices do not depend on the votes.
// Requires v.house() > 0.
StepNetwork build_step_network(const QuotaDistribution& dist,
                               const VoteVector& v);

struct InfeasibleWitness {
  std::size_t step;  // 1-based step that could not be extended
  QuotaDistribution dist;
  VoteVector votes;
  StepNetwork network;
  CutCertificate cut;
};

struct StepPlan {
  std::size_t step;  // 1-based
  VoteVector votes;
  std::optional<StepNetwork> network;  // absent when the house is zero
  Flow flow;
  // Conditional lottery over seat sets for every upper-quota set.
  std::map<PartySet, std::vector<SubsetComponent>> lottery;
  QuotaDistribution next;
};

struct AdvanceResult {
  std::optional<StepPlan> plan;
  std::optional<InfeasibleWitness> witness;
};

// Extends the method by one step. With `injected`, that flow is used
// instead of the solver's (it must be feasible of value one; otherwise
// DomainError).
AdvanceResult advance(const QuotaDistribution& dist, const VoteVector& v,
                      const Flow* injected = nullptr);

// sum over u of pi(u) times the probability that i is seated from u.
std::vector<Rational> exact_step_marginals(const QuotaDistribution& dist,
                                           const StepPlan& plan);
// Convenience form that advances first; throws InfeasibleStepError.
std::vector<Rational> exact_step_marginals(const QuotaDistribution& dist,
                                           const VoteVector& v);

// Chooses the flow for a step (or nullopt to use the solver's).
using FlowChooser =
    std::function<std::optional<Flow>(std::size_t step, const StepNetwork&)>;

// The network flow method unrolled over a whole instance.
class NetflowPlan {
 public:
  static NetflowPlan build(const Instance& inst, const FlowChooser& chooser = {});

  std::size_t parties() const { return n_; }
  const std::vector<StepPlan>& steps() const { return steps_; }
  const QuotaDistribution& final_distribution() const { return final_; }
  const std::optional<InfeasibleWitness>& witness() const { return witness_; }
  bool complete() const { return !witness_.has_value(); }

  // Samples one trajectory. Throws InfeasibleStepError when the plan stops
  // early.
  TrajectoryState sample(std::mt19937_64& rng) const;

  // {"t", "V", "pi": [{"u", "prob", "lottery": [{"set", "weight"}]}]} per
  // step, followed by the final distribution.
  std::string state_json() const;

 private:
  std::size_t n_ = 0;
  std::vector<StepPlan> steps_;
  QuotaDistribution final_;
  std::optional<InfeasibleWitness> witness_;
};

std::string distribution_to_json(
    const QuotaDistribution& dist,
    const std::map<PartySet, std::vector<SubsetComponent>>* lottery);
std::string witness_to_json(const InfeasibleWitness& w);

// The network flow method as an online method; keeps the distribution of
// the vote stream seen so far and samples from the realised upper-quota
// set.
class NetworkFlowMethod : public OnlineMethod {
 public:
  explicit NetworkFlowMethod(std::uint64_t seed) : seed_(seed), rng_(seed) {}
  std::string name() const override { return "netflow"; }
  std::vector<std::size_t> select(std::span<const Rational> V_prev,
                                  std::span<const std::int64_t> A_prev,
                                  const VoteVector& v) override;
  void reset() override;

 private:
  std::uint64_t seed_;
  std::mt19937_64 rng_;
  std::optional<QuotaDistribution> dist_;
};

// Systematic sampling with offset lambda for one or two parties: party 0 is
// seated at step t iff floor(V_0^{t-1} + lambda) < floor(V_0^t + lambda).
TrajectoryState grimmett_sample(const Instance& inst, const Rational& lambda);

class GrimmettMethod : public OnlineMethod {
 public:
  explicit GrimmettMethod(std::uint64_t seed) : seed_(seed) { reset(); }
  std::string name() const override { return "grimmett"; }
  std::vector<std::size_t> select(std::span<const Rational> V_prev,
                                  std::span<const std::int64_t> A_prev,
                                  const VoteVector& v) override;
  void reset() override;
  const Rational& lambda() const { return lambda_; }

 private:
  std::uint64_t seed_;
  Rational lambda_;
};

// Uniform dyadic offset k / 2^64 drawn from rng.
Rational draw_offset(std::mt19937_64& rng);

// Exact law of the seat sets, one entry per trajectory with positive
// probability.
struct WeightedTrajectory {
  Rational weight;
  std::vector<std::vector<std::size_t>> sets;
};

std::vector<WeightedTrajectory> enumerate_trajectories(
    const NetflowPlan& plan, std::size_t limit = 1u << 20);

// Law of the Grimmett sampler, by splitting [0, 1) at every breakpoint
// where some floor(V_0^t + lambda) changes.
std::vector<WeightedTrajectory> grimmett_distribution(const Instance& inst);

struct CorrelationCheck {
  std::optional<Rational> conditional;  // absent if the event has mass zero
  Rational unconditional;
};

// P[a^t_i = 1 | a^{t'}_i = given] and P[a^t_i = 1]; steps are 1-based.
CorrelationCheck check_negative_correlation(
    const std::vector<WeightedTrajectory>& law, std::size_t party,
    std::size_t t, std::size_t t_prime, bool given = true);

// Builds a method by name: greedy, lowest-index, random-feasible, min-max,
// grimmett, netflow. Throws DomainError for unknown names.
std::unique_ptr<OnlineMethod> make_method(const std::string& name,
                                          std::uint64_t seed);

}  // namespace apportion

#endif  // APPORTION_RANDMETHOD_HPP_
