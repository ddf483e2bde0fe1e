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

#include "randmethod.hpp"

#include <algorithm>
#include <json.hpp>

#include "errors.hpp"
#include "random.hpp"

namespace apportion {

using nlohmann::json;

std::vector<std::size_t> members(PartySet u) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; u != 0; ++i, u >>= 1) {
    if (u & 1u) out.push_back(i);
  }
  return out;
}

PartySet to_party_set(std::span<const std::size_t> parties) {
  PartySet u = 0;
  for (std::size_t i : parties) u |= PartySet{1} << i;
  return u;
}

PartySet upper_quota_set(std::span<const Rational> V,
                         std::span<const std::int64_t> A) {
  PartySet u = 0;
  for (std::size_t i = 0; i < V.size(); ++i) {
    if (Rational(A[i]) == V[i].ceil()) u |= PartySet{1} << i;
  }
  return u;
}

QuotaDistribution QuotaDistribution::initial(std::size_t n) {
  if (n == 0 || n > kMaxNetflowParties) {
    throw DomainError("network flow method supports 1 to " +
                      std::to_string(kMaxNetflowParties) + " parties");
  }
  QuotaDistribution d;
  d.n = n;
  d.V.assign(n, Rational(0));
  d.pi[(PartySet{1} << n) - 1] = Rational(1);
  return d;
}

namespace {

bool contains(PartySet u, std::size_t i) { return (u >> i) & 1u; }

std::string set_label(PartySet u) {
  std::string s = "u{";
  bool first = true;
  for (std::size_t i : members(u)) {
    s += (first ? "" : ",") + std::to_string(i);
    first = false;
  }
  return s + "}";
}

// Allocation summarised by u: ceilings inside u, floors outside.
std::vector<std::int64_t> allocation_of(const std::vector<Rational>& V,
                                        PartySet u) {
  std::vector<std::int64_t> A(V.size());
  for (std::size_t i = 0; i < V.size(); ++i) {
    A[i] = (contains(u, i) ? V[i].ceil() : V[i].floor()).to_int64();
  }
  return A;
}

json lottery_json(const std::vector<SubsetComponent>& lottery) {
  json out = json::array();
  for (const SubsetComponent& c : lottery) {
    out.push_back({{"set", c.set}, {"weight", c.weight.str()}});
  }
  return out;
}

json rationals_json(const std::vector<Rational>& xs) {
  json out = json::array();
  for (const Rational& x : xs) out.push_back(x.str());
  return out;
}

}  // namespace

StepNetwork build_step_network(const QuotaDistribution& dist,
                               const VoteVector& v) {
  if (v.size() != dist.n) throw DomainError("vote vector length mismatch");
  if (v.house() <= 0) throw DomainError("step network needs a positive house");
  const std::size_t n = dist.n;
  const Rational H(v.house());
  StepNetwork sn;
  std::vector<std::size_t> u_node, party_node(n);
  for (const auto& [u, p] : dist.pi) {
    sn.sets.push_back(u);
    u_node.push_back(sn.net.add_node(set_label(u)));
  }
  for (std::size_t i = 0; i < n; ++i) {
    party_node[i] = sn.net.add_node("i" + std::to_string(i));
  }
  std::size_t k = 0;
  for (const auto& [u, p] : dist.pi) {
    sn.source_arc.push_back(
        sn.net.add_arc(CapacitatedNetwork::kOrigin, u_node[k++], 0, p));
  }
  k = 0;
  for (const auto& [u, p] : dist.pi) {
    std::vector<std::size_t> arcs(n);
    for (std::size_t i = 0; i < n; ++i) {
      const Rational& Vi = dist.V[i];
      const Rational next = Vi + v[i];
      const bool blocked =
          (contains(u, i) && Vi.ceil() == next.ceil()) || v[i].is_zero();
      const bool forced =
          !contains(u, i) && Vi.floor() + Rational(1) == next.floor();
      const Rational share = p / H;
      arcs[i] = sn.net.add_arc(u_node[k], party_node[i],
                               forced ? share : Rational(0),
                               blocked ? Rational(0) : share);
    }
    sn.assign_arc.push_back(std::move(arcs));
    ++k;
  }
  for (std::size_t i = 0; i < n; ++i) {
    sn.sink_arc.push_back(sn.net.add_arc(
        party_node[i], CapacitatedNetwork::kDestination, 0, v[i] / H));
  }
  return sn;
}

AdvanceResult advance(const QuotaDistribution& dist, const VoteVector& v,
                      const Flow* injected) {
  if (v.size() != dist.n) throw DomainError("vote vector length mismatch");
  const std::size_t n = dist.n;
  AdvanceResult result;
  StepPlan plan;
  plan.step = dist.t + 1;
  plan.votes = v;
  plan.next.t = dist.t + 1;
  plan.next.n = n;
  plan.next.V = dist.V;
  for (std::size_t i = 0; i < n; ++i) plan.next.V[i] += v[i];

  if (v.house() == 0) {
    for (const auto& [u, p] : dist.pi) {
      plan.lottery[u] = {SubsetComponent{Rational(1), {}}};
      const auto A = allocation_of(dist.V, u);
      plan.next.pi[upper_quota_set(plan.next.V, A)] += p;
    }
    result.plan = std::move(plan);
    return result;
  }

  StepNetwork sn = build_step_network(dist, v);
  if (injected) {
    if (auto bad = flow_violation(sn.net, *injected)) {
      throw DomainError("injected flow is infeasible: " + *bad);
    }
    if (flow_value(sn.net, *injected) != Rational(1)) {
      throw DomainError("injected flow must have value 1");
    }
    plan.flow = *injected;
  } else {
    FlowResult fr = feasible_flow(sn.net, Rational(1));
    if (!fr.feasible()) {
      result.witness = InfeasibleWitness{plan.step, dist, v, std::move(sn),
                                         std::move(*fr.cut)};
      return result;
    }
    plan.flow = std::move(*fr.flow);
  }
  const Rational H(v.house());
  for (std::size_t k = 0; k < sn.sets.size(); ++k) {
    const PartySet u = sn.sets[k];
    const Rational& p = dist.pi.at(u);
    std::vector<Rational> z(n);
    for (std::size_t i = 0; i < n; ++i) {
      z[i] = plan.flow[sn.assign_arc[k][i]] * H / p;
    }
    auto lottery = hypersimplex_decompose(z, v.house());
    std::vector<std::int64_t> A = allocation_of(dist.V, u);
    for (const SubsetComponent& c : lottery) {
      std::vector<std::int64_t> next_A = A;
      for (std::size_t i : c.set) next_A[i] += 1;
      plan.next.pi[upper_quota_set(plan.next.V, next_A)] += p * c.weight;
    }
    plan.lottery[u] = std::move(lottery);
  }
  plan.network = std::move(sn);
  result.plan = std::move(plan);
  return result;
}

std::vector<Rational> exact_step_marginals(const QuotaDistribution& dist,
                                           const StepPlan& plan) {
  std::vector<Rational> m(dist.n);
  for (const auto& [u, p] : dist.pi) {
    for (const SubsetComponent& c : plan.lottery.at(u)) {
      for (std::size_t i : c.set) m[i] += p * c.weight;
    }
  }
  return m;
}

std::vector<Rational> exact_step_marginals(const QuotaDistribution& dist,
                                           const VoteVector& v) {
  AdvanceResult r = advance(dist, v);
  if (!r.plan) {
    throw InfeasibleStepError("step " + std::to_string(dist.t + 1) +
                              " admits no feasible flow");
  }
  return exact_step_marginals(dist, *r.plan);
}

NetflowPlan NetflowPlan::build(const Instance& inst, const FlowChooser& chooser) {
  require_valid(inst);
  NetflowPlan plan;
  plan.n_ = inst.parties();
  QuotaDistribution dist = QuotaDistribution::initial(inst.parties());
  for (std::size_t k = 0; k < inst.steps(); ++k) {
    const VoteVector v = inst.votes(k);
    std::optional<Flow> chosen;
    if (chooser && v.house() > 0) {
      chosen = chooser(k + 1, build_step_network(dist, v));
    }
    AdvanceResult r = advance(dist, v, chosen ? &*chosen : nullptr);
    if (!r.plan) {
      plan.witness_ = std::move(r.witness);
      break;
    }
    dist = r.plan->next;
    plan.steps_.push_back(std::move(*r.plan));
  }
  plan.final_ = std::move(dist);
  return plan;
}

TrajectoryState NetflowPlan::sample(std::mt19937_64& rng) const {
  if (witness_) {
    throw InfeasibleStepError("network flow method is infeasible at step " +
                              std::to_string(witness_->step));
  }
  TrajectoryState state(n_);
  PartySet u = (PartySet{1} << n_) - 1;
  std::vector<Rational> weights;
  for (const StepPlan& step : steps_) {
    const auto& lottery = step.lottery.at(u);
    weights.clear();
    for (const SubsetComponent& c : lottery) weights.push_back(c.weight);
    const auto& chosen = lottery[sample_index(rng, weights)].set;
    state.push(step.votes, chosen);
    u = upper_quota_set(state.V(), state.A());
  }
  return state;
}

std::string distribution_to_json(
    const QuotaDistribution& dist,
    const std::map<PartySet, std::vector<SubsetComponent>>* lottery) {
  json pi = json::array();
  for (const auto& [u, p] : dist.pi) {
    json entry = {{"u", members(u)}, {"prob", p.str()}};
    entry["lottery"] = lottery ? lottery_json(lottery->at(u)) : json::array();
    pi.push_back(std::move(entry));
  }
  return json{{"t", dist.t}, {"V", rationals_json(dist.V)}, {"pi", std::move(pi)}}
      .dump();
}

std::string NetflowPlan::state_json() const {
  json out = json::array();
  QuotaDistribution dist = QuotaDistribution::initial(n_);
  for (const StepPlan& step : steps_) {
    out.push_back(json::parse(distribution_to_json(dist, &step.lottery)));
    dist = step.next;
  }
  out.push_back(json::parse(distribution_to_json(dist, nullptr)));
  return out.dump();
}

std::string witness_to_json(const InfeasibleWitness& w) {
  std::vector<std::string> side;
  for (std::size_t v = 0; v < w.cut.in_set.size(); ++v) {
    if (w.cut.in_set[v]) side.push_back(w.network.net.label(v));
  }
  json j = {{"step", w.step},
            {"votes", rationals_json(w.votes.entries())},
            {"distribution", json::parse(distribution_to_json(w.dist, nullptr))},
            {"network", json::parse(network_to_json(w.network.net))},
            {"cut",
             {{"nodes", side},
              {"lower_in", w.cut.lower_in.str()},
              {"upper_out", w.cut.upper_out.str()}}}};
  return j.dump();
}

void NetworkFlowMethod::reset() {
  rng_.seed(seed_);
  dist_.reset();
}

std::vector<std::size_t> NetworkFlowMethod::select(
    std::span<const Rational> V_prev, std::span<const std::int64_t> A_prev,
    const VoteVector& v) {
  if (!dist_) dist_ = QuotaDistribution::initial(v.size());
  if (V_prev.size() != dist_->n ||
      !std::equal(V_prev.begin(), V_prev.end(), dist_->V.begin())) {
    throw DomainError("netflow method received a history it did not produce");
  }
  const PartySet u = upper_quota_set(V_prev, A_prev);
  if (!dist_->pi.count(u)) {
    throw DomainError("history has probability zero under the netflow method");
  }
  AdvanceResult r = advance(*dist_, v);
  if (!r.plan) {
    throw InfeasibleStepError("network flow method is infeasible at step " +
                              std::to_string(r.witness->step));
  }
  const auto& lottery = r.plan->lottery.at(u);
  std::vector<Rational> weights;
  for (const SubsetComponent& c : lottery) weights.push_back(c.weight);
  std::vector<std::size_t> chosen = lottery[sample_index(rng_, weights)].set;
  dist_ = std::move(r.plan->next);
  return chosen;
}

Rational draw_offset(std::mt19937_64& rng) {
  const std::uint64_t k = rng();
  mpz_class num;
  mpz_import(num.get_mpz_t(), 1, 1, sizeof k, 0, 0, &k);
  mpz_class den = 1;
  den <<= 64;
  return Rational(mpq_class(num, den));
}

void GrimmettMethod::reset() {
  std::mt19937_64 rng(seed_);
  lambda_ = draw_offset(rng);
}

namespace {

std::vector<std::size_t> grimmett_choice(std::span<const Rational> V_prev,
                                         const VoteVector& v,
                                         const Rational& lambda) {
  if (v.size() > 2) throw DomainError("systematic sampling needs n <= 2");
  const bool first = (V_prev[0] + lambda).floor() < (V_prev[0] + v[0] + lambda).floor();
  if (first) return {0};
  if (v.house() == 1) return {1};
  return {};
}

}  // namespace

std::vector<std::size_t> GrimmettMethod::select(
    std::span<const Rational> V_prev, std::span<const std::int64_t>,
    const VoteVector& v) {
  return grimmett_choice(V_prev, v, lambda_);
}

TrajectoryState grimmett_sample(const Instance& inst, const Rational& lambda) {
  if (inst.parties() > 2) throw DomainError("systematic sampling needs n <= 2");
  if (lambda.sign() < 0 || lambda >= Rational(1)) {
    throw DomainError("offset must lie in [0, 1)");
  }
  require_valid(inst);
  TrajectoryState state(inst.parties());
  for (std::size_t k = 0; k < inst.steps(); ++k) {
    const VoteVector v = inst.votes(k);
    state.push(v, grimmett_choice(state.V(), v, lambda));
  }
  return state;
}

std::vector<WeightedTrajectory> enumerate_trajectories(const NetflowPlan& plan,
                                                       std::size_t limit) {
  if (!plan.complete()) {
    throw InfeasibleStepError("plan stops at step " +
                              std::to_string(plan.witness()->step));
  }
  std::vector<WeightedTrajectory> out;
  struct Frame {
    Rational weight;
    std::vector<std::vector<std::size_t>> sets;
    std::vector<Rational> V;
    std::vector<std::int64_t> A;
  };
  const std::size_t n = plan.parties();
  std::vector<Frame> stack{{Rational(1), {}, std::vector<Rational>(n),
                            std::vector<std::int64_t>(n, 0)}};
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    const std::size_t k = f.sets.size();
    if (k == plan.steps().size()) {
      if (out.size() >= limit) throw DomainError("trajectory support too large");
      out.push_back({f.weight, std::move(f.sets)});
      continue;
    }
    const StepPlan& step = plan.steps()[k];
    const auto& lottery = step.lottery.at(upper_quota_set(f.V, f.A));
    for (auto it = lottery.rbegin(); it != lottery.rend(); ++it) {
      Frame g{f.weight * it->weight, f.sets, f.V, f.A};
      for (std::size_t i = 0; i < n; ++i) g.V[i] += step.votes[i];
      for (std::size_t i : it->set) g.A[i] += 1;
      g.sets.push_back(it->set);
      stack.push_back(std::move(g));
    }
  }
  return out;
}

std::vector<WeightedTrajectory> grimmett_distribution(const Instance& inst) {
  if (inst.parties() > 2) throw DomainError("systematic sampling needs n <= 2");
  require_valid(inst);
  std::vector<Rational> cuts{Rational(0), Rational(1)};
  Rational V;
  for (std::size_t k = 0; k < inst.steps(); ++k) {
    V += inst.row(k)[0];
    cuts.push_back((-V).frac());
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<WeightedTrajectory> out;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    TrajectoryState s = grimmett_sample(inst, cuts[k]);
    WeightedTrajectory w{cuts[k + 1] - cuts[k], {}};
    for (std::size_t t = 1; t <= s.t(); ++t) {
      std::vector<std::size_t> set;
      for (std::size_t i = 0; i < s.parties(); ++i) {
        if (s.seats_at(t)[i]) set.push_back(i);
      }
      w.sets.push_back(std::move(set));
    }
    auto same = std::find_if(out.begin(), out.end(), [&w](const WeightedTrajectory& x) {
      return x.sets == w.sets;
    });
    if (same != out.end()) {
      same->weight += w.weight;
    } else {
      out.push_back(std::move(w));
    }
  }
  return out;
}

CorrelationCheck check_negative_correlation(
    const std::vector<WeightedTrajectory>& law, std::size_t party,
    std::size_t t, std::size_t t_prime, bool given) {
  Rational joint, event, marginal;
  for (const WeightedTrajectory& w : law) {
    if (t == 0 || t_prime == 0 || t > w.sets.size() || t_prime > w.sets.size()) {
      throw DomainError("step index outside the trajectory");
    }
    auto seated = [&](std::size_t step) {
      const auto& s = w.sets[step - 1];
      return std::find(s.begin(), s.end(), party) != s.end();
    };
    const bool a = seated(t);
    if (a) marginal += w.weight;
    if (seated(t_prime) == given) {
      event += w.weight;
      if (a) joint += w.weight;
    }
  }
  CorrelationCheck out;
  out.unconditional = marginal;
  if (event.sign() > 0) out.conditional = joint / event;
  return out;
}

std::unique_ptr<OnlineMethod> make_method(const std::string& name,
                                          std::uint64_t seed) {
  if (name == "greedy") return std::make_unique<GreedyMethod>();
  if (name == "lowest-index") return std::make_unique<LowestIndexMethod>();
  if (name == "random-feasible") return std::make_unique<RandomFeasibleMethod>(seed);
  if (name == "min-max") return std::make_unique<MinMaxDeviationMethod>();
  if (name == "grimmett") return std::make_unique<GrimmettMethod>(seed);
  if (name == "netflow") return std::make_unique<NetworkFlowMethod>(seed);
  throw DomainError("unknown method '" + name + "'");
}

}  // namespace apportion
