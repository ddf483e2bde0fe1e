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

#include "offline.hpp"

#include <json.hpp>
#include <stdexcept>

#include "errors.hpp"

namespace apportion {

OfflineNetwork build_offline_network(const Instance& inst) {
  require_valid(inst);
  const std::size_t n = inst.parties(), T = inst.steps();
  OfflineNetwork on;
  std::vector<std::size_t> u(T);
  std::vector<std::vector<std::size_t>> w(T, std::vector<std::size_t>(n));
  for (std::size_t t = 0; t < T; ++t) {
    u[t] = on.net.add_node("u" + std::to_string(t + 1));
  }
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      w[t][i] = on.net.add_node("w" + std::to_string(t + 1) + "_" + std::to_string(i));
    }
  }
  for (std::size_t t = 0; t < T; ++t) {
    const VoteVector v = inst.votes(t);
    on.source_arc.push_back(
        on.net.add_arc(CapacitatedNetwork::kOrigin, u[t], 0, v.house()));
    std::vector<std::optional<std::size_t>> arcs(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (v[i].sign() > 0) arcs[i] = on.net.add_arc(u[t], w[t][i], 0, 1);
    }
    on.assign_arc.push_back(std::move(arcs));
  }
  std::vector<Rational> V(n);
  for (std::size_t t = 0; t < T; ++t) {
    std::vector<std::size_t> arcs(n);
    for (std::size_t i = 0; i < n; ++i) {
      V[i] += inst.row(t)[i];
      const std::size_t head =
          t + 1 < T ? w[t + 1][i] : CapacitatedNetwork::kDestination;
      arcs[i] = on.net.add_arc(w[t][i], head, V[i].floor(), V[i].ceil());
    }
    on.carry_arc.push_back(std::move(arcs));
  }
  return on;
}

Flow proportional_flow(const Instance& inst, const OfflineNetwork& on) {
  Flow f(on.net.arc_count());
  std::vector<Rational> V(inst.parties());
  for (std::size_t t = 0; t < inst.steps(); ++t) {
    Rational house;
    for (std::size_t i = 0; i < inst.parties(); ++i) {
      const Rational& v = inst.row(t)[i];
      house += v;
      V[i] += v;
      if (on.assign_arc[t][i]) f[*on.assign_arc[t][i]] = v;
      f[on.carry_arc[t][i]] = V[i];
    }
    f[on.source_arc[t]] = house;
  }
  return f;
}

OfflineLottery offline_lottery(const Instance& inst) {
  OfflineLottery lot;
  lot.network = build_offline_network(inst);
  lot.proportional = proportional_flow(inst, lot.network);
  if (auto bad = flow_violation(lot.network.net, lot.proportional)) {
    throw std::logic_error("proportional flow infeasible: " + *bad);
  }
  for (FlowComponent& c : decompose_integral(lot.network.net, lot.proportional)) {
    LotteryComponent comp{c.weight, {}, std::move(c.flow)};
    for (std::size_t t = 0; t < inst.steps(); ++t) {
      std::vector<std::size_t> set;
      for (std::size_t i = 0; i < inst.parties(); ++i) {
        const auto& e = lot.network.assign_arc[t][i];
        if (e && comp.flow[*e] == Rational(1)) set.push_back(i);
      }
      comp.sets.push_back(std::move(set));
    }
    lot.components.push_back(std::move(comp));
  }
  return lot;
}

std::string lottery_to_json(const OfflineLottery& lottery) {
  nlohmann::json out = nlohmann::json::array();
  for (const LotteryComponent& c : lottery.components) {
    out.push_back({{"weight", c.weight.str()}, {"sets", c.sets}});
  }
  return out.dump();
}

}  // namespace apportion
