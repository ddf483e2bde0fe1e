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

#ifndef APPORTION_OFFLINE_HPP_
#define APPORTION_OFFLINE_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "flow.hpp"
#include "instance.hpp"
#include "rational.hpp"

namespace apportion {

// Horizon-wide network: o -> u^t (capacity H^t), u^t -> w^t_i (capacity 1,
// only for positive votes), w^t_i -> w^{t+1}_i and w^T_i -> d with bounds
// [floor V^t_i, ceil V^t_i].
struct OfflineNetwork {
  CapacitatedNetwork net;
  std::vector<std::size_t> source_arc;                            // [t]
  std::vector<std::vector<std::optional<std::size_t>>> assign_arc;  // [t][i]
  std::vector<std::vector<std::size_t>> carry_arc;                // [t][i]
};

OfflineNetwork build_offline_network(const Instance& inst);

// The fractional flow carrying v^t_i on assignment arcs and V^t_i on carry
// arcs.
Flow proportional_flow(const Instance& inst, const OfflineNetwork& on);

struct LotteryComponent {
  Rational weight;
  std::vector<std::vector<std::size_t>> sets;  // seat set per step
  Flow flow;
};

struct OfflineLottery {
  OfflineNetwork network;
  Flow proportional;
  std::vector<LotteryComponent> components;
};

OfflineLottery offline_lottery(const Instance& inst);

// [{"weight": "p/q", "sets": [[...], ...]}, ...]
std::string lottery_to_json(const OfflineLottery& lottery);

}  // namespace apportion

#endif  // APPORTION_OFFLINE_HPP_
