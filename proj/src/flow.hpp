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

#ifndef APPORTION_FLOW_HPP_
#define APPORTION_FLOW_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rational.hpp"

namespace apportion {

struct Arc {
  std::size_t tail;
  std::size_t head;
  Rational lower;
  Rational upper;
};

// Directed network with rational lower and upper arc capacities. Node 0 is
// the origin and node 1 the destination.
class CapacitatedNetwork {
 public:
  static constexpr std::size_t kOrigin = 0;
  static constexpr std::size_t kDestination = 1;

  CapacitatedNetwork();

  std::size_t add_node(std::string label);
  // Throws DomainError unless 0 <= lower <= upper and both ends exist.
  std::size_t add_arc(std::size_t tail, std::size_t head, Rational lower,
                      Rational upper);

  std::size_t node_count() const { return labels_.size(); }
  std::size_t arc_count() const { return arcs_.size(); }
  const std::string& label(std::size_t node) const { return labels_[node]; }
  const std::vector<std::string>& labels() const { return labels_; }
  const Arc& arc(std::size_t e) const { return arcs_[e]; }
  const std::vector<Arc>& arcs() const { return arcs_; }
  std::optional<std::size_t> find_node(std::string_view label) const;
  std::optional<std::size_t> find_arc(std::size_t tail, std::size_t head) const;
  bool has_integral_bounds() const;

 private:
  std::vector<std::string> labels_;
  std::vector<Arc> arcs_;
};

// Per-arc flow values, indexed like CapacitatedNetwork::arcs().
using Flow = std::vector<Rational>;

// A node set R certifying infeasibility: with the return arc (d, o) of
// bounds [value, value] added, the lower capacity entering R exceeds the
// upper capacity leaving it.
struct CutCertificate {
  std::vector<bool> in_set;
  Rational lower_in;
  Rational upper_out;
};

struct FlowResult {
  std::optional<Flow> flow;
  std::optional<CutCertificate> cut;
  bool feasible() const { return flow.has_value(); }
};

// Feasible (o, d)-flow of exactly `value`, or a cut certificate.
FlowResult feasible_flow(const CapacitatedNetwork& net, const Rational& value);

// Same, with the flow value free to lie in [min_value, max_value].
FlowResult feasible_flow_between(const CapacitatedNetwork& net,
                                 const Rational& min_value,
                                 const Rational& max_value);

// Net outflow of the origin.
Rational flow_value(const CapacitatedNetwork& net, const Flow& f);

// Describes the first bound or conservation violation, if any.
std::optional<std::string> flow_violation(const CapacitatedNetwork& net,
                                          const Flow& f);

// Recomputes both sides of the certificate and checks strict inequality.
bool verify_cut(const CapacitatedNetwork& net, const Rational& value,
                const CutCertificate& cut);

struct FlowComponent {
  Rational weight;
  Flow flow;
};

// Convex decomposition of a feasible flow on a network with integral bounds
// into integral feasible flows. At most arc_count() + 1 components; weights
// are positive and sum to one. Throws DomainError if the preconditions fail.
std::vector<FlowComponent> decompose_integral(const CapacitatedNetwork& net,
                                              const Flow& f);

struct SubsetComponent {
  Rational weight;
  std::vector<std::size_t> set;  // sorted
};

// Convex decomposition of v (entries in [0, 1], sum `house`) into
// indicator vectors of house-element sets. At most v.size() components.
std::vector<SubsetComponent> hypersimplex_decompose(
    const std::vector<Rational>& v, std::int64_t house);

std::string network_to_json(const CapacitatedNetwork& net);
CapacitatedNetwork network_from_json(std::string_view text);
std::string flow_to_json(const CapacitatedNetwork& net, const Flow& f);

}  // namespace apportion

#endif  // APPORTION_FLOW_HPP_
