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

#include "flow.hpp"

#include <algorithm>
#include <deque>
#include <json.hpp>
#include <map>
#include <numeric>
#include <stdexcept>

#include "errors.hpp"

namespace apportion {

using nlohmann::json;

CapacitatedNetwork::CapacitatedNetwork() : labels_{"o", "d"} {}

std::size_t CapacitatedNetwork::add_node(std::string label) {
  labels_.push_back(std::move(label));
  return labels_.size() - 1;
}

std::size_t CapacitatedNetwork::add_arc(std::size_t tail, std::size_t head,
                                        Rational lower, Rational upper) {
  if (tail >= labels_.size() || head >= labels_.size()) {
    throw DomainError("arc endpoint does not exist");
  }
  if (lower.sign() < 0 || upper < lower) {
    throw DomainError("arc bounds must satisfy 0 <= lower <= upper, got [" +
                      lower.str() + ", " + upper.str() + "]");
  }
  arcs_.push_back({tail, head, std::move(lower), std::move(upper)});
  return arcs_.size() - 1;
}

std::optional<std::size_t> CapacitatedNetwork::find_node(
    std::string_view label) const {
  for (std::size_t v = 0; v < labels_.size(); ++v) {
    if (labels_[v] == label) return v;
  }
  return std::nullopt;
}

std::optional<std::size_t> CapacitatedNetwork::find_arc(std::size_t tail,
                                                        std::size_t head) const {
  for (std::size_t e = 0; e < arcs_.size(); ++e) {
    if (arcs_[e].tail == tail && arcs_[e].head == head) return e;
  }
  return std::nullopt;
}

bool CapacitatedNetwork::has_integral_bounds() const {
  return std::all_of(arcs_.begin(), arcs_.end(), [](const Arc& a) {
    return a.lower.is_integer() && a.upper.is_integer();
  });
}

namespace {

// Edmonds-Karp over arbitrary-precision integers. Edges are stored in
// forward/backward pairs (index ^ 1 is the partner).
class IntMaxFlow {
 public:
  explicit IntMaxFlow(std::size_t nodes) : adj_(nodes) {}

  std::size_t add_edge(std::size_t u, std::size_t v, const mpz_class& cap) {
    adj_[u].push_back(to_.size());
    to_.push_back(v);
    cap_.push_back(cap);
    adj_[v].push_back(to_.size());
    to_.push_back(u);
    cap_.push_back(0);
    return to_.size() - 2;
  }

  mpz_class run(std::size_t s, std::size_t t) {
    mpz_class total = 0;
    std::vector<std::size_t> via(adj_.size());
    while (true) {
      std::vector<bool> seen(adj_.size(), false);
      std::deque<std::size_t> queue{s};
      seen[s] = true;
      while (!queue.empty() && !seen[t]) {
        const std::size_t u = queue.front();
        queue.pop_front();
        for (std::size_t e : adj_[u]) {
          if (!seen[to_[e]] && sgn(cap_[e]) > 0) {
            seen[to_[e]] = true;
            via[to_[e]] = e;
            queue.push_back(to_[e]);
          }
        }
      }
      if (!seen[t]) return total;
      mpz_class push = -1;
      for (std::size_t v = t; v != s; v = to_[via[v] ^ 1]) {
        if (push < 0 || cap_[via[v]] < push) push = cap_[via[v]];
      }
      for (std::size_t v = t; v != s; v = to_[via[v] ^ 1]) {
        cap_[via[v]] -= push;
        cap_[via[v] ^ 1] += push;
      }
      total += push;
    }
  }

  // Flow currently routed along forward edge e.
  const mpz_class& routed(std::size_t e) const { return cap_[e ^ 1]; }

  std::vector<bool> reachable(std::size_t s) const {
    std::vector<bool> seen(adj_.size(), false);
    std::deque<std::size_t> queue{s};
    seen[s] = true;
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop_front();
      for (std::size_t e : adj_[u]) {
        if (!seen[to_[e]] && sgn(cap_[e]) > 0) {
          seen[to_[e]] = true;
          queue.push_back(to_[e]);
        }
      }
    }
    return seen;
  }

 private:
  std::vector<std::vector<std::size_t>> adj_;
  std::vector<std::size_t> to_;
  std::vector<mpz_class> cap_;
};

mpz_class scaled(const Rational& r, const mpz_class& den) {
  mpq_class q = r.raw() * den;
  return q.get_num();
}

void cut_totals(const CapacitatedNetwork& net, const Rational& lo,
                const Rational& hi, CutCertificate& cut) {
  cut.lower_in = 0;
  cut.upper_out = 0;
  auto account = [&cut](bool tail_in, bool head_in, const Rational& l,
                        const Rational& u) {
    if (!tail_in && head_in) cut.lower_in += l;
    if (tail_in && !head_in) cut.upper_out += u;
  };
  for (const Arc& a : net.arcs()) {
    account(cut.in_set[a.tail], cut.in_set[a.head], a.lower, a.upper);
  }
  account(cut.in_set[CapacitatedNetwork::kDestination],
          cut.in_set[CapacitatedNetwork::kOrigin], lo, hi);
}

}  // namespace

FlowResult feasible_flow(const CapacitatedNetwork& net, const Rational& value) {
  return feasible_flow_between(net, value, value);
}

FlowResult feasible_flow_between(const CapacitatedNetwork& net,
                                 const Rational& min_value,
                                 const Rational& max_value) {
  if (min_value.sign() < 0 || max_value < min_value) {
    throw DomainError("flow value range must satisfy 0 <= min <= max");
  }
  const std::size_t n = net.node_count();
  const std::size_t m = net.arc_count();
  std::vector<Rational> all;
  all.reserve(2 * m + 2);
  for (const Arc& a : net.arcs()) {
    all.push_back(a.lower);
    all.push_back(a.upper);
  }
  all.push_back(min_value);
  all.push_back(max_value);
  const mpz_class den = common_denominator(all);

  // Arc m is the return arc (d, o).
  std::vector<std::size_t> tail(m + 1), head(m + 1);
  std::vector<mpz_class> lower(m + 1), upper(m + 1);
  for (std::size_t e = 0; e < m; ++e) {
    tail[e] = net.arc(e).tail;
    head[e] = net.arc(e).head;
    lower[e] = scaled(net.arc(e).lower, den);
    upper[e] = scaled(net.arc(e).upper, den);
  }
  tail[m] = CapacitatedNetwork::kDestination;
  head[m] = CapacitatedNetwork::kOrigin;
  lower[m] = scaled(min_value, den);
  upper[m] = scaled(max_value, den);

  const std::size_t source = n, sink = n + 1;
  IntMaxFlow g(n + 2);
  std::vector<mpz_class> excess(n, 0);
  std::vector<std::size_t> edge(m + 1);
  for (std::size_t e = 0; e <= m; ++e) {
    edge[e] = g.add_edge(tail[e], head[e], upper[e] - lower[e]);
    excess[head[e]] += lower[e];
    excess[tail[e]] -= lower[e];
  }
  mpz_class demand = 0;
  for (std::size_t v = 0; v < n; ++v) {
    if (sgn(excess[v]) > 0) {
      g.add_edge(source, v, excess[v]);
      demand += excess[v];
    } else if (sgn(excess[v]) < 0) {
      g.add_edge(v, sink, -excess[v]);
    }
  }
  FlowResult result;
  if (g.run(source, sink) == demand) {
    Flow f(m);
    for (std::size_t e = 0; e < m; ++e) {
      f[e] = Rational(mpq_class(lower[e] + g.routed(edge[e]), den));
    }
    result.flow = std::move(f);
    return result;
  }
  CutCertificate cut;
  std::vector<bool> seen = g.reachable(source);
  cut.in_set.assign(seen.begin(), seen.begin() + static_cast<std::ptrdiff_t>(n));
  cut_totals(net, min_value, max_value, cut);
  result.cut = std::move(cut);
  return result;
}

Rational flow_value(const CapacitatedNetwork& net, const Flow& f) {
  Rational out;
  for (std::size_t e = 0; e < net.arc_count(); ++e) {
    if (net.arc(e).tail == CapacitatedNetwork::kOrigin) out += f[e];
    if (net.arc(e).head == CapacitatedNetwork::kOrigin) out -= f[e];
  }
  return out;
}

std::optional<std::string> flow_violation(const CapacitatedNetwork& net,
                                          const Flow& f) {
  if (f.size() != net.arc_count()) return "flow has wrong number of arcs";
  std::vector<Rational> balance(net.node_count());
  for (std::size_t e = 0; e < net.arc_count(); ++e) {
    const Arc& a = net.arc(e);
    if (f[e] < a.lower || f[e] > a.upper) {
      return "arc " + net.label(a.tail) + "->" + net.label(a.head) + " carries " +
             f[e].str() + " outside [" + a.lower.str() + ", " + a.upper.str() +
             "]";
    }
    balance[a.head] += f[e];
    balance[a.tail] -= f[e];
  }
  for (std::size_t v = 2; v < net.node_count(); ++v) {
    if (!balance[v].is_zero()) {
      return "conservation fails at " + net.label(v) + " by " + balance[v].str();
    }
  }
  return std::nullopt;
}

bool verify_cut(const CapacitatedNetwork& net, const Rational& value,
                const CutCertificate& cut) {
  if (cut.in_set.size() != net.node_count()) return false;
  CutCertificate check{cut.in_set, {}, {}};
  cut_totals(net, value, value, check);
  return check.lower_in == cut.lower_in && check.upper_out == cut.upper_out &&
         check.lower_in > check.upper_out;
}

std::vector<FlowComponent> decompose_integral(const CapacitatedNetwork& net,
                                              const Flow& f) {
  if (!net.has_integral_bounds()) {
    throw DomainError("decompose_integral needs integral arc bounds");
  }
  if (auto bad = flow_violation(net, f)) {
    throw DomainError("decompose_integral needs a feasible flow: " + *bad);
  }
  const std::size_t m = net.arc_count();
  std::vector<FlowComponent> parts;
  auto record = [&parts](const Rational& w, Flow h) {
    for (FlowComponent& c : parts) {
      if (c.flow == h) {
        c.weight += w;
        return;
      }
    }
    parts.push_back({w, std::move(h)});
  };

  Flow x = f;
  Rational mass(1);
  while (true) {
    bool integral = std::all_of(x.begin(), x.end(),
                                [](const Rational& r) { return r.is_integer(); });
    if (integral) {
      record(mass, x);
      break;
    }
    CapacitatedNetwork box;
    for (std::size_t v = 2; v < net.node_count(); ++v) box.add_node(net.label(v));
    for (std::size_t e = 0; e < m; ++e) {
      box.add_arc(net.arc(e).tail, net.arc(e).head, x[e].floor(), x[e].ceil());
    }
    const Rational val = flow_value(net, x);
    FlowResult r = feasible_flow_between(box, val.floor(), val.ceil());
    if (!r.feasible()) {
      throw std::logic_error("rounded flow polytope unexpectedly empty");
    }
    const Flow& h = *r.flow;
    Rational theta(1);
    for (std::size_t e = 0; e < m; ++e) {
      if (x[e].is_integer()) continue;
      const Rational fr = x[e].frac();
      theta = min(theta, h[e] == x[e].ceil() ? fr : Rational(1) - fr);
    }
    record(mass * theta, h);
    for (std::size_t e = 0; e < m; ++e) {
      x[e] = (x[e] - theta * h[e]) / (Rational(1) - theta);
    }
    mass *= Rational(1) - theta;
  }
  return parts;
}

std::vector<SubsetComponent> hypersimplex_decompose(
    const std::vector<Rational>& v, std::int64_t house) {
  const std::size_t n = v.size();
  Rational sum;
  for (const Rational& x : v) {
    if (x.sign() < 0 || x > Rational(1)) {
      throw DomainError("hypersimplex entry " + x.str() + " outside [0, 1]");
    }
    sum += x;
  }
  if (house < 0 || sum != Rational(house)) {
    throw DomainError("hypersimplex entries sum to " + sum.str() +
                      ", expected " + std::to_string(house));
  }
  const std::size_t h = static_cast<std::size_t>(house);
  std::vector<Rational> r = v;
  Rational mass(1);
  std::vector<SubsetComponent> parts;
  std::vector<std::size_t> order(n);
  while (mass.sign() > 0) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&r](std::size_t a, std::size_t b) { return r[b] < r[a]; });
    Rational lambda = mass;
    for (std::size_t k = 0; k < h; ++k) lambda = min(lambda, r[order[k]]);
    for (std::size_t k = h; k < n; ++k) lambda = min(lambda, mass - r[order[k]]);
    if (lambda.sign() <= 0) {
      throw std::logic_error("hypersimplex decomposition stalled");
    }
    std::vector<std::size_t> set(order.begin(),
                                 order.begin() + static_cast<std::ptrdiff_t>(h));
    std::sort(set.begin(), set.end());
    for (std::size_t i : set) r[i] -= lambda;
    mass -= lambda;
    auto same = std::find_if(parts.begin(), parts.end(),
                             [&set](const SubsetComponent& c) { return c.set == set; });
    if (same != parts.end()) {
      same->weight += lambda;
    } else {
      parts.push_back({lambda, std::move(set)});
    }
  }
  return parts;
}

std::string network_to_json(const CapacitatedNetwork& net) {
  json arcs = json::array();
  for (const Arc& a : net.arcs()) {
    arcs.push_back({{"tail", a.tail},
                    {"head", a.head},
                    {"lower", a.lower.str()},
                    {"upper", a.upper.str()}});
  }
  return json{{"nodes", net.labels()}, {"arcs", std::move(arcs)}}.dump();
}

CapacitatedNetwork network_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("network JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("nodes") || !j.contains("arcs") ||
      !j["nodes"].is_array() || !j["arcs"].is_array()) {
    throw ParseError("network JSON needs arrays \"nodes\" and \"arcs\"");
  }
  if (j["nodes"].size() < 2) {
    throw ParseError("network needs at least the origin and destination");
  }
  CapacitatedNetwork net;
  for (std::size_t v = 2; v < j["nodes"].size(); ++v) {
    net.add_node(j["nodes"][v].is_string() ? j["nodes"][v].get<std::string>()
                                           : j["nodes"][v].dump());
  }
  auto endpoint = [&net](const json& x) -> std::size_t {
    if (x.is_number_unsigned() || x.is_number_integer()) return x.get<std::size_t>();
    if (x.is_string()) {
      if (auto v = net.find_node(x.get<std::string>())) return *v;
    }
    throw ParseError("unknown arc endpoint " + x.dump());
  };
  auto bound = [](const json& x) {
    if (x.is_string()) return Rational::parse(x.get<std::string>());
    if (x.is_number_integer()) return Rational(x.get<long long>());
    throw ParseError("arc bound must be a rational string, got " + x.dump());
  };
  for (const json& a : j["arcs"]) {
    if (!a.is_object() || !a.contains("tail") || !a.contains("head") ||
        !a.contains("upper")) {
      throw ParseError("arc needs tail, head and upper");
    }
    Rational lower = a.contains("lower") ? bound(a["lower"]) : Rational(0);
    try {
      net.add_arc(endpoint(a["tail"]), endpoint(a["head"]), lower,
                  bound(a["upper"]));
    } catch (const DomainError& e) {
      throw ParseError(e.what());
    }
  }
  return net;
}

std::string flow_to_json(const CapacitatedNetwork& net, const Flow& f) {
  json arcs = json::array();
  for (std::size_t e = 0; e < net.arc_count(); ++e) {
    arcs.push_back({{"tail", net.arc(e).tail},
                    {"head", net.arc(e).head},
                    {"flow", f[e].str()}});
  }
  return json{{"value", flow_value(net, f).str()}, {"arcs", std::move(arcs)}}
      .dump();
}

}  // namespace apportion
