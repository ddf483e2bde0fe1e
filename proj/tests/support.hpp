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


// Shared helpers for the test binaries: literals, seeded generators and
// independent reference computations that do not call the code under test.

#ifndef APPORTION_TESTS_SUPPORT_HPP_
#define APPORTION_TESTS_SUPPORT_HPP_

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "flow.hpp"
#include "instance.hpp"
#include "mmhsc.hpp"
#include "randmethod.hpp"
#include "rational.hpp"

namespace apportion::testing {

inline Rational R(std::string_view s) { return Rational::parse(s); }

inline std::vector<Rational> Rs(std::initializer_list<const char*> xs) {
  std::vector<Rational> out;
  for (const char* x : xs) out.push_back(R(x));
  return out;
}

inline VoteVector VV(std::initializer_list<const char*> xs) {
  return VoteVector(Rs(xs));
}

inline Instance repeated(const std::vector<Rational>& row, std::size_t steps) {
  return Instance(row.size(), std::vector<std::vector<Rational>>(steps, row));
}

// Random vote vector over denominator q: entries k/q with 0 <= k < q and an
// integral sum. The house is drawn from [min_house, max_house] clipped to
// what n entries below one can reach.
inline VoteVector random_votes(std::mt19937_64& rng, std::size_t n, std::int64_t q,
                               std::int64_t min_house = 1,
                               std::optional<std::int64_t> max_house = {}) {
  const auto top = static_cast<std::int64_t>(n) * (q - 1) / q;
  std::int64_t hi = std::min(top, max_house.value_or(top));
  std::int64_t lo = std::min(min_house, hi);
  if (lo < 0) lo = 0;
  const std::int64_t H =
      std::uniform_int_distribution<std::int64_t>(lo, std::max(lo, hi))(rng);
  // Each entry takes at most q-1 units; the target is H*q units.
  std::vector<std::int64_t> k(n, 0);
  std::int64_t need = H * q;
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  while (need > 0) {
    const std::size_t i = pick(rng);
    if (k[i] < q - 1) {
      const std::int64_t room = std::min(q - 1 - k[i], need);
      const std::int64_t add =
          std::uniform_int_distribution<std::int64_t>(1, room)(rng);
      k[i] += add;
      need -= add;
    }
  }
  std::vector<Rational> v;
  for (std::int64_t x : k) v.emplace_back(x, q);
  return VoteVector(std::move(v));
}

inline Instance random_instance(std::mt19937_64& rng, std::size_t n, std::size_t T,
                                std::int64_t min_q = 2, std::int64_t max_q = 12) {
  Instance inst(n, std::vector<std::vector<Rational>>{});
  for (std::size_t t = 0; t < T; ++t) {
    const std::int64_t q = std::uniform_int_distribution<std::int64_t>(min_q, max_q)(rng);
    inst.append(random_votes(rng, n, q, n == 1 ? 0 : 1));
  }
  return inst;
}

// Reference cumulative bookkeeping from raw votes and seat sets.
struct Reference {
  std::vector<std::vector<Rational>> V;      // [t][i], t = 0..T
  std::vector<std::vector<std::int64_t>> A;  // [t][i]
};

inline Reference reference_trajectory(const std::vector<std::vector<Rational>>& votes,
                                      const std::vector<std::vector<std::size_t>>& sets,
                                      std::size_t n) {
  Reference r;
  r.V.emplace_back(n, Rational(0));
  r.A.emplace_back(n, 0);
  for (std::size_t t = 0; t < votes.size(); ++t) {
    std::vector<Rational> V = r.V.back();
    std::vector<std::int64_t> A = r.A.back();
    for (std::size_t i = 0; i < n; ++i) V[i] += votes[t][i];
    for (std::size_t i : sets[t]) A[i] += 1;
    r.V.push_back(std::move(V));
    r.A.push_back(std::move(A));
  }
  return r;
}

inline Rational reference_max_deviation(const Reference& r) {
  Rational worst;
  for (std::size_t t = 0; t < r.V.size(); ++t) {
    for (std::size_t i = 0; i < r.V[t].size(); ++i) {
      const Rational d = Rational(r.A[t][i]) - r.V[t][i];
      const Rational a = d.sign() < 0 ? -d : d;
      if (a > worst) worst = a;
    }
  }
  return worst;
}

// Quota check via integer division on numerator and denominator.
inline bool reference_global_quota(const Reference& r) {
  for (std::size_t t = 0; t < r.V.size(); ++t) {
    for (std::size_t i = 0; i < r.V[t].size(); ++i) {
      const mpz_class num = r.V[t][i].numerator();
      const mpz_class den = r.V[t][i].denominator();
      mpz_class fl;
      mpz_fdiv_q(fl.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
      const mpz_class ce = (fl * den == num) ? fl : fl + 1;
      const mpz_class a = r.A[t][i];
      if (a < fl || a > ce) return false;
    }
  }
  return true;
}

inline std::vector<std::vector<std::size_t>> seat_sets(const TrajectoryState& s) {
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t t = 1; t <= s.t(); ++t) {
    std::vector<std::size_t> set;
    for (std::size_t i = 0; i < s.parties(); ++i) {
      if (s.seats_at(t)[i]) set.push_back(i);
    }
    out.push_back(std::move(set));
  }
  return out;
}

// All size-k subsets of the support of v, in lexicographic order.
inline std::vector<std::vector<std::size_t>> feasible_sets(const std::vector<Rational>& v,
                                                           std::int64_t k) {
  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i].sign() > 0) support.push_back(i);
  }
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur;
  std::function<void(std::size_t)> rec = [&](std::size_t from) {
    if (static_cast<std::int64_t>(cur.size()) == k) {
      out.push_back(cur);
      return;
    }
    for (std::size_t j = from; j < support.size(); ++j) {
      cur.push_back(support[j]);
      rec(j + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

// Minimum over every locally feasible allocation sequence of the max
// deviation, by exhaustive search.
inline Rational brute_force_min_deviation(const Instance& inst) {
  const std::size_t n = inst.parties();
  std::optional<Rational> best;
  std::vector<std::vector<std::size_t>> chosen;
  std::function<void(std::size_t)> rec = [&](std::size_t t) {
    if (t == inst.steps()) {
      const Rational d = reference_max_deviation(
          reference_trajectory(inst.rows(), chosen, n));
      if (!best || d < *best) best = d;
      return;
    }
    Rational h;
    for (const Rational& x : inst.row(t)) h += x;
    for (const auto& s : feasible_sets(inst.row(t), h.to_int64())) {
      chosen.push_back(s);
      rec(t + 1);
      chosen.pop_back();
    }
  };
  rec(0);
  return best.value_or(Rational(0));
}

// Exhaustive search over integer flows of the network scaled by the common
// denominator of all bounds and the value. Arcs with zero upper bound are
// fixed at zero. Each arc's range is narrowed so that both of its end nodes
// can still be balanced by the arcs not yet assigned; this only discards
// partial assignments that cannot complete, so the search stays exhaustive.
struct EnumerationResult {
  bool feasible = false;
  std::uint64_t count = 0;  // number of integer flows found (capped)
  std::vector<Rational> first;
};

inline EnumerationResult enumerate_integer_flows(const CapacitatedNetwork& net,
                                                 const Rational& value,
                                                 std::uint64_t cap = 2) {
  std::vector<Rational> all{value};
  for (const Arc& a : net.arcs()) {
    all.push_back(a.lower);
    all.push_back(a.upper);
  }
  const mpz_class scale = common_denominator(all);
  auto scaled = [&](const Rational& r) {
    return (r * Rational(scale)).to_int64();
  };
  const std::size_t m = net.arc_count();
  const std::size_t nodes = net.node_count();
  std::vector<std::int64_t> lo(m), hi(m);
  for (std::size_t e = 0; e < m; ++e) {
    lo[e] = scaled(net.arc(e).lower);
    hi[e] = scaled(net.arc(e).upper);
  }
  const std::int64_t val = scaled(value);
  // target net outflow per node
  std::vector<std::int64_t> target(nodes, 0);
  target[CapacitatedNetwork::kOrigin] = val;
  target[CapacitatedNetwork::kDestination] = -val;
  // range of net outflow still reachable through unassigned arcs
  std::vector<std::int64_t> out(nodes, 0), rmin(nodes, 0), rmax(nodes, 0);
  std::vector<std::size_t> order;
  EnumerationResult res;
  for (std::size_t e = 0; e < m; ++e) {
    const Arc& a = net.arc(e);
    if (hi[e] == 0) {
      if (lo[e] > 0) return res;
      continue;
    }
    order.push_back(e);
    rmin[a.tail] += lo[e];
    rmax[a.tail] += hi[e];
    rmin[a.head] -= hi[e];
    rmax[a.head] -= lo[e];
  }
  for (std::size_t x = 0; x < nodes; ++x) {
    const std::int64_t need = target[x] - out[x];
    if (need < rmin[x] || need > rmax[x]) return res;
  }
  std::vector<std::int64_t> f(m, 0);
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (res.count >= cap) return;
    if (k == order.size()) {
      for (std::size_t x = 0; x < nodes; ++x) {
        if (out[x] != target[x]) return;
      }
      if (res.count == 0) {
        for (std::size_t e = 0; e < m; ++e) {
          res.first.push_back(Rational(f[e]) / Rational(scale));
        }
      }
      ++res.count;
      res.feasible = true;
      return;
    }
    const std::size_t e = order[k];
    const std::size_t t = net.arc(e).tail, h = net.arc(e).head;
    rmin[t] -= lo[e];
    rmax[t] -= hi[e];
    rmin[h] += hi[e];
    rmax[h] += lo[e];
    const std::int64_t need_t = target[t] - out[t];
    const std::int64_t need_h = target[h] - out[h];
    const std::int64_t a = std::max({lo[e], need_t - rmax[t], rmin[h] - need_h});
    const std::int64_t b = std::min({hi[e], need_t - rmin[t], rmax[h] - need_h});
    for (std::int64_t x = a; x <= b && res.count < cap; ++x) {
      f[e] = x;
      out[t] += x;
      out[h] -= x;
      rec(k + 1);
      out[t] -= x;
      out[h] += x;
    }
    f[e] = 0;
    rmin[t] += lo[e];
    rmax[t] += hi[e];
    rmin[h] -= hi[e];
    rmax[h] -= lo[e];
  };
  rec(0);
  return res;
}

inline std::size_t positive_arcs(const CapacitatedNetwork& net) {
  std::size_t c = 0;
  for (const Arc& a : net.arcs()) c += a.upper.sign() > 0;
  return c;
}

// Interval-measure law of systematic sampling on n <= 2 parties. On each
// interval between consecutive breakpoints frac(-V^t_0) the floor rule is
// constant, so the left endpoint represents the interval.
struct IntervalLaw {
  Rational weight;
  std::vector<std::uint8_t> seat0;  // party 0 seated at step t
};

inline std::vector<IntervalLaw> grimmett_interval_oracle(const Instance& inst) {
  std::vector<Rational> V{Rational(0)};
  for (const auto& row : inst.rows()) V.push_back(V.back() + row[0]);
  std::vector<Rational> cuts{Rational(0), Rational(1)};
  for (const Rational& x : V) cuts.push_back((-x).frac());
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<IntervalLaw> law;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const Rational lambda = cuts[k];
    IntervalLaw piece{cuts[k + 1] - cuts[k], {}};
    for (std::size_t t = 1; t < V.size(); ++t) {
      piece.seat0.push_back((V[t - 1] + lambda).floor() < (V[t] + lambda).floor());
    }
    law.push_back(std::move(piece));
  }
  return law;
}

// Step network capacities recomputed from the construction rule.
struct ArcBounds {
  Rational lower;
  Rational upper;
};

inline ArcBounds reference_assign_bounds(PartySet u, const Rational& prob,
                                         const Rational& Vi, const Rational& vi,
                                         std::size_t i, std::int64_t house) {
  const bool in_u = (u >> i) & 1u;
  const Rational next = Vi + vi;
  const Rational share = prob / Rational(house);
  ArcBounds b{Rational(0), share};
  if (vi.is_zero() || (in_u && Vi.ceil() == next.ceil())) b.upper = Rational(0);
  if (!in_u && Vi.floor() + Rational(1) == next.floor()) b.lower = share;
  return b;
}

// Three-party single-step configurations with non-integral V, classified by
// house, upper-quota set size and the number of parties whose vote reaches
// their ceiling gap.
struct CaseConfig {
  std::string label;    // "1.1.1" ... "2.2.2"
  std::size_t special;  // the distinguished party, or 3 if none
  QuotaDistribution dist;
  VoteVector v;
};

inline std::string classify_case(const QuotaDistribution& dist, const VoteVector& v,
                                 std::size_t* special) {
  const std::size_t size = members(dist.pi.begin()->first).size();
  std::vector<bool> reaches(3);
  std::size_t c = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    reaches[i] = v[i] >= dist.V[i].ceil() - dist.V[i];
    c += reaches[i];
  }
  // When every vote exactly fills its ceiling gap all arcs are forced and any
  // party may serve as the distinguished one.
  auto only = [&](bool want) {
    for (std::size_t i = 0; i < 3; ++i) {
      if (reaches[i] == want) return i;
    }
    return std::size_t{0};
  };
  *special = 3;
  if (v.house() == 1 && size == 1) {
    if (c == 0) return "1.1.1";
    *special = only(true);
    return "1.1.2";
  }
  if (v.house() == 1 && size == 2) {
    if (c == 1) {
      *special = only(true);
      return "1.2.1";
    }
    *special = only(false);
    return "1.2.2";
  }
  if (v.house() == 2 && size == 1) {
    if (c == 1) {
      *special = only(true);
      return "2.1.1";
    }
    *special = only(false);
    return "2.1.2";
  }
  if (c == 2) {
    *special = only(false);
    return "2.2.1";
  }
  return "2.2.2";
}

// A random configuration over tenths: fractional parts of V summing to 1 or
// 2 (which fixes the upper-quota distribution) and a random vote vector.
inline CaseConfig random_case(std::mt19937_64& rng) {
  const std::int64_t q = 10;
  for (;;) {
    std::vector<std::int64_t> fr(3);
    for (auto& x : fr) x = std::uniform_int_distribution<std::int64_t>(1, q - 1)(rng);
    const std::int64_t sum = fr[0] + fr[1] + fr[2];
    if (sum != q && sum != 2 * q) continue;
    QuotaDistribution dist;
    dist.n = 3;
    dist.t = 1 + rng() % 5;
    for (std::size_t i = 0; i < 3; ++i) {
      dist.V.push_back(Rational(static_cast<long long>(rng() % 4)) + Rational(fr[i], q));
    }
    if (sum == q) {
      for (std::size_t i = 0; i < 3; ++i) dist.pi[PartySet{1u} << i] = Rational(fr[i], q);
    } else {
      for (std::size_t i = 0; i < 3; ++i) {
        dist.pi[PartySet{7u} & ~(PartySet{1u} << i)] = Rational(q - fr[i], q);
      }
    }
    CaseConfig c{"", 3, dist, random_votes(rng, 3, q, 1, 2)};
    c.label = classify_case(c.dist, c.v, &c.special);
    return c;
  }
}

// The explicit value-one flow for the six configurations with a unique flow.
// Arcs not named in a case carry their upper bound.
inline std::optional<Flow> closed_form_flow(const CaseConfig& c, const StepNetwork& sn) {
  if (c.label == "1.1.1" || c.label == "2.2.2") return std::nullopt;
  const std::size_t p = c.special;
  std::size_t q = 3, r = 3;
  for (std::size_t i = 0; i < 3; ++i) {
    if (i == p) continue;
    (q == 3 ? q : r) = i;
  }
  const auto bit = [](std::size_t i) { return PartySet{1u} << i; };
  const auto pi = [&](PartySet u) { return c.dist.pi.at(u); };
  const auto& v = c.v;
  const Rational one(1), two(2);
  std::map<std::pair<PartySet, std::size_t>, Rational> named;
  if (c.label == "1.1.2") {
    named[{bit(p), p}] = v[p] - (one - pi(bit(p)));
    named[{bit(p), q}] = v[q];
    named[{bit(p), r}] = v[r];
    named[{bit(q), r}] = Rational(0);
    named[{bit(r), q}] = Rational(0);
  } else if (c.label == "1.2.1") {
    named[{bit(p) | bit(q), p}] = pi(bit(p) | bit(q)) - v[r];
    named[{bit(p) | bit(q), r}] = v[r];
    named[{bit(p) | bit(r), p}] = pi(bit(p) | bit(r)) - v[q];
    named[{bit(p) | bit(r), q}] = v[q];
  } else if (c.label == "1.2.2") {
    named[{bit(q) | bit(r), p}] = v[p];
    named[{bit(q) | bit(r), q}] = v[q] - pi(bit(p) | bit(r));
    named[{bit(q) | bit(r), r}] = v[r] - pi(bit(p) | bit(q));
    named[{bit(p) | bit(q), q}] = Rational(0);
    named[{bit(p) | bit(r), r}] = Rational(0);
  } else if (c.label == "2.1.1") {
    named[{bit(p), p}] = (v[p] - (one - pi(bit(p)))) / two;
    named[{bit(p), q}] = (v[q] - pi(bit(r))) / two;
    named[{bit(p), r}] = (v[r] - pi(bit(q))) / two;
  } else if (c.label == "2.1.2") {
    named[{bit(q), p}] = (one - v[q]) / two;
    named[{bit(q), q}] = (v[q] - (one - pi(bit(q)))) / two;
    named[{bit(r), p}] = (one - v[r]) / two;
    named[{bit(r), r}] = (v[r] - (one - pi(bit(r)))) / two;
  } else if (c.label == "2.2.1") {
    named[{bit(q) | bit(r), p}] = v[p] / two;
    named[{bit(q) | bit(r), q}] = (v[q] - (one - pi(bit(q) | bit(r)))) / two;
    named[{bit(q) | bit(r), r}] = (v[r] - (one - pi(bit(q) | bit(r)))) / two;
  }
  Flow f(sn.net.arc_count());
  for (std::size_t e = 0; e < f.size(); ++e) f[e] = sn.net.arc(e).upper;
  for (std::size_t k = 0; k < sn.sets.size(); ++k) {
    for (std::size_t i = 0; i < 3; ++i) {
      auto it = named.find({sn.sets[k], i});
      if (it != named.end()) f[sn.assign_arc[k][i]] = it->second;
    }
  }
  return f;
}

// Invariant tracked for three parties whose cumulative votes are all
// non-integral: singletons carry the fractional parts; pairs carry at least
// the ceiling gap of the excluded party.
inline std::optional<std::string> tracked_mass_violation(const QuotaDistribution& dist) {
  for (const Rational& x : dist.V) {
    if (x.is_integer()) return std::nullopt;
  }
  for (const auto& [u, p] : dist.pi) {
    const auto m = members(u);
    if (m.size() == 1) {
      if (p != dist.V[m[0]].frac()) {
        return "singleton mass differs from fractional part at t=" + std::to_string(dist.t);
      }
    } else if (m.size() == 2) {
      for (std::size_t i = 0; i < 3; ++i) {
        if ((u >> i) & 1u) continue;
        if (p < dist.V[i].ceil() - dist.V[i]) {
          return "pair mass below ceiling gap at t=" + std::to_string(dist.t);
        }
      }
    } else {
      return "upper-quota set of unexpected size at t=" + std::to_string(dist.t);
    }
  }
  return std::nullopt;
}

// Random covering instance with binding capacities. Demands are the integral
// part of the weakest hyperedge coverage. With `unit_first` every y* entry at
// the first step is at least 1/2, D(i, 1) = 1 and every demand is at least 1, so that alpha = d and costs
// are attached.
inline CoveringInstance random_covering(std::mt19937_64& rng, std::size_t n, std::size_t d,
                                        std::size_t vertices, std::size_t T,
                                        std::size_t edges, bool unit_first) {
  const std::int64_t q = 6;
  CoveringInstance ci;
  ci.n = n;
  ci.d = d;
  ci.vertices = vertices;
  ci.T = T;
  while (ci.hyperedges.size() < edges) {
    std::vector<std::size_t> all(vertices);
    std::iota(all.begin(), all.end(), std::size_t{0});
    std::shuffle(all.begin(), all.end(), rng);
    std::vector<std::size_t> e(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(d));
    std::sort(e.begin(), e.end());
    if (std::find(ci.hyperedges.begin(), ci.hyperedges.end(), e) == ci.hyperedges.end()) {
      ci.hyperedges.push_back(e);
    }
  }
  ci.C.assign(vertices, std::vector<std::int64_t>(T));
  ci.y_star.assign(vertices, std::vector<std::vector<Rational>>(n, std::vector<Rational>(T)));
  for (std::size_t u = 0; u < vertices; ++u) {
    for (std::size_t t = 0; t < T; ++t) {
      const bool floor_half = unit_first && t == 0;
      const std::int64_t min_c = floor_half ? static_cast<std::int64_t>((n + 1) / 2) : 0;
      const std::int64_t C = min_c + static_cast<std::int64_t>(rng() % 3);
      ci.C[u][t] = C;
      std::vector<std::int64_t> parts(n, floor_half ? q / 2 : 0);
      std::int64_t left = C * q - (floor_half ? static_cast<std::int64_t>(n) * (q / 2) : 0);
      while (left > 0) {
        ++parts[rng() % n];
        --left;
      }
      for (std::size_t i = 0; i < n; ++i) ci.y_star[u][i][t] = Rational(parts[i], q);
    }
  }
  ci.D.assign(n, std::vector<Rational>(T));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t t = 0; t < T; ++t) {
      std::optional<Rational> weakest;
      for (const auto& e : ci.hyperedges) {
        Rational cov;
        for (std::size_t u : e) {
          for (std::size_t l = 0; l <= t; ++l) cov += ci.y_star[u][i][l];
        }
        if (!weakest || cov < *weakest) weakest = cov;
      }
      ci.D[i][t] = weakest ? weakest->floor() : Rational(0);
      if (unit_first) ci.D[i][t] = t == 0 ? Rational(1) : max(ci.D[i][t], Rational(1));
    }
  }
  if (unit_first) {
    std::vector<std::vector<std::vector<Rational>>> cost(
        vertices, std::vector<std::vector<Rational>>(n, std::vector<Rational>(T)));
    for (auto& per_u : cost) {
      for (auto& row : per_u) {
        for (auto& c : row) c = Rational(static_cast<long long>(1 + rng() % 5));
      }
    }
    ci.cost = std::move(cost);
  }
  return ci;
}

// Cumulative coverage of hyperedge e for resource i through step t (0-based).
template <typename Matrix>
Rational reference_coverage(const std::vector<std::size_t>& e, std::size_t i, std::size_t t,
                            const Matrix& y) {
  Rational total;
  for (std::size_t u : e) {
    for (std::size_t l = 0; l <= t; ++l) total += Rational(y[u][i][l]);
  }
  return total;
}

}  // namespace apportion::testing

#endif  // APPORTION_TESTS_SUPPORT_HPP_
