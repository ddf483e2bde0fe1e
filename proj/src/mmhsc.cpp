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

#include "mmhsc.hpp"

#include <algorithm>
#include <json.hpp>

#include "errors.hpp"
#include "greedy.hpp"

namespace apportion {

using nlohmann::json;

namespace {

void reject(const std::string& msg) { throw RejectedInputError(msg); }

std::string cell(std::size_t u, std::size_t i, std::size_t t) {
  return "(u=" + std::to_string(u) + ", i=" + std::to_string(i) +
         ", t=" + std::to_string(t + 1) + ")";
}

// Cumulative coverage of hyperedge e for resource i up to step t.
template <typename Value>
Rational coverage(const CoveringInstance& ci, const std::vector<std::size_t>& e,
                  std::size_t i, std::size_t t, const Value& y) {
  Rational total;
  for (std::size_t u : e) {
    for (std::size_t l = 0; l <= t; ++l) total += Rational(y[u][i][l]);
  }
  return total;
}

}  // namespace

void validate_covering(const CoveringInstance& ci) {
  if (ci.d == 0 || ci.n == 0) reject("d and n must be positive");
  for (const auto& e : ci.hyperedges) {
    if (e.size() != ci.d) {
      reject("hyperedge of size " + std::to_string(e.size()) + ", expected " +
             std::to_string(ci.d));
    }
    std::vector<std::size_t> s = e;
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end() ||
        (!s.empty() && s.back() >= ci.vertices)) {
      reject("hyperedge vertices must be distinct and in range");
    }
  }
  if (ci.C.size() != ci.vertices || ci.y_star.size() != ci.vertices ||
      ci.D.size() != ci.n) {
    reject("C, D or y_star has the wrong outer dimension");
  }
  for (std::size_t i = 0; i < ci.n; ++i) {
    if (ci.D[i].size() != ci.T) reject("D row has the wrong length");
    for (std::size_t t = 0; t < ci.T; ++t) {
      if (ci.D[i][t].sign() < 0) reject("negative demand");
      if (t > 0 && ci.D[i][t] < ci.D[i][t - 1]) {
        reject("demand of resource " + std::to_string(i) + " decreases at t=" +
               std::to_string(t + 1));
      }
    }
  }
  if (ci.cost) {
    if (ci.cost->size() != ci.vertices) reject("cost has the wrong shape");
    for (const auto& per_u : *ci.cost) {
      if (per_u.size() != ci.n) reject("cost has the wrong shape");
      for (const auto& row : per_u) {
        if (row.size() != ci.T) reject("cost has the wrong shape");
      }
    }
  }
  for (std::size_t u = 0; u < ci.vertices; ++u) {
    if (ci.C[u].size() != ci.T || ci.y_star[u].size() != ci.n) {
      reject("C or y_star has the wrong shape at vertex " + std::to_string(u));
    }
    for (std::size_t i = 0; i < ci.n; ++i) {
      if (ci.y_star[u][i].size() != ci.T) reject("y_star has the wrong shape");
      for (std::size_t t = 0; t < ci.T; ++t) {
        if (ci.y_star[u][i][t].sign() < 0) reject("negative y* at " + cell(u, i, t));
      }
    }
    for (std::size_t t = 0; t < ci.T; ++t) {
      if (ci.C[u][t] < 0) reject("negative capacity");
      Rational load;
      for (std::size_t i = 0; i < ci.n; ++i) load += ci.y_star[u][i][t];
      if (load > Rational(ci.C[u][t])) {
        reject("y* exceeds capacity at vertex " + std::to_string(u) + ", t=" +
               std::to_string(t + 1));
      }
      if (load != Rational(ci.C[u][t])) {
        reject("y* is not binding at vertex " + std::to_string(u) + ", t=" +
               std::to_string(t + 1) + ": load " + load.str() + " < capacity " +
               std::to_string(ci.C[u][t]));
      }
    }
  }
  for (std::size_t k = 0; k < ci.hyperedges.size(); ++k) {
    for (std::size_t i = 0; i < ci.n; ++i) {
      for (std::size_t t = 0; t < ci.T; ++t) {
        if (coverage(ci, ci.hyperedges[k], i, t, ci.y_star) < ci.D[i][t]) {
          reject("y* leaves hyperedge " + std::to_string(k) + " uncovered for i=" +
                 std::to_string(i) + ", t=" + std::to_string(t + 1));
        }
      }
    }
  }
}

CoveringAudit audit_solution(const CoveringInstance& ci, const IntegralSolution& Y,
                             bool capacity_equality, const Rational& alpha) {
  CoveringAudit audit;
  bool first = true;
  for (std::size_t u = 0; u < ci.vertices; ++u) {
    for (std::size_t t = 0; t < ci.T; ++t) {
      std::int64_t load = 0;
      for (std::size_t i = 0; i < ci.n; ++i) load += Y[u][i][t];
      const Rational cap = alpha * Rational(ci.C[u][t]);
      if (capacity_equality ? Rational(load) != cap : Rational(load) > cap.ceil()) {
        audit.capacity_ok = false;
      }
    }
  }
  for (const auto& e : ci.hyperedges) {
    for (std::size_t i = 0; i < ci.n; ++i) {
      for (std::size_t t = 0; t < ci.T; ++t) {
        const Rational slack = coverage(ci, e, i, t, Y) - ci.D[i][t];
        if (first || slack < audit.min_slack) audit.min_slack = slack;
        first = false;
        audit.max_violation = max(audit.max_violation, -slack);
      }
    }
  }
  if (ci.cost) {
    Rational c;
    for (std::size_t u = 0; u < ci.vertices; ++u) {
      for (std::size_t i = 0; i < ci.n; ++i) {
        for (std::size_t t = 0; t < ci.T; ++t) {
          c += (*ci.cost)[u][i][t] * Rational(Y[u][i][t]);
        }
      }
    }
    audit.cost = c;
  }
  return audit;
}

IntegralSolution round_near_feasible(const CoveringInstance& ci) {
  validate_covering(ci);
  IntegralSolution Y(ci.vertices, std::vector<std::vector<std::int64_t>>(
                                      ci.n, std::vector<std::int64_t>(ci.T)));
  for (std::size_t u = 0; u < ci.vertices; ++u) {
    TrajectoryState state(ci.n);
    for (std::size_t t = 0; t < ci.T; ++t) {
      std::vector<Rational> v(ci.n);
      for (std::size_t i = 0; i < ci.n; ++i) {
        Y[u][i][t] = ci.y_star[u][i][t].floor().to_int64();
        v[i] = ci.y_star[u][i][t].frac();
      }
      VoteVector votes(std::move(v));
      const auto chosen = greedy_step(state.V(), state.A(), votes);
      state.push(votes, chosen);
      for (std::size_t i : chosen) Y[u][i][t] += 1;
    }
  }
  return Y;
}

Rational covering_alpha(const CoveringInstance& ci) {
  Rational alpha;
  bool any = false;
  for (std::size_t j = 0; j < ci.n; ++j) {
    for (std::size_t l = 0; l < ci.T; ++l) {
      const Rational& D = ci.D[j][l];
      if (D.sign() <= 0) {
        reject("alpha is undefined: D(" + std::to_string(j) + ", " +
               std::to_string(l + 1) + ") = 0");
      }
      const Rational a = (Rational(static_cast<long long>(ci.d)) + D - Rational(1)) / D;
      if (!any || a > alpha) alpha = a;
      any = true;
    }
  }
  if (!any) reject("alpha is undefined without demands");
  return alpha;
}

MinCostRounder::MinCostRounder(const CoveringInstance& ci) : ci_(ci) {
  if (ci_.n != 3) reject("min-cost rounding needs exactly three resources");
  validate_covering(ci_);
  alpha_ = covering_alpha(ci_);
  base_.assign(ci_.vertices, std::vector<std::vector<std::int64_t>>(
                                 ci_.n, std::vector<std::int64_t>(ci_.T)));
  for (std::size_t u = 0; u < ci_.vertices; ++u) {
    Instance inst(ci_.n, std::vector<std::vector<Rational>>{});
    for (std::size_t t = 0; t < ci_.T; ++t) {
      const Rational cap = alpha_ * Rational(ci_.C[u][t]);
      if (!cap.is_integer()) {
        reject("alpha * C(" + std::to_string(u) + ", " + std::to_string(t + 1) +
               ") = " + cap.str() + " is not an integer");
      }
      std::vector<Rational> v(ci_.n);
      for (std::size_t i = 0; i < ci_.n; ++i) {
        const Rational scaled = alpha_ * ci_.y_star[u][i][t];
        base_[u][i][t] = scaled.floor().to_int64();
        v[i] = scaled.frac();
      }
      inst.append(VoteVector(std::move(v)));
    }
    plans_.push_back(NetflowPlan::build(inst));
  }
}

IntegralSolution MinCostRounder::sample(std::mt19937_64& rng) const {
  IntegralSolution Y = base_;
  for (std::size_t u = 0; u < ci_.vertices; ++u) {
    TrajectoryState s = plans_[u].sample(rng);
    for (std::size_t t = 0; t < ci_.T; ++t) {
      for (std::size_t i = 0; i < ci_.n; ++i) Y[u][i][t] += s.seats_at(t + 1)[i];
    }
  }
  return Y;
}

std::optional<Rational> MinCostRounder::expected_cost() const {
  if (!ci_.cost) return std::nullopt;
  Rational total;
  for (std::size_t u = 0; u < ci_.vertices; ++u) {
    QuotaDistribution dist = QuotaDistribution::initial(ci_.n);
    for (std::size_t t = 0; t < ci_.T; ++t) {
      const StepPlan& step = plans_[u].steps()[t];
      const auto m = exact_step_marginals(dist, step);
      for (std::size_t i = 0; i < ci_.n; ++i) {
        total += (*ci_.cost)[u][i][t] * (Rational(base_[u][i][t]) + m[i]);
      }
      dist = step.next;
    }
  }
  return total;
}

namespace {

Rational rat(const json& x) {
  if (x.is_string()) return Rational::parse(x.get<std::string>());
  if (x.is_number_integer()) return Rational(x.get<long long>());
  throw ParseError("expected a rational, got " + x.dump());
}

std::vector<std::vector<Rational>> rat_matrix(const json& x) {
  if (!x.is_array()) throw ParseError("expected a matrix");
  std::vector<std::vector<Rational>> out;
  for (const json& row : x) {
    if (!row.is_array()) throw ParseError("expected a matrix row");
    std::vector<Rational> r;
    for (const json& e : row) r.push_back(rat(e));
    out.push_back(std::move(r));
  }
  return out;
}

json rat_json(const std::vector<std::vector<Rational>>& m) {
  json out = json::array();
  for (const auto& row : m) {
    json r = json::array();
    for (const Rational& x : row) r.push_back(x.str());
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

CoveringInstance covering_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("covering JSON: ") + e.what());
  }
  for (const char* key : {"d", "n", "T", "vertices", "hyperedges", "C", "D", "y_star"}) {
    if (!j.contains(key)) throw ParseError(std::string("covering JSON lacks ") + key);
  }
  try {
    CoveringInstance ci;
    ci.d = j["d"].get<std::size_t>();
    ci.n = j["n"].get<std::size_t>();
    ci.T = j["T"].get<std::size_t>();
    ci.vertices = j["vertices"].is_array() ? j["vertices"].size()
                                           : j["vertices"].get<std::size_t>();
    ci.hyperedges = j["hyperedges"].get<std::vector<std::vector<std::size_t>>>();
    for (const auto& row : rat_matrix(j["C"])) {
      std::vector<std::int64_t> r;
      for (const Rational& x : row) {
        if (!x.is_integer()) throw ParseError("capacities must be integers");
        r.push_back(x.to_int64());
      }
      ci.C.push_back(std::move(r));
    }
    ci.D = rat_matrix(j["D"]);
    for (const json& per_u : j["y_star"]) ci.y_star.push_back(rat_matrix(per_u));
    if (j.contains("cost") && !j["cost"].is_null()) {
      std::vector<std::vector<std::vector<Rational>>> cost;
      for (const json& per_u : j["cost"]) cost.push_back(rat_matrix(per_u));
      ci.cost = std::move(cost);
    }
    return ci;
  } catch (const json::exception& e) {
    throw ParseError(std::string("covering JSON: ") + e.what());
  }
}

std::string covering_to_json(const CoveringInstance& ci) {
  json C = json::array();
  for (const auto& row : ci.C) C.push_back(row);
  json y = json::array();
  for (const auto& per_u : ci.y_star) y.push_back(rat_json(per_u));
  json j = {{"d", ci.d},         {"n", ci.n},   {"T", ci.T},
            {"vertices", ci.vertices},           {"hyperedges", ci.hyperedges},
            {"C", C},            {"D", rat_json(ci.D)},
            {"y_star", y}};
  if (ci.cost) {
    json c = json::array();
    for (const auto& per_u : *ci.cost) c.push_back(rat_json(per_u));
    j["cost"] = c;
  }
  return j.dump();
}

std::string solution_to_json(const IntegralSolution& Y, const CoveringAudit& audit,
                             const std::optional<Rational>& alpha,
                             const std::optional<Rational>& bound,
                             const std::optional<Rational>& expected_cost) {
  json a = {{"capacity_ok", audit.capacity_ok},
            {"max_violation", audit.max_violation.str()},
            {"min_slack", audit.min_slack.str()}};
  if (alpha) a["alpha"] = alpha->str();
  if (bound) {
    a["violation_bound"] = bound->str();
    a["within_bound"] = audit.max_violation <= *bound;
  }
  if (audit.cost) a["cost"] = audit.cost->str();
  if (expected_cost) a["expected_cost"] = expected_cost->str();
  return json{{"Y", Y}, {"audit", a}}.dump();
}

}  // namespace apportion
