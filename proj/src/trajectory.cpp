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

#include "trajectory.hpp"

#include <iomanip>
#include <map>
#include <sstream>

#include "errors.hpp"

namespace apportion {

TrajectoryState::TrajectoryState(std::size_t parties)
    : n_(parties),
      V_(1, std::vector<Rational>(parties)),
      A_(1, std::vector<std::int64_t>(parties, 0)) {}

void TrajectoryState::push(const VoteVector& v,
                           std::span<const std::size_t> chosen) {
  if (v.size() != n_) throw DomainError("vote vector length mismatch");
  if (static_cast<std::int64_t>(chosen.size()) != v.house()) {
    throw DomainError("allocation has " + std::to_string(chosen.size()) +
                      " seats, house is " + std::to_string(v.house()));
  }
  std::vector<std::uint8_t> a(n_, 0);
  for (std::size_t i : chosen) {
    if (i >= n_) throw DomainError("party index out of range");
    if (a[i]) throw DomainError("party chosen twice");
    if (v[i].sign() <= 0) {
      throw DomainError("seat given to party " + std::to_string(i) +
                        " without votes");
    }
    a[i] = 1;
  }
  std::vector<Rational> V = V_.back();
  std::vector<std::int64_t> A = A_.back();
  for (std::size_t i = 0; i < n_; ++i) {
    V[i] += v[i];
    A[i] += a[i];
  }
  votes_.push_back(v);
  seats_.push_back(std::move(a));
  V_.push_back(std::move(V));
  A_.push_back(std::move(A));
}

Instance TrajectoryState::instance() const { return Instance(n_, votes_); }

std::vector<Rational> surplus(std::span<const Rational> V,
                              std::span<const std::int64_t> A) {
  std::vector<Rational> s(V.size());
  for (std::size_t i = 0; i < V.size(); ++i) s[i] = Rational(A[i]) - V[i];
  return s;
}

std::vector<Rational> surplus(const TrajectoryState& state) {
  return surplus(state.V(), state.A());
}

bool within_global_quota(std::span<const Rational> V,
                         std::span<const std::int64_t> A) {
  for (std::size_t i = 0; i < V.size(); ++i) {
    const Rational a(A[i]);
    if (a != V[i].floor() && a != V[i].ceil()) return false;
  }
  return true;
}

std::optional<QuotaViolation> check_global_quota(const TrajectoryState& state) {
  for (std::size_t k = 1; k <= state.t(); ++k) {
    const auto& V = state.V_at(k);
    const auto& A = state.A_at(k);
    for (std::size_t i = 0; i < state.parties(); ++i) {
      const Rational a(A[i]);
      if (a != V[i].floor() && a != V[i].ceil()) return QuotaViolation{k, i};
    }
  }
  return std::nullopt;
}

Rational max_deviation(const TrajectoryState& state) {
  Rational best;
  for (std::size_t k = 1; k <= state.t(); ++k) {
    for (const Rational& s : surplus(state.V_at(k), state.A_at(k))) {
      best = max(best, s.abs());
    }
  }
  return best;
}

std::string trajectory_to_csv(const TrajectoryState& state,
                              bool float_report) {
  std::ostringstream out;
  out << "t,i,v,V,a,A,s" << (float_report ? ",s_float" : "") << "\n";
  for (std::size_t k = 1; k <= state.t(); ++k) {
    const auto& V = state.V_at(k);
    const auto& A = state.A_at(k);
    const auto& v = state.votes_at(k);
    const auto& a = state.seats_at(k);
    for (std::size_t i = 0; i < state.parties(); ++i) {
      const Rational s = Rational(A[i]) - V[i];
      out << k << ',' << i << ',' << v[i] << ',' << V[i] << ','
          << int(a[i]) << ',' << A[i] << ',' << s;
      if (float_report) {
        out << ',' << std::setprecision(12) << s.to_double();
      }
      out << "\n";
    }
  }
  return out.str();
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::int64_t parse_int(const std::string& s, std::size_t line) {
  Rational r = Rational::parse(s);
  if (!r.is_integer()) {
    throw ParseError("line " + std::to_string(line) + ": expected integer, got " +
                     s);
  }
  return r.to_int64();
}

}  // namespace

std::vector<CsvRow> parse_trajectory_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty trajectory CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::map<std::string, std::size_t> col;
  auto header = split_line(line);
  for (std::size_t c = 0; c < header.size(); ++c) col[header[c]] = c;
  for (const char* name : {"t", "i", "v", "V", "a", "A", "s"}) {
    if (!col.count(name)) {
      throw ParseError(std::string("trajectory CSV lacks column ") + name);
    }
  }
  std::vector<CsvRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split_line(line);
    if (cells.size() != header.size()) {
      throw ParseError("line " + std::to_string(lineno) + ": expected " +
                       std::to_string(header.size()) + " cells");
    }
    try {
      rows.push_back({parse_int(cells[col["t"]], lineno),
                      parse_int(cells[col["i"]], lineno),
                      Rational::parse(cells[col["v"]]),
                      Rational::parse(cells[col["V"]]),
                      Rational::parse(cells[col["s"]]),
                      parse_int(cells[col["a"]], lineno),
                      parse_int(cells[col["A"]], lineno)});
    } catch (const DomainError& e) {
      throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return rows;
}

VerifyReport verify_rows(const std::vector<CsvRow>& rows,
                         const std::optional<Rational>& alpha) {
  VerifyReport rep;
  auto fail = [&rep](bool& flag, const std::string& msg) {
    flag = false;
    if (rep.messages.size() < 20) rep.messages.push_back(msg);
  };
  std::size_t n = 0;
  while (n < rows.size() && rows[n].t == 1) ++n;
  if (!rows.empty() && (n == 0 || rows.size() % n != 0)) {
    fail(rep.consistent, "rows do not form a full (step, party) grid");
    return rep;
  }
  rep.parties = n;
  rep.steps = n == 0 ? 0 : rows.size() / n;
  std::vector<Rational> V(n);
  std::vector<std::int64_t> A(n, 0);
  for (std::size_t k = 0; k < rep.steps; ++k) {
    const std::string at = "t=" + std::to_string(k + 1);
    Rational house;
    std::int64_t seats = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const CsvRow& r = rows[k * n + i];
      const std::string where = at + " i=" + std::to_string(i);
      if (r.t != static_cast<std::int64_t>(k + 1) ||
          r.i != static_cast<std::int64_t>(i)) {
        fail(rep.consistent, where + ": row out of order");
        return rep;
      }
      if (r.v.sign() < 0 || r.v >= Rational(1)) {
        fail(rep.consistent, where + ": vote outside [0, 1)");
      }
      if (r.a != 0 && r.a != 1) {
        fail(rep.locally_feasible, where + ": seat count not 0 or 1");
      }
      if (r.a == 1 && r.v.sign() <= 0) {
        fail(rep.locally_feasible, where + ": seat without votes");
      }
      V[i] += r.v;
      A[i] += r.a;
      house += r.v;
      seats += r.a;
      if (r.V != V[i]) fail(rep.consistent, where + ": V is not cumulative v");
      if (r.A != A[i]) fail(rep.consistent, where + ": A is not cumulative a");
      if (r.s != Rational(r.A) - r.V) fail(rep.consistent, where + ": s != A - V");
      const Rational a(A[i]);
      if (a != V[i].floor() && a != V[i].ceil()) {
        fail(rep.global_quota, where + ": A outside {floor V, ceil V}");
      }
      rep.max_deviation = max(rep.max_deviation, (a - V[i]).abs());
    }
    if (!house.is_integer()) {
      fail(rep.consistent, at + ": votes do not sum to an integer");
    } else if (house != Rational(seats)) {
      fail(rep.locally_feasible, at + ": seats do not match house");
    }
  }
  if (alpha) rep.alpha_ok = rep.max_deviation <= *alpha;
  return rep;
}

}  // namespace apportion
