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

#include "instance.hpp"

#include <cstdio>
#include <json.hpp>

#include "errors.hpp"

namespace apportion {

using nlohmann::json;

VoteVector::VoteVector(std::vector<Rational> entries)
    : entries_(std::move(entries)) {
  Rational sum;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const Rational& e = entries_[i];
    if (e.sign() < 0 || e >= Rational(1)) {
      throw DomainError("vote " + e.str() + " of party " + std::to_string(i) +
                        " outside [0, 1)");
    }
    sum += e;
  }
  if (!sum.is_integer()) {
    throw DomainError("votes sum to " + sum.str() + ", not an integer");
  }
  house_ = sum.to_int64();
}

std::size_t VoteVector::support_size() const {
  std::size_t k = 0;
  for (const Rational& e : entries_) k += e.sign() > 0 ? 1 : 0;
  return k;
}

Instance::Instance(std::size_t parties, const std::vector<VoteVector>& rows)
    : parties_(parties) {
  for (const VoteVector& v : rows) append(v);
}

void Instance::append(const VoteVector& v) {
  if (v.size() != parties_) {
    throw DomainError("vote vector has length " + std::to_string(v.size()) +
                      ", expected " + std::to_string(parties_));
  }
  rows_.push_back(v.entries());
}

VoteVector Instance::votes(std::size_t k) const {
  if (rows_.at(k).size() != parties_) {
    throw DomainError("step " + std::to_string(k + 1) + " has wrong length");
  }
  return VoteVector(rows_[k]);
}

std::vector<Violation> validate_instance(const Instance& inst) {
  std::vector<Violation> out;
  for (std::size_t k = 0; k < inst.steps(); ++k) {
    const auto& row = inst.row(k);
    const std::size_t step = k + 1;
    if (row.size() != inst.parties()) {
      out.push_back({Violation::Kind::kLength, step, std::nullopt,
                     "step " + std::to_string(step) + " has " +
                         std::to_string(row.size()) + " entries, expected " +
                         std::to_string(inst.parties())});
      continue;
    }
    Rational sum;
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (row[i].sign() < 0 || row[i] >= Rational(1)) {
        out.push_back({Violation::Kind::kRange, step, i,
                       "step " + std::to_string(step) + " party " +
                           std::to_string(i) + ": vote " + row[i].str() +
                           " outside [0, 1)"});
      }
      sum += row[i];
    }
    if (!sum.is_integer()) {
      out.push_back({Violation::Kind::kNonIntegralHouse, step, std::nullopt,
                     "step " + std::to_string(step) + ": row sum " +
                         sum.str() + " not integral"});
    }
  }
  return out;
}

void require_valid(const Instance& inst) {
  auto violations = validate_instance(inst);
  if (violations.empty()) return;
  std::string msg = "invalid instance:";
  for (const auto& v : violations) msg += " " + v.message + ";";
  throw InvalidInstanceError(msg);
}

namespace {

Rational rational_from_json(const json& j) {
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long long>());
  throw ParseError("expected a rational string, got " + j.dump());
}

}  // namespace

Instance instance_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("instance JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("n") || !j.contains("votes")) {
    throw ParseError("instance JSON needs fields \"n\" and \"votes\"");
  }
  if (!j["n"].is_number_integer() || j["n"].get<long long>() < 1) {
    throw ParseError("instance field \"n\" must be a positive integer");
  }
  if (!j["votes"].is_array()) throw ParseError("\"votes\" must be an array");
  std::vector<std::vector<Rational>> rows;
  for (const json& row : j["votes"]) {
    if (!row.is_array()) throw ParseError("each vote row must be an array");
    std::vector<Rational> r;
    for (const json& e : row) r.push_back(rational_from_json(e));
    rows.push_back(std::move(r));
  }
  return Instance(j["n"].get<std::size_t>(), std::move(rows));
}

std::string instance_to_json(const Instance& inst) {
  json votes = json::array();
  for (const auto& row : inst.rows()) {
    json r = json::array();
    for (const Rational& e : row) r.push_back(e.str());
    votes.push_back(std::move(r));
  }
  json j = {{"n", inst.parties()}, {"votes", std::move(votes)}};
  return j.dump();
}

std::string instance_digest(const Instance& inst) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : instance_to_json(inst)) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<Rational> parse_rational_list(std::string_view text) {
  std::vector<Rational> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    out.push_back(Rational::parse(text.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  return out;
}

}  // namespace apportion
