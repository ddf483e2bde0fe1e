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

#include "rational.hpp"

#include <cctype>
#include <limits>
#include <ostream>

#include "errors.hpp"

namespace apportion {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

mpz_class parse_integer(std::string_view s, std::string_view whole) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) {
    throw ParseError("malformed rational '" + std::string(whole) + "'");
  }
  mpz_class z(std::string(s), 10);
  return negative ? mpz_class(-z) : z;
}

}  // namespace

Rational::Rational(long long num, long long den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  q_ = mpq_class(mpz_class(static_cast<long>(num)),
                 mpz_class(static_cast<long>(den)));
  q_.canonicalize();
}

Rational::Rational(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }

Rational Rational::parse(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  if (s.empty()) throw ParseError("empty rational literal");

  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    mpz_class num = parse_integer(s.substr(0, slash), text);
    std::string_view den_text = s.substr(slash + 1);
    if (!all_digits(den_text)) {
      throw ParseError("malformed rational '" + std::string(text) + "'");
    }
    mpz_class den(std::string(den_text), 10);
    if (den == 0) {
      throw ParseError("zero denominator in '" + std::string(text) + "'");
    }
    return Rational(mpq_class(num, den));
  }

  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = s.substr(0, dot);
    std::string_view frac_part = s.substr(dot + 1);
    bool negative = false;
    if (!int_part.empty() && (int_part.front() == '-' || int_part.front() == '+')) {
      negative = int_part.front() == '-';
      int_part.remove_prefix(1);
    }
    if ((int_part.empty() && frac_part.empty()) ||
        (!int_part.empty() && !all_digits(int_part)) ||
        (!frac_part.empty() && !all_digits(frac_part))) {
      throw ParseError("malformed decimal '" + std::string(text) + "'");
    }
    std::string digits = std::string(int_part) + std::string(frac_part);
    mpz_class num(digits.empty() ? std::string("0") : digits, 10);
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac_part.size());
    if (negative) num = -num;
    return Rational(mpq_class(num, den));
  }

  return Rational(parse_integer(s, text));
}

std::string Rational::str() const {
  if (is_integer()) return q_.get_num().get_str();
  return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

Rational Rational::floor() const {
  mpz_class z;
  mpz_fdiv_q(z.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
  return Rational(z);
}

Rational Rational::ceil() const {
  mpz_class z;
  mpz_cdiv_q(z.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
  return Rational(z);
}

std::int64_t Rational::to_int64() const {
  if (!is_integer() || !q_.get_num().fits_slong_p()) {
    throw DomainError("value " + str() + " is not a machine integer");
  }
  return q_.get_num().get_si();
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw DomainError("division by zero");
  q_ /= o.q_;
  return *this;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) {
  return os << r.str();
}

}  // namespace apportion
