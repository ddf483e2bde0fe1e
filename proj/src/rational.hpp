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

#ifndef APPORTION_RATIONAL_HPP_
#define APPORTION_RATIONAL_HPP_

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace apportion {

// Exact rational number backed by GMP. Always canonical: lowest terms,
// positive denominator.
class Rational {
 public:
  Rational() = default;
  Rational(long long value) : q_(mpz_class(static_cast<long>(value))) {}  // NOLINT
  Rational(long long num, long long den);
  explicit Rational(mpq_class q);
  explicit Rational(const mpz_class& z) : q_(z) {}

  // Accepts "p/q", "p" and finite decimals such as "0.6" or "-1.25"; decimals
  // are converted exactly ("0.6" is 3/5).
  static Rational parse(std::string_view text);

  // "p" when integral, "p/q" otherwise.
  std::string str() const;
  double to_double() const { return q_.get_d(); }

  const mpq_class& raw() const { return q_; }
  mpz_class numerator() const { return q_.get_num(); }
  mpz_class denominator() const { return q_.get_den(); }

  bool is_integer() const { return q_.get_den() == 1; }
  int sign() const { return sgn(q_); }
  bool is_zero() const { return sign() == 0; }

  Rational floor() const;
  Rational ceil() const;
  // Fractional part in [0, 1).
  Rational frac() const { return *this - floor(); }
  Rational abs() const { return Rational(mpq_class(::abs(q_))); }

  // Throws DomainError when the value is not an integer in int64 range.
  std::int64_t to_int64() const;

  Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
  Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
  Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) {
    return Rational(mpq_class(-a.q_));
  }

  friend bool operator==(const Rational& a, const Rational& b) {
    return cmp(a.q_, b.q_) == 0;
  }
  friend std::strong_ordering operator<=>(const Rational& a,
                                          const Rational& b) {
    const int c = cmp(a.q_, b.q_);
    if (c < 0) return std::strong_ordering::less;
    if (c > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

 private:
  mpq_class q_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

inline Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

// Least common multiple of the denominators of the given values.
template <typename Range>
mpz_class common_denominator(const Range& values) {
  mpz_class d = 1;
  for (const Rational& r : values) {
    mpz_class den = r.denominator();
    mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), den.get_mpz_t());
  }
  return d;
}

}  // namespace apportion

#endif  // APPORTION_RATIONAL_HPP_
