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

#include "random.hpp"

#include "errors.hpp"

namespace apportion {

std::mt19937_64 substream(std::uint64_t seed, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial),
                    static_cast<std::uint32_t>(trial >> 32)};
  return std::mt19937_64(seq);
}

std::size_t sample_index(std::mt19937_64& rng,
                         std::span<const Rational> weights) {
  if (weights.empty()) throw DomainError("cannot sample from an empty lottery");
  const std::uint64_t k = rng();
  mpz_class num;
  mpz_import(num.get_mpz_t(), 1, 1, sizeof k, 0, 0, &k);
  mpz_class two64 = 1;
  two64 <<= 64;
  const Rational u(mpq_class(num, two64));
  Rational cum;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    cum += weights[j];
    if (u < cum) return j;
  }
  // Only reachable through rounding of weights that sum to less than one.
  for (std::size_t j = weights.size(); j-- > 0;) {
    if (weights[j].sign() > 0) return j;
  }
  return weights.size() - 1;
}

}  // namespace apportion
