// Copyright 2026 The sidlab Authors.
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

#ifndef SIDLAB_PRIME_FIELD_H_
#define SIDLAB_PRIME_FIELD_H_

#include <cstdint>
#include <string>

#include "sidlab/error.h"

namespace sidlab {

// Arithmetic context for F_p. Representatives always lie in [0, p).
class PrimeField {
 public:
  using Elt = std::int64_t;

  explicit PrimeField(std::int64_t p) : p_(p) {
    if (!is_prime(p)) {
      throw Error(ErrorCode::kNotPrime, std::to_string(p) + " is not prime");
    }
  }

  std::int64_t p() const noexcept { return p_; }

  Elt reduce(std::int64_t v) const noexcept {
    Elt r = v % p_;
    return r < 0 ? r + p_ : r;
  }
  Elt add(Elt a, Elt b) const noexcept { return reduce(a + b); }
  Elt sub(Elt a, Elt b) const noexcept { return reduce(a - b); }
  Elt neg(Elt a) const noexcept { return a == 0 ? 0 : p_ - a; }
  Elt mul(Elt a, Elt b) const noexcept { return reduce(a * b); }

  Elt pow(Elt base, std::uint64_t e) const noexcept {
    Elt result = 1;
    base = reduce(base);
    while (e > 0) {
      if (e & 1) result = mul(result, base);
      base = mul(base, base);
      e >>= 1;
    }
    return result;
  }

  // Requires a != 0 (mod p).
  Elt inv(Elt a) const {
    a = reduce(a);
    if (a == 0) throw Error(ErrorCode::kInvalidInput, "inverse of zero");
    return pow(a, static_cast<std::uint64_t>(p_ - 2));
  }

  bool operator==(const PrimeField& o) const noexcept { return p_ == o.p_; }

  static bool is_prime(std::int64_t p) noexcept {
    if (p < 2) return false;
    for (std::int64_t d = 2; d * d <= p; ++d) {
      if (p % d == 0) return false;
    }
    return true;
  }

 private:
  std::int64_t p_;
};

}  // namespace sidlab

#endif  // SIDLAB_PRIME_FIELD_H_
