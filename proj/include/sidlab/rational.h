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

#ifndef SIDLAB_RATIONAL_H_
#define SIDLAB_RATIONAL_H_

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <string>

namespace sidlab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// base^e for any integer e (negative exponents give reciprocals).
inline Rational rational_pow(std::int64_t base, std::int64_t e) {
  BigInt b = base;
  BigInt acc = boost::multiprecision::pow(b, static_cast<unsigned>(e < 0 ? -e : e));
  if (e >= 0) return Rational(acc);
  // Keep the denominator positive; a negative one is rejected.
  if (acc < 0) return Rational(BigInt(-1), -acc);
  return Rational(BigInt(1), acc);
}

inline std::string to_string(const Rational& r) { return r.str(); }

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace sidlab

#endif  // SIDLAB_RATIONAL_H_
