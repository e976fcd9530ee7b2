// Copyright 2026 The probtable Authors
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

#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace probtable {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& q) { return q.convert_to<double>(); }
inline double to_double(double v) { return v; }

/// Canonical text form: "n" when the denominator is 1, otherwise "n/d"
/// with gcd(n, d) = 1 and d > 0 (cpp_rational keeps values normalized).
std::string format_rational(const Rational& q);

/// Accepts "n", "n/d" and plain decimal strings such as "0.75" (converted
/// exactly). Throws ParseError on anything else, including zero denominators.
Rational parse_rational(std::string_view text);

/// Exact nonnegative integer power by squaring.
inline Rational rational_pow(Rational base, std::uint64_t exponent) {
  Rational out(1);
  while (exponent != 0) {
    if (exponent & 1u) out *= base;
    base *= base;
    exponent >>= 1;
  }
  return out;
}

}  // namespace probtable
