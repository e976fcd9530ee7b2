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

#include "probtable/rational.hpp"

#include <cctype>

#include "probtable/errors.hpp"

namespace probtable {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

[[noreturn]] void bad(std::string_view text) {
  throw ParseError("invalid rational literal '" + std::string(text) + "'");
}

}  // namespace

std::string format_rational(const Rational& q) {
  const BigInt num = numerator(q);
  const BigInt den = denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (s.empty()) bad(text);

  Rational value;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    std::string_view num = s.substr(0, slash);
    std::string_view den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) bad(text);
    const BigInt num_i{std::string(num)};
    const BigInt den_i{std::string(den)};
    if (den_i == 0)
      throw ParseError("zero denominator in '" + std::string(text) + "'");
    value = Rational(num_i, den_i);
  } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view whole = s.substr(0, dot);
    std::string_view frac = s.substr(dot + 1);
    if (whole.empty() && frac.empty()) bad(text);
    if (!whole.empty() && !all_digits(whole)) bad(text);
    if (!frac.empty() && !all_digits(frac)) bad(text);
    BigInt scaled = whole.empty() ? BigInt(0) : BigInt(std::string(whole));
    BigInt den = 1;
    for (char c : frac) {
      scaled = scaled * 10 + (c - '0');
      den *= 10;
    }
    value = Rational(scaled, den);
  } else {
    if (!all_digits(s)) bad(text);
    const BigInt whole{std::string(s)};
    value = Rational(whole);
  }
  return negative ? Rational(-value) : value;
}

}  // namespace probtable
