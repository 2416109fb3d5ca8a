// Copyright 2026 The fairnet Authors.
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

#include "fairnet/rational.h"

#include <charconv>
#include <cstdlib>
#include <limits>
#include <stdexcept>

namespace fairnet {
namespace {

std::int64_t ParseInt(std::string_view text, std::string_view whole) {
  std::int64_t value = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && text.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || first == last) {
    throw std::invalid_argument("not a number: '" + std::string(whole) + "'");
  }
  return value;
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

Rational ParseRational(std::string_view text) {
  const std::string_view s = Trim(text);
  if (s.empty()) throw std::invalid_argument("empty number");

  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    const std::int64_t num = ParseInt(Trim(s.substr(0, slash)), s);
    const std::int64_t den = ParseInt(Trim(s.substr(slash + 1)), s);
    if (den == 0) throw std::invalid_argument("zero denominator: '" + std::string(s) + "'");
    return Rational(num, den);
  }

  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = s.substr(0, dot);
    std::string_view frac_part = s.substr(dot + 1);
    bool negative = false;
    if (!int_part.empty() && (int_part.front() == '-' || int_part.front() == '+')) {
      negative = int_part.front() == '-';
      int_part.remove_prefix(1);
    }
    if (frac_part.size() > 15 || (int_part.empty() && frac_part.empty())) {
      throw std::invalid_argument("unsupported decimal: '" + std::string(s) + "'");
    }
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac_part.size(); ++i) scale *= 10;
    const std::int64_t whole = int_part.empty() ? 0 : ParseInt(int_part, s);
    const std::int64_t frac = frac_part.empty() ? 0 : ParseInt(frac_part, s);
    if (whole < 0 || frac < 0) throw std::invalid_argument("not a number: '" + std::string(s) + "'");
    Rational value = Rational(whole) + Rational(frac, scale);
    return negative ? -value : value;
  }

  return Rational(ParseInt(s, s));
}

std::string FormatRational(const Rational& value) {
  if (value.denominator() == 1) return std::to_string(value.numerator());
  return std::to_string(value.numerator()) + "/" + std::to_string(value.denominator());
}

std::string FormatDecimal(const Rational& value, int digits) {
  std::int64_t scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  const bool negative = value < 0;
  const Rational magnitude = negative ? -value : value;
  // Round half away from zero on the scaled magnitude.
  const Rational scaled = magnitude * scale;
  std::int64_t units = scaled.numerator() / scaled.denominator();
  const Rational remainder = scaled - Rational(units);
  if (remainder * 2 >= 1) ++units;
  std::string out = negative && units != 0 ? "-" : "";
  out += std::to_string(units / scale);
  if (digits > 0) {
    std::string frac = std::to_string(units % scale);
    out += "." + std::string(static_cast<std::size_t>(digits) - frac.size(), '0') + frac;
  }
  return out;
}

}  // namespace fairnet
