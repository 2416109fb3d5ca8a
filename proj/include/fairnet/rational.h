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

#ifndef FAIRNET_RATIONAL_H_
#define FAIRNET_RATIONAL_H_

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace fairnet {

// Exact arithmetic for latencies and costs on the solver paths.
using Rational = boost::rational<std::int64_t>;

// Accepts integers ("3"), fractions ("1/100") and finite decimals ("0.25").
// Throws std::invalid_argument on anything else.
Rational ParseRational(std::string_view text);

// "7" for integers, "7/3" otherwise.
std::string FormatRational(const Rational& value);

// Fixed-point rendering with `digits` digits after the decimal point,
// rounded half away from zero.
std::string FormatDecimal(const Rational& value, int digits);

inline double ToDouble(const Rational& value) {
  return boost::rational_cast<double>(value);
}

}  // namespace fairnet

#endif  // FAIRNET_RATIONAL_H_
