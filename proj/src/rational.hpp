// Copyright 2026 the ccdp authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace ccdp {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational make_rational(std::int64_t num, std::int64_t den) {
  return Rational(BigInt(num), BigInt(den));
}

inline double to_double(const Rational& r) {
  return r.template convert_to<double>();
}

inline std::string to_string(const Rational& r) {
  return r.str();
}

// Best rational p/q with q <= max_den such that p/q <= target, via the
// Stern-Brocot tree. Used to pin mechanism coin probabilities to exact
// rationals that never overstate the declared loss.
Rational best_rational_at_most(double target, std::int64_t max_den);

}  // namespace ccdp
