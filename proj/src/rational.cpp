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

#include "rational.hpp"

#include <cmath>
#include <stdexcept>

namespace ccdp {

Rational best_rational_at_most(double target, std::int64_t max_den) {
  if (!(target >= 0.0 && target <= 1.0)) {
    throw std::invalid_argument("best_rational_at_most: target outside [0,1]");
  }
  if (max_den < 1) {
    throw std::invalid_argument("best_rational_at_most: max_den < 1");
  }
  // Walk the Stern-Brocot tree between 0/1 and 1/1, keeping the best
  // candidate that does not exceed target.
  std::int64_t lo_n = 0, lo_d = 1, hi_n = 1, hi_d = 1;
  Rational best(0);
  if (target >= 1.0) return Rational(1);
  while (true) {
    std::int64_t mid_n = lo_n + hi_n;
    std::int64_t mid_d = lo_d + hi_d;
    if (mid_d > max_den) break;
    double mid = static_cast<double>(mid_n) / static_cast<double>(mid_d);
    if (mid <= target) {
      best = make_rational(mid_n, mid_d);
      if (mid == target) break;
      lo_n = mid_n;
      lo_d = mid_d;
    } else {
      hi_n = mid_n;
      hi_d = mid_d;
    }
  }
  return best;
}

}  // namespace ccdp
