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

#include "distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

namespace ccdp {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

Rational rational_pow(const Rational& base, int exp) {
  Rational out(1);
  for (int i = 0; i < exp; ++i) out *= base;
  return out;
}
}  // namespace

void FiniteDistribution::add(const std::string& outcome, const Rational& mass) {
  if (mass < 0) throw InvalidParameterError("negative probability mass");
  if (mass == 0) return;
  mass_[outcome] += mass;
}

void FiniteDistribution::check_normalized() const {
  Rational total(0);
  for (const auto& [k, v] : mass_) total += v;
  if (total != 1) {
    throw InvalidParameterError("distribution mass sums to " +
                                total.str() + ", not 1");
  }
}

Rational FiniteDistribution::probability(const std::string& outcome) const {
  auto it = mass_.find(outcome);
  return it == mass_.end() ? Rational(0) : it->second;
}

FiniteDistribution FiniteDistribution::bernoulli(const Rational& p) {
  if (p < 0 || p > 1) throw InvalidParameterError("bernoulli p outside [0,1]");
  FiniteDistribution d;
  d.add("1", p);
  d.add("0", Rational(1) - p);
  return d;
}

double renyi_divergence(const FiniteDistribution& p,
                        const FiniteDistribution& q, double alpha) {
  if (!(alpha > 1.0)) throw InvalidParameterError("renyi alpha must be > 1");
  for (const auto& [x, px] : p.mass()) {
    if (q.probability(x) == 0) return kInf;
  }
  bool integral = alpha == std::floor(alpha) && alpha <= 32.0;
  if (integral) {
    // sum_x p^alpha / q^(alpha-1), exact until the final log.
    int a = static_cast<int>(alpha);
    Rational sum(0);
    for (const auto& [x, qx] : q.mass()) {
      Rational px = p.probability(x);
      if (px == 0) continue;
      sum += rational_pow(px, a) / rational_pow(qx, a - 1);
    }
    return std::log(to_double(sum)) / (alpha - 1.0);
  }
  double sum = 0.0;
  for (const auto& [x, qx] : q.mass()) {
    Rational px = p.probability(x);
    if (px == 0) continue;
    sum += std::exp(alpha * std::log(to_double(px)) -
                    (alpha - 1.0) * std::log(to_double(qx)));
  }
  return std::log(sum) / (alpha - 1.0);
}

double hockey_stick(const FiniteDistribution& p, const FiniteDistribution& q,
                    double eps) {
  if (eps < 0.0) throw InvalidParameterError("hockey_stick eps must be >= 0");
  double e = std::exp(eps);
  double sum = 0.0;
  for (const auto& [x, px] : p.mass()) {
    double term = to_double(px) - e * to_double(q.probability(x));
    if (term > 0.0) sum += term;
  }
  return sum;
}

double zcdp_distance(const FiniteDistribution& p, const FiniteDistribution& q,
                     const std::vector<double>& alpha_grid) {
  if (alpha_grid.empty()) {
    throw InvalidParameterError("zcdp_distance: empty alpha grid");
  }
  double best = 0.0;
  for (double alpha : alpha_grid) {
    best = std::max(best, renyi_divergence(p, q, alpha) / alpha);
  }
  return best;
}

TradeoffFunction tradeoff_of(const FiniteDistribution& p,
                             const FiniteDistribution& q) {
  // Optimal rejection rules fill outcomes by decreasing q/p; grouping equal
  // ratios keeps the accumulated breakpoints on the lower convex boundary.
  std::set<std::string> support;
  for (const auto& [x, v] : p.mass()) support.insert(x);
  for (const auto& [x, v] : q.mass()) support.insert(x);

  struct Item {
    Rational px, qx;
  };
  std::vector<Item> items;
  for (const auto& x : support) {
    items.push_back({p.probability(x), q.probability(x)});
  }
  std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
    // q/p descending; p == 0 sorts first.
    if (a.px == 0 || b.px == 0) return a.px == 0 && b.px != 0;
    return a.qx * b.px > b.qx * a.px;
  });

  TradeoffFunction f;
  Rational alpha(0), beta(1);
  f.breakpoints.emplace_back(0.0, 1.0);
  for (std::size_t i = 0; i < items.size();) {
    Rational dp(0), dq(0);
    std::size_t j = i;
    // Merge outcomes with equal likelihood ratio into one segment.
    while (j < items.size() &&
           items[j].qx * items[i].px == items[i].qx * items[j].px &&
           !(items[i].px == 0 && items[j].px != 0)) {
      dp += items[j].px;
      dq += items[j].qx;
      ++j;
    }
    alpha += dp;
    beta -= dq;
    if (dp != 0 || dq != 0) {
      double ax = to_double(alpha);
      double by = to_double(beta);
      // A pure q-mass group moves beta at fixed alpha (a vertical drop at
      // the left endpoint); keep only the lower point.
      if (f.breakpoints.back().first == ax) {
        f.breakpoints.back().second = std::min(f.breakpoints.back().second, by);
      } else {
        f.breakpoints.emplace_back(ax, by);
      }
    }
    i = j;
  }
  if (f.breakpoints.back().first < 1.0) f.breakpoints.emplace_back(1.0, 0.0);
  return f;
}

const std::vector<double>& default_alpha_grid() {
  static const std::vector<double> grid{1.25, 1.5, 2.0, 4.0, 8.0, 16.0, 64.0};
  return grid;
}

}  // namespace ccdp
