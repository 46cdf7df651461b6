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

#include <map>
#include <string>
#include <vector>

#include "loss.hpp"
#include "rational.hpp"

namespace ccdp {

// Exact distribution over byte-string outcomes. Total mass must be 1.
class FiniteDistribution {
 public:
  FiniteDistribution() = default;

  void add(const std::string& outcome, const Rational& mass);
  void check_normalized() const;

  const std::map<std::string, Rational>& mass() const { return mass_; }
  Rational probability(const std::string& outcome) const;

  static FiniteDistribution bernoulli(const Rational& p);

 private:
  std::map<std::string, Rational> mass_;
};

// D_alpha(p||q) = 1/(alpha-1) * log sum_x q(x) * (p(x)/q(x))^alpha for
// integer alpha; general alpha > 1 evaluated in floating point. Returns +inf
// when p puts mass outside q's support.
double renyi_divergence(const FiniteDistribution& p,
                        const FiniteDistribution& q, double alpha);

// sum_x max(p(x) - e^eps * q(x), 0).
double hockey_stick(const FiniteDistribution& p, const FiniteDistribution& q,
                    double eps);

// max over the grid of D_alpha / alpha; a lower bound on the true sup,
// usable as an audit witness only.
double zcdp_distance(const FiniteDistribution& p, const FiniteDistribution& q,
                     const std::vector<double>& alpha_grid);

// Exact Neyman-Pearson trade-off curve: sort outcomes by likelihood ratio and
// accumulate (type-I, type-II) breakpoints in rational arithmetic.
TradeoffFunction tradeoff_of(const FiniteDistribution& p,
                             const FiniteDistribution& q);

const std::vector<double>& default_alpha_grid();

}  // namespace ccdp
