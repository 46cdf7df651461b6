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

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "loss.hpp"

namespace ccdp {

enum class Decision { kContinue, kHalt };

// Stateless continuation rule F over append-only loss histories. Shipped
// instances are monotone: once Halt, every extension also Halts.
class ContinuationRule {
 public:
  virtual ~ContinuationRule() = default;
  virtual Decision decide(const std::vector<LossValue>& history,
                          const LossValue& budget) const = 0;
  virtual std::string spec_json() const = 0;
};

// Stateless privacy-loss accumulator G. accumulate({}) is the tag zero.
class LossAccumulator {
 public:
  virtual ~LossAccumulator() = default;
  virtual LossValue accumulate(const std::vector<LossValue>& history) const = 0;
  virtual std::string spec_json() const = 0;
};

using RulePtr = std::shared_ptr<const ContinuationRule>;
using AccumulatorPtr = std::shared_ptr<const LossAccumulator>;

// Continue iff sum of Renyi epsilons at fixed alpha stays within budget.
RulePtr rdp_additive_rule(double alpha);
// Continue iff sum of rho stays within budget.
RulePtr zcdp_additive_rule();
// Continue iff sqrt(2 ln(1/delta') sum eps^2) + sum eps^2 / 2 <= eps and
// delta' + sum delta <= delta.
RulePtr whitehouse_rule(double delta_prime);

AccumulatorPtr rdp_additive_accumulator(double alpha);
AccumulatorPtr zcdp_additive_accumulator();
// Reports (bound, delta) while delta' + sum delta <= delta, else (inf, inf).
AccumulatorPtr whitehouse_accumulator(double delta_prime, double delta);

// The bijection F(.; d) = I(G(.) <= d).
RulePtr rule_from_accumulator(AccumulatorPtr g);
Decision accumulator_budget_check(const LossAccumulator& g,
                                  const LossValue& budget,
                                  const std::vector<LossValue>& history);

// Spec parsing: {"rdp_additive":{"alpha":2}} | {"zcdp_additive":{}} |
// {"whitehouse":{"delta_prime":1e-6[,"delta":1e-5]}} |
// {"from_accumulator":{...}} (rules only).
RulePtr rule_from_spec(const std::string& spec_json);
AccumulatorPtr accumulator_from_spec(const std::string& spec_json);

}  // namespace ccdp
