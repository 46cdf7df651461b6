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

#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace ccdp {

class IncomparableTagsError : public std::runtime_error {
 public:
  explicit IncomparableTagsError(const std::string& what)
      : std::runtime_error(what) {}
};

class InvalidParameterError : public std::invalid_argument {
 public:
  explicit InvalidParameterError(const std::string& what)
      : std::invalid_argument(what) {}
};

// Piecewise-linear trade-off curve on [0,1]: convex, continuous,
// non-increasing, f(x) <= 1 - x. Stored as sorted breakpoints; evaluation
// interpolates linearly and clamps outside [first, last].
struct TradeoffFunction {
  std::vector<std::pair<double, double>> breakpoints;

  double eval(double alpha) const;
  void validate() const;
};

struct ApproxDP {
  double eps = 0.0;
  double del = 0.0;
};

struct Renyi {
  double alpha = 2.0;
  double eps = 0.0;  // may be +inf
};

struct Zcdp {
  double rho = 0.0;  // may be +inf
};

struct Tradeoff {
  TradeoffFunction f;
};

using LossValue = std::variant<ApproxDP, Renyi, Zcdp, Tradeoff>;

enum class LossTag { kApproxDP, kRenyi, kZcdp, kTradeoff };

LossTag loss_tag(const LossValue& v);
const char* loss_tag_name(LossTag t);

// Zero element of the given tag (Renyi keeps its alpha).
LossValue loss_zero_like(const LossValue& v);
LossValue loss_infinity_like(const LossValue& v);
bool loss_is_finite(const LossValue& v);

// Per-tag partial order. Throws IncomparableTagsError on mixed tags or
// mismatched Renyi alpha. Tradeoff curves are compared pointwise on the
// union of breakpoints (exact for piecewise-linear sides).
bool loss_leq(const LossValue& a, const LossValue& b);

// f_{eps,delta}(a) = max(0, 1 - delta - e^eps * a, e^-eps * (1 - delta - a)).
TradeoffFunction fdp_curve(double eps, double del);

std::string loss_to_json(const LossValue& v);
LossValue loss_from_json(const std::string& json);

}  // namespace ccdp
