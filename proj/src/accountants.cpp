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

#include "accountants.hpp"

#include <cmath>
#include <limits>

#include "json.hpp"

namespace ccdp {
namespace {

using nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();

double renyi_scalar(const LossValue& v, double alpha, const char* who) {
  const Renyi* r = std::get_if<Renyi>(&v);
  if (!r || r->alpha != alpha) {
    throw IncomparableTagsError(std::string(who) +
                                ": expected Renyi at the rule's alpha");
  }
  return r->eps;
}

double zcdp_scalar(const LossValue& v, const char* who) {
  const Zcdp* z = std::get_if<Zcdp>(&v);
  if (!z) throw IncomparableTagsError(std::string(who) + ": expected zCDP");
  return z->rho;
}

ApproxDP approx_value(const LossValue& v, const char* who) {
  const ApproxDP* a = std::get_if<ApproxDP>(&v);
  if (!a) {
    throw IncomparableTagsError(std::string(who) + ": expected approx-DP");
  }
  return *a;
}

class RdpAdditiveRule : public ContinuationRule {
 public:
  explicit RdpAdditiveRule(double alpha) : alpha_(alpha) {
    if (!(alpha > 1)) throw InvalidParameterError("alpha must exceed 1");
  }

  Decision decide(const std::vector<LossValue>& history,
                  const LossValue& budget) const override {
    double total = 0;
    for (const auto& d : history) {
      total += renyi_scalar(d, alpha_, "rdp_additive");
    }
    double eps = renyi_scalar(budget, alpha_, "rdp_additive");
    return total <= eps ? Decision::kContinue : Decision::kHalt;
  }

  std::string spec_json() const override {
    return json{{"rdp_additive", {{"alpha", alpha_}}}}.dump();
  }

 private:
  double alpha_;
};

class ZcdpAdditiveRule : public ContinuationRule {
 public:
  Decision decide(const std::vector<LossValue>& history,
                  const LossValue& budget) const override {
    double total = 0;
    for (const auto& d : history) total += zcdp_scalar(d, "zcdp_additive");
    return total <= zcdp_scalar(budget, "zcdp_additive")
               ? Decision::kContinue
               : Decision::kHalt;
  }

  std::string spec_json() const override {
    return json{{"zcdp_additive", json::object()}}.dump();
  }
};

// Accumulated bound of the advanced-composition style filter:
// sqrt(2 ln(1/delta') sum eps^2) + sum eps^2 / 2.
double whitehouse_bound(const std::vector<LossValue>& history,
                        double delta_prime, double* delta_sum) {
  double sq = 0;
  *delta_sum = 0;
  for (const auto& d : history) {
    ApproxDP a = approx_value(d, "whitehouse");
    sq += a.eps * a.eps;
    *delta_sum += a.del;
  }
  return std::sqrt(2.0 * std::log(1.0 / delta_prime) * sq) + 0.5 * sq;
}

class WhitehouseRule : public ContinuationRule {
 public:
  explicit WhitehouseRule(double delta_prime) : delta_prime_(delta_prime) {
    if (!(delta_prime > 0)) {
      throw InvalidParameterError("delta_prime must be positive");
    }
  }

  Decision decide(const std::vector<LossValue>& history,
                  const LossValue& budget) const override {
    ApproxDP b = approx_value(budget, "whitehouse");
    double delta_sum = 0;
    double bound = whitehouse_bound(history, delta_prime_, &delta_sum);
    bool ok = bound <= b.eps && delta_prime_ + delta_sum <= b.del;
    return ok ? Decision::kContinue : Decision::kHalt;
  }

  std::string spec_json() const override {
    return json{{"whitehouse", {{"delta_prime", delta_prime_}}}}.dump();
  }

 private:
  double delta_prime_;
};

class RdpAdditiveAccumulator : public LossAccumulator {
 public:
  explicit RdpAdditiveAccumulator(double alpha) : alpha_(alpha) {
    if (!(alpha > 1)) throw InvalidParameterError("alpha must exceed 1");
  }

  LossValue accumulate(const std::vector<LossValue>& history) const override {
    double total = 0;
    for (const auto& d : history) {
      total += renyi_scalar(d, alpha_, "rdp_additive");
    }
    return Renyi{alpha_, total};
  }

  std::string spec_json() const override {
    return json{{"rdp_additive", {{"alpha", alpha_}}}}.dump();
  }

 private:
  double alpha_;
};

class ZcdpAdditiveAccumulator : public LossAccumulator {
 public:
  LossValue accumulate(const std::vector<LossValue>& history) const override {
    double total = 0;
    for (const auto& d : history) total += zcdp_scalar(d, "zcdp_additive");
    return Zcdp{total};
  }

  std::string spec_json() const override {
    return json{{"zcdp_additive", json::object()}}.dump();
  }
};

class WhitehouseAccumulator : public LossAccumulator {
 public:
  WhitehouseAccumulator(double delta_prime, double delta)
      : delta_prime_(delta_prime), delta_(delta) {
    if (!(delta_prime > 0) || !(delta >= delta_prime)) {
      throw InvalidParameterError("need 0 < delta_prime <= delta");
    }
  }

  LossValue accumulate(const std::vector<LossValue>& history) const override {
    double delta_sum = 0;
    double bound = whitehouse_bound(history, delta_prime_, &delta_sum);
    if (delta_prime_ + delta_sum > delta_) return ApproxDP{kInf, kInf};
    return ApproxDP{bound, delta_};
  }

  std::string spec_json() const override {
    return json{{"whitehouse",
                 {{"delta_prime", delta_prime_}, {"delta", delta_}}}}
        .dump();
  }

 private:
  double delta_prime_;
  double delta_;
};

class AccumulatorRule : public ContinuationRule {
 public:
  explicit AccumulatorRule(AccumulatorPtr g) : g_(std::move(g)) {}

  Decision decide(const std::vector<LossValue>& history,
                  const LossValue& budget) const override {
    return accumulator_budget_check(*g_, budget, history);
  }

  std::string spec_json() const override {
    return json{{"from_accumulator", json::parse(g_->spec_json())}}.dump();
  }

 private:
  AccumulatorPtr g_;
};

json single_kind(const std::string& spec_json, std::string* kind) {
  json j = json::parse(spec_json, nullptr, false);
  if (j.is_discarded() || !j.is_object() || j.size() != 1) {
    throw InvalidParameterError("accountant spec must be {kind: {...}}");
  }
  *kind = j.begin().key();
  return j.begin().value();
}

}  // namespace

RulePtr rdp_additive_rule(double alpha) {
  return std::make_shared<RdpAdditiveRule>(alpha);
}

RulePtr zcdp_additive_rule() { return std::make_shared<ZcdpAdditiveRule>(); }

RulePtr whitehouse_rule(double delta_prime) {
  return std::make_shared<WhitehouseRule>(delta_prime);
}

AccumulatorPtr rdp_additive_accumulator(double alpha) {
  return std::make_shared<RdpAdditiveAccumulator>(alpha);
}

AccumulatorPtr zcdp_additive_accumulator() {
  return std::make_shared<ZcdpAdditiveAccumulator>();
}

AccumulatorPtr whitehouse_accumulator(double delta_prime, double delta) {
  return std::make_shared<WhitehouseAccumulator>(delta_prime, delta);
}

RulePtr rule_from_accumulator(AccumulatorPtr g) {
  if (!g) throw InvalidParameterError("null accumulator");
  return std::make_shared<AccumulatorRule>(std::move(g));
}

Decision accumulator_budget_check(const LossAccumulator& g,
                                  const LossValue& budget,
                                  const std::vector<LossValue>& history) {
  return loss_leq(g.accumulate(history), budget) ? Decision::kContinue
                                                 : Decision::kHalt;
}

RulePtr rule_from_spec(const std::string& spec_json) {
  std::string kind;
  json body = single_kind(spec_json, &kind);
  try {
    if (kind == "rdp_additive") {
      return rdp_additive_rule(body.value("alpha", 2.0));
    }
    if (kind == "zcdp_additive") return zcdp_additive_rule();
    if (kind == "whitehouse") {
      return whitehouse_rule(body.at("delta_prime").get<double>());
    }
    if (kind == "from_accumulator") {
      return rule_from_accumulator(accumulator_from_spec(body.dump()));
    }
  } catch (const json::exception& e) {
    throw InvalidParameterError(std::string("bad rule spec: ") + e.what());
  }
  throw InvalidParameterError("unknown rule kind: " + kind);
}

AccumulatorPtr accumulator_from_spec(const std::string& spec_json) {
  std::string kind;
  json body = single_kind(spec_json, &kind);
  try {
    if (kind == "rdp_additive") {
      return rdp_additive_accumulator(body.value("alpha", 2.0));
    }
    if (kind == "zcdp_additive") return zcdp_additive_accumulator();
    if (kind == "whitehouse") {
      return whitehouse_accumulator(body.at("delta_prime").get<double>(),
                                    body.at("delta").get<double>());
    }
  } catch (const json::exception& e) {
    throw InvalidParameterError(std::string("bad accumulator spec: ") +
                                e.what());
  }
  throw InvalidParameterError("unknown accumulator kind: " + kind);
}

}  // namespace ccdp
