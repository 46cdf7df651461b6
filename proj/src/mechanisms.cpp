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

#include "mechanisms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "json.hpp"

namespace ccdp {

// Defined in composition.cpp; composite kinds share the leaf registry so
// Spawn specs can name any kind.
void register_composition_kinds();

namespace {

using nlohmann::json;

constexpr std::int64_t kMaxDen = 4096;

json parse_state(const std::string& state) {
  json s = json::parse(state, nullptr, false);
  if (s.is_discarded()) throw MalformedMessageError("unparseable state");
  return s;
}

Rational truth_probability(double eps) {
  if (!(eps >= 0) || std::isinf(eps)) {
    throw InvalidParameterError("eps must be finite and nonnegative");
  }
  return best_rational_at_most(std::exp(eps) / (1.0 + std::exp(eps)),
                               kMaxDen);
}

// Lower convex envelope (monotone chain) of a point set, as a trade-off
// curve. Any convex lower bound of both directional curves is a sound
// declaration under the f1 >= f2 pointwise order.
TradeoffFunction lower_envelope(const TradeoffFunction& a,
                                const TradeoffFunction& b) {
  std::set<double> xs;
  for (const auto& pt : a.breakpoints) xs.insert(pt.first);
  for (const auto& pt : b.breakpoints) xs.insert(pt.first);
  xs.insert(0.0);
  xs.insert(1.0);
  std::vector<std::pair<double, double>> pts;
  for (double x : xs) pts.push_back({x, std::min(a.eval(x), b.eval(x))});
  std::vector<std::pair<double, double>> hull;
  for (const auto& p : pts) {
    while (hull.size() >= 2) {
      const auto& p1 = hull[hull.size() - 2];
      const auto& p2 = hull[hull.size() - 1];
      double cross = (p2.first - p1.first) * (p.second - p1.second) -
                     (p.first - p1.first) * (p2.second - p1.second);
      if (cross <= 0) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(p);
  }
  TradeoffFunction f;
  f.breakpoints = std::move(hull);
  return f;
}

std::string bit_payload(bool b) { return b ? "1" : "0"; }

bool dataset_bit(const Dataset& d) {
  if (d.elements.empty()) {
    throw InvalidParameterError("dataset must hold one bit");
  }
  return d.elements.front() != 0;
}

class RandomizedResponse : public Mechanism {
 public:
  explicit RandomizedResponse(Rational p, std::string spec)
      : p_(std::move(p)), spec_(std::move(spec)) {
    if (p_ < make_rational(1, 2) || p_ >= 1) {
      throw InvalidParameterError("rr: p must lie in [1/2, 1)");
    }
    FiniteDistribution on1;
    on1.add("1", p_);
    on1.add("0", 1 - p_);
    FiniteDistribution on0;
    on0.add("1", 1 - p_);
    on0.add("0", p_);
    losses_ = losses_of_pair(on1, on0);
  }

  std::string init(const Dataset& dataset) const override {
    return json{{"bit", dataset_bit(dataset)}, {"done", false}}.dump();
  }

  std::vector<Branch> step(const std::string& state,
                           const Message&) const override {
    json s = parse_state(state);
    if (s.value("done", true)) {
      return halted_branch(state, HaltReason::kMechanismLimit);
    }
    bool bit = s.at("bit").get<bool>();
    std::string next = json{{"bit", bit}, {"done", true}}.dump();
    std::vector<Branch> out;
    out.push_back({p_, next, Message::answer(bit_payload(bit))});
    if (p_ != 1) {
      out.push_back({1 - p_, next, Message::answer(bit_payload(!bit))});
    }
    return out;
  }

  std::vector<LossValue> declared_losses() const override { return losses_; }
  int comm_bound() const override { return 2; }
  std::string spec_json() const override { return spec_; }

 private:
  Rational p_;
  std::string spec_;
  std::vector<LossValue> losses_;
};

class TwoRoundRR : public Mechanism {
 public:
  TwoRoundRR(Rational p1, Rational p2, std::string spec)
      : p1_(std::move(p1)), p2_(std::move(p2)), spec_(std::move(spec)) {
    for (const Rational* p : {&p1_, &p2_}) {
      if (*p < make_rational(1, 2) || *p > 1) {
        throw InvalidParameterError("two_round_rr: p must lie in [1/2, 1]");
      }
    }
    losses_ = losses_of_pair(view_for(true), view_for(false));
  }

  std::string init(const Dataset& dataset) const override {
    return json{{"bit", dataset_bit(dataset)}, {"round", 0}}.dump();
  }

  std::vector<Branch> step(const std::string& state,
                           const Message&) const override {
    json s = parse_state(state);
    int round = s.value("round", 2);
    if (round >= 2) return halted_branch(state, HaltReason::kMechanismLimit);
    bool bit = s.at("bit").get<bool>();
    std::vector<Branch> out;
    if (round == 0) {
      for (bool a1 : {true, false}) {
        Rational pr = a1 == bit ? p1_ : 1 - p1_;
        if (pr == 0) continue;
        std::string next =
            json{{"bit", bit}, {"round", 1}, {"first", a1}}.dump();
        out.push_back({pr, next, Message::answer(bit_payload(a1))});
      }
    } else {
      bool target = bit != s.at("first").get<bool>();
      std::string next = json{{"round", 2}}.dump();
      for (bool a2 : {true, false}) {
        Rational pr = a2 == target ? p2_ : 1 - p2_;
        if (pr == 0) continue;
        out.push_back({pr, next, Message::answer(bit_payload(a2))});
      }
    }
    return out;
  }

  std::vector<LossValue> declared_losses() const override { return losses_; }
  int comm_bound() const override { return 3; }
  std::string spec_json() const override { return spec_; }

 private:
  // Joint distribution of the two answers given the dataset bit.
  FiniteDistribution view_for(bool bit) const {
    FiniteDistribution d;
    for (bool a1 : {true, false}) {
      Rational pr1 = a1 == bit ? p1_ : 1 - p1_;
      bool target = bit != a1;
      for (bool a2 : {true, false}) {
        Rational pr2 = a2 == target ? p2_ : 1 - p2_;
        d.add(bit_payload(a1) + bit_payload(a2), pr1 * pr2);
      }
    }
    return d;
  }

  Rational p1_, p2_;
  std::string spec_;
  std::vector<LossValue> losses_;
};

class ConstantAnswer : public Mechanism {
 public:
  explicit ConstantAnswer(std::string payload)
      : payload_(std::move(payload)),
        spec_(json{{"const", {{"payload", payload_}}}}.dump()) {
    FiniteDistribution point;
    point.add(payload_, Rational(1));
    losses_ = losses_of_pair(point, point);
  }

  std::string init(const Dataset&) const override {
    return json{{"n", 0}}.dump();
  }

  std::vector<Branch> step(const std::string& state,
                           const Message&) const override {
    json s = parse_state(state);
    int n = s.value("n", 0);
    return {Branch{Rational(1), json{{"n", n + 1}}.dump(),
                   Message::answer(payload_)}};
  }

  std::vector<LossValue> declared_losses() const override { return losses_; }
  int comm_bound() const override { return 8; }
  std::string spec_json() const override { return spec_; }

 private:
  std::string payload_;
  std::string spec_;
  std::vector<LossValue> losses_;
};

json distribution_to_json(const FiniteDistribution& d) {
  json out = json::array();
  for (const auto& [outcome, mass] : d.mass()) {
    out.push_back(json::array({outcome, to_string(mass)}));
  }
  return out;
}

FiniteDistribution distribution_from_json(const json& j) {
  FiniteDistribution d;
  if (!j.is_array()) throw InvalidParameterError("expected outcome array");
  for (const auto& entry : j) {
    if (!entry.is_array() || entry.size() != 2 || !entry[0].is_string() ||
        !entry[1].is_string()) {
      throw InvalidParameterError("expected [outcome, \"num/den\"] pairs");
    }
    Rational mass;
    try {
      mass = Rational(entry[1].get<std::string>());
    } catch (const std::exception&) {
      throw InvalidParameterError("bad rational literal");
    }
    if (mass < 0) throw InvalidParameterError("negative mass");
    d.add(entry[0].get<std::string>(), mass);
  }
  d.check_normalized();
  return d;
}

class OneShot : public Mechanism {
 public:
  OneShot(FiniteDistribution out0, FiniteDistribution out1)
      : out0_(std::move(out0)), out1_(std::move(out1)) {
    out0_.check_normalized();
    out1_.check_normalized();
    spec_ = json{{"one_shot",
                  {{"out0", distribution_to_json(out0_)},
                   {"out1", distribution_to_json(out1_)}}}}
                .dump();
    losses_ = losses_of_pair(out1_, out0_);
  }

  std::string init(const Dataset& dataset) const override {
    return json{{"bit", dataset_bit(dataset)}, {"done", false}}.dump();
  }

  std::vector<Branch> step(const std::string& state,
                           const Message&) const override {
    json s = parse_state(state);
    if (s.value("done", true)) {
      return halted_branch(state, HaltReason::kMechanismLimit);
    }
    const FiniteDistribution& table =
        s.at("bit").get<bool>() ? out1_ : out0_;
    std::string next = json{{"bit", s.at("bit").get<bool>()}, {"done", true}}
                           .dump();
    std::vector<Branch> out;
    for (const auto& [outcome, mass] : table.mass()) {
      out.push_back({mass, next, Message::answer(outcome)});
    }
    return out;
  }

  std::vector<LossValue> declared_losses() const override { return losses_; }
  int comm_bound() const override { return 2; }
  std::string spec_json() const override { return spec_; }

 private:
  FiniteDistribution out0_, out1_;
  std::string spec_;
  std::vector<LossValue> losses_;
};

Rational rational_param(const json& body, const char* eps_key,
                        const char* p_key) {
  if (body.contains(p_key)) {
    try {
      return Rational(body.at(p_key).get<std::string>());
    } catch (const std::exception&) {
      throw InvalidParameterError("bad rational literal");
    }
  }
  return truth_probability(body.at(eps_key).get<double>());
}

std::map<std::string, MechanismParser>& registry() {
  static std::map<std::string, MechanismParser> r;
  return r;
}

json spec_body(const std::string& spec_json, const char* kind) {
  json j = json::parse(spec_json);
  return j.at(kind);
}

void register_builtin() {
  static bool done = false;
  if (done) return;
  done = true;
  register_mechanism_kind("rr", [](const std::string& spec) {
    json body = spec_body(spec, "rr");
    Rational p = rational_param(body, "eps", "p");
    return std::make_shared<RandomizedResponse>(
        p, json{{"rr", {{"p", to_string(p)}}}}.dump());
  });
  register_mechanism_kind("two_round_rr", [](const std::string& spec) {
    json body = spec_body(spec, "two_round_rr");
    Rational p1 = body.contains("p1")
                      ? rational_param(body, "eps1", "p1")
                      : truth_probability(body.at("eps1").get<double>());
    Rational p2 = body.contains("p2")
                      ? rational_param(body, "eps2", "p2")
                      : truth_probability(body.at("eps2").get<double>());
    return std::make_shared<TwoRoundRR>(
        p1, p2,
        json{{"two_round_rr",
              {{"p1", to_string(p1)}, {"p2", to_string(p2)}}}}
            .dump());
  });
  register_mechanism_kind("const", [](const std::string& spec) {
    json body = spec_body(spec, "const");
    return std::make_shared<ConstantAnswer>(
        body.at("payload").get<std::string>());
  });
  register_mechanism_kind("one_shot", [](const std::string& spec) {
    json body = spec_body(spec, "one_shot");
    return std::make_shared<OneShot>(
        distribution_from_json(body.at("out0")),
        distribution_from_json(body.at("out1")));
  });
  register_composition_kinds();
}

}  // namespace

std::vector<LossValue> losses_of_pair(const FiniteDistribution& p,
                                      const FiniteDistribution& q) {
  double eps = 0.0;
  std::set<std::string> outcomes;
  for (const auto& [k, v] : p.mass()) outcomes.insert(k);
  for (const auto& [k, v] : q.mass()) outcomes.insert(k);
  for (const auto& x : outcomes) {
    Rational pp = p.probability(x);
    Rational qq = q.probability(x);
    if (pp == 0 && qq == 0) continue;
    if (pp == 0 || qq == 0) {
      eps = std::numeric_limits<double>::infinity();
      break;
    }
    eps = std::max(eps, std::fabs(std::log(to_double(pp / qq))));
  }
  double d2 = std::max(renyi_divergence(p, q, 2.0),
                       renyi_divergence(q, p, 2.0));
  double rho = std::max(zcdp_distance(p, q, default_alpha_grid()),
                        zcdp_distance(q, p, default_alpha_grid()));
  TradeoffFunction f = lower_envelope(tradeoff_of(p, q), tradeoff_of(q, p));
  return {ApproxDP{eps, 0.0}, Renyi{2.0, d2}, Zcdp{rho}, Tradeoff{f}};
}

MechanismPtr randomized_response(double eps) {
  Rational p = truth_probability(eps);
  return randomized_response_p(p);
}

MechanismPtr randomized_response_p(const Rational& p) {
  return std::make_shared<RandomizedResponse>(
      p, json{{"rr", {{"p", to_string(p)}}}}.dump());
}

MechanismPtr two_round_rr(double eps1, double eps2) {
  return two_round_rr_p(truth_probability(eps1), truth_probability(eps2));
}

MechanismPtr two_round_rr_p(const Rational& p1, const Rational& p2) {
  return std::make_shared<TwoRoundRR>(
      p1, p2,
      json{{"two_round_rr", {{"p1", to_string(p1)}, {"p2", to_string(p2)}}}}
          .dump());
}

MechanismPtr constant_answer(const std::string& payload) {
  return std::make_shared<ConstantAnswer>(payload);
}

MechanismPtr one_shot(const FiniteDistribution& out0,
                      const FiniteDistribution& out1) {
  return std::make_shared<OneShot>(out0, out1);
}

void register_mechanism_kind(const std::string& kind,
                             MechanismParser parser) {
  registry()[kind] = std::move(parser);
}

std::vector<std::string> known_mechanism_kinds() {
  register_builtin();
  std::vector<std::string> out;
  for (const auto& [kind, parser] : registry()) out.push_back(kind);
  return out;
}

MechanismPtr mechanism_from_spec(const std::string& spec_json) {
  register_builtin();
  json j = json::parse(spec_json, nullptr, false);
  if (j.is_discarded() || !j.is_object() || j.size() != 1) {
    throw InvalidParameterError("mechanism spec must be {kind: {...}}");
  }
  const std::string kind = j.begin().key();
  auto it = registry().find(kind);
  if (it == registry().end()) {
    throw InvalidParameterError("unknown mechanism kind: " + kind);
  }
  try {
    return it->second(spec_json);
  } catch (const json::exception& e) {
    throw InvalidParameterError(std::string("bad mechanism spec: ") +
                                e.what());
  }
}

}  // namespace ccdp
