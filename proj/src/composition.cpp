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

#include "composition.hpp"

#include <utility>

#include "json.hpp"

namespace ccdp {
namespace {

using nlohmann::json;

constexpr int kSessionCommBound = 12;
constexpr char kDivergenceUnparseable[] = "Divergence cannot be parsed";

json parse_state(const std::string& state) {
  json s = json::parse(state, nullptr, false);
  if (s.is_discarded()) throw MalformedMessageError("unparseable state");
  return s;
}

std::vector<Branch> invalid_branch(const std::string& state) {
  return {Branch{Rational(1), state, Message::invalid()}};
}

std::vector<Branch> answer_branch(const std::string& state,
                                  const std::string& payload) {
  return {Branch{Rational(1), state, Message::answer(payload)}};
}

json dataset_to_json(const Dataset& d) {
  json out = json::array();
  for (int e : d.elements) out.push_back(e);
  return out;
}

Dataset dataset_from_json(const json& j) {
  Dataset d;
  for (const auto& e : j) d.elements.push_back(e.get<int>());
  return d;
}

// Re-tags child branches with composite states built by `rebuild`.
template <typename Rebuild>
std::vector<Branch> lift(const std::vector<Branch>& child_branches,
                         Rebuild rebuild) {
  std::vector<Branch> out;
  for (const auto& b : child_branches) {
    out.push_back({b.prob, rebuild(b.state), b.answer});
  }
  return out;
}

// Componentwise sums of the children's declared losses, one entry per tag
// every child declares (basic composition bounds, valid concurrently).
std::vector<LossValue> summed_losses(const std::vector<MechanismPtr>& ms) {
  std::vector<LossValue> out;
  const LossValue likes[] = {LossValue(ApproxDP{}), LossValue(Renyi{2.0, 0.0}),
                             LossValue(Zcdp{})};
  for (const auto& like : likes) {
    ApproxDP a{0, 0};
    double scalar = 0;
    bool all = true;
    for (const auto& m : ms) {
      auto d = m->declared_loss_for(like);
      if (!d) {
        all = false;
        break;
      }
      if (auto* v = std::get_if<ApproxDP>(&*d)) {
        a.eps += v->eps;
        a.del += v->del;
      } else if (auto* r = std::get_if<Renyi>(&*d)) {
        scalar += r->eps;
      } else if (auto* z = std::get_if<Zcdp>(&*d)) {
        scalar += z->rho;
      }
    }
    if (!all) continue;
    if (std::holds_alternative<ApproxDP>(like)) {
      out.push_back(a);
    } else if (std::holds_alternative<Renyi>(like)) {
      out.push_back(Renyi{2.0, scalar});
    } else {
      out.push_back(Zcdp{scalar});
    }
  }
  return out;
}

class ConComp : public Mechanism {
 public:
  explicit ConComp(std::vector<MechanismPtr> children)
      : children_(std::move(children)) {
    if (children_.empty()) {
      throw InvalidParameterError("concomp: child list empty");
    }
    json specs = json::array();
    for (const auto& c : children_) {
      specs.push_back(json::parse(c->spec_json()));
    }
    spec_ = json{{"concomp", {{"children", specs}}}}.dump();
    losses_ = summed_losses(children_);
  }

  std::string init(const Dataset& dataset) const override {
    json states = json::array();
    for (const auto& c : children_) states.push_back(c->init(dataset));
    return json{{"children", states}}.dump();
  }

  std::vector<Branch> step(const std::string& state,
                           const Message& query) const override {
    json s = parse_state(state);
    if (!query.is(Tag::kSub) || !query.inner || query.index < 1 ||
        query.index > children_.size()) {
      return invalid_branch(state);
    }
    std::size_t j = query.index - 1;
    auto branches = children_[j]->step(
        s.at("children").at(j).get<std::string>(), *query.inner);
    return lift(branches, [&](const std::string& child_state) {
      json next = s;
      next["children"][j] = child_state;
      return next.dump();
    });
  }

  std::vector<LossValue> declared_losses() const override { return losses_; }

  int comm_bound() const override {
    int total = 2;
    for (const auto& c : children_) total += c->comm_bound();
    return total;
  }

  std::string spec_json() const override { return spec_; }

 private:
  std::vector<MechanismPtr> children_;
  std::string spec_;
  std::vector<LossValue> losses_;
};

// Shared machine behind the filters and odometers. A rule makes it a filter
// (budget-gated Spawn, absorbing halts); an accumulator adds PrivacyLoss
// support; `interactive` gates Sub routing.
struct SessionConfig {
  RulePtr rule;
  std::optional<LossValue> budget;
  AccumulatorPtr acc;
  std::optional<int> cap;
  bool interactive = true;
  std::string kind;
};

class CompositionSession : public Mechanism {
 public:
  explicit CompositionSession(SessionConfig cfg) : cfg_(std::move(cfg)) {
    if (cfg_.rule && !cfg_.budget) {
      throw InvalidParameterError("filter needs a budget");
    }
    json body = json::object();
    if (cfg_.rule) {
      body["rule"] = json::parse(cfg_.rule->spec_json());
      body["budget"] = json::parse(loss_to_json(*cfg_.budget));
      if (cfg_.cap) body["cap"] = *cfg_.cap;
    }
    if (cfg_.acc) body["acc"] = json::parse(cfg_.acc->spec_json());
    spec_ = json{{cfg_.kind, body}}.dump();
  }

  std::string init(const Dataset& dataset) const override {
    return json{{"dataset", dataset_to_json(dataset)},
                {"losses", json::array()},
                {"children", json::array()}}
        .dump();
  }

  std::vector<Branch> step(const std::string& state,
                           const Message& query) const override {
    json s = parse_state(state);
    if (s.contains("halt")) {
      return halted_branch(
          state, static_cast<HaltReason>(s.at("halt").get<int>()));
    }
    switch (query.tag) {
      case Tag::kSpawn:
        return handle_spawn(s, state, query);
      case Tag::kSub:
        return handle_sub(s, state, query);
      case Tag::kPrivacyLoss:
        return handle_privacy_loss(s, state);
      default:
        return invalid_branch(state);
    }
  }

  std::vector<LossValue> declared_losses() const override {
    if (cfg_.budget) return {*cfg_.budget};
    return {};
  }

  int comm_bound() const override { return kSessionCommBound; }
  std::string spec_json() const override { return spec_; }

 private:
  bool filter() const { return cfg_.rule != nullptr; }

  std::vector<LossValue> history(const json& s) const {
    std::vector<LossValue> out;
    for (const auto& l : s.at("losses")) {
      out.push_back(loss_from_json(l.dump()));
    }
    return out;
  }

  std::vector<Branch> absorb(json s, HaltReason reason) const {
    s["halt"] = static_cast<int>(reason);
    return halted_branch(s.dump(), reason);
  }

  // Rejection path for malformed Spawn metadata: filters treat it as an
  // invalid query, odometers answer with Alg. 5's fixed string.
  std::vector<Branch> bad_metadata(const std::string& state) const {
    if (filter()) return invalid_branch(state);
    return answer_branch(state, kDivergenceUnparseable);
  }

  std::vector<Branch> handle_spawn(const json& s, const std::string& state,
                                   const Message& query) const {
    if (cfg_.cap &&
        s.at("children").size() >= static_cast<std::size_t>(*cfg_.cap)) {
      return absorb(s, HaltReason::kMechanismLimit);
    }
    MechanismPtr mech;
    LossValue claimed;
    try {
      claimed = loss_from_json(query.loss_json);
      mech = mechanism_from_spec(query.spec_json);
    } catch (const std::exception&) {
      return bad_metadata(state);
    }
    auto declared = mech->declared_loss_for(claimed);
    bool metadata_ok = false;
    try {
      metadata_ok = declared && loss_leq(*declared, claimed);
    } catch (const IncomparableTagsError&) {
      metadata_ok = false;
    }
    if (filter()) {
      if (!metadata_ok) return absorb(s, HaltReason::kBudgetExceeded);
      auto hist = history(s);
      hist.push_back(claimed);
      Decision d;
      try {
        d = cfg_.rule->decide(hist, *cfg_.budget);
      } catch (const IncomparableTagsError&) {
        return invalid_branch(state);
      }
      if (d == Decision::kHalt) {
        return absorb(s, HaltReason::kBudgetExceeded);
      }
    } else {
      if (!metadata_ok) return bad_metadata(state);
      if (cfg_.acc) {
        auto hist = history(s);
        hist.push_back(claimed);
        try {
          cfg_.acc->accumulate(hist);
        } catch (const IncomparableTagsError&) {
          return bad_metadata(state);
        }
      }
    }
    Dataset dataset = dataset_from_json(s.at("dataset"));
    std::string child_state = mech->init(dataset);
    auto branches = mech->step(child_state, Message::init());
    return lift(branches, [&](const std::string& cs) {
      json next = s;
      next["losses"].push_back(json::parse(loss_to_json(claimed)));
      next["children"].push_back(
          json{{"spec", json::parse(mech->spec_json())}, {"state", cs}});
      return next.dump();
    });
  }

  std::vector<Branch> handle_sub(const json& s, const std::string& state,
                                 const Message& query) const {
    if (!cfg_.interactive || !query.inner || query.index < 1 ||
        query.index > s.at("children").size()) {
      return invalid_branch(state);
    }
    std::size_t j = query.index - 1;
    const json& child = s.at("children").at(j);
    MechanismPtr mech = mechanism_from_spec(child.at("spec").dump());
    auto branches =
        mech->step(child.at("state").get<std::string>(), *query.inner);
    return lift(branches, [&](const std::string& cs) {
      json next = s;
      next["children"][j]["state"] = cs;
      return next.dump();
    });
  }

  std::vector<Branch> handle_privacy_loss(const json& s,
                                          const std::string& state) const {
    if (!cfg_.acc) return invalid_branch(state);
    return answer_branch(state, loss_to_json(cfg_.acc->accumulate(history(s))));
  }

  SessionConfig cfg_;
  std::string spec_;
};

class Universal : public Mechanism {
 public:
  explicit Universal(LossValue budget) : budget_(std::move(budget)) {
    spec_ = json{{"universal", {{"budget", json::parse(loss_to_json(budget_))}}}}
                .dump();
  }

  std::string init(const Dataset& dataset) const override {
    return json{{"dataset", dataset_to_json(dataset)},
                {"child", nullptr}}
        .dump();
  }

  std::vector<Branch> step(const std::string& state,
                           const Message& query) const override {
    json s = parse_state(state);
    if (!s.at("child").is_null()) {
      const json& child = s.at("child");
      MechanismPtr mech = mechanism_from_spec(child.at("spec").dump());
      auto branches = mech->step(child.at("state").get<std::string>(), query);
      return lift(branches, [&](const std::string& cs) {
        json next = s;
        next["child"]["state"] = cs;
        return next.dump();
      });
    }
    if (!query.is(Tag::kSpawn)) return invalid_branch(state);
    MechanismPtr mech;
    LossValue claimed;
    try {
      claimed = loss_from_json(query.loss_json);
      mech = mechanism_from_spec(query.spec_json);
    } catch (const std::exception&) {
      return invalid_branch(state);
    }
    try {
      auto declared = mech->declared_loss_for(claimed);
      if (!declared || !loss_leq(*declared, claimed) ||
          !loss_leq(claimed, budget_)) {
        return invalid_branch(state);
      }
    } catch (const IncomparableTagsError&) {
      return invalid_branch(state);
    }
    Dataset dataset = dataset_from_json(s.at("dataset"));
    std::string child_state = mech->init(dataset);
    auto branches = mech->step(child_state, Message::init());
    return lift(branches, [&](const std::string& cs) {
      json next = s;
      next["child"] =
          json{{"spec", json::parse(mech->spec_json())}, {"state", cs}};
      return next.dump();
    });
  }

  std::vector<LossValue> declared_losses() const override {
    return {budget_};
  }

  int comm_bound() const override { return kSessionCommBound; }
  std::string spec_json() const override { return spec_; }

 private:
  LossValue budget_;
  std::string spec_;
};

class Postprocessed : public Mechanism {
 public:
  Postprocessed(PostprocessorPtr p, MechanismPtr inner)
      : p_(std::move(p)), inner_(std::move(inner)) {
    spec_ = json{{"postprocess",
                  {{"inner", json::parse(inner_->spec_json())}}}}
                .dump();
  }

  std::string init(const Dataset& dataset) const override {
    return json{{"pp", p_->init()}, {"inner", inner_->init(dataset)}}.dump();
  }

  std::vector<Branch> step(const std::string& state,
                           const Message& query) const override {
    json s = parse_state(state);
    return expand(s.at("pp").get<std::string>(),
                  s.at("inner").get<std::string>(), Direction::kFromAdversary,
                  query, 0);
  }

  std::vector<LossValue> declared_losses() const override {
    return inner_->declared_losses();
  }

  int comm_bound() const override { return inner_->comm_bound(); }
  std::string spec_json() const override { return spec_; }

 private:
  std::vector<Branch> expand(const std::string& pp_state,
                             const std::string& inner_state, Direction dir,
                             const Message& msg, int depth) const {
    Postprocessor::Output out = p_->step(pp_state, dir, msg);
    if (out.state.empty()) {
      throw MalformedMessageError("postprocessor emitted empty state");
    }
    if (out.direction == Direction::kFromMechanism) {
      return {Branch{Rational(1),
                     json{{"pp", out.state}, {"inner", inner_state}}.dump(),
                     out.message}};
    }
    if (depth >= inner_->comm_bound()) {
      throw LivelockGuardError("postprocessor exceeded the round budget");
    }
    auto inner_branches = inner_->step(inner_state, out.message);
    std::vector<Branch> result;
    for (const auto& b : inner_branches) {
      auto sub = expand(out.state, b.state, Direction::kFromMechanism,
                        b.answer, depth + 1);
      for (auto& sb : sub) {
        sb.prob *= b.prob;
        result.push_back(std::move(sb));
      }
    }
    return result;
  }

  PostprocessorPtr p_;
  MechanismPtr inner_;
  std::string spec_;
};

class IdentityPostprocessor : public Postprocessor {
 public:
  std::string init() const override { return "id"; }
  Output step(const std::string& state, Direction direction,
              const Message& message) const override {
    // Queries go inward, answers go outward, both untouched.
    Direction out = direction == Direction::kFromAdversary
                        ? Direction::kFromAdversary
                        : Direction::kFromMechanism;
    return {state, out, message};
  }
};

MechanismPtr session(SessionConfig cfg) {
  return std::make_shared<CompositionSession>(std::move(cfg));
}

}  // namespace

MechanismPtr concomp(const std::vector<MechanismPtr>& children) {
  return std::make_shared<ConComp>(children);
}

MechanismPtr filt_con_im(RulePtr rule, const LossValue& budget,
                         std::optional<int> cap) {
  return session({std::move(rule), budget, nullptr, cap, true, "filt_con"});
}

MechanismPtr odom_con_im(AccumulatorPtr acc) {
  return session(
      {nullptr, std::nullopt, std::move(acc), std::nullopt, true, "odom_con"});
}

MechanismPtr filt_nim(RulePtr rule, const LossValue& budget,
                      std::optional<int> cap) {
  return session({std::move(rule), budget, nullptr, cap, false, "filt_nim"});
}

MechanismPtr odom_nim(AccumulatorPtr acc) {
  return session(
      {nullptr, std::nullopt, std::move(acc), std::nullopt, false, "odom_nim"});
}

ViewTranscript truncate_view(const Adversary& adversary,
                             const Mechanism& odometer, const Dataset& dataset,
                             std::uint64_t seed, const LossValue& budget) {
  CoinStream coins(seed);
  ViewTranscript view;
  std::string state = odometer.init(dataset);
  int bound = odometer.comm_bound();

  for (int round = 0;; ++round) {
    view.push_coin();
    Message query = round < bound ? adversary.next_query(view)
                                  : Message::halt(HaltReason::kAdversaryHalt);
    if (query.is(Tag::kHalt)) break;

    auto branches = odometer.step(state, query);
    const Branch& b =
        sample_branch(branches, coins, static_cast<std::uint64_t>(round));

    // Alg.-6 gate: ask the odometer for its post-step loss and stop before
    // recording the answer that pushed it past the budget.
    auto loss_branches = b.state.empty()
                             ? std::vector<Branch>{}
                             : odometer.step(b.state, Message::privacy_loss());
    if (loss_branches.size() != 1 ||
        !loss_branches.front().answer.is(Tag::kAnswer)) {
      throw NotAnOdometerError("PrivacyLoss not answered with a loss value");
    }
    LossValue reported;
    try {
      reported = loss_from_json(loss_branches.front().answer.payload);
    } catch (const std::exception&) {
      throw NotAnOdometerError("PrivacyLoss answer is not a loss value");
    }
    bool within;
    try {
      within = loss_leq(reported, budget);
    } catch (const IncomparableTagsError&) {
      within = false;
    }
    if (!within) {
      // Alg. 6 ends the view at the previous answer; drop the pending coin.
      view.entries.pop_back();
      break;
    }

    state = b.state;
    view.push_answer(b.answer);
    if (b.answer.is(Tag::kHalt)) break;
  }
  view.complete = true;
  return view;
}

MechanismPtr postprocess(PostprocessorPtr p, MechanismPtr inner) {
  if (!p || !inner) throw InvalidParameterError("null postprocess argument");
  return std::make_shared<Postprocessed>(std::move(p), std::move(inner));
}

PostprocessorPtr identity_postprocessor() {
  return std::make_shared<IdentityPostprocessor>();
}

MechanismPtr universal_mechanism(const LossValue& budget) {
  return std::make_shared<Universal>(budget);
}

MechanismPtr odometer_as_filter(AccumulatorPtr acc, const LossValue& budget) {
  RulePtr rule = rule_from_accumulator(acc);
  return session(
      {std::move(rule), budget, std::move(acc), std::nullopt, true,
       "filt_con"});
}

MechanismPtr filter_as_truncated_odometer(AccumulatorPtr acc,
                                          const LossValue& budget) {
  return filt_con_im(rule_from_accumulator(std::move(acc)), budget);
}

void register_composition_kinds() {
  register_mechanism_kind("concomp", [](const std::string& spec) {
    json body = json::parse(spec).at("concomp");
    std::vector<MechanismPtr> children;
    for (const auto& c : body.at("children")) {
      children.push_back(mechanism_from_spec(c.dump()));
    }
    return concomp(children);
  });
  auto filt_parser = [](const char* kind, bool interactive) {
    return [kind, interactive](const std::string& spec) {
      json body = json::parse(spec).at(kind);
      RulePtr rule = rule_from_spec(body.at("rule").dump());
      LossValue budget = loss_from_json(body.at("budget").dump());
      std::optional<int> cap;
      if (body.contains("cap")) cap = body.at("cap").get<int>();
      return interactive ? filt_con_im(rule, budget, cap)
                         : filt_nim(rule, budget, cap);
    };
  };
  register_mechanism_kind("filt_con", filt_parser("filt_con", true));
  register_mechanism_kind("filt_nim", filt_parser("filt_nim", false));
  auto odom_parser = [](const char* kind, bool interactive) {
    return [kind, interactive](const std::string& spec) {
      json body = json::parse(spec).at(kind);
      AccumulatorPtr acc = accumulator_from_spec(body.at("acc").dump());
      return interactive ? odom_con_im(acc) : odom_nim(acc);
    };
  };
  register_mechanism_kind("odom_con", odom_parser("odom_con", true));
  register_mechanism_kind("odom_nim", odom_parser("odom_nim", false));
  register_mechanism_kind("universal", [](const std::string& spec) {
    json body = json::parse(spec).at("universal");
    return universal_mechanism(loss_from_json(body.at("budget").dump()));
  });
}

}  // namespace ccdp
