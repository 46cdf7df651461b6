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

#include "oracle.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "json.hpp"

namespace ccdp {
namespace {

using nlohmann::json;

struct Enumerator {
  const Adversary& adversary;
  const Mechanism& mechanism;
  int max_rounds;
  std::size_t leaf_cap;
  const LossValue* budget = nullptr;  // non-null enables truncation
  ViewDistribution out;

  void record(const ViewTranscript& view, const Rational& prob) {
    if (out.mass.size() >= leaf_cap) {
      throw ExplosionGuardError("view support exceeded the leaf cap");
    }
    ViewTranscript complete = view;
    complete.complete = true;
    out.mass[complete.serialize()] += prob;
  }

  // Returns false when the truncation gate rejects the post-step state.
  bool within_budget(const std::string& state) const {
    auto loss_branches = mechanism.step(state, Message::privacy_loss());
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
    try {
      return loss_leq(reported, *budget);
    } catch (const IncomparableTagsError&) {
      return false;
    }
  }

  void dfs(const std::string& state, ViewTranscript view,
           const Rational& prob, int round) {
    view.push_coin();
    bool cut = round >= max_rounds || round >= mechanism.comm_bound();
    Message query = cut ? Message::halt(HaltReason::kAdversaryHalt)
                        : adversary.next_query(view);
    if (query.is(Tag::kHalt)) {
      record(view, prob);
      return;
    }
    auto branches = mechanism.step(state, query);
    for (const auto& b : branches) {
      if (budget && !within_budget(b.state)) {
        // Alg. 6: exit before recording this answer. Drop the pending coin
        // record too so the truncated view ends at the previous answer.
        ViewTranscript truncated = view;
        truncated.entries.pop_back();
        record(truncated, prob * b.prob);
        continue;
      }
      ViewTranscript next = view;
      next.push_answer(b.answer);
      if (b.answer.is(Tag::kHalt)) {
        record(next, prob * b.prob);
      } else {
        dfs(b.state, std::move(next), prob * b.prob, round + 1);
      }
    }
  }
};

double directional_divergence(const FiniteDistribution& p,
                              const FiniteDistribution& q,
                              const LossValue& claimed, double tol,
                              const std::vector<double>& grid, bool* pass) {
  if (const auto* a = std::get_if<ApproxDP>(&claimed)) {
    double delta = hockey_stick(p, q, a->eps);
    *pass = delta <= a->del + tol;
    return delta;
  }
  if (const auto* r = std::get_if<Renyi>(&claimed)) {
    double d = renyi_divergence(p, q, r->alpha);
    *pass = d <= r->eps + tol;
    return d;
  }
  if (const auto* z = std::get_if<Zcdp>(&claimed)) {
    double d = zcdp_distance(p, q, grid);
    *pass = d <= z->rho + tol;
    return d;
  }
  const auto& claimed_f = std::get<Tradeoff>(claimed).f;
  TradeoffFunction actual = tradeoff_of(p, q);
  std::set<double> xs;
  for (const auto& pt : claimed_f.breakpoints) xs.insert(pt.first);
  for (const auto& pt : actual.breakpoints) xs.insert(pt.first);
  double worst = 0;  // how far the actual curve dips below the claim
  for (double x : xs) {
    worst = std::max(worst, claimed_f.eval(x) - actual.eval(x));
  }
  *pass = worst <= tol;
  return worst;
}

}  // namespace

void ViewDistribution::check_normalized() const {
  Rational total(0);
  for (const auto& [k, v] : mass) total += v;
  if (total != 1) {
    throw std::logic_error("view distribution mass is not 1");
  }
}

FiniteDistribution ViewDistribution::as_finite() const {
  FiniteDistribution d;
  for (const auto& [k, v] : mass) d.add(k, v);
  return d;
}

ViewDistribution enumerate_views(const Adversary& adversary,
                                 const Mechanism& mechanism,
                                 const Dataset& dataset, int max_rounds,
                                 std::size_t leaf_cap) {
  Enumerator e{adversary, mechanism, max_rounds, leaf_cap};
  e.out.rounds = max_rounds;
  e.dfs(mechanism.init(dataset), ViewTranscript{}, Rational(1), 0);
  e.out.check_normalized();
  return std::move(e.out);
}

ViewDistribution enumerate_truncated_views(
    const Adversary& adversary, const Mechanism& odometer,
    const Dataset& dataset, const LossValue& budget, int max_rounds,
    std::size_t leaf_cap) {
  Enumerator e{adversary, odometer, max_rounds, leaf_cap, &budget};
  e.out.rounds = max_rounds;
  e.dfs(odometer.init(dataset), ViewTranscript{}, Rational(1), 0);
  e.out.check_normalized();
  return std::move(e.out);
}

std::string AuditReport::to_json() const {
  json entries_json = json::array();
  for (const auto& e : entries) {
    entries_json.push_back({{"adversary", e.adversary},
                            {"observed", e.observed},
                            {"pass", e.pass}});
  }
  return json{{"pass", pass},
              {"observed", observed},
              {"witness", witness},
              {"entries", entries_json}}
      .dump();
}

AuditReport audit(const Mechanism& mechanism, const Dataset& x,
                  const Dataset& xp, const LossValue& claimed,
                  const std::vector<AdversaryPtr>& adversaries, double tol,
                  int max_rounds, const std::vector<double>* alpha_grid) {
  if (max_rounds < 0) max_rounds = mechanism.comm_bound();
  const std::vector<double>& grid =
      alpha_grid ? *alpha_grid : default_alpha_grid();
  AuditReport report;
  for (std::size_t i = 0; i < adversaries.size(); ++i) {
    FiniteDistribution p =
        enumerate_views(*adversaries[i], mechanism, x, max_rounds).as_finite();
    FiniteDistribution q =
        enumerate_views(*adversaries[i], mechanism, xp, max_rounds)
            .as_finite();
    bool fwd_ok = true, rev_ok = true;
    double fwd = directional_divergence(p, q, claimed, tol, grid, &fwd_ok);
    double rev = directional_divergence(q, p, claimed, tol, grid, &rev_ok);
    AuditEntry entry{i, std::max(fwd, rev), fwd_ok && rev_ok};
    if (i == 0 || entry.observed > report.observed) {
      report.observed = entry.observed;
      report.witness = i;
    }
    if (!entry.pass) report.pass = false;
    report.entries.push_back(entry);
  }
  return report;
}

std::vector<AdversaryPtr> interleaving_adversaries(int n_children,
                                                   int depth) {
  std::vector<AdversaryPtr> out;
  std::vector<std::vector<int>> frontier = {{}};
  for (int len = 1; len <= depth; ++len) {
    std::vector<std::vector<int>> next;
    for (const auto& seq : frontier) {
      for (int j = 1; j <= n_children; ++j) {
        auto extended = seq;
        extended.push_back(j);
        std::vector<Message> script;
        for (int idx : extended) {
          script.push_back(Message::sub(static_cast<std::uint32_t>(idx),
                                        Message::answer("q")));
        }
        out.push_back(scripted_adversary(std::move(script)));
        next.push_back(std::move(extended));
      }
    }
    frontier = std::move(next);
  }
  return out;
}

std::vector<AdversaryPtr> enumerate_scripts(
    const std::vector<Message>& alphabet, int depth) {
  std::vector<AdversaryPtr> out = {scripted_adversary({})};
  std::vector<std::vector<Message>> frontier = {{}};
  for (int len = 1; len <= depth; ++len) {
    std::vector<std::vector<Message>> next;
    for (const auto& seq : frontier) {
      for (const auto& m : alphabet) {
        auto extended = seq;
        extended.push_back(m);
        out.push_back(scripted_adversary(extended));
        next.push_back(std::move(extended));
      }
    }
    frontier = std::move(next);
  }
  return out;
}

}  // namespace ccdp
