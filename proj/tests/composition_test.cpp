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

#include <cmath>

#include "doctest.h"
#include "strategy.hpp"

using namespace ccdp;

namespace {

const char kRr58[] = "{\"rr\":{\"p\":\"5/8\"}}";

Message spawn_rr58(double claimed_eps) {
  return Message::spawn(kRr58, loss_to_json(Renyi{2.0, claimed_eps}));
}

// Steps and returns the first branch; asserts a nonempty distribution.
Branch first_branch(const Mechanism& m, const std::string& state,
                    const Message& query) {
  auto branches = m.step(state, query);
  REQUIRE(!branches.empty());
  return branches.front();
}

LossValue reported_loss(const Mechanism& odom, const std::string& state) {
  auto branches = odom.step(state, Message::privacy_loss());
  REQUIRE(branches.size() == 1);
  REQUIRE(branches[0].answer.is(Tag::kAnswer));
  // Loss queries never advance the state.
  CHECK(branches[0].state == state);
  return loss_from_json(branches[0].answer.payload);
}

}  // namespace

TEST_CASE("concomp routes sub-queries to the addressed child") {
  auto m = concomp({randomized_response_p(make_rational(3, 4)),
                    constant_answer("c")});
  std::string s = m->init(Dataset{{1}});

  auto to_const = m->step(s, Message::sub(2, Message::answer("q")));
  REQUIRE(to_const.size() == 1);
  CHECK(to_const[0].answer.payload == "c");

  auto to_rr = m->step(s, Message::sub(1, Message::answer("q")));
  REQUIRE(to_rr.size() == 2);
  Rational total(0);
  for (const auto& b : to_rr) total += b.prob;
  CHECK(total == 1);

  // Child states advance independently.
  Branch after = first_branch(*m, to_rr[0].state,
                              Message::sub(2, Message::answer("q")));
  CHECK(after.answer.payload == "c");
  Branch rr_again =
      first_branch(*m, after.state, Message::sub(1, Message::answer("q")));
  CHECK(rr_again.answer.is(Tag::kHalt));
}

TEST_CASE("concomp answers unroutable queries with Invalid") {
  auto m = concomp({constant_answer("a"), constant_answer("b")});
  std::string s = m->init(Dataset{{0}});
  for (const Message& q :
       {Message::sub(5, Message::answer("q")), Message::sub(0, Message::answer("q")),
        Message::answer("q"), Message::privacy_loss(), Message::init()}) {
    auto branches = m->step(s, q);
    REQUIRE(branches.size() == 1);
    CHECK(branches[0].answer.is(Tag::kInvalid));
    CHECK(branches[0].state == s);
  }
}

TEST_CASE("concomp declares the summed child losses") {
  auto rr = randomized_response_p(make_rational(3, 4));
  auto m = concomp({rr, rr});
  auto sum = m->declared_loss_for(Renyi{2.0, 0.0});
  auto one = rr->declared_loss_for(Renyi{2.0, 0.0});
  REQUIRE(sum);
  REQUIRE(one);
  CHECK(std::get<Renyi>(*sum).eps ==
        doctest::Approx(2.0 * std::get<Renyi>(*one).eps).epsilon(1e-12));
}

TEST_CASE("filter accepts spawns while the rule continues") {
  auto m = filt_con_im(rdp_additive_rule(2.0), Renyi{2.0, 1.0});
  std::string s = m->init(Dataset{{1}});
  // Three claims of 0.3 fit in 1.0; each accepted spawn answers with the
  // child's first answer.
  for (int i = 0; i < 3; ++i) {
    Branch b = first_branch(*m, s, spawn_rr58(0.3));
    CHECK(b.answer.is(Tag::kAnswer));
    s = b.state;
  }
  // A sub-query now reaches the first child (already answered, so it halts
  // with its own limit reason, not the filter's).
  Branch sub = first_branch(*m, s, Message::sub(1, Message::answer("q")));
  CHECK(sub.answer.is(Tag::kHalt));
  CHECK(sub.answer.reason == HaltReason::kMechanismLimit);
  s = sub.state;
  // The fourth 0.3 claim would overrun; the filter halts absorbingly.
  Branch rejected = first_branch(*m, s, spawn_rr58(0.3));
  CHECK(rejected.answer.is(Tag::kHalt));
  CHECK(rejected.answer.reason == HaltReason::kBudgetExceeded);
  s = rejected.state;
  for (const Message& q : {spawn_rr58(0.0), Message::sub(1, Message::answer("q")),
                           Message::answer("q")}) {
    Branch b = first_branch(*m, s, q);
    CHECK(b.answer.is(Tag::kHalt));
    CHECK(b.answer.reason == HaltReason::kBudgetExceeded);
    CHECK(b.state == s);
  }
}

TEST_CASE("filter rejects understated claims via the metadata gate") {
  auto m = filt_con_im(rdp_additive_rule(2.0), Renyi{2.0, 1.0});
  std::string s = m->init(Dataset{{1}});
  // Declared D2 of RR(5/8) is ~0.2364 > 0.2: the claim understates.
  Branch b = first_branch(*m, s, spawn_rr58(0.2));
  CHECK(b.answer.is(Tag::kHalt));
  CHECK(b.answer.reason == HaltReason::kBudgetExceeded);
}

TEST_CASE("filter treats undecidable claims as invalid queries") {
  auto m = filt_con_im(rdp_additive_rule(2.0), Renyi{2.0, 1.0});
  std::string s = m->init(Dataset{{1}});
  // A zCDP claim passes the metadata gate but the Renyi rule cannot judge
  // it; the query bounces without consuming budget.
  Branch b = first_branch(
      *m, s, Message::spawn(kRr58, loss_to_json(Zcdp{10.0})));
  CHECK(b.answer.is(Tag::kInvalid));
  CHECK(b.state == s);
  // Unparseable metadata likewise.
  Branch bad = first_branch(*m, s, Message::spawn(kRr58, "not json"));
  CHECK(bad.answer.is(Tag::kInvalid));
  CHECK(bad.state == s);
  // The budget is untouched: a full-budget claim still fits.
  Branch ok = first_branch(*m, s, spawn_rr58(1.0));
  CHECK(ok.answer.is(Tag::kAnswer));
}

TEST_CASE("filter cap halts with the mechanism count reason") {
  auto m = filt_con_im(rdp_additive_rule(2.0), Renyi{2.0, 10.0}, 1);
  std::string s = m->init(Dataset{{1}});
  Branch b = first_branch(*m, s, spawn_rr58(0.3));
  CHECK(b.answer.is(Tag::kAnswer));
  Branch capped = first_branch(*m, b.state, spawn_rr58(0.3));
  CHECK(capped.answer.is(Tag::kHalt));
  CHECK(capped.answer.reason == HaltReason::kMechanismLimit);
}

TEST_CASE("odometer reports the accumulated loss without gating") {
  auto m = odom_con_im(rdp_additive_accumulator(2.0));
  std::string s = m->init(Dataset{{1}});
  LossValue zero = reported_loss(*m, s);
  CHECK(std::get<Renyi>(zero).eps == 0.0);
  // No budget gate: four 0.3 claims all go through.
  for (int i = 0; i < 4; ++i) {
    Branch b = first_branch(*m, s, spawn_rr58(0.3));
    CHECK(b.answer.is(Tag::kAnswer));
    s = b.state;
  }
  LossValue total = reported_loss(*m, s);
  CHECK(std::get<Renyi>(total).eps == doctest::Approx(1.2).epsilon(1e-12));
  // Asking twice gives the same answer from the same state.
  LossValue again = reported_loss(*m, s);
  CHECK(std::get<Renyi>(again).eps ==
        doctest::Approx(std::get<Renyi>(total).eps).epsilon(1e-15));
}

TEST_CASE("odometer answers bad metadata with the fixed string") {
  auto m = odom_con_im(rdp_additive_accumulator(2.0));
  std::string s = m->init(Dataset{{1}});
  for (const Message& q :
       {Message::spawn(kRr58, "not json"),
        Message::spawn("junk spec", loss_to_json(Renyi{2.0, 0.3})),
        spawn_rr58(0.2) /* understated claim */}) {
    auto branches = m->step(s, q);
    REQUIRE(branches.size() == 1);
    CHECK(branches[0].answer.is(Tag::kAnswer));
    CHECK(branches[0].answer.payload == "Divergence cannot be parsed");
    CHECK(branches[0].state == s);
  }
}

TEST_CASE("odometer totals are invariant under interleaving") {
  auto m = odom_con_im(rdp_additive_accumulator(2.0));
  auto drive = [&](const std::vector<int>& subs) {
    std::string s = m->init(Dataset{{1}});
    s = first_branch(*m, s, spawn_rr58(0.3)).state;
    s = first_branch(*m, s, spawn_rr58(0.4)).state;
    for (int j : subs) {
      s = first_branch(*m, s,
                       Message::sub(static_cast<std::uint32_t>(j),
                                    Message::answer("q")))
              .state;
    }
    return std::get<Renyi>(reported_loss(*m, s)).eps;
  };
  double a = drive({1, 2, 1, 2});
  double b = drive({2, 2, 1, 1});
  double c = drive({});
  CHECK(a == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(a == b);
  CHECK(a == c);
}

TEST_CASE("noninteractive variants answer sub-queries with Invalid") {
  auto f = filt_nim(rdp_additive_rule(2.0), Renyi{2.0, 1.0});
  std::string fs = f->init(Dataset{{1}});
  Branch spawned = first_branch(*f, fs, spawn_rr58(0.3));
  CHECK(spawned.answer.is(Tag::kAnswer));
  Branch sub =
      first_branch(*f, spawned.state, Message::sub(1, Message::answer("q")));
  CHECK(sub.answer.is(Tag::kInvalid));
  CHECK(sub.state == spawned.state);

  auto o = odom_nim(rdp_additive_accumulator(2.0));
  std::string os = o->init(Dataset{{1}});
  os = first_branch(*o, os, spawn_rr58(0.3)).state;
  CHECK(first_branch(*o, os, Message::sub(1, Message::answer("q")))
            .answer.is(Tag::kInvalid));
  CHECK(std::get<Renyi>(reported_loss(*o, os)).eps ==
        doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("truncate_view stops before the budget-crossing answer") {
  auto odom = odom_con_im(rdp_additive_accumulator(2.0));
  auto adv = scripted_adversary({spawn_rr58(0.6), spawn_rr58(0.6)});
  ViewTranscript v =
      truncate_view(*adv, *odom, Dataset{{1}}, 5, Renyi{2.0, 1.0});
  // The second spawn would report 1.2 > 1.0; the view ends at the first
  // answer with no dangling coin record.
  CHECK(v.answer_count() == 1);
  CHECK(v.entries.size() == 2);
  CHECK(!v.entries.back().is_coin);
  CHECK(v.complete);
  // A roomier budget records both answers.
  ViewTranscript full =
      truncate_view(*adv, *odom, Dataset{{1}}, 5, Renyi{2.0, 2.0});
  CHECK(full.answer_count() == 2);
}

TEST_CASE("truncate_view rejects machines that are not odometers") {
  auto filt = filt_con_im(rdp_additive_rule(2.0), Renyi{2.0, 1.0});
  auto adv = scripted_adversary({spawn_rr58(0.3)});
  CHECK_THROWS_AS(
      truncate_view(*adv, *filt, Dataset{{1}}, 0, Renyi{2.0, 1.0}),
      NotAnOdometerError);
}

TEST_CASE("identity postprocessing is byte-invisible") {
  auto inner = two_round_rr(std::log(3.0), std::log(3.0));
  auto wrapped = postprocess(identity_postprocessor(), inner);
  auto adv = scripted_adversary(
      {Message::answer("q"), Message::answer("q"), Message::answer("q")});
  for (std::uint64_t seed = 0; seed < 32; ++seed) {
    ViewTranscript a = run_interaction(*adv, *inner, Dataset{{1}}, seed);
    ViewTranscript b = run_interaction(*adv, *wrapped, Dataset{{1}}, seed);
    CHECK(a.serialize() == b.serialize());
  }
  CHECK(wrapped->comm_bound() == inner->comm_bound());
}

namespace {
// Pathological person-in-the-middle that keeps querying inward forever.
class InwardLoop : public Postprocessor {
 public:
  std::string init() const override { return "loop"; }
  Output step(const std::string& state, Direction,
              const Message&) const override {
    return {state, Direction::kFromAdversary, Message::answer("again")};
  }
};
}  // namespace

TEST_CASE("the livelock guard cuts off inward loops") {
  auto wrapped =
      postprocess(std::make_shared<InwardLoop>(), constant_answer("x"));
  std::string s = wrapped->init(Dataset{{0}});
  CHECK_THROWS_AS(wrapped->step(s, Message::answer("q")), LivelockGuardError);
}

TEST_CASE("universal mechanism gates the one spawn and then delegates") {
  auto m = universal_mechanism(Renyi{2.0, 0.7});
  std::string s = m->init(Dataset{{1}});
  // Claim above the budget: rejected, slot stays open.
  Branch over = first_branch(*m, s, spawn_rr58(0.8));
  CHECK(over.answer.is(Tag::kInvalid));
  CHECK(over.state == s);
  // Understated claim: rejected too.
  CHECK(first_branch(*m, s, spawn_rr58(0.2)).answer.is(Tag::kInvalid));
  // Non-spawn before installation: Invalid.
  CHECK(first_branch(*m, s, Message::answer("q")).answer.is(Tag::kInvalid));
  // A sound claim installs the child and returns its first answer.
  Branch ok = first_branch(*m, s, spawn_rr58(0.3));
  CHECK(ok.answer.is(Tag::kAnswer));
  // Afterwards queries are delegated verbatim; RR has answered, so it halts.
  Branch after = first_branch(*m, ok.state, Message::answer("q"));
  CHECK(after.answer.is(Tag::kHalt));
  CHECK(after.answer.reason == HaltReason::kMechanismLimit);
}

TEST_CASE("an odometer dressed as a filter matches the filter") {
  LossValue budget = Renyi{2.0, 1.0};
  auto as_filter = odometer_as_filter(rdp_additive_accumulator(2.0), budget);
  auto filter =
      filt_con_im(rule_from_accumulator(rdp_additive_accumulator(2.0)), budget);
  auto adv = scripted_adversary({spawn_rr58(0.6), spawn_rr58(0.6),
                                 Message::sub(1, Message::answer("q"))});
  for (std::uint64_t seed = 0; seed < 16; ++seed) {
    ViewTranscript a = run_interaction(*adv, *as_filter, Dataset{{1}}, seed);
    ViewTranscript b = run_interaction(*adv, *filter, Dataset{{1}}, seed);
    CHECK(a.serialize() == b.serialize());
  }
  // The filter-from-odometer direction is the same construction.
  auto back = filter_as_truncated_odometer(rdp_additive_accumulator(2.0),
                                           budget);
  for (std::uint64_t seed = 0; seed < 16; ++seed) {
    ViewTranscript a = run_interaction(*adv, *back, Dataset{{1}}, seed);
    ViewTranscript b = run_interaction(*adv, *filter, Dataset{{1}}, seed);
    CHECK(a.serialize() == b.serialize());
  }
}

TEST_CASE("composite specs round trip through the factory") {
  std::vector<MechanismPtr> machines = {
      concomp({randomized_response_p(make_rational(3, 4)),
               constant_answer("c")}),
      filt_con_im(rdp_additive_rule(2.0), Renyi{2.0, 1.0}, 2),
      filt_nim(zcdp_additive_rule(), Zcdp{0.5}),
      odom_con_im(rdp_additive_accumulator(2.0)),
      odom_nim(zcdp_additive_accumulator()),
      universal_mechanism(Renyi{2.0, 0.7}),
  };
  for (const auto& m : machines) {
    CAPTURE(m->spec_json());
    MechanismPtr again = mechanism_from_spec(m->spec_json());
    CHECK(again->spec_json() == m->spec_json());
  }
}
