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

#include "protocol.hpp"

#include <cmath>
#include <set>

#include "doctest.h"
#include "mechanisms.hpp"
#include "strategy.hpp"

using namespace ccdp;

namespace {

std::vector<Message> queries(int n) {
  return std::vector<Message>(static_cast<std::size_t>(n),
                              Message::answer("q"));
}

}  // namespace

TEST_CASE("replay with the same seed is byte-identical") {
  auto m = two_round_rr(std::log(3.0), std::log(3.0));
  auto adv = scripted_adversary(queries(2));
  Dataset x{{1}};
  for (std::uint64_t seed : {0ull, 7ull, 123456789ull}) {
    std::string s1;
    std::string s2;
    ViewTranscript a = run_interaction(*adv, *m, x, seed, &s1);
    ViewTranscript b = run_interaction(*adv, *m, x, seed, &s2);
    CHECK(a.serialize() == b.serialize());
    CHECK(s1 == s2);
    CHECK(a.complete);
  }
}

TEST_CASE("different seeds explore different branches") {
  auto m = randomized_response_p(make_rational(3, 4));
  auto adv = scripted_adversary(queries(1));
  Dataset x{{1}};
  std::set<std::string> seen;
  for (std::uint64_t seed = 0; seed < 64; ++seed) {
    seen.insert(run_interaction(*adv, *m, x, seed).serialize());
  }
  CHECK(seen.size() == 2);  // answers "1" and "0"
}

TEST_CASE("seeded frequencies approach the exact marginal") {
  auto m = randomized_response_p(make_rational(3, 4));
  auto adv = scripted_adversary(queries(1));
  Dataset x{{1}};
  int truthful = 0;
  const int n = 4000;
  for (std::uint64_t seed = 0; seed < n; ++seed) {
    ViewTranscript v = run_interaction(*adv, *m, x, seed);
    REQUIRE(v.answer_count() >= 1);
    if (v.answers()[0].payload == "1") ++truthful;
  }
  double freq = static_cast<double>(truthful) / n;
  CHECK(freq > 0.72);
  CHECK(freq < 0.78);
}

TEST_CASE("the driver enforces the communication bound") {
  auto m = constant_answer("hello");
  // The script never halts on its own within the bound.
  auto adv = scripted_adversary(queries(50));
  ViewTranscript v = run_interaction(*adv, *m, Dataset{{0}}, 1);
  CHECK(static_cast<int>(v.answer_count()) == m->comm_bound());
  // coin/answer pairs plus the final coin of the synthesized halt.
  CHECK(v.entries.size() == 2 * static_cast<std::size_t>(m->comm_bound()) + 1);
  for (const auto& a : v.answers()) {
    CHECK(a.is(Tag::kAnswer));
    CHECK(a.payload == "hello");
  }
  CHECK(v.complete);
}

TEST_CASE("an immediate adversary halt leaves a single coin record") {
  auto m = constant_answer("x");
  auto adv = scripted_adversary({});
  ViewTranscript v = run_interaction(*adv, *m, Dataset{{0}}, 3);
  CHECK(v.entries.size() == 1);
  CHECK(v.entries[0].is_coin);
  CHECK(v.answer_count() == 0);
  CHECK(v.complete);
}

TEST_CASE("mechanism halts are absorbing in the interaction") {
  auto m = randomized_response_p(make_rational(3, 4));
  auto adv = scripted_adversary(queries(5));
  ViewTranscript v = run_interaction(*adv, *m, Dataset{{1}}, 11);
  auto answers = v.answers();
  REQUIRE(answers.size() == 2);
  CHECK(answers[0].is(Tag::kAnswer));
  CHECK(answers[1].is(Tag::kHalt));
  CHECK(answers[1].reason == HaltReason::kMechanismLimit);
  // Stepping the halted state directly keeps answering the same halt.
  std::string state;
  run_interaction(*adv, *m, Dataset{{1}}, 11, &state);
  for (int i = 0; i < 3; ++i) {
    auto branches = m->step(state, Message::answer("again"));
    REQUIRE(branches.size() == 1);
    CHECK(branches[0].answer.is(Tag::kHalt));
    CHECK(branches[0].answer.reason == HaltReason::kMechanismLimit);
    CHECK(branches[0].state == state);
  }
}

TEST_CASE("transcript serialization round trips") {
  auto m = two_round_rr(std::log(3.0), 0.5);
  auto adv = scripted_adversary(queries(2));
  ViewTranscript v = run_interaction(*adv, *m, Dataset{{0}}, 42);
  ViewTranscript back = ViewTranscript::deserialize(v.serialize());
  CHECK(back.serialize() == v.serialize());
  CHECK(back.complete == v.complete);
  CHECK(back.entries.size() == v.entries.size());

  CHECK_THROWS_AS(ViewTranscript::deserialize(""), MalformedMessageError);
  CHECK_THROWS_AS(ViewTranscript::deserialize("\x01z"),
                  MalformedMessageError);
  std::string truncated = v.serialize();
  truncated.pop_back();
  CHECK_THROWS_AS(ViewTranscript::deserialize(truncated),
                  MalformedMessageError);
}

TEST_CASE("sample_branch is pure in seed and round") {
  std::vector<Branch> branches = {
      {make_rational(1, 3), "a", Message::answer("a")},
      {make_rational(2, 3), "b", Message::answer("b")},
  };
  CoinStream coins(99);
  for (std::uint64_t round = 0; round < 16; ++round) {
    const Branch& first = sample_branch(branches, coins, round);
    const Branch& again = sample_branch(branches, coins, round);
    CHECK(first.state == again.state);
  }
  // Frequencies across rounds track the probabilities.
  int a = 0;
  const int n = 3000;
  for (std::uint64_t round = 0; round < n; ++round) {
    if (sample_branch(branches, coins, round).state == "a") ++a;
  }
  double freq = static_cast<double>(a) / n;
  CHECK(freq > 0.30);
  CHECK(freq < 0.37);
  // A certain branch needs no coins at all.
  std::vector<Branch> sure = {{Rational(1), "s", Message::answer("s")}};
  CHECK(sample_branch(sure, coins, 0).state == "s");
}
