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

#include "loss.hpp"

#include <cmath>
#include <limits>

#include "doctest.h"

using namespace ccdp;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("approx-DP order is componentwise") {
  CHECK(loss_leq(ApproxDP{0.5, 1e-6}, ApproxDP{0.5, 1e-6}));
  CHECK(loss_leq(ApproxDP{0.4, 1e-6}, ApproxDP{0.5, 1e-5}));
  CHECK_FALSE(loss_leq(ApproxDP{0.6, 1e-6}, ApproxDP{0.5, 1e-5}));
  // Incomparable pair: neither direction holds.
  CHECK_FALSE(loss_leq(ApproxDP{0.6, 1e-7}, ApproxDP{0.5, 1e-6}));
  CHECK_FALSE(loss_leq(ApproxDP{0.5, 1e-6}, ApproxDP{0.6, 1e-7}));
}

TEST_CASE("renyi order requires matching alpha") {
  CHECK(loss_leq(Renyi{2.0, 0.3}, Renyi{2.0, 0.3}));
  CHECK_FALSE(loss_leq(Renyi{2.0, 0.4}, Renyi{2.0, 0.3}));
  CHECK_THROWS_AS(loss_leq(Renyi{2.0, 0.1}, Renyi{3.0, 0.9}),
                  IncomparableTagsError);
}

TEST_CASE("mixed tags raise a type error") {
  CHECK_THROWS_AS(loss_leq(Renyi{2.0, 0.1}, Zcdp{0.1}),
                  IncomparableTagsError);
  CHECK_THROWS_AS(loss_leq(ApproxDP{0.1, 0.0}, Renyi{2.0, 0.1}),
                  IncomparableTagsError);
  CHECK_THROWS_AS(
      loss_leq(Tradeoff{fdp_curve(0.1, 0.0)}, Zcdp{0.1}),
      IncomparableTagsError);
}

TEST_CASE("zcdp order is scalar") {
  CHECK(loss_leq(Zcdp{0.1}, Zcdp{0.1}));
  CHECK(loss_leq(Zcdp{0.0}, Zcdp{kInf}));
  CHECK_FALSE(loss_leq(Zcdp{kInf}, Zcdp{5.0}));
}

TEST_CASE("tradeoff order: higher curve means less loss") {
  // f1 <= f2 iff f1 >= f2 pointwise; the eps = ln 2 curve dominates the
  // eps = ln 3 curve, so it is the smaller loss.
  Tradeoff small{fdp_curve(std::log(2.0), 0.0)};
  Tradeoff large{fdp_curve(std::log(3.0), 0.0)};
  CHECK(loss_leq(small, large));
  CHECK_FALSE(loss_leq(large, small));
  CHECK(loss_leq(small, small));
}

TEST_CASE("fdp curve closed-form values") {
  TradeoffFunction f = fdp_curve(std::log(2.0), 0.0);
  f.validate();
  CHECK(f.eval(0.0) == doctest::Approx(1.0).epsilon(1e-12));
  // Crossover of the two linear pieces at x = 1/(e^eps + 1) = 1/3.
  CHECK(f.eval(1.0 / 3.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(f.eval(1.0) == doctest::Approx(0.0).epsilon(1e-12));
  // Left piece: 1 - 2x.
  CHECK(f.eval(0.1) == doctest::Approx(0.8).epsilon(1e-9));
  // Right piece: (1 - x) / 2.
  CHECK(f.eval(0.5) == doctest::Approx(0.25).epsilon(1e-9));

  TradeoffFunction g = fdp_curve(0.5, 0.1);
  g.validate();
  CHECK(g.eval(0.0) == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(g.eval(0.95) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("fdp curve of (0,0) is the identity bound 1 - x") {
  TradeoffFunction f = fdp_curve(0.0, 0.0);
  for (double x : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    CHECK(f.eval(x) == doctest::Approx(1.0 - x).epsilon(1e-12));
  }
}

TEST_CASE("zero and infinity elements") {
  LossValue z = loss_zero_like(Renyi{4.0, 0.7});
  CHECK(std::get<Renyi>(z).alpha == 4.0);
  CHECK(std::get<Renyi>(z).eps == 0.0);
  CHECK(loss_leq(z, Renyi{4.0, 0.7}));
  LossValue inf = loss_infinity_like(ApproxDP{0.1, 0.0});
  CHECK_FALSE(loss_is_finite(inf));
  CHECK(loss_is_finite(loss_zero_like(inf)));
  // Everything sits below infinity.
  CHECK(loss_leq(ApproxDP{100.0, 1.0}, std::get<ApproxDP>(inf)));
}

TEST_CASE("tradeoff validation rejects bad curves") {
  TradeoffFunction increasing{{{0.0, 0.2}, {1.0, 0.8}}};
  CHECK_THROWS_AS(increasing.validate(), InvalidParameterError);
  TradeoffFunction above{{{0.0, 1.0}, {0.5, 0.9}, {1.0, 0.0}}};
  CHECK_THROWS_AS(above.validate(), InvalidParameterError);  // 0.9 > 1-0.5
  TradeoffFunction concave{{{0.0, 0.8}, {0.5, 0.5}, {1.0, 0.0}}};
  CHECK_THROWS_AS(concave.validate(), InvalidParameterError);
  TradeoffFunction ok{{{0.0, 1.0}, {0.5, 0.25}, {1.0, 0.0}}};
  CHECK_NOTHROW(ok.validate());
}

TEST_CASE("loss JSON round trips, including infinities") {
  std::vector<LossValue> cases = {
      ApproxDP{0.5, 1e-6},  Renyi{2.0, 0.7},        Renyi{2.0, kInf},
      Zcdp{0.25},           Zcdp{kInf},             ApproxDP{kInf, kInf},
      Tradeoff{fdp_curve(0.3, 0.01)},
  };
  for (const auto& v : cases) {
    std::string text = loss_to_json(v);
    CAPTURE(text);
    LossValue back = loss_from_json(text);
    CHECK(loss_tag(back) == loss_tag(v));
    CHECK(loss_leq(back, v));
    CHECK(loss_leq(v, back));
  }
  CHECK_THROWS(loss_from_json("{\"nope\":{}}"));
  CHECK_THROWS(loss_from_json("{\"renyi\":{\"alpha\":1.0,\"eps\":0.5}}"));
}
