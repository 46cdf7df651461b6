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

#include <functional>
#include <string>
#include <vector>

#include "distribution.hpp"
#include "mechanism.hpp"

namespace ccdp {

// Leaf mechanisms over single-bit datasets. Coin probabilities are exact
// rationals; an epsilon parameter is pinned to the best rational at most
// e^eps / (1 + e^eps) with denominator <= 4096, so the realized mechanism
// never exceeds its declared loss.

// One answer, then an absorbing halt. Truth probability p >= 1/2.
MechanismPtr randomized_response(double eps);
MechanismPtr randomized_response_p(const Rational& p);

// Round 1 is RR(eps1); round 2 applies RR(eps2) to bit XOR first answer,
// then halts. A minimal genuinely interactive leaf.
MechanismPtr two_round_rr(double eps1, double eps2);
MechanismPtr two_round_rr_p(const Rational& p1, const Rational& p2);

// Answers `payload` to every query until comm_bound. Zero loss.
MechanismPtr constant_answer(const std::string& payload);

// Wraps a noninteractive table (per-bit output distribution) as a
// one-answer-then-halt mechanism.
MechanismPtr one_shot(const FiniteDistribution& out0,
                      const FiniteDistribution& out1);

// Declared losses computed from the two per-bit view distributions: pure
// epsilon from max log ratio, Renyi at alpha=2, zCDP over the default grid,
// and the lower convex envelope of the two trade-off curves.
std::vector<LossValue> losses_of_pair(const FiniteDistribution& p,
                                      const FiniteDistribution& q);

// Registry keyed by the spec's top-level kind ("rr", "const", ...).
// Composite kinds register themselves from their own modules.
using MechanismParser =
    std::function<MechanismPtr(const std::string& spec_json)>;
void register_mechanism_kind(const std::string& kind, MechanismParser parser);
std::vector<std::string> known_mechanism_kinds();

// Parses a canonical spec. Throws InvalidParameterError on unknown kinds or
// bad parameters, MalformedMessageError on non-JSON input.
MechanismPtr mechanism_from_spec(const std::string& spec_json);

}  // namespace ccdp
