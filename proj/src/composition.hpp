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

#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "accountants.hpp"
#include "mechanisms.hpp"
#include "protocol.hpp"

namespace ccdp {

class NotAnOdometerError : public std::runtime_error {
 public:
  explicit NotAnOdometerError(const std::string& what)
      : std::runtime_error(what) {}
};

// A defective person-in-the-middle kept querying past the round budget.
class LivelockGuardError : public std::runtime_error {
 public:
  explicit LivelockGuardError(const std::string& what)
      : std::runtime_error(what) {}
};

// Concurrent composition of a fixed child list. Sub(j, q) routes q to child
// j; anything unparseable is answered Invalid with the state unchanged.
MechanismPtr concomp(const std::vector<MechanismPtr>& children);

// F-filtered concurrent composition. Spawn(M', d') is gated by the cap, the
// declared metadata, and the rule; on acceptance the child is initialized and
// its first answer returned. Rejections halt absorbingly with the reason
// "insufficient budget" or "at mechanism count limit".
MechanismPtr filt_con_im(RulePtr rule, const LossValue& budget,
                         std::optional<int> cap = std::nullopt);

// G-odometer for concurrent composition: Spawn has no budget gate,
// PrivacyLoss answers the accumulated loss without touching state.
MechanismPtr odom_con_im(AccumulatorPtr acc);

// Noninteractive counterparts: children answer once at Spawn and Sub queries
// are answered Invalid.
MechanismPtr filt_nim(RulePtr rule, const LossValue& budget,
                      std::optional<int> cap = std::nullopt);
MechanismPtr odom_nim(AccumulatorPtr acc);

// Runs the interaction against an odometer, asking PrivacyLoss after every
// mechanism answer; exits before recording the first answer whose reported
// loss is not <= budget. Throws NotAnOdometerError if PrivacyLoss is
// answered Invalid.
ViewTranscript truncate_view(const Adversary& adversary,
                             const Mechanism& odometer, const Dataset& dataset,
                             std::uint64_t seed, const LossValue& budget);

enum class Direction { kFromAdversary, kFromMechanism };

// Deterministic person-in-the-middle. Emitting kFromAdversary forwards the
// message to the inner mechanism; kFromMechanism delivers it outward.
class Postprocessor {
 public:
  struct Output {
    std::string state;
    Direction direction;
    Message message;
  };

  virtual ~Postprocessor() = default;
  virtual std::string init() const = 0;
  virtual Output step(const std::string& state, Direction direction,
                      const Message& message) const = 0;
};

using PostprocessorPtr = std::shared_ptr<const Postprocessor>;

// Alg.-7 style driver as a mechanism. Throws LivelockGuardError (from step)
// when the postprocessor loops past the inner comm_bound.
MechanismPtr postprocess(PostprocessorPtr p, MechanismPtr inner);

// Forwards both ways unchanged.
PostprocessorPtr identity_postprocessor();

// One mechanism slot: the first Spawn(M, d) with d <= budget and matching
// declared metadata installs M; afterwards every query is delegated
// verbatim. Rejected Spawns answer Invalid and leave the slot open.
MechanismPtr universal_mechanism(const LossValue& budget);

// Filter <-> odometer bijection, as behavior.
MechanismPtr odometer_as_filter(AccumulatorPtr acc, const LossValue& budget);
MechanismPtr filter_as_truncated_odometer(AccumulatorPtr acc,
                                          const LossValue& budget);

}  // namespace ccdp
