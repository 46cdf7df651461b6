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

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "loss.hpp"
#include "message.hpp"
#include "rational.hpp"

namespace ccdp {

// Finite list of atoms from a small declared domain.
struct Dataset {
  std::vector<int> elements;
};

class MalformedMessageError : public std::runtime_error {
 public:
  explicit MalformedMessageError(const std::string& what)
      : std::runtime_error(what) {}
};

// One possible outcome of a mechanism step, with its exact probability.
// Branch probabilities of a step sum to 1.
struct Branch {
  Rational prob;
  std::string state;
  Message answer;
};

// A randomized state machine. The step relation is exposed as an exact
// finite branch distribution: the interaction driver samples a branch with
// counter-based coins, while the oracle enumerates all branches. States are
// serializable strings so composed machines can nest child states.
class Mechanism {
 public:
  virtual ~Mechanism() = default;

  virtual std::string init(const Dataset& dataset) const = 0;
  virtual std::vector<Branch> step(const std::string& state,
                                   const Message& query) const = 0;

  // Verified privacy-loss metadata, one entry per supported tag.
  virtual std::vector<LossValue> declared_losses() const = 0;
  virtual int comm_bound() const = 0;
  // Canonical spec for Spawn messages and the factory.
  virtual std::string spec_json() const = 0;

  // Declared loss of the given tag (and alpha, for Renyi), if any.
  std::optional<LossValue> declared_loss_for(const LossValue& like) const;
};

using MechanismPtr = std::shared_ptr<const Mechanism>;

// Absorbing halt helper: a single certain branch repeating the halt answer.
std::vector<Branch> halted_branch(const std::string& state,
                                  HaltReason reason);

}  // namespace ccdp
