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

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "composition.hpp"
#include "distribution.hpp"
#include "strategy.hpp"

namespace ccdp {

class ExplosionGuardError : public std::runtime_error {
 public:
  explicit ExplosionGuardError(const std::string& what)
      : std::runtime_error(what) {}
};

// Exact distribution over serialized complete transcripts.
struct ViewDistribution {
  std::map<std::string, Rational> mass;
  int rounds = 0;

  void check_normalized() const;
  FiniteDistribution as_finite() const;
};

constexpr std::size_t kDefaultLeafCap = 1000000;

// Depth-first enumeration over every branch of every mechanism step; the
// deterministic adversary contributes no branching. max_rounds caps the
// number of answered queries (<= comm_bound applies regardless).
ViewDistribution enumerate_views(const Adversary& adversary,
                                 const Mechanism& mechanism,
                                 const Dataset& dataset, int max_rounds,
                                 std::size_t leaf_cap = kDefaultLeafCap);

// Same, with the truncation gate applied per branch: a PrivacyLoss probe
// after each step drops the answer that pushes the reported loss past the
// budget.
ViewDistribution enumerate_truncated_views(
    const Adversary& adversary, const Mechanism& odometer,
    const Dataset& dataset, const LossValue& budget, int max_rounds,
    std::size_t leaf_cap = kDefaultLeafCap);

struct AuditEntry {
  std::size_t adversary = 0;
  double observed = 0;
  bool pass = true;
};

struct AuditReport {
  bool pass = true;
  double observed = 0;  // worst margin-relevant value over adversaries
  std::size_t witness = 0;
  std::vector<AuditEntry> entries;

  std::string to_json() const;
};

// For each adversary, compares the tag-appropriate divergence between the
// view distributions on x and x' (both directions) against `claimed`. A pass
// is evidence over the supplied adversary set, not a proof.
AuditReport audit(const Mechanism& mechanism, const Dataset& x,
                  const Dataset& xp, const LossValue& claimed,
                  const std::vector<AdversaryPtr>& adversaries,
                  double tol = 1e-9, int max_rounds = -1,
                  const std::vector<double>* alpha_grid = nullptr);

// All non-adaptive routing sequences Sub(j, Answer("q")) over n children with
// length 1..depth.
std::vector<AdversaryPtr> interleaving_adversaries(int n_children, int depth);

// All non-adaptive query scripts over an alphabet with length 0..depth.
std::vector<AdversaryPtr> enumerate_scripts(
    const std::vector<Message>& alphabet, int depth);

}  // namespace ccdp
