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

#include <cstdint>
#include <string>
#include <vector>

#include "coins.hpp"
#include "mechanism.hpp"
#include "message.hpp"

namespace ccdp {

// The adversary's view: alternating coin and answer records, starting with a
// coin record. Adversaries are deterministic, so coin records are empty
// placeholders kept for positional fidelity.
struct ViewTranscript {
  struct Entry {
    bool is_coin = false;
    std::string bytes;  // encoded answer message; empty for coin records
  };

  std::vector<Entry> entries;
  bool complete = false;

  std::size_t answer_count() const;
  // Answer messages in order, decoded.
  std::vector<Message> answers() const;

  void push_coin();
  void push_answer(const Message& m);

  // Canonical byte serialization (outcome key for the oracle, file format
  // for the CLI).
  std::string serialize() const;
  static ViewTranscript deserialize(const std::string& bytes);
};

// Deterministic query strategy: identical history implies identical query.
class Adversary {
 public:
  virtual ~Adversary() = default;
  virtual Message next_query(const ViewTranscript& history) const = 0;
};

// Samples one branch of a step distribution with the coins at `round`.
const Branch& sample_branch(const std::vector<Branch>& branches,
                            const CoinStream& coins, std::uint64_t round);

// Drives the interaction loop: mechanism init, then alternating adversary
// queries and sampled mechanism steps until either side halts or comm_bound
// rounds have run (a Halt(AdversaryHalt) is synthesized in that case).
ViewTranscript run_interaction(const Adversary& adversary,
                               const Mechanism& mechanism,
                               const Dataset& dataset, std::uint64_t seed,
                               std::string* final_state = nullptr);

}  // namespace ccdp
