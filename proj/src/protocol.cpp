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

#include <stdexcept>

namespace ccdp {

std::size_t ViewTranscript::answer_count() const {
  std::size_t n = 0;
  for (const auto& e : entries) {
    if (!e.is_coin) ++n;
  }
  return n;
}

std::vector<Message> ViewTranscript::answers() const {
  std::vector<Message> out;
  for (const auto& e : entries) {
    if (!e.is_coin) out.push_back(decode_message(e.bytes));
  }
  return out;
}

void ViewTranscript::push_coin() { entries.push_back(Entry{true, {}}); }

void ViewTranscript::push_answer(const Message& m) {
  entries.push_back(Entry{false, encode_message(m)});
}

std::string ViewTranscript::serialize() const {
  std::string out;
  out.push_back(complete ? '\x01' : '\x00');
  for (const auto& e : entries) {
    out.push_back(e.is_coin ? 'r' : 'm');
    std::uint32_t len = static_cast<std::uint32_t>(e.bytes.size());
    for (int i = 3; i >= 0; --i) {
      out.push_back(static_cast<char>((len >> (8 * i)) & 0xff));
    }
    out += e.bytes;
  }
  return out;
}

ViewTranscript ViewTranscript::deserialize(const std::string& bytes) {
  ViewTranscript t;
  std::size_t pos = 0;
  if (bytes.empty()) throw MalformedMessageError("empty transcript blob");
  t.complete = bytes[0] == '\x01';
  pos = 1;
  while (pos < bytes.size()) {
    char kind = bytes[pos++];
    if ((kind != 'r' && kind != 'm') || pos + 4 > bytes.size()) {
      throw MalformedMessageError("corrupt transcript blob");
    }
    std::uint32_t len = 0;
    for (int i = 0; i < 4; ++i) {
      len = (len << 8) | static_cast<std::uint8_t>(bytes[pos + i]);
    }
    pos += 4;
    if (pos + len > bytes.size()) {
      throw MalformedMessageError("corrupt transcript blob");
    }
    t.entries.push_back(Entry{kind == 'r', bytes.substr(pos, len)});
    pos += len;
  }
  return t;
}

const Branch& sample_branch(const std::vector<Branch>& branches,
                            const CoinStream& coins, std::uint64_t round) {
  if (branches.empty()) {
    throw std::logic_error("mechanism step produced no branches");
  }
  if (branches.size() == 1) return branches.front();
  BigInt den(1);
  for (const auto& b : branches) {
    den = boost::multiprecision::lcm(den, denominator(b.prob));
  }
  BigInt draw = coins.uniform(round, den);
  BigInt cumulative(0);
  for (const auto& b : branches) {
    cumulative += numerator(b.prob) * (den / denominator(b.prob));
    if (draw < cumulative) return b;
  }
  throw std::logic_error("branch probabilities sum to less than 1");
}

ViewTranscript run_interaction(const Adversary& adversary,
                               const Mechanism& mechanism,
                               const Dataset& dataset, std::uint64_t seed,
                               std::string* final_state) {
  CoinStream coins(seed);
  ViewTranscript view;
  std::string state = mechanism.init(dataset);
  int bound = mechanism.comm_bound();

  for (int round = 0;; ++round) {
    view.push_coin();
    Message query = round < bound ? adversary.next_query(view)
                                  : Message::halt(HaltReason::kAdversaryHalt);
    if (query.is(Tag::kHalt)) break;

    auto branches = mechanism.step(state, query);
    const Branch& b =
        sample_branch(branches, coins, static_cast<std::uint64_t>(round));
    if (b.state.empty() || b.answer.is(Tag::kInit)) {
      throw MalformedMessageError("mechanism step returned empty state/answer");
    }
    state = b.state;
    view.push_answer(b.answer);
    if (b.answer.is(Tag::kHalt)) break;
  }
  view.complete = true;
  if (final_state) *final_state = state;
  return view;
}

}  // namespace ccdp
