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
#include <memory>
#include <string>

namespace ccdp {

// Protocol messages exchanged between an adversary and a mechanism.
//
// Wire format (documented byte-exact in README): one tag byte followed by a
// u32 big-endian payload length and the payload. Tag 0x01 is reserved for the
// privacy-loss query so it is recognizable from the leading byte alone.
enum class Tag : std::uint8_t {
  kInit = 0x00,
  kPrivacyLoss = 0x01,
  kSpawn = 0x02,
  kSub = 0x03,
  kAnswer = 0x04,
  kHalt = 0x05,
  kInvalid = 0x06,
};

enum class HaltReason : std::uint8_t {
  kBudgetExceeded = 0x00,
  kMechanismLimit = 0x01,
  kAdversaryHalt = 0x02,
};

struct Message {
  Tag tag = Tag::kInvalid;

  // Spawn: canonical JSON of the mechanism spec and the claimed loss.
  std::string spec_json;
  std::string loss_json;

  // Sub: 1-based child index and the inner message.
  std::uint32_t index = 0;
  std::shared_ptr<const Message> inner;

  // Answer payload / Halt reason.
  std::string payload;
  HaltReason reason = HaltReason::kAdversaryHalt;

  static Message init();
  static Message privacy_loss();
  static Message spawn(std::string spec_json, std::string loss_json);
  static Message sub(std::uint32_t index, Message inner);
  static Message answer(std::string payload);
  static Message halt(HaltReason reason);
  static Message invalid();

  bool is(Tag t) const { return tag == t; }
};

std::string encode_message(const Message& m);

// Total: any byte string decodes; unknown tags, bad lengths, or trailing
// bytes produce Invalid.
Message decode_message(const std::string& bytes);

inline bool operator==(const Message& a, const Message& b) {
  return encode_message(a) == encode_message(b);
}
inline bool operator!=(const Message& a, const Message& b) { return !(a == b); }

const char* halt_reason_text(HaltReason r);

}  // namespace ccdp
