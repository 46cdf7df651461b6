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

#include "message.hpp"

#include <optional>

namespace ccdp {
namespace {

void put_u32(std::string& out, std::uint32_t v) {
  out.push_back(static_cast<char>((v >> 24) & 0xff));
  out.push_back(static_cast<char>((v >> 16) & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
  out.push_back(static_cast<char>(v & 0xff));
}

std::optional<std::uint32_t> get_u32(const std::string& in, std::size_t& pos) {
  if (pos + 4 > in.size()) return std::nullopt;
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v = (v << 8) | static_cast<std::uint8_t>(in[pos + i]);
  }
  pos += 4;
  return v;
}

std::optional<std::string> get_blob(const std::string& in, std::size_t& pos) {
  auto len = get_u32(in, pos);
  if (!len || pos + *len > in.size()) return std::nullopt;
  std::string blob = in.substr(pos, *len);
  pos += *len;
  return blob;
}

}  // namespace

Message Message::init() { return Message{.tag = Tag::kInit}; }
Message Message::privacy_loss() { return Message{.tag = Tag::kPrivacyLoss}; }

Message Message::spawn(std::string spec_json, std::string loss_json) {
  Message m;
  m.tag = Tag::kSpawn;
  m.spec_json = std::move(spec_json);
  m.loss_json = std::move(loss_json);
  return m;
}

Message Message::sub(std::uint32_t index, Message inner) {
  Message m;
  m.tag = Tag::kSub;
  m.index = index;
  m.inner = std::make_shared<const Message>(std::move(inner));
  return m;
}

Message Message::answer(std::string payload) {
  Message m;
  m.tag = Tag::kAnswer;
  m.payload = std::move(payload);
  return m;
}

Message Message::halt(HaltReason reason) {
  Message m;
  m.tag = Tag::kHalt;
  m.reason = reason;
  return m;
}

Message Message::invalid() { return Message{.tag = Tag::kInvalid}; }

std::string encode_message(const Message& m) {
  std::string payload;
  switch (m.tag) {
    case Tag::kInit:
    case Tag::kPrivacyLoss:
    case Tag::kInvalid:
      break;
    case Tag::kSpawn:
      put_u32(payload, static_cast<std::uint32_t>(m.spec_json.size()));
      payload += m.spec_json;
      put_u32(payload, static_cast<std::uint32_t>(m.loss_json.size()));
      payload += m.loss_json;
      break;
    case Tag::kSub: {
      put_u32(payload, m.index);
      std::string inner = m.inner ? encode_message(*m.inner) : std::string();
      payload += inner;
      break;
    }
    case Tag::kAnswer:
      payload = m.payload;
      break;
    case Tag::kHalt:
      payload.push_back(static_cast<char>(m.reason));
      break;
  }
  std::string out;
  out.push_back(static_cast<char>(m.tag));
  put_u32(out, static_cast<std::uint32_t>(payload.size()));
  out += payload;
  return out;
}

namespace {

Message decode_at(const std::string& bytes, std::size_t& pos, bool& ok);

Message decode_payload(Tag tag, const std::string& payload, bool& ok) {
  std::size_t pos = 0;
  switch (tag) {
    case Tag::kInit:
    case Tag::kPrivacyLoss:
    case Tag::kInvalid: {
      if (!payload.empty()) break;
      Message m;
      m.tag = tag;
      return m;
    }
    case Tag::kSpawn: {
      auto spec = get_blob(payload, pos);
      if (!spec) break;
      auto loss = get_blob(payload, pos);
      if (!loss || pos != payload.size()) break;
      return Message::spawn(*spec, *loss);
    }
    case Tag::kSub: {
      auto index = get_u32(payload, pos);
      if (!index || *index == 0) break;
      bool inner_ok = true;
      Message inner = decode_at(payload, pos, inner_ok);
      if (!inner_ok || pos != payload.size()) break;
      return Message::sub(*index, std::move(inner));
    }
    case Tag::kAnswer:
      return Message::answer(payload);
    case Tag::kHalt: {
      if (payload.size() != 1) break;
      auto r = static_cast<std::uint8_t>(payload[0]);
      if (r > static_cast<std::uint8_t>(HaltReason::kAdversaryHalt)) break;
      return Message::halt(static_cast<HaltReason>(r));
    }
  }
  ok = false;
  return Message::invalid();
}

Message decode_at(const std::string& bytes, std::size_t& pos, bool& ok) {
  if (pos >= bytes.size()) {
    ok = false;
    return Message::invalid();
  }
  auto raw_tag = static_cast<std::uint8_t>(bytes[pos]);
  pos += 1;
  if (raw_tag > static_cast<std::uint8_t>(Tag::kInvalid)) {
    ok = false;
    return Message::invalid();
  }
  auto payload = get_blob(bytes, pos);
  if (!payload) {
    ok = false;
    return Message::invalid();
  }
  return decode_payload(static_cast<Tag>(raw_tag), *payload, ok);
}

}  // namespace

Message decode_message(const std::string& bytes) {
  std::size_t pos = 0;
  bool ok = true;
  Message m = decode_at(bytes, pos, ok);
  if (!ok || pos != bytes.size()) return Message::invalid();
  return m;
}

const char* halt_reason_text(HaltReason r) {
  switch (r) {
    case HaltReason::kBudgetExceeded:
      return "insufficient budget";
    case HaltReason::kMechanismLimit:
      return "at mechanism count limit";
    case HaltReason::kAdversaryHalt:
      return "adversary halt";
  }
  return "unknown";
}

}  // namespace ccdp
