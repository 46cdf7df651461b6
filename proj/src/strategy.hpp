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
#include <string>
#include <vector>

#include "protocol.hpp"

namespace ccdp {

// JSON form of a protocol message, used by strategy files:
// {"init":{}} | {"privacy_loss":{}} | {"spawn":{"spec":...,"loss":...}} |
// {"sub":{"index":j,"inner":...}} | {"answer":{"payload":"..."}} |
// {"halt":{"reason":"adversary"|"budget"|"limit"}} | {"invalid":{}}.
std::string message_to_json(const Message& m);
Message message_from_json(const std::string& json_text);

using AdversaryPtr = std::shared_ptr<const Adversary>;

// Sends a fixed list of queries in order, then halts.
AdversaryPtr scripted_adversary(std::vector<Message> queries);

// Table strategy: ordered rules matched against the history (first match
// wins), a default message, and a depth bound after which it halts.
// {"rules":[{"round":i?,"last_answer":msg?,"send":msg},...],
//  "default":msg?, "depth":n}
AdversaryPtr strategy_from_spec(const std::string& spec_json);

}  // namespace ccdp
