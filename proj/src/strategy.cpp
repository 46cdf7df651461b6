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

#include "strategy.hpp"

#include <utility>

#include "json.hpp"
#include "loss.hpp"

namespace ccdp {
namespace {

using nlohmann::json;

json message_to_json_obj(const Message& m) {
  switch (m.tag) {
    case Tag::kInit:
      return json{{"init", json::object()}};
    case Tag::kPrivacyLoss:
      return json{{"privacy_loss", json::object()}};
    case Tag::kSpawn:
      return json{{"spawn",
                   {{"spec", json::parse(m.spec_json)},
                    {"loss", json::parse(m.loss_json)}}}};
    case Tag::kSub:
      return json{{"sub",
                   {{"index", m.index},
                    {"inner", message_to_json_obj(*m.inner)}}}};
    case Tag::kAnswer:
      return json{{"answer", {{"payload", m.payload}}}};
    case Tag::kHalt: {
      const char* reason = m.reason == HaltReason::kBudgetExceeded ? "budget"
                           : m.reason == HaltReason::kMechanismLimit
                               ? "limit"
                               : "adversary";
      return json{{"halt", {{"reason", reason}}}};
    }
    case Tag::kInvalid:
      return json{{"invalid", json::object()}};
  }
  return json{{"invalid", json::object()}};
}

Message message_from_json_obj(const json& j) {
  if (!j.is_object() || j.size() != 1) {
    throw InvalidParameterError("message JSON must be {kind: {...}}");
  }
  const std::string kind = j.begin().key();
  const json& body = j.begin().value();
  if (kind == "init") return Message::init();
  if (kind == "privacy_loss") return Message::privacy_loss();
  if (kind == "spawn") {
    return Message::spawn(body.at("spec").dump(), body.at("loss").dump());
  }
  if (kind == "sub") {
    return Message::sub(body.at("index").get<std::uint32_t>(),
                        message_from_json_obj(body.at("inner")));
  }
  if (kind == "answer") {
    return Message::answer(body.at("payload").get<std::string>());
  }
  if (kind == "halt") {
    std::string reason = body.value("reason", "adversary");
    if (reason == "budget") return Message::halt(HaltReason::kBudgetExceeded);
    if (reason == "limit") return Message::halt(HaltReason::kMechanismLimit);
    return Message::halt(HaltReason::kAdversaryHalt);
  }
  if (kind == "invalid") return Message::invalid();
  throw InvalidParameterError("unknown message kind: " + kind);
}

class ScriptedAdversary : public Adversary {
 public:
  explicit ScriptedAdversary(std::vector<Message> queries)
      : queries_(std::move(queries)) {}

  Message next_query(const ViewTranscript& history) const override {
    std::size_t n = history.answer_count();
    if (n >= queries_.size()) {
      return Message::halt(HaltReason::kAdversaryHalt);
    }
    return queries_[n];
  }

 private:
  std::vector<Message> queries_;
};

class TableAdversary : public Adversary {
 public:
  struct Rule {
    std::optional<std::size_t> round;
    std::optional<std::string> last_answer;  // encoded bytes
    Message send;
  };

  TableAdversary(std::vector<Rule> rules, Message fallback, std::size_t depth)
      : rules_(std::move(rules)),
        fallback_(std::move(fallback)),
        depth_(depth) {}

  Message next_query(const ViewTranscript& history) const override {
    std::size_t n = history.answer_count();
    if (n >= depth_) return Message::halt(HaltReason::kAdversaryHalt);
    std::string last;
    for (auto it = history.entries.rbegin(); it != history.entries.rend();
         ++it) {
      if (!it->is_coin) {
        last = it->bytes;
        break;
      }
    }
    for (const auto& r : rules_) {
      if (r.round && *r.round != n) continue;
      if (r.last_answer && *r.last_answer != last) continue;
      return r.send;
    }
    return fallback_;
  }

 private:
  std::vector<Rule> rules_;
  Message fallback_;
  std::size_t depth_;
};

}  // namespace

std::string message_to_json(const Message& m) {
  return message_to_json_obj(m).dump();
}

Message message_from_json(const std::string& json_text) {
  json j = json::parse(json_text, nullptr, false);
  if (j.is_discarded()) throw InvalidParameterError("message is not JSON");
  return message_from_json_obj(j);
}

AdversaryPtr scripted_adversary(std::vector<Message> queries) {
  return std::make_shared<ScriptedAdversary>(std::move(queries));
}

AdversaryPtr strategy_from_spec(const std::string& spec_json) {
  json j = json::parse(spec_json, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw InvalidParameterError("strategy spec is not a JSON object");
  }
  std::vector<TableAdversary::Rule> rules;
  for (const auto& r : j.value("rules", json::array())) {
    TableAdversary::Rule rule{std::nullopt, std::nullopt,
                              message_from_json_obj(r.at("send"))};
    if (r.contains("round")) rule.round = r.at("round").get<std::size_t>();
    if (r.contains("last_answer")) {
      rule.last_answer = encode_message(message_from_json_obj(
          r.at("last_answer")));
    }
    rules.push_back(std::move(rule));
  }
  Message fallback = j.contains("default")
                         ? message_from_json_obj(j.at("default"))
                         : Message::halt(HaltReason::kAdversaryHalt);
  std::size_t depth = j.value("depth", std::size_t{8});
  return std::make_shared<TableAdversary>(std::move(rules),
                                          std::move(fallback), depth);
}

}  // namespace ccdp
