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

#include "scenario.hpp"

#include "json.hpp"

namespace ccdp {
namespace {

using nlohmann::json;

json parse_document(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw InvalidParameterError("expected a JSON object document");
  }
  return j;
}

Dataset dataset_field(const json& sc, const char* key) {
  Dataset d;
  for (const auto& e : sc.at(key)) d.elements.push_back(e.get<int>());
  return d;
}

std::optional<std::vector<double>> grid_field(const json& doc) {
  if (!doc.contains("alpha_grid")) return std::nullopt;
  std::vector<double> grid;
  for (const auto& a : doc.at("alpha_grid")) grid.push_back(a.get<double>());
  if (grid.empty()) throw InvalidParameterError("alpha_grid is empty");
  return grid;
}

MechanismPtr build_machine(const json& sc) {
  std::string machine = sc.value("machine", "filt_con");
  if (machine == "concomp") {
    std::vector<MechanismPtr> children;
    for (const auto& c : sc.at("children")) {
      children.push_back(mechanism_from_spec(c.dump()));
    }
    return concomp(children);
  }
  if (machine == "filt_con" || machine == "filt_nim") {
    RulePtr rule = rule_from_spec(sc.at("rule").dump());
    LossValue budget = loss_from_json(sc.at("budget").dump());
    std::optional<int> cap;
    if (sc.contains("cap")) cap = sc.at("cap").get<int>();
    return machine == "filt_con" ? filt_con_im(rule, budget, cap)
                                 : filt_nim(rule, budget, cap);
  }
  if (machine == "odom_con" || machine == "odom_nim") {
    AccumulatorPtr acc = accumulator_from_spec(sc.at("rule").dump());
    return machine == "odom_con" ? odom_con_im(acc) : odom_nim(acc);
  }
  throw InvalidParameterError("unknown machine: " + machine);
}

}  // namespace

MechanismPtr machine_from_scenario(const std::string& scenario_json) {
  return build_machine(parse_document(scenario_json));
}

CommandResult run_scenario(const std::string& scenario_json) {
  json sc = parse_document(scenario_json);
  MechanismPtr machine = build_machine(sc);
  AdversaryPtr adversary = strategy_from_spec(sc.at("adversary").dump());
  Dataset dataset = dataset_field(sc, "dataset");
  std::uint64_t seed = sc.value("seed", 0ULL);

  std::string final_state;
  ViewTranscript view =
      run_interaction(*adversary, *machine, dataset, seed, &final_state);

  json answers = json::array();
  bool budget_halt = false;
  std::string halt_reason;
  for (const auto& m : view.answers()) {
    answers.push_back(json::parse(message_to_json(m)));
    if (m.is(Tag::kHalt)) {
      halt_reason = halt_reason_text(m.reason);
      budget_halt = m.reason == HaltReason::kBudgetExceeded ||
                    m.reason == HaltReason::kMechanismLimit;
    }
  }

  json report{{"answers", answers},
              {"complete", view.complete},
              {"halt_reason", halt_reason}};

  // Odometers also report their final accumulated loss.
  std::string machine_kind = sc.value("machine", "filt_con");
  if (machine_kind == "odom_con" || machine_kind == "odom_nim") {
    auto loss_branches = machine->step(final_state, Message::privacy_loss());
    if (loss_branches.size() == 1 &&
        loss_branches.front().answer.is(Tag::kAnswer)) {
      report["final_loss"] =
          json::parse(loss_branches.front().answer.payload);
    }
  }

  CommandResult result;
  result.exit_code = budget_halt ? 2 : 0;
  result.report_json = report.dump();
  result.transcript = view.serialize();
  return result;
}

CommandResult run_verify(const std::string& scenario_json, double tol) {
  json sc = parse_document(scenario_json);
  MechanismPtr machine = build_machine(sc);
  AdversaryPtr adversary = strategy_from_spec(sc.at("adversary").dump());
  Dataset x = dataset_field(sc, "dataset");
  Dataset xp = dataset_field(sc, "neighbor");
  LossValue budget = loss_from_json(sc.at("budget").dump());

  auto grid = grid_field(sc);
  AuditReport report = audit(*machine, x, xp, budget, {adversary}, tol, -1,
                             grid ? &*grid : nullptr);
  json out = json::parse(report.to_json());
  out["claimed"] = json::parse(loss_to_json(budget));
  out["tol"] = tol;

  CommandResult result;
  result.exit_code = report.pass ? 0 : 3;
  result.report_json = out.dump();
  return result;
}

CommandResult run_audit(const std::string& audit_json, double tol) {
  json doc = parse_document(audit_json);
  MechanismPtr mech = mechanism_from_spec(doc.at("mechanism").dump());
  LossValue claimed = loss_from_json(doc.at("claimed").dump());
  Dataset x = dataset_field(doc, "dataset");
  Dataset xp = dataset_field(doc, "neighbor");

  std::vector<AdversaryPtr> adversaries;
  if (doc.contains("adversaries")) {
    for (const auto& a : doc.at("adversaries")) {
      adversaries.push_back(strategy_from_spec(a.dump()));
    }
  } else {
    int depth = doc.value("depth", 2);
    std::vector<Message> alphabet = {
        Message::answer("q"), Message::sub(1, Message::answer("q")),
        Message::sub(2, Message::answer("q"))};
    adversaries = enumerate_scripts(alphabet, depth);
  }

  auto grid = grid_field(doc);
  AuditReport report = audit(*mech, x, xp, claimed, adversaries, tol, -1,
                             grid ? &*grid : nullptr);
  json out = json::parse(report.to_json());
  out["claimed"] = json::parse(loss_to_json(claimed));
  out["tol"] = tol;

  CommandResult result;
  result.exit_code = report.pass ? 0 : 3;
  result.report_json = out.dump();
  return result;
}

}  // namespace ccdp
