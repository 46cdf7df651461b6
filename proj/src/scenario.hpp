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

#include <string>

#include "oracle.hpp"

namespace ccdp {

// Scenario JSON, the unit of reproduction:
//   {"machine": "filt_con"|"filt_nim"|"odom_con"|"odom_nim"|"concomp",
//    "budget": LossValue, "rule": RuleSpec (accumulator spec for odometers),
//    "adversary": StrategySpec, "dataset": [...], "neighbor": [...],
//    "seed": n, "cap": K?, "children": [MechanismSpec...] (concomp)}

struct CommandResult {
  int exit_code = 0;        // 0 ok, 2 budget halt, 3 audit/verify failure
  std::string report_json;  // stable JSON document
  std::string transcript;   // canonical transcript bytes (run only)
};

MechanismPtr machine_from_scenario(const std::string& scenario_json);

// Runs the scenario's strategy against its machine. Exit 2 when the machine
// halted for budget or mechanism-limit reasons. Throws on malformed input.
CommandResult run_scenario(const std::string& scenario_json);

// Enumerates views on dataset and neighbor under the scenario's strategy and
// compares the tag-appropriate divergence against the scenario budget.
CommandResult run_verify(const std::string& scenario_json, double tol);

// Audit document: {"mechanism": spec, "claimed": LossValue,
// "dataset": [...], "neighbor": [...], "adversaries": [StrategySpec...]?,
// "depth": n?}. Without explicit adversaries a small exhaustive script set
// over {Answer, Sub(1, .), Sub(2, .)} is used.
CommandResult run_audit(const std::string& audit_json, double tol);

}  // namespace ccdp
