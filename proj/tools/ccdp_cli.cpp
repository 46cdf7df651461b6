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

// Command-line front end. Talks to the engine exclusively through the C API
// in ccdp/ccdp.h; JSON munging here is argument plumbing only.

#include <atomic>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "ccdp/ccdp.h"
#include "json.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitBudgetHalt = 2;
constexpr int kExitClaimFailed = 3;

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool write_file(const std::string& path, const char* data, size_t len) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return false;
  out.write(data, static_cast<std::streamsize>(len));
  return static_cast<bool>(out);
}

// Applies --seed / --alpha-grid overrides to a JSON document.
std::optional<std::string> prepare_document(
    const std::string& path, const std::optional<std::uint64_t>& seed,
    const std::optional<std::string>& alpha_grid) {
  auto text = read_file(path);
  if (!text) {
    std::cerr << "error: cannot read " << path << "\n";
    return std::nullopt;
  }
  json doc = json::parse(*text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    std::cerr << "error: " << path << " is not a JSON object\n";
    return std::nullopt;
  }
  if (seed) doc["seed"] = *seed;
  if (alpha_grid) {
    json grid = json::array();
    std::istringstream csv(*alpha_grid);
    std::string field;
    while (std::getline(csv, field, ',')) {
      try {
        grid.push_back(std::stod(field));
      } catch (const std::exception&) {
        std::cerr << "error: bad --alpha-grid entry: " << field << "\n";
        return std::nullopt;
      }
    }
    doc["alpha_grid"] = grid;
  }
  return doc.dump();
}

struct RunOutcome {
  int exit_code = kExitUsage;
  std::string report;
  std::string transcript;
};

RunOutcome run_one(const std::string& scenario) {
  RunOutcome out;
  char* report = nullptr;
  char* transcript = nullptr;
  size_t transcript_len = 0;
  ccdp_status st =
      ccdp_run_scenario(scenario.c_str(), &report, &transcript,
                        &transcript_len);
  if (st == CCDP_OK || st == CCDP_HALT_BUDGET) {
    out.exit_code = st == CCDP_OK ? kExitOk : kExitBudgetHalt;
    out.report = report;
    out.transcript.assign(transcript, transcript_len);
    ccdp_buffer_free(report);
    ccdp_buffer_free(transcript);
  } else {
    out.report = std::string("error: ") + ccdp_last_error();
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"composition-accounting engine for interactive privacy"};
  app.require_subcommand(1);

  std::vector<std::string> scenario_paths;
  std::string audit_path;
  std::string verify_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> alpha_grid;
  double tol = 1e-9;
  unsigned jobs = 1;

  auto* run = app.add_subcommand("run", "run a scenario strategy");
  run->add_option("scenario", scenario_paths, "scenario JSON file(s)")
      ->required();
  run->add_option("--seed", seed, "override the scenario seed");
  run->add_option("--out", out_path,
                  "write the canonical transcript bytes here");
  run->add_option("--jobs", jobs, "parallel scenarios")->default_val(1);

  auto* audit = app.add_subcommand("audit", "audit a claimed loss");
  audit->add_option("document", audit_path, "audit JSON file")->required();
  audit->add_option("--tol", tol, "tolerance")->default_val(1e-9);
  audit->add_option("--alpha-grid", alpha_grid, "zCDP alpha grid (csv)");

  auto* verify = app.add_subcommand("verify", "check views against a budget");
  verify->add_option("scenario", verify_path, "scenario JSON file")
      ->required();
  verify->add_option("--tol", tol, "tolerance")->default_val(1e-9);
  verify->add_option("--alpha-grid", alpha_grid, "zCDP alpha grid (csv)");

  app.add_subcommand("list-mechanisms", "list registered mechanism kinds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  if (run->parsed()) {
    if (!out_path.empty() && scenario_paths.size() != 1) {
      std::cerr << "error: --out requires exactly one scenario\n";
      return kExitUsage;
    }
    std::vector<std::string> docs;
    for (const auto& path : scenario_paths) {
      auto doc = prepare_document(path, seed, std::nullopt);
      if (!doc) return kExitUsage;
      docs.push_back(*doc);
    }
    std::vector<RunOutcome> outcomes(docs.size());
    if (jobs <= 1 || docs.size() <= 1) {
      for (size_t i = 0; i < docs.size(); ++i) outcomes[i] = run_one(docs[i]);
    } else {
      // Independent sessions; results are reassembled in input order so the
      // output is identical for every --jobs value.
      std::vector<std::thread> pool;
      std::atomic<size_t> next{0};
      for (unsigned t = 0; t < jobs; ++t) {
        pool.emplace_back([&]() {
          for (size_t i = next.fetch_add(1); i < docs.size();
               i = next.fetch_add(1)) {
            outcomes[i] = run_one(docs[i]);
          }
        });
      }
      for (auto& th : pool) th.join();
    }
    int exit_code = kExitOk;
    for (size_t i = 0; i < outcomes.size(); ++i) {
      const auto& o = outcomes[i];
      if (o.exit_code == kExitUsage) {
        std::cerr << o.report << "\n";
        return kExitUsage;
      }
      std::cout << o.report << "\n";
      if (!out_path.empty() &&
          !write_file(out_path, o.transcript.data(), o.transcript.size())) {
        std::cerr << "error: cannot write " << out_path << "\n";
        return kExitUsage;
      }
      if (o.exit_code != kExitOk) exit_code = o.exit_code;
    }
    return exit_code;
  }

  if (audit->parsed() || verify->parsed()) {
    const std::string& path = audit->parsed() ? audit_path : verify_path;
    auto doc = prepare_document(path, std::nullopt, alpha_grid);
    if (!doc) return kExitUsage;
    char* report = nullptr;
    ccdp_status st = audit->parsed()
                         ? ccdp_audit(doc->c_str(), tol, &report)
                         : ccdp_verify(doc->c_str(), tol, &report);
    if (st == CCDP_OK || st == CCDP_CLAIM_REJECTED) {
      std::cout << report << "\n";
      ccdp_buffer_free(report);
      return st == CCDP_OK ? kExitOk : kExitClaimFailed;
    }
    std::cerr << "error: " << ccdp_last_error() << "\n";
    return kExitUsage;
  }

  char* kinds = nullptr;
  if (ccdp_list_mechanisms(&kinds) != CCDP_OK) {
    std::cerr << "error: " << ccdp_last_error() << "\n";
    return kExitUsage;
  }
  std::cout << kinds << "\n";
  ccdp_buffer_free(kinds);
  return kExitOk;
}
