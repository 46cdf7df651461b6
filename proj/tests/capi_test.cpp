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

#include "ccdp/ccdp.h"

#include <cstring>
#include <string>

#include "doctest.h"

namespace {

std::string take(char* buf) {
  REQUIRE(buf != nullptr);
  std::string out(buf);
  ccdp_buffer_free(buf);
  return out;
}

const char kSpawnScenario[] = R"({
  "machine": "filt_con",
  "rule": {"rdp_additive": {"alpha": 2}},
  "budget": {"renyi": {"alpha": 2, "eps": 1.0}},
  "dataset": [1],
  "neighbor": [0],
  "seed": 7,
  "adversary": {
    "rules": [{"round": 0, "send": {"spawn": {
      "spec": {"rr": {"p": "5/8"}},
      "loss": {"renyi": {"alpha": 2, "eps": 0.3}}}}}],
    "depth": 1
  }
})";

const char kOverBudgetScenario[] = R"({
  "machine": "filt_con",
  "rule": {"rdp_additive": {"alpha": 2}},
  "budget": {"renyi": {"alpha": 2, "eps": 1.0}},
  "dataset": [1],
  "neighbor": [0],
  "seed": 7,
  "adversary": {
    "default": {"spawn": {
      "spec": {"rr": {"p": "5/8"}},
      "loss": {"renyi": {"alpha": 2, "eps": 0.6}}}},
    "depth": 3
  }
})";

const char kConcompScenario[] = R"({
  "machine": "concomp",
  "children": [{"rr": {"p": "3/4"}}],
  "budget": {"renyi": {"alpha": 2, "eps": %EPS%}},
  "dataset": [1],
  "neighbor": [0],
  "seed": 3,
  "adversary": {
    "default": {"sub": {"index": 1, "inner": {"answer": {"payload": "q"}}}},
    "depth": 1
  }
})";

std::string concomp_scenario(const std::string& eps) {
  std::string out = kConcompScenario;
  out.replace(out.find("%EPS%"), 5, eps);
  return out;
}

}  // namespace

TEST_CASE("list mechanisms returns the registered kinds") {
  char* kinds = nullptr;
  REQUIRE(ccdp_list_mechanisms(&kinds) == CCDP_OK);
  std::string text = take(kinds);
  CHECK(text.find("\"rr\"") != std::string::npos);
  CHECK(text.find("\"concomp\"") != std::string::npos);
  CHECK(ccdp_list_mechanisms(nullptr) == CCDP_ERR_INVALID_ARGUMENT);
}

TEST_CASE("message codec round trips through the C surface") {
  const char* msg =
      "{\"sub\":{\"index\":2,\"inner\":{\"answer\":{\"payload\":\"q\"}}}}";
  char* bytes = nullptr;
  size_t len = 0;
  REQUIRE(ccdp_message_encode(msg, &bytes, &len) == CCDP_OK);
  REQUIRE(len > 0);
  char* back = nullptr;
  REQUIRE(ccdp_message_decode(reinterpret_cast<uint8_t*>(bytes), len,
                              &back) == CCDP_OK);
  std::string decoded = take(back);
  CHECK(decoded.find("\"sub\"") != std::string::npos);
  CHECK(decoded.find("\"index\":2") != std::string::npos);
  ccdp_buffer_free(bytes);

  // Garbage decodes to the invalid message, not an error.
  const uint8_t junk[] = {0xff, 0x01, 0x02};
  char* invalid = nullptr;
  REQUIRE(ccdp_message_decode(junk, sizeof(junk), &invalid) == CCDP_OK);
  CHECK(take(invalid).find("\"invalid\"") != std::string::npos);

  char* out = nullptr;
  CHECK(ccdp_message_encode("not json", &out, &len) == CCDP_ERR_PARSE);
  CHECK(std::strlen(ccdp_last_error()) > 0);
  CHECK(ccdp_message_encode(nullptr, &out, &len) ==
        CCDP_ERR_INVALID_ARGUMENT);
}

TEST_CASE("run scenario produces a report and transcript") {
  char* report = nullptr;
  char* transcript = nullptr;
  size_t len = 0;
  REQUIRE(ccdp_run_scenario(kSpawnScenario, &report, &transcript, &len) ==
          CCDP_OK);
  std::string doc = take(report);
  CHECK(doc.find("\"answers\"") != std::string::npos);
  CHECK(doc.find("\"complete\":true") != std::string::npos);
  CHECK(len > 0);
  ccdp_buffer_free(transcript);

  CHECK(ccdp_run_scenario("nope", &report, &transcript, &len) ==
        CCDP_ERR_PARSE);
  CHECK(ccdp_run_scenario(nullptr, &report, &transcript, &len) ==
        CCDP_ERR_INVALID_ARGUMENT);
}

TEST_CASE("budget halts surface as their own status") {
  char* report = nullptr;
  char* transcript = nullptr;
  size_t len = 0;
  REQUIRE(ccdp_run_scenario(kOverBudgetScenario, &report, &transcript,
                            &len) == CCDP_HALT_BUDGET);
  // The report is still produced alongside the status.
  std::string doc = take(report);
  CHECK(doc.find("insufficient budget") != std::string::npos);
  ccdp_buffer_free(transcript);
}

TEST_CASE("run scenarios are reproducible byte for byte") {
  for (int i = 0; i < 2; ++i) {
    char* r1 = nullptr;
    char* t1 = nullptr;
    size_t l1 = 0;
    char* r2 = nullptr;
    char* t2 = nullptr;
    size_t l2 = 0;
    REQUIRE(ccdp_run_scenario(kSpawnScenario, &r1, &t1, &l1) == CCDP_OK);
    REQUIRE(ccdp_run_scenario(kSpawnScenario, &r2, &t2, &l2) == CCDP_OK);
    CHECK(take(r1) == take(r2));
    REQUIRE(l1 == l2);
    CHECK(std::memcmp(t1, t2, l1) == 0);
    ccdp_buffer_free(t1);
    ccdp_buffer_free(t2);
  }
}

TEST_CASE("verify passes generous budgets and rejects tight ones") {
  char* report = nullptr;
  REQUIRE(ccdp_verify(concomp_scenario("0.9").c_str(), 1e-9, &report) ==
          CCDP_OK);
  CHECK(take(report).find("\"pass\":true") != std::string::npos);

  REQUIRE(ccdp_verify(concomp_scenario("0.2").c_str(), 1e-9, &report) ==
          CCDP_CLAIM_REJECTED);
  CHECK(take(report).find("\"pass\":false") != std::string::npos);
}

TEST_CASE("audit statuses reflect the claim check") {
  const char kAuditPass[] = R"({
    "mechanism": {"rr": {"p": "3/4"}},
    "claimed": {"renyi": {"alpha": 2, "eps": 0.85}},
    "dataset": [1], "neighbor": [0]
  })";
  const char kAuditFail[] = R"({
    "mechanism": {"rr": {"p": "3/4"}},
    "claimed": {"renyi": {"alpha": 2, "eps": 0.2}},
    "dataset": [1], "neighbor": [0]
  })";
  char* report = nullptr;
  REQUIRE(ccdp_audit(kAuditPass, 1e-9, &report) == CCDP_OK);
  CHECK(take(report).find("\"pass\":true") != std::string::npos);
  REQUIRE(ccdp_audit(kAuditFail, 1e-9, &report) == CCDP_CLAIM_REJECTED);
  std::string doc = take(report);
  CHECK(doc.find("\"pass\":false") != std::string::npos);
  CHECK(doc.find("\"observed\"") != std::string::npos);
}

TEST_CASE("sessions step the machine interactively") {
  ccdp_session* session = nullptr;
  REQUIRE(ccdp_session_open(concomp_scenario("0.9").c_str(), &session) ==
          CCDP_OK);
  const char* sub =
      "{\"sub\":{\"index\":1,\"inner\":{\"answer\":{\"payload\":\"q\"}}}}";
  char* answer = nullptr;
  REQUIRE(ccdp_session_step(session, sub, &answer) == CCDP_OK);
  CHECK(take(answer).find("\"answer\"") != std::string::npos);
  // The RR child has answered; the same route now reports its halt.
  REQUIRE(ccdp_session_step(session, sub, &answer) == CCDP_OK);
  CHECK(take(answer).find("\"halt\"") != std::string::npos);

  char* bytes = nullptr;
  size_t len = 0;
  REQUIRE(ccdp_session_transcript(session, &bytes, &len) == CCDP_OK);
  CHECK(len > 0);
  ccdp_buffer_free(bytes);
  ccdp_session_close(session);

  CHECK(ccdp_session_open("[]", &session) == CCDP_ERR_PARSE);
  CHECK(ccdp_session_step(nullptr, sub, &answer) ==
        CCDP_ERR_INVALID_ARGUMENT);
  ccdp_session_close(nullptr);
}

TEST_CASE("sessions with one seed agree with each other") {
  for (const char* query :
       {"{\"sub\":{\"index\":1,\"inner\":{\"answer\":{\"payload\":\"q\"}}}}"}) {
    ccdp_session* a = nullptr;
    ccdp_session* b = nullptr;
    REQUIRE(ccdp_session_open(concomp_scenario("0.9").c_str(), &a) == CCDP_OK);
    REQUIRE(ccdp_session_open(concomp_scenario("0.9").c_str(), &b) == CCDP_OK);
    char* ra = nullptr;
    char* rb = nullptr;
    REQUIRE(ccdp_session_step(a, query, &ra) == CCDP_OK);
    REQUIRE(ccdp_session_step(b, query, &rb) == CCDP_OK);
    CHECK(take(ra) == take(rb));
    ccdp_session_close(a);
    ccdp_session_close(b);
  }
}
