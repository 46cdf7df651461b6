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

#include <cstdlib>
#include <cstring>
#include <string>

#include "json.hpp"
#include "scenario.hpp"

namespace {

using nlohmann::json;

thread_local std::string g_last_error;

char* copy_out(const std::string& s, size_t* len = nullptr) {
  char* buf = static_cast<char*>(std::malloc(s.size() + 1));
  if (!buf) return nullptr;
  std::memcpy(buf, s.data(), s.size());
  buf[s.size()] = '\0';
  if (len) *len = s.size();
  return buf;
}

ccdp_status fail(ccdp_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Translates C++ failures into stable status codes.
template <typename Fn>
ccdp_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const ccdp::InvalidParameterError& e) {
    return fail(CCDP_ERR_PARSE, e.what());
  } catch (const ccdp::MalformedMessageError& e) {
    return fail(CCDP_ERR_PARSE, e.what());
  } catch (const ccdp::IncomparableTagsError& e) {
    return fail(CCDP_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return fail(CCDP_ERR_INTERNAL, e.what());
  }
}

}  // namespace

struct ccdp_session {
  ccdp::MechanismPtr machine;
  std::string state;
  ccdp::CoinStream coins{0};
  ccdp::ViewTranscript view;
  std::uint64_t round = 0;
};

extern "C" {

void ccdp_buffer_free(char* buf) { std::free(buf); }

const char* ccdp_last_error(void) { return g_last_error.c_str(); }

ccdp_status ccdp_run_scenario(const char* scenario_json, char** report_json,
                              char** transcript, size_t* transcript_len) {
  if (!scenario_json || !report_json || !transcript || !transcript_len) {
    return fail(CCDP_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&]() -> ccdp_status {
    ccdp::CommandResult r = ccdp::run_scenario(scenario_json);
    *report_json = copy_out(r.report_json);
    *transcript = copy_out(r.transcript, transcript_len);
    if (r.exit_code == 2) {
      return fail(CCDP_HALT_BUDGET, "machine halted on budget grounds");
    }
    return CCDP_OK;
  });
}

ccdp_status ccdp_audit(const char* audit_json, double tol,
                       char** report_json) {
  if (!audit_json || !report_json) {
    return fail(CCDP_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&]() -> ccdp_status {
    ccdp::CommandResult r = ccdp::run_audit(audit_json, tol);
    *report_json = copy_out(r.report_json);
    if (r.exit_code == 3) {
      return fail(CCDP_CLAIM_REJECTED, "claimed loss violated");
    }
    return CCDP_OK;
  });
}

ccdp_status ccdp_verify(const char* scenario_json, double tol,
                        char** report_json) {
  if (!scenario_json || !report_json) {
    return fail(CCDP_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&]() -> ccdp_status {
    ccdp::CommandResult r = ccdp::run_verify(scenario_json, tol);
    *report_json = copy_out(r.report_json);
    if (r.exit_code == 3) {
      return fail(CCDP_CLAIM_REJECTED, "budget violated");
    }
    return CCDP_OK;
  });
}

ccdp_status ccdp_list_mechanisms(char** kinds_json) {
  if (!kinds_json) return fail(CCDP_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&]() -> ccdp_status {
    json out = json::array();
    for (const auto& k : ccdp::known_mechanism_kinds()) out.push_back(k);
    *kinds_json = copy_out(out.dump());
    return CCDP_OK;
  });
}

ccdp_status ccdp_message_encode(const char* message_json, char** bytes,
                                size_t* len) {
  if (!message_json || !bytes || !len) {
    return fail(CCDP_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&]() -> ccdp_status {
    ccdp::Message m = ccdp::message_from_json(message_json);
    *bytes = copy_out(ccdp::encode_message(m), len);
    return CCDP_OK;
  });
}

ccdp_status ccdp_message_decode(const uint8_t* bytes, size_t len,
                                char** message_json) {
  if ((!bytes && len > 0) || !message_json) {
    return fail(CCDP_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&]() -> ccdp_status {
    std::string raw(reinterpret_cast<const char*>(bytes), len);
    ccdp::Message m = ccdp::decode_message(raw);
    *message_json = copy_out(ccdp::message_to_json(m));
    return CCDP_OK;
  });
}

ccdp_status ccdp_session_open(const char* scenario_json, ccdp_session** out) {
  if (!scenario_json || !out) {
    return fail(CCDP_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&]() -> ccdp_status {
    json sc = json::parse(scenario_json, nullptr, false);
    if (sc.is_discarded() || !sc.is_object()) {
      return fail(CCDP_ERR_PARSE, "scenario is not a JSON object");
    }
    auto session = new ccdp_session;
    session->machine = ccdp::machine_from_scenario(scenario_json);
    ccdp::Dataset dataset;
    for (const auto& e : sc.at("dataset")) {
      dataset.elements.push_back(e.get<int>());
    }
    session->coins = ccdp::CoinStream(sc.value("seed", 0ULL));
    session->state = session->machine->init(dataset);
    *out = session;
    return CCDP_OK;
  });
}

ccdp_status ccdp_session_step(ccdp_session* session, const char* query_json,
                              char** answer_json) {
  if (!session || !query_json || !answer_json) {
    return fail(CCDP_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&]() -> ccdp_status {
    ccdp::Message query = ccdp::message_from_json(query_json);
    session->view.push_coin();
    auto branches = session->machine->step(session->state, query);
    const ccdp::Branch& b =
        ccdp::sample_branch(branches, session->coins, session->round++);
    session->state = b.state;
    session->view.push_answer(b.answer);
    *answer_json = copy_out(ccdp::message_to_json(b.answer));
    return CCDP_OK;
  });
}

ccdp_status ccdp_session_transcript(ccdp_session* session, char** bytes,
                                    size_t* len) {
  if (!session || !bytes || !len) {
    return fail(CCDP_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&]() -> ccdp_status {
    *bytes = copy_out(session->view.serialize(), len);
    return CCDP_OK;
  });
}

void ccdp_session_close(ccdp_session* session) { delete session; }

}  // extern "C"
