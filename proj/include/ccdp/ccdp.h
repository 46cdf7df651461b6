/* Copyright 2026 the ccdp authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the composition-accounting engine. All inputs and outputs
 * are JSON documents except raw transcript/message byte buffers. Output
 * buffers are allocated by the library and must be released with
 * ccdp_buffer_free. On any non-OK status, ccdp_last_error() describes the
 * failure for the calling thread. */

#ifndef CCDP_CCDP_H_
#define CCDP_CCDP_H_

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ccdp_status {
  CCDP_OK = 0,
  CCDP_ERR_PARSE = 1,       /* malformed scenario/spec/message JSON */
  CCDP_HALT_BUDGET = 2,     /* run ended in a budget or mechanism-limit halt */
  CCDP_CLAIM_REJECTED = 3,  /* audit/verify found a violated claim */
  CCDP_ERR_INVALID_ARGUMENT = 4,
  CCDP_ERR_INTERNAL = 5
} ccdp_status;

void ccdp_buffer_free(char* buf);

/* Message for the most recent non-OK status on this thread. */
const char* ccdp_last_error(void);

/* Runs a scenario document. *report_json receives the budget report;
 * *transcript receives the canonical transcript bytes of length
 * *transcript_len. Returns CCDP_HALT_BUDGET when the machine halted on
 * budget grounds (the report and transcript are still produced). */
ccdp_status ccdp_run_scenario(const char* scenario_json, char** report_json,
                              char** transcript, size_t* transcript_len);

/* Brute-force audit of a mechanism spec against a claimed loss. Returns
 * CCDP_CLAIM_REJECTED on a failed claim, with the report still produced. */
ccdp_status ccdp_audit(const char* audit_json, double tol,
                       char** report_json);

/* Enumerates the scenario's composed views on dataset and neighbor and
 * checks the divergence against the scenario budget. */
ccdp_status ccdp_verify(const char* scenario_json, double tol,
                        char** report_json);

/* JSON array of registered mechanism spec kinds. */
ccdp_status ccdp_list_mechanisms(char** kinds_json);

/* Canonical wire codec for protocol messages (JSON form <-> bytes).
 * Decoding is total: unknown or malformed bytes decode to {"invalid":{}}. */
ccdp_status ccdp_message_encode(const char* message_json, char** bytes,
                                size_t* len);
ccdp_status ccdp_message_decode(const uint8_t* bytes, size_t len,
                                char** message_json);

/* Interactive session over a scenario's machine, dataset, and seed. A
 * session is strictly serial: it may move between threads but must never be
 * stepped concurrently. */
typedef struct ccdp_session ccdp_session;

ccdp_status ccdp_session_open(const char* scenario_json, ccdp_session** out);

/* Sends one query (JSON message form); *answer_json receives the answer. */
ccdp_status ccdp_session_step(ccdp_session* session, const char* query_json,
                              char** answer_json);

/* Canonical bytes of the transcript so far. */
ccdp_status ccdp_session_transcript(ccdp_session* session, char** bytes,
                                    size_t* len);

void ccdp_session_close(ccdp_session* session);

#ifdef __cplusplus
}
#endif

#endif /* CCDP_CCDP_H_ */
