// Copyright 2026 The Apportion Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/* C interface to the apportionment library. Every function returns an
 * ap_status; on failure ap_last_error() describes the problem for the
 * calling thread. Strings returned through char** are owned by the caller
 * and released with ap_string_free. Rationals cross the boundary as
 * strings of the form "p/q" or "p". */
#ifndef APPORTION_APPORTION_H_
#define APPORTION_APPORTION_H_

#include <stddef.h>
#include <stdint.h>

#if defined(APPORTION_BUILDING)
#define AP_API __attribute__((visibility("default")))
#else
#define AP_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ap_status {
  AP_OK = 0,
  AP_ERR_INVALID_ARGUMENT = 1,
  AP_ERR_PARSE = 2,
  AP_ERR_INVALID_INSTANCE = 3,
  AP_ERR_DOMAIN = 4,
  AP_ERR_INFEASIBLE = 5,
  AP_ERR_REJECTED = 6,
  AP_ERR_TIMEOUT = 7,
  AP_ERR_INTERNAL = 99
} ap_status;

typedef struct ap_instance ap_instance;
typedef struct ap_trajectory ap_trajectory;
typedef struct ap_netflow ap_netflow;

AP_API const char* ap_version(void);
AP_API const char* ap_last_error(void);
AP_API const char* ap_status_name(ap_status status);
AP_API void ap_string_free(char* s);

/* Instances: {"n": <int>, "votes": [["p/q", ...], ...]}. Parsing checks the
 * shape only; ap_instance_validate reports range and house violations. */
AP_API ap_status ap_instance_from_json(const char* json, ap_instance** out);
AP_API ap_status ap_instance_to_json(const ap_instance* inst, char** out);
AP_API ap_status ap_instance_validate(const ap_instance* inst, int* ok,
                                      char** violations_json);
AP_API ap_status ap_instance_digest(const ap_instance* inst, char** out);
AP_API size_t ap_instance_parties(const ap_instance* inst);
AP_API size_t ap_instance_steps(const ap_instance* inst);
AP_API void ap_instance_free(ap_instance* inst);

/* Runs an online method over an instance. Methods: greedy, lowest-index,
 * random-feasible, min-max, grimmett, netflow. Randomised methods draw from
 * the stream identified by (seed, trial). */
AP_API ap_status ap_simulate(const ap_instance* inst, const char* method,
                             uint64_t seed, uint64_t trial, ap_trajectory** out);

/* CSV with header t,i,v,V,a,A,s (plus s_float when float_report != 0). */
AP_API ap_status ap_trajectory_csv(const ap_trajectory* traj, int float_report,
                                   char** out);
AP_API ap_status ap_trajectory_instance_json(const ap_trajectory* traj,
                                             char** out);
AP_API ap_status ap_trajectory_max_deviation(const ap_trajectory* traj,
                                             char** out);
AP_API ap_status ap_trajectory_global_quota(const ap_trajectory* traj, int* ok);
/* {"steps", "parties", "final_A", "max_deviation", "global_quota",
 *  "first_violation"} */
AP_API ap_status ap_trajectory_summary_json(const ap_trajectory* traj,
                                            char** out);
/* Seats of party i at step t (1-based); -1 when out of range. */
AP_API int ap_trajectory_seat(const ap_trajectory* traj, size_t t, size_t i);
AP_API void ap_trajectory_free(ap_trajectory* traj);

/* Audits a trajectory CSV. alpha may be NULL. passed is set to 1 iff the
 * trajectory is consistent, locally feasible, within alpha when given and
 * within global quota when require_global_quota != 0. */
AP_API ap_status ap_verify_csv(const char* csv, const char* alpha,
                               int require_global_quota, char** report_json,
                               int* passed);

/* Network flow method unrolled over an instance. Creation succeeds even if
 * some step admits no flow; ap_netflow_complete then returns 0 and
 * ap_netflow_witness_json describes the obstruction. */
AP_API ap_status ap_netflow_create(const ap_instance* inst, ap_netflow** out);
AP_API int ap_netflow_complete(const ap_netflow* nf);
AP_API ap_status ap_netflow_state_json(const ap_netflow* nf, char** out);
AP_API ap_status ap_netflow_witness_json(const ap_netflow* nf, char** out);
/* [[marginal per party] per step], exact. */
AP_API ap_status ap_netflow_marginals_json(const ap_netflow* nf, char** out);
AP_API ap_status ap_netflow_sample(const ap_netflow* nf, uint64_t seed,
                                   uint64_t trial, ap_trajectory** out);
AP_API void ap_netflow_free(ap_netflow* nf);

/* Adaptive adversary on n parties. schedule is "auto" (booster with the
 * given epsilon) or "figure3" (fixed splitter schedule, n = 3 or 4).
 * max_steps = 0 uses the default cap. result_json holds the transcript,
 * the achieved deviation and the witness party; traj receives the
 * generated trajectory (may be NULL). */
AP_API ap_status ap_adversary_run(size_t n, const char* epsilon,
                                  const char* target_method,
                                  const char* schedule, uint64_t seed,
                                  uint64_t max_steps, ap_trajectory** traj,
                                  char** result_json);

/* [{"weight", "sets"}] */
AP_API ap_status ap_offline_lottery_json(const ap_instance* inst, char** out);

/* vector is a comma separated list of rationals. Result:
 * [{"weight", "set"}]. */
AP_API ap_status ap_decompose_vector_json(const char* vector, int64_t house,
                                          char** out);
/* Feasible flow of the given value; when bounds are integral, also its
 * decomposition into integral flows. Infeasibility is reported in the
 * result with a cut, and the status is AP_ERR_INFEASIBLE. */
AP_API ap_status ap_decompose_network_json(const char* network_json,
                                           const char* value, char** out);

/* mode is "near-feasible" or "min-cost". samples >= 1 draws that many
 * roundings in min-cost mode and reports their statistics. */
AP_API ap_status ap_mmhsc_round_json(const char* instance_json,
                                     const char* mode, uint64_t seed,
                                     uint64_t samples, char** out);

#ifdef __cplusplus
}
#endif

#endif /* APPORTION_APPORTION_H_ */
