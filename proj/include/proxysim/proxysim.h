/*
 * Copyright 2026 The proxysim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef PROXYSIM_PROXYSIM_H_
#define PROXYSIM_PROXYSIM_H_

#include <stdint.h>

#if defined(_WIN32)
#define PSIM_API __declspec(dllexport)
#else
#define PSIM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values 1..8 match proxysim::ErrorCode. */
typedef enum psim_status {
  PSIM_OK = 0,
  PSIM_ERR_INVALID_ARGUMENT = 1,
  PSIM_ERR_OUT_OF_RANGE = 2,
  PSIM_ERR_ACCOUNTING = 3,
  PSIM_ERR_PROTOCOL = 4,
  PSIM_ERR_CONSISTENCY = 5,
  PSIM_ERR_STATE = 6,
  PSIM_ERR_PARSE = 7,
  PSIM_ERR_IO = 8,
  /* Runs completed but an in-run invariant check failed. */
  PSIM_ERR_CHECK_FAILED = 9,
  PSIM_ERR_INTERNAL = 99
} psim_status;

typedef struct psim_manifest psim_manifest;
typedef struct psim_run psim_run;

PSIM_API const char* psim_version(void);
PSIM_API const char* psim_status_string(psim_status status);
/* Message of the last failed call on this thread; "" if none. */
PSIM_API const char* psim_last_error(void);
/* Frees strings returned through char** out-parameters. */
PSIM_API void psim_string_free(char* text);

PSIM_API psim_status psim_manifest_load(const char* path, psim_manifest** out);
PSIM_API psim_status psim_manifest_parse(const char* json_text, psim_manifest** out);
/* Canonical JSON form of the manifest. */
PSIM_API psim_status psim_manifest_to_json(const psim_manifest* manifest, char** out);
PSIM_API void psim_manifest_destroy(psim_manifest* manifest);

/* Builds, prepares and simulates one run. comm_mode is "p2p" or "collective". */
PSIM_API psim_status psim_run_execute(const psim_manifest* manifest, uint64_t seed,
                                      const char* comm_mode, int opt_level, psim_run** out);
PSIM_API psim_status psim_run_report_json(const psim_run* run, char** out);
PSIM_API psim_status psim_run_raster_hash(const psim_run* run, uint64_t* out);
PSIM_API psim_status psim_run_write_raster(const psim_run* run, const char* path);
PSIM_API void psim_run_destroy(psim_run* run);

/* All runs of the manifest. out_dir may be NULL to use the manifest's own.
 * summary (optional) receives a one-line-per-run text summary. */
PSIM_API psim_status psim_benchmark(const psim_manifest* manifest, const char* out_dir,
                                    char** summary);
/* Sets *compatible to 1 if every population and statistic is compatible.
 * verdict_json (optional) receives the comparison document. */
PSIM_API psim_status psim_validate(const psim_manifest* a, const psim_manifest* b,
                                   const char* out_dir, int* compatible, char** verdict_json);
/* Writes the assignment JSON to out_path; balance_report (optional) receives
 * `bin,weight` lines. */
PSIM_API psim_status psim_pack(const char* csv_path, int32_t bins, const char* out_path,
                               char** balance_report);

#ifdef __cplusplus
}
#endif

#endif /* PROXYSIM_PROXYSIM_H_ */
