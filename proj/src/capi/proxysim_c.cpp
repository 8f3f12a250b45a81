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
#include "proxysim/proxysim.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <string>

#include <fmt/format.h>
#include <json.hpp>

#include "proxysim/cli/commands.hpp"
#include "proxysim/cli/manifest.hpp"
#include "proxysim/core/errors.hpp"

struct psim_manifest {
  proxysim::RunManifest manifest;
};

struct psim_run {
  proxysim::RunResult result;
  double resolution_ms = 0.1;
};

namespace {

thread_local std::string g_last_error;

psim_status fail(psim_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

/// Runs `f`, translating exceptions into status codes.
template <class F>
psim_status guarded(F&& f) {
  try {
    g_last_error.clear();
    return f();
  } catch (const proxysim::Error& e) {
    return fail(static_cast<psim_status>(static_cast<int>(e.code())), e.what());
  } catch (const std::bad_alloc&) {
    return fail(PSIM_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(PSIM_ERR_INTERNAL, e.what());
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

psim_status null_arg(const char* name) {
  return fail(PSIM_ERR_INVALID_ARGUMENT, fmt::format("{} must not be null", name));
}

std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (const std::string& l : lines) out += l + "\n";
  return out;
}

}  // namespace

extern "C" {

const char* psim_version(void) { return "0.1.0"; }

const char* psim_status_string(psim_status status) {
  switch (status) {
    case PSIM_OK: return "ok";
    case PSIM_ERR_INVALID_ARGUMENT: return "invalid argument";
    case PSIM_ERR_OUT_OF_RANGE: return "out of range";
    case PSIM_ERR_ACCOUNTING: return "memory accounting error";
    case PSIM_ERR_PROTOCOL: return "transport protocol error";
    case PSIM_ERR_CONSISTENCY: return "consistency error";
    case PSIM_ERR_STATE: return "invalid state";
    case PSIM_ERR_PARSE: return "parse error";
    case PSIM_ERR_IO: return "i/o error";
    case PSIM_ERR_CHECK_FAILED: return "invariant check failed";
    case PSIM_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* psim_last_error(void) { return g_last_error.c_str(); }

void psim_string_free(char* text) { std::free(text); }

psim_status psim_manifest_load(const char* path, psim_manifest** out) {
  if (path == nullptr) return null_arg("path");
  if (out == nullptr) return null_arg("out");
  return guarded([&] {
    *out = new psim_manifest{proxysim::load_manifest(path)};
    return PSIM_OK;
  });
}

psim_status psim_manifest_parse(const char* json_text, psim_manifest** out) {
  if (json_text == nullptr) return null_arg("json_text");
  if (out == nullptr) return null_arg("out");
  return guarded([&] {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
      throw proxysim::ParseError(e.what());
    }
    *out = new psim_manifest{proxysim::parse_manifest(doc)};
    return PSIM_OK;
  });
}

psim_status psim_manifest_to_json(const psim_manifest* manifest, char** out) {
  if (manifest == nullptr) return null_arg("manifest");
  if (out == nullptr) return null_arg("out");
  return guarded([&] {
    *out = dup_string(proxysim::serialize_manifest(manifest->manifest).dump(2));
    return PSIM_OK;
  });
}

void psim_manifest_destroy(psim_manifest* manifest) { delete manifest; }

psim_status psim_run_execute(const psim_manifest* manifest, uint64_t seed, const char* comm_mode,
                             int opt_level, psim_run** out) {
  if (manifest == nullptr) return null_arg("manifest");
  if (comm_mode == nullptr) return null_arg("comm_mode");
  if (out == nullptr) return null_arg("out");
  return guarded([&] {
    const auto mode = proxysim::parse_comm_mode(comm_mode);
    if (!mode) throw proxysim::InvalidArgument(fmt::format("unknown comm mode '{}'", comm_mode));
    auto run = std::make_unique<psim_run>();
    run->result = proxysim::execute_run(manifest->manifest, seed, *mode, opt_level);
    run->resolution_ms = manifest->manifest.config.resolution_ms;
    const bool clean = run->result.failures.empty();
    const std::string failures = join_lines(run->result.failures);
    *out = run.release();
    return clean ? PSIM_OK : fail(PSIM_ERR_CHECK_FAILED, failures);
  });
}

psim_status psim_run_report_json(const psim_run* run, char** out) {
  if (run == nullptr) return null_arg("run");
  if (out == nullptr) return null_arg("out");
  return guarded([&] {
    *out = dup_string(proxysim::to_json(run->result.report).dump(2));
    return PSIM_OK;
  });
}

psim_status psim_run_raster_hash(const psim_run* run, uint64_t* out) {
  if (run == nullptr) return null_arg("run");
  if (out == nullptr) return null_arg("out");
  *out = run->result.report.raster_hash;
  return PSIM_OK;
}

psim_status psim_run_write_raster(const psim_run* run, const char* path) {
  if (run == nullptr) return null_arg("run");
  if (path == nullptr) return null_arg("path");
  return guarded([&] {
    std::ofstream out(path);
    if (!out) throw proxysim::IoError(fmt::format("cannot write '{}'", path));
    run->result.raster.write_tsv(out, run->resolution_ms);
    return PSIM_OK;
  });
}

void psim_run_destroy(psim_run* run) { delete run; }

psim_status psim_benchmark(const psim_manifest* manifest, const char* out_dir, char** summary) {
  if (manifest == nullptr) return null_arg("manifest");
  return guarded([&] {
    const auto result =
        proxysim::run_benchmark(manifest->manifest, out_dir == nullptr ? "" : out_dir);
    if (summary != nullptr) {
      std::string text;
      for (const proxysim::RunReport& r : result.reports) {
        text += fmt::format("seed {} {} o{}: {} neurons, {} spikes, hash {:016x}, rtf {:.3g}\n",
                            r.seed, r.comm_mode, r.opt_level, r.neurons, r.spike_count,
                            r.raster_hash, r.rtf);
      }
      *summary = dup_string(text);
    }
    return result.ok() ? PSIM_OK : fail(PSIM_ERR_CHECK_FAILED, join_lines(result.failures));
  });
}

psim_status psim_validate(const psim_manifest* a, const psim_manifest* b, const char* out_dir,
                          int* compatible, char** verdict_json) {
  if (a == nullptr) return null_arg("a");
  if (b == nullptr) return null_arg("b");
  return guarded([&] {
    const auto result =
        proxysim::run_validate(a->manifest, b->manifest, out_dir == nullptr ? "" : out_dir);
    if (compatible != nullptr) *compatible = result.comparison.all_compatible() ? 1 : 0;
    if (verdict_json != nullptr) *verdict_json = dup_string(result.comparison.to_json().dump(2));
    return result.ok() ? PSIM_OK : fail(PSIM_ERR_CHECK_FAILED, join_lines(result.failures));
  });
}

psim_status psim_pack(const char* csv_path, int32_t bins, const char* out_path,
                      char** balance_report) {
  if (csv_path == nullptr) return null_arg("csv_path");
  if (out_path == nullptr) return null_arg("out_path");
  if (bins <= 0) return fail(PSIM_ERR_INVALID_ARGUMENT, "number of bins must be positive");
  return guarded([&] {
    const auto result = proxysim::run_pack(csv_path, static_cast<std::uint32_t>(bins), out_path);
    if (balance_report != nullptr) *balance_report = dup_string(result.balance_report);
    return PSIM_OK;
  });
}

}  // extern "C"
