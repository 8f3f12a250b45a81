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
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "proxysim/cli/manifest.hpp"
#include "proxysim/construction/network.hpp"
#include "proxysim/core/timing.hpp"
#include "proxysim/dynamics/spike_record.hpp"
#include "proxysim/engine/report.hpp"
#include "proxysim/models/packing.hpp"
#include "proxysim/stats/stats.hpp"

namespace proxysim {

/// Builds the manifest's model on `network` and returns its populations by gid.
std::vector<PopulationRaster> build_model(Network& network, const RunManifest& manifest);

struct RunResult {
  RunReport report;
  SpikeRecord raster;
  std::vector<PopulationRaster> populations;
  TimeWindow window;
  /// In-run invariant violations; empty for a clean run.
  std::vector<std::string> failures;
};

/// Construct, prepare and simulate one (seed, mode, level) combination.
RunResult execute_run(const RunManifest& manifest, std::uint64_t seed, CommMode mode, int level,
                      Clock clock = steady_seconds);

struct BenchmarkResult {
  std::vector<RunReport> reports;
  std::vector<std::string> failures;
  [[nodiscard]] bool ok() const noexcept { return failures.empty(); }
};

/// Every run of the manifest. Writes one JSON report per run, summary.csv and,
/// if requested, one raster per run into `out_dir` (the manifest's output_dir
/// when empty). Raster hashes must agree across modes and levels of a seed.
BenchmarkResult run_benchmark(const RunManifest& manifest, const std::string& out_dir);

/// Seeds for the A' set: one per input seed, avoiding every seed in `avoid`.
std::vector<std::uint64_t> derive_seeds(std::span<const std::uint64_t> seeds,
                                        std::span<const std::uint64_t> avoid);

struct ValidateResult {
  EmdComparison comparison;
  std::vector<std::uint64_t> seeds_a;
  std::vector<std::uint64_t> seeds_a_prime;
  std::vector<std::uint64_t> seeds_b;
  std::vector<std::string> failures;
  [[nodiscard]] bool ok() const noexcept { return failures.empty(); }
};

/// Runs sets A (a's seeds), A' (derived seeds, a's code path) and B (b's
/// seeds and code path) and compares their statistics. Writes
/// comparison.json and one statistics CSV per set into `out_dir`.
ValidateResult run_validate(const RunManifest& a, const RunManifest& b, const std::string& out_dir);

struct PackResult {
  PackingAssignment assignment;
  /// `bin,weight` lines.
  std::string balance_report;
};

/// Reads the area CSV, packs it and writes the `{area_id: bin}` JSON to `out_path`.
PackResult run_pack(const std::string& csv_path, std::uint32_t bins, const std::string& out_path);

}  // namespace proxysim
