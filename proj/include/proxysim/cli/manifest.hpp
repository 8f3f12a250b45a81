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
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "proxysim/core/config.hpp"
#include "proxysim/models/balanced.hpp"
#include "proxysim/models/mini_multiarea.hpp"

namespace proxysim {

enum class ModelKind { Balanced, MiniMultiArea };

std::string_view to_string(ModelKind kind) noexcept;

/// How mini multi-area areas are laid out over ranks.
enum class AreaLayout { RoundRobin, Packed };

struct MiniMultiAreaParams {
  std::uint32_t n_areas = 4;
  std::uint32_t n_exc = 800;
  std::uint32_t n_inh = 200;
  /// Uniform inter-area in-degree, used when `inter_k_matrix` is empty.
  std::uint64_t inter_k = 10;
  std::vector<std::vector<std::uint64_t>> inter_k_matrix;
  std::uint64_t intra_k_exc = 80;
  std::uint64_t intra_k_inh = 20;
  double j_exc_mv = 0.5;
  double g = 6.0;
  double eta = 0.8;
  std::uint32_t intra_delay_steps = 15;
  std::uint32_t inter_delay_steps = 30;
  bool explicit_connectivity = false;
  AreaLayout layout = AreaLayout::RoundRobin;

  [[nodiscard]] MiniMultiAreaSpec to_spec() const;
};

/// Declarative description of a batch of runs. Every (seed, comm mode,
/// optimization level) combination is one run.
struct RunManifest {
  ModelKind model = ModelKind::Balanced;
  SimConfig config;  // comm_mode, opt_level and seed are taken from the lists below
  std::vector<CommMode> comm_modes{CommMode::PointToPoint};
  std::vector<int> opt_levels{kDefaultOptLevel};
  std::vector<std::uint64_t> seeds;
  double warmup_ms = 500.0;
  double model_ms = 1000.0;
  bool record_raster = false;
  std::string output_dir;
  LifParams neuron;  // shared by both models
  BalancedNetSpec balanced = BalancedNetSpec::desk(1);
  MiniMultiAreaParams mini;

  [[nodiscard]] std::size_t run_count() const noexcept {
    return seeds.size() * comm_modes.size() * opt_levels.size();
  }
  /// Config of one run.
  [[nodiscard]] SimConfig run_config(std::uint64_t seed, CommMode mode, int level) const;
};

/// Every problem with the document, in one pass. Empty means valid.
std::vector<std::string> manifest_errors(const nlohmann::json& doc);

/// Throws InvalidArgument listing every problem.
RunManifest parse_manifest(const nlohmann::json& doc);
RunManifest load_manifest(const std::string& path);

/// Canonical form with every field present; parse_manifest reads it back unchanged.
nlohmann::ordered_json serialize_manifest(const RunManifest& manifest);

}  // namespace proxysim
