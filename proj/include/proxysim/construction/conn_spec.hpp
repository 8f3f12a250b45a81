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
#include <functional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "proxysim/core/ids.hpp"
#include "proxysim/core/rng.hpp"

namespace proxysim {

enum class ConnRule { OneToOne, AllToAll, FixedIndegree, FixedOutdegree, FixedTotal, AssignedNodes };

std::string_view to_string(ConnRule rule) noexcept;

/// Connection rule. For AssignedNodes the caller's source and target arrays
/// are read pairwise: connection i runs from sources[i] to targets[i].
struct ConnSpec {
  ConnRule rule = ConnRule::AllToAll;
  std::uint64_t degree = 0;  // K_in, K_out or total count, depending on the rule
  bool allow_autapses = true;
  bool allow_multapses = true;

  static ConnSpec one_to_one() { return {ConnRule::OneToOne}; }
  static ConnSpec all_to_all() { return {ConnRule::AllToAll}; }
  static ConnSpec fixed_indegree(std::uint64_t k) { return {ConnRule::FixedIndegree, k}; }
  static ConnSpec fixed_outdegree(std::uint64_t k) { return {ConnRule::FixedOutdegree, k}; }
  static ConnSpec fixed_total(std::uint64_t n) { return {ConnRule::FixedTotal, n}; }
  static ConnSpec assigned_nodes() { return {ConnRule::AssignedNodes}; }

  /// Throws InvalidArgument for non-positive degrees or impossible settings.
  void validate(std::size_t n_source, std::size_t n_target) const;
  /// True for rules that draw source positions at random.
  [[nodiscard]] bool draws_sources() const noexcept {
    return rule == ConnRule::FixedIndegree || rule == ConnRule::FixedTotal;
  }
};

/// Number of connections a rule creates before any autapse filtering.
std::uint64_t expected_connection_count(const ConnSpec& conn, std::size_t n_source,
                                        std::size_t n_target) noexcept;

/// A real-valued synaptic parameter: constant, normal or uniform.
struct ParamDist {
  enum class Kind { Constant, Normal, Uniform } kind = Kind::Constant;
  double a = 0.0;  // value, mean or low
  double b = 0.0;  // -, stddev or high

  static ParamDist constant(double v) { return {Kind::Constant, v, 0.0}; }
  static ParamDist normal(double mean, double sd) { return {Kind::Normal, mean, sd}; }
  static ParamDist uniform(double lo, double hi) { return {Kind::Uniform, lo, hi}; }
  double draw(RngStream& rng) const noexcept;
};

/// Synapse parameters. Delays are in time steps; a uniform delay draws an
/// integer in [delay_min, delay_max]. Explicit per-connection arrays, when
/// non-empty, take precedence and must match the connection count.
struct SynSpec {
  ParamDist weight = ParamDist::constant(1.0);
  std::uint32_t delay_min = 1;
  std::uint32_t delay_max = 1;
  std::vector<double> weights;
  std::vector<std::uint32_t> delays;

  static SynSpec fixed(double w, std::uint32_t delay_steps) {
    SynSpec s;
    s.weight = ParamDist::constant(w);
    s.delay_min = s.delay_max = delay_steps;
    return s;
  }
  void validate() const;
};

/// One connection in call-local coordinates: positions into the caller's
/// source and target arrays.
struct PositionPair {
  std::uint32_t source = 0;
  std::uint32_t target = 0;
  friend bool operator==(const PositionPair&, const PositionPair&) = default;
};

/// Returns true for a (source position, target position) pair that must not
/// be created, e.g. an autapse in a local connect.
using PairFilter = std::function<bool(std::uint32_t, std::uint32_t)>;

/// Source positions of a random rule, drawn from `source_rng` in the order in
/// which expand_rule consumes them. This is all the source-rank variant of a
/// remote connect needs to reproduce the target rank's choice of sources.
std::vector<std::uint32_t> draw_source_positions(const ConnSpec& conn, std::size_t n_source,
                                                 std::size_t n_target, RngStream& source_rng,
                                                 const PairFilter& forbidden = {});

/// Expands a non-assigned rule into position pairs. Source positions come from
/// `source_rng` (shared with the source rank), target positions from
/// `target_rng` (target rank only).
std::vector<PositionPair> expand_rule(const ConnSpec& conn, std::size_t n_source,
                                      std::size_t n_target, RngStream& source_rng,
                                      RngStream& target_rng, const PairFilter& forbidden = {});

/// Normalized form of an assigned-nodes batch: unique ascending sources and
/// position pairs into them, in the caller's pair order.
struct AssignedBatch {
  std::vector<NodeIndex> sources;
  std::vector<PositionPair> pairs;
};
AssignedBatch normalize_assigned(std::span<const NodeIndex> sources,
                                 std::span<const NodeIndex> targets);

}  // namespace proxysim
