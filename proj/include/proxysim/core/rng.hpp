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

#include <array>
#include <cstdint>
#include <limits>

#include "proxysim/core/ids.hpp"

namespace proxysim {

/// Philox4x32-10 block function (Salmon et al., SC'11).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) noexcept;

/// SplitMix64 finalizer; used to fold stream descriptors into 64-bit ids.
std::uint64_t mix64(std::uint64_t x) noexcept;

enum class StreamPurpose : std::uint32_t {
  SourcePair = 1,   // aligned RNG(sigma, tau) for source positions of remote connections
  LocalConnect,     // per-rank draws for local rules and target-side choices
  SynapseParams,    // weight and delay distributions
  DistributedRule,  // triplet generation of the distributed fixed in-degree rule
  NeuronInit,       // initial membrane potentials, keyed by gid
  Poisson,          // external drive, keyed by gid
  StatsSubset,      // neuron subset for correlation statistics
  Model,            // model-level explicit connectivity
};

struct StreamId {
  std::uint64_t value = 0;

  static StreamId pair(Rank source, Rank target) noexcept;
  static StreamId tagged(StreamPurpose purpose, std::uint64_t a, std::uint64_t b = 0) noexcept;

  friend bool operator==(StreamId, StreamId) = default;
};

/// Counter-based stream keyed by (seed, stream id). Two instances built from
/// the same pair yield identical sequences wherever they live; distinct ids
/// occupy disjoint counter ranges and share no state. Substreams partition a
/// stream further so that, e.g., each RemoteConnect call draws from a fresh
/// position without either side having to replay the other's draws.
class RngStream {
 public:
  using result_type = std::uint64_t;

  struct State {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    std::uint32_t substream = 0;
    std::uint32_t block = 0;
    std::uint32_t lane = 4;  // next unread word of the current block; 4 = exhausted
    bool has_spare_normal = false;
    double spare_normal = 0.0;
    friend bool operator==(const State&, const State&) = default;
  };

  RngStream() = default;
  RngStream(std::uint64_t seed, StreamId id, std::uint32_t substream = 0) noexcept;
  explicit RngStream(const State& state) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }
  result_type operator()() noexcept { return next_u64(); }

  std::uint32_t next_u32() noexcept;
  std::uint64_t next_u64() noexcept;
  /// Uniform in [0, 1) with 53 bits of resolution.
  double uniform() noexcept;
  /// Unbiased uniform integer in [0, n); n must be positive.
  std::uint64_t uniform_index(std::uint64_t n) noexcept;
  double normal(double mean, double stddev) noexcept;
  std::uint64_t poisson(double mean) noexcept;

  /// Repositions at the start of substream k; resets any buffered output.
  void select_substream(std::uint32_t k) noexcept;

  [[nodiscard]] State state() const noexcept;
  [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
  [[nodiscard]] StreamId id() const noexcept { return StreamId{stream_}; }

 private:
  void refill() noexcept;

  std::uint64_t seed_ = 0;
  std::uint64_t stream_ = 0;
  std::uint32_t substream_ = 0;
  std::uint32_t block_ = 0;
  std::uint32_t lane_ = 4;
  std::array<std::uint32_t, 4> words_{};
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

}  // namespace proxysim
