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
#include <string_view>
#include <utility>
#include <vector>

#include "proxysim/core/ids.hpp"

namespace proxysim {

/// One spike reference on the wire: a map position and how many spikes it stands for.
struct SpikeEntry {
  std::uint32_t position = 0;
  std::uint32_t multiplicity = 1;
  friend bool operator==(const SpikeEntry&, const SpikeEntry&) = default;
};
using Payload = std::vector<SpikeEntry>;

/// Declared on-wire size of one entry.
inline constexpr std::uint64_t kEntryWireBytes = 8;

/// Point-to-point packet; positions index the receiver's (R, L) map for src_rank.
struct SpikePacket {
  Rank src_rank = 0;
  Payload payload;
  friend bool operator==(const SpikePacket&, const SpikePacket&) = default;
};

/// Allgather contribution; positions index H of (group, src_rank).
struct GatherPacket {
  GroupId group = 0;
  Rank src_rank = 0;
  Payload payload;
  friend bool operator==(const GatherPacket&, const GatherPacket&) = default;
};

enum class Phase { Construction, Preparation, Propagation };
std::string_view to_string(Phase phase) noexcept;

struct PhaseCounters {
  std::uint64_t messages = 0;
  std::uint64_t bytes = 0;
  std::uint64_t rounds = 0;
  friend bool operator==(const PhaseCounters&, const PhaseCounters&) = default;
};

struct TransportStats {
  PhaseCounters construction;
  PhaseCounters preparation;
  PhaseCounters propagation;

  [[nodiscard]] std::uint64_t messages_sent() const noexcept {
    return construction.messages + preparation.messages + propagation.messages;
  }
  [[nodiscard]] std::uint64_t bytes_sent() const noexcept {
    return construction.bytes + preparation.bytes + propagation.bytes;
  }
  [[nodiscard]] const PhaseCounters& of(Phase phase) const noexcept;
  PhaseCounters& of(Phase phase) noexcept;
};

/// What one rank hands to the transport in one round.
struct Outbox {
  std::vector<std::pair<Rank, Payload>> p2p;        // (destination, payload)
  std::vector<std::pair<GroupId, Payload>> gather;  // (group, payload)
};

/// What one rank receives: p2p packets ascending by source rank; gather
/// packets ascending by group, then source rank, own contribution included.
struct Inbox {
  std::vector<SpikePacket> p2p;
  std::vector<GatherPacket> gather;
};

/// Synchronous round-based message fabric. Each round has a send half, in
/// which every rank posts exactly once, and a receive half that delivers all
/// inboxes at once.
class Transport {
 public:
  virtual ~Transport() = default;

  [[nodiscard]] virtual std::uint32_t rank_count() const noexcept = 0;
  virtual void define_group(GroupId group, std::vector<Rank> members) = 0;
  virtual void set_phase(Phase phase) noexcept = 0;
  [[nodiscard]] virtual Phase phase() const noexcept = 0;

  /// Send half. Throws ProtocolError if `src` already posted this round.
  virtual void post(Rank src, Outbox outbox) = 0;
  /// Receive half. Throws ProtocolError if a rank skipped the round, a packet
  /// is misaddressed, or a group round is incomplete.
  virtual std::vector<Inbox> complete_round() = 0;

  [[nodiscard]] virtual TransportStats stats_snapshot() const noexcept = 0;
};

/// Runs all ranks inside one process; rounds are lockstep barriers.
class InProcessTransport final : public Transport {
 public:
  explicit InProcessTransport(std::uint32_t n_ranks);

  [[nodiscard]] std::uint32_t rank_count() const noexcept override { return n_ranks_; }
  void define_group(GroupId group, std::vector<Rank> members) override;
  void set_phase(Phase phase) noexcept override { phase_ = phase; }
  [[nodiscard]] Phase phase() const noexcept override { return phase_; }
  void post(Rank src, Outbox outbox) override;
  std::vector<Inbox> complete_round() override;
  [[nodiscard]] TransportStats stats_snapshot() const noexcept override { return stats_; }

 private:
  std::uint32_t n_ranks_;
  Phase phase_ = Phase::Construction;
  std::vector<std::vector<Rank>> groups_;
  std::vector<std::optional<Outbox>> pending_;
  std::uint64_t round_ = 0;
  TransportStats stats_;
};

/// One p2p round: `outgoing[r]` lists rank r's (destination, payload) pairs.
std::vector<std::vector<SpikePacket>> exchange_p2p(
    Transport& transport, std::vector<std::vector<std::pair<Rank, Payload>>> outgoing);

/// One allgather round of `group`: `contributions` holds one payload per
/// member, in ascending member order. Returns every rank's received packets
/// (empty for non-members).
std::vector<std::vector<GatherPacket>> exchange_allgather(Transport& transport, GroupId group,
                                                          const std::vector<Rank>& members,
                                                          std::vector<Payload> contributions);

}  // namespace proxysim
