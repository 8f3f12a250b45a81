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
#include "proxysim/transport/transport.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "proxysim/core/errors.hpp"

namespace proxysim {

std::string_view to_string(Phase phase) noexcept {
  switch (phase) {
    case Phase::Construction: return "construction";
    case Phase::Preparation: return "preparation";
    case Phase::Propagation: return "propagation";
  }
  return "unknown";
}

const PhaseCounters& TransportStats::of(Phase phase) const noexcept {
  switch (phase) {
    case Phase::Construction: return construction;
    case Phase::Preparation: return preparation;
    case Phase::Propagation: break;
  }
  return propagation;
}

PhaseCounters& TransportStats::of(Phase phase) noexcept {
  return const_cast<PhaseCounters&>(std::as_const(*this).of(phase));
}

InProcessTransport::InProcessTransport(std::uint32_t n_ranks)
    : n_ranks_(n_ranks), pending_(n_ranks) {
  if (n_ranks == 0) throw InvalidArgument("transport needs at least one rank");
}

void InProcessTransport::define_group(GroupId group, std::vector<Rank> members) {
  if (group != static_cast<GroupId>(groups_.size())) {
    throw InvalidArgument(fmt::format("group ids must be consecutive; expected {}, got {}",
                                      groups_.size(), group));
  }
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  if (members.empty() || members.back() >= n_ranks_) {
    throw InvalidArgument(fmt::format("group {} has invalid members", group));
  }
  groups_.push_back(std::move(members));
}

void InProcessTransport::post(Rank src, Outbox outbox) {
  if (src >= n_ranks_) throw ProtocolError(fmt::format("post from unknown rank {}", src));
  if (pending_[src]) {
    throw ProtocolError(fmt::format("rank {} posted twice in round {}", src, round_));
  }
  pending_[src] = std::move(outbox);
}

std::vector<Inbox> InProcessTransport::complete_round() {
  for (Rank r = 0; r < n_ranks_; ++r) {
    if (!pending_[r]) {
      // Clear the half-finished round so the caller sees the error, not a hang.
      std::fill(pending_.begin(), pending_.end(), std::nullopt);
      throw ProtocolError(fmt::format("rank {} did not post in round {}", r, round_));
    }
  }
  auto fail = [this](const std::string& what) {
    std::fill(pending_.begin(), pending_.end(), std::nullopt);
    throw ProtocolError(fmt::format("round {}: {}", round_, what));
  };

  std::vector<Inbox> inboxes(n_ranks_);
  PhaseCounters& counters = stats_.of(phase_);
  std::vector<std::vector<Rank>> contributors(groups_.size());

  for (Rank src = 0; src < n_ranks_; ++src) {
    Outbox& out = *pending_[src];
    std::vector<Rank> seen;
    for (auto& [dest, payload] : out.p2p) {
      if (dest >= n_ranks_) fail(fmt::format("packet from rank {} addressed to nonexistent rank {}", src, dest));
      if (dest == src) fail(fmt::format("rank {} addressed a packet to itself", src));
      if (std::find(seen.begin(), seen.end(), dest) != seen.end()) {
        fail(fmt::format("rank {} sent two packets to rank {}", src, dest));
      }
      seen.push_back(dest);
      for (const SpikeEntry& e : payload) {
        if (e.multiplicity == 0) fail("spike entry with zero multiplicity");
      }
      ++counters.messages;
      counters.bytes += payload.size() * kEntryWireBytes;
      inboxes[dest].p2p.push_back({src, std::move(payload)});
    }
    for (auto& [group, payload] : out.gather) {
      if (group < 0 || group >= static_cast<GroupId>(groups_.size())) {
        fail(fmt::format("gather contribution to undefined group {}", group));
      }
      const auto& members = groups_[static_cast<std::size_t>(group)];
      if (!std::binary_search(members.begin(), members.end(), src)) {
        fail(fmt::format("rank {} is not a member of group {}", src, group));
      }
      auto& who = contributors[static_cast<std::size_t>(group)];
      if (std::find(who.begin(), who.end(), src) != who.end()) {
        fail(fmt::format("rank {} contributed twice to group {}", src, group));
      }
      who.push_back(src);
    }
  }

  for (std::size_t g = 0; g < groups_.size(); ++g) {
    const auto& members = groups_[g];
    const auto& who = contributors[g];
    if (who.empty()) continue;
    if (who.size() != members.size()) {
      for (Rank m : members) {
        if (std::find(who.begin(), who.end(), m) == who.end()) {
          fail(fmt::format("member {} missing from the allgather of group {}", m, g));
        }
      }
    }
    const auto group = static_cast<GroupId>(g);
    for (Rank src : members) {
      auto& gathers = pending_[src]->gather;
      const auto it = std::find_if(gathers.begin(), gathers.end(),
                                   [group](const auto& e) { return e.first == group; });
      ++counters.messages;
      counters.bytes += it->second.size() * kEntryWireBytes;
      for (Rank dest : members) inboxes[dest].gather.push_back({group, src, it->second});
    }
  }

  ++counters.rounds;
  ++round_;
  std::fill(pending_.begin(), pending_.end(), std::nullopt);
  return inboxes;
}

std::vector<std::vector<SpikePacket>> exchange_p2p(
    Transport& transport, std::vector<std::vector<std::pair<Rank, Payload>>> outgoing) {
  if (outgoing.size() != transport.rank_count()) {
    throw InvalidArgument("exchange_p2p needs one outbox per rank");
  }
  for (Rank r = 0; r < outgoing.size(); ++r) {
    Outbox out;
    out.p2p = std::move(outgoing[r]);
    transport.post(r, std::move(out));
  }
  auto inboxes = transport.complete_round();
  std::vector<std::vector<SpikePacket>> received;
  received.reserve(inboxes.size());
  for (auto& inbox : inboxes) received.push_back(std::move(inbox.p2p));
  return received;
}

std::vector<std::vector<GatherPacket>> exchange_allgather(Transport& transport, GroupId group,
                                                          const std::vector<Rank>& members,
                                                          std::vector<Payload> contributions) {
  if (contributions.size() != members.size()) {
    throw InvalidArgument("exchange_allgather needs one payload per member");
  }
  for (Rank r = 0; r < transport.rank_count(); ++r) {
    Outbox out;
    const auto it = std::find(members.begin(), members.end(), r);
    if (it != members.end()) {
      out.gather.emplace_back(group, std::move(contributions[static_cast<std::size_t>(it - members.begin())]));
    }
    transport.post(r, std::move(out));
  }
  auto inboxes = transport.complete_round();
  std::vector<std::vector<GatherPacket>> received;
  received.reserve(inboxes.size());
  for (auto& inbox : inboxes) received.push_back(std::move(inbox.gather));
  return received;
}

}  // namespace proxysim
