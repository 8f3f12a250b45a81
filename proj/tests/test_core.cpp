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
#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <vector>

#include "proxysim/core/config.hpp"
#include "proxysim/core/connection_store.hpp"
#include "proxysim/core/errors.hpp"
#include "proxysim/core/memory_arena.hpp"
#include "proxysim/core/ring_buffer.hpp"
#include "proxysim/core/rng.hpp"

using namespace proxysim;

TEST_CASE("ring buffer: single write lands at now + delay") {
  SpikeRingBuffer buf(1, 8);
  buf.add(0, 0, 2, 1.5);
  CHECK(buf.peek(0, 2) == 1.5);
  for (TimeStep t : {0, 1, 3, 4, 5, 6, 7}) CHECK(buf.peek(0, t) == 0.0);
}

TEST_CASE("ring buffer: adds to one slot accumulate") {
  SpikeRingBuffer buf(1, 8);
  buf.add(0, 0, 3, 0.5);
  buf.add(0, 0, 3, 0.25);
  CHECK(buf.peek(0, 3) == 0.75);
}

TEST_CASE("ring buffer: delays 2 and 5 from one source hit two targets") {
  SpikeRingBuffer buf(400, 8);
  const TimeStep now = 13;
  buf.add(126, now, 2, 1.0);
  buf.add(308, now, 5, 1.0);
  CHECK(buf.peek(126, now + 2) == 1.0);
  CHECK(buf.peek(308, now + 5) == 1.0);
  CHECK(buf.peek(126, now + 5) == 0.0);
  CHECK(buf.peek(308, now + 2) == 0.0);
}

TEST_CASE("ring buffer: consume reads once") {
  SpikeRingBuffer buf(1, 4);
  buf.add(0, 5, 1, 2.0);
  CHECK(buf.consume(0, 6) == 2.0);
  CHECK(buf.consume(0, 6) == 0.0);
}

TEST_CASE("ring buffer: delay 2 is invisible one step later") {
  SpikeRingBuffer buf(1, 4);
  const double w = 0.375;
  buf.add(0, 10, 2, w);
  CHECK(buf.consume(0, 11) == 0.0);
  CHECK(buf.consume(0, 12) == w);
}

TEST_CASE("ring buffer: delays outside [1, length) are rejected") {
  SpikeRingBuffer buf(2, 4);
  CHECK_THROWS_AS(buf.add(0, 0, 0, 1.0), OutOfRangeError);
  CHECK_THROWS_AS(buf.add(0, 0, 4, 1.0), OutOfRangeError);
  CHECK_NOTHROW(buf.add(0, 0, 3, 1.0));
}

TEST_CASE("ring buffer: permuted adds give identical slots") {
  // Dyadic amounts keep every partial sum exact, so any order must agree.
  RngStream rng(3, StreamId::tagged(StreamPurpose::Model, 1));
  std::vector<std::pair<TimeStep, double>> adds;
  for (int i = 0; i < 200; ++i) {
    adds.emplace_back(1 + static_cast<TimeStep>(rng.uniform_index(9)),
                      static_cast<double>(rng.uniform_index(64)) / 8.0 - 4.0);
  }
  SpikeRingBuffer a(1, 10);
  for (auto [d, x] : adds) a.add(0, 0, d, x);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<std::size_t> order(adds.size());
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = order.size() - 1; i > 0; --i) {
      std::swap(order[i], order[rng.uniform_index(i + 1)]);
    }
    SpikeRingBuffer b(1, 10);
    for (std::size_t i : order) b.add(0, 0, adds[i].first, adds[i].second);
    for (TimeStep t = 0; t < 10; ++t) CHECK(a.peek(0, t) == b.peek(0, t));
  }
}

TEST_CASE("arena: alloc and free track current and peak") {
  MemoryArena arena(MemoryKind::Device);
  arena.alloc(100);
  arena.alloc(50);
  arena.free(120);
  CHECK(arena.current_bytes() == 30);
  CHECK(arena.peak_bytes() == 150);
  arena.alloc(0);
  CHECK(arena.current_bytes() == 30);
  CHECK(arena.peak_bytes() == 150);
}

TEST_CASE("arena: underflow and cap are accounting errors") {
  MemoryArena arena(MemoryKind::Host, 64);
  arena.alloc(10);
  CHECK_THROWS_AS(arena.free(11), AccountingError);
  CHECK_THROWS_AS(arena.alloc(55), AccountingError);
  CHECK(arena.current_bytes() == 10);
}

TEST_CASE("arena: peak equals the maximum prefix sum of a random trace") {
  RngStream rng(11, StreamId::tagged(StreamPurpose::Model, 2));
  MemoryArena arena(MemoryKind::Device);
  std::int64_t cur = 0;
  std::int64_t best = 0;
  for (int i = 0; i < 5000; ++i) {
    if (cur > 0 && rng.uniform() < 0.45) {
      const auto x = static_cast<std::int64_t>(rng.uniform_index(static_cast<std::uint64_t>(cur) + 1));
      arena.free(static_cast<std::uint64_t>(x));
      cur -= x;
    } else {
      const auto x = static_cast<std::int64_t>(rng.uniform_index(1000));
      arena.alloc(static_cast<std::uint64_t>(x));
      cur += x;
    }
    best = std::max(best, cur);
  }
  CHECK(arena.current_bytes() == static_cast<std::uint64_t>(cur));
  CHECK(arena.peak_bytes() == static_cast<std::uint64_t>(best));
}

TEST_CASE("arena: scoped charges release on exit") {
  MemoryArena arena(MemoryKind::Device);
  {
    ScopedCharge a(arena, 40);
    ScopedCharge b(arena, 2);
    CHECK(arena.current_bytes() == 42);
  }
  CHECK(arena.current_bytes() == 0);
  CHECK(arena.peak_bytes() == 42);
}

TEST_CASE("philox4x32-10 known-answer vectors") {
  using W = std::array<std::uint32_t, 4>;
  CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) == W{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        W{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        W{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("rng: same (seed, stream) reproduces the first million outputs") {
  RngStream on_sigma(42, StreamId::pair(0, 3));
  RngStream on_tau(42, StreamId::pair(0, 3));
  bool same = true;
  for (int i = 0; i < 1'000'000; ++i) same = same && on_sigma() == on_tau();
  CHECK(same);
}

TEST_CASE("rng: distinct stream ids and seeds diverge") {
  RngStream a(42, StreamId::pair(0, 1));
  RngStream b(42, StreamId::pair(1, 0));
  RngStream c(43, StreamId::pair(0, 1));
  RngStream d(42, StreamId::tagged(StreamPurpose::LocalConnect, 0));
  int equal_ab = 0;
  int equal_ac = 0;
  int equal_ad = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto x = a();
    equal_ab += x == b();
    equal_ac += x == c();
    equal_ad += x == d();
  }
  CHECK(equal_ab == 0);
  CHECK(equal_ac == 0);
  CHECK(equal_ad == 0);
  CHECK_FALSE(StreamId::pair(2, 5) == StreamId::pair(5, 2));
  CHECK_FALSE(StreamId::tagged(StreamPurpose::Poisson, 7) == StreamId::tagged(StreamPurpose::NeuronInit, 7));
}

TEST_CASE("rng: substreams are disjoint and repositionable") {
  RngStream s(9, StreamId::pair(1, 2), 0);
  RngStream t(9, StreamId::pair(1, 2), 1);
  CHECK(s() != t());
  RngStream u(9, StreamId::pair(1, 2));
  u();
  u();
  u.select_substream(1);
  RngStream v(9, StreamId::pair(1, 2), 1);
  for (int i = 0; i < 10; ++i) CHECK(u() == v());
}

TEST_CASE("rng: state round trip resumes the sequence") {
  RngStream s(5, StreamId::tagged(StreamPurpose::Model, 3));
  for (int i = 0; i < 7; ++i) s.next_u32();
  s.normal(0.0, 1.0);
  RngStream copy(s.state());
  CHECK(copy.state() == s.state());
  for (int i = 0; i < 20; ++i) CHECK(copy.normal(0.0, 1.0) == s.normal(0.0, 1.0));
}

TEST_CASE("rng: uniform_index stays in range and is roughly uniform") {
  RngStream s(1, StreamId::tagged(StreamPurpose::Model, 4));
  std::vector<int> hist(7, 0);
  for (int i = 0; i < 70000; ++i) {
    const auto k = s.uniform_index(7);
    REQUIRE(k < 7);
    ++hist[k];
  }
  for (int h : hist) CHECK(std::abs(h - 10000) < 500);
  for (int i = 0; i < 1000; ++i) {
    const double u = s.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("connection store: blocks are charged whole") {
  MemoryArena arena(MemoryKind::Device);
  ConnectionStore store(4, &arena);
  for (NodeIndex i = 0; i < 5; ++i) store.append({i, 0, 1.0, 1, 0});
  CHECK(store.block_count() == 2);
  CHECK(arena.current_bytes() == 2 * 4 * ByteCosts::connection_record);
}

TEST_CASE("connection store: stable sort by source and per-source ranges") {
  ConnectionStore store(3);
  const std::vector<std::pair<NodeIndex, NodeIndex>> edges{{2, 0}, {0, 1}, {2, 1}, {1, 2},
                                                           {0, 3}, {2, 2}, {0, 4}};
  for (auto [s, t] : edges) store.append({s, t, 0.0, 1, 0});
  CHECK_FALSE(store.sorted_by_source());
  store.sort_by_source();
  CHECK(store.sorted_by_source());
  std::vector<NodeIndex> targets;
  for (std::size_t i = 0; i < store.size(); ++i) targets.push_back(store[i].target);
  CHECK(targets == std::vector<NodeIndex>{1, 3, 4, 2, 0, 1, 2});

  for (bool counts : {false, true}) {
    ConnectionStore copy(3);
    for (std::size_t i = 0; i < store.size(); ++i) copy.append(store[i]);
    copy.build_index(5, counts);
    CHECK(copy.has_count_array() == counts);
    CHECK(copy.range(0).first == 0);
    CHECK(copy.range(0).count == 3);
    CHECK(copy.range(1).first == 3);
    CHECK(copy.range(1).count == 1);
    CHECK(copy.range(2).first == 4);
    CHECK(copy.range(2).count == 3);
    CHECK(copy.range(3).count == 0);
    CHECK(copy.range(4).count == 0);
  }
}

TEST_CASE("config: validation and comm-mode names") {
  SimConfig c;
  CHECK(c.resolution_ms == 0.1);
  CHECK(c.opt_level == 2);
  CHECK(c.flag_threshold == 1.0);
  CHECK_NOTHROW(c.validate());
  SimConfig bad = c;
  bad.opt_level = 4;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  bad = c;
  bad.resolution_ms = 0.0;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  bad = c;
  bad.n_ranks = 0;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  CHECK(parse_comm_mode("p2p") == CommMode::PointToPoint);
  CHECK(parse_comm_mode("collective") == CommMode::Collective);
  CHECK_FALSE(parse_comm_mode("broadcast").has_value());
  CHECK(to_string(CommMode::Collective) == "collective");
}
