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
#include <map>
#include <set>
#include <vector>

#include "proxysim/construction/network.hpp"
#include "proxysim/construction/placement.hpp"
#include "proxysim/construction/remote_maps.hpp"
#include "proxysim/core/errors.hpp"
#include "support.hpp"

using namespace proxysim;
using proxysim::testing::iota_nodes;

namespace {

SimConfig config(std::uint32_t ranks, CommMode mode = CommMode::PointToPoint, int level = 2) {
  SimConfig c;
  c.n_ranks = ranks;
  c.comm_mode = mode;
  c.opt_level = level;
  c.seed = 99;
  return c;
}

std::vector<NodeIndex> to_vec(std::span<const NodeIndex> s) { return {s.begin(), s.end()}; }

}  // namespace

TEST_CASE("create_neurons hands out consecutive ranges and gids") {
  Network net(config(2));
  const NodeRange a = net.create_neurons(0, 10);
  const NodeRange b = net.create_neurons(0, 2);
  const NodeRange c = net.create_neurons(1, 5);
  CHECK(a.first == 0);
  CHECK(b.first == 10);
  CHECK(c.first == 0);
  CHECK(a.first_gid == 0);
  CHECK(b.first_gid == 10);
  CHECK(c.first_gid == 12);
  CHECK(net.neuron_total() == 17);
  CHECK(net.rank(1).gid(4) == 16);
  CHECK(b.indices() == std::vector<NodeIndex>{10, 11});
  CHECK_THROWS_AS(net.create_neurons(0, 0), InvalidArgument);
}

TEST_CASE("image nodes continue the index range after the neurons") {
  Network net(config(2));
  net.create_neurons(0, 4);
  net.create_neurons(1, 12);
  proxysim::testing::connect_batch(net, 0, {3}, 1, 0);
  const RankState& r1 = net.rank(1);
  CHECK(r1.node_count() == 13);
  CHECK(r1.kind(12) == NodeKind::Image);
  CHECK(r1.connections()[0].source == 12);
  // Neurons added now would collide with the image range other ranks know about.
  CHECK_THROWS_AS(net.create_neurons(1, 1), StateError);
  CHECK_NOTHROW(net.create_neurons(0, 1));
}

TEST_CASE("local connect rule examples") {
  Network net(config(1));
  const auto n = net.create_neurons(0, 5).indices();
  const std::vector<NodeIndex> three(n.begin(), n.begin() + 3);
  const std::vector<NodeIndex> four(n.begin() + 1, n.end());
  CHECK(net.connect(0, three, 0, three, ConnSpec::one_to_one(), SynSpec::fixed(1, 1)) == 3);
  CHECK(net.connect(0, three, 0, four, ConnSpec::all_to_all(), SynSpec::fixed(1, 1)) == 12);
  ConnSpec no_self = ConnSpec::all_to_all();
  no_self.allow_autapses = false;
  CHECK(net.connect(0, four, 0, four, no_self, SynSpec::fixed(1, 1)) == 12);
  CHECK(net.connect(0, n, 0, three, ConnSpec::fixed_indegree(3), SynSpec::fixed(1, 1)) == 9);
  CHECK(net.connect(0, three, 0, n, ConnSpec::fixed_outdegree(2), SynSpec::fixed(1, 1)) == 6);
  CHECK(net.connect(0, n, 0, n, ConnSpec::fixed_total(20), SynSpec::fixed(1, 1)) == 20);
  CHECK_THROWS_AS(net.connect(0, three, 0, four, ConnSpec::one_to_one(), SynSpec::fixed(1, 1)),
                  InvalidArgument);
  ConnSpec strict = ConnSpec::fixed_total(3);
  strict.allow_multapses = false;
  CHECK_THROWS_AS(net.connect(0, n, 0, n, strict, SynSpec::fixed(1, 1)), InvalidArgument);
  CHECK(net.rank(0).connections().size() == 62);
}

TEST_CASE("fixed in-degree without multapses picks distinct sources") {
  Network net(config(1));
  const auto n = net.create_neurons(0, 30).indices();
  ConnSpec conn = ConnSpec::fixed_indegree(10);
  conn.allow_multapses = false;
  conn.allow_autapses = false;
  net.connect(0, n, 0, n, conn, SynSpec::fixed(1, 1));
  std::map<NodeIndex, std::set<NodeIndex>> in;
  const auto& store = net.rank(0).connections();
  for (std::size_t i = 0; i < store.size(); ++i) {
    CHECK(store[i].source != store[i].target);
    in[store[i].target].insert(store[i].source);
  }
  REQUIRE(in.size() == 30);
  for (const auto& [t, s] : in) CHECK(s.size() == 10);
}

TEST_CASE("random delays and weights stay inside their bounds") {
  Network net(config(1));
  const auto n = net.create_neurons(0, 20).indices();
  SynSpec syn;
  syn.weight = ParamDist::uniform(-1.0, 2.0);
  syn.delay_min = 3;
  syn.delay_max = 7;
  net.connect(0, n, 0, n, ConnSpec::all_to_all(), syn);
  const auto& store = net.rank(0).connections();
  std::set<std::uint32_t> delays;
  for (std::size_t i = 0; i < store.size(); ++i) {
    CHECK(store[i].weight >= -1.0);
    CHECK(store[i].weight < 2.0);
    delays.insert(store[i].delay);
  }
  CHECK(delays == std::set<std::uint32_t>{3, 4, 5, 6, 7});
  SynSpec bad;
  bad.delay_min = 0;
  CHECK_THROWS_AS(net.connect(0, n, 0, n, ConnSpec::all_to_all(), bad), InvalidArgument);
}

TEST_CASE("source flagging decision") {
  CHECK(use_source_flagging(ConnSpec::fixed_indegree(2), 10, 1, 1.0));
  CHECK_FALSE(use_source_flagging(ConnSpec::all_to_all(), 10, 1, 1.0));
  CHECK_FALSE(use_source_flagging(ConnSpec::one_to_one(), 10, 10, 1.0));
  CHECK_FALSE(use_source_flagging(ConnSpec::fixed_indegree(100), 10, 50, 1.0));
  CHECK(use_source_flagging(ConnSpec::fixed_total(5), 10, 10, 1.0));
  CHECK_FALSE(use_source_flagging(ConnSpec::fixed_indegree(2), 10, 1, 0.0));
}

TEST_CASE("flag_used_sources marks drawn positions") {
  const std::vector<std::uint32_t> pos{4, 1, 4};
  CHECK(flag_used_sources(pos, 6) == std::vector<std::uint8_t>{0, 1, 0, 0, 1, 0});
  const std::vector<std::uint32_t> bad{6};
  CHECK_THROWS_AS(flag_used_sources(bad, 6), ConsistencyError);
}

TEST_CASE("extract_used_subarray orders used sources by value") {
  const std::vector<NodeIndex> s{9, 3, 7};
  const std::vector<std::uint8_t> b{1, 0, 1};
  const UsedSubarray u = extract_used_subarray(s, b);
  CHECK(u.values == std::vector<NodeIndex>{7, 9});
  CHECK(u.positions == std::vector<std::uint32_t>{2, 0});
  const UsedSubarray all = extract_used_subarray(s, {});
  CHECK(all.values == std::vector<NodeIndex>{3, 7, 9});
  CHECK(all.positions == std::vector<std::uint32_t>{1, 2, 0});
}

TEST_CASE("lookup_or_create_images reuses mapped sources and appends new ones") {
  RemoteSourceMap map;
  const std::vector<NodeIndex> r0{3, 7};
  const std::vector<NodeIndex> l0{10, 11};
  map.insert_sorted(r0, l0);
  UsedSubarray used;
  used.values = {7, 9};
  used.positions = {2, 0};
  NodeIndex m = 12;
  std::vector<std::int64_t> image_of(3, kNoImage);
  CHECK(lookup_or_create_images(map, used, m, image_of) == 1);
  CHECK(image_of[2] == 11);
  CHECK(image_of[0] == 12);
  CHECK(image_of[1] == kNoImage);
  CHECK(to_vec(map.remote()) == std::vector<NodeIndex>{3, 7, 9});
  CHECK(to_vec(map.local()) == std::vector<NodeIndex>{10, 11, 12});
  CHECK(m == 13);
}

TEST_CASE("insert_sorted merges into the middle and rejects duplicates") {
  RemoteSourceMap map;
  map.insert_sorted(std::vector<NodeIndex>{2, 8}, std::vector<NodeIndex>{0, 1});
  map.insert_sorted(std::vector<NodeIndex>{5, 9}, std::vector<NodeIndex>{2, 3});
  CHECK(to_vec(map.remote()) == std::vector<NodeIndex>{2, 5, 8, 9});
  CHECK(to_vec(map.local()) == std::vector<NodeIndex>{0, 2, 1, 3});
  CHECK(map.find(8) == 2u);
  CHECK_FALSE(map.find(4).has_value());
  CHECK_THROWS_AS(map.insert_sorted(std::vector<NodeIndex>{5}, std::vector<NodeIndex>{7}),
                  ConsistencyError);
}

TEST_CASE("remap_connection_sources rewrites temporary positions") {
  ConnectionStore store;
  store.append({99, 1, 0.0, 1, 0});
  for (NodeIndex p : {0u, 0u, 2u}) store.append({p, 1, 0.0, 1, 0});
  const std::vector<std::int64_t> image_of{12, kNoImage, 14};
  remap_connection_sources(store, 1, image_of);
  CHECK(store[0].source == 99);
  CHECK(store[1].source == 12);
  CHECK(store[2].source == 12);
  CHECK(store[3].source == 14);
  ConnectionStore bad;
  bad.append({1, 0, 0.0, 1, 0});
  CHECK_THROWS_AS(remap_connection_sources(bad, 0, image_of), ConsistencyError);
}

TEST_CASE("source sequence update merges new values") {
  SourceSequence seq;
  seq.update(std::vector<NodeIndex>{3, 7});
  seq.update(std::vector<NodeIndex>{1, 7, 9, 9});
  CHECK(to_vec(seq.values()) == std::vector<NodeIndex>{1, 3, 7, 9});
}

TEST_CASE("remote connect: first use of 480 creates image 357 at map position 127") {
  Network net(config(3));
  proxysim::testing::build_worked_example(net);
  const RankState& r1 = net.rank(1);
  const RemoteSourceMap* map = r1.remote_map(kPointToPoint, 0);
  REQUIRE(map != nullptr);
  CHECK(map->size() == 379);
  CHECK(map->find(480) == 127u);
  CHECK(map->local()[127] == 357);
  CHECK(map->find(742) == 271u);
  CHECK(map->local()[271] == 698);
  const RemoteSourceMap* map2 = net.rank(2).remote_map(kPointToPoint, 0);
  REQUIRE(map2 != nullptr);
  CHECK(map2->find(742) == 113u);
  CHECK(proxysim::testing::sequences_match_maps(net));

  // A second call with 480 reuses its image.
  const auto images = r1.image_count();
  proxysim::testing::connect_batch(net, 0, {480}, 1, 5, 1.0, 1);
  CHECK(r1.image_count() == images);
  const auto& store = r1.connections();
  CHECK(store[store.size() - 1].source == 357);
  CHECK(proxysim::testing::sequences_match_maps(net));
}

TEST_CASE("prepared T/P routes for the worked example") {
  Network net(config(3));
  proxysim::testing::build_worked_example(net);
  net.prepare();
  const RankState& r0 = net.rank(0);
  const auto& tp = r0.p2p_routes();
  CHECK(std::vector<Rank>(tp.destinations(480).begin(), tp.destinations(480).end()) ==
        std::vector<Rank>{1});
  CHECK(std::vector<std::uint32_t>(tp.positions(480).begin(), tp.positions(480).end()) ==
        std::vector<std::uint32_t>{127});
  CHECK(std::vector<Rank>(tp.destinations(742).begin(), tp.destinations(742).end()) ==
        std::vector<Rank>{1, 2});
  CHECK(std::vector<std::uint32_t>(tp.positions(742).begin(), tp.positions(742).end()) ==
        std::vector<std::uint32_t>{271, 113});
  CHECK(tp.destinations(900).empty());
  CHECK(r0.p2p_destinations() == std::vector<Rank>{1, 2});
  CHECK(net.rank(1).p2p_senders() == std::vector<Rank>{0});
  CHECK_THROWS_AS(net.create_neurons(0, 1), StateError);
}

TEST_CASE("flagging keeps only the drawn sources in the maps") {
  for (double threshold : {1.0, 1e-9}) {
    SimConfig c = config(2);
    c.flag_threshold = threshold;
    Network net(c);
    const auto src = net.create_neurons(0, 100).indices();
    const auto tgt = net.create_neurons(1, 2).indices();
    net.connect(0, src, 1, tgt, ConnSpec::fixed_indegree(1), SynSpec::fixed(1, 1));
    const RemoteSourceMap* map = net.rank(1).remote_map(kPointToPoint, 0);
    REQUIRE(map != nullptr);
    if (threshold == 1.0) {
      CHECK(map->size() <= 2);
    } else {
      CHECK(map->size() == 100);
    }
    CHECK(proxysim::testing::sequences_match_maps(net));
  }
}

TEST_CASE("collective remote connect fills H with every passed source") {
  Network net(config(3, CommMode::Collective));
  const GroupId g = net.create_group({0, 1, 2});
  net.create_neurons(0, 20);
  net.create_neurons(1, 4);
  net.create_neurons(2, 4);
  {
    const std::vector<NodeIndex> s{5, 2, 8};
    const std::vector<NodeIndex> t{0, 1, 2};
    net.connect(0, s, 1, t, ConnSpec::assigned_nodes(), SynSpec::fixed(1, 1), 0, g);
  }
  {
    const std::vector<NodeIndex> s{8, 11};
    const std::vector<NodeIndex> t{0, 3};
    net.connect(0, s, 2, t, ConnSpec::assigned_nodes(), SynSpec::fixed(1, 1), 0, g);
  }
  for (Rank r = 0; r < 3; ++r) {
    CHECK(to_vec(net.rank(r).host_set(g, 0)) == std::vector<NodeIndex>{2, 5, 8, 11});
  }
  CHECK(net.rank(0).source_sequences().empty());
  net.prepare();
  const ImageIndexArray* i1 = net.rank(1).image_index(g, 0);
  const ImageIndexArray* i2 = net.rank(2).image_index(g, 0);
  REQUIRE(i1 != nullptr);
  REQUIRE(i2 != nullptr);
  CHECK(*i1 == ImageIndexArray{4, 5, 6, kNoImage});
  CHECK(*i2 == ImageIndexArray{kNoImage, kNoImage, 4, 5});
  const auto& gq = net.rank(0).group_routes();
  CHECK(std::vector<GroupId>(gq.destinations(8).begin(), gq.destinations(8).end()) ==
        std::vector<GroupId>{g});
  CHECK(gq.positions(8)[0] == 2);
  CHECK(gq.destinations(3).empty());
  CHECK(net.rank(0).p2p_destinations().empty());
  CHECK(net.rank(1).active_groups() == std::vector<GroupId>{g});
}

TEST_CASE("collective connect between non-members is rejected") {
  Network net(config(3, CommMode::Collective));
  const GroupId g = net.create_group({0, 1});
  net.create_neurons(0, 2);
  net.create_neurons(2, 2);
  const std::vector<NodeIndex> s{0};
  CHECK_THROWS_AS(net.connect(0, s, 2, s, ConnSpec::assigned_nodes(), SynSpec::fixed(1, 1), 0, g),
                  InvalidArgument);
  CHECK_THROWS_AS(net.connect(0, s, 2, s, ConnSpec::assigned_nodes(), SynSpec::fixed(1, 1), 0, 7),
                  InvalidArgument);
}

TEST_CASE("build_image_index marks sources without an image") {
  RemoteSourceMap map;
  map.insert_sorted(std::vector<NodeIndex>{3, 9}, std::vector<NodeIndex>{40, 41});
  const GroupHostArray host{1, 3, 5, 9};
  CHECK(build_image_index(host, map) == ImageIndexArray{kNoImage, 40, kNoImage, 41});
}

TEST_CASE("distributed fixed in-degree gives every target exactly K inputs") {
  for (CommMode mode : {CommMode::PointToPoint, CommMode::Collective}) {
    Network net(config(4, mode));
    GroupId g = kPointToPoint;
    if (mode == CommMode::Collective) g = net.create_group({0, 1, 2, 3});
    std::vector<NodeRange> src;
    std::vector<NodeRange> tgt;
    for (Rank r = 0; r < 4; ++r) src.push_back(net.create_neurons(r, 25));
    for (Rank r = 0; r < 4; ++r) tgt.push_back(net.create_neurons(r, 2));
    CHECK(net.connect_fixed_indegree(src, tgt, 10, SynSpec::fixed(1, 1), 0, g) == 80);
    const auto deg = proxysim::testing::global_indegrees(net);
    REQUIRE(deg.size() == 8);
    for (const auto& [gid, k] : deg) {
      CHECK(gid >= 100);
      CHECK(k == 10);
    }
    CHECK(net.connection_total() == 80);
    if (mode == CommMode::PointToPoint) CHECK(proxysim::testing::sequences_match_maps(net));
  }
}

TEST_CASE("distributed triplets are reproducible and sorted by source") {
  const std::vector<PopulationSlice> sources{{0, 0, 25}, {1, 0, 25}, {2, 0, 25}};
  const PopulationSlice target{1, 25, 4};
  const auto a = draw_distributed_triplets(7, 3, 1, target, sources, 10);
  const auto b = draw_distributed_triplets(7, 3, 1, target, sources, 10);
  const auto c = draw_distributed_triplets(7, 4, 1, target, sources, 10);
  CHECK(a == b);
  CHECK(a != c);
  REQUIRE(a.size() == 40);
  CHECK(std::is_sorted(a.begin(), a.end(), [](const SourceTriplet& x, const SourceTriplet& y) {
    return x.source_rank != y.source_rank ? x.source_rank < y.source_rank : x.source < y.source;
  }));
  for (const SourceTriplet& t : a) {
    CHECK(t.target >= 25);
    CHECK(t.target < 29);
    CHECK(t.source < 25);
  }
}

TEST_CASE("placement levels") {
  const auto l0 = apply_optimization_level(0);
  const auto l1 = apply_optimization_level(1);
  const auto l2 = apply_optimization_level(2);
  const auto l3 = apply_optimization_level(3);
  CHECK(l0.remote_source_maps == MemoryKind::Host);
  CHECK(l0.local_image_maps == MemoryKind::Host);
  CHECK(l0.first_index == MemoryKind::Host);
  CHECK(l1.remote_source_maps == MemoryKind::Device);
  CHECK(l1.local_image_maps == MemoryKind::Host);
  CHECK(l2.local_image_maps == MemoryKind::Device);
  CHECK(l2.first_index == MemoryKind::Device);
  CHECK_FALSE(l2.store_counts);
  CHECK(l3.store_counts);
  CHECK(l3.count_array == MemoryKind::Device);
  CHECK(SimConfig{}.opt_level == 2);
  CHECK_THROWS_AS(apply_optimization_level(-1), InvalidArgument);
  CHECK_THROWS_AS(apply_optimization_level(4), InvalidArgument);
}

TEST_CASE("memory per level moves from host to device") {
  std::vector<std::uint64_t> dev;
  std::vector<std::uint64_t> host;
  for (int level = 0; level <= 3; ++level) {
    Network net(config(3, CommMode::PointToPoint, level));
    proxysim::testing::build_worked_example(net);
    net.prepare();
    dev.push_back(net.rank(1).arenas().device.peak_bytes());
    host.push_back(net.rank(1).arenas().host.peak_bytes());
    CHECK(net.rank(1).connections().has_count_array() == (level != 2));
  }
  for (int l = 1; l <= 3; ++l) {
    CHECK(dev[l] >= dev[l - 1]);
    CHECK(host[l] <= host[l - 1]);
  }
  CHECK(host[2] == 0);
}
