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

#include <cmath>
#include <sstream>
#include <string>

#include "proxysim/core/errors.hpp"
#include "proxysim/engine/simulation.hpp"
#include "proxysim/models/balanced.hpp"
#include "proxysim/models/mini_multiarea.hpp"
#include "proxysim/models/packing.hpp"
#include "support.hpp"

using namespace proxysim;

namespace {

SimConfig config(std::uint32_t ranks, CommMode mode = CommMode::PointToPoint) {
  SimConfig c;
  c.n_ranks = ranks;
  c.comm_mode = mode;
  c.seed = 21;
  return c;
}

std::string throw_message(const std::string& csv) {
  std::istringstream in(csv);
  try {
    read_area_csv(in);
  } catch (const ParseError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("balanced sizes reproduce the scaling table") {
  struct Row {
    std::uint32_t gpus;
    double neurons_millions;
    double synapses_trillions;
  };
  const Row rows[] = {{128, 28.8, 0.32},  {256, 57.6, 0.65},  {384, 86.4, 0.97},
                      {512, 115.2, 1.30}, {768, 172.8, 1.94}, {1024, 230.4, 2.59}};
  for (const Row& row : rows) {
    BalancedNetSpec spec;
    spec.scale = 20.0;
    spec.n_ranks = row.gpus;
    const BalancedNetSize size = balanced_network_size(spec);
    CAPTURE(row.gpus);
    CHECK(size.neurons == std::llround(row.neurons_millions * 1e6));
    CHECK(std::round(static_cast<double>(size.synapses) / 1e10) / 100.0 ==
          doctest::Approx(row.synapses_trillions));
    CHECK(size.synapses == size.neurons * 11250);
  }
}

TEST_CASE("balanced size at scale 1 on one rank") {
  BalancedNetSpec spec;
  const BalancedNetSize s = balanced_network_size(spec);
  CHECK(s.exc_per_rank == 9000);
  CHECK(s.inh_per_rank == 2250);
  CHECK(s.neurons == 11250);
  CHECK(s.synapses == 11250ull * 11250ull);
  spec.scale = 0.0001;
  CHECK_THROWS_AS(balanced_network_size(spec), InvalidArgument);
  spec.scale = 0.1;
  CHECK(balanced_network_size(spec).neurons == 1125);
}

TEST_CASE("desk balanced network on 4 ranks has in-degree exactly 100 everywhere") {
  for (CommMode mode : {CommMode::PointToPoint, CommMode::Collective}) {
    Network net(config(4, mode));
    const BalancedNetSpec spec = BalancedNetSpec::desk(4);
    const BalancedNetwork model = build_balanced_network(net, spec);
    CHECK(net.neuron_total() == 4000);
    CHECK(net.connection_total() == 400000);
    CHECK(balanced_network_size(spec).synapses == 400000);
    CHECK(model.exc.size() == 4);
    CHECK((model.group == kPointToPoint) == (mode == CommMode::PointToPoint));
    const auto deg = proxysim::testing::global_indegrees(net);
    CHECK(deg.size() == 4000);
    std::size_t wrong = 0;
    for (const auto& [gid, k] : deg) wrong += k != 100;
    CHECK(wrong == 0);
    if (mode == CommMode::PointToPoint) CHECK(proxysim::testing::sequences_match_maps(net));
  }
}

TEST_CASE("balanced external rate follows eta times the threshold rate") {
  BalancedNetSpec spec = BalancedNetSpec::desk(1);
  spec.eta = 1.0;
  // nu_thr * K = (V_th - V_rest) / (J tau_m) per ms.
  CHECK(spec.external_rate_hz() == doctest::Approx(20.0 / (0.5 * 20.0) * 1000.0));
  BalancedNetSpec bad = spec;
  bad.delay_steps = 0;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  Network wrong(config(2));
  CHECK_THROWS_AS(build_balanced_network(wrong, BalancedNetSpec::desk(4)), InvalidArgument);
}

TEST_CASE("LPT packing of 5, 4, 3, 3 into two bins") {
  const std::vector<AreaSpec> areas{{"a", 1, 4}, {"b", 1, 3}, {"c", 1, 2}, {"d", 1, 2}};
  const PackingAssignment p = pack_areas(areas, 2);
  CHECK(p.max_bin_weight() == 8);
  CHECK(p.bin_of == std::vector<std::uint32_t>{0, 1, 1, 0});
  CHECK(p.bin_weight == std::vector<std::uint64_t>{8, 7});
  CHECK(p.to_json().dump() == R"({"a":0,"b":1,"c":1,"d":0})");
  CHECK(proxysim::testing::optimal_max_load({5, 4, 3, 3}, 2) == 8);
}

TEST_CASE("packing ties, more bins than areas, and errors") {
  const std::vector<AreaSpec> same{{"x", 2, 0}, {"y", 2, 0}, {"z", 2, 0}};
  CHECK(pack_areas(same, 2).bin_of == std::vector<std::uint32_t>{0, 1, 0});
  CHECK(pack_areas(same, 5).bin_weight == std::vector<std::uint64_t>{2, 2, 2, 0, 0});
  CHECK_THROWS_AS(pack_areas(same, 0), InvalidArgument);
  CHECK_THROWS_AS(pack_areas({}, 2), InvalidArgument);
  CHECK_THROWS_AS(pack_areas({{"x", 1, 0}, {"x", 2, 0}}, 2), InvalidArgument);
}

TEST_CASE("LPT stays within 4/3 - 1/(3m) of the optimum") {
  RngStream rng(4, StreamId::tagged(StreamPurpose::Model, 77));
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = 1 + rng.uniform_index(12);
    const auto m = static_cast<std::uint32_t>(1 + rng.uniform_index(4));
    std::vector<AreaSpec> areas;
    std::vector<std::uint64_t> w;
    for (std::uint64_t i = 0; i < n; ++i) {
      areas.push_back({"A" + std::to_string(i), 1 + rng.uniform_index(50), rng.uniform_index(500)});
      w.push_back(areas.back().weight());
    }
    const PackingAssignment p = pack_areas(areas, m);
    const double opt = static_cast<double>(proxysim::testing::optimal_max_load(w, m));
    CHECK(static_cast<double>(p.max_bin_weight()) <= (4.0 / 3.0 - 1.0 / (3.0 * m)) * opt + 1e-9);
    std::uint64_t total = 0;
    for (auto b : p.bin_weight) total += b;
    CHECK(total == std::accumulate(w.begin(), w.end(), std::uint64_t{0}));
  }
}

TEST_CASE("area CSV parsing") {
  std::istringstream in("area_id,neurons,in_connections\nV1, 10 ,200\n\nV2,5,0\r\n");
  const auto areas = read_area_csv(in);
  REQUIRE(areas.size() == 2);
  CHECK(areas[0].id == "V1");
  CHECK(areas[0].weight() == 210);
  CHECK(areas[1].in_connections == 0);
  std::istringstream headerless("A,1,1\n");
  CHECK(read_area_csv(headerless).size() == 1);
}

TEST_CASE("area CSV errors name the line") {
  CHECK(throw_message("area_id,neurons,in_connections\nV1,1,2\nV2,3\n").find("line 3:") == 0);
  CHECK(throw_message("V1,1,2\nV2,x,3\n").find("line 2:") == 0);
  CHECK(throw_message("V1,-1,2\n").find("line 1:") == 0);
  CHECK(throw_message("V1,0,2\n").find("line 1:") == 0);
  CHECK(throw_message(",1,2\n").find("line 1:") == 0);
  CHECK(throw_message("area_id,neurons,in_connections\n") == "area table has no rows");
}

TEST_CASE("mini multi-area validation and area weights") {
  MiniMultiAreaSpec spec = MiniMultiAreaSpec::uniform(3, 40, 10, 5);
  CHECK(spec.areas[2].id == "A2");
  CHECK(spec.inter_k[1][1] == 0);
  spec.intra_k_exc = 8;
  spec.intra_k_inh = 2;
  const auto specs = spec.area_specs();
  CHECK(specs[0].neurons == 50);
  CHECK(specs[0].in_connections == 50 * (10 + 10));
  MiniMultiAreaSpec bad = spec;
  bad.inter_k.pop_back();
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  bad = spec;
  bad.areas[1].id = "A0";
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
}

TEST_CASE("mini multi-area assignment checks") {
  MiniMultiAreaSpec spec = MiniMultiAreaSpec::uniform(3, 40, 10, 1);
  spec.intra_k_exc = 8;
  spec.intra_k_inh = 2;
  Network net(config(2));
  PackingAssignment a = round_robin_assignment(spec, 2);
  CHECK(a.bin_of == std::vector<std::uint32_t>{0, 1, 0});
  PackingAssignment missing = a;
  missing.area_ids.pop_back();
  missing.bin_of.pop_back();
  CHECK_THROWS_AS(build_mini_multiarea(net, spec, missing), InvalidArgument);
  PackingAssignment far = a;
  far.bin_of[1] = 2;
  CHECK_THROWS_AS(build_mini_multiarea(net, spec, far), InvalidArgument);
  PackingAssignment stranger = a;
  stranger.area_ids[1] = "B9";
  CHECK_THROWS_AS(build_mini_multiarea(net, spec, stranger), InvalidArgument);
}

TEST_CASE("uncoupled areas need no maps and send nothing") {
  for (CommMode mode : {CommMode::PointToPoint, CommMode::Collective}) {
    MiniMultiAreaSpec spec = MiniMultiAreaSpec::uniform(4, 40, 10, 0);
    spec.intra_k_exc = 8;
    spec.intra_k_inh = 2;
    Network net(config(4, mode));
    build_mini_multiarea(net, spec, round_robin_assignment(spec, 4));
    net.prepare();
    for (Rank r = 0; r < 4; ++r) {
      CHECK(net.rank(r).remote_maps().empty());
      CHECK(net.rank(r).image_count() == 0);
    }
    Simulation sim(net);
    const RunReport rep = sim.simulate(0.0, 20.0);
    CHECK(rep.transport.messages_sent() == 0);
  }
}

TEST_CASE("uniformly coupled areas create a map for every ordered rank pair") {
  MiniMultiAreaSpec spec = MiniMultiAreaSpec::uniform(4, 40, 10, 3);
  spec.intra_k_exc = 8;
  spec.intra_k_inh = 2;
  Network net(config(4));
  const MiniMultiArea model = build_mini_multiarea(net, spec, round_robin_assignment(spec, 4));
  CHECK(model.area_rank == std::vector<Rank>{0, 1, 2, 3});
  for (Rank t = 0; t < 4; ++t) {
    for (Rank s = 0; s < 4; ++s) {
      if (s == t) continue;
      const RemoteSourceMap* map = net.rank(t).remote_map(kPointToPoint, s);
      REQUIRE(map != nullptr);
      CHECK_FALSE(map->empty());
    }
  }
  const auto deg = proxysim::testing::global_indegrees(net);
  for (const auto& [gid, k] : deg) CHECK(k == 10 + 3 * 3);
  CHECK(proxysim::testing::sequences_match_maps(net));
}

TEST_CASE("explicit mini multi-area: packed layout matches one area per rank") {
  MiniMultiAreaSpec spec = MiniMultiAreaSpec::uniform(32, 40, 10, 1);
  spec.intra_k_exc = 8;
  spec.intra_k_inh = 2;
  spec.intra_delay_steps = 5;
  spec.inter_delay_steps = 10;
  spec.eta = 1.1;
  spec.explicit_connectivity = true;
  auto run = [&](std::uint32_t ranks, const PackingAssignment& a, CommMode mode) {
    Network net(config(ranks, mode));
    build_mini_multiarea(net, spec, a);
    net.prepare();
    Simulation sim(net);
    return sim.simulate(0.0, 30.0);
  };
  const RunReport spread = run(32, round_robin_assignment(spec, 32), CommMode::PointToPoint);
  REQUIRE(spread.spike_count > 0);
  const RunReport packed = run(8, pack_areas(spec.area_specs(), 8), CommMode::PointToPoint);
  const RunReport packed_coll = run(8, pack_areas(spec.area_specs(), 8), CommMode::Collective);
  CHECK(packed.raster_hash == spread.raster_hash);
  CHECK(packed_coll.raster_hash == spread.raster_hash);
  CHECK(packed.connections == spread.connections);
}
