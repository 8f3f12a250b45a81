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
#include "proxysim/cli/commands.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include <fmt/format.h>

#include "proxysim/core/errors.hpp"
#include "proxysim/core/rng.hpp"
#include "proxysim/engine/simulation.hpp"
#include "proxysim/models/balanced.hpp"
#include "proxysim/models/mini_multiarea.hpp"

namespace proxysim {
namespace {

namespace fs = std::filesystem;

std::vector<Gid> gids_of(std::span<const NodeRange> ranges) {
  std::vector<Gid> out;
  for (const NodeRange& r : ranges) {
    for (std::uint32_t i = 0; i < r.count; ++i) out.push_back(r.first_gid + i);
  }
  return out;
}

MiniMultiAreaSpec mini_spec(const RunManifest& m) {
  MiniMultiAreaSpec spec = m.mini.to_spec();
  spec.neuron = m.neuron;
  return spec;
}

/// Population names and sizes, known before anything is built.
std::vector<std::pair<std::string, std::uint64_t>> population_layout(const RunManifest& m) {
  std::vector<std::pair<std::string, std::uint64_t>> out;
  if (m.model == ModelKind::Balanced) {
    BalancedNetSpec spec = m.balanced;
    spec.n_ranks = m.config.n_ranks;
    const BalancedNetSize size = balanced_network_size(spec);
    out.emplace_back("E", size.exc_per_rank * spec.n_ranks);
    out.emplace_back("I", size.inh_per_rank * spec.n_ranks);
  } else {
    for (const MiniArea& a : mini_spec(m).areas) {
      out.emplace_back(a.id + "_E", a.n_exc);
      out.emplace_back(a.id + "_I", a.n_inh);
    }
  }
  return out;
}

fs::path ensure_dir(const std::string& dir) {
  if (dir.empty()) throw InvalidArgument("no output directory given");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError(fmt::format("cannot create output directory '{}': {}", dir, ec.message()));
  return fs::path(dir);
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError(fmt::format("cannot write '{}'", path.string()));
  return out;
}

std::string run_tag(std::uint64_t seed, CommMode mode, int level) {
  return fmt::format("s{}_{}_o{}", seed, to_string(mode), level);
}

std::vector<RunStats> run_set(const RunManifest& m, std::span<const std::uint64_t> seeds,
                              std::vector<std::string>& failures) {
  std::vector<RunStats> out;
  for (std::uint64_t seed : seeds) {
    RunResult run = execute_run(m, seed, m.comm_modes.front(), m.opt_levels.front());
    for (auto& f : run.failures) failures.push_back(std::move(f));
    CorrelationOptions opts;
    opts.seed = seed;
    out.push_back(compute_run_stats(run.raster, run.populations, run.window, opts));
  }
  return out;
}

}  // namespace

std::vector<PopulationRaster> build_model(Network& network, const RunManifest& m) {
  std::vector<PopulationRaster> pops;
  if (m.model == ModelKind::Balanced) {
    BalancedNetSpec spec = m.balanced;
    spec.n_ranks = network.rank_count();
    spec.neuron = m.neuron;
    const BalancedNetwork model = build_balanced_network(network, spec);
    pops.push_back({"E", gids_of(model.exc)});
    pops.push_back({"I", gids_of(model.inh)});
  } else {
    const MiniMultiAreaSpec spec = mini_spec(m);
    const PackingAssignment assignment =
        m.mini.layout == AreaLayout::Packed ? pack_areas(spec.area_specs(), network.rank_count())
                                            : round_robin_assignment(spec, network.rank_count());
    const MiniMultiArea model = build_mini_multiarea(network, spec, assignment);
    for (std::size_t a = 0; a < spec.areas.size(); ++a) {
      pops.push_back({spec.areas[a].id + "_E", gids_of(std::span(&model.exc[a], 1))});
      pops.push_back({spec.areas[a].id + "_I", gids_of(std::span(&model.inh[a], 1))});
    }
  }
  return pops;
}

RunResult execute_run(const RunManifest& m, std::uint64_t seed, CommMode mode, int level,
                      Clock clock) {
  const SimConfig config = m.run_config(seed, mode, level);
  Network network(config, std::move(clock));
  RunResult result;
  result.populations = build_model(network, m);
  network.prepare();

  const TransportStats before = network.transport().stats_snapshot();
  const std::string tag = run_tag(seed, mode, level);
  if (before.construction.messages != 0 || before.preparation.messages != 0) {
    result.failures.push_back(fmt::format(
        "{}: {} messages sent before propagation", tag,
        before.construction.messages + before.preparation.messages));
  }
  if (m.model == ModelKind::Balanced) {
    const std::uint64_t expected = network.neuron_total() * m.balanced.k_in_total();
    if (network.connection_total() != expected) {
      result.failures.push_back(fmt::format("{}: {} connections, expected {}", tag,
                                            network.connection_total(), expected));
    }
  }

  Simulation sim(network);
  result.report = sim.simulate(m.warmup_ms, m.model_ms);
  result.raster = sim.record();
  const auto warmup_steps = static_cast<TimeStep>(std::llround(m.warmup_ms / config.resolution_ms));
  const auto model_steps = static_cast<TimeStep>(std::llround(m.model_ms / config.resolution_ms));
  result.window = {warmup_steps, warmup_steps + model_steps, config.resolution_ms};
  return result;
}

BenchmarkResult run_benchmark(const RunManifest& m, const std::string& out_dir) {
  const fs::path dir = ensure_dir(out_dir.empty() ? m.output_dir : out_dir);
  BenchmarkResult result;
  std::ofstream summary = open_out(dir / "summary.csv");
  summary << "seed,comm_mode,opt_level,n_ranks,neurons,connections,image_nodes,spike_count,"
             "raster_hash,initialization_s,node_creation_s,local_connection_s,"
             "remote_connection_s,preparation_s,propagation_s,rtf,max_device_peak_bytes,"
             "max_host_peak_bytes,propagation_messages,propagation_bytes,propagation_rounds\n";
  for (std::uint64_t seed : m.seeds) {
    std::set<std::uint64_t> hashes;
    for (CommMode mode : m.comm_modes) {
      for (int level : m.opt_levels) {
        RunResult run = execute_run(m, seed, mode, level);
        const std::string tag = run_tag(seed, mode, level);
        for (auto& f : run.failures) result.failures.push_back(std::move(f));
        hashes.insert(run.report.raster_hash);
        {
          std::ofstream out = open_out(dir / fmt::format("report_{}.json", tag));
          out << to_json(run.report).dump(2) << "\n";
        }
        if (m.record_raster) {
          std::ofstream out = open_out(dir / fmt::format("raster_{}.tsv", tag));
          run.raster.write_tsv(out, m.config.resolution_ms);
        }
        const RunReport& r = run.report;
        const PhaseTimers& t = r.timers;
        summary << fmt::format(
            "{},{},{},{},{},{},{},{},{:016x},{:.6g},{:.6g},{:.6g},{:.6g},{:.6g},{:.6g},{:.6g},{},{},"
            "{},{},{}\n",
            seed, to_string(mode), level, r.n_ranks, r.neurons, r.connections, r.image_nodes,
            r.spike_count, r.raster_hash, t.initialization, t.node_creation, t.local_connection,
            t.remote_connection, t.preparation, t.propagation, r.rtf, r.max_device_peak(),
            r.max_host_peak(), r.transport.propagation.messages, r.transport.propagation.bytes,
            r.transport.propagation.rounds);
        result.reports.push_back(std::move(run.report));
      }
    }
    if (hashes.size() > 1) {
      result.failures.push_back(
          fmt::format("seed {}: raster differs across communication modes or optimization levels",
                      seed));
    }
  }
  return result;
}

std::vector<std::uint64_t> derive_seeds(std::span<const std::uint64_t> seeds,
                                        std::span<const std::uint64_t> avoid) {
  std::set<std::uint64_t> taken(avoid.begin(), avoid.end());
  taken.insert(seeds.begin(), seeds.end());
  std::vector<std::uint64_t> out;
  for (std::uint64_t s : seeds) {
    std::uint64_t d = mix64(s ^ 0x5eedda7a5eedda7aull);
    while (!taken.insert(d).second) d = mix64(d);
    out.push_back(d);
  }
  return out;
}

ValidateResult run_validate(const RunManifest& a, const RunManifest& b,
                            const std::string& out_dir) {
  if (a.model != b.model) {
    throw InvalidArgument(fmt::format("set A runs '{}' but set B runs '{}'", to_string(a.model),
                                      to_string(b.model)));
  }
  if (population_layout(a) != population_layout(b)) {
    throw InvalidArgument("set A and set B have different population structures");
  }
  for (const RunManifest* m : {&a, &b}) {
    if (m->comm_modes.size() != 1 || m->opt_levels.size() != 1) {
      throw InvalidArgument("validation needs one comm_mode and one opt_level per manifest");
    }
  }
  if (a.seeds.size() != b.seeds.size()) {
    throw InvalidArgument(fmt::format("set A has {} seeds but set B has {}", a.seeds.size(),
                                      b.seeds.size()));
  }
  if (a.seeds.size() < 2) throw InvalidArgument("validation needs at least two seeds per set");
  const fs::path dir = ensure_dir(out_dir.empty() ? a.output_dir : out_dir);

  ValidateResult result;
  result.seeds_a = a.seeds;
  result.seeds_b = b.seeds;
  result.seeds_a_prime = derive_seeds(a.seeds, b.seeds);

  const auto stats_a = run_set(a, result.seeds_a, result.failures);
  const auto stats_a_prime = run_set(a, result.seeds_a_prime, result.failures);
  const auto stats_b = run_set(b, result.seeds_b, result.failures);
  result.comparison = validation_protocol(stats_a, stats_a_prime, stats_b);

  for (const auto& [name, set] : {std::pair{"a", &stats_a}, std::pair{"a_prime", &stats_a_prime},
                                  std::pair{"b", &stats_b}}) {
    std::ofstream out = open_out(dir / fmt::format("stats_{}.csv", name));
    write_stats_csv(out, *set);
  }
  nlohmann::ordered_json doc = result.comparison.to_json();
  doc["seeds_a"] = result.seeds_a;
  doc["seeds_a_prime"] = result.seeds_a_prime;
  doc["seeds_b"] = result.seeds_b;
  std::ofstream out = open_out(dir / "comparison.json");
  out << doc.dump(2) << "\n";
  return result;
}

PackResult run_pack(const std::string& csv_path, std::uint32_t bins, const std::string& out_path) {
  std::ifstream in(csv_path);
  if (!in) throw IoError(fmt::format("cannot open area table '{}'", csv_path));
  PackResult result;
  result.assignment = pack_areas(read_area_csv(in), bins);
  if (!out_path.empty()) {
    const fs::path path(out_path);
    if (path.has_parent_path()) ensure_dir(path.parent_path().string());
    std::ofstream out = open_out(path);
    out << result.assignment.to_json().dump(2) << "\n";
  }
  result.balance_report = "bin,weight\n";
  for (std::size_t b = 0; b < result.assignment.bin_weight.size(); ++b) {
    result.balance_report += fmt::format("{},{}\n", b, result.assignment.bin_weight[b]);
  }
  return result;
}

}  // namespace proxysim
