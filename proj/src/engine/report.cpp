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
#include "proxysim/engine/report.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "proxysim/core/errors.hpp"

namespace proxysim {
namespace {

nlohmann::json counters_json(const PhaseCounters& c) {
  return {{"messages", c.messages}, {"bytes", c.bytes}, {"rounds", c.rounds}};
}

PhaseCounters counters_from(const nlohmann::json& j) {
  return {j.at("messages").get<std::uint64_t>(), j.at("bytes").get<std::uint64_t>(),
          j.at("rounds").get<std::uint64_t>()};
}

}  // namespace

std::uint64_t RunReport::max_device_peak() const noexcept {
  std::uint64_t m = 0;
  for (const auto& a : arenas) m = std::max(m, a.device_peak);
  return m;
}

std::uint64_t RunReport::max_host_peak() const noexcept {
  std::uint64_t m = 0;
  for (const auto& a : arenas) m = std::max(m, a.host_peak);
  return m;
}

double real_time_factor(double propagation_wall_s, double model_ms) noexcept {
  if (!(model_ms > 0.0)) return 0.0;
  return propagation_wall_s / (model_ms / 1000.0);
}

nlohmann::json to_json(const RunReport& r) {
  nlohmann::json arenas = nlohmann::json::array();
  for (const auto& a : r.arenas) {
    arenas.push_back({{"rank", a.rank},
                      {"host_peak_bytes", a.host_peak},
                      {"device_peak_bytes", a.device_peak},
                      {"host_bytes", a.host_current},
                      {"device_bytes", a.device_current}});
  }
  return {
      {"timers",
       {{"initialization_s", r.timers.initialization},
        {"node_creation_s", r.timers.node_creation},
        {"local_connection_s", r.timers.local_connection},
        {"remote_connection_s", r.timers.remote_connection},
        {"preparation_s", r.timers.preparation},
        {"propagation_s", r.timers.propagation}}},
      {"rtf", r.rtf},
      {"warmup_ms", r.warmup_ms},
      {"model_ms", r.model_ms},
      {"resolution_ms", r.resolution_ms},
      {"steps", r.steps},
      {"n_ranks", r.n_ranks},
      {"comm_mode", r.comm_mode},
      {"opt_level", r.opt_level},
      {"seed", r.seed},
      {"neurons", r.neurons},
      {"connections", r.connections},
      {"image_nodes", r.image_nodes},
      {"spike_count", r.spike_count},
      {"raster_hash", fmt::format("{:016x}", r.raster_hash)},
      {"host_accesses", r.host_accesses},
      {"arenas", arenas},
      {"transport",
       {{"messages_sent", r.transport.messages_sent()},
        {"bytes_sent", r.transport.bytes_sent()},
        {"construction", counters_json(r.transport.construction)},
        {"preparation", counters_json(r.transport.preparation)},
        {"propagation", counters_json(r.transport.propagation)}}},
  };
}

RunReport run_report_from_json(const nlohmann::json& j) {
  try {
    RunReport r;
    const auto& t = j.at("timers");
    r.timers.initialization = t.at("initialization_s").get<double>();
    r.timers.node_creation = t.at("node_creation_s").get<double>();
    r.timers.local_connection = t.at("local_connection_s").get<double>();
    r.timers.remote_connection = t.at("remote_connection_s").get<double>();
    r.timers.preparation = t.at("preparation_s").get<double>();
    r.timers.propagation = t.at("propagation_s").get<double>();
    r.rtf = j.at("rtf").get<double>();
    r.warmup_ms = j.at("warmup_ms").get<double>();
    r.model_ms = j.at("model_ms").get<double>();
    r.resolution_ms = j.at("resolution_ms").get<double>();
    r.steps = j.at("steps").get<std::uint64_t>();
    r.n_ranks = j.at("n_ranks").get<std::uint32_t>();
    r.comm_mode = j.at("comm_mode").get<std::string>();
    r.opt_level = j.at("opt_level").get<int>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.neurons = j.at("neurons").get<std::uint64_t>();
    r.connections = j.at("connections").get<std::uint64_t>();
    r.image_nodes = j.at("image_nodes").get<std::uint64_t>();
    r.spike_count = j.at("spike_count").get<std::uint64_t>();
    r.raster_hash = std::stoull(j.at("raster_hash").get<std::string>(), nullptr, 16);
    r.host_accesses = j.at("host_accesses").get<std::uint64_t>();
    for (const auto& a : j.at("arenas")) {
      r.arenas.push_back({a.at("rank").get<Rank>(), a.at("host_peak_bytes").get<std::uint64_t>(),
                          a.at("device_peak_bytes").get<std::uint64_t>(),
                          a.at("host_bytes").get<std::uint64_t>(),
                          a.at("device_bytes").get<std::uint64_t>()});
    }
    const auto& tr = j.at("transport");
    r.transport.construction = counters_from(tr.at("construction"));
    r.transport.preparation = counters_from(tr.at("preparation"));
    r.transport.propagation = counters_from(tr.at("propagation"));
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(fmt::format("run report: {}", e.what()));
  }
}

}  // namespace proxysim
