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
#include "proxysim/cli/manifest.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <set>

#include <fmt/format.h>

#include "proxysim/core/errors.hpp"

namespace proxysim {
namespace {

using nlohmann::json;

/// Reads typed fields and records every problem instead of stopping at the first.
class FieldReader {
 public:
  explicit FieldReader(std::vector<std::string>& errors) : errors_(errors) {}

  void error(const std::string& path, const std::string& what) {
    errors_.push_back(fmt::format("{}: {}", path, what));
  }

  bool object(const json& doc, const std::string& path) {
    if (doc.is_object()) return true;
    error(path, "expected an object");
    return false;
  }

  void allowed_keys(const json& obj, const std::string& path,
                    std::initializer_list<const char*> keys) {
    for (const auto& [key, value] : obj.items()) {
      if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return key == k; })) {
        error(join(path, key), "unknown field");
      }
    }
  }

  void number(const json& obj, const std::string& path, const char* key, double& out) {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    if (!v.is_number()) return error(join(path, key), "expected a number");
    out = v.get<double>();
  }

  template <class Int>
  void integer(const json& obj, const std::string& path, const char* key, Int& out) {
    if (!obj.contains(key)) return;
    read_integer(obj.at(key), join(path, key), out);
  }

  template <class Int>
  bool read_integer(const json& v, const std::string& where, Int& out) {
    if (v.is_number_unsigned()) {
      const auto u = v.get<std::uint64_t>();
      if (u > static_cast<std::uint64_t>(std::numeric_limits<Int>::max())) {
        error(where, "value out of range");
        return false;
      }
      out = static_cast<Int>(u);
      return true;
    }
    if (v.is_number_integer()) {
      const auto s = v.get<std::int64_t>();
      if (s < static_cast<std::int64_t>(std::numeric_limits<Int>::min())) {
        error(where, "value out of range");
        return false;
      }
      out = static_cast<Int>(s);
      return true;
    }
    error(where, "expected an integer");
    return false;
  }

  void boolean(const json& obj, const std::string& path, const char* key, bool& out) {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    if (!v.is_boolean()) return error(join(path, key), "expected true or false");
    out = v.get<bool>();
  }

  void string(const json& obj, const std::string& path, const char* key, std::string& out) {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    if (!v.is_string()) return error(join(path, key), "expected a string");
    out = v.get<std::string>();
  }

  /// Runs a validate() that throws InvalidArgument and records its message.
  template <class F>
  void check(const std::string& path, F&& f) {
    try {
      f();
    } catch (const InvalidArgument& e) {
      error(path, e.what());
    }
  }

  static std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
  }

 private:
  std::vector<std::string>& errors_;
};

void read_neuron(FieldReader& in, const json& obj, const std::string& path, LifParams& p) {
  if (!in.object(obj, path)) return;
  in.allowed_keys(obj, path, {"V_rest", "V_reset", "V_th", "tau_m", "C_m", "t_ref", "I_e"});
  in.number(obj, path, "V_rest", p.V_rest);
  in.number(obj, path, "V_reset", p.V_reset);
  in.number(obj, path, "V_th", p.V_th);
  in.number(obj, path, "tau_m", p.tau_m);
  in.number(obj, path, "C_m", p.C_m);
  in.number(obj, path, "t_ref", p.t_ref);
  in.number(obj, path, "I_e", p.I_e);
  in.check(path, [&] { p.validate(); });
}

void read_config(FieldReader& in, const json& obj, RunManifest& m) {
  const std::string path = "config";
  if (!in.object(obj, path)) return;
  in.allowed_keys(obj, path, {"resolution_ms", "n_ranks", "comm_mode", "opt_level", "block_size",
                              "flag_threshold", "device_cap_bytes"});
  SimConfig& c = m.config;
  in.number(obj, path, "resolution_ms", c.resolution_ms);
  in.integer(obj, path, "n_ranks", c.n_ranks);
  in.integer(obj, path, "block_size", c.block_size);
  in.number(obj, path, "flag_threshold", c.flag_threshold);
  in.integer(obj, path, "device_cap_bytes", c.device_cap_bytes);

  if (obj.contains("comm_mode")) {
    const json& v = obj.at("comm_mode");
    const json list = v.is_array() ? v : json::array({v});
    m.comm_modes.clear();
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string where = fmt::format("config.comm_mode[{}]", i);
      if (!list[i].is_string()) {
        in.error(where, "expected \"p2p\" or \"collective\"");
        continue;
      }
      const auto mode = parse_comm_mode(list[i].get<std::string>());
      if (!mode) {
        in.error(where, fmt::format("unknown comm mode '{}'", list[i].get<std::string>()));
      } else {
        m.comm_modes.push_back(*mode);
      }
    }
    if (list.empty()) in.error("config.comm_mode", "empty list");
  }
  if (obj.contains("opt_level")) {
    const json& v = obj.at("opt_level");
    const json list = v.is_array() ? v : json::array({v});
    m.opt_levels.clear();
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string where = fmt::format("config.opt_level[{}]", i);
      int level = 0;
      if (!in.read_integer(list[i], where, level)) continue;
      if (level < 0 || level > 3) {
        in.error(where, fmt::format("optimization level {} outside 0..3", level));
      } else {
        m.opt_levels.push_back(level);
      }
    }
    if (list.empty()) in.error("config.opt_level", "empty list");
  }
}

void read_balanced(FieldReader& in, const json& obj, BalancedNetSpec& b) {
  const std::string path = "balanced";
  if (!in.object(obj, path)) return;
  in.allowed_keys(obj, path, {"scale", "base_exc", "base_inh", "k_in_exc", "k_in_inh", "j_exc_mv",
                              "g", "eta", "delay_steps", "v_init_mean", "v_init_sd"});
  in.number(obj, path, "scale", b.scale);
  in.integer(obj, path, "base_exc", b.base_exc);
  in.integer(obj, path, "base_inh", b.base_inh);
  in.integer(obj, path, "k_in_exc", b.k_in_exc);
  in.integer(obj, path, "k_in_inh", b.k_in_inh);
  in.number(obj, path, "j_exc_mv", b.j_exc_mv);
  in.number(obj, path, "g", b.g);
  in.number(obj, path, "eta", b.eta);
  in.integer(obj, path, "delay_steps", b.delay_steps);
  in.number(obj, path, "v_init_mean", b.v_init_mean);
  in.number(obj, path, "v_init_sd", b.v_init_sd);
}

void read_mini(FieldReader& in, const json& obj, MiniMultiAreaParams& p) {
  const std::string path = "mini_multiarea";
  if (!in.object(obj, path)) return;
  in.allowed_keys(obj, path, {"n_areas", "n_exc", "n_inh", "inter_k", "inter_k_matrix",
                              "intra_k_exc", "intra_k_inh", "j_exc_mv", "g", "eta",
                              "intra_delay_steps", "inter_delay_steps", "explicit_connectivity",
                              "layout"});
  in.integer(obj, path, "n_areas", p.n_areas);
  in.integer(obj, path, "n_exc", p.n_exc);
  in.integer(obj, path, "n_inh", p.n_inh);
  in.integer(obj, path, "inter_k", p.inter_k);
  in.integer(obj, path, "intra_k_exc", p.intra_k_exc);
  in.integer(obj, path, "intra_k_inh", p.intra_k_inh);
  in.number(obj, path, "j_exc_mv", p.j_exc_mv);
  in.number(obj, path, "g", p.g);
  in.number(obj, path, "eta", p.eta);
  in.integer(obj, path, "intra_delay_steps", p.intra_delay_steps);
  in.integer(obj, path, "inter_delay_steps", p.inter_delay_steps);
  in.boolean(obj, path, "explicit_connectivity", p.explicit_connectivity);
  if (obj.contains("layout")) {
    std::string layout;
    in.string(obj, path, "layout", layout);
    if (layout == "round_robin") {
      p.layout = AreaLayout::RoundRobin;
    } else if (layout == "packed") {
      p.layout = AreaLayout::Packed;
    } else if (obj.at("layout").is_string()) {
      in.error("mini_multiarea.layout", fmt::format("unknown layout '{}'", layout));
    }
  }
  if (obj.contains("inter_k_matrix")) {
    const json& rows = obj.at("inter_k_matrix");
    p.inter_k_matrix.clear();
    if (!rows.is_array()) {
      in.error("mini_multiarea.inter_k_matrix", "expected an array of rows");
    } else {
      for (std::size_t r = 0; r < rows.size(); ++r) {
        std::vector<std::uint64_t> row;
        if (!rows[r].is_array()) {
          in.error(fmt::format("mini_multiarea.inter_k_matrix[{}]", r), "expected an array");
          continue;
        }
        for (std::size_t c = 0; c < rows[r].size(); ++c) {
          std::uint64_t k = 0;
          in.read_integer(rows[r][c], fmt::format("mini_multiarea.inter_k_matrix[{}][{}]", r, c), k);
          row.push_back(k);
        }
        p.inter_k_matrix.push_back(std::move(row));
      }
    }
  }
}

}  // namespace

std::string_view to_string(ModelKind kind) noexcept {
  return kind == ModelKind::Balanced ? "balanced" : "mini-multiarea";
}

MiniMultiAreaSpec MiniMultiAreaParams::to_spec() const {
  MiniMultiAreaSpec spec = MiniMultiAreaSpec::uniform(n_areas, n_exc, n_inh, inter_k);
  if (!inter_k_matrix.empty()) spec.inter_k = inter_k_matrix;
  spec.intra_k_exc = intra_k_exc;
  spec.intra_k_inh = intra_k_inh;
  spec.j_exc_mv = j_exc_mv;
  spec.g = g;
  spec.eta = eta;
  spec.intra_delay_steps = intra_delay_steps;
  spec.inter_delay_steps = inter_delay_steps;
  spec.explicit_connectivity = explicit_connectivity;
  return spec;
}

SimConfig RunManifest::run_config(std::uint64_t seed, CommMode mode, int level) const {
  SimConfig c = config;
  c.seed = seed;
  c.comm_mode = mode;
  c.opt_level = level;
  return c;
}

std::vector<std::string> manifest_errors(const json& doc) {
  std::vector<std::string> errors;
  try {
    parse_manifest(doc);
  } catch (const InvalidArgument& e) {
    // One problem per line after the summary line.
    std::string text = e.what();
    std::size_t start = text.find('\n');
    while (start != std::string::npos) {
      const std::size_t end = text.find('\n', start + 1);
      std::string line = text.substr(start + 1, end == std::string::npos ? end : end - start - 1);
      if (line.rfind("  ", 0) == 0) line.erase(0, 2);
      if (!line.empty()) errors.push_back(std::move(line));
      start = end;
    }
  }
  return errors;
}

RunManifest parse_manifest(const json& doc) {
  std::vector<std::string> errors;
  FieldReader in(errors);
  RunManifest m;
  if (in.object(doc, "manifest")) {
    in.allowed_keys(doc, "", {"model", "config", "seeds", "repeat", "warmup_ms", "model_ms",
                              "record_raster", "output_dir", "neuron", "balanced",
                              "mini_multiarea"});
    if (!doc.contains("model")) {
      in.error("model", "missing (balanced | mini-multiarea)");
    } else {
      std::string model;
      in.string(doc, "", "model", model);
      if (model == "balanced") {
        m.model = ModelKind::Balanced;
      } else if (model == "mini-multiarea") {
        m.model = ModelKind::MiniMultiArea;
      } else if (doc.at("model").is_string()) {
        in.error("model", fmt::format("unknown model '{}'", model));
      }
    }
    if (doc.contains("config")) read_config(in, doc.at("config"), m);

    if (!doc.contains("seeds")) {
      in.error("seeds", "missing seed list");
    } else if (!doc.at("seeds").is_array() || doc.at("seeds").empty()) {
      in.error("seeds", "expected a non-empty array of integers");
    } else {
      const json& seeds = doc.at("seeds");
      std::set<std::uint64_t> seen;
      for (std::size_t i = 0; i < seeds.size(); ++i) {
        std::uint64_t s = 0;
        const std::string where = fmt::format("seeds[{}]", i);
        if (!in.read_integer(seeds[i], where, s)) continue;
        if (!seen.insert(s).second) in.error(where, fmt::format("duplicate seed {}", s));
        m.seeds.push_back(s);
      }
    }
    if (doc.contains("repeat")) {
      std::uint64_t repeat = 0;
      if (in.read_integer(doc.at("repeat"), "repeat", repeat) && repeat != m.seeds.size()) {
        in.error("repeat", fmt::format("repeat count {} does not match {} seeds", repeat,
                                       m.seeds.size()));
      }
    }
    in.number(doc, "", "warmup_ms", m.warmup_ms);
    in.number(doc, "", "model_ms", m.model_ms);
    if (!(m.warmup_ms >= 0.0)) in.error("warmup_ms", "must be non-negative");
    if (!(m.model_ms > 0.0)) in.error("model_ms", "must be positive");
    in.boolean(doc, "", "record_raster", m.record_raster);
    in.string(doc, "", "output_dir", m.output_dir);

    LifParams neuron;
    if (doc.contains("neuron")) read_neuron(in, doc.at("neuron"), "neuron", neuron);
    m.neuron = neuron;
    m.balanced.neuron = neuron;
    if (doc.contains("balanced")) read_balanced(in, doc.at("balanced"), m.balanced);
    if (doc.contains("mini_multiarea")) read_mini(in, doc.at("mini_multiarea"), m.mini);

    in.check("config", [&] { m.config.validate(); });
    m.balanced.n_ranks = m.config.n_ranks;
    if (m.model == ModelKind::Balanced) {
      in.check("balanced", [&] { m.balanced.validate(); });
    } else {
      in.check("mini_multiarea", [&] {
        MiniMultiAreaSpec spec = m.mini.to_spec();
        spec.neuron = neuron;
        spec.validate();
      });
    }
  }
  if (!errors.empty()) {
    std::string text = fmt::format("invalid manifest ({} problem{}):", errors.size(),
                                   errors.size() == 1 ? "" : "s");
    for (const std::string& e : errors) text += "\n  " + e;
    throw InvalidArgument(text);
  }
  return m;
}

RunManifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open manifest '{}'", path));
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(fmt::format("manifest '{}': {}", path, e.what()));
  }
  return parse_manifest(doc);
}

nlohmann::ordered_json serialize_manifest(const RunManifest& m) {
  using nlohmann::ordered_json;
  ordered_json out;
  out["model"] = std::string(to_string(m.model));
  ordered_json config;
  config["resolution_ms"] = m.config.resolution_ms;
  config["n_ranks"] = m.config.n_ranks;
  ordered_json modes = ordered_json::array();
  for (CommMode mode : m.comm_modes) modes.push_back(std::string(to_string(mode)));
  config["comm_mode"] = std::move(modes);
  config["opt_level"] = m.opt_levels;
  config["block_size"] = m.config.block_size;
  config["flag_threshold"] = m.config.flag_threshold;
  config["device_cap_bytes"] = m.config.device_cap_bytes;
  out["config"] = std::move(config);
  out["seeds"] = m.seeds;
  out["warmup_ms"] = m.warmup_ms;
  out["model_ms"] = m.model_ms;
  out["record_raster"] = m.record_raster;
  out["output_dir"] = m.output_dir;

  const LifParams& n = m.neuron;
  out["neuron"] = {{"V_rest", n.V_rest}, {"V_reset", n.V_reset}, {"V_th", n.V_th},
                   {"tau_m", n.tau_m},   {"C_m", n.C_m},         {"t_ref", n.t_ref},
                   {"I_e", n.I_e}};
  const BalancedNetSpec& b = m.balanced;
  out["balanced"] = {{"scale", b.scale},       {"base_exc", b.base_exc},
                     {"base_inh", b.base_inh}, {"k_in_exc", b.k_in_exc},
                     {"k_in_inh", b.k_in_inh}, {"j_exc_mv", b.j_exc_mv},
                     {"g", b.g},               {"eta", b.eta},
                     {"delay_steps", b.delay_steps}, {"v_init_mean", b.v_init_mean},
                     {"v_init_sd", b.v_init_sd}};
  const MiniMultiAreaParams& p = m.mini;
  out["mini_multiarea"] = {{"n_areas", p.n_areas},
                           {"n_exc", p.n_exc},
                           {"n_inh", p.n_inh},
                           {"inter_k", p.inter_k},
                           {"inter_k_matrix", p.inter_k_matrix},
                           {"intra_k_exc", p.intra_k_exc},
                           {"intra_k_inh", p.intra_k_inh},
                           {"j_exc_mv", p.j_exc_mv},
                           {"g", p.g},
                           {"eta", p.eta},
                           {"intra_delay_steps", p.intra_delay_steps},
                           {"inter_delay_steps", p.inter_delay_steps},
                           {"explicit_connectivity", p.explicit_connectivity},
                           {"layout", p.layout == AreaLayout::Packed ? "packed" : "round_robin"}};
  return out;
}

}  // namespace proxysim
