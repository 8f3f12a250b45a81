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
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "proxysim/core/ids.hpp"
#include "proxysim/dynamics/spike_record.hpp"

namespace proxysim {

/// Sorted finite samples of one statistic over one population.
struct Distribution {
  std::string population;
  std::vector<double> values;

  Distribution() = default;
  /// Sorts `samples`; throws InvalidArgument on non-finite values.
  Distribution(std::string label, std::vector<double> samples);
  [[nodiscard]] bool empty() const noexcept { return values.empty(); }
  [[nodiscard]] double mean() const noexcept;
};

/// Half-open measurement interval [start, stop) in steps.
struct TimeWindow {
  TimeStep start = 0;
  TimeStep stop = 0;
  double resolution_ms = 0.1;

  [[nodiscard]] double duration_ms() const noexcept {
    return static_cast<double>(stop - start) * resolution_ms;
  }
  [[nodiscard]] bool contains(TimeStep t) const noexcept { return t >= start && t < stop; }
};

/// Spikes per second of every listed neuron inside the window, silent ones included.
Distribution firing_rates(const SpikeRecord& raster, std::span<const Gid> neurons,
                          const TimeWindow& window, std::string population = {});

/// std/mean of inter-spike intervals (population std) for neurons with at
/// least 3 spikes inside the window.
Distribution cv_isi(const SpikeRecord& raster, std::span<const Gid> neurons,
                    const TimeWindow& window, std::string population = {});

struct CorrelationOptions {
  std::size_t subset_size = 200;
  double bin_ms = 2.0;
  std::uint64_t seed = 0;
};

/// Pearson correlation of binned spike counts over all unordered pairs of a
/// subset drawn from the StatsSubset stream; pairs involving a zero-variance
/// train are skipped.
Distribution pearson_correlations(const SpikeRecord& raster, std::span<const Gid> neurons,
                                  const TimeWindow& window, const CorrelationOptions& options = {},
                                  std::string population = {});

/// Pearson correlation of two equally long count vectors; NaN if either has
/// zero variance.
double pearson(std::span<const double> a, std::span<const double> b) noexcept;

/// First-order Wasserstein distance between two empirical distributions,
/// integrating |F_a - F_b| over the merged support. Throws InvalidArgument if
/// either sample is empty.
double emd(std::span<const double> a, std::span<const double> b);
inline double emd(const Distribution& a, const Distribution& b) { return emd(a.values, b.values); }

// ---------------------------------------------------------------------------
// Seed-set comparison
// ---------------------------------------------------------------------------

inline constexpr const char* kStatRate = "rate";
inline constexpr const char* kStatCv = "cv_isi";
inline constexpr const char* kStatCorrelation = "correlation";

struct PopulationStats {
  std::string population;
  Distribution rate;
  Distribution cv_isi;
  Distribution correlation;
};

/// Statistics of one simulation, populations in a fixed order.
using RunStats = std::vector<PopulationStats>;

struct PopulationRaster {
  std::string population;
  std::vector<Gid> neurons;
};

RunStats compute_run_stats(const SpikeRecord& raster, std::span<const PopulationRaster> populations,
                           const TimeWindow& window, const CorrelationOptions& options = {});

struct StatComparison {
  std::string population;
  std::string statistic;
  std::vector<double> emd_same;   // A vs A'
  std::vector<double> emd_cross;  // A vs B
  double cross_median = 0.0;
  double whisker_low = 0.0;
  double whisker_high = 0.0;
  bool compatible = false;
};

struct EmdComparison {
  std::vector<StatComparison> entries;

  [[nodiscard]] bool all_compatible() const noexcept;
  /// Per population: compatible iff every statistic is.
  [[nodiscard]] bool population_compatible(const std::string& population) const;
  [[nodiscard]] const StatComparison& find(const std::string& population,
                                           const std::string& statistic) const;
  [[nodiscard]] nlohmann::ordered_json to_json() const;
};

/// Linear-interpolation quantile of sorted values, q in [0, 1].
double quantile_sorted(std::span<const double> sorted, double q);

/// EMD of pairs (A_i, A'_i) and (A_i, B_i) per population and statistic. The
/// verdict is compatible iff the median of the A-B values lies inside
/// [Q1 - 1.5 IQR, Q3 + 1.5 IQR] of the A-A' values. Sets need equal size >= 2
/// and identical population structure. An empty distribution against a
/// non-empty one counts as infinitely far.
EmdComparison validation_protocol(std::span<const RunStats> a, std::span<const RunStats> a_prime,
                                  std::span<const RunStats> b);

/// `population,statistic,value` rows for every sample of every run.
void write_stats_csv(std::ostream& out, std::span<const RunStats> runs);

}  // namespace proxysim
