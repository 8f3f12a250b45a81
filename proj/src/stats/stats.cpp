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
#include "proxysim/stats/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include <fmt/format.h>

#include "proxysim/core/errors.hpp"
#include "proxysim/core/rng.hpp"

namespace proxysim {
namespace {

/// Spike steps of `gid` that fall inside the window.
std::span<const TimeStep> window_train(const SpikeRecord& raster, Gid gid,
                                       const TimeWindow& window) {
  const auto it = raster.trains().find(gid);
  if (it == raster.trains().end()) return {};
  const auto& train = it->second;
  const auto lo = std::lower_bound(train.begin(), train.end(), window.start);
  const auto hi = std::lower_bound(lo, train.end(), window.stop);
  return {train.data() + (lo - train.begin()), static_cast<std::size_t>(hi - lo)};
}

void check_window(const TimeWindow& window) {
  if (window.stop <= window.start || !(window.resolution_ms > 0.0)) {
    throw InvalidArgument("measurement window must have positive duration");
  }
}

double median_of(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  return quantile_sorted(values, 0.5);
}

double emd_or_inf(const Distribution& a, const Distribution& b) {
  if (a.empty() && b.empty()) return 0.0;
  if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
  return emd(a, b);
}

const Distribution& stat_of(const PopulationStats& p, std::size_t which) {
  switch (which) {
    case 0: return p.rate;
    case 1: return p.cv_isi;
    default: return p.correlation;
  }
}

}  // namespace

Distribution::Distribution(std::string label, std::vector<double> samples)
    : population(std::move(label)), values(std::move(samples)) {
  for (double v : values) {
    if (!std::isfinite(v)) throw InvalidArgument("distribution samples must be finite");
  }
  std::sort(values.begin(), values.end());
}

double Distribution::mean() const noexcept {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

Distribution firing_rates(const SpikeRecord& raster, std::span<const Gid> neurons,
                          const TimeWindow& window, std::string population) {
  check_window(window);
  const double seconds = window.duration_ms() / 1000.0;
  std::vector<double> rates;
  rates.reserve(neurons.size());
  for (Gid gid : neurons) {
    rates.push_back(static_cast<double>(window_train(raster, gid, window).size()) / seconds);
  }
  return Distribution(std::move(population), std::move(rates));
}

Distribution cv_isi(const SpikeRecord& raster, std::span<const Gid> neurons,
                    const TimeWindow& window, std::string population) {
  check_window(window);
  std::vector<double> cvs;
  for (Gid gid : neurons) {
    const auto train = window_train(raster, gid, window);
    if (train.size() < 3) continue;
    const std::size_t n = train.size() - 1;
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += static_cast<double>(train[i + 1] - train[i]);
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = static_cast<double>(train[i + 1] - train[i]) - mean;
      var += d * d;
    }
    var /= static_cast<double>(n);
    cvs.push_back(std::sqrt(var) / mean);
  }
  return Distribution(std::move(population), std::move(cvs));
}

double pearson(std::span<const double> a, std::span<const double> b) noexcept {
  const std::size_t n = std::min(a.size(), b.size());
  if (n == 0) return std::numeric_limits<double>::quiet_NaN();
  double ma = 0.0;
  double mb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= static_cast<double>(n);
  mb /= static_cast<double>(n);
  double sab = 0.0;
  double saa = 0.0;
  double sbb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

Distribution pearson_correlations(const SpikeRecord& raster, std::span<const Gid> neurons,
                                  const TimeWindow& window, const CorrelationOptions& options,
                                  std::string population) {
  check_window(window);
  if (!(options.bin_ms > 0.0)) throw InvalidArgument("correlation bin must be positive");
  const auto steps_per_bin =
      std::max<TimeStep>(1, static_cast<TimeStep>(std::llround(options.bin_ms / window.resolution_ms)));
  const auto n_bins = static_cast<std::size_t>((window.stop - window.start + steps_per_bin - 1) /
                                               steps_per_bin);

  std::vector<Gid> subset(neurons.begin(), neurons.end());
  if (subset.size() > options.subset_size) {
    RngStream rng(options.seed, StreamId::tagged(StreamPurpose::StatsSubset, subset.size()));
    for (std::size_t i = 0; i < options.subset_size; ++i) {
      const std::size_t j = i + rng.uniform_index(subset.size() - i);
      std::swap(subset[i], subset[j]);
    }
    subset.resize(options.subset_size);
  }

  std::vector<std::vector<double>> counts(subset.size(), std::vector<double>(n_bins, 0.0));
  for (std::size_t i = 0; i < subset.size(); ++i) {
    for (TimeStep t : window_train(raster, subset[i], window)) {
      counts[i][static_cast<std::size_t>((t - window.start) / steps_per_bin)] += 1.0;
    }
  }
  std::vector<double> r;
  for (std::size_t i = 0; i < subset.size(); ++i) {
    for (std::size_t j = i + 1; j < subset.size(); ++j) {
      const double c = pearson(counts[i], counts[j]);
      if (!std::isnan(c)) r.push_back(c);
    }
  }
  return Distribution(std::move(population), std::move(r));
}

double emd(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw InvalidArgument("EMD needs two non-empty samples");
  std::vector<double> xa(a.begin(), a.end());
  std::vector<double> xb(b.begin(), b.end());
  std::sort(xa.begin(), xa.end());
  std::sort(xb.begin(), xb.end());
  const double na = static_cast<double>(xa.size());
  const double nb = static_cast<double>(xb.size());
  // Sweep the merged support; between consecutive points both CDFs are flat.
  std::size_t i = 0;
  std::size_t j = 0;
  double total = 0.0;
  double x = std::min(xa.front(), xb.front());
  while (i < xa.size() || j < xb.size()) {
    while (i < xa.size() && xa[i] <= x) ++i;
    while (j < xb.size() && xb[j] <= x) ++j;
    if (i == xa.size() && j == xb.size()) break;
    double next = std::numeric_limits<double>::infinity();
    if (i < xa.size()) next = xa[i];
    if (j < xb.size()) next = std::min(next, xb[j]);
    total += std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb) * (next - x);
    x = next;
  }
  return total;
}

RunStats compute_run_stats(const SpikeRecord& raster, std::span<const PopulationRaster> populations,
                           const TimeWindow& window, const CorrelationOptions& options) {
  RunStats out;
  for (const PopulationRaster& p : populations) {
    PopulationStats s;
    s.population = p.population;
    s.rate = firing_rates(raster, p.neurons, window, p.population);
    s.cv_isi = cv_isi(raster, p.neurons, window, p.population);
    s.correlation = pearson_correlations(raster, p.neurons, window, options, p.population);
    out.push_back(std::move(s));
  }
  return out;
}

double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw InvalidArgument("quantile of an empty sample");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  if (frac == 0.0) return sorted[lo];
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

bool EmdComparison::all_compatible() const noexcept {
  return std::all_of(entries.begin(), entries.end(),
                     [](const StatComparison& e) { return e.compatible; });
}

bool EmdComparison::population_compatible(const std::string& population) const {
  bool seen = false;
  for (const StatComparison& e : entries) {
    if (e.population != population) continue;
    seen = true;
    if (!e.compatible) return false;
  }
  if (!seen) throw InvalidArgument(fmt::format("no population '{}' in comparison", population));
  return true;
}

const StatComparison& EmdComparison::find(const std::string& population,
                                          const std::string& statistic) const {
  for (const StatComparison& e : entries) {
    if (e.population == population && e.statistic == statistic) return e;
  }
  throw InvalidArgument(fmt::format("no entry for {}/{}", population, statistic));
}

nlohmann::ordered_json EmdComparison::to_json() const {
  using nlohmann::ordered_json;
  // JSON has no infinity; an unmatched empty distribution is written as null.
  auto number = [](double v) -> ordered_json {
    return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr);
  };
  ordered_json out;
  ordered_json list = ordered_json::array();
  std::vector<std::string> populations;
  for (const StatComparison& e : entries) {
    ordered_json item;
    item["population"] = e.population;
    item["statistic"] = e.statistic;
    ordered_json same = ordered_json::array();
    for (double v : e.emd_same) same.push_back(number(v));
    ordered_json cross = ordered_json::array();
    for (double v : e.emd_cross) cross.push_back(number(v));
    item["emd_a_vs_a_prime"] = std::move(same);
    item["emd_a_vs_b"] = std::move(cross);
    item["a_vs_b_median"] = number(e.cross_median);
    item["whisker_low"] = number(e.whisker_low);
    item["whisker_high"] = number(e.whisker_high);
    item["compatible"] = e.compatible;
    list.push_back(std::move(item));
    if (std::find(populations.begin(), populations.end(), e.population) == populations.end()) {
      populations.push_back(e.population);
    }
  }
  ordered_json verdicts = ordered_json::object();
  for (const std::string& p : populations) {
    verdicts[p] = population_compatible(p) ? "compatible" : "incompatible";
  }
  out["verdict"] = all_compatible() ? "compatible" : "incompatible";
  out["populations"] = std::move(verdicts);
  out["comparisons"] = std::move(list);
  return out;
}

EmdComparison validation_protocol(std::span<const RunStats> a, std::span<const RunStats> a_prime,
                                  std::span<const RunStats> b) {
  const std::size_t n = a.size();
  if (a_prime.size() != n || b.size() != n) {
    throw InvalidArgument(fmt::format("seed sets differ in size ({}, {}, {})", n, a_prime.size(),
                                      b.size()));
  }
  if (n < 2) throw InvalidArgument("validation needs at least two runs per set");
  auto same_structure = [&](const RunStats& x) {
    if (x.size() != a[0].size()) return false;
    for (std::size_t p = 0; p < x.size(); ++p) {
      if (x[p].population != a[0][p].population) return false;
    }
    return true;
  };
  for (auto set : {a, a_prime, b}) {
    for (const RunStats& run : set) {
      if (!same_structure(run)) throw InvalidArgument("runs have mismatched population structure");
    }
  }

  static constexpr const char* kNames[] = {kStatRate, kStatCv, kStatCorrelation};
  EmdComparison out;
  for (std::size_t p = 0; p < a[0].size(); ++p) {
    for (std::size_t s = 0; s < 3; ++s) {
      StatComparison cmp;
      cmp.population = a[0][p].population;
      cmp.statistic = kNames[s];
      for (std::size_t i = 0; i < n; ++i) {
        cmp.emd_same.push_back(emd_or_inf(stat_of(a[i][p], s), stat_of(a_prime[i][p], s)));
        cmp.emd_cross.push_back(emd_or_inf(stat_of(a[i][p], s), stat_of(b[i][p], s)));
      }
      std::vector<double> same = cmp.emd_same;
      std::sort(same.begin(), same.end());
      const double q1 = quantile_sorted(same, 0.25);
      const double q3 = quantile_sorted(same, 0.75);
      const double iqr = q3 - q1;
      cmp.whisker_low = q1 - 1.5 * iqr;
      cmp.whisker_high = q3 + 1.5 * iqr;
      cmp.cross_median = median_of(cmp.emd_cross);
      cmp.compatible = cmp.cross_median >= cmp.whisker_low && cmp.cross_median <= cmp.whisker_high;
      out.entries.push_back(std::move(cmp));
    }
  }
  return out;
}

void write_stats_csv(std::ostream& out, std::span<const RunStats> runs) {
  out << "population,statistic,value\n";
  static constexpr const char* kNames[] = {kStatRate, kStatCv, kStatCorrelation};
  for (const RunStats& run : runs) {
    for (const PopulationStats& p : run) {
      for (std::size_t s = 0; s < 3; ++s) {
        for (double v : stat_of(p, s).values) {
          out << fmt::format("{},{},{:.17g}\n", p.population, kNames[s], v);
        }
      }
    }
  }
}

}  // namespace proxysim
