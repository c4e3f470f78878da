// Copyright 2026 The pimcbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pimc/backend.hpp"

namespace pimc {

/// The six timed steps of a run, followed by the three derived sums.
enum class Metric : std::size_t {
  setup,
  input,
  copy_in,
  kernel,
  copy_out,
  post,
  transfer,    // copy_in + copy_out
  gpu_ops,     // copy_in + kernel + copy_out
  end_to_end,  // all six steps
};

inline constexpr std::size_t kPhaseCount = 6;
inline constexpr std::size_t kMetricCount = 9;
inline constexpr std::array<Metric, kMetricCount> kAllMetrics = {
    Metric::setup,    Metric::input,   Metric::copy_in, Metric::kernel,    Metric::copy_out,
    Metric::post,     Metric::transfer, Metric::gpu_ops, Metric::end_to_end,
};

std::string_view to_string(Metric metric);
std::optional<Metric> parse_metric(std::string_view name);

struct RunConfig {
  std::size_t qubits = 0;
  std::size_t layers = 128;
  std::size_t points = 0;
  std::uint64_t sweeps = 20000;
  BackendKind backend = BackendKind::reference;
  std::size_t lanes_per_group = 32;
  std::uint32_t seed = 0;
  /// Instance file; when empty an instance is generated from `seed`.
  std::string instance_path;
  double gamma0 = 3.0;
  double beta = 10.0;
  double density = 0.5;
  std::size_t concurrent_groups = 0;
};

/// Timings and accounting for one run. Durations are monotonic-clock
/// nanoseconds, one per step in `Metric` order.
struct PhaseRecord {
  std::array<std::int64_t, kPhaseCount> phase_ns{};
  std::uint64_t bytes_in = 0;
  std::uint64_t bytes_out = 0;

  std::size_t qubits = 0;
  std::size_t layers = 0;
  std::size_t points = 0;
  std::uint64_t sweeps = 0;
  BackendKind backend = BackendKind::reference;
  std::uint32_t seed = 0;

  std::uint64_t flips = 0;
  std::uint64_t spin_digest = 0;
  /// Largest |incremental energy - recomputed energy| over all points.
  double energy_drift = 0.0;

  double seconds(Metric metric) const;
};

/// Runs setup, input, copy-in, kernel, copy-out and post-processing in order,
/// timing each. A failing step is rethrown as PhaseError naming it.
PhaseRecord run_benchmark(const RunConfig& config);

struct MetricStats {
  double mean = 0.0;
  double stdev = 0.0;
};

struct RunStats {
  std::size_t qubits = 0;
  std::size_t layers = 0;
  std::size_t points = 0;
  std::uint64_t sweeps = 0;
  BackendKind backend = BackendKind::reference;
  std::uint32_t seed = 0;
  std::size_t reps = 0;
  std::array<MetricStats, kMetricCount> metrics{};
  std::uint64_t bytes_in = 0;
  std::uint64_t bytes_out = 0;
  std::uint64_t flips = 0;
  std::uint64_t spin_digest = 0;

  const MetricStats& at(Metric m) const { return metrics[static_cast<std::size_t>(m)]; }
};

/// Mean and sample (n-1) standard deviation; n = 1 gives stdev 0. Samples
/// are summed in sorted order, so the result does not depend on input order.
MetricStats mean_stdev(std::span<const double> samples);

/// Throws DomainError on empty input and ValidationError when records differ
/// in descriptors, byte counts or outcome.
RunStats aggregate(std::span<const PhaseRecord> records);

/// (other - base) / base.
double relative_difference(double t_base, double t_other);
double ratio(double t_num, double t_den);
/// Variable updates per second: variables * sweeps / kernel_seconds.
double throughput(std::uint64_t variables, std::uint64_t sweeps, double kernel_seconds);

/// FNV-1a over the spins of every group, in group order.
std::uint64_t spin_digest(std::span<const GroupResult> groups);

}  // namespace pimc
