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

#include "pimc/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "pimc/error.hpp"
#include "pimc/kernel.hpp"
#include "pimc/model.hpp"
#include "pimc/rng.hpp"

namespace pimc {

namespace {

constexpr std::array<std::string_view, kMetricCount> kMetricNames = {
    "setup", "input", "copy_in", "kernel", "copy_out", "post", "transfer", "gpu_ops", "end_to_end",
};

using Clock = std::chrono::steady_clock;

template <typename Fn>
auto timed(std::string_view phase, std::int64_t& ns, Fn&& fn) {
  const auto start = Clock::now();
  try {
    if constexpr (std::is_void_v<decltype(fn())>) {
      fn();
      ns = std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start).count();
    } else {
      auto result = fn();
      ns = std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start).count();
      return result;
    }
  } catch (const PhaseError&) {
    throw;
  } catch (const std::exception& e) {
    throw PhaseError(std::string(phase), e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open instance file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

std::string_view to_string(Metric metric) { return kMetricNames[static_cast<std::size_t>(metric)]; }

std::optional<Metric> parse_metric(std::string_view name) {
  for (std::size_t i = 0; i < kMetricCount; ++i) {
    if (kMetricNames[i] == name) return kAllMetrics[i];
  }
  return std::nullopt;
}

double PhaseRecord::seconds(Metric metric) const {
  // Sum in integer nanoseconds so the derived metrics are exact and ordered.
  auto ns = [this](Metric m) { return phase_ns[static_cast<std::size_t>(m)]; };
  std::int64_t total = 0;
  switch (metric) {
    case Metric::transfer:
      total = ns(Metric::copy_in) + ns(Metric::copy_out);
      break;
    case Metric::gpu_ops:
      total = ns(Metric::copy_in) + ns(Metric::kernel) + ns(Metric::copy_out);
      break;
    case Metric::end_to_end:
      for (auto t : phase_ns) total += t;
      break;
    default:
      total = ns(metric);
  }
  return static_cast<double>(total) * 1e-9;
}

PhaseRecord run_benchmark(const RunConfig& config) {
  PhaseRecord record;
  record.layers = config.layers;
  record.sweeps = config.sweeps;
  record.backend = config.backend;
  record.seed = config.seed;
  record.points = config.points;
  auto& ns = record.phase_ns;

  // 1. setup: execution plan and the device-side generator.
  ExecutionPlan exec_plan;
  std::optional<RngState> device_rng;
  timed("setup", ns[0], [&] {
    if (config.points == 0) throw ValidationError("points must be positive");
    exec_plan = plan(config.points, config.lanes_per_group, config.backend);
    exec_plan.concurrent_groups = config.concurrent_groups;
    device_rng.emplace(mt_alloc(config.points, config.lanes_per_group));
    mt_init(*device_rng, config.seed);
  });
  RngState& rng = *device_rng;

  // 2. input: instance, schedule and one layered system per point.
  auto systems = timed("input", ns[1], [&] {
    ProblemInstance instance = config.instance_path.empty()
                                   ? generate_instance(config.qubits, config.seed, config.density)
                                   : load_instance(read_file(config.instance_path), config.instance_path);
    if (config.qubits != 0 && instance.qubit_count != config.qubits) {
      throw ValidationError("instance has " + std::to_string(instance.qubit_count) + " qubits, config asks for " +
                            std::to_string(config.qubits));
    }
    const auto schedule = build_schedule(config.points, config.gamma0, config.beta);
    std::vector<LayeredSystem> out;
    out.reserve(schedule.size());
    for (const auto& point : schedule.points) {
      out.push_back(trotterize(instance, point, config.layers, rng, point.index, 0));
    }
    return out;
  });
  record.qubits = systems.front().sites();

  // 3. copy in
  auto staged = timed("copy_in", ns[2], [&] { return transfer_in(systems); });

  // 4. kernel
  staged = timed("kernel", ns[3], [&] { return execute(exec_plan, std::move(staged), config.sweeps, rng); });

  // 5. copy out
  auto results = timed("copy_out", ns[4], [&] { return transfer_out(staged); });

  // 6. post-processing
  timed("post", ns[5], [&] {
    std::uint64_t flips = 0;
    double drift = 0.0;
    for (const auto& r : results) {
      flips += r.flips;
      drift = std::max(drift, std::abs(r.energy - total_energy(r.system)));
    }
    record.flips = flips;
    record.energy_drift = drift;
    record.spin_digest = spin_digest(results);
  });

  record.bytes_in = staged.byte_count_in;
  record.bytes_out = staged.byte_count_out;
  return record;
}

MetricStats mean_stdev(std::span<const double> samples) {
  if (samples.empty()) throw DomainError("mean_stdev: no samples");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  double sum = 0.0;
  for (double x : sorted) sum += x;
  const double mean = sum / static_cast<double>(sorted.size());
  if (sorted.size() == 1) return {mean, 0.0};
  double sq = 0.0;
  for (double x : sorted) sq += (x - mean) * (x - mean);
  return {mean, std::sqrt(sq / static_cast<double>(sorted.size() - 1))};
}

RunStats aggregate(std::span<const PhaseRecord> records) {
  if (records.empty()) throw DomainError("aggregate: no records");
  const auto& first = records.front();
  for (const auto& r : records) {
    if (r.qubits != first.qubits || r.layers != first.layers || r.points != first.points ||
        r.sweeps != first.sweeps || r.backend != first.backend || r.seed != first.seed) {
      throw ValidationError("aggregate: records describe different runs");
    }
    if (r.bytes_in != first.bytes_in || r.bytes_out != first.bytes_out || r.flips != first.flips ||
        r.spin_digest != first.spin_digest) {
      throw ValidationError("aggregate: repeated runs disagree on non-timing results");
    }
  }

  RunStats stats;
  stats.qubits = first.qubits;
  stats.layers = first.layers;
  stats.points = first.points;
  stats.sweeps = first.sweeps;
  stats.backend = first.backend;
  stats.seed = first.seed;
  stats.reps = records.size();
  stats.bytes_in = first.bytes_in;
  stats.bytes_out = first.bytes_out;
  stats.flips = first.flips;
  stats.spin_digest = first.spin_digest;

  std::vector<double> samples(records.size());
  for (std::size_t m = 0; m < kMetricCount; ++m) {
    for (std::size_t r = 0; r < records.size(); ++r) samples[r] = records[r].seconds(kAllMetrics[m]);
    stats.metrics[m] = mean_stdev(samples);
  }
  return stats;
}

double relative_difference(double t_base, double t_other) {
  if (!(t_base > 0.0)) throw DomainError("relative_difference: base time must be positive");
  return (t_other - t_base) / t_base;
}

double ratio(double t_num, double t_den) {
  if (!(t_den > 0.0)) throw DomainError("ratio: denominator must be positive");
  return t_num / t_den;
}

double throughput(std::uint64_t variables, std::uint64_t sweeps, double kernel_seconds) {
  if (!(kernel_seconds > 0.0)) throw DomainError("throughput: kernel time must be positive");
  return static_cast<double>(variables) * static_cast<double>(sweeps) / kernel_seconds;
}

std::uint64_t spin_digest(std::span<const GroupResult> groups) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& g : groups) {
    for (auto s : g.system.spins()) {
      h ^= static_cast<std::uint8_t>(s);
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

}  // namespace pimc
