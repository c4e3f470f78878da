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

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "pimc/error.hpp"
#include "pimc/harness.hpp"
#include "pimc/model.hpp"

namespace pimc {
namespace {

RunConfig small_config(BackendKind backend = BackendKind::reference) {
  RunConfig c;
  c.qubits = 8;
  c.layers = 8;
  c.points = 3;
  c.sweeps = 20;
  c.backend = backend;
  c.lanes_per_group = 4;
  c.seed = 17;
  c.concurrent_groups = 2;
  return c;
}

TEST(Metrics, NamesRoundTrip) {
  for (Metric m : kAllMetrics) EXPECT_EQ(parse_metric(to_string(m)), m);
  EXPECT_FALSE(parse_metric("latency").has_value());
}

TEST(MeanStdev, KnownSamples) {
  const std::vector<double> flat{1.0, 1.0, 1.0};
  EXPECT_EQ(mean_stdev(flat).mean, 1.0);
  EXPECT_EQ(mean_stdev(flat).stdev, 0.0);
  const std::vector<double> pair{2.0, 4.0};
  EXPECT_DOUBLE_EQ(mean_stdev(pair).mean, 3.0);
  EXPECT_NEAR(mean_stdev(pair).stdev, 1.4142135623730951, 1e-15);
  const std::vector<double> one{0.25};
  EXPECT_EQ(mean_stdev(one).stdev, 0.0);
  EXPECT_THROW(mean_stdev(std::span<const double>{}), DomainError);
}

TEST(MeanStdev, PermutationInvariant) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> dist(1e-6, 1e3);
  std::vector<double> xs(101);
  for (auto& x : xs) x = dist(gen);
  const auto ref = mean_stdev(xs);
  for (int trial = 0; trial < 20; ++trial) {
    std::shuffle(xs.begin(), xs.end(), gen);
    const auto got = mean_stdev(xs);
    EXPECT_EQ(got.mean, ref.mean);
    EXPECT_EQ(got.stdev, ref.stdev);
  }
}

TEST(Statistics, PublishedPairs) {
  EXPECT_NEAR(relative_difference(100.76, 113.54), 0.12683604605001986, 1e-12);
  EXPECT_NEAR(relative_difference(25.94, 42.17), 0.625674633770239, 1e-12);
  EXPECT_NEAR(ratio(0.417, 0.306), 1.3627450980392157, 1e-12);
  EXPECT_NEAR(ratio(0.011, 0.009), 1.2222222222222223, 1e-12);
  EXPECT_NEAR(throughput(2113536, 20000, 100.76), 419518856.6891624, 1e-3);
  EXPECT_NEAR(throughput(27648, 20000, 1.96), 282122448.97959185, 1e-3);
}

TEST(Statistics, RejectNonPositiveDenominators) {
  EXPECT_THROW(relative_difference(0.0, 1.0), DomainError);
  EXPECT_THROW(ratio(1.0, 0.0), DomainError);
  EXPECT_THROW(throughput(1, 1, 0.0), DomainError);
  EXPECT_THROW(relative_difference(-1.0, 1.0), DomainError);
}

TEST(SpinDigest, SensitiveToEverySpin) {
  LayeredSystem sys(2, 3, {}, {0.0, 0.0, 0.0}, 1.0, {1, 1, 1, 1, 1, 1});
  std::vector<GroupResult> groups{{sys, 0, 0.0}};
  const auto base = spin_digest(groups);
  for (std::size_t k = 0; k < 2; ++k) {
    for (std::size_t i = 0; i < 3; ++i) {
      auto flipped = groups;
      flipped[0].system.flip(k, i);
      EXPECT_NE(spin_digest(flipped), base);
    }
  }
  EXPECT_EQ(spin_digest(groups), base);
}

void expect_accounting(const PhaseRecord& r) {
  const auto& t = r.phase_ns;
  for (auto ns : t) EXPECT_GE(ns, 0);
  EXPECT_EQ(r.seconds(Metric::gpu_ops), static_cast<double>(t[2] + t[3] + t[4]) * 1e-9);
  EXPECT_EQ(r.seconds(Metric::transfer), static_cast<double>(t[2] + t[4]) * 1e-9);
  EXPECT_GE(r.seconds(Metric::end_to_end), r.seconds(Metric::gpu_ops));
  EXPECT_GE(r.seconds(Metric::gpu_ops), r.seconds(Metric::kernel));
  EXPECT_EQ(r.bytes_in, r.bytes_out);
  EXPECT_GT(r.bytes_in, 0u);
}

TEST(RunBenchmark, AccountingIdentitiesHold) {
  for (auto kind : {BackendKind::reference, BackendKind::parallel}) {
    const auto r = run_benchmark(small_config(kind));
    expect_accounting(r);
    EXPECT_EQ(r.qubits, 8u);
    EXPECT_EQ(r.points, 3u);
    EXPECT_LT(r.energy_drift, 1e-9);
  }
}

TEST(RunBenchmark, BackendsAgreeOnOutcome) {
  const auto a = run_benchmark(small_config(BackendKind::reference));
  const auto b = run_benchmark(small_config(BackendKind::parallel));
  EXPECT_EQ(a.flips, b.flips);
  EXPECT_EQ(a.spin_digest, b.spin_digest);
  EXPECT_EQ(a.bytes_in, b.bytes_in);
}

TEST(RunBenchmark, ZeroSweepsFlipsNothing) {
  auto c = small_config();
  c.sweeps = 0;
  const auto r = run_benchmark(c);
  expect_accounting(r);
  EXPECT_EQ(r.flips, 0u);
}

TEST(RunBenchmark, SeedChangesOutcome) {
  auto c = small_config();
  const auto a = run_benchmark(c);
  c.seed = 18;
  const auto b = run_benchmark(c);
  EXPECT_NE(a.spin_digest, b.spin_digest);
}

TEST(RunBenchmark, FailuresNameThePhase) {
  auto c = small_config();
  c.instance_path = "/nonexistent/instance.txt";
  try {
    run_benchmark(c);
    FAIL() << "expected PhaseError";
  } catch (const PhaseError& e) {
    EXPECT_EQ(e.phase(), "input");
  }
  c = small_config();
  c.points = 0;
  EXPECT_THROW(run_benchmark(c), Error);
}

TEST(Aggregate, RepeatedRunsCollapse) {
  std::vector<PhaseRecord> records;
  for (int i = 0; i < 3; ++i) records.push_back(run_benchmark(small_config()));
  const auto st = aggregate(records);
  EXPECT_EQ(st.reps, 3u);
  EXPECT_EQ(st.flips, records[0].flips);
  EXPECT_EQ(st.bytes_in, records[0].bytes_in);
  std::vector<double> kernel;
  for (const auto& r : records) kernel.push_back(r.seconds(Metric::kernel));
  EXPECT_EQ(st.at(Metric::kernel).mean, mean_stdev(kernel).mean);
  EXPECT_EQ(st.at(Metric::kernel).stdev, mean_stdev(kernel).stdev);
}

TEST(Aggregate, RejectsEmptyAndMixedInput) {
  EXPECT_THROW(aggregate(std::span<const PhaseRecord>{}), DomainError);
  auto a = run_benchmark(small_config());
  auto b = a;
  b.sweeps += 1;
  const std::vector<PhaseRecord> mixed{a, b};
  EXPECT_THROW(aggregate(mixed), ValidationError);
  auto c = a;
  c.spin_digest ^= 1;
  const std::vector<PhaseRecord> diverged{a, c};
  EXPECT_THROW(aggregate(diverged), ValidationError);
}

}  // namespace
}  // namespace pimc
