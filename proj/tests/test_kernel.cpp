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

#include <cmath>
#include <random>
#include <set>

#include "oracles.hpp"
#include "pimc/error.hpp"
#include "pimc/kernel.hpp"
#include "pimc/model.hpp"
#include "pimc/rng.hpp"

namespace pimc {
namespace {

using testing::brute_energy;

RngState seeded(std::size_t chains, std::size_t threads, std::uint32_t seed) {
  RngState rng = mt_alloc(chains, threads);
  mt_init(rng, seed);
  return rng;
}

LayeredSystem free_spins(std::size_t layers, std::size_t sites) {
  return LayeredSystem(layers, sites, {}, std::vector<double>(sites, 0.0), 0.0,
                       std::vector<std::int8_t>(layers * sites, 1));
}

LayeredSystem complete_graph(std::size_t sites, std::size_t layers) {
  std::vector<Coupling> c;
  for (std::size_t i = 0; i < sites; ++i) {
    for (std::size_t j = i + 1; j < sites; ++j) c.push_back({i, j, 0.3});
  }
  return LayeredSystem(layers, sites, std::move(c), std::vector<double>(sites, 0.1), 0.4,
                       std::vector<std::int8_t>(layers * sites, 1));
}

void expect_valid_schedule(const LayeredSystem& sys, const UpdateSchedule& sched) {
  const std::size_t n = sys.sites();
  std::set<std::uint32_t> seen;
  for (const auto& phase : sched.phases) {
    std::vector<std::uint32_t> members;
    for (std::size_t lane = 0; lane < phase.lanes.size(); ++lane) {
      const auto& coords = phase.lanes[lane];
      for (std::size_t x = 0; x < coords.size(); ++x) {
        EXPECT_EQ(coords[x] % n % sched.lane_count, lane);
        if (x > 0) {
          EXPECT_LT(coords[x - 1], coords[x]);
        }
        EXPECT_TRUE(seen.insert(coords[x]).second) << "duplicate coordinate " << coords[x];
        members.push_back(coords[x]);
      }
    }
    for (auto a : members) {
      for (auto b : members) {
        if (a == b) continue;
        const std::size_t ka = a / n, ia = a % n, kb = b / n, ib = b % n;
        if (ka == kb) {
          for (const auto& nb : sys.neighbors(ia)) EXPECT_NE(nb.site, ib) << "bonded pair in one phase";
        }
        if (ia == ib) {
          EXPECT_NE(sys.next_layer(ka), kb) << "ring neighbors in one phase";
        }
      }
    }
  }
  EXPECT_EQ(seen.size(), sys.spin_count());
}

TEST(ColorSites, NoCouplingsTwoLayers) {
  const auto sys = free_spins(2, 3);
  const auto sched = color_sites(sys, 32);
  EXPECT_EQ(sched.qubit_colors, 1u);
  EXPECT_EQ(sched.phases.size(), 2u);
  expect_valid_schedule(sys, sched);
}

TEST(ColorSites, TriangleNeedsThreeColors) {
  const auto sys = complete_graph(3, 4);
  const auto sched = color_sites(sys, 32);
  EXPECT_EQ(sched.qubit_colors, 3u);
  EXPECT_EQ(sched.phases.size(), 6u);
  expect_valid_schedule(sys, sched);
}

TEST(ColorSites, OddRingUsesThreeLayerClasses) {
  for (std::size_t layers : {3, 5, 7}) {
    const auto sys = complete_graph(2, layers);
    const auto sched = color_sites(sys, 1);
    EXPECT_EQ(sched.layer_classes, 3u);
    expect_valid_schedule(sys, sched);
  }
}

TEST(ColorSites, RandomSystemsArePartitionedConflictFree) {
  std::mt19937_64 gen(21);
  for (int trial = 0; trial < 100; ++trial) {
    const auto sys = testing::random_small_system(gen, 10, 9);
    const auto sched = color_sites(sys, 1 + gen() % 5);
    expect_valid_schedule(sys, sched);
  }
}

TEST(ColorSites, Deterministic) {
  RngState rng = seeded(1, 1, 2);
  const auto sys = trotterize(generate_instance(16, 4, 0.4), {0, 0.5, 1.0, 5.0}, 8, rng, 0);
  const auto a = color_sites(sys, 4), b = color_sites(sys, 4);
  ASSERT_EQ(a.phases.size(), b.phases.size());
  for (std::size_t p = 0; p < a.phases.size(); ++p) EXPECT_EQ(a.phases[p].lanes, b.phases[p].lanes);
}

TEST(FlipDelta, IsolatedSpinCostsNothing) {
  const auto sys = free_spins(2, 1);
  EXPECT_EQ(flip_delta(sys, 0, 0), 0.0);
}

TEST(FlipDelta, TwoLayerRingMatchesEnergyDifference) {
  // E(up, up) = -2 and E(down, up) = +2, so the flip costs 4.
  LayeredSystem sys(2, 1, {}, {0.0}, 1.0, {1, 1});
  EXPECT_EQ(flip_delta(sys, 0, 0), 4.0);
  const double before = total_energy(sys);
  sys.flip(0, 0);
  EXPECT_EQ(total_energy(sys) - before, 4.0);
}

TEST(FlipDelta, AgreesWithBruteForceOnRandomSystems) {
  std::mt19937_64 gen(1234);
  for (int trial = 0; trial < 1000; ++trial) {
    auto sys = testing::random_small_system(gen);
    const std::size_t k = gen() % sys.layers(), i = gen() % sys.sites();
    const double before = brute_energy(sys);
    const double delta = flip_delta(sys, k, i);
    sys.flip(k, i);
    ASSERT_NEAR(delta, brute_energy(sys) - before, 1e-9);
  }
}

TEST(FlipDelta, DoesNotMutate) {
  const auto sys = complete_graph(4, 4);
  const auto copy = sys;
  (void)flip_delta(sys, 1, 2);
  EXPECT_EQ(sys, copy);
}

TEST(Accept, Metropolis) {
  EXPECT_TRUE(accept(0.0, 1.0, 0.0));
  EXPECT_TRUE(accept(0.0, 1.0, 0.999999));
  EXPECT_TRUE(accept(-5.0, 1.0, 0.999999));
  EXPECT_FALSE(accept(2.0, 1.0, 0.5));       // exp(-2) = 0.1353
  EXPECT_TRUE(accept(2.0, 1.0, 0.1353));
  EXPECT_FALSE(accept(2.0, 1.0, 0.13534));
  EXPECT_TRUE(accept(2.0, 0.5, 0.36));       // exp(-1) = 0.3679
  EXPECT_FALSE(accept(2.0, 0.5, 0.37));
}

TEST(Sweep, FreeSpinsAllFlip) {
  auto sys = free_spins(4, 5);
  const auto sched = color_sites(sys, 32);
  RngState rng = seeded(1, 32, 1);
  const auto stats = sweep(sys, sched, rng, 0, 0.0);
  EXPECT_EQ(stats.examined, 20u);
  EXPECT_EQ(stats.flipped, 20u);
  for (auto s : sys.spins()) EXPECT_EQ(s, -1);
}

TEST(Sweep, EightQubitPresetExamines1024) {
  RngState rng = seeded(27, 32, 3);
  const auto schedule = build_schedule(27, 3.0, 10.0);
  auto sys = trotterize(generate_instance(8, 3, 0.5), schedule.points[5], 128, rng, 5);
  const auto sched = color_sites(sys, 32);
  const auto stats = sweep(sys, sched, rng, 5, total_energy(sys));
  EXPECT_EQ(stats.examined, 1024u);
  EXPECT_LE(stats.flipped, stats.examined);
}

TEST(Sweep, DeterministicFromIdenticalStart) {
  RngState rng0 = seeded(1, 4, 8);
  auto base = trotterize(generate_instance(6, 2, 0.7), {0, 0.6, 1.0, 4.0}, 6, rng0, 0);
  SweepStats first{};
  for (int rep = 0; rep < 2; ++rep) {
    auto sys = base;
    RngState rng = seeded(1, 4, 8);
    const auto sched = color_sites(sys, 4);
    const auto stats = sweep(sys, sched, rng, 0, total_energy(sys));
    if (rep == 0) {
      first = stats;
    } else {
      EXPECT_EQ(stats.flipped, first.flipped);
      EXPECT_EQ(stats.energy, first.energy);
    }
  }
}

TEST(Sweep, DrawsOneUniformPerCoordinateFromOwningLane) {
  auto sys = complete_graph(5, 4);
  const auto sched = color_sites(sys, 2);
  RngState rng = seeded(1, 2, 4);
  sweep(sys, sched, rng, 0, total_energy(sys));
  // Sites {0, 2, 4} -> lane 0, {1, 3} -> lane 1; four layers each.
  RngState probe = seeded(1, 2, 4);
  for (int k = 0; k < 12; ++k) probe.next_u32(0, 0);
  for (int k = 0; k < 8; ++k) probe.next_u32(0, 1);
  EXPECT_EQ(rng.next_u32(0, 0), probe.next_u32(0, 0));
  EXPECT_EQ(rng.next_u32(0, 1), probe.next_u32(0, 1));
}

TEST(Sweep, IncrementalEnergyTracksRecomputation) {
  std::mt19937_64 gen(77);
  for (int trial = 0; trial < 40; ++trial) {
    auto sys = testing::random_small_system(gen, 7, 8);
    const auto sched = color_sites(sys, 1 + gen() % 4);
    RngState rng = seeded(2, 4, static_cast<std::uint32_t>(trial));
    double energy = total_energy(sys);
    for (int s = 0; s < 50; ++s) {
      const auto stats = sweep(sys, sched, rng, 1, energy);
      EXPECT_EQ(stats.examined, sys.spin_count());
      energy = stats.energy;
      ASSERT_NEAR(energy, brute_energy(sys), 1e-9);
    }
  }
}

TEST(Sweep, ShapeAndCapacityErrors) {
  auto sys = complete_graph(3, 4);
  const auto other = color_sites(complete_graph(3, 6), 2);
  RngState rng = seeded(1, 2, 1);
  EXPECT_THROW(sweep(sys, other, rng, 0, 0.0), ShapeError);
  const auto wide = color_sites(sys, 3);
  EXPECT_THROW(sweep(sys, wide, rng, 0, 0.0), CapacityError);
  const auto ok = color_sites(sys, 2);
  EXPECT_THROW(sweep(sys, ok, rng, 1, 0.0), CapacityError);
  RngState cold = mt_alloc(1, 2);
  EXPECT_THROW(sweep(sys, ok, cold, 0, 0.0), RngError);
}

TEST(RunPoint, ZeroSweepsIsIdentity) {
  RngState rng = seeded(1, 4, 3);
  auto sys = trotterize(generate_instance(4, 3, 1.0), {0, 0.5, 1.0, 2.0}, 4, rng, 0);
  const auto before = sys;
  const auto result = run_point(sys, 0, color_sites(sys, 4), rng, 0);
  EXPECT_EQ(sys, before);
  EXPECT_EQ(result.flips, 0u);
  EXPECT_EQ(result.energy, total_energy(before));
}

TEST(RunPoint, FlipsAreAdditiveOverSweeps) {
  RngState init = seeded(1, 4, 6);
  const auto base = trotterize(generate_instance(6, 6, 0.5), {0, 0.4, 1.5, 3.0}, 8, init, 0);
  const auto sched = color_sites(base, 4);

  auto a = base;
  RngState rng_a = seeded(1, 4, 6);
  const auto whole = run_point(a, 25, sched, rng_a, 0);

  auto b = base;
  RngState rng_b = seeded(1, 4, 6);
  std::uint64_t flips = 0;
  double energy = total_energy(b);
  for (int s = 0; s < 25; ++s) {
    const auto st = sweep(b, sched, rng_b, 0, energy);
    flips += st.flipped;
    energy = st.energy;
  }
  EXPECT_EQ(whole.flips, flips);
  EXPECT_EQ(whole.energy, energy);
  EXPECT_EQ(a, b);
}

TEST(RunPoint, SamplesBoltzmannOnTinySystem) {
  // N = 1, K = 2 plus a field: 4 states, exact probabilities by enumeration.
  LayeredSystem sys(2, 1, {}, {0.3}, 0.6, {1, 1});
  const auto exact = testing::enumerate_boltzmann(sys);
  const auto sched = color_sites(sys, 1);
  RngState rng = seeded(1, 1, 17);
  std::vector<double> hits(4, 0.0);
  constexpr int kSweeps = 200000;
  double energy = total_energy(sys);
  for (int s = 0; s < kSweeps; ++s) {
    energy = sweep(sys, sched, rng, 0, energy).energy;
    hits[testing::state_index(sys)] += 1.0 / kSweeps;
  }
  double tv = 0.0;
  for (int i = 0; i < 4; ++i) tv += 0.5 * std::abs(hits[i] - exact.probability[i]);
  EXPECT_LT(tv, 0.01);
}

}  // namespace
}  // namespace pimc
