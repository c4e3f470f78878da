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

#include <cstddef>
#include <cstdint>
#include <vector>

#include "pimc/model.hpp"

namespace pimc {

class RngState;

/// Conflict-free sweep order for one layered system.
///
/// Sites are greedily colored on the intra-layer interaction graph; layers are
/// split by parity (three classes when K is odd, so the ring never puts
/// neighbors together). Phase (c, l) holds every site of qubit color c in
/// every layer of class l, so no two members of a phase share a bond. Inside a
/// phase, site i belongs to lane i mod T, and each lane walks its
/// coordinates in (layer, site) order.
struct UpdateSchedule {
  struct Phase {
    /// lanes[t] lists flat coordinates k*N + i, ascending.
    std::vector<std::vector<std::uint32_t>> lanes;
  };

  std::size_t layers = 0;
  std::size_t sites = 0;
  std::size_t lane_count = 0;
  std::size_t qubit_colors = 0;
  std::size_t layer_classes = 0;
  std::vector<Phase> phases;

  std::size_t thread_of(std::size_t site) const { return site % lane_count; }
  /// Number of lanes that own at least one site.
  std::size_t active_lanes() const { return sites < lane_count ? sites : lane_count; }
};

UpdateSchedule color_sites(const LayeredSystem& system, std::size_t lanes);

/// Energy change from flipping spin (layer, site). Does not mutate.
double flip_delta(const LayeredSystem& system, std::size_t layer, std::size_t site);

/// Metropolis rule: delta <= 0, or u < exp(-beta_unit * delta).
bool accept(double delta, double beta_unit, double u);

struct SweepStats {
  std::uint64_t examined = 0;
  std::uint64_t flipped = 0;
  double energy = 0.0;
};

/// Per-lane outcome of one phase.
struct LaneTally {
  std::uint64_t examined = 0;
  std::uint64_t flipped = 0;
};

/// Processes lane `lane` of phase `phase`: one unit draw per coordinate from
/// RNG lane (chain, lane), accepted flips applied immediately. ΔE of each
/// accepted flip is appended to `accepted` in processing order.
///
/// Lanes of one phase touch disjoint spins and read only spins no other lane
/// of that phase writes, so they may run concurrently.
LaneTally sweep_lane(LayeredSystem& system, const UpdateSchedule& schedule, std::size_t phase,
                     std::size_t lane, RngState& rng, std::size_t chain, std::vector<double>& accepted);

/// Throws ShapeError/CapacityError if the schedule, system and rng disagree.
void check_sweep_shape(const LayeredSystem& system, const UpdateSchedule& schedule, const RngState& rng,
                       std::size_t chain);

/// One full sweep, phases in order and lanes in index order. `energy` is the
/// total energy before the sweep; the returned stats carry the energy after it.
SweepStats sweep(LayeredSystem& system, const UpdateSchedule& schedule, RngState& rng, std::size_t chain,
                 double energy);

struct PointResult {
  std::uint64_t flips = 0;
  double energy = 0.0;
};

/// `sweeps` consecutive sweeps on `system` (mutated in place; it holds the
/// final spins). Starts from total_energy(system).
PointResult run_point(LayeredSystem& system, std::uint64_t sweeps, const UpdateSchedule& schedule,
                      RngState& rng, std::size_t chain);

/// Same, continuing from a known energy instead of recomputing it.
PointResult run_point(LayeredSystem& system, std::uint64_t sweeps, const UpdateSchedule& schedule,
                      RngState& rng, std::size_t chain, double energy);

}  // namespace pimc
