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

#include "pimc/kernel.hpp"

#include <cmath>
#include <string>

#include "pimc/error.hpp"
#include "pimc/rng.hpp"

namespace pimc {

namespace {

std::vector<std::size_t> greedy_colors(const LayeredSystem& system, std::size_t& color_count) {
  const std::size_t n = system.sites();
  std::vector<std::size_t> color(n, 0);
  std::vector<char> used;
  color_count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    used.assign(color_count + 1, 0);
    for (const auto& nb : system.neighbors(i)) {
      if (nb.site < i) used[color[nb.site]] = 1;
    }
    std::size_t c = 0;
    while (used[c]) ++c;
    color[i] = c;
    if (c + 1 > color_count) color_count = c + 1;
  }
  return color;
}

std::size_t layer_class(std::size_t layer, std::size_t layers) {
  if (layers % 2 == 1 && layer == layers - 1) return 2;
  return layer % 2;
}

}  // namespace

UpdateSchedule color_sites(const LayeredSystem& system, std::size_t lanes) {
  if (lanes == 0) throw DomainError("color_sites: lanes must be positive");
  UpdateSchedule schedule;
  schedule.layers = system.layers();
  schedule.sites = system.sites();
  schedule.lane_count = lanes;

  const auto color = greedy_colors(system, schedule.qubit_colors);
  schedule.layer_classes = system.layers() % 2 == 1 ? 3 : 2;

  schedule.phases.resize(schedule.qubit_colors * schedule.layer_classes);
  for (auto& phase : schedule.phases) phase.lanes.resize(lanes);

  // Layer-major iteration keeps every lane list sorted by (layer, site).
  for (std::size_t k = 0; k < system.layers(); ++k) {
    const std::size_t cls = layer_class(k, system.layers());
    for (std::size_t i = 0; i < system.sites(); ++i) {
      auto& phase = schedule.phases[color[i] * schedule.layer_classes + cls];
      phase.lanes[i % lanes].push_back(static_cast<std::uint32_t>(k * system.sites() + i));
    }
  }
  return schedule;
}

double flip_delta(const LayeredSystem& system, std::size_t layer, std::size_t site) {
  double local = system.intra_field()[site];
  for (const auto& nb : system.neighbors(site)) {
    local += nb.value * system.spin(layer, nb.site);
  }
  local += system.perp_coupling() *
           (system.spin(system.prev_layer(layer), site) + system.spin(system.next_layer(layer), site));
  return 2.0 * system.spin(layer, site) * local;
}

bool accept(double delta, double beta_unit, double u) {
  return delta <= 0.0 || u < std::exp(-beta_unit * delta);
}

void check_sweep_shape(const LayeredSystem& system, const UpdateSchedule& schedule, const RngState& rng,
                       std::size_t chain) {
  if (schedule.layers != system.layers() || schedule.sites != system.sites()) {
    throw ShapeError("sweep: schedule built for " + std::to_string(schedule.layers) + "x" +
                     std::to_string(schedule.sites) + ", system is " + std::to_string(system.layers()) +
                     "x" + std::to_string(system.sites()));
  }
  if (!rng.initialized()) throw RngError("sweep: rng not initialized");
  if (chain >= rng.chains()) {
    throw CapacityError("sweep: chain " + std::to_string(chain) + " outside " +
                        std::to_string(rng.chains()) + " rng chains");
  }
  if (schedule.active_lanes() > rng.threads()) {
    throw CapacityError("sweep: " + std::to_string(schedule.active_lanes()) + " lanes need that many rng threads, have " +
                        std::to_string(rng.threads()));
  }
}

LaneTally sweep_lane(LayeredSystem& system, const UpdateSchedule& schedule, std::size_t phase,
                     std::size_t lane, RngState& rng, std::size_t chain, std::vector<double>& accepted) {
  LaneTally tally;
  const std::size_t n = system.sites();
  for (std::uint32_t flat : schedule.phases[phase].lanes[lane]) {
    const std::size_t layer = flat / n;
    const std::size_t site = flat % n;
    const double delta = flip_delta(system, layer, site);
    const double u = rng.next_unit(chain, lane);
    ++tally.examined;
    if (accept(delta, 1.0, u)) {
      system.flip(layer, site);
      accepted.push_back(delta);
      ++tally.flipped;
    }
  }
  return tally;
}

SweepStats sweep(LayeredSystem& system, const UpdateSchedule& schedule, RngState& rng, std::size_t chain,
                 double energy) {
  check_sweep_shape(system, schedule, rng, chain);
  SweepStats stats;
  std::vector<double> accepted;
  for (std::size_t p = 0; p < schedule.phases.size(); ++p) {
    for (std::size_t lane = 0; lane < schedule.active_lanes(); ++lane) {
      accepted.clear();
      const auto tally = sweep_lane(system, schedule, p, lane, rng, chain, accepted);
      stats.examined += tally.examined;
      stats.flipped += tally.flipped;
      for (double d : accepted) energy += d;
    }
  }
  stats.energy = energy;
  return stats;
}

PointResult run_point(LayeredSystem& system, std::uint64_t sweeps, const UpdateSchedule& schedule,
                      RngState& rng, std::size_t chain) {
  return run_point(system, sweeps, schedule, rng, chain, total_energy(system));
}

PointResult run_point(LayeredSystem& system, std::uint64_t sweeps, const UpdateSchedule& schedule,
                      RngState& rng, std::size_t chain, double energy) {
  PointResult result{0, energy};
  if (sweeps == 0) return result;
  check_sweep_shape(system, schedule, rng, chain);
  for (std::uint64_t s = 0; s < sweeps; ++s) {
    const auto stats = sweep(system, schedule, rng, chain, result.energy);
    result.flips += stats.flipped;
    result.energy = stats.energy;
  }
  return result;
}

}  // namespace pimc
