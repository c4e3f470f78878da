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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pimc {

class RngState;

struct Coupling {
  std::size_t i = 0;
  std::size_t j = 0;
  double value = 0.0;

  friend bool operator==(const Coupling&, const Coupling&) = default;
};

/// A qubit-level Ising problem: N sites, longitudinal fields h_i and
/// pairwise couplings J_ij with i < j. Energies follow E = -sum J s s - sum h s,
/// so positive J is ferromagnetic.
struct ProblemInstance {
  std::string id;
  std::size_t qubit_count = 0;
  std::vector<double> fields;
  std::vector<Coupling> couplings;

  /// Throws ValidationError if any invariant is broken.
  void validate() const;

  friend bool operator==(const ProblemInstance&, const ProblemInstance&) = default;
};

/// Parses the line-oriented instance format:
///
///     # comment
///     qubits N
///     h i value
///     J i j value
///
/// `qubits` must be the first non-comment line. Missing fields default to 0.
ProblemInstance load_instance(std::string_view text, std::string id = "instance");

/// Writes `instance` back in the format load_instance accepts, at full precision.
std::string emit_instance(const ProblemInstance& instance);

/// Random +-1 couplings on a G(N, density) graph with zero fields.
///
/// Draws come from std::mt19937_64 seeded with `coupling_seed`. Pairs are
/// visited in lexicographic (i, j) order; each pair takes one draw
/// u = (r >> 11) * 2^-53 and is kept iff u < density, in which case a
/// second draw picks J = +1 when its low bit is set and -1 otherwise.
ProblemInstance generate_instance(std::size_t qubits, std::uint64_t coupling_seed, double density);

struct SimulationPoint {
  std::size_t index = 0;
  double s = 0.0;
  double gamma = 0.0;
  double beta = 0.0;
};

struct AnnealSchedule {
  std::vector<SimulationPoint> points;

  std::size_t size() const { return points.size(); }
  void validate() const;
};

/// Linear schedule: s_p = p/(P-1), gamma_p = gamma0 (1 - s_p) floored at
/// kGammaFloor, beta_p = beta.
AnnealSchedule build_schedule(std::size_t point_count, double gamma0, double beta);

inline constexpr double kGammaFloor = 1e-6;

/// Points per qubit count for the seven canonical problem sizes.
struct SizePreset {
  std::size_t qubits;
  std::size_t points;
};

inline constexpr std::size_t kCanonicalLayers = 128;
inline constexpr SizePreset kSizePresets[] = {
    {8, 27}, {16, 34}, {32, 37}, {48, 57}, {72, 71}, {96, 111}, {128, 129},
};

std::optional<std::size_t> preset_points(std::size_t qubits);

/// qubits * layers * points. Throws OverflowError rather than wrapping.
std::uint64_t variable_count(std::uint64_t qubits, std::uint64_t layers, std::uint64_t points);

/// ln(coth(x)) / 2 for x > 0, the inter-layer coupling for x = beta*gamma/K.
double perpendicular_coupling(double beta, double gamma, std::size_t layers);

/// K coupled replicas of an N-site problem, closed into a ring.
///
/// Spins are stored layer-major: spin (k, i) lives at k*N + i. Every layer
/// shares the same intra-layer couplings and fields; replica k couples to
/// k-1 and k+1 (mod K) with strength `perp_coupling()`.
class LayeredSystem {
 public:
  struct Neighbor {
    std::uint32_t site;
    double value;
  };

  LayeredSystem(std::size_t layers, std::size_t sites, std::vector<Coupling> intra_coupling,
                std::vector<double> intra_field, double perp_coupling,
                std::vector<std::int8_t> spins);

  std::size_t layers() const { return layers_; }
  std::size_t sites() const { return sites_; }
  std::size_t spin_count() const { return spins_.size(); }

  std::int8_t spin(std::size_t layer, std::size_t site) const { return spins_[layer * sites_ + site]; }
  void flip(std::size_t layer, std::size_t site) {
    auto& s = spins_[layer * sites_ + site];
    s = static_cast<std::int8_t>(-s);
  }
  std::span<const std::int8_t> spins() const { return spins_; }
  /// Replaces every spin; values must be +-1.
  void set_spins(std::span<const std::int8_t> spins);

  const std::vector<Coupling>& intra_coupling() const { return intra_coupling_; }
  const std::vector<double>& intra_field() const { return intra_field_; }
  double perp_coupling() const { return perp_coupling_; }

  /// Intra-layer neighbors of `site`, ascending by neighbor index.
  std::span<const Neighbor> neighbors(std::size_t site) const {
    return {adjacency_.data() + offsets_[site], adjacency_.data() + offsets_[site + 1]};
  }

  std::size_t prev_layer(std::size_t layer) const { return layer == 0 ? layers_ - 1 : layer - 1; }
  std::size_t next_layer(std::size_t layer) const { return layer + 1 == layers_ ? 0 : layer + 1; }

  friend bool operator==(const LayeredSystem& a, const LayeredSystem& b) {
    return a.layers_ == b.layers_ && a.sites_ == b.sites_ && a.spins_ == b.spins_ &&
           a.intra_coupling_ == b.intra_coupling_ && a.intra_field_ == b.intra_field_ &&
           a.perp_coupling_ == b.perp_coupling_;
  }

 private:
  std::size_t layers_;
  std::size_t sites_;
  std::vector<Coupling> intra_coupling_;
  std::vector<double> intra_field_;
  double perp_coupling_;
  std::vector<std::int8_t> spins_;
  std::vector<std::size_t> offsets_;
  std::vector<Neighbor> adjacency_;
};

/// Builds the layered system for one simulation point. Effective couplings
/// and fields are scaled by s*beta/K. Spins are drawn +-1 with probability
/// 1/2 from lane (spin_chain, spin_thread) of `rng`, in layer-major order.
LayeredSystem trotterize(const ProblemInstance& instance, const SimulationPoint& point,
                         std::size_t layers, RngState& rng, std::size_t spin_chain,
                         std::size_t spin_thread = 0);

/// E = -sum_k sum_(i,j) J s s - sum_k sum_i h s - Jperp sum_k sum_i s^k s^(k+1 mod K).
/// The ring sum runs over all K bonds, so K = 2 counts its single pair twice.
double total_energy(const LayeredSystem& system);

}  // namespace pimc
