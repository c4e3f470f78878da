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

#include "pimc/model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <utility>

#include "pimc/error.hpp"
#include "pimc/rng.hpp"

namespace pimc {

namespace {

std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r')) ++pos;
    std::size_t end = pos;
    while (end < line.size() && line[end] != ' ' && line[end] != '\t' && line[end] != '\r') ++end;
    if (end > pos) tokens.push_back(line.substr(pos, end - pos));
    pos = end;
  }
  return tokens;
}

std::size_t parse_index(std::string_view token, std::size_t line) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError(line, "expected a non-negative integer, got '" + std::string(token) + "'");
  }
  return value;
}

double parse_real(std::string_view token, std::size_t line) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(value)) {
    throw ParseError(line, "expected a finite real, got '" + std::string(token) + "'");
  }
  return value;
}

std::string format_real(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

}  // namespace

void ProblemInstance::validate() const {
  if (qubit_count == 0) {
    throw ValidationError("instance '" + id + "': qubit count must be positive");
  }
  if (fields.size() != qubit_count) {
    throw ValidationError("instance '" + id + "': expected " + std::to_string(qubit_count) +
                          " fields, got " + std::to_string(fields.size()));
  }
  for (double h : fields) {
    if (!std::isfinite(h)) throw ValidationError("instance '" + id + "': non-finite field");
  }
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& c : couplings) {
    if (c.i >= c.j) {
      throw ValidationError("instance '" + id + "': coupling (" + std::to_string(c.i) + ", " +
                            std::to_string(c.j) + ") needs i < j");
    }
    if (c.j >= qubit_count) {
      throw ValidationError("instance '" + id + "': coupling index " + std::to_string(c.j) +
                            " out of range [0, " + std::to_string(qubit_count) + ")");
    }
    if (!std::isfinite(c.value)) throw ValidationError("instance '" + id + "': non-finite coupling");
    if (!seen.emplace(c.i, c.j).second) {
      throw ValidationError("instance '" + id + "': duplicate coupling (" + std::to_string(c.i) +
                            ", " + std::to_string(c.j) + ")");
    }
  }
}

ProblemInstance load_instance(std::string_view text, std::string id) {
  ProblemInstance instance;
  instance.id = std::move(id);
  bool have_qubits = false;
  std::vector<bool> field_set;
  std::set<std::pair<std::size_t, std::size_t>> pairs;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;

    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto tokens = split_tokens(line);
    if (tokens.empty()) continue;

    const std::string_view key = tokens[0];
    if (!have_qubits) {
      if (key != "qubits") throw ParseError(line_no, "first directive must be 'qubits N'");
      if (tokens.size() != 2) throw ParseError(line_no, "expected 'qubits N'");
      instance.qubit_count = parse_index(tokens[1], line_no);
      if (instance.qubit_count == 0) throw ValidationError("line " + std::to_string(line_no) + ": qubits must be positive");
      instance.fields.assign(instance.qubit_count, 0.0);
      field_set.assign(instance.qubit_count, false);
      have_qubits = true;
    } else if (key == "h") {
      if (tokens.size() != 3) throw ParseError(line_no, "expected 'h i value'");
      const std::size_t i = parse_index(tokens[1], line_no);
      const double value = parse_real(tokens[2], line_no);
      if (i >= instance.qubit_count) {
        throw ValidationError("line " + std::to_string(line_no) + ": field index " + std::to_string(i) +
                              " out of range [0, " + std::to_string(instance.qubit_count) + ")");
      }
      if (field_set[i]) {
        throw ValidationError("line " + std::to_string(line_no) + ": duplicate field for site " + std::to_string(i));
      }
      field_set[i] = true;
      instance.fields[i] = value;
    } else if (key == "J") {
      if (tokens.size() != 4) throw ParseError(line_no, "expected 'J i j value'");
      Coupling c{parse_index(tokens[1], line_no), parse_index(tokens[2], line_no),
                 parse_real(tokens[3], line_no)};
      const std::string where = "line " + std::to_string(line_no) + ": ";
      if (c.i >= c.j) throw ValidationError(where + "coupling needs i < j");
      if (c.j >= instance.qubit_count) {
        throw ValidationError(where + "coupling index " + std::to_string(c.j) + " out of range [0, " +
                              std::to_string(instance.qubit_count) + ")");
      }
      if (!pairs.emplace(c.i, c.j).second) {
        throw ValidationError(where + "duplicate coupling (" + std::to_string(c.i) + ", " +
                              std::to_string(c.j) + ")");
      }
      instance.couplings.push_back(c);
    } else if (key == "qubits") {
      throw ParseError(line_no, "'qubits' given twice");
    } else {
      throw ParseError(line_no, "unknown directive '" + std::string(key) + "'");
    }
  }
  if (!have_qubits) throw ParseError(line_no, "missing 'qubits N'");
  instance.validate();
  return instance;
}

std::string emit_instance(const ProblemInstance& instance) {
  std::ostringstream out;
  out << "# " << instance.id << '\n';
  out << "qubits " << instance.qubit_count << '\n';
  for (std::size_t i = 0; i < instance.fields.size(); ++i) {
    if (instance.fields[i] != 0.0) out << "h " << i << ' ' << format_real(instance.fields[i]) << '\n';
  }
  for (const auto& c : instance.couplings) {
    out << "J " << c.i << ' ' << c.j << ' ' << format_real(c.value) << '\n';
  }
  return out.str();
}

ProblemInstance generate_instance(std::size_t qubits, std::uint64_t coupling_seed, double density) {
  if (qubits == 0) throw DomainError("generate_instance: qubits must be positive");
  if (!(density > 0.0 && density <= 1.0)) throw DomainError("generate_instance: density must be in (0, 1]");

  ProblemInstance instance;
  instance.id = "gen-n" + std::to_string(qubits) + "-s" + std::to_string(coupling_seed) + "-d" +
                format_real(density);
  instance.qubit_count = qubits;
  instance.fields.assign(qubits, 0.0);

  std::mt19937_64 engine(coupling_seed);
  for (std::size_t i = 0; i < qubits; ++i) {
    for (std::size_t j = i + 1; j < qubits; ++j) {
      const double u = static_cast<double>(engine() >> 11) * 0x1.0p-53;
      if (u < density) {
        instance.couplings.push_back({i, j, (engine() & 1U) ? 1.0 : -1.0});
      }
    }
  }
  return instance;
}

void AnnealSchedule::validate() const {
  if (points.empty()) throw ValidationError("schedule: no points");
  for (std::size_t p = 0; p < points.size(); ++p) {
    const auto& pt = points[p];
    if (pt.index != p) throw ValidationError("schedule: point indices must be 0..P-1");
    if (!(pt.s >= 0.0 && pt.s <= 1.0)) throw ValidationError("schedule: s outside [0, 1]");
    if (p > 0 && !(pt.s > points[p - 1].s)) throw ValidationError("schedule: s must increase");
    if (!(pt.gamma >= 0.0) || !(pt.beta > 0.0)) {
      throw ValidationError("schedule: need gamma >= 0 and beta > 0");
    }
  }
}

AnnealSchedule build_schedule(std::size_t point_count, double gamma0, double beta) {
  if (point_count == 0) throw DomainError("build_schedule: point_count must be positive");
  if (!(gamma0 > 0.0) || !(beta > 0.0)) throw DomainError("build_schedule: gamma0 and beta must be positive");

  AnnealSchedule schedule;
  schedule.points.reserve(point_count);
  for (std::size_t p = 0; p < point_count; ++p) {
    const double s = point_count > 1 ? static_cast<double>(p) / static_cast<double>(point_count - 1) : 0.0;
    schedule.points.push_back({p, s, std::max(gamma0 * (1.0 - s), kGammaFloor), beta});
  }
  return schedule;
}

std::optional<std::size_t> preset_points(std::size_t qubits) {
  for (const auto& preset : kSizePresets) {
    if (preset.qubits == qubits) return preset.points;
  }
  return std::nullopt;
}

std::uint64_t variable_count(std::uint64_t qubits, std::uint64_t layers, std::uint64_t points) {
  if (qubits == 0 || layers == 0 || points == 0) {
    throw DomainError("variable_count: arguments must be positive");
  }
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  if (qubits > kMax / layers || qubits * layers > kMax / points) {
    throw OverflowError("variable_count: " + std::to_string(qubits) + " x " + std::to_string(layers) +
                        " x " + std::to_string(points) + " overflows 64 bits");
  }
  return qubits * layers * points;
}

double perpendicular_coupling(double beta, double gamma, std::size_t layers) {
  const double x = beta * gamma / static_cast<double>(layers);
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("perpendicular coupling: beta*gamma/K must be positive and finite");
  }
  // ln coth x = ln(1 + e^-2x) - ln(1 - e^-2x), stable for small and large x.
  const double q = std::exp(-2.0 * x);
  const double value = 0.5 * (std::log1p(q) - std::log1p(-q));
  return value > 0.0 ? value : std::numeric_limits<double>::denorm_min();
}

LayeredSystem::LayeredSystem(std::size_t layers, std::size_t sites, std::vector<Coupling> intra_coupling,
                             std::vector<double> intra_field, double perp_coupling,
                             std::vector<std::int8_t> spins)
    : layers_(layers),
      sites_(sites),
      intra_coupling_(std::move(intra_coupling)),
      intra_field_(std::move(intra_field)),
      perp_coupling_(perp_coupling),
      spins_(std::move(spins)) {
  if (layers_ < 2 || sites_ == 0) throw ValidationError("layered system: need K >= 2 layers and N >= 1 sites");
  if (sites_ > std::numeric_limits<std::uint32_t>::max()) throw ValidationError("layered system: too many sites");
  if (intra_field_.size() != sites_) throw ValidationError("layered system: field count != sites");
  if (spins_.size() != layers_ * sites_) throw ValidationError("layered system: spin count != K*N");
  for (auto s : spins_) {
    if (s != 1 && s != -1) throw ValidationError("layered system: spins must be +-1");
  }

  std::vector<std::size_t> degree(sites_, 0);
  for (const auto& c : intra_coupling_) {
    if (c.i >= c.j || c.j >= sites_) throw ValidationError("layered system: bad coupling indices");
    ++degree[c.i];
    ++degree[c.j];
  }
  offsets_.assign(sites_ + 1, 0);
  for (std::size_t i = 0; i < sites_; ++i) offsets_[i + 1] = offsets_[i] + degree[i];
  adjacency_.resize(offsets_.back());
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (const auto& c : intra_coupling_) {
    adjacency_[fill[c.i]++] = {static_cast<std::uint32_t>(c.j), c.value};
    adjacency_[fill[c.j]++] = {static_cast<std::uint32_t>(c.i), c.value};
  }
  for (std::size_t i = 0; i < sites_; ++i) {
    std::sort(adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]),
              adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[i + 1]),
              [](const Neighbor& a, const Neighbor& b) { return a.site < b.site; });
  }
}

void LayeredSystem::set_spins(std::span<const std::int8_t> spins) {
  if (spins.size() != spins_.size()) throw ValidationError("set_spins: size mismatch");
  for (auto s : spins) {
    if (s != 1 && s != -1) throw ValidationError("set_spins: spins must be +-1");
  }
  std::copy(spins.begin(), spins.end(), spins_.begin());
}

LayeredSystem trotterize(const ProblemInstance& instance, const SimulationPoint& point, std::size_t layers,
                         RngState& rng, std::size_t spin_chain, std::size_t spin_thread) {
  instance.validate();
  if (layers < 2) throw DomainError("trotterize: the replica ring needs at least two layers");
  if (!(point.beta > 0.0)) throw DomainError("trotterize: beta must be positive");
  const double perp = perpendicular_coupling(point.beta, point.gamma, layers);

  const double scale = point.s * point.beta / static_cast<double>(layers);
  std::vector<Coupling> couplings = instance.couplings;
  for (auto& c : couplings) c.value *= scale;
  std::vector<double> fields = instance.fields;
  for (auto& h : fields) h *= scale;

  std::vector<std::int8_t> spins(layers * instance.qubit_count);
  for (auto& s : spins) s = rng.next_u32(spin_chain, spin_thread) >> 31 ? 1 : -1;

  return LayeredSystem(layers, instance.qubit_count, std::move(couplings), std::move(fields), perp,
                       std::move(spins));
}

double total_energy(const LayeredSystem& system) {
  const std::size_t K = system.layers();
  double intra = 0.0;
  double field = 0.0;
  double ring = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    for (const auto& c : system.intra_coupling()) {
      intra += c.value * system.spin(k, c.i) * system.spin(k, c.j);
    }
    for (std::size_t i = 0; i < system.sites(); ++i) {
      field += system.intra_field()[i] * system.spin(k, i);
    }
    const std::size_t next = system.next_layer(k);
    for (std::size_t i = 0; i < system.sites(); ++i) {
      ring += system.spin(k, i) * system.spin(next, i);
    }
  }
  return -intra - field - system.perp_coupling() * ring;
}

}  // namespace pimc
