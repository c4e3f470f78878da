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

#include "pimc/backend.hpp"

#include <algorithm>
#include <atomic>
#include <barrier>
#include <cstring>
#include <exception>
#include <memory>
#include <mutex>
#include <optional>
#include <thread>

#include "pimc/error.hpp"
#include "pimc/kernel.hpp"
#include "pimc/rng.hpp"

namespace pimc {

namespace {

constexpr std::uint32_t kMagic = 0x434d4950U;  // "PIMC"
constexpr std::size_t kArenaHeader = 8;
constexpr std::size_t kGroupHeader = 16 + 24;
constexpr std::size_t kPairRecord = 16;

class Writer {
 public:
  explicit Writer(std::vector<std::byte>& out) : out_(out) {}
  template <typename T>
  void put(T value) {
    const std::size_t at = out_.size();
    out_.resize(at + sizeof(T));
    std::memcpy(out_.data() + at, &value, sizeof(T));
  }

 private:
  std::vector<std::byte>& out_;
};

template <typename T>
void store(std::vector<std::byte>& arena, std::size_t at, T value) {
  std::memcpy(arena.data() + at, &value, sizeof(T));
}

class Reader {
 public:
  Reader(std::span<const std::byte> in, std::size_t pos) : in_(in), pos_(pos) {}
  template <typename T>
  T get() {
    if (pos_ > in_.size() || in_.size() - pos_ < sizeof(T)) {
      throw MalformedBufferError("staged buffer truncated at byte " + std::to_string(pos_));
    }
    T value;
    std::memcpy(&value, in_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return value;
  }
  void need(std::size_t bytes) const {
    if (pos_ > in_.size() || in_.size() - pos_ < bytes) {
      throw MalformedBufferError("staged buffer truncated: need " + std::to_string(bytes) + " bytes at " +
                                 std::to_string(pos_));
    }
  }
  std::size_t pos() const { return pos_; }

 private:
  std::span<const std::byte> in_;
  std::size_t pos_;
};

/// A group decoded out of the arena, plus where its mutable fields live.
struct DecodedGroup {
  std::optional<LayeredSystem> system;
  double energy = 0.0;
  std::uint64_t flips = 0;
  std::size_t energy_at = 0;
  std::size_t flips_at = 0;
  std::size_t spins_at = 0;
  std::size_t locals_at = 0;
  std::size_t end = 0;
};

std::vector<std::size_t> read_directory(std::span<const std::byte> arena) {
  Reader r(arena, 0);
  if (r.get<std::uint32_t>() != kMagic) throw MalformedBufferError("staged buffer: bad magic");
  const auto count = r.get<std::uint32_t>();
  if (count == 0) throw MalformedBufferError("staged buffer: no groups");
  r.need(static_cast<std::size_t>(count) * sizeof(std::uint64_t));
  std::vector<std::size_t> offsets(count);
  for (auto& off : offsets) off = static_cast<std::size_t>(r.get<std::uint64_t>());
  return offsets;
}

DecodedGroup decode_group(std::span<const std::byte> arena, std::size_t offset) {
  Reader r(arena, offset);
  const auto layers = r.get<std::uint32_t>();
  const auto sites = r.get<std::uint32_t>();
  const auto pairs = r.get<std::uint32_t>();
  if (r.get<std::uint32_t>() != 0) throw MalformedBufferError("staged buffer: reserved word not zero");
  if (layers < 2 || sites == 0) throw MalformedBufferError("staged buffer: bad group shape");

  DecodedGroup g;
  const double perp = r.get<double>();
  g.energy_at = r.pos();
  g.energy = r.get<double>();
  g.flips_at = r.pos();
  g.flips = r.get<std::uint64_t>();

  const std::size_t spin_count = static_cast<std::size_t>(layers) * sites;
  r.need(sites * sizeof(double) + static_cast<std::size_t>(pairs) * kPairRecord +
         spin_count * (sizeof(std::int32_t) + sizeof(double)));

  std::vector<double> fields(sites);
  for (auto& h : fields) h = r.get<double>();
  std::vector<Coupling> couplings(pairs);
  for (auto& c : couplings) {
    c.i = r.get<std::uint32_t>();
    c.j = r.get<std::uint32_t>();
    c.value = r.get<double>();
  }
  g.spins_at = r.pos();
  std::vector<std::int8_t> spins(spin_count);
  for (auto& s : spins) {
    const auto word = r.get<std::int32_t>();
    if (word != 1 && word != -1) throw MalformedBufferError("staged buffer: spin word not +-1");
    s = static_cast<std::int8_t>(word);
  }
  g.locals_at = r.pos();
  for (std::size_t k = 0; k < spin_count; ++k) r.get<double>();
  g.end = r.pos();

  try {
    g.system.emplace(layers, sites, std::move(couplings), std::move(fields), perp, std::move(spins));
  } catch (const ValidationError& e) {
    throw MalformedBufferError(std::string("staged buffer: ") + e.what());
  }
  return g;
}

std::vector<DecodedGroup> decode_all(std::span<const std::byte> arena) {
  const auto offsets = read_directory(arena);
  std::vector<DecodedGroup> groups;
  groups.reserve(offsets.size());
  std::size_t expected = kArenaHeader + offsets.size() * sizeof(std::uint64_t);
  for (std::size_t off : offsets) {
    if (off != expected) throw MalformedBufferError("staged buffer: group directory out of order");
    groups.push_back(decode_group(arena, off));
    expected = groups.back().end;
  }
  if (expected != arena.size()) throw MalformedBufferError("staged buffer: trailing bytes");
  return groups;
}

void write_back(std::vector<std::byte>& arena, const DecodedGroup& g) {
  const LayeredSystem& sys = *g.system;
  store(arena, g.energy_at, g.energy);
  store(arena, g.flips_at, g.flips);
  const auto spins = sys.spins();
  for (std::size_t k = 0; k < spins.size(); ++k) {
    store(arena, g.spins_at + k * sizeof(std::int32_t), static_cast<std::int32_t>(spins[k]));
  }
  const auto locals = local_fields(sys);
  for (std::size_t k = 0; k < locals.size(); ++k) {
    store(arena, g.locals_at + k * sizeof(double), locals[k]);
  }
}

void run_reference(std::vector<DecodedGroup>& groups, const ExecutionPlan& plan, std::uint64_t sweeps,
                   RngState& rng, ExecutionTrace& trace) {
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    auto& g = groups[gi];
    const auto schedule = color_sites(*g.system, plan.lanes_per_group);
    const auto result = run_point(*g.system, sweeps, schedule, rng, gi, g.energy);
    g.flips += result.flips;
    g.energy = result.energy;
    trace.phases_completed[gi] = sweeps * schedule.phases.size();
  }
}

/// One concurrent slot of the parallel backend: a fixed set of lane threads
/// that walk the slot's groups one after another, meeting at a barrier after
/// every phase.
struct Slot {
  struct CloseStep {
    Slot* slot;
    void operator()() noexcept { slot->close_step(); }
  };

  std::vector<std::size_t> group_ids;
  std::vector<DecodedGroup>* groups = nullptr;
  const std::vector<UpdateSchedule>* schedules = nullptr;
  ExecutionTrace* trace = nullptr;
  std::uint64_t sweeps = 0;
  std::size_t lanes = 0;

  std::vector<std::vector<double>> lane_deltas;
  std::vector<std::uint64_t> lane_flips;
  std::atomic<std::uint64_t> epoch{0};
  std::atomic<std::uint64_t> violations{0};

  // Cursor advanced only inside close_step.
  std::size_t cursor_group = 0;
  std::uint64_t cursor_sweep = 0;
  std::size_t cursor_phase = 0;

  void close_step() {
    const std::size_t gid = group_ids[cursor_group];
    auto& g = (*groups)[gid];
    for (std::size_t lane = 0; lane < lanes; ++lane) {
      for (double d : lane_deltas[lane]) g.energy += d;
      lane_deltas[lane].clear();
      g.flips += lane_flips[lane];
      lane_flips[lane] = 0;
    }
    ++trace->phases_completed[gid];
    epoch.fetch_add(1, std::memory_order_release);
    if (++cursor_phase == (*schedules)[gid].phases.size()) {
      cursor_phase = 0;
      if (++cursor_sweep == sweeps) {
        cursor_sweep = 0;
        ++cursor_group;
      }
    }
  }
};

void run_parallel(std::vector<DecodedGroup>& groups, const std::vector<UpdateSchedule>& schedules,
                  const ExecutionPlan& plan, std::uint64_t sweeps, RngState& rng, ExecutionTrace& trace) {
  std::size_t lanes = 1;
  for (const auto& s : schedules) lanes = std::max(lanes, s.active_lanes());

  std::size_t concurrent = plan.concurrent_groups;
  if (concurrent == 0) {
    const std::size_t hw = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    concurrent = std::max<std::size_t>(1, hw / lanes);
  }
  concurrent = std::min(concurrent, groups.size());

  std::vector<Slot> slots(concurrent);
  for (std::size_t gi = 0; gi < groups.size(); ++gi) slots[gi % concurrent].group_ids.push_back(gi);
  for (auto& slot : slots) {
    slot.groups = &groups;
    slot.schedules = &schedules;
    slot.trace = &trace;
    slot.sweeps = sweeps;
    slot.lanes = lanes;
    slot.lane_deltas.resize(lanes);
    slot.lane_flips.assign(lanes, 0);
  }

  std::mutex error_mutex;
  std::exception_ptr first_error;
  {
    std::vector<std::unique_ptr<std::barrier<Slot::CloseStep>>> barriers;
    for (auto& slot : slots) {
      barriers.push_back(
          std::make_unique<std::barrier<Slot::CloseStep>>(static_cast<std::ptrdiff_t>(lanes), Slot::CloseStep{&slot}));
    }

    std::vector<std::jthread> workers;
    workers.reserve(concurrent * lanes);
    for (std::size_t si = 0; si < concurrent; ++si) {
      for (std::size_t lane = 0; lane < lanes; ++lane) {
        workers.emplace_back([&, si, lane] {
          Slot& slot = slots[si];
          auto& barrier = *barriers[si];
          std::uint64_t step = 0;
          for (std::size_t gid : slot.group_ids) {
            auto& g = groups[gid];
            const auto& schedule = schedules[gid];
            for (std::uint64_t s = 0; s < sweeps; ++s) {
              for (std::size_t p = 0; p < schedule.phases.size(); ++p, ++step) {
                if (slot.epoch.load(std::memory_order_acquire) != step) {
                  slot.violations.fetch_add(1, std::memory_order_relaxed);
                }
                if (lane < schedule.active_lanes()) {
                  try {
                    const auto tally = sweep_lane(*g.system, schedule, p, lane, rng, gid,
                                                  slot.lane_deltas[lane]);
                    slot.lane_flips[lane] = tally.flipped;
                  } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                  }
                }
                barrier.arrive_and_wait();
              }
            }
          }
        });
      }
    }
    trace.worker_threads = workers.size();
  }
  for (const auto& slot : slots) trace.barrier_violations += slot.violations.load();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace

std::string_view to_string(BackendKind kind) {
  return kind == BackendKind::parallel ? "parallel" : "reference";
}

BackendKind parse_backend_kind(std::string_view name) {
  if (name == "reference") return BackendKind::reference;
  if (name == "parallel") return BackendKind::parallel;
  throw ValidationError("unknown backend '" + std::string(name) + "' (expected reference or parallel)");
}

ExecutionPlan plan(std::size_t point_count, std::size_t lanes_per_group, BackendKind kind) {
  if (point_count == 0) throw DomainError("plan: point_count must be positive");
  if (lanes_per_group == 0) throw DomainError("plan: lanes_per_group must be positive");
  return ExecutionPlan{point_count, lanes_per_group, kind, 0};
}

std::size_t StagedBuffers::group_count() const { return read_directory(arena).size(); }

std::vector<double> local_fields(const LayeredSystem& system) {
  std::vector<double> out(system.spin_count());
  for (std::size_t k = 0; k < system.layers(); ++k) {
    for (std::size_t i = 0; i < system.sites(); ++i) {
      double local = system.intra_field()[i];
      for (const auto& nb : system.neighbors(i)) local += nb.value * system.spin(k, nb.site);
      local += system.perp_coupling() *
               (system.spin(system.prev_layer(k), i) + system.spin(system.next_layer(k), i));
      out[k * system.sites() + i] = local;
    }
  }
  return out;
}

StagedBuffers transfer_in(std::span<const LayeredSystem> systems) {
  if (systems.empty()) throw DomainError("transfer_in: no systems");
  if (systems.size() > 0xffffffffU) throw CapacityError("transfer_in: too many groups");

  StagedBuffers buffers;
  auto& arena = buffers.arena;
  std::size_t total = kArenaHeader + systems.size() * sizeof(std::uint64_t);
  for (const auto& sys : systems) {
    total += kGroupHeader + sys.sites() * sizeof(double) + sys.intra_coupling().size() * kPairRecord +
             sys.spin_count() * (sizeof(std::int32_t) + sizeof(double));
  }
  arena.reserve(total);

  Writer w(arena);
  w.put(kMagic);
  w.put(static_cast<std::uint32_t>(systems.size()));
  const std::size_t directory = arena.size();
  for (std::size_t g = 0; g < systems.size(); ++g) w.put(std::uint64_t{0});

  for (std::size_t g = 0; g < systems.size(); ++g) {
    const auto& sys = systems[g];
    store(arena, directory + g * sizeof(std::uint64_t), static_cast<std::uint64_t>(arena.size()));
    w.put(static_cast<std::uint32_t>(sys.layers()));
    w.put(static_cast<std::uint32_t>(sys.sites()));
    w.put(static_cast<std::uint32_t>(sys.intra_coupling().size()));
    w.put(std::uint32_t{0});
    w.put(sys.perp_coupling());
    w.put(total_energy(sys));
    w.put(std::uint64_t{0});
    for (double h : sys.intra_field()) w.put(h);
    for (const auto& c : sys.intra_coupling()) {
      w.put(static_cast<std::uint32_t>(c.i));
      w.put(static_cast<std::uint32_t>(c.j));
      w.put(c.value);
    }
    for (auto s : sys.spins()) w.put(static_cast<std::int32_t>(s));
    for (double local : local_fields(sys)) w.put(local);
  }
  buffers.byte_count_in = arena.size();
  return buffers;
}

StagedBuffers execute(const ExecutionPlan& plan, StagedBuffers buffers, std::uint64_t sweeps,
                      RngState& rng, ExecutionTrace* trace) {
  auto groups = decode_all(buffers.arena);
  if (groups.size() != plan.groups) {
    throw ShapeError("execute: plan has " + std::to_string(plan.groups) + " groups, buffers hold " +
                     std::to_string(groups.size()));
  }
  if (plan.lanes_per_group == 0) throw ShapeError("execute: plan has no lanes");
  if (!rng.initialized()) throw RngError("execute: rng not initialized");
  if (rng.chains() < plan.groups) {
    throw CapacityError("execute: " + std::to_string(plan.groups) + " groups need as many rng chains, have " +
                        std::to_string(rng.chains()));
  }
  if (rng.threads() < plan.lanes_per_group) {
    throw CapacityError("execute: " + std::to_string(plan.lanes_per_group) +
                        " lanes need as many rng threads, have " + std::to_string(rng.threads()));
  }

  ExecutionTrace local_trace;
  ExecutionTrace& tr = trace ? *trace : local_trace;
  tr = ExecutionTrace{};
  tr.phases_completed.assign(groups.size(), 0);
  if (sweeps == 0) return buffers;

  if (plan.kind == BackendKind::reference) {
    run_reference(groups, plan, sweeps, rng, tr);
  } else {
    std::vector<UpdateSchedule> schedules;
    schedules.reserve(groups.size());
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
      schedules.push_back(color_sites(*groups[gi].system, plan.lanes_per_group));
      check_sweep_shape(*groups[gi].system, schedules.back(), rng, gi);
    }
    run_parallel(groups, schedules, plan, sweeps, rng, tr);
  }
  for (const auto& g : groups) write_back(buffers.arena, g);
  return buffers;
}

std::vector<GroupResult> transfer_out(StagedBuffers& buffers) {
  auto groups = decode_all(buffers.arena);
  std::vector<GroupResult> out;
  out.reserve(groups.size());
  for (auto& g : groups) out.push_back({std::move(*g.system), g.flips, g.energy});
  buffers.byte_count_out = buffers.arena.size();
  return out;
}

}  // namespace pimc
