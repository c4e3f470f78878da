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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pimc/model.hpp"

namespace pimc {

class RngState;

enum class BackendKind { reference, parallel };

std::string_view to_string(BackendKind kind);
/// Throws ValidationError for anything but "reference" or "parallel".
BackendKind parse_backend_kind(std::string_view name);

/// One work group per simulation point, `lanes_per_group` lanes in each.
struct ExecutionPlan {
  std::size_t groups = 0;
  std::size_t lanes_per_group = 0;
  BackendKind kind = BackendKind::reference;
  /// Parallel backend only: groups in flight at once. 0 picks
  /// max(1, hardware threads / active lanes).
  std::size_t concurrent_groups = 0;
};

ExecutionPlan plan(std::size_t point_count, std::size_t lanes_per_group, BackendKind kind);

/// Host/device staging arena. All groups are serialized into one contiguous
/// byte buffer:
///
///     u32 magic, u32 group_count, u64 offset[group_count]
///     per group:
///       u32 layers, u32 sites, u32 pair_count, u32 reserved
///       f64 perp_coupling, f64 energy, u64 flips
///       f64 field[sites]
///       {u32 i, u32 j, f64 value}[pair_count]
///       i32 spin[layers*sites]
///       f64 local_field[layers*sites]
///
/// local_field(k, i) is the field acting on spin (k, i), so a flip costs
/// 2 * spin * local_field. Native byte order; the arena never leaves the process.
struct StagedBuffers {
  std::vector<std::byte> arena;
  std::size_t byte_count_in = 0;
  std::size_t byte_count_out = 0;

  std::size_t group_count() const;
};

StagedBuffers transfer_in(std::span<const LayeredSystem> systems);

/// Per-execute instrumentation. `phases_completed[g]` counts phase barriers
/// crossed by group g; `barrier_violations` counts lanes that observed a
/// phase epoch other than the one they were about to run.
struct ExecutionTrace {
  std::vector<std::uint64_t> phases_completed;
  std::uint64_t barrier_violations = 0;
  std::size_t worker_threads = 0;
};

/// Runs `sweeps` sweeps on every group. Group g uses RNG chain g and, for
/// lane t, RNG thread t. Both backends produce bitwise-identical arenas.
StagedBuffers execute(const ExecutionPlan& plan, StagedBuffers buffers, std::uint64_t sweeps,
                      RngState& rng, ExecutionTrace* trace = nullptr);

struct GroupResult {
  LayeredSystem system;
  std::uint64_t flips = 0;
  double energy = 0.0;
};

/// Decodes every group and records byte_count_out on `buffers`. Throws
/// MalformedBufferError on truncated or inconsistent arenas.
std::vector<GroupResult> transfer_out(StagedBuffers& buffers);

/// local_field for every spin of `system`, layer-major.
std::vector<double> local_fields(const LayeredSystem& system);

}  // namespace pimc
