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

namespace pimc {

/// Parallel Mersenne-Twister state split into (chain, thread) lanes.
///
/// Every lane is an independent MT19937 stream. Words are stored strided by
/// lane so that word w of lane (c, t) sits at c*threads*nn + w*threads + t,
/// the layout a device kernel gets when consecutive threads read consecutive
/// addresses. Lane (c, t) is seeded with `seed + base`, base being the flat
/// index of its word 0, so it reproduces a standalone MT19937 seeded that way.
///
/// Distinct lanes touch disjoint words and may be advanced concurrently. A
/// single lane must not be advanced from two threads at once.
class RngState {
 public:
  static constexpr std::size_t kDegree = 624;  // NN
  static constexpr std::size_t kShift = 397;   // M

  /// Allocates zeroed state. Throws DomainError for zero chains or threads,
  /// CapacityError when the layout does not fit in memory.
  RngState(std::size_t chains, std::size_t threads);

  std::size_t chains() const { return chains_; }
  std::size_t threads() const { return threads_; }
  bool initialized() const { return initialized_; }

  /// Flat index of word `word` of lane (chain, thread).
  std::size_t word_index(std::size_t chain, std::size_t word, std::size_t thread) const {
    return chain * threads_ * kDegree + word * threads_ + thread;
  }
  std::size_t lane_index(std::size_t chain, std::size_t thread) const {
    return chain * threads_ + thread;
  }

  /// Seeds every lane. mti of each lane is left at kDegree so the first
  /// draw twists.
  void init(std::uint32_t seed);

  std::uint32_t next_u32(std::size_t chain, std::size_t thread);
  /// next_u32 / 2^32, in [0, 1).
  double next_unit(std::size_t chain, std::size_t thread);

  const std::vector<std::uint32_t>& words() const { return mt_; }
  const std::vector<std::uint32_t>& counters() const { return mti_; }

 private:
  void check_lane(std::size_t chain, std::size_t thread) const;
  void twist(std::size_t chain, std::size_t thread);

  std::size_t chains_;
  std::size_t threads_;
  std::vector<std::uint32_t> mt_;
  std::vector<std::uint32_t> mti_;
  bool initialized_ = false;
};

RngState mt_alloc(std::size_t chains, std::size_t threads);
void mt_init(RngState& state, std::uint32_t seed);
std::uint32_t mt_next_u32(RngState& state, std::size_t chain, std::size_t thread);
double mt_next_unit(RngState& state, std::size_t chain, std::size_t thread);

/// Maps a raw 32-bit draw onto [0, 1).
constexpr double unit_from_u32(std::uint32_t raw) { return raw * (1.0 / 4294967296.0); }

}  // namespace pimc
