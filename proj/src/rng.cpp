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

#include "pimc/rng.hpp"

#include <limits>
#include <new>
#include <string>

#include "pimc/error.hpp"

namespace pimc {

namespace {

constexpr std::uint32_t kMatrixA = 0x9908b0dfU;
constexpr std::uint32_t kUpperMask = 0x80000000U;
constexpr std::uint32_t kLowerMask = 0x7fffffffU;
constexpr std::uint32_t kInitMultiplier = 1812433253U;

constexpr std::uint32_t mix(std::uint32_t upper, std::uint32_t lower, std::uint32_t far) {
  const std::uint32_t y = (upper & kUpperMask) | (lower & kLowerMask);
  return far ^ (y >> 1) ^ ((y & 1U) ? kMatrixA : 0U);
}

}  // namespace

RngState::RngState(std::size_t chains, std::size_t threads) : chains_(chains), threads_(threads) {
  if (chains == 0 || threads == 0) {
    throw DomainError("rng: chains and threads must be positive");
  }
  const std::size_t max = std::numeric_limits<std::size_t>::max();
  if (chains > max / threads || chains * threads > max / kDegree) {
    throw CapacityError("rng: " + std::to_string(chains) + "x" + std::to_string(threads) +
                        " lanes overflow the state layout");
  }
  try {
    mt_.assign(chains * threads * kDegree, 0U);
    mti_.assign(chains * threads, 0U);
  } catch (const std::bad_alloc&) {
    throw CapacityError("rng: cannot allocate state for " + std::to_string(chains * threads) +
                        " lanes");
  } catch (const std::length_error&) {
    throw CapacityError("rng: state too large");
  }
}

void RngState::init(std::uint32_t seed) {
  for (std::size_t chain = 0; chain < chains_; ++chain) {
    for (std::size_t thread = 0; thread < threads_; ++thread) {
      const std::size_t base = word_index(chain, 0, thread);
      mt_[base] = seed + static_cast<std::uint32_t>(base);
      std::uint32_t& counter = mti_[lane_index(chain, thread)];
      for (counter = 1; counter < kDegree; ++counter) {
        const std::size_t cur = base + counter * threads_;
        const std::size_t prev = base + (counter - 1) * threads_;
        mt_[cur] = kInitMultiplier * (mt_[prev] ^ (mt_[prev] >> 30)) + counter;
      }
    }
  }
  initialized_ = true;
}

void RngState::check_lane(std::size_t chain, std::size_t thread) const {
  if (!initialized_) {
    throw RngError("rng: state used before initialization");
  }
  if (chain >= chains_ || thread >= threads_) {
    throw RngError("rng: lane (" + std::to_string(chain) + ", " + std::to_string(thread) +
                   ") outside " + std::to_string(chains_) + "x" + std::to_string(threads_));
  }
}

void RngState::twist(std::size_t chain, std::size_t thread) {
  const std::size_t base = word_index(chain, 0, thread);
  const std::size_t stride = threads_;
  auto at = [&](std::size_t w) -> std::uint32_t& { return mt_[base + w * stride]; };

  std::size_t w = 0;
  for (; w < kDegree - kShift; ++w) {
    at(w) = mix(at(w), at(w + 1), at(w + kShift));
  }
  for (; w < kDegree - 1; ++w) {
    at(w) = mix(at(w), at(w + 1), at(w + kShift - kDegree));
  }
  at(kDegree - 1) = mix(at(kDegree - 1), at(0), at(kShift - 1));
  mti_[lane_index(chain, thread)] = 0;
}

std::uint32_t RngState::next_u32(std::size_t chain, std::size_t thread) {
  check_lane(chain, thread);
  std::uint32_t& counter = mti_[lane_index(chain, thread)];
  if (counter >= kDegree) {
    twist(chain, thread);
  }
  std::uint32_t y = mt_[word_index(chain, counter, thread)];
  ++counter;

  y ^= y >> 11;
  y ^= (y << 7) & 0x9d2c5680U;
  y ^= (y << 15) & 0xefc60000U;
  y ^= y >> 18;
  return y;
}

double RngState::next_unit(std::size_t chain, std::size_t thread) {
  return unit_from_u32(next_u32(chain, thread));
}

RngState mt_alloc(std::size_t chains, std::size_t threads) { return RngState(chains, threads); }

void mt_init(RngState& state, std::uint32_t seed) { state.init(seed); }

std::uint32_t mt_next_u32(RngState& state, std::size_t chain, std::size_t thread) {
  return state.next_u32(chain, thread);
}

double mt_next_unit(RngState& state, std::size_t chain, std::size_t thread) {
  return state.next_unit(chain, thread);
}

}  // namespace pimc
