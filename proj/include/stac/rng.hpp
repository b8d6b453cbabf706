// Copyright 2026 The STAC Authors
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

#include <array>
#include <cstdint>

namespace stac {

/// Philox4x32-10 block function (Salmon et al., SC'11). Pure function of
/// (counter, key); used as the only entropy source so that every experiment
/// replays bit-for-bit from its master seed on any platform.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

/// Domain tags keep streams for different purposes disjoint even when they
/// share the same seed and indices.
enum class StreamDomain : std::uint32_t {
  kHash = 1,
  kGenerator = 2,
  kGFamily = 3,
  kSeedDerivation = 4,
  kMisc = 5,
};

/// A counter-based random stream. The stream identity is
/// (seed, domain, major, minor); the fourth counter word walks through the
/// blocks of that stream. Two streams with different identities never share
/// a Philox input block.
class RngStream {
 public:
  RngStream(std::uint64_t seed, StreamDomain domain, std::uint32_t major = 0,
            std::uint32_t minor = 0);

  std::uint32_t next_u32();
  std::uint64_t next_u64();
  bool next_bit();
  /// Uniform in [0, 1) with 53 random bits.
  double next_double();
  /// Uniform in [0, bound); bound must be positive. Rejection sampling, no
  /// modulo bias.
  std::uint64_t uniform_below(std::uint64_t bound);

  std::uint64_t seed() const { return seed_; }
  std::uint32_t major() const { return counter_[1]; }
  std::uint32_t minor() const { return counter_[2]; }
  StreamDomain domain() const { return static_cast<StreamDomain>(counter_[3]); }

 private:
  void refill();

  std::uint64_t seed_;
  std::array<std::uint32_t, 2> key_;
  // [0] block index, [1] major, [2] minor, [3] domain
  std::array<std::uint32_t, 4> counter_;
  std::array<std::uint32_t, 4> buffer_{};
  unsigned buffered_ = 0;
  std::uint32_t bits_ = 0;
  unsigned bits_left_ = 0;
};

/// Derives an independent 64-bit seed for cell (a, b) of an experiment grid
/// rooted at `master`.
std::uint64_t derive_seed(std::uint64_t master, std::uint32_t a, std::uint32_t b);

}  // namespace stac
