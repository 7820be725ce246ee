// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The cfest Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace cfest {

/// Random engine used throughout the simulator. All sampling functions take
/// an explicit stream so that results are reproducible from a seed.
using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Derives a child seed from a root seed and a path of keys, e.g.
/// (seed, trial, stream_tag). Distinct paths give statistically independent
/// streams; the same path always gives the same stream.
std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> path) noexcept;

inline Rng make_stream(std::uint64_t root, std::initializer_list<std::uint64_t> path) {
  return Rng{derive_seed(root, path)};
}

/// Circularly-symmetric complex Gaussian with E|z|^2 = variance.
std::complex<double> complex_normal(Rng& rng, double variance = 1.0);

/// Stream tags used when deriving per-trial substreams.
namespace stream {
inline constexpr std::uint64_t kNetwork = 0x6e6574ULL;
inline constexpr std::uint64_t kLargeScale = 0x6c7367ULL;
inline constexpr std::uint64_t kFading = 0x666164ULL;
inline constexpr std::uint64_t kPilot = 0x706c74ULL;
inline constexpr std::uint64_t kData = 0x646174ULL;
inline constexpr std::uint64_t kNoise = 0x6e6f73ULL;
inline constexpr std::uint64_t kPhase = 0x706873ULL;
}  // namespace stream

}  // namespace cfest
