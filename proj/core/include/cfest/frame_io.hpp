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

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "cfest/channel.hpp"

namespace cfest {

/// Debug dump of one AP's received block.
///
/// Layout, all little-endian:
///   bytes 0..3   magic "ACFE"
///   bytes 4..7   uint32 rows (antennas M)
///   bytes 8..11  uint32 cols (L + t_max_r)
///   bytes 12..15 uint32 reserved, written as 0
///   then rows*cols complex64 values (float32 re, float32 im), row-major.
inline constexpr char kFrameMagic[4] = {'A', 'C', 'F', 'E'};
inline constexpr std::size_t kFrameHeaderBytes = 16;

void write_frame_dump(std::ostream& out, const CMatrix& frame);
void write_frame_dump(const std::filesystem::path& path, const CMatrix& frame);

/// Throws IoError on a short read or bad magic.
CMatrix read_frame_dump(std::istream& in);
CMatrix read_frame_dump(const std::filesystem::path& path);

}  // namespace cfest
