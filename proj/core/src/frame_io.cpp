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


#include "cfest/frame_io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "cfest/errors.hpp"

namespace cfest {

namespace {

static_assert(sizeof(float) == 4);

void put_u32(std::ostream& out, std::uint32_t v) {
  const std::array<char, 4> b = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                                 static_cast<char>((v >> 16) & 0xff),
                                 static_cast<char>((v >> 24) & 0xff)};
  out.write(b.data(), 4);
}

std::uint32_t get_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_f32(std::ostream& out, double value) {
  put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(value)));
}

}  // namespace

void write_frame_dump(std::ostream& out, const CMatrix& frame) {
  out.write(kFrameMagic, 4);
  put_u32(out, static_cast<std::uint32_t>(frame.rows()));
  put_u32(out, static_cast<std::uint32_t>(frame.cols()));
  put_u32(out, 0);
  for (Eigen::Index i = 0; i < frame.rows(); ++i) {
    for (Eigen::Index j = 0; j < frame.cols(); ++j) {
      put_f32(out, frame(i, j).real());
      put_f32(out, frame(i, j).imag());
    }
  }
  if (!out) throw IoError("frame dump: write failed");
}

void write_frame_dump(const std::filesystem::path& path, const CMatrix& frame) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  write_frame_dump(out, frame);
}

CMatrix read_frame_dump(std::istream& in) {
  std::array<unsigned char, kFrameHeaderBytes> header{};
  if (!in.read(reinterpret_cast<char*>(header.data()), header.size()))
    throw IoError("frame dump: truncated header");
  if (std::memcmp(header.data(), kFrameMagic, 4) != 0) throw IoError("frame dump: bad magic");
  const std::uint32_t rows = get_u32(header.data() + 4);
  const std::uint32_t cols = get_u32(header.data() + 8);
  CMatrix frame(rows, cols);
  std::array<unsigned char, 8> cell{};
  for (std::uint32_t i = 0; i < rows; ++i) {
    for (std::uint32_t j = 0; j < cols; ++j) {
      if (!in.read(reinterpret_cast<char*>(cell.data()), cell.size()))
        throw IoError("frame dump: truncated payload");
      const float re = std::bit_cast<float>(get_u32(cell.data()));
      const float im = std::bit_cast<float>(get_u32(cell.data() + 4));
      frame(i, j) = {re, im};
    }
  }
  return frame;
}

CMatrix read_frame_dump(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return read_frame_dump(in);
}

}  // namespace cfest
