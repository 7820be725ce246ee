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


#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cfest/airframe.hpp"
#include "cfest/errors.hpp"
#include "cfest/frame_io.hpp"
#include "doctest.h"
#include "support/toy_network.hpp"

using namespace cfest;

namespace {

UplinkData no_data(int ues) {
  UplinkData d;
  d.symbols.assign(static_cast<std::size_t>(ues), CRow());
  return d;
}

}  // namespace

TEST_SUITE("airframe") {

TEST_CASE("augmented sequence layout") {
  Rng rng{1};
  const auto net = testing::line_network({0, 4, 9}, 3);
  const PilotBook book = make_pilot_book(PilotScheme::Dft, 8, 0, 3, rng);
  const UplinkData data = draw_uplink_data(3, uplink_data_length(net), rng);

  const CRow last = build_augmented_sequence(book, net, Regime::Upng, 0, 2, data);
  REQUIRE(last.size() == 8 + 9);
  CHECK(last.head(9).isZero());
  CHECK(last.tail(8).isApprox(book.sequences[2]));

  const CRow first = build_augmented_sequence(book, net, Regime::Upg, 0, 0, data);
  CHECK(first.head(8).isApprox(book.sequences[0]));
  CHECK(first.tail(9).isZero());

  const CRow mid = build_augmented_sequence(book, net, Regime::Upng, 0, 1, data);
  CHECK(mid.head(4).isZero());
  CHECK((mid.tail(5).array().abs() - 1.0).abs().maxCoeff() < 1e-12);

  const CRow drawn = build_augmented_sequence(book, net, Regime::Upng, 0, 0, rng);
  CHECK((drawn.tail(9).array().abs() - 1.0).abs().maxCoeff() < 1e-12);
}

TEST_CASE("single UE without noise is sqrt(p) h phi") {
  Rng rng{2};
  const auto net = testing::line_network({0}, 1);
  const PilotBook book = make_pilot_book(PilotScheme::Dft, 8, 0, 1, rng);
  const ChannelMatrixSet chan = draw_channels(testing::single_ap_gains({1e-9}), 4, 0.0, rng);
  const std::vector<CMatrix> noise{CMatrix::Zero(4, 8)};
  const ReceivedFrame frame = assemble_frame(book, net, chan, Regime::Upg, 0.01, no_data(1), noise);
  const CMatrix expected = std::sqrt(0.01) * chan.at(0, 0) * book.sequences[0];
  CHECK((frame.y[0] - expected).norm() < 1e-15);
  CHECK(frame.pilot_length == 8);
}

TEST_CASE("noise-only frames have per-entry variance sigma^2") {
  Rng rng{3};
  const auto net = testing::line_network({0, 3}, 2);
  const PilotBook book = make_pilot_book(PilotScheme::Dft, 32, 0, 2, rng);
  const ChannelMatrixSet chan = draw_channels(testing::single_ap_gains({0.0, 0.0}), 8, 2e-14, rng);
  double energy = 0.0;
  long entries = 0;
  while (entries < 100000) {
    const ReceivedFrame f = synthesize_frame(book, net, chan, Regime::Upng, 1e-3, rng);
    energy += f.y[0].squaredNorm();
    entries += f.y[0].size();
  }
  CHECK(energy / entries == doctest::Approx(2e-14).epsilon(0.02));
}

TEST_CASE("disjoint arrivals occupy disjoint column bands") {
  Rng rng{4};
  const auto net = testing::line_network({0, 10}, 2);
  const PilotBook book = make_pilot_book(PilotScheme::Dft, 8, 0, 2, rng);
  const ChannelMatrixSet chan = draw_channels(testing::single_ap_gains({1.0, 1.0}), 2, 0.0, rng);
  const CMatrix y0 = synthesize_signal(book, net, chan, Regime::Upg, 0, no_data(2), std::vector<int>{0});
  const CMatrix y1 = synthesize_signal(book, net, chan, Regime::Upg, 0, no_data(2), std::vector<int>{1});
  for (int c = 0; c < y0.cols(); ++c) {
    const bool first_band = c < 8;
    const bool second_band = c >= 10 && c < 18;
    CHECK((y0.col(c).norm() > 0) == first_band);
    CHECK((y1.col(c).norm() > 0) == second_band);
  }
}

TEST_CASE("frames are linear in the UE set") {
  Rng rng{5};
  const auto net = testing::line_network({1, 2, 6, 9}, 2);
  const PilotBook book = make_pilot_book(PilotScheme::Random, 8, 0, 4, rng);
  const ChannelMatrixSet chan =
      draw_channels(testing::single_ap_gains({1.0, 0.5, 0.2, 0.1}), 3, 0.0, rng);
  const UplinkData data = draw_uplink_data(4, uplink_data_length(net), rng);
  const CMatrix all = synthesize_signal(book, net, chan, Regime::Upng, 0, data);
  CMatrix sum = CMatrix::Zero(all.rows(), all.cols());
  for (int u = 0; u < 4; ++u)
    sum += synthesize_signal(book, net, chan, Regime::Upng, 0, data, std::vector<int>{u});
  CHECK((all - sum).norm() < 1e-12);
}

TEST_CASE("frame energy accounting under UPNG") {
  Rng rng{6};
  const std::vector<int> delays{0, 2, 5};
  const auto net = testing::line_network(delays, 3);
  const int tau_p = 8;
  const int m = 4;
  const double sigma2 = 1e-2;
  const double p = 0.5;
  const std::vector<double> g{1.0, 0.6, 0.3};
  const PilotBook book = make_pilot_book(PilotScheme::Dft, tau_p, 0, 3, rng);
  const LargeScale ls = testing::single_ap_gains(g);

  const int trials = 10000;
  double energy = 0.0;
  for (int t = 0; t < trials; ++t) {
    const ChannelMatrixSet chan = draw_channels(ls, m, sigma2, rng);
    energy += synthesize_frame(book, net, chan, Regime::Upng, p, rng).y[0].squaredNorm();
  }
  // Pilot plus data tail: each UE transmits tau_p + (t_max - t_u) unit-power samples.
  const int t_max = 5;
  double expected = m * (tau_p + t_max) * sigma2;
  for (std::size_t u = 0; u < g.size(); ++u) expected += p * m * g[u] * (tau_p + t_max - delays[u]);
  CHECK(energy / trials == doctest::Approx(expected).epsilon(0.02));
}

TEST_CASE("regime parsing") {
  CHECK(parse_regime("upg") == Regime::Upg);
  CHECK(parse_regime("upng") == Regime::Upng);
  CHECK_THROWS_AS(parse_regime("guard"), ConfigError);
}

}  // TEST_SUITE

TEST_SUITE("frame_io") {

TEST_CASE("dump round trip and header layout") {
  CMatrix y(2, 3);
  y << std::complex<double>(1, -1), 2.5, std::complex<double>(0, 3),
      -4.0, std::complex<double>(0.125, 0.5), 0.0;
  std::stringstream ss;
  write_frame_dump(ss, y);
  const std::string bytes = ss.str();
  REQUIRE(bytes.size() == kFrameHeaderBytes + 2 * 3 * 8);
  CHECK(bytes.substr(0, 4) == "ACFE");
  CHECK(static_cast<unsigned char>(bytes[4]) == 2);
  CHECK(static_cast<unsigned char>(bytes[8]) == 3);
  for (int i = 12; i < 16; ++i) CHECK(bytes[i] == 0);
  // First value's real part, float32 little-endian 1.0f = 00 00 80 3f.
  CHECK(static_cast<unsigned char>(bytes[19]) == 0x3f);
  CHECK(static_cast<unsigned char>(bytes[18]) == 0x80);

  std::stringstream in(bytes);
  const CMatrix back = read_frame_dump(in);
  CHECK((back - y).norm() < 1e-6);

  const auto path = std::filesystem::temp_directory_path() / "cfest_frame_io_test.bin";
  write_frame_dump(path, y);
  CHECK((read_frame_dump(path) - y).norm() < 1e-6);
  std::filesystem::remove(path);
}

TEST_CASE("corrupt dumps raise I/O errors") {
  std::stringstream bad_magic(std::string("XXXX") + std::string(12, '\0'));
  CHECK_THROWS_AS(read_frame_dump(bad_magic), IoError);

  CMatrix y = CMatrix::Ones(2, 2);
  std::stringstream ss;
  write_frame_dump(ss, y);
  std::string bytes = ss.str();
  bytes.resize(bytes.size() - 3);
  std::stringstream truncated(bytes);
  CHECK_THROWS_AS(read_frame_dump(truncated), IoError);
  CHECK_THROWS_AS(read_frame_dump(std::filesystem::path("/nonexistent/frame.bin")), IoError);
}

}  // TEST_SUITE
