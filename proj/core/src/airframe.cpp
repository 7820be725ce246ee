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


#include "cfest/airframe.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "cfest/errors.hpp"

namespace cfest {

namespace {

const std::complex<double> kQpsk[4] = {{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};

void check_dimensions(const PilotBook& book, const NetworkRealization& net,
                      const ChannelMatrixSet& chan) {
  if (book.ue_count() != net.ue_count() || chan.ue_count() != net.ue_count() ||
      chan.ap_count() != net.ap_count())
    throw std::logic_error("airframe: pilot book, network and channels disagree on dimensions");
}

}  // namespace

std::string_view to_string(Regime regime) noexcept {
  return regime == Regime::Upg ? "upg" : "upng";
}

Regime parse_regime(std::string_view text) {
  if (text == "upg") return Regime::Upg;
  if (text == "upng") return Regime::Upng;
  throw ConfigError("frame.regime", "unknown regime '" + std::string(text) + "'");
}

UplinkData draw_uplink_data(int ue_count, int length, Rng& rng) {
  std::uniform_int_distribution<int> pick(0, 3);
  UplinkData data;
  data.symbols.reserve(static_cast<std::size_t>(ue_count));
  for (int u = 0; u < ue_count; ++u) {
    CRow row(std::max(length, 0));
    for (int i = 0; i < row.size(); ++i) row(i) = kQpsk[pick(rng)];
    data.symbols.push_back(std::move(row));
  }
  return data;
}

int uplink_data_length(const NetworkRealization& net) {
  return net.t_max.empty() ? 0 : *std::max_element(net.t_max.begin(), net.t_max.end());
}

CRow build_augmented_sequence(const PilotBook& book, const NetworkRealization& net, Regime regime,
                              int r, int u, const UplinkData& data) {
  const int t = net.delay(r, u);
  const int tail = net.t_max[r] - t;
  CRow row = CRow::Zero(book.length() + net.t_max[r]);
  row.segment(t, book.length()) = book.sequences.at(static_cast<std::size_t>(u));
  if (regime == Regime::Upng && tail > 0) {
    const CRow& s = data.symbols.at(static_cast<std::size_t>(u));
    if (s.size() < tail) throw std::logic_error("build_augmented_sequence: data sequence too short");
    row.tail(tail) = s.head(tail);
  }
  return row;
}

CRow build_augmented_sequence(const PilotBook& book, const NetworkRealization& net, Regime regime,
                              int r, int u, Rng& rng) {
  UplinkData one;
  one.symbols.resize(static_cast<std::size_t>(net.ue_count()));
  if (regime == Regime::Upng) {
    one.symbols[u] = draw_uplink_data(1, net.t_max[r] - net.delay(r, u), rng).symbols.front();
  }
  return build_augmented_sequence(book, net, regime, r, u, one);
}

CMatrix synthesize_signal(const PilotBook& book, const NetworkRealization& net,
                          const ChannelMatrixSet& chan, Regime regime, int r,
                          const UplinkData& data, std::span<const int> ues) {
  check_dimensions(book, net, chan);
  std::vector<int> all;
  if (ues.empty()) {
    all.resize(static_cast<std::size_t>(net.ue_count()));
    for (int u = 0; u < net.ue_count(); ++u) all[u] = u;
    ues = all;
  }
  const int cols = book.length() + net.t_max[r];
  const int n = static_cast<int>(ues.size());
  CMatrix h(chan.antennas(), n);
  CMatrix x(n, cols);
  for (int i = 0; i < n; ++i) {
    h.col(i) = chan.at(r, ues[i]);
    x.row(i) = build_augmented_sequence(book, net, regime, r, ues[i], data);
  }
  return h * x;
}

CMatrix draw_noise(int rows, int cols, double noise_power, Rng& rng) {
  CMatrix z(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int i = 0; i < rows; ++i) z(i, c) = complex_normal(rng, noise_power);
  return z;
}

ReceivedFrame assemble_frame(const PilotBook& book, const NetworkRealization& net,
                             const ChannelMatrixSet& chan, Regime regime, double p_ul,
                             const UplinkData& data, std::span<const CMatrix> noise) {
  if (noise.size() != static_cast<std::size_t>(net.ap_count()))
    throw std::logic_error("assemble_frame: need one noise block per AP");
  ReceivedFrame frame;
  frame.p_ul = p_ul;
  frame.noise_power = chan.noise_power();
  frame.pilot_length = book.length();
  frame.y.reserve(noise.size());
  const double amp = std::sqrt(p_ul);
  for (int r = 0; r < net.ap_count(); ++r) {
    CMatrix y = amp * synthesize_signal(book, net, chan, regime, r, data);
    if (noise[r].rows() != y.rows() || noise[r].cols() != y.cols())
      throw std::logic_error("assemble_frame: noise block shape mismatch");
    y += noise[r];
    frame.y.push_back(std::move(y));
  }
  return frame;
}

ReceivedFrame synthesize_frame(const PilotBook& book, const NetworkRealization& net,
                               const ChannelMatrixSet& chan, Regime regime, double p_ul, Rng& rng) {
  UplinkData data;
  if (regime == Regime::Upng) {
    data = draw_uplink_data(net.ue_count(), uplink_data_length(net), rng);
  } else {
    data.symbols.assign(static_cast<std::size_t>(net.ue_count()), CRow());
  }
  std::vector<CMatrix> noise;
  noise.reserve(static_cast<std::size_t>(net.ap_count()));
  for (int r = 0; r < net.ap_count(); ++r)
    noise.push_back(draw_noise(chan.antennas(), book.length() + net.t_max[r], chan.noise_power(), rng));
  return assemble_frame(book, net, chan, regime, p_ul, data, noise);
}

}  // namespace cfest
