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


#include "cfest/channel.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace cfest {

double path_loss(double distance_km) {
  if (!(distance_km > 0.0)) throw std::domain_error("path_loss: distance must be positive");
  return std::pow(10.0, -11.2427) * std::pow(distance_km, -3.8);
}

double sample_shadowing(Rng& rng, double sigma_db) {
  if (sigma_db <= 0.0) return 1.0;
  std::normal_distribution<double> db(0.0, sigma_db);
  return std::pow(10.0, db(rng) / 10.0);
}

CVector sample_fading(int antennas, Rng& rng) {
  if (antennas < 1) throw std::invalid_argument("sample_fading: antennas must be >= 1");
  CVector g(antennas);
  for (int i = 0; i < antennas; ++i) g(i) = complex_normal(rng, 1.0);
  return g;
}

LargeScale sample_large_scale(const NetworkRealization& net, double sigma_sh_db, Rng& rng) {
  LargeScale ls;
  ls.path_gain.resize(net.ap_count(), net.ue_count());
  ls.shadowing.resize(net.ap_count(), net.ue_count());
  for (int r = 0; r < net.ap_count(); ++r) {
    for (int u = 0; u < net.ue_count(); ++u) {
      ls.path_gain(r, u) = path_loss(net.distance_m(r, u) / 1000.0);
      ls.shadowing(r, u) = sample_shadowing(rng, sigma_sh_db);
    }
  }
  return ls;
}

LargeScale fixed_large_scale(const Eigen::MatrixXd& gains) {
  LargeScale ls;
  ls.path_gain = gains;
  ls.shadowing = Eigen::MatrixXd::Ones(gains.rows(), gains.cols());
  return ls;
}

ChannelMatrixSet::ChannelMatrixSet(int aps, int ues, int antennas, double noise_power)
    : aps_(aps),
      ues_(ues),
      antennas_(antennas),
      noise_power_(noise_power),
      h_(static_cast<std::size_t>(aps) * static_cast<std::size_t>(ues), CVector::Zero(antennas)) {}

ChannelMatrixSet draw_channels(const LargeScale& ls, int antennas, double noise_power, Rng& rng) {
  ChannelMatrixSet chan(ls.ap_count(), ls.ue_count(), antennas, noise_power);
  for (int r = 0; r < ls.ap_count(); ++r) {
    for (int u = 0; u < ls.ue_count(); ++u) {
      chan.at(r, u) = std::sqrt(ls.gain(r, u)) * sample_fading(antennas, rng);
    }
  }
  return chan;
}

void apply_link_phases(ChannelMatrixSet& chan, Rng& rng) {
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  for (int r = 0; r < chan.ap_count(); ++r)
    for (int u = 0; u < chan.ue_count(); ++u) chan.at(r, u) *= std::polar(1.0, phase(rng));
}

}  // namespace cfest
