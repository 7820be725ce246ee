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
#include <vector>

#include <Eigen/Core>

#include "cfest/geometry.hpp"
#include "cfest/rng.hpp"

namespace cfest {

using CVector = Eigen::VectorXcd;
using CRow = Eigen::RowVectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// Walfisch-Ikegami: 10^-11.2427 * d_km^-3.8. Throws std::domain_error for d <= 0.
double path_loss(double distance_km);

/// Log-normal shadowing 10^(X/10), X ~ N(0, sigma_db^2).
double sample_shadowing(Rng& rng, double sigma_db = 4.0);

/// i.i.d. CN(0, 1) entries.
CVector sample_fading(int antennas, Rng& rng);

/// Large-scale coefficients of one realization, frozen across fading draws.
struct LargeScale {
  Eigen::MatrixXd path_gain;  // beta_ru
  Eigen::MatrixXd shadowing;  // psi_ru

  double gain(int r, int u) const { return path_gain(r, u) * shadowing(r, u); }
  int ap_count() const noexcept { return static_cast<int>(path_gain.rows()); }
  int ue_count() const noexcept { return static_cast<int>(path_gain.cols()); }
};

LargeScale sample_large_scale(const NetworkRealization& net, double sigma_sh_db, Rng& rng);

/// Large-scale gains set directly (toy networks, tests).
LargeScale fixed_large_scale(const Eigen::MatrixXd& gains);

/// h_ru = sqrt(beta psi) g_ru for every (r, u) link, interferers included.
class ChannelMatrixSet {
 public:
  ChannelMatrixSet() = default;
  ChannelMatrixSet(int aps, int ues, int antennas, double noise_power);

  int antennas() const noexcept { return antennas_; }
  int ap_count() const noexcept { return aps_; }
  int ue_count() const noexcept { return ues_; }
  double noise_power() const noexcept { return noise_power_; }

  const CVector& at(int r, int u) const { return h_[index(r, u)]; }
  CVector& at(int r, int u) { return h_[index(r, u)]; }

 private:
  std::size_t index(int r, int u) const {
    return static_cast<std::size_t>(r) * static_cast<std::size_t>(ues_) + static_cast<std::size_t>(u);
  }

  int aps_ = 0;
  int ues_ = 0;
  int antennas_ = 0;
  double noise_power_ = 0.0;
  std::vector<CVector> h_;
};

/// Draws fresh Rayleigh fading on top of frozen large-scale gains.
ChannelMatrixSet draw_channels(const LargeScale& ls, int antennas, double noise_power, Rng& rng);

/// Multiplies each h_ru by an independent uniform phase e^{j theta_ru}
/// (carrier-phase asynchrony folded into the effective channel).
void apply_link_phases(ChannelMatrixSet& chan, Rng& rng);

}  // namespace cfest
