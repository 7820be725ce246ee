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

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "cfest/rng.hpp"

namespace cfest {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

double distance(const Point& a, const Point& b) noexcept;

/// Square deployment region and timing constants.
struct SimArea {
  double side_m = 836.66;           // sqrt(0.7 km^2)
  int ap_count = 70;
  double ue_mean = 98.0;            // Poisson mean of the UE count
  double restricted_radius_m = 20.0;
  double sample_period_s = 50e-9;   // 1 / bandwidth
  double propagation_speed = 3e8;

  double meters_per_sample() const noexcept { return propagation_speed * sample_period_s; }

  /// Throws ConfigError when an invariant is violated.
  void validate() const;
};

using DelayMatrix = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic>;

/// One drop of APs and UEs with user-centric clusters and integer-sample
/// delays. Rows index APs, columns index UEs.
struct NetworkRealization {
  std::vector<Point> ap_positions;
  std::vector<Point> ue_positions;
  std::vector<std::vector<int>> serving_sets;  // U_r, nearest first
  std::vector<std::vector<int>> serving_aps;   // R_u, ascending AP index
  Eigen::MatrixXd distance_m;
  DelayMatrix delay;                            // t_ur in samples
  std::vector<int> clock_offset;                // per UE, added to every t_ur
  std::vector<int> t_max;                       // per AP, max over all UEs
  std::vector<int> t_window;                    // per AP, max over served UEs

  int ap_count() const noexcept { return static_cast<int>(ap_positions.size()); }
  int ue_count() const noexcept { return static_cast<int>(ue_positions.size()); }
  bool serves(int r, int u) const;
};

/// floor(d / (c * tau_smp)). A relative slack of 1e-9 absorbs the rounding
/// of c * tau_smp, so 150 m at 50 ns maps to exactly 10 samples.
int discretize_delay(double distance_m, const SimArea& area);

/// Builds a realization from fixed positions: k-nearest clustering, delays,
/// per-AP maxima. Used by sample_topology and directly by tests.
NetworkRealization build_realization(const SimArea& area, std::vector<Point> aps,
                                     std::vector<Point> ues, int cluster_size,
                                     std::span<const int> clock_offsets = {});

/// Random drop: uniform APs, Poisson(ue_mean) UEs (at least one) placed
/// uniformly and rejection-resampled outside every restricted disk.
NetworkRealization sample_topology(const SimArea& area, int cluster_size, Rng& rng);

/// Recomputes delays and per-AP maxima with new per-UE clock offsets.
NetworkRealization with_clock_offsets(const NetworkRealization& net, const SimArea& area,
                                      std::span<const int> clock_offsets);

/// Same geometry and clusters with every delay forced to zero.
NetworkRealization synchronized(const NetworkRealization& net);

/// max over APs of (max - min) served delay.
int delay_spread_min_extension(const NetworkRealization& net);

double significant_region_radius(int tau_ex, const SimArea& area);

/// True when UE u's extended pilot spans AP r's whole MF window.
bool covers_window(const NetworkRealization& net, int r, int u, int tau_ex);

/// S_r: UEs whose extended pilot spans the MF window, together with U_r.
/// Sorted ascending.
std::vector<int> significant_set(const NetworkRealization& net, int r, int tau_ex);

}  // namespace cfest
