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


#include "cfest/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "cfest/errors.hpp"

namespace cfest {

namespace {

constexpr int kMaxPlacementAttempts = 10000;

void finalize_delays(NetworkRealization& net, const SimArea& area) {
  const int aps = net.ap_count();
  const int ues = net.ue_count();
  net.delay.resize(aps, ues);
  net.t_max.assign(aps, 0);
  net.t_window.assign(aps, 0);
  for (int r = 0; r < aps; ++r) {
    for (int u = 0; u < ues; ++u) {
      net.delay(r, u) = discretize_delay(net.distance_m(r, u), area) + net.clock_offset[u];
      net.t_max[r] = std::max(net.t_max[r], net.delay(r, u));
    }
    for (int u : net.serving_sets[r]) {
      net.t_window[r] = std::max(net.t_window[r], net.delay(r, u));
    }
  }
}

}  // namespace

double distance(const Point& a, const Point& b) noexcept {
  return std::hypot(a.x - b.x, a.y - b.y);
}

void SimArea::validate() const {
  if (!(side_m > 0.0)) throw ConfigError("area.side_m", "side length must be positive");
  if (ap_count < 1) throw ConfigError("area.ap_count", "at least one AP is required");
  if (!(ue_mean > 0.0)) throw ConfigError("area.ue_mean", "UE mean must be positive");
  if (!(restricted_radius_m >= 0.0))
    throw ConfigError("area.gamma_m", "restricted radius must be non-negative");
  if (!(restricted_radius_m < side_m / 2.0))
    throw ConfigError("area.gamma_m", "restricted radius must be below half the side length");
  if (!(sample_period_s > 0.0)) throw ConfigError("sys.bw_hz", "sample period must be positive");
  if (!(propagation_speed > 0.0))
    throw ConfigError("", "propagation speed must be positive");
}

bool NetworkRealization::serves(int r, int u) const {
  const auto& set = serving_sets.at(static_cast<std::size_t>(r));
  return std::find(set.begin(), set.end(), u) != set.end();
}

int discretize_delay(double distance_m, const SimArea& area) {
  if (distance_m < 0.0) throw std::invalid_argument("discretize_delay: negative distance");
  const double samples = distance_m / area.meters_per_sample();
  return static_cast<int>(std::floor(samples * (1.0 + 1e-9)));
}

NetworkRealization build_realization(const SimArea& area, std::vector<Point> aps,
                                     std::vector<Point> ues, int cluster_size,
                                     std::span<const int> clock_offsets) {
  if (cluster_size < 1) throw ConfigError("cluster.size", "cluster size must be positive");
  if (aps.empty()) throw ConfigError("area.ap_count", "no APs");
  if (ues.empty()) throw ConfigError("area.ue_mean", "no UEs");
  if (!clock_offsets.empty() && clock_offsets.size() != ues.size())
    throw std::invalid_argument("build_realization: clock offset count != UE count");

  NetworkRealization net;
  net.ap_positions = std::move(aps);
  net.ue_positions = std::move(ues);
  const int n_ap = net.ap_count();
  const int n_ue = net.ue_count();

  net.clock_offset.assign(clock_offsets.begin(), clock_offsets.end());
  if (net.clock_offset.empty()) net.clock_offset.assign(n_ue, 0);

  net.distance_m.resize(n_ap, n_ue);
  for (int r = 0; r < n_ap; ++r)
    for (int u = 0; u < n_ue; ++u)
      net.distance_m(r, u) = distance(net.ap_positions[r], net.ue_positions[u]);

  // k nearest UEs per AP; ties broken by UE index.
  const int k = std::min(cluster_size, n_ue);
  net.serving_sets.assign(n_ap, {});
  net.serving_aps.assign(n_ue, {});
  std::vector<int> order(n_ue);
  for (int r = 0; r < n_ap; ++r) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return net.distance_m(r, a) < net.distance_m(r, b);
    });
    net.serving_sets[r].assign(order.begin(), order.begin() + k);
    for (int u : net.serving_sets[r]) net.serving_aps[u].push_back(r);
  }

  finalize_delays(net, area);
  return net;
}

NetworkRealization sample_topology(const SimArea& area, int cluster_size, Rng& rng) {
  area.validate();
  std::uniform_real_distribution<double> coord(0.0, area.side_m);

  std::vector<Point> aps(static_cast<std::size_t>(area.ap_count));
  for (auto& p : aps) {
    p.x = coord(rng);
    p.y = coord(rng);
  }

  std::poisson_distribution<int> count(area.ue_mean);
  int n_ue = 0;
  for (int attempt = 0; attempt < kMaxPlacementAttempts && n_ue == 0; ++attempt) n_ue = count(rng);
  if (n_ue == 0) throw ConfigError("area.ue_mean", "UE count draw kept returning zero");

  const double gamma = area.restricted_radius_m;
  std::vector<Point> ues;
  ues.reserve(static_cast<std::size_t>(n_ue));
  for (int u = 0; u < n_ue; ++u) {
    bool placed = false;
    for (int attempt = 0; attempt < kMaxPlacementAttempts; ++attempt) {
      const Point p{coord(rng), coord(rng)};
      const bool clear = std::all_of(aps.begin(), aps.end(),
                                     [&](const Point& ap) { return distance(ap, p) >= gamma; });
      if (clear) {
        ues.push_back(p);
        placed = true;
        break;
      }
    }
    if (!placed)
      throw ConfigError("area.gamma_m",
                        "restricted disks leave no room for UEs (placement attempts exhausted)");
  }

  return build_realization(area, std::move(aps), std::move(ues), cluster_size);
}

NetworkRealization with_clock_offsets(const NetworkRealization& net, const SimArea& area,
                                      std::span<const int> clock_offsets) {
  if (clock_offsets.size() != static_cast<std::size_t>(net.ue_count()))
    throw std::invalid_argument("with_clock_offsets: offset count != UE count");
  NetworkRealization out = net;
  out.clock_offset.assign(clock_offsets.begin(), clock_offsets.end());
  finalize_delays(out, area);
  return out;
}

NetworkRealization synchronized(const NetworkRealization& net) {
  NetworkRealization out = net;
  out.delay.setZero();
  std::fill(out.t_max.begin(), out.t_max.end(), 0);
  std::fill(out.t_window.begin(), out.t_window.end(), 0);
  std::fill(out.clock_offset.begin(), out.clock_offset.end(), 0);
  return out;
}

int delay_spread_min_extension(const NetworkRealization& net) {
  int spread = 0;
  for (int r = 0; r < net.ap_count(); ++r) {
    const auto& set = net.serving_sets[r];
    if (set.empty()) continue;
    int lo = net.delay(r, set.front());
    int hi = lo;
    for (int u : set) {
      lo = std::min(lo, net.delay(r, u));
      hi = std::max(hi, net.delay(r, u));
    }
    spread = std::max(spread, hi - lo);
  }
  return spread;
}

double significant_region_radius(int tau_ex, const SimArea& area) {
  if (tau_ex < 0) throw std::invalid_argument("significant_region_radius: negative extension");
  return tau_ex * area.sample_period_s * area.propagation_speed;
}

bool covers_window(const NetworkRealization& net, int r, int u, int tau_ex) {
  const int lead = net.t_window[r] - net.delay(r, u);
  return lead >= 0 && lead <= tau_ex;
}

std::vector<int> significant_set(const NetworkRealization& net, int r, int tau_ex) {
  if (r < 0 || r >= net.ap_count()) throw std::out_of_range("significant_set: AP index");
  std::vector<int> out;
  for (int u = 0; u < net.ue_count(); ++u) {
    if (covers_window(net, r, u, tau_ex) || net.serves(r, u)) out.push_back(u);
  }
  return out;
}

}  // namespace cfest
