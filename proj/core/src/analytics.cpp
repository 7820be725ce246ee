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


#include "cfest/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "cfest/pilot.hpp"

namespace cfest {

double random_seq_interference_power(double gain, int antennas, int overlap) {
  return antennas * gain * std::max(overlap, 0);
}

int overlap_time(Regime regime, int t_u, int t_v, int tau_p) {
  if (regime == Regime::Upng && t_u > t_v) return tau_p;
  return std::clamp(tau_p - std::abs(t_u - t_v), 0, tau_p);
}

double dft_interference_factor(Regime regime, int m, int n, int tau_p, int t_u, int t_v) {
  const int overlap = tau_p - std::abs(t_u - t_v);
  double factor = 0.0;
  if (overlap > 0) {
    const bool same = ((m - n) % tau_p) == 0;
    factor = same ? static_cast<double>(overlap) * overlap
                  : dft_cross_power_factor(m, n, tau_p, overlap);
  }
  if (regime == Regime::Upng && t_u > t_v) factor += std::min(t_u - t_v, tau_p);
  return factor;
}

double dft_interference_power(Regime regime, int m, int n, double gain, int antennas, int tau_p,
                              int t_u, int t_v) {
  return antennas * gain * dft_interference_factor(regime, m, n, tau_p, t_u, t_v);
}

double PowerBreakdown::interference_total() const noexcept {
  double sum = 0.0;
  for (const auto& term : interference) sum += term.power;
  return sum;
}

CrossCorrTable crosscorr_comparison(std::span<const int> tau_ps, int delay, Rng& rng, int trials,
                                    DftPairMode mode, int phase_levels) {
  if (delay < 0) throw std::invalid_argument("crosscorr_comparison: negative delay");
  if (trials < 1) throw std::invalid_argument("crosscorr_comparison: trials must be >= 1");
  CrossCorrTable table;
  table.delay = delay;
  table.mode = mode;

  std::uniform_int_distribution<int> level(0, phase_levels - 1);
  const double step = 2.0 * std::numbers::pi / phase_levels;

  for (int tau_p : tau_ps) {
    if (tau_p < 2) throw std::invalid_argument("crosscorr_comparison: tau_p must be >= 2");
    CrossCorrRow row;
    row.tau_p = tau_p;
    const int overlap = tau_p - delay;

    // Random pilots: the MF of u sees the first `overlap` samples of the
    // interferer against its own trailing samples.
    double acc = 0.0;
    for (int t = 0; t < trials; ++t) {
      std::complex<double> sum{};
      for (int i = 0; i < tau_p; ++i) {
        const std::complex<double> mine = std::polar(1.0, step * level(rng));
        if (i >= delay) {
          const std::complex<double> theirs = std::polar(1.0, step * level(rng));
          sum += theirs * std::conj(mine);
        }
      }
      acc += std::norm(sum);
    }
    row.random_mean = acc / trials;

    if (overlap <= 0) {
      row.dft_mean = 0.0;
    } else if (mode == DftPairMode::Adjacent) {
      row.dft_mean = dft_cross_power_factor(1, 0, tau_p, overlap);
    } else {
      double total = 0.0;
      for (int k = 1; k < tau_p; ++k) total += dft_cross_power_factor(k, 0, tau_p, overlap);
      row.dft_mean = total / (tau_p - 1);
    }
    table.rows.push_back(row);
  }

  if (!table.rows.empty()) {
    const bool first_above = table.rows.front().dft_mean > table.rows.front().random_mean;
    for (const auto& row : table.rows) {
      if ((row.dft_mean > row.random_mean) != first_above) {
        table.crossover_tau_p = row.tau_p;
        break;
      }
    }
  }
  return table;
}

double to_db(double linear) noexcept {
  return 10.0 * std::log10(std::max(linear, kDbFloorLinear));
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("percentile: empty input");
  std::sort(values.begin(), values.end());
  const double pos = std::clamp(q, 0.0, 100.0) / 100.0 * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

NmseSummary nmse_aggregate(std::span<const double> nmse) {
  if (nmse.empty()) throw std::invalid_argument("nmse_aggregate: empty input");
  NmseSummary s;
  s.count = nmse.size();
  double sum = 0.0;
  std::vector<double> db;
  db.reserve(nmse.size());
  for (double x : nmse) {
    sum += x;
    db.push_back(to_db(x));
  }
  s.mean_linear = sum / static_cast<double>(nmse.size());
  s.mean_db = to_db(s.mean_linear);
  s.p10_db = percentile(db, 10.0);
  s.p90_db = percentile(std::move(db), 90.0);
  return s;
}

double overhead_factor(int tau_c, int tau_p, int tau_ex) noexcept {
  if (tau_c <= 0) return 0.0;
  return std::clamp(static_cast<double>(tau_c - tau_p - tau_ex) / tau_c, 0.0, 1.0);
}

RateReport conjugate_bf_rate(const NetworkRealization& net, const LargeScale& ls,
                             const std::vector<std::vector<LinkRateStats>>& stats, int antennas,
                             double p_dl, double noise_dl, double overhead) {
  const int n_ap = net.ap_count();
  const int n_ue = net.ue_count();
  if (static_cast<int>(stats.size()) != n_ap)
    throw std::invalid_argument("conjugate_bf_rate: need stats for every AP");

  const double m = antennas;
  // sqrt(eta_ru) per served slot.
  std::vector<std::vector<double>> root_eta(static_cast<std::size_t>(n_ap));
  for (int r = 0; r < n_ap; ++r) {
    const auto& set = net.serving_sets[r];
    if (stats[r].size() != set.size())
      throw std::invalid_argument("conjugate_bf_rate: stats do not match serving set");
    root_eta[r].resize(set.size());
    for (std::size_t i = 0; i < set.size(); ++i) {
      const double gamma = stats[r][i].gamma;
      root_eta[r][i] = gamma > 0.0 ? std::sqrt(1.0 / (static_cast<double>(set.size()) * m * gamma)) : 0.0;
    }
  }

  RateReport report;
  report.overhead = std::clamp(overhead, 0.0, 1.0);
  report.sinr.assign(static_cast<std::size_t>(n_ue), 0.0);
  report.spectral_efficiency.assign(static_cast<std::size_t>(n_ue), 0.0);

  std::vector<std::complex<double>> coherent(static_cast<std::size_t>(n_ue));
  double served_sum = 0.0;
  int served = 0;
  for (int k = 0; k < n_ue; ++k) {
    if (net.serving_aps[k].empty()) continue;
    std::fill(coherent.begin(), coherent.end(), std::complex<double>{});
    double desired = 0.0;
    double spread = 0.0;
    for (int r = 0; r < n_ap; ++r) {
      const double beta_rk = ls.gain(r, k);
      const auto& set = net.serving_sets[r];
      for (std::size_t i = 0; i < set.size(); ++i) {
        const int u = set[i];
        const LinkRateStats& st = stats[r][i];
        const double eta = root_eta[r][i] * root_eta[r][i];
        spread += eta * m * st.gamma * beta_rk;
        if (u == k) {
          desired += root_eta[r][i] * m * st.gamma;
        } else {
          coherent[u] += root_eta[r][i] * m * std::conj(st.lmmse_gain * st.corr.at(k)) * beta_rk;
        }
      }
    }
    double coherent_power = 0.0;
    for (int u = 0; u < n_ue; ++u) coherent_power += std::norm(coherent[u]);
    const double sinr = p_dl * desired * desired / (p_dl * spread + p_dl * coherent_power + noise_dl);
    report.sinr[k] = sinr;
    report.spectral_efficiency[k] = report.overhead * std::log2(1.0 + sinr);
    served_sum += report.spectral_efficiency[k];
    ++served;
  }
  report.mean_served = served > 0 ? served_sum / served : 0.0;
  return report;
}

}  // namespace cfest
