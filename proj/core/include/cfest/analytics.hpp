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
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "cfest/airframe.hpp"
#include "cfest/channel.hpp"
#include "cfest/geometry.hpp"
#include "cfest/rng.hpp"

namespace cfest {

// ---------------------------------------------------------------------------
// Closed-form interference powers after matched filtering.

/// M * gain * overlap.
double random_seq_interference_power(double gain, int antennas, int overlap);

/// Samples of interferer v's signal that land in UE u's MF window under random
/// pilots. UPG: tau_p - |t_u - t_v|. UPNG: tau_p whenever t_u > t_v (pilot plus
/// data fill the window). Clipped to [0, tau_p].
int overlap_time(Regime regime, int t_u, int t_v, int tau_p);

/// Per-unit-gain, per-antenna interference of DFT row n (delay t_v) on the MF
/// of row m (delay t_u). UPG: R^2 on the overlap tau_p - |t_u - t_v|
/// (overlap^2 when m == n). UPNG adds the min(t_u - t_v, tau_p) data samples
/// that precede u's window end when the interferer arrives first.
double dft_interference_factor(Regime regime, int m, int n, int tau_p, int t_u, int t_v);

/// M * gain * dft_interference_factor.
double dft_interference_power(Regime regime, int m, int n, double gain, int antennas, int tau_p,
                              int t_u, int t_v);

// ---------------------------------------------------------------------------
// MF power breakdown for one served link.

struct InterfererTerm {
  int ue = 0;
  double power = 0.0;  // per antenna
};

/// Expected per-antenna powers of the three MF terms (multiply by M for the
/// vector powers). `desired` is |c_uu|^2 beta psi, where c_uu = tau_p e^{j theta}.
struct PowerBreakdown {
  double desired = 0.0;
  std::vector<InterfererTerm> interference;
  double noise = 0.0;

  double interference_total() const noexcept;
  double total() const noexcept { return desired + interference_total() + noise; }
};

// ---------------------------------------------------------------------------
// Fixed-delay cross-correlation comparison (random vs. DFT pilots).

enum class DftPairMode { AllPairs, Adjacent };

struct CrossCorrRow {
  int tau_p = 0;
  double random_mean = 0.0;  // Monte-Carlo mean |x_v mf_u^H|^2
  double dft_mean = 0.0;     // closed form
};

struct CrossCorrTable {
  int delay = 0;
  DftPairMode mode = DftPairMode::Adjacent;
  std::vector<CrossCorrRow> rows;
  /// First swept tau_p at which the sign of (dft - random) differs from its
  /// sign at the first tau_p; empty when the curves never cross.
  std::optional<int> crossover_tau_p;
};

CrossCorrTable crosscorr_comparison(std::span<const int> tau_ps, int delay, Rng& rng, int trials,
                                    DftPairMode mode = DftPairMode::Adjacent, int phase_levels = 8);

// ---------------------------------------------------------------------------
// NMSE aggregation.

inline constexpr double kDbFloorLinear = 1e-15;

/// 10 log10(max(x, 1e-15)).
double to_db(double linear) noexcept;

struct NmseSummary {
  std::size_t count = 0;
  double mean_linear = 0.0;
  double mean_db = 0.0;  // dB of the linear mean
  double p10_db = 0.0;   // percentiles of per-link dB values
  double p90_db = 0.0;
};

/// Throws std::invalid_argument on empty input.
NmseSummary nmse_aggregate(std::span<const double> nmse);

/// Linear-interpolated percentile (q in [0, 100]) of unsorted values.
double percentile(std::vector<double> values, double q);

// ---------------------------------------------------------------------------
// Downlink conjugate beamforming, channel-hardening bound.

/// Estimation statistics of one served link (r, u), as produced by the
/// estimator for the LMMSE gain actually applied.
struct LinkRateStats {
  double gamma = 0.0;                       // E|h_hat|^2 per antenna
  std::complex<double> lmmse_gain{};        // h_hat = gain * y_mf
  std::vector<std::complex<double>> corr;   // c_{u,k,r} = x_{k,r} mf_{u,r}^H, every UE k
};

struct RateReport {
  std::vector<double> sinr;                 // per UE, 0 when unserved
  std::vector<double> spectral_efficiency;  // net, bits/s/Hz
  double overhead = 1.0;
  double mean_served = 0.0;                 // mean over UEs with a serving AP
};

/// (tau_c - tau_p - tau_ex) / tau_c clipped to [0, 1].
double overhead_factor(int tau_c, int tau_p, int tau_ex) noexcept;

/// SINR_k = (sum_{r in R_k} sqrt(p eta_rk) M gamma_rk)^2 /
///          ( p sum_r sum_{u in U_r} eta_ru M gamma_ru beta_rk
///          + p sum_{u != k} | sum_{r in R_u} sqrt(eta_ru) M conj(g_ru c_{u,k,r}) beta_rk |^2
///          + sigma_dl^2 ),
/// eta_ru = 1 / (|U_r| M gamma_ru) so every served UE gets p_dl / |U_r|.
/// `stats[r][i]` belongs to serving_sets[r][i].
RateReport conjugate_bf_rate(const NetworkRealization& net, const LargeScale& ls,
                             const std::vector<std::vector<LinkRateStats>>& stats, int antennas,
                             double p_dl, double noise_dl, double overhead);

}  // namespace cfest
