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
#include <span>

#include "cfest/airframe.hpp"
#include "cfest/analytics.hpp"
#include "cfest/channel.hpp"
#include "cfest/geometry.hpp"
#include "cfest/pilot.hpp"

namespace cfest {

/// x mf^H.
std::complex<double> correlate(const CRow& x, const CRow& mf);

/// y = Y_r mf^H / sqrt(p_ul). The diagnostic components are filled only by
/// decompose_matched_filter.
struct MfOutput {
  CVector y;
  CVector desired;
  CVector interference;
  CVector noise;
};

/// Throws std::domain_error for p_ul <= 0 and std::invalid_argument when the
/// MF row length differs from the frame width.
MfOutput matched_filter(const CMatrix& frame, const MfSequence& mf, double p_ul);

/// Recomputes the MF output term by term from the realization that produced
/// a frame: desired = h_ru x_u mf^H, interference = sum_{v != u} h_rv x_v mf^H,
/// noise = Z_r mf^H / sqrt(p_ul); y is their sum.
MfOutput decompose_matched_filter(const PilotBook& book, const NetworkRealization& net,
                                  const ChannelMatrixSet& chan, Regime regime, int r, int u,
                                  const MfSequence& mf, const UplinkData& data,
                                  const CMatrix& noise, double p_ul);

/// Read-only view of everything the closed forms depend on.
struct LinkModel {
  const PilotBook& book;
  const NetworkRealization& net;
  const LargeScale& gains;
  Regime regime;
  int antennas;
  double noise_power;
};

/// E[h y^H] and E[y y^H] for one (AP, UE) link, both M x M.
struct CovariancePair {
  CMatrix cross;
  CMatrix signal;
};

/// Deterministic MF correlation of UE u's own pilot, tau_p e^{j theta}.
std::complex<double> desired_correlation(const PilotBook& book, const NetworkRealization& net,
                                         int r, int u);

/// Per-antenna expected powers of the MF terms.
///  random:   gain' * overlap_time
///  DFT:      gain' * dft_interference_factor
///  extended: UEs covering the MF window add tau_p^2 gain' if co-pilot, else
///            nothing; every other UE adds gain' |x_v mf^H|^2 (plus its data
///            samples inside the window under UPNG)
/// noise = sigma^2 tau_p / p_ul.
PowerBreakdown closed_form_breakdown(const LinkModel& model, int r, int u, double p_ul);

/// cross = conj(c_uu) beta psi I, signal = breakdown.total() I.
CovariancePair closed_form_covariances(const LinkModel& model, int r, int u, double p_ul);

struct ChannelEstimate {
  CVector h_hat;
  CVector h_true;
  double nmse = 0.0;  // |h - h_hat|^2 / |h|^2
};

/// h_hat = cross * signal^{-1} y via a Cholesky solve. Throws std::domain_error
/// when `signal` is not positive definite.
ChannelEstimate lmmse_estimate(const MfOutput& mf, const CovariancePair& cov, const CVector& h_true);

/// Monte-Carlo estimate of E[h y^H] and E[y y^H] with large-scale gains held
/// fixed: every trial redraws fading, noise, UPNG data and (random scheme)
/// pilot phases, then runs the full frame + MF path.
CovariancePair empirical_covariance_oracle(const LinkModel& model, int r, int u, double p_ul,
                                           int trials, Rng& rng);

}  // namespace cfest
