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


#include "cfest/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Cholesky>

namespace cfest {

namespace {

/// UE v's augmented row at AP r with the data tail left empty.
CRow pilot_only_row(const PilotBook& book, const NetworkRealization& net, int r, int v) {
  CRow row = CRow::Zero(book.length() + net.t_max[r]);
  row.segment(net.delay(r, v), book.length()) = book.sequences[static_cast<std::size_t>(v)];
  return row;
}

/// UPNG data samples of UE v that fall inside [start, start + tau_p).
int data_samples_in_window(const PilotBook& book, const NetworkRealization& net, int r, int v,
                           int start) {
  const int data_begin = net.delay(r, v) + book.length();
  const int data_end = book.length() + net.t_max[r];
  const int lo = std::max(data_begin, start);
  const int hi = std::min(data_end, start + book.tau_p);
  return std::max(0, hi - lo);
}

}  // namespace

std::complex<double> correlate(const CRow& x, const CRow& mf) {
  if (x.size() != mf.size()) throw std::invalid_argument("correlate: length mismatch");
  return (x.array() * mf.array().conjugate()).sum();
}

MfOutput matched_filter(const CMatrix& frame, const MfSequence& mf, double p_ul) {
  if (!(p_ul > 0.0)) throw std::domain_error("matched_filter: p_ul must be positive");
  if (frame.cols() != mf.row.size())
    throw std::invalid_argument("matched_filter: MF length differs from frame width");
  MfOutput out;
  out.y = (frame * mf.row.adjoint()) / std::sqrt(p_ul);
  return out;
}

MfOutput decompose_matched_filter(const PilotBook& book, const NetworkRealization& net,
                                  const ChannelMatrixSet& chan, Regime regime, int r, int u,
                                  const MfSequence& mf, const UplinkData& data,
                                  const CMatrix& noise, double p_ul) {
  if (!(p_ul > 0.0)) throw std::domain_error("decompose_matched_filter: p_ul must be positive");
  MfOutput out;
  const int m = chan.antennas();
  out.desired = CVector::Zero(m);
  out.interference = CVector::Zero(m);
  for (int v = 0; v < net.ue_count(); ++v) {
    const CRow x = build_augmented_sequence(book, net, regime, r, v, data);
    const CVector term = chan.at(r, v) * correlate(x, mf.row);
    if (v == u) {
      out.desired = term;
    } else {
      out.interference += term;
    }
  }
  out.noise = (noise * mf.row.adjoint()) / std::sqrt(p_ul);
  out.y = out.desired + out.interference + out.noise;
  return out;
}

std::complex<double> desired_correlation(const PilotBook& book, const NetworkRealization& net,
                                         int r, int u) {
  const MfSequence mf = make_mf_sequence(book, net, r, u);
  return correlate(pilot_only_row(book, net, r, u), mf.row);
}

PowerBreakdown closed_form_breakdown(const LinkModel& model, int r, int u, double p_ul) {
  if (!(p_ul > 0.0)) throw std::domain_error("closed_form_breakdown: p_ul must be positive");
  const PilotBook& book = model.book;
  const NetworkRealization& net = model.net;
  const int tau_p = book.tau_p;
  const int t_u = net.delay(r, u);

  const MfSequence mf = make_mf_sequence(book, net, r, u);
  const std::complex<double> c_uu = correlate(pilot_only_row(book, net, r, u), mf.row);

  PowerBreakdown out;
  out.desired = std::norm(c_uu) * model.gains.gain(r, u);
  out.noise = model.noise_power * static_cast<double>(tau_p) / p_ul;

  if (book.scheme == PilotScheme::ExtendedDft && model.regime == Regime::Upng) {
    // A served UE outside its own extension range sees its data tail in the window.
    const int own = data_samples_in_window(book, net, r, u, mf.window_start);
    if (own > 0) out.interference.push_back({u, model.gains.gain(r, u) * own});
  }

  for (int v = 0; v < net.ue_count(); ++v) {
    if (v == u) continue;
    const double gain = model.gains.gain(r, v);
    const int t_v = net.delay(r, v);
    double factor = 0.0;
    switch (book.scheme) {
      case PilotScheme::Random:
        factor = overlap_time(model.regime, t_u, t_v, tau_p);
        break;
      case PilotScheme::Dft:
        factor = dft_interference_factor(model.regime, book.assignment[u], book.assignment[v], tau_p,
                                         t_u, t_v);
        break;
      case PilotScheme::ExtendedDft:
        if (covers_window(net, r, v, book.tau_ex)) {
          factor = book.co_pilot(u, v) ? static_cast<double>(tau_p) * tau_p : 0.0;
        } else {
          factor = std::norm(correlate(pilot_only_row(book, net, r, v), mf.row));
          if (model.regime == Regime::Upng)
            factor += data_samples_in_window(book, net, r, v, mf.window_start);
        }
        break;
    }
    if (factor > 0.0) out.interference.push_back({v, gain * factor});
  }
  return out;
}

CovariancePair closed_form_covariances(const LinkModel& model, int r, int u, double p_ul) {
  const PowerBreakdown pb = closed_form_breakdown(model, r, u, p_ul);
  const std::complex<double> c_uu = desired_correlation(model.book, model.net, r, u);
  const int m = model.antennas;
  CovariancePair cov;
  cov.cross = CMatrix::Identity(m, m) * (std::conj(c_uu) * model.gains.gain(r, u));
  cov.signal = CMatrix::Identity(m, m) * pb.total();
  return cov;
}

ChannelEstimate lmmse_estimate(const MfOutput& mf, const CovariancePair& cov, const CVector& h_true) {
  const Eigen::LLT<CMatrix> llt(cov.signal);
  if (llt.info() != Eigen::Success)
    throw std::domain_error("lmmse_estimate: signal covariance is not positive definite");
  ChannelEstimate est;
  est.h_hat = cov.cross * llt.solve(mf.y);
  est.h_true = h_true;
  const double energy = h_true.squaredNorm();
  est.nmse = energy > 0.0 ? (h_true - est.h_hat).squaredNorm() / energy : 0.0;
  return est;
}

CovariancePair empirical_covariance_oracle(const LinkModel& model, int r, int u, double p_ul,
                                           int trials, Rng& rng) {
  if (trials < 1) throw std::invalid_argument("empirical_covariance_oracle: trials must be >= 1");
  const NetworkRealization& net = model.net;
  const int m = model.antennas;
  const int data_len = uplink_data_length(net);

  CMatrix acc_signal = CMatrix::Zero(m, m);
  CMatrix acc_cross = CMatrix::Zero(m, m);
  ChannelMatrixSet chan(net.ap_count(), net.ue_count(), m, model.noise_power);
  PilotBook book = model.book;
  PilotOptions redraw;
  redraw.phase_levels = book.phase_levels;
  redraw.explicit_assignment = book.assignment;

  for (int t = 0; t < trials; ++t) {
    if (book.scheme == PilotScheme::Random) {
      book = make_pilot_book(PilotScheme::Random, book.tau_p, 0, net.ue_count(), rng, redraw);
    }
    for (int v = 0; v < net.ue_count(); ++v)
      chan.at(r, v) = std::sqrt(model.gains.gain(r, v)) * sample_fading(m, rng);
    UplinkData data;
    if (model.regime == Regime::Upng) {
      data = draw_uplink_data(net.ue_count(), data_len, rng);
    } else {
      data.symbols.assign(static_cast<std::size_t>(net.ue_count()), CRow());
    }
    const MfSequence mf = make_mf_sequence(book, net, r, u);
    CMatrix y = std::sqrt(p_ul) * synthesize_signal(book, net, chan, model.regime, r, data);
    y += draw_noise(m, static_cast<int>(y.cols()), model.noise_power, rng);
    const CVector out = matched_filter(y, mf, p_ul).y;
    acc_signal += out * out.adjoint();
    acc_cross += chan.at(r, u) * out.adjoint();
  }
  CovariancePair cov;
  cov.signal = acc_signal / static_cast<double>(trials);
  cov.cross = acc_cross / static_cast<double>(trials);
  return cov;
}

}  // namespace cfest
