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
#include <stdexcept>

#include <Eigen/LU>

#include "cfest/estimator.hpp"
#include "doctest.h"
#include "support/toy_network.hpp"

using namespace cfest;

namespace {

UplinkData no_data(int ues) {
  UplinkData d;
  d.symbols.assign(static_cast<std::size_t>(ues), CRow());
  return d;
}

PilotBook book_with(PilotScheme scheme, int tau_p, int tau_ex, std::vector<int> assignment) {
  Rng rng{99};
  PilotOptions opts;
  opts.explicit_assignment = std::move(assignment);
  const int n = static_cast<int>(opts.explicit_assignment.size());
  return make_pilot_book(scheme, tau_p, tau_ex, n, rng, opts);
}

/// 1 - |c|^2 g / S: expected per-antenna NMSE of the scalar LMMSE gain.
double expected_nmse(const LinkModel& model, int r, int u, double p) {
  const PowerBreakdown pb = closed_form_breakdown(model, r, u, p);
  return 1.0 - pb.desired / pb.total();
}

}  // namespace

TEST_SUITE("estimator") {

TEST_CASE("matched filter of a clean synchronous frame returns h tau_p") {
  Rng rng{1};
  const auto net = testing::line_network({0, 0}, 2);
  const PilotBook book = book_with(PilotScheme::Dft, 16, 0, {3, 7});
  const ChannelMatrixSet chan = draw_channels(testing::single_ap_gains({1.0, 1.0}), 4, 0.0, rng);
  const std::vector<CMatrix> noise{CMatrix::Zero(4, 16)};
  const double p = 0.2;

  const ReceivedFrame one =
      assemble_frame(book, net, chan, Regime::Upg, p, no_data(2), noise);
  const MfSequence mf = make_mf_sequence(book, net, 0, 0);
  const MfOutput out = matched_filter(one.y[0], mf, p);
  CHECK((out.y - chan.at(0, 0) * 16.0).norm() < 1e-10);

  // The second UE is orthogonal: its contribution vanishes exactly.
  const MfOutput parts =
      decompose_matched_filter(book, net, chan, Regime::Upg, 0, 0, mf, no_data(2), noise[0], p);
  CHECK(parts.interference.norm() < 1e-12);

  CHECK_THROWS_AS(matched_filter(one.y[0], mf, 0.0), std::domain_error);
  MfSequence wrong = mf;
  wrong.row.conservativeResize(5);
  CHECK_THROWS_AS(matched_filter(one.y[0], wrong, p), std::invalid_argument);
}

TEST_CASE("MF decomposition reconstructs the frame output") {
  Rng rng{2};
  const auto net = testing::line_network({1, 3, 4, 8}, 2);
  for (PilotScheme scheme : {PilotScheme::Random, PilotScheme::Dft, PilotScheme::ExtendedDft}) {
    const int ex = scheme == PilotScheme::ExtendedDft ? delay_spread_min_extension(net) : 0;
    const PilotBook book = make_pilot_book(scheme, 8, ex, 4, rng);
    const ChannelMatrixSet chan =
        draw_channels(testing::single_ap_gains({1.0, 0.7, 0.4, 0.2}), 3, 1e-3, rng);
    const UplinkData data = draw_uplink_data(4, uplink_data_length(net), rng);
    const std::vector<CMatrix> noise{draw_noise(3, book.length() + net.t_max[0], 1e-3, rng)};
    const ReceivedFrame frame = assemble_frame(book, net, chan, Regime::Upng, 0.3, data, noise);
    for (int u : net.serving_sets[0]) {
      const MfSequence mf = make_mf_sequence(book, net, 0, u);
      const MfOutput direct = matched_filter(frame.y[0], mf, 0.3);
      const MfOutput parts =
          decompose_matched_filter(book, net, chan, Regime::Upng, 0, u, mf, data, noise[0], 0.3);
      CHECK((direct.y - parts.y).norm() < 1e-9 * direct.y.norm());
      CHECK((parts.desired + parts.interference + parts.noise - parts.y).norm() == 0.0);
    }
  }
}

TEST_CASE("closed-form interference terms") {
  const double p = 1.0;
  SUBCASE("random, UPG, |dt| = 4") {
    const auto net = testing::line_network({3, 7}, 1);
    const PilotBook book = book_with(PilotScheme::Random, 32, 0, {0, 1});
    const LargeScale ls = testing::single_ap_gains({1.0, 0.25});
    const LinkModel model{book, net, ls, Regime::Upg, 8, 0.0};
    const PowerBreakdown pb = closed_form_breakdown(model, 0, 0, p);
    REQUIRE(pb.interference.size() == 1);
    CHECK(pb.interference[0].power == doctest::Approx(0.25 * 28));
    CHECK(pb.desired == doctest::Approx(32.0 * 32.0));
  }
  SUBCASE("DFT, UPNG, interferer 5 samples earlier") {
    const auto net = testing::line_network({2, 7}, 2);
    const PilotBook book = book_with(PilotScheme::Dft, 32, 0, {0, 1});
    const LargeScale ls = testing::single_ap_gains({0.5, 1.0});
    const LinkModel upg{book, net, ls, Regime::Upg, 8, 0.0};
    const LinkModel upng{book, net, ls, Regime::Upng, 8, 0.0};
    const double a = closed_form_breakdown(upg, 0, 1, p).interference_total();
    const double b = closed_form_breakdown(upng, 0, 1, p).interference_total();
    CHECK(b - a == doctest::Approx(0.5 * 5));
    CHECK(a == doctest::Approx(0.5 * dft_cross_power_factor(1, 0, 32, 27)));
  }
  SUBCASE("synchronous DFT: only co-pilots interfere") {
    const auto net = testing::line_network({0, 0, 0, 0}, 4);
    const PilotBook book = book_with(PilotScheme::Dft, 4, 0, {0, 1, 2, 0});
    const LargeScale ls = testing::single_ap_gains({1.0, 1.0, 1.0, 0.1});
    const LinkModel model{book, net, ls, Regime::Upng, 8, 1e-3};
    const PowerBreakdown pb = closed_form_breakdown(model, 0, 0, p);
    REQUIRE(pb.interference.size() == 1);
    CHECK(pb.interference[0].ue == 3);
    CHECK(pb.interference[0].power == doctest::Approx(0.1 * 16));
    CHECK(closed_form_breakdown(model, 0, 1, p).interference_total() == 0.0);
  }
}

TEST_CASE("LMMSE edge cases") {
  Rng rng{3};
  const CVector h = sample_fading(4, rng);
  MfOutput mf;
  mf.y = h * 16.0;
  CovariancePair cov{CMatrix::Identity(4, 4) * (16.0 * 1e-9), CMatrix::Identity(4, 4) * (256.0 * 1e-9)};
  const ChannelEstimate perfect = lmmse_estimate(mf, cov, h);
  CHECK((perfect.h_hat - h).norm() < 1e-12);
  CHECK(perfect.nmse < 1e-24);

  CovariancePair blind{CMatrix::Zero(4, 4), CMatrix::Identity(4, 4)};
  CHECK(lmmse_estimate(mf, blind, h).h_hat.isZero());
  CHECK(lmmse_estimate(mf, blind, h).nmse == doctest::Approx(1.0));

  CovariancePair singular{CMatrix::Identity(4, 4), CMatrix::Zero(4, 4)};
  CHECK_THROWS_AS(lmmse_estimate(mf, singular, h), std::domain_error);

  // General Hermitian covariances go through the same solve.
  CMatrix a = CMatrix::Random(4, 4);
  const CMatrix spd = a * a.adjoint() + CMatrix::Identity(4, 4);
  CovariancePair general{CMatrix::Identity(4, 4), spd};
  const CVector expected = spd.inverse() * mf.y;
  CHECK((lmmse_estimate(mf, general, h).h_hat - expected).norm() < 1e-9 * expected.norm());
}

TEST_CASE("LMMSE gain minimizes the Monte-Carlo MSE over a +-20% scan") {
  Rng rng{4};
  const auto net = testing::line_network({2, 5, 6}, 2);
  const PilotBook book = book_with(PilotScheme::Dft, 8, 0, {0, 1, 2});
  const LargeScale ls = testing::single_ap_gains({1.0, 0.8, 0.5});
  const double sigma2 = 0.05;
  const double p = 1.0;
  const LinkModel model{book, net, ls, Regime::Upng, 2, sigma2};
  const CovariancePair cov = closed_form_covariances(model, 0, 0, p);
  const std::complex<double> g = cov.cross(0, 0) / cov.signal(0, 0);

  std::vector<double> scales;
  for (int i = -4; i <= 4; ++i) scales.push_back(1.0 + 0.05 * i);
  std::vector<double> mse(scales.size(), 0.0);
  const MfSequence mf = make_mf_sequence(book, net, 0, 0);
  for (int t = 0; t < 20000; ++t) {
    const ChannelMatrixSet chan = draw_channels(ls, 2, sigma2, rng);
    const ReceivedFrame f = synthesize_frame(book, net, chan, Regime::Upng, p, rng);
    const CVector y = matched_filter(f.y[0], mf, p).y;
    for (std::size_t i = 0; i < scales.size(); ++i)
      mse[i] += (chan.at(0, 0) - scales[i] * g * y).squaredNorm();
  }
  const auto best = std::min_element(mse.begin(), mse.end()) - mse.begin();
  CHECK(best == 4);
}

TEST_CASE("expected NMSE is invariant to a common scaling of gains and noise") {
  const auto net = testing::line_network({1, 4, 6, 9}, 2);
  const PilotBook book = book_with(PilotScheme::Random, 16, 0, {0, 1, 2, 3});
  const LargeScale a = testing::single_ap_gains({1e-9, 4e-10, 2e-10, 1e-10});
  const LargeScale b = testing::single_ap_gains({1e-7, 4e-8, 2e-8, 1e-8});
  const LinkModel ma{book, net, a, Regime::Upng, 8, 1e-14};
  const LinkModel mb{book, net, b, Regime::Upng, 8, 1e-12};
  CHECK(expected_nmse(ma, 0, 0, 0.01) == doctest::Approx(expected_nmse(mb, 0, 0, 0.01)).epsilon(1e-12));
}

TEST_CASE("DFT MF interference at half overlap matches the power factor") {
  Rng rng{5};
  const auto net = testing::line_network({0, 16}, 1);
  const PilotBook book = book_with(PilotScheme::Dft, 32, 0, {1, 0});
  const LargeScale ls = testing::single_ap_gains({1.0, 1.0});
  const int m = 8;
  const MfSequence mf = make_mf_sequence(book, net, 0, 0);
  double acc = 0.0;
  const int trials = 10000;
  for (int t = 0; t < trials; ++t) {
    const ChannelMatrixSet chan = draw_channels(ls, m, 0.0, rng);
    const std::vector<CMatrix> noise{CMatrix::Zero(m, 32 + 16)};
    const MfOutput out = decompose_matched_filter(book, net, chan, Regime::Upg, 0, 0, mf,
                                                  no_data(2), noise[0], 1.0);
    acc += out.interference.squaredNorm();
  }
  CHECK(acc / trials == doctest::Approx(104.1 * m).epsilon(0.03));
}

TEST_CASE("empirical covariance in the noise-only limit") {
  Rng rng{6};
  const auto net = testing::line_network({1, 2}, 2);
  const PilotBook book = book_with(PilotScheme::Dft, 8, 0, {0, 1});
  const LargeScale ls = testing::single_ap_gains({0.0, 0.0});
  const LinkModel model{book, net, ls, Regime::Upg, 4, 1e-2};
  const CovariancePair emp = empirical_covariance_oracle(model, 0, 0, 0.5, 20000, rng);
  const double expected = 1e-2 * 8 / 0.5;
  for (int i = 0; i < 4; ++i) CHECK(emp.signal(i, i).real() == doctest::Approx(expected).epsilon(0.03));
  CHECK(emp.cross.norm() == doctest::Approx(0.0));
}

}  // TEST_SUITE
