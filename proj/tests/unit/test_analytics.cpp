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
#include <numeric>

#include "cfest/analytics.hpp"
#include "cfest/estimator.hpp"
#include "doctest.h"
#include "support/toy_network.hpp"

using namespace cfest;

namespace {

double expected_nmse(const LinkModel& model, int r, int u, double p) {
  const PowerBreakdown pb = closed_form_breakdown(model, r, u, p);
  return 1.0 - pb.desired / pb.total();
}

}  // namespace

TEST_SUITE("analytics") {

TEST_CASE("random-sequence interference and overlap rules") {
  CHECK(random_seq_interference_power(1e-8, 8, 0) == 0.0);
  CHECK(random_seq_interference_power(1e-8, 8, 28) == doctest::Approx(2.24e-6));
  CHECK(overlap_time(Regime::Upg, 5, 5, 32) == 32);
  CHECK(overlap_time(Regime::Upg, 3, 7, 32) == 28);
  CHECK(overlap_time(Regime::Upg, 7, 3, 32) == 28);
  CHECK(overlap_time(Regime::Upng, 7, 3, 32) == 32);
  CHECK(overlap_time(Regime::Upng, 3, 7, 32) == 28);
  CHECK(overlap_time(Regime::Upg, 0, 40, 32) == 0);
}

TEST_CASE("DFT interference power") {
  CHECK(dft_interference_power(Regime::Upg, 3, 1, 1e-9, 8, 32, 4, 4) == doctest::Approx(0.0));
  const double upg = dft_interference_power(Regime::Upg, 1, 0, 2.0, 8, 32, 12, 7);
  const double upng = dft_interference_power(Regime::Upng, 1, 0, 2.0, 8, 32, 12, 7);
  CHECK(upng - upg == doctest::Approx(5 * 8 * 2.0));
  CHECK(upg == doctest::Approx(8 * 2.0 * dft_cross_power_factor(1, 0, 32, 27)));
  // Co-pilot: overlap squared.
  CHECK(dft_interference_factor(Regime::Upg, 2, 2, 16, 5, 2) == doctest::Approx(13.0 * 13.0));
  // Later interferer under UPNG adds nothing.
  CHECK(dft_interference_factor(Regime::Upng, 1, 0, 32, 3, 9) ==
        doctest::Approx(dft_interference_factor(Regime::Upg, 1, 0, 32, 3, 9)));
}

TEST_CASE("power terms scale with the pilot length as predicted") {
  // desired ~ tau_p^2, random interference ~ overlap, noise ~ tau_p
  const auto net = testing::line_network({2, 6}, 1);
  const LargeScale ls = testing::single_ap_gains({1.0, 0.5});
  Rng rng{1};
  std::vector<PowerBreakdown> pbs;
  const std::vector<int> taus{8, 16, 32, 64};
  for (int tau : taus) {
    const PilotBook book = make_pilot_book(PilotScheme::Random, tau, 0, 2, rng);
    const LinkModel model{book, net, ls, Regime::Upg, 8, 1e-3};
    pbs.push_back(closed_form_breakdown(model, 0, 0, 1.0));
  }
  for (std::size_t i = 1; i < taus.size(); ++i) {
    const double k = static_cast<double>(taus[i]) / taus[0];
    CHECK(pbs[i].desired / pbs[0].desired == doctest::Approx(k * k));
    CHECK(pbs[i].noise / pbs[0].noise == doctest::Approx(k));
    CHECK(pbs[i].interference_total() / pbs[0].interference_total() ==
          doctest::Approx((taus[i] - 4.0) / (taus[0] - 4.0)));
  }
}

TEST_CASE("NMSE aggregation") {
  const std::vector<double> perfect{0.0, 0.0};
  CHECK(nmse_aggregate(perfect).mean_db == doctest::Approx(-150.0));
  const std::vector<double> half{0.5};
  CHECK(nmse_aggregate(half).mean_db == doctest::Approx(-3.0103).epsilon(1e-4));
  const std::vector<double> two{0.1, 0.001};
  const NmseSummary s = nmse_aggregate(two);
  CHECK(s.mean_linear == doctest::Approx(0.0505));
  CHECK(s.mean_db == doctest::Approx(-12.967).epsilon(1e-4));
  CHECK(s.p10_db == doctest::Approx(-30.0 + 0.1 * 20.0));
  CHECK(s.p90_db == doctest::Approx(-30.0 + 0.9 * 20.0));
  CHECK_THROWS(nmse_aggregate(std::vector<double>{}));
  CHECK(percentile({5.0, 1.0, 3.0}, 50.0) == doctest::Approx(3.0));
  CHECK(to_db(0.0) == doctest::Approx(-150.0));
}

TEST_CASE("cross-correlation table") {
  Rng rng{2};
  const std::vector<int> taus{8, 16, 24, 32, 40, 48, 56, 64};
  const CrossCorrTable t = crosscorr_comparison(taus, 6, rng, 4000, DftPairMode::Adjacent);
  REQUIRE(t.rows.size() == taus.size());
  for (const auto& row : t.rows) {
    CHECK(row.random_mean == doctest::Approx(row.tau_p - 6.0).epsilon(0.06));
    CHECK(row.dft_mean == doctest::Approx(dft_cross_power_factor(1, 0, row.tau_p, row.tau_p - 6)));
  }
  REQUIRE(t.crossover_tau_p.has_value());
  const CrossCorrTable all = crosscorr_comparison(taus, 6, rng, 10, DftPairMode::AllPairs);
  for (const auto& row : all.rows) {
    double sum = 0.0;
    for (int k = 1; k < row.tau_p; ++k) sum += dft_cross_power_factor(k, 0, row.tau_p, row.tau_p - 6);
    CHECK(row.dft_mean == doctest::Approx(sum / (row.tau_p - 1)));
  }
}

TEST_CASE("expected NMSE is non-increasing in power") {
  SimArea area;
  area.side_m = 316.23;
  area.ap_count = 10;
  area.ue_mean = 14;
  Rng rng{3};
  const auto net = sample_topology(area, 4, rng);
  const LargeScale ls = sample_large_scale(net, 4.0, rng);
  for (PilotScheme scheme : {PilotScheme::Random, PilotScheme::Dft, PilotScheme::ExtendedDft}) {
    const int ex = scheme == PilotScheme::ExtendedDft ? delay_spread_min_extension(net) : 0;
    const PilotBook book = make_pilot_book(scheme, 32, ex, net.ue_count(), rng);
    for (Regime regime : {Regime::Upg, Regime::Upng}) {
      const LinkModel model{book, net, ls, regime, 8, 1e-14};
      for (int r = 0; r < net.ap_count(); ++r)
        for (int u : net.serving_sets[r]) {
          double prev = 1.0;
          for (int dbm = -36; dbm <= 20; dbm += 8) {
            const double nmse = expected_nmse(model, r, u, std::pow(10.0, dbm / 10.0) / 1000.0);
            CHECK(nmse <= prev + 1e-15);
            prev = nmse;
          }
        }
    }
  }
}

TEST_CASE("extended-DFT NMSE versus tau_ex") {
  // Per realization the NMSE is flat once tau_ex reaches the minimum
  // extension; below it, a partially covered served UE can interfere more as
  // its overlap grows, so only the average over realizations is monotone.
  SimArea area;
  area.side_m = 316.23;
  area.ap_count = 10;
  area.ue_mean = 14;
  const int max_ex = 6;
  std::vector<double> mean_by_ex(max_ex + 1, 0.0);
  const int realizations = 60;
  for (std::uint64_t seed = 0; seed < realizations; ++seed) {
    Rng rng{seed};
    const auto net = sample_topology(area, 4, rng);
    const LargeScale ls = sample_large_scale(net, 4.0, rng);
    const int auto_ex = delay_spread_min_extension(net);
    auto mean_nmse = [&](int ex) {
      const PilotBook book = make_pilot_book(PilotScheme::ExtendedDft, 32, ex, net.ue_count(), rng);
      const LinkModel model{book, net, ls, Regime::Upg, 8, 1e-14};
      double sum = 0.0;
      int n = 0;
      for (int r = 0; r < net.ap_count(); ++r)
        for (int u : net.serving_sets[r]) {
          sum += expected_nmse(model, r, u, 0.1);
          ++n;
        }
      return sum / n;
    };
    for (int ex = 0; ex <= max_ex; ++ex) mean_by_ex[ex] += mean_nmse(ex) / realizations;
    const double at_min = mean_nmse(auto_ex);
    for (int extra = 1; extra <= 3; ++extra)
      CHECK(mean_nmse(auto_ex + extra) == doctest::Approx(at_min).epsilon(1e-12));
  }
  for (int ex = 1; ex <= max_ex; ++ex) CHECK(mean_by_ex[ex] <= mean_by_ex[ex - 1]);
}

TEST_CASE("overhead factor") {
  CHECK(overhead_factor(200, 32, 0) == doctest::Approx(0.84));
  CHECK(overhead_factor(200, 32, 8) == doctest::Approx(0.8));
  CHECK(overhead_factor(20, 32, 0) == 0.0);
  CHECK(overhead_factor(200, 0, 0) == 1.0);
}

TEST_CASE("conjugate beamforming rate: golden single-link value") {
  // One AP, one UE, perfect estimate (gamma = beta): eta = 1/(M beta) and
  // SINR = p M beta / (p beta + sigma^2).
  const auto net = testing::line_network({0}, 1);
  const double beta = 2e-12;
  const LargeScale ls = testing::single_ap_gains({beta});
  const int m = 8;
  const double p = 0.1;
  const double noise = 1e-13;
  std::vector<std::vector<LinkRateStats>> stats{{LinkRateStats{beta, 1.0, {32.0}}}};
  const RateReport rep = conjugate_bf_rate(net, ls, stats, m, p, noise, 0.84);
  const double sinr = p * m * beta / (p * beta + noise);
  CHECK(rep.sinr[0] == doctest::Approx(sinr).epsilon(1e-12));
  CHECK(rep.spectral_efficiency[0] == doctest::Approx(0.84 * std::log2(1 + sinr)).epsilon(1e-12));
  CHECK(rep.mean_served == doctest::Approx(rep.spectral_efficiency[0]));
}

TEST_CASE("conjugate beamforming rate: hardening bound vs ergodic Monte-Carlo at low SNR") {
  const auto net = testing::line_network({0}, 1);
  const double beta = 1e-12;
  const int m = 32;
  const double noise = 1e-13;
  const double p = 1e-3;  // p beta / sigma^2 = 0.01
  const LargeScale ls = testing::single_ap_gains({beta});
  std::vector<std::vector<LinkRateStats>> stats{{LinkRateStats{beta, 1.0, {1.0}}}};
  const double bound = conjugate_bf_rate(net, ls, stats, m, p, noise, 1.0).spectral_efficiency[0];

  // Perfect CSI conjugate beamforming: y = sqrt(p eta) |h|^2 s + n.
  Rng rng{4};
  const double eta = 1.0 / (m * beta);
  double acc = 0.0;
  const int trials = 20000;
  for (int t = 0; t < trials; ++t) {
    const double h2 = beta * sample_fading(m, rng).squaredNorm();
    acc += std::log2(1.0 + p * eta * h2 * h2 / noise);
  }
  CHECK(bound == doctest::Approx(acc / trials).epsilon(0.10));
}

TEST_CASE("better estimates never lower the rate") {
  Rng rng{5};
  SimArea area;
  area.side_m = 200;
  area.ap_count = 3;
  area.ue_mean = 5;
  for (int rep = 0; rep < 20; ++rep) {
    auto net = sample_topology(area, 2, rng);
    const LargeScale ls = sample_large_scale(net, 4.0, rng);
    std::vector<std::vector<LinkRateStats>> perfect(net.ap_count());
    std::vector<std::vector<LinkRateStats>> corrupted(net.ap_count());
    for (int r = 0; r < net.ap_count(); ++r)
      for (int u : net.serving_sets[r]) {
        const double b = ls.gain(r, u);
        LinkRateStats good{b, 1.0 / 32.0, std::vector<std::complex<double>>(net.ue_count(), 0.0)};
        good.corr[u] = 32.0;
        LinkRateStats bad = good;
        bad.gamma = 0.6 * b;
        for (int k = 0; k < net.ue_count(); ++k)
          if (k != u) bad.corr[k] = std::complex<double>(3.0, -2.0);
        perfect[r].push_back(good);
        corrupted[r].push_back(bad);
      }
    const RateReport a = conjugate_bf_rate(net, ls, perfect, 8, 0.1, 1e-14, 0.8);
    const RateReport b = conjugate_bf_rate(net, ls, corrupted, 8, 0.1, 1e-14, 0.8);
    for (int u = 0; u < net.ue_count(); ++u)
      CHECK(a.spectral_efficiency[u] >= b.spectral_efficiency[u] - 1e-12);
  }
}

}  // TEST_SUITE
