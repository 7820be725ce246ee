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


#include <benchmark/benchmark.h>

#include "cfest/airframe.hpp"
#include "cfest/channel.hpp"
#include "cfest/config.hpp"
#include "cfest/estimator.hpp"
#include "cfest/geometry.hpp"
#include "cfest/harness.hpp"
#include "cfest/pilot.hpp"
#include "cfest/rng.hpp"

namespace {

using namespace cfest;

struct Scene {
  NetworkRealization net;
  LargeScale ls;
  ChannelMatrixSet chan;
  PilotBook book;
};

Scene make_scene(PilotScheme scheme, int tau_ex) {
  SimArea area;  // 70 APs, full-scale UE density
  Rng rng{7};
  Scene s;
  s.net = sample_topology(area, 4, rng);
  s.ls = sample_large_scale(s.net, 4.0, rng);
  s.chan = draw_channels(s.ls, 8, 1e-14, rng);
  s.book = make_pilot_book(scheme, 32, tau_ex, s.net.ue_count(), rng);
  return s;
}

void BM_SynthesizeFrame(benchmark::State& state) {
  const Scene s = make_scene(PilotScheme::ExtendedDft, 6);
  Rng rng{11};
  for (auto _ : state) {
    ReceivedFrame f = synthesize_frame(s.book, s.net, s.chan, Regime::Upng, 0.1, rng);
    benchmark::DoNotOptimize(f.y.data());
  }
  state.SetLabel(std::to_string(s.net.ap_count()) + " APs, " + std::to_string(s.net.ue_count()) + " UEs");
}
BENCHMARK(BM_SynthesizeFrame)->Unit(benchmark::kMillisecond);

void BM_MatchedFilterLmmse(benchmark::State& state) {
  const Scene s = make_scene(PilotScheme::ExtendedDft, 6);
  Rng rng{11};
  const ReceivedFrame f = synthesize_frame(s.book, s.net, s.chan, Regime::Upg, 0.1, rng);
  const LinkModel model{s.book, s.net, s.ls, Regime::Upg, 8, 1e-14};
  const int r = 0;
  const int u = s.net.serving_sets[0].front();
  for (auto _ : state) {
    const MfSequence mf = make_mf_sequence(s.book, s.net, r, u);
    const MfOutput out = matched_filter(f.y[r], mf, 0.1);
    const CovariancePair cov = closed_form_covariances(model, r, u, 0.1);
    ChannelEstimate est = lmmse_estimate(out, cov, s.chan.at(r, u));
    benchmark::DoNotOptimize(est.nmse);
  }
}
BENCHMARK(BM_MatchedFilterLmmse)->Unit(benchmark::kMicrosecond);

void BM_ClosedFormBreakdown(benchmark::State& state) {
  const auto scheme = static_cast<PilotScheme>(state.range(0));
  const Scene s = make_scene(scheme, scheme == PilotScheme::ExtendedDft ? 6 : 0);
  const LinkModel model{s.book, s.net, s.ls, Regime::Upng, 8, 1e-14};
  const int u = s.net.serving_sets[0].front();
  for (auto _ : state) {
    PowerBreakdown pb = closed_form_breakdown(model, 0, u, 0.1);
    benchmark::DoNotOptimize(pb.desired);
  }
}
BENCHMARK(BM_ClosedFormBreakdown)
    ->Arg(static_cast<int>(PilotScheme::Random))
    ->Arg(static_cast<int>(PilotScheme::Dft))
    ->Arg(static_cast<int>(PilotScheme::ExtendedDft))
    ->Unit(benchmark::kMicrosecond);

void BM_DeskSweepTrial(benchmark::State& state) {
  ExperimentConfig cfg = figure_preset("fig7", true);
  cfg.trials = 1;
  cfg.threads = 1;
  cfg.sweep_values = {20.0};
  for (auto _ : state) {
    SweepResult res = run_sweep(cfg);
    benchmark::DoNotOptimize(res.rows.data());
  }
}
BENCHMARK(BM_DeskSweepTrial)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
