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


#include "cfest/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "cfest/airframe.hpp"
#include "cfest/channel.hpp"
#include "cfest/errors.hpp"
#include "cfest/estimator.hpp"
#include "cfest/geometry.hpp"
#include "cfest/pilot.hpp"

namespace cfest {

namespace {

struct SweepPoint {
  double value = 0.0;
  int tau_p = 0;
  std::optional<int> tau_ex;
  double p_dbm = 0.0;
};

std::vector<SweepPoint> expand_points(const ExperimentConfig& c) {
  std::vector<SweepPoint> points;
  for (double v : c.sweep_values) {
    SweepPoint p{v, c.tau_p, c.tau_ex, c.p_dbm};
    switch (c.sweep_var) {
      case SweepVar::PowerDbm: p.p_dbm = v; break;
      case SweepVar::TauP: p.tau_p = static_cast<int>(v); break;
      case SweepVar::TauEx: p.tau_ex = static_cast<int>(v); break;
    }
    points.push_back(p);
  }
  return points;
}

std::uint64_t family_id(const VariantSpec& v) {
  if (v.synchronous) return 4;
  switch (v.scheme) {
    case PilotScheme::Random: return 1;
    case PilotScheme::Dft: return 2;
    case PilotScheme::ExtendedDft: return 3;
  }
  return 0;
}

struct TrialChannels {
  NetworkRealization net;
  LargeScale ls;
  ChannelMatrixSet chan;
  NetworkRealization sync_net;
  int auto_ex = 0;
};

TrialChannels make_trial_channels(const ExperimentConfig& c, int trial) {
  const auto t = static_cast<std::uint64_t>(trial);
  TrialChannels tc;
  Rng net_rng = make_stream(c.seed, {t, stream::kNetwork});
  tc.net = sample_topology(c.area, c.cluster_size, net_rng);
  Rng ls_rng = make_stream(c.seed, {t, stream::kLargeScale});
  tc.ls = sample_large_scale(tc.net, c.sigma_sh_db, ls_rng);
  Rng fade_rng = make_stream(c.seed, {t, stream::kFading});
  tc.chan = draw_channels(tc.ls, c.antennas, c.noise_w, fade_rng);
  if (c.link_phase) {
    Rng phase_rng = make_stream(c.seed, {t, stream::kPhase});
    apply_link_phases(tc.chan, phase_rng);
  }
  tc.sync_net = synchronized(tc.net);
  tc.auto_ex = delay_spread_min_extension(tc.net);
  return tc;
}

int applied_tau_ex(const VariantSpec& v, std::optional<int> requested, int auto_ex) {
  if (v.synchronous || v.scheme != PilotScheme::ExtendedDft) return 0;
  return requested ? *requested : auto_ex;
}

/// Pilot book, data and noise stream of one (trial, variant, tau_p, tau_ex).
struct VariantDraws {
  PilotBook book;
  UplinkData data;
  Rng noise_rng;
};

VariantDraws make_variant_draws(const ExperimentConfig& c, int trial, const VariantSpec& variant,
                                const NetworkRealization& net, int tau_p, int tau_ex) {
  const auto t = static_cast<std::uint64_t>(trial);
  const std::uint64_t fam = family_id(variant);
  const PilotScheme scheme = variant.synchronous ? PilotScheme::Dft : variant.scheme;
  PilotOptions opts;
  opts.phase_levels = c.phase_levels;
  opts.assignment = c.assignment;
  opts.ue_positions = net.ue_positions;
  Rng pilot_rng = make_stream(c.seed, {t, stream::kPilot, fam, static_cast<std::uint64_t>(tau_p)});
  VariantDraws d{make_pilot_book(scheme, tau_p, tau_ex, net.ue_count(), pilot_rng, opts), {},
                 make_stream(c.seed, {t, stream::kNoise, fam, static_cast<std::uint64_t>(tau_p),
                                      static_cast<std::uint64_t>(tau_ex)})};
  Rng data_rng = make_stream(c.seed, {t, stream::kData});
  d.data = draw_uplink_data(net.ue_count(), uplink_data_length(net), data_rng);
  return d;
}

/// Raw samples of one (point, variant) cell for one trial.
struct CellSamples {
  std::vector<double> nmse;
  std::vector<double> rate;  // per served UE
  int tau_ex_applied = 0;
};

struct TrialOutput {
  std::uint64_t realization_seed = 0;
  std::vector<std::vector<CellSamples>> cells;  // [point][variant]
  std::vector<LinkDiagnostic> links;
};

/// Matched-filter quantities of one served link that do not depend on p_ul.
struct LinkProfile {
  int r = 0;
  int u = 0;
  CVector h;
  CVector y_signal;  // S_r mf^H
  CVector y_noise;   // Z_r mf^H (scaled by 1/sqrt(p) later)
  CVector desired;   // h c_uu
  std::complex<double> c_uu{};
  double gain = 0.0;
  double desired_power = 0.0;       // per antenna, closed form
  double interference_power = 0.0;  // per antenna, closed form
  double noise_unit = 0.0;          // sigma^2 tau_p at p_ul = 1
  std::vector<std::complex<double>> corr;
};

class TrialRunner {
 public:
  TrialRunner(const ExperimentConfig& config, const std::vector<SweepPoint>& points,
              bool collect_links)
      : c_(config), points_(points), collect_links_(collect_links) {}

  TrialOutput run(int trial) const {
    TrialOutput out;
    out.realization_seed = derive_seed(c_.seed, {static_cast<std::uint64_t>(trial)});
    out.cells.assign(points_.size(), std::vector<CellSamples>(c_.variants.size()));

    const TrialChannels tc = make_trial_channels(c_, trial);
    const NetworkRealization& net = tc.net;
    const LargeScale& ls = tc.ls;
    const ChannelMatrixSet& chan = tc.chan;
    const NetworkRealization& sync_net = tc.sync_net;
    const int auto_ex = tc.auto_ex;

    // Points sharing (tau_p, tau_ex) reuse the same frame across powers.
    std::map<std::pair<int, int>, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < points_.size(); ++i)
      groups[{points_[i].tau_p, points_[i].tau_ex.value_or(-1)}].push_back(i);

    for (std::size_t vi = 0; vi < c_.variants.size(); ++vi) {
      const VariantSpec& variant = c_.variants[vi];
      const NetworkRealization& vnet = variant.synchronous ? sync_net : net;
      for (const auto& [key, members] : groups) {
        const int tau_p = key.first;
        const std::optional<int> requested =
            key.second < 0 ? std::nullopt : std::optional<int>(key.second);
        const int tau_ex = applied_tau_ex(variant, requested, auto_ex);
        run_group(trial, variant, vnet, ls, chan, tau_p, tau_ex, members, vi, out);
      }
    }
    return out;
  }

 private:
  void run_group(int trial, const VariantSpec& variant, const NetworkRealization& net,
                 const LargeScale& ls, const ChannelMatrixSet& chan, int tau_p, int tau_ex,
                 const std::vector<std::size_t>& members, std::size_t vi, TrialOutput& out) const {
    const int m = c_.antennas;
    VariantDraws draws = make_variant_draws(c_, trial, variant, net, tau_p, tau_ex);
    const PilotBook& book = draws.book;
    const UplinkData& data = draws.data;
    Rng& noise_rng = draws.noise_rng;

    const LinkModel model{book, net, ls, variant.regime, m, c_.noise_w};
    std::vector<std::vector<LinkProfile>> profiles(static_cast<std::size_t>(net.ap_count()));
    for (int r = 0; r < net.ap_count(); ++r) {
      const CMatrix signal = synthesize_signal(book, net, chan, variant.regime, r, data);
      const CMatrix noise = draw_noise(m, static_cast<int>(signal.cols()), c_.noise_w, noise_rng);
      for (int u : net.serving_sets[r]) {
        const MfSequence mf = make_mf_sequence(book, net, r, u);
        const PowerBreakdown pb = closed_form_breakdown(model, r, u, 1.0);
        LinkProfile lp;
        lp.r = r;
        lp.u = u;
        lp.h = chan.at(r, u);
        lp.y_signal = signal * mf.row.adjoint();
        lp.y_noise = noise * mf.row.adjoint();
        lp.c_uu = desired_correlation(book, net, r, u);
        lp.desired = lp.h * lp.c_uu;
        lp.gain = ls.gain(r, u);
        lp.desired_power = pb.desired;
        lp.interference_power = pb.interference_total();
        lp.noise_unit = pb.noise;
        if (c_.rate) {
          lp.corr.resize(static_cast<std::size_t>(net.ue_count()));
          for (int k = 0; k < net.ue_count(); ++k)
            lp.corr[k] = correlate(build_augmented_sequence(book, net, Regime::Upg, r, k, data), mf.row);
        }
        profiles[r].push_back(std::move(lp));
      }
    }

    for (std::size_t pi : members) {
      const double p = dbm_to_watts(points_[pi].p_dbm);
      CellSamples& cell = out.cells[pi][vi];
      cell.tau_ex_applied = tau_ex;
      std::vector<std::vector<LinkRateStats>> stats(profiles.size());
      for (std::size_t r = 0; r < profiles.size(); ++r) {
        for (const LinkProfile& lp : profiles[r]) {
          const double total = lp.desired_power + lp.interference_power + lp.noise_unit / p;
          const std::complex<double> g = std::conj(lp.c_uu) * lp.gain / total;
          MfOutput mf;
          mf.y = lp.y_signal + lp.y_noise / std::sqrt(p);
          CovariancePair cov;
          cov.cross = CMatrix::Identity(m, m) * (std::conj(lp.c_uu) * lp.gain);
          cov.signal = CMatrix::Identity(m, m) * total;
          const ChannelEstimate est = lmmse_estimate(mf, cov, lp.h);
          cell.nmse.push_back(est.nmse);
          if (c_.rate) {
            LinkRateStats s;
            s.gamma = std::norm(lp.c_uu) * lp.gain * lp.gain / total;
            s.lmmse_gain = g;
            s.corr = lp.corr;
            stats[r].push_back(std::move(s));
          }
          if (collect_links_ && trial == 0) {
            LinkDiagnostic d;
            d.sweep_value = points_[pi].value;
            d.scheme = variant.scheme_name();
            d.regime = std::string(to_string(variant.regime));
            d.r = lp.r;
            d.u = lp.u;
            d.nmse = est.nmse;
            d.desired_power = lp.desired.squaredNorm();
            d.interference_power = (lp.y_signal - lp.desired).squaredNorm();
            d.noise_power = (lp.y_noise / std::sqrt(p)).squaredNorm();
            out.links.push_back(std::move(d));
          }
        }
      }
      if (c_.rate) {
        const double p_dl = dbm_to_watts(c_.p_dl_dbm.value_or(points_[pi].p_dbm));
        const RateReport rep = conjugate_bf_rate(net, ls, stats, m, p_dl, c_.noise_w,
                                                 overhead_factor(c_.tau_c, tau_p, tau_ex));
        for (int u = 0; u < net.ue_count(); ++u)
          if (!net.serving_aps[u].empty()) cell.rate.push_back(rep.spectral_efficiency[u]);
      }
    }
  }

  const ExperimentConfig& c_;
  const std::vector<SweepPoint>& points_;
  bool collect_links_;
};

double mean_of(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

std::string tau_ex_label(const VariantSpec& v, const SweepPoint& p) {
  if (v.synchronous || v.scheme != PilotScheme::ExtendedDft) return "0";
  return p.tau_ex ? std::to_string(*p.tau_ex) : std::string("auto_min");
}

}  // namespace

const SweepRow& SweepResult::at(double sweep_value, std::string_view variant_label) const {
  for (const SweepRow& row : rows)
    if (row.sweep_value == sweep_value && row.variant.label() == variant_label) return row;
  throw std::out_of_range("SweepResult: no row for " + std::string(variant_label));
}

SweepResult run_sweep(const ExperimentConfig& config, const SweepOptions& options) {
  config.validate();
  const std::vector<SweepPoint> points = expand_points(config);
  const TrialRunner runner(config, points, options.collect_links);

  std::vector<TrialOutput> outputs(static_cast<std::size_t>(config.trials));
  int workers = config.threads > 0 ? config.threads
                                   : static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
  workers = std::min(workers, config.trials);

  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (int t = next.fetch_add(1); t < config.trials; t = next.fetch_add(1)) {
      try {
        outputs[static_cast<std::size_t>(t)] = runner.run(t);
      } catch (...) {
        const std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(config.trials);
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);

  SweepResult result;
  result.sweep_var = config.sweep_var;
  result.seed = config.seed;
  for (std::size_t pi = 0; pi < points.size(); ++pi) {
    for (std::size_t vi = 0; vi < config.variants.size(); ++vi) {
      std::vector<double> nmse;
      std::vector<double> rate;
      double ex_sum = 0.0;
      for (const TrialOutput& o : outputs) {
        const CellSamples& cell = o.cells[pi][vi];
        nmse.insert(nmse.end(), cell.nmse.begin(), cell.nmse.end());
        rate.insert(rate.end(), cell.rate.begin(), cell.rate.end());
        ex_sum += cell.tau_ex_applied;
      }
      SweepRow row;
      row.sweep_var = config.sweep_var;
      row.sweep_value = points[pi].value;
      row.variant = config.variants[vi];
      row.tau_p = points[pi].tau_p;
      row.tau_ex = tau_ex_label(config.variants[vi], points[pi]);
      row.tau_ex_applied_mean = ex_sum / config.trials;
      row.nmse = nmse_aggregate(nmse);
      if (config.rate) row.rate_mean = mean_of(rate);
      row.trials = config.trials;
      row.seed = config.seed;
      result.rows.push_back(std::move(row));
    }
  }

  result.trials.reserve(outputs.size());
  for (std::size_t t = 0; t < outputs.size(); ++t) {
    TrialRecord rec;
    rec.trial = static_cast<int>(t);
    rec.realization_seed = outputs[t].realization_seed;
    for (std::size_t pi = 0; pi < points.size(); ++pi) {
      for (std::size_t vi = 0; vi < config.variants.size(); ++vi) {
        const CellSamples& cell = outputs[t].cells[pi][vi];
        TrialEntry e;
        e.point = pi;
        e.variant = vi;
        if (!cell.nmse.empty()) e.nmse = nmse_aggregate(cell.nmse);
        if (config.rate) e.rate_mean = mean_of(cell.rate);
        rec.entries.push_back(e);
      }
    }
    result.trials.push_back(std::move(rec));
  }
  if (!outputs.empty()) result.links = std::move(outputs.front().links);
  return result;
}

SweepResult synchronous_baseline(ExperimentConfig config, const SweepOptions& options) {
  VariantSpec sync;
  sync.synchronous = true;
  config.variants = {sync};
  return run_sweep(config, options);
}

std::vector<double> default_power_grid() {
  std::vector<double> grid;
  for (int p = -36; p <= 20; p += 8) grid.push_back(p);
  return grid;
}

ExperimentConfig figure_preset(std::string_view figure_id, bool desk_scale) {
  ExperimentConfig c;
  c.tau_p = 32;
  c.antennas = 8;
  c.noise_w = 1e-14;
  c.assignment = PilotAssignment::MaxMinDistance;
  c.trials = desk_scale ? 200 : 500;
  c.sweep_var = SweepVar::PowerDbm;
  c.sweep_values = default_power_grid();

  if (figure_id == "fig6") {
    c.variants = {parse_variant("random_upg"), parse_variant("random_upng"),
                  parse_variant("dft_upg"), parse_variant("dft_upng"), parse_variant("sync")};
  } else if (figure_id == "fig7") {
    c.variants = {parse_variant("dft_upg"), parse_variant("dft_upng"),
                  parse_variant("dft_ext_upg"), parse_variant("dft_ext_upng"),
                  parse_variant("sync")};
    c.tau_ex.reset();
  } else if (figure_id == "fig8") {
    c.variants = {parse_variant("dft_ext_upg"), parse_variant("dft_ext_upng")};
    c.sweep_var = SweepVar::TauEx;
    c.sweep_values = {0, 1, 2, 3, 4, 5, 6};
    c.p_dbm = 20.0;
  } else if (figure_id == "fig9") {
    c.variants = {parse_variant("dft_upg"), parse_variant("dft_ext_upg"), parse_variant("sync")};
    c.tau_ex.reset();
    c.rate = true;
  } else {
    throw ConfigError("figure", "unknown figure preset '" + std::string(figure_id) + "'");
  }
  if (desk_scale) apply_desk_scale(c);
  c.validate();
  return c;
}

ReceivedFrame reproduce_frame(const ExperimentConfig& config, int trial, std::size_t variant) {
  config.validate();
  if (trial < 0) throw ConfigError("trial", "must be >= 0");
  if (variant >= config.variants.size()) throw ConfigError("run.variants", "variant index out of range");
  const VariantSpec& v = config.variants[variant];
  const TrialChannels tc = make_trial_channels(config, trial);
  const NetworkRealization& net = v.synchronous ? tc.sync_net : tc.net;
  const SweepPoint point = expand_points(config).front();
  const int tau_ex = applied_tau_ex(v, point.tau_ex, tc.auto_ex);
  VariantDraws d = make_variant_draws(config, trial, v, net, point.tau_p, tau_ex);
  std::vector<CMatrix> noise;
  for (int r = 0; r < net.ap_count(); ++r)
    noise.push_back(draw_noise(config.antennas, d.book.length() + net.t_max[r], config.noise_w,
                               d.noise_rng));
  return assemble_frame(d.book, net, tc.chan, v.regime, dbm_to_watts(point.p_dbm), d.data, noise);
}

CrossCorrConfig crosscorr_preset() {
  CrossCorrConfig c;
  for (int tau = 8; tau <= 64; tau += 2) c.tau_ps.push_back(tau);
  return c;
}

CrossCorrTable run_crosscorr(const CrossCorrConfig& config) {
  Rng rng = make_stream(config.seed, {stream::kPilot});
  return crosscorr_comparison(config.tau_ps, config.delay, rng, config.trials, config.mode,
                              config.phase_levels);
}

}  // namespace cfest
