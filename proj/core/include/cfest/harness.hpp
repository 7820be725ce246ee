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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cfest/airframe.hpp"
#include "cfest/analytics.hpp"
#include "cfest/config.hpp"

namespace cfest {

/// Aggregate of one (sweep point, variant) cell.
struct SweepRow {
  SweepVar sweep_var = SweepVar::PowerDbm;
  double sweep_value = 0.0;
  VariantSpec variant;
  int tau_p = 0;
  std::string tau_ex;                 // integer or "auto_min"
  double tau_ex_applied_mean = 0.0;   // mean extension actually used
  NmseSummary nmse;
  std::optional<double> rate_mean;   // bits/s/Hz, mean over served UEs
  int trials = 0;
  std::uint64_t seed = 0;
};

struct TrialEntry {
  std::size_t point = 0;
  std::size_t variant = 0;
  NmseSummary nmse;
  std::optional<double> rate_mean;
};

struct TrialRecord {
  int trial = 0;
  std::uint64_t realization_seed = 0;
  std::vector<TrialEntry> entries;
};

/// One served link of trial 0, kept for the diagnostic dump.
struct LinkDiagnostic {
  double sweep_value = 0.0;
  std::string scheme;
  std::string regime;
  int r = 0;
  int u = 0;
  double nmse = 0.0;
  double desired_power = 0.0;
  double interference_power = 0.0;
  double noise_power = 0.0;
};

struct SweepResult {
  SweepVar sweep_var = SweepVar::PowerDbm;
  std::uint64_t seed = 0;
  std::vector<SweepRow> rows;  // point-major, variants in config order
  std::vector<TrialRecord> trials;
  std::vector<LinkDiagnostic> links;

  /// Throws std::out_of_range when absent.
  const SweepRow& at(double sweep_value, std::string_view variant_label) const;
};

struct SweepOptions {
  bool collect_links = false;
};

/// Runs every variant at every sweep point over `config.trials` independent
/// realizations. Trials run on `config.threads` workers; the result does not
/// depend on the worker count.
SweepResult run_sweep(const ExperimentConfig& config, const SweepOptions& options = {});

/// The same sweep with only the synchronous DFT reference.
SweepResult synchronous_baseline(ExperimentConfig config, const SweepOptions& options = {});

/// Presets: fig6, fig7, fig8, fig9 (fig3 is a cross-correlation table, see
/// crosscorr_preset). Throws ConfigError("figure") for unknown ids.
ExperimentConfig figure_preset(std::string_view figure_id, bool desk_scale);

/// Received frame of one trial and variant at the first sweep point, drawn
/// from the same substreams run_sweep uses.
ReceivedFrame reproduce_frame(const ExperimentConfig& config, int trial, std::size_t variant);

struct CrossCorrConfig {
  std::vector<int> tau_ps;
  int delay = 6;
  DftPairMode mode = DftPairMode::Adjacent;
  int trials = 10000;
  int phase_levels = 8;
  std::uint64_t seed = 1;
};

CrossCorrConfig crosscorr_preset();
CrossCorrTable run_crosscorr(const CrossCorrConfig& config);

/// Power sweep used by the NMSE and rate figures: -36 to 20 dBm in 8 dB steps.
std::vector<double> default_power_grid();

}  // namespace cfest
