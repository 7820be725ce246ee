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

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>

#include "cfest/analytics.hpp"
#include "cfest/config.hpp"
#include "cfest/harness.hpp"

namespace cfest {

/// Column order of the results table (CSV header and JSON-lines keys).
std::span<const std::string> result_columns();

void write_results_csv(std::ostream& out, const SweepResult& result);
void write_results_jsonl(std::ostream& out, const SweepResult& result);
void write_results(std::ostream& out, const SweepResult& result, OutputFormat format);

/// Columns: r, u, scheme, regime, nmse, desired_power, interference_power,
/// noise_power, sweep_value. Powers are vector energies of the MF terms.
void write_link_csv(std::ostream& out, const SweepResult& result);

/// Columns: tau_p, random_mean, dft_mean, delay, crossover_tau_p.
void write_crosscorr_csv(std::ostream& out, const CrossCorrTable& table);

/// Opens `path` for writing or throws IoError.
std::ofstream open_output(const std::filesystem::path& path);

}  // namespace cfest
