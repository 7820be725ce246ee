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
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cfest/airframe.hpp"
#include "cfest/geometry.hpp"
#include "cfest/pilot.hpp"

namespace cfest {

/// Flat `dotted.key = value` file. `#` starts a comment; lists are written
/// `[a, b, c]`. Later assignments override earlier ones.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(std::istream& in);
  static KeyValueConfig parse(std::string_view text);
  static KeyValueConfig from_file(const std::filesystem::path& path);

  void set(const std::string& key, std::string value) { values_[key] = std::move(value); }
  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::map<std::string, std::string>& entries() const noexcept { return values_; }

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<std::string> get_list(const std::string& key) const;
  std::vector<double> get_double_list(const std::string& key) const;

 private:
  std::map<std::string, std::string> values_;
};

/// One curve of a sweep: a pilot scheme under a regime, optionally with all
/// delays forced to zero (the synchronous DFT reference).
struct VariantSpec {
  PilotScheme scheme = PilotScheme::Dft;
  Regime regime = Regime::Upg;
  bool synchronous = false;

  /// random_upg, dft_upng, dft_ext_upg, sync, sync_upng, ...
  std::string label() const;
  /// Output "scheme" column: random | dft | dft_ext | sync.
  std::string scheme_name() const;
};

VariantSpec parse_variant(std::string_view text);

enum class SweepVar { PowerDbm, TauP, TauEx };
std::string_view to_string(SweepVar var) noexcept;
SweepVar parse_sweep_var(std::string_view text);

enum class OutputFormat { Csv, Jsonl };
OutputFormat parse_output_format(std::string_view text);

struct ExperimentConfig {
  SimArea area;
  int cluster_size = 4;

  double sigma_sh_db = 4.0;
  double noise_w = 1e-14;
  int antennas = 8;

  int tau_p = 32;
  std::optional<int> tau_ex;  // nullopt: auto_min per realization
  int phase_levels = 8;
  PilotAssignment assignment = PilotAssignment::RoundRobin;
  bool link_phase = false;

  std::vector<VariantSpec> variants{VariantSpec{}};

  SweepVar sweep_var = SweepVar::PowerDbm;
  std::vector<double> sweep_values{20.0};
  double p_dbm = 20.0;  // uplink power when it is not the swept variable

  int trials = 200;
  std::uint64_t seed = 1;
  int threads = 0;  // 0: hardware concurrency

  bool rate = false;
  std::optional<double> p_dl_dbm;  // nullopt: same as the uplink power of the point
  int tau_c = 200;

  std::string out_path;
  OutputFormat format = OutputFormat::Csv;

  /// Throws ConfigError naming the offending key.
  void validate() const;
};

/// Applies every documented key present in `kv` on top of `base`.
ExperimentConfig experiment_from_keys(const KeyValueConfig& kv, ExperimentConfig base = {});

/// Shrinks the region to 0.1 km^2 keeping AP and UE densities.
void apply_desk_scale(ExperimentConfig& config);

inline constexpr double kDeskAreaKm2 = 0.1;

double dbm_to_watts(double dbm) noexcept;

}  // namespace cfest
