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


#include "cfest/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include "cfest/errors.hpp"

namespace cfest {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

double parse_double(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key, "expected a number, got '" + text + "'");
  }
}

long long parse_integer(const std::string& key, const std::string& text) {
  long long v = 0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end)
    throw ConfigError(key, "expected an integer, got '" + text + "'");
  return v;
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(std::istream& in) {
  KeyValueConfig kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      throw ConfigError("", "line " + std::to_string(lineno) + ": expected 'key = value'");
    std::string key = trim(std::string_view(body).substr(0, eq));
    std::string value = trim(std::string_view(body).substr(eq + 1));
    if (key.empty()) throw ConfigError("", "line " + std::to_string(lineno) + ": empty key");
    kv.set(key, std::move(value));
  }
  return kv;
}

KeyValueConfig KeyValueConfig::parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse(in);
}

KeyValueConfig KeyValueConfig::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  return parse(in);
}

std::string KeyValueConfig::get_string(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : parse_double(key, it->second);
}

int KeyValueConfig::get_int(const std::string& key, int fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const long long v = parse_integer(key, it->second);
  if (v < INT32_MIN || v > INT32_MAX) throw ConfigError(key, "integer out of range");
  return static_cast<int>(v);
}

std::uint64_t KeyValueConfig::get_u64(const std::string& key, std::uint64_t fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::uint64_t v = 0;
  const std::string& text = it->second;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end)
    throw ConfigError(key, "expected an unsigned integer, got '" + text + "'");
  return v;
}

bool KeyValueConfig::get_bool(const std::string& key, bool fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const std::string& v = it->second;
  if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "off" || v == "no") return false;
  throw ConfigError(key, "expected a boolean, got '" + v + "'");
}

std::vector<std::string> KeyValueConfig::get_list(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return {};
  std::string body = trim(it->second);
  if (!body.empty() && body.front() == '[') {
    if (body.back() != ']') throw ConfigError(key, "unterminated list");
    body = body.substr(1, body.size() - 2);
  }
  std::vector<std::string> out;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> KeyValueConfig::get_double_list(const std::string& key) const {
  std::vector<double> out;
  for (const auto& item : get_list(key)) out.push_back(parse_double(key, item));
  return out;
}

std::string VariantSpec::scheme_name() const {
  return synchronous ? "sync" : std::string(to_string(scheme));
}

std::string VariantSpec::label() const {
  if (synchronous) return regime == Regime::Upg ? "sync" : "sync_upng";
  return std::string(to_string(scheme)) + "_" + std::string(to_string(regime));
}

VariantSpec parse_variant(std::string_view text) {
  VariantSpec v;
  if (text == "sync" || text == "sync_upg") {
    v.synchronous = true;
    return v;
  }
  if (text == "sync_upng") {
    v.synchronous = true;
    v.regime = Regime::Upng;
    return v;
  }
  const auto cut = text.rfind('_');
  if (cut == std::string_view::npos)
    throw ConfigError("run.variants", "variant '" + std::string(text) + "' needs a _upg/_upng suffix");
  try {
    v.scheme = parse_pilot_scheme(text.substr(0, cut));
    v.regime = parse_regime(text.substr(cut + 1));
  } catch (const ConfigError&) {
    throw ConfigError("run.variants", "unknown variant '" + std::string(text) + "'");
  }
  return v;
}

std::string_view to_string(SweepVar var) noexcept {
  switch (var) {
    case SweepVar::PowerDbm: return "p_dbm";
    case SweepVar::TauP: return "tau_p";
    case SweepVar::TauEx: return "tau_ex";
  }
  return "?";
}

SweepVar parse_sweep_var(std::string_view text) {
  if (text == "p_dbm") return SweepVar::PowerDbm;
  if (text == "tau_p") return SweepVar::TauP;
  if (text == "tau_ex") return SweepVar::TauEx;
  throw ConfigError("sweep.var", "unknown sweep variable '" + std::string(text) + "'");
}

OutputFormat parse_output_format(std::string_view text) {
  if (text == "csv") return OutputFormat::Csv;
  if (text == "jsonl") return OutputFormat::Jsonl;
  throw ConfigError("out.format", "unknown format '" + std::string(text) + "'");
}

double dbm_to_watts(double dbm) noexcept { return std::pow(10.0, dbm / 10.0) / 1000.0; }

void ExperimentConfig::validate() const {
  area.validate();
  if (cluster_size < 1) throw ConfigError("cluster.size", "must be >= 1");
  if (sigma_sh_db < 0.0) throw ConfigError("chan.sigma_sh_db", "must be >= 0");
  if (!(noise_w > 0.0)) throw ConfigError("chan.noise_w", "must be positive");
  if (antennas < 1) throw ConfigError("chan.antennas", "must be >= 1");
  if (tau_p < 1) throw ConfigError("pilot.tau_p", "must be >= 1");
  if (tau_ex && *tau_ex < 0) throw ConfigError("pilot.tau_ex", "must be >= 0 or auto_min");
  if (phase_levels < 1) throw ConfigError("pilot.P", "must be >= 1");
  if (variants.empty()) throw ConfigError("run.variants", "no variants");
  if (sweep_values.empty()) throw ConfigError("sweep.values", "no sweep values");
  for (double v : sweep_values) {
    if (sweep_var == SweepVar::TauP && (v < 1 || v != std::floor(v)))
      throw ConfigError("sweep.values", "tau_p values must be positive integers");
    if (sweep_var == SweepVar::TauEx && (v < 0 || v != std::floor(v)))
      throw ConfigError("sweep.values", "tau_ex values must be non-negative integers");
  }
  if (trials < 1) throw ConfigError("run.trials", "must be >= 1");
  if (threads < 0) throw ConfigError("run.threads", "must be >= 0");
  if (tau_c < 1) throw ConfigError("rate.tau_c", "must be >= 1");
}

ExperimentConfig experiment_from_keys(const KeyValueConfig& kv, ExperimentConfig base) {
  ExperimentConfig c = std::move(base);
  c.area.side_m = kv.get_double("area.side_m", c.area.side_m);
  c.area.ap_count = kv.get_int("area.ap_count", c.area.ap_count);
  c.area.ue_mean = kv.get_double("area.ue_mean", c.area.ue_mean);
  c.area.restricted_radius_m = kv.get_double("area.gamma_m", c.area.restricted_radius_m);
  if (kv.has("sys.bw_hz")) {
    const double bw = kv.get_double("sys.bw_hz", 0.0);
    if (!(bw > 0.0)) throw ConfigError("sys.bw_hz", "must be positive");
    c.area.sample_period_s = 1.0 / bw;
  }
  c.cluster_size = kv.get_int("cluster.size", c.cluster_size);
  c.seed = kv.get_u64("seed", c.seed);

  c.sigma_sh_db = kv.get_double("chan.sigma_sh_db", c.sigma_sh_db);
  c.noise_w = kv.get_double("chan.noise_w", c.noise_w);
  c.antennas = kv.get_int("chan.antennas", c.antennas);

  c.tau_p = kv.get_int("pilot.tau_p", c.tau_p);
  if (kv.has("pilot.tau_ex")) {
    if (kv.get_string("pilot.tau_ex", "") == "auto_min") {
      c.tau_ex.reset();
    } else {
      c.tau_ex = kv.get_int("pilot.tau_ex", 0);
    }
  }
  c.phase_levels = kv.get_int("pilot.P", c.phase_levels);
  if (kv.has("pilot.assignment"))
    c.assignment = parse_pilot_assignment(kv.get_string("pilot.assignment", ""));
  c.link_phase = kv.get_bool("pilot.link_phase", c.link_phase);

  if (kv.has("run.variants")) {
    c.variants.clear();
    for (const auto& name : kv.get_list("run.variants")) c.variants.push_back(parse_variant(name));
  } else if (kv.has("pilot.scheme") || kv.has("frame.regime")) {
    VariantSpec v;
    v.scheme = parse_pilot_scheme(kv.get_string("pilot.scheme", "dft"));
    v.regime = parse_regime(kv.get_string("frame.regime", "upg"));
    c.variants = {v};
  }

  c.p_dbm = kv.get_double("sys.p_dbm", c.p_dbm);
  if (kv.has("sweep.p_dbm")) {
    c.sweep_var = SweepVar::PowerDbm;
    c.sweep_values = kv.get_double_list("sweep.p_dbm");
  }
  if (kv.has("sweep.var")) c.sweep_var = parse_sweep_var(kv.get_string("sweep.var", ""));
  if (kv.has("sweep.values")) c.sweep_values = kv.get_double_list("sweep.values");
  if (kv.has("sys.p_dbm") && !kv.has("sweep.p_dbm") && !kv.has("sweep.values") &&
      c.sweep_var == SweepVar::PowerDbm)
    c.sweep_values = {c.p_dbm};

  c.trials = kv.get_int("run.trials", c.trials);
  c.threads = kv.get_int("run.threads", c.threads);

  c.rate = kv.get_bool("rate.enabled", c.rate);
  if (kv.has("rate.p_dl_dbm")) c.p_dl_dbm = kv.get_double("rate.p_dl_dbm", 0.0);
  c.tau_c = kv.get_int("rate.tau_c", c.tau_c);

  c.out_path = kv.get_string("out.path", c.out_path);
  if (kv.has("out.format")) c.format = parse_output_format(kv.get_string("out.format", ""));

  c.validate();
  return c;
}

void apply_desk_scale(ExperimentConfig& config) {
  const double area_km2 = config.area.side_m * config.area.side_m / 1e6;
  const double scale = kDeskAreaKm2 / area_km2;
  config.area.side_m = std::sqrt(kDeskAreaKm2 * 1e6);
  config.area.ap_count = std::max(1, static_cast<int>(std::lround(config.area.ap_count * scale)));
  config.area.ue_mean *= scale;
}

}  // namespace cfest
