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


#include "cfest/output.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "json.hpp"

#include "cfest/errors.hpp"

namespace cfest {

namespace {

const std::array<std::string, 12> kColumns = {
    "sweep_var", "sweep_value", "scheme",  "regime",   "tau_p", "tau_ex",
    "nmse_db_mean", "nmse_db_p10", "nmse_db_p90", "rate_mean_bps_hz", "trials", "seed"};

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string compact(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9e", v);
  return buf;
}

}  // namespace

std::span<const std::string> result_columns() { return kColumns; }

void write_results_csv(std::ostream& out, const SweepResult& result) {
  for (std::size_t i = 0; i < kColumns.size(); ++i) out << (i ? "," : "") << kColumns[i];
  out << '\n';
  for (const SweepRow& row : result.rows) {
    out << to_string(row.sweep_var) << ',' << compact(row.sweep_value) << ','
        << row.variant.scheme_name() << ',' << to_string(row.variant.regime) << ',' << row.tau_p
        << ',' << row.tau_ex << ',' << fixed(row.nmse.mean_db, 6) << ','
        << fixed(row.nmse.p10_db, 6) << ',' << fixed(row.nmse.p90_db, 6) << ','
        << (row.rate_mean ? fixed(*row.rate_mean, 6) : std::string()) << ',' << row.trials << ','
        << row.seed << '\n';
  }
}

void write_results_jsonl(std::ostream& out, const SweepResult& result) {
  for (const SweepRow& row : result.rows) {
    nlohmann::ordered_json j;
    j["sweep_var"] = std::string(to_string(row.sweep_var));
    j["sweep_value"] = row.sweep_value;
    j["scheme"] = row.variant.scheme_name();
    j["regime"] = std::string(to_string(row.variant.regime));
    j["tau_p"] = row.tau_p;
    j["tau_ex"] = row.tau_ex;
    j["nmse_db_mean"] = row.nmse.mean_db;
    j["nmse_db_p10"] = row.nmse.p10_db;
    j["nmse_db_p90"] = row.nmse.p90_db;
    j["rate_mean_bps_hz"] = row.rate_mean ? nlohmann::ordered_json(*row.rate_mean) : nullptr;
    j["trials"] = row.trials;
    j["seed"] = row.seed;
    out << j.dump() << '\n';
  }
}

void write_results(std::ostream& out, const SweepResult& result, OutputFormat format) {
  if (format == OutputFormat::Csv) {
    write_results_csv(out, result);
  } else {
    write_results_jsonl(out, result);
  }
}

void write_link_csv(std::ostream& out, const SweepResult& result) {
  out << "r,u,scheme,regime,nmse,desired_power,interference_power,noise_power,sweep_value\n";
  for (const LinkDiagnostic& d : result.links) {
    out << d.r << ',' << d.u << ',' << d.scheme << ',' << d.regime << ',' << sci(d.nmse) << ','
        << sci(d.desired_power) << ',' << sci(d.interference_power) << ',' << sci(d.noise_power)
        << ',' << compact(d.sweep_value) << '\n';
  }
}

void write_crosscorr_csv(std::ostream& out, const CrossCorrTable& table) {
  out << "tau_p,random_mean,dft_mean,delay,crossover_tau_p\n";
  const std::string cross = table.crossover_tau_p ? std::to_string(*table.crossover_tau_p) : "";
  for (const CrossCorrRow& row : table.rows) {
    out << row.tau_p << ',' << fixed(row.random_mean, 6) << ',' << fixed(row.dft_mean, 6) << ','
        << table.delay << ',' << cross << '\n';
  }
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

}  // namespace cfest
