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


// cfest: seeded sweeps, figure presets and frame dumps from the command line.
//
// Exit codes: 0 success, 2 configuration error, 3 I/O error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "cfest/errors.hpp"
#include "cfest/frame_io.hpp"
#include "cfest/harness.hpp"
#include "cfest/output.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::optional<int> threads;
  bool desk_scale = false;
  std::string out;
  std::string format;
  std::string links_out;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_path, "key = value config file")->check(CLI::ExistingFile);
  cmd->add_option("--seed", f.seed, "root seed");
  cmd->add_option("--trials", f.trials, "realizations per sweep point");
  cmd->add_option("--threads", f.threads, "worker threads (0 = all cores)");
  cmd->add_flag("--desk-scale", f.desk_scale, "shrink to 0.1 km^2 at equal densities");
  cmd->add_option("--out", f.out, "output path (stdout when omitted)");
  cmd->add_option("--format", f.format, "csv or jsonl")->check(CLI::IsMember({"csv", "jsonl"}));
  cmd->add_option("--links", f.links_out, "per-link diagnostic CSV for trial 0");
}

cfest::ExperimentConfig resolve(const CommonFlags& f, cfest::ExperimentConfig base) {
  cfest::ExperimentConfig c = std::move(base);
  if (!f.config_path.empty()) {
    c = cfest::experiment_from_keys(cfest::KeyValueConfig::from_file(f.config_path), std::move(c));
  }
  if (f.desk_scale) {
    const int default_trials = c.trials;
    cfest::apply_desk_scale(c);
    c.trials = default_trials;
  }
  if (f.seed) c.seed = *f.seed;
  if (f.trials) c.trials = *f.trials;
  if (f.threads) c.threads = *f.threads;
  if (!f.out.empty()) c.out_path = f.out;
  if (!f.format.empty()) c.format = cfest::parse_output_format(f.format);
  c.validate();
  return c;
}

template <typename Writer>
void emit(const std::string& path, Writer&& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out = cfest::open_output(path);
  write(out);
  out.close();
  if (!out) throw cfest::IoError("failed writing '" + path + "'");
}

void run_and_write(const cfest::ExperimentConfig& c, const CommonFlags& f) {
  cfest::SweepOptions opts;
  opts.collect_links = !f.links_out.empty();
  const cfest::SweepResult result = cfest::run_sweep(c, opts);
  emit(c.out_path, [&](std::ostream& os) { cfest::write_results(os, result, c.format); });
  if (opts.collect_links)
    emit(f.links_out, [&](std::ostream& os) { cfest::write_link_csv(os, result); });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Asynchronous cell-free channel-estimation simulator"};
  app.require_subcommand(1);

  CommonFlags sweep_flags;
  auto* sweep = app.add_subcommand("sweep", "run the sweep described by --config");
  add_common(sweep, sweep_flags);

  CommonFlags fig_flags;
  std::string figure_id;
  auto* figure = app.add_subcommand("figure", "run a reproduction preset (fig3, fig6..fig9)");
  figure->add_option("id", figure_id, "preset id")->required();
  add_common(figure, fig_flags);

  cfest::CrossCorrConfig xc = cfest::crosscorr_preset();
  std::string xc_mode = "adjacent";
  std::string xc_out;
  auto* crosscorr = app.add_subcommand("crosscorr", "random vs DFT cross-correlation at fixed delay");
  crosscorr->add_option("--delay", xc.delay, "fixed delay in samples");
  crosscorr->add_option("--mode", xc_mode, "adjacent or all")
      ->check(CLI::IsMember({"adjacent", "all"}));
  crosscorr->add_option("--tau-p", xc.tau_ps, "pilot lengths to sweep");
  crosscorr->add_option("--trials", xc.trials, "Monte-Carlo draws for random pilots");
  crosscorr->add_option("--seed", xc.seed, "root seed");
  crosscorr->add_option("--out", xc_out, "output path (stdout when omitted)");

  CommonFlags dump_flags;
  int dump_trial = 0;
  std::size_t dump_variant = 0;
  int dump_ap = 0;
  auto* dump = app.add_subcommand("dump-frame", "write one AP's received frame as a binary dump");
  add_common(dump, dump_flags);
  dump->add_option("--trial", dump_trial, "trial index");
  dump->add_option("--variant", dump_variant, "index into run.variants");
  dump->add_option("--ap", dump_ap, "AP index");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*sweep) {
      run_and_write(resolve(sweep_flags, {}), sweep_flags);
    } else if (*figure) {
      if (figure_id == "fig3") {
        const cfest::CrossCorrTable table = cfest::run_crosscorr(cfest::crosscorr_preset());
        emit(fig_flags.out, [&](std::ostream& os) { cfest::write_crosscorr_csv(os, table); });
      } else {
        cfest::ExperimentConfig base = cfest::figure_preset(figure_id, fig_flags.desk_scale);
        CommonFlags f = fig_flags;
        f.desk_scale = false;  // already applied by the preset
        run_and_write(resolve(f, std::move(base)), f);
      }
    } else if (*crosscorr) {
      xc.mode = xc_mode == "all" ? cfest::DftPairMode::AllPairs : cfest::DftPairMode::Adjacent;
      const cfest::CrossCorrTable table = cfest::run_crosscorr(xc);
      emit(xc_out, [&](std::ostream& os) { cfest::write_crosscorr_csv(os, table); });
    } else if (*dump) {
      const cfest::ExperimentConfig c = resolve(dump_flags, {});
      if (c.out_path.empty()) throw cfest::ConfigError("out.path", "dump-frame needs --out");
      const cfest::ReceivedFrame frame = cfest::reproduce_frame(c, dump_trial, dump_variant);
      if (dump_ap < 0 || dump_ap >= static_cast<int>(frame.y.size()))
        throw cfest::ConfigError("ap", "AP index out of range");
      cfest::write_frame_dump(std::filesystem::path(c.out_path), frame.y[dump_ap]);
    }
  } catch (const cfest::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const cfest::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  }
  return 0;
}
