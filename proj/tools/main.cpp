// Copyright 2026 The rismac Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rismac/cli.hpp"
#include "rismac/config.hpp"

namespace {

rismac::SystemConfig base_config(const std::string& path, const std::vector<std::string>& sets) {
  rismac::SystemConfig c = path.empty() ? rismac::SystemConfig{} : rismac::load_config(path);
  for (const auto& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("--set expects key=value, got '" + s + "'");
    rismac::cli::apply_sweep_value(c, s.substr(0, eq), s.substr(eq + 1));
  }
  return c;
}

std::vector<rismac::cli::SweepAxis> parse_sweeps(const std::vector<std::string>& specs) {
  std::vector<rismac::cli::SweepAxis> axes;
  for (const auto& s : specs) axes.push_back(rismac::cli::parse_sweep(s));
  return axes;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rismac: RIS-assisted multi-user MAC analysis and simulation"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> sets;
  std::vector<std::string> sweeps;
  std::string out_path;
  int threads = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "key=value configuration file")->check(CLI::ExistingFile);
    sub->add_option("--set", sets, "override one key, e.g. --set K=50");
    sub->add_option("--sweep", sweeps, "sweep a key: K=10:100:10 or L=1,2,4 (repeatable)");
    sub->add_option("--threads", threads, "worker threads, 0 for all cores")->check(CLI::NonNegativeNumber);
  };

  auto* analyze = app.add_subcommand("analyze", "solve the contention model per sweep point");
  add_common(analyze);
  analyze->add_option("--out", out_path, "CSV output path (default stdout)");

  rismac::cli::SimulateOptions sim;
  std::string mode = "mdr-scmu";
  auto* simulate = app.add_subcommand("simulate", "run the frame-level simulator per sweep point");
  add_common(simulate);
  simulate->add_option("--out", out_path, "CSV output path (default stdout)");
  simulate->add_option("--mode", mode, "mdr-scmu, mdr-mcmu, csma-baseline or no-ris");
  simulate->add_option("--seeds", sim.seeds, "independent seeds per point")->check(CLI::PositiveNumber);
  simulate->add_option("--frames", sim.frames, "frames per seed")->check(CLI::PositiveNumber);
  simulate->add_option("--seed-base", sim.seed_base, "first seed");

  rismac::cli::FigureOptions fig;
  std::string figure;
  std::string fig_dir = ".";
  auto* figures = app.add_subcommand("figures", "write the CSV series for one evaluation figure");
  figures->add_option("id", figure, "7a, 7b, 7c, 8a, 8b, 8c, 9a or 9b")->required();
  figures->add_option("--config", config_path, "key=value configuration file")->check(CLI::ExistingFile);
  figures->add_option("--set", sets, "override one key, e.g. --set K=50");
  figures->add_option("--out", fig_dir, "output directory");
  figures->add_option("--frames", fig.frames, "frames per simulated point")->check(CLI::PositiveNumber);
  figures->add_option("--seeds", fig.seeds, "seeds per simulated point")->check(CLI::PositiveNumber);
  figures->add_option("--seed-base", fig.seed_base, "first seed");
  figures->add_option("--threads", threads, "worker threads, 0 for all cores")->check(CLI::NonNegativeNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    const rismac::SystemConfig base = base_config(config_path, sets);
    std::ofstream file;
    auto output = [&]() -> std::ostream& {
      if (out_path.empty()) return std::cout;
      file.open(out_path);
      if (!file) throw std::runtime_error("cannot write " + out_path);
      return file;
    };

    if (*analyze) {
      rismac::cli::AnalyzeOptions opts{parse_sweeps(sweeps), threads};
      rismac::cli::cmd_analyze(base, opts, output());
    } else if (*simulate) {
      sim.sweeps = parse_sweeps(sweeps);
      sim.mode = rismac::cli::parse_mode(mode);
      sim.threads = threads;
      rismac::cli::cmd_simulate(base, sim, output());
    } else if (*figures) {
      fig.threads = threads;
      fig.out_dir = fig_dir;
      for (const auto& path : rismac::cli::cmd_figures(figure, base, fig)) std::cout << path.string() << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "rismac: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
