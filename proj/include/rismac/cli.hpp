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

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rismac/config.hpp"
#include "rismac/sim.hpp"

namespace rismac::cli {

/// One swept key: "K=10:100:10" (inclusive range) or "L=1,2,4".
struct SweepAxis {
  std::string key;
  std::vector<std::string> values;
};

using SweepPoint = std::vector<std::pair<std::string, std::string>>;

SweepAxis parse_sweep(std::string_view spec);
/// Cartesian product, first axis outermost. No axes gives one empty point;
/// an axis without values gives no points.
std::vector<SweepPoint> expand_sweeps(const std::vector<SweepAxis>& axes);

/// set_key plus the couplings a sweep needs to stay valid: t_h moves t_r so
/// the frame length is kept, L and C move together and reset the group shape,
/// and N without a matching grid becomes an N x 1 surface.
void apply_sweep_value(SystemConfig& config, std::string_view key, std::string_view value);
SystemConfig config_at(const SystemConfig& base, const SweepPoint& point);

enum class Mode { kMdrScmu, kMdrMcmu, kCsmaBaseline, kNoRis };
Mode parse_mode(std::string_view name);
std::string_view mode_name(Mode mode);
Scheme scheme_of(Mode mode);

struct AnalyzeOptions {
  std::vector<SweepAxis> sweeps;
  int threads = 0;  ///< 0: hardware concurrency
};

/// One row per sweep point. Non-converged points are flagged, not fatal.
void cmd_analyze(const SystemConfig& base, const AnalyzeOptions& options, std::ostream& out);

struct SimulateOptions {
  std::vector<SweepAxis> sweeps;
  Mode mode = Mode::kMdrScmu;
  int seeds = 5;
  int frames = 200;
  std::uint64_t seed_base = 1;
  int threads = 0;
};

/// Per point: one row per seed, then a mean row with standard errors.
void cmd_simulate(const SystemConfig& base, const SimulateOptions& options, std::ostream& out);

struct FigureOptions {
  int frames = 40;
  int seeds = 1;
  std::uint64_t seed_base = 1;
  int threads = 0;
  std::filesystem::path out_dir = ".";
};

/// Writes one CSV per curve plus manifest.json into out_dir and returns the
/// files written. Throws std::invalid_argument for an unknown figure id.
std::vector<std::filesystem::path> cmd_figures(std::string_view which, const SystemConfig& base,
                                               const FigureOptions& options);

/// Shortest round-trip decimal form.
std::string format_number(double value);

}  // namespace rismac::cli
