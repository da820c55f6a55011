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
#include <iosfwd>
#include <optional>
#include <utility>
#include <string>
#include <string_view>
#include <vector>

namespace rismac {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s
inline constexpr double kPi = 3.14159265358979323846;

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);

enum class ChannelMode { kGeometricLos, kRandomPhase };
// kExact uses the placed distances; kEqual forces d1 + d2 = d for every element.
enum class PathMode { kExact, kEqual };

/// Every scenario parameter of the RIS-assisted uplink. Times are in seconds,
/// powers in watts, frequencies in hertz. Defaults reproduce the reference
/// evaluation scenario (K=100, N=128 as a 16x8 surface, 5 GHz, 200 ms frames).
struct SystemConfig {
  // Population and surface.
  int K = 100;  ///< users
  int N = 128;  ///< RIS elements
  int L = 1;    ///< RIS groups
  int C = 1;    ///< sub-channels
  int A_x = 16, A_y = 8;  ///< surface grid, A_x * A_y == N
  int l_x = 0, l_y = 0;   ///< group shape; 0 means derive from (A, L)

  // Radio.
  double B = 10e6;
  double f_c = 5e9;
  double P = dbm_to_watts(5.0);  ///< reference transmit power
  double P_RIS = 0.0;            ///< RIS static power
  double sigma2 = dbm_to_watts(-80.0);
  int phase_bits = 2;  ///< b; 0 selects continuous phases

  // Geometry.
  double d = 60.0;
  double d_h = 2.0;
  double d_v = 5.0;
  ChannelMode channel_mode = ChannelMode::kGeometricLos;
  PathMode path_mode = PathMode::kExact;

  // Timing.
  double T = 0.2;
  double t_h = 0.02;
  double t_r = 0.18;
  double t_p = 0.5e-3;
  int T_cycle = 18;  ///< data-transmission slots between consecutive reserved slots
  int r_max = 20;
  double SIFS = 10e-6;
  double DIFS = 50e-6;
  double slot_time = 20e-6;  ///< idle backoff slot (delta)
  double ack_time = 0.0;     ///< ACK airtime added to each data slot
  int eRTS_bytes = 24;
  int eCTS_bytes = 16;

  // Backoff.
  int W0 = 15;
  int m = 6;
  int CW_max = 960;  ///< must equal 2^m * W0

  // Simulation.
  int warmup_frames = 2;
  double arrival_rate = 0.0;   ///< packets/s per user; 0 means saturated queues
  double overhear_loss = 0.0;  ///< probability a user misses an overheard eCTS

  // Derived.
  double lambda() const { return kSpeedOfLight / f_c; }
  int psi() const { return phase_bits > 0 ? (1 << phase_bits) : 0; }
  double delta_theta() const;  ///< 2*pi/Psi, 0 in continuous mode
  int elements_per_group() const { return L > 0 ? N / L : 0; }
  int slots_per_phase() const;  ///< floor(t_r / t_p), the transmission slot grid
  double T_cycle_seconds() const { return T_cycle * t_p; }
  double transmission_budget(int groups) const { return P - P_RIS / groups; }
};

/// Airtimes of a successful and a collided negotiation.
struct Timings {
  double t_s = 0.0;
  double t_c = 0.0;
};

double airtime(int bytes, double bandwidth);
Timings derived_timings(const SystemConfig& config);

struct Violation {
  std::string label;    ///< constraint label (C1..C14) or "structure"
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  bool has(std::string_view label) const;
  std::string to_string() const;
};

ValidationReport validate(const SystemConfig& config);

/// C5 (single channel) or C11 (multi-channel): (t_p/t_s) r_max zeta_s <= t_r/t_h.
/// Needs a solved success probability, so it is separate from validate().
std::optional<Violation> check_negotiation_balance(const SystemConfig& config, double zeta_s);

/// Group shape (l_x, l_y) obtained by halving the longer side of the surface
/// until L groups remain; ties halve y. Returns nullopt when L does not tile A.
std::optional<std::pair<int, int>> default_group_shape(int A_x, int A_y, int L);

/// Element indices of group `l` (0-based), row-major over the A_x x A_y grid.
/// Falls back to contiguous blocks of N/L when no rectangular tiling exists.
std::vector<int> group_members(const SystemConfig& config, int l);

// Key=value text format. Unknown keys and malformed values throw
// std::invalid_argument naming the line.
void set_key(SystemConfig& config, std::string_view key, std::string_view value);
SystemConfig parse_config(std::istream& in);
SystemConfig load_config(const std::string& path);
void write_config(std::ostream& out, const SystemConfig& config);

}  // namespace rismac
