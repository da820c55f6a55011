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
#include <functional>
#include <span>
#include <vector>

#include "rismac/config.hpp"
#include "rismac/protocol.hpp"

namespace rismac {

enum class Scheme {
  kMdr,           ///< reservation MAC; single- or multi-channel by C
  kCsmaBaseline,  ///< RIS-assisted CSMA/CA, one handshake per packet
  kNoRis,         ///< reservation MAC over the direct link only
};

struct FrameStats {
  int idle_slots = 0;
  int success_slots = 0;
  int collision_slots = 0;
  int virtual_slots = 0;          ///< counted independently of the three above
  double negotiation_time = 0.0;  ///< busy + idle time spent in contention
  int grants = 0;
  int rejections = 0;
  int data_tx = 0;
};

struct TransmissionRecord {
  int channel = 0;
  int slot = 0;
  int user = -1;
};

struct FrameView {
  int frame = 0;
  const SystemConfig& config;
  const FrameStats& stats;
  const ReservationLedger& ledger;
  std::span<const TransmissionRecord> transmissions;
};

using FrameObserver = std::function<void(const FrameView&)>;

struct RunOptions {
  bool fast_forward = true;  ///< skip runs of idle slots in one step
  FrameObserver observer;    ///< called after every frame, warm-up included
  TraceFn trace;
};

/// Counters over the measured frames. Mergeable by summation.
struct Metrics {
  int frames = 0;
  int channels = 1;
  double elapsed = 0.0;
  std::int64_t idle_slots = 0;
  std::int64_t success_slots = 0;
  std::int64_t collision_slots = 0;
  std::int64_t erts_sent = 0;
  std::int64_t erts_collided = 0;
  std::int64_t data_tx = 0;
  double data_airtime = 0.0;
  double capacity_bits = 0.0;
  double tx_power_sum = 0.0;
  double snr_db_sum = 0.0;
  std::int64_t served_users = 0;
  std::vector<std::int64_t> occupancy;  ///< transmission slots with j busy channels
  std::vector<FrameStats> per_frame;

  std::int64_t negotiation_slots() const { return idle_slots + success_slots + collision_slots; }
  double zeta_s() const;
  double zeta_e() const;
  double zeta_c() const;
  double throughput() const;  ///< data airtime / (elapsed time * channels)
  double capacity_bps() const;
  double collision_probability() const;  ///< collided eRTS / sent eRTS
  double served_per_frame() const;
  double mean_tx_power() const;
  double mean_snr_db() const;
  std::vector<double> occupancy_distribution() const;

  void merge(const Metrics& other);
};

Metrics run(const SystemConfig& config, std::uint64_t seed, int n_frames, const RunOptions& options = {});
Metrics run_baseline_csma(const SystemConfig& config, std::uint64_t seed, int n_frames,
                          const RunOptions& options = {});
Metrics run_no_ris(const SystemConfig& config, std::uint64_t seed, int n_frames, const RunOptions& options = {});
Metrics run_scheme(Scheme scheme, const SystemConfig& config, std::uint64_t seed, int n_frames,
                   const RunOptions& options = {});

struct PlannedTransmission {
  int channel = 0;
  int slot = 0;
  int user = -1;
  double rho2 = 0.0;
  const std::vector<double>* theta = nullptr;
};

/// Expands every reservation into its periodic slots, ordered by (slot, channel).
std::vector<PlannedTransmission> transmission_phase_schedule(const ReservationLedger& ledger,
                                                             const SystemConfig& config);

}  // namespace rismac
