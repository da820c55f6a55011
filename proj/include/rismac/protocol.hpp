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
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "rismac/channel.hpp"
#include "rismac/config.hpp"

namespace rismac {

using Rng = std::mt19937_64;

// ---------------------------------------------------------------------------
// Reservations and the AP ledger

struct Reservation {
  int user = -1;
  int T_ini = 0;    ///< first data slot
  int r = 0;        ///< data transmissions
  int T_cycle = 1;  ///< slots between consecutive transmissions
  int c = 0;        ///< sub-channel
  int l = 0;        ///< RIS group, equal to c
  double rho2 = 0.0;
  std::vector<double> theta;  ///< phases of the group's elements
  double snr = 0.0;

  int slot(int i) const { return T_ini + i * T_cycle; }
};

/// Per channel, per transmission slot: index of the owning reservation.
class ReservationLedger {
 public:
  ReservationLedger(int channels, int slots);

  int channels() const { return C_; }
  int slots() const { return S_; }

  /// True when every slot of the periodic pattern is inside the phase and free.
  bool is_free(int c, int T_ini, int r, int T_cycle) const;
  /// Number of leading pattern slots that are inside the phase and free.
  int free_prefix(int c, int T_ini, int r, int T_cycle) const;
  /// Throws std::logic_error when any slot is already owned.
  void commit(Reservation reservation);
  /// Owning user or -1.
  int owner(int c, int slot) const;
  const Reservation* at(int c, int slot) const;
  const std::vector<Reservation>& reservations() const { return reservations_; }
  int free_slots(int c) const;
  /// Re-derives occupancy from the reservation list and compares.
  bool conflict_free() const;
  void clear();

 private:
  int C_;
  int S_;
  std::vector<int> grid_;  // C_ * S_, -1 when free
  std::vector<Reservation> reservations_;
};

/// Largest count <= r whose pattern stays inside S slots.
int fit_count(int T_ini, int r, int T_cycle, int S);

// ---------------------------------------------------------------------------
// Control packets

enum class PacketKind { kErts, kEcts, kAck, kData };

struct EControlPacket {
  PacketKind kind = PacketKind::kErts;
  int sender = -1;  ///< requesting user; for eCTS the user addressed
  int T_ini = 0;
  int r = 0;
  int T_cycle = 1;
  int c = 0;  ///< MCMU only
  int l = 0;  ///< MCMU only
  double rho2 = 0.0;
  bool granted = false;  ///< eCTS: a reservation was committed
  double airtime = 0.0;
};

// ---------------------------------------------------------------------------
// User backoff

enum class Mode { kContention, kTransmission };

/// What the user observed in the previous virtual slot.
enum class SlotFeedback {
  kNone,      ///< nothing new (first tick)
  kIdle,      ///< idle backoff slot
  kBusy,      ///< another exchange occupied the medium
  kCollided,  ///< own eRTS collided
  kGranted,   ///< own eRTS answered by a granting eCTS
  kRejected,  ///< own eRTS answered without reservation
  kReleased,  ///< own reservation finished
};

struct UserState {
  Mode mode = Mode::kContention;
  int W = 0;
  int stage = 0;
  double nav_until = 0.0;  ///< seconds into the negotiation phase
  std::int64_t queue = 0;
  std::optional<Reservation> reservation;
};

struct BackoffParams {
  int W0 = 15;
  int m = 6;
};

enum class UserAction { kNone, kSendErts };

struct TickResult {
  UserState state;
  UserAction action = UserAction::kNone;
};

/// Draws W uniformly from [0, 2^stage W0 - 1].
int draw_backoff(int stage, const BackoffParams& params, Rng& rng);

/// One virtual slot of the backoff process.
TickResult user_tick(UserState state, SlotFeedback feedback, const BackoffParams& params, Rng& rng);

/// Extends the NAV for an overheard packet sent at `now`. An eRTS covers
/// eRTS + SIFS + eCTS. In MCMU a data packet only silences users reserved on
/// the same channel.
UserState nav_update(UserState state, const EControlPacket& packet, double now, const SystemConfig& config);

// ---------------------------------------------------------------------------
// AP

/// Phases, power and SNR for one user through one group (the whole surface
/// when C == 1).
struct LinkPlan {
  std::vector<double> theta;
  double rho2 = 0.0;
  double snr = 0.0;
};

LinkPlan plan_link(const ChannelRealization& channel, const SystemConfig& config, int group);
/// Direct link only at power P.
LinkPlan plan_direct(const ChannelRealization& channel, const SystemConfig& config);

/// Memoizes plan_link per (user, group); channels are static over a run.
class PhaseCache {
 public:
  /// With direct_only every plan is the direct link at power P.
  explicit PhaseCache(bool direct_only = false) : direct_only_(direct_only) {}
  const LinkPlan& get(const ChannelRealization& channel, const SystemConfig& config, int group);

 private:
  bool direct_only_;
  std::map<std::pair<int, int>, LinkPlan> plans_;
};

struct ApDecision {
  EControlPacket ects;
  std::optional<Reservation> committed;
};

/// Grants the requested pattern when free (count truncated to the phase).
/// On conflict a single-channel AP moves the start to the earliest slot with
/// the longest free pattern; a multi-channel AP replies without reservation.
ApDecision ap_handle_erts(ReservationLedger& ledger, const EControlPacket& erts, const ChannelRealization& channel,
                          const SystemConfig& config, PhaseCache* cache = nullptr);

// ---------------------------------------------------------------------------
// User-side ledger view and request construction

/// What one user knows of the ledger from overheard eCTS packets.
class LedgerView {
 public:
  LedgerView(int channels, int slots);
  void observe(const EControlPacket& ects);
  void clear();
  bool slot_free(int c, int slot) const;
  /// Earliest slot that is free in this view, or -1.
  int earliest_free(int c) const;
  int channels() const { return C_; }

 private:
  int C_;
  int S_;
  std::vector<char> taken_;
};

/// eRTS for a user: earliest free start on channel c, count min(queue, r_max).
EControlPacket make_erts(int user, const LedgerView& view, int c, std::int64_t queue, const SystemConfig& config);

// ---------------------------------------------------------------------------
// RIS controller

struct ControllerSetting {
  int channel = 0;
  int owner = -1;  ///< -1: neutral, the group does not reflect
  const Reservation* reservation = nullptr;
};

std::vector<ControllerSetting> controller_apply(const ReservationLedger& ledger, int slot);

// ---------------------------------------------------------------------------
// Trace

struct TraceEvent {
  int frame = 0;
  int slot = 0;  ///< virtual negotiation slot, or transmission slot
  int node = -1;  ///< user index, or -1 for the AP
  std::string kind;
  std::string fields;
};

using TraceFn = std::function<void(const TraceEvent&)>;

/// frame,slot,node,event,fields
std::string format_trace(const TraceEvent& event);

}  // namespace rismac
