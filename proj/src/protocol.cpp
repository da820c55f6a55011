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

#include "rismac/protocol.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "rismac/phase_optimizer.hpp"

namespace rismac {

// ---------------------------------------------------------------------------
// Ledger

ReservationLedger::ReservationLedger(int channels, int slots) : C_(channels), S_(slots) {
  if (channels < 1 || slots < 0) throw std::invalid_argument("ReservationLedger: bad dimensions");
  grid_.assign(static_cast<std::size_t>(C_) * static_cast<std::size_t>(S_), -1);
}

int fit_count(int T_ini, int r, int T_cycle, int S) {
  if (T_ini < 0 || T_ini >= S || r < 1 || T_cycle < 1) return 0;
  return std::min(r, (S - 1 - T_ini) / T_cycle + 1);
}

int ReservationLedger::free_prefix(int c, int T_ini, int r, int T_cycle) const {
  if (c < 0 || c >= C_) return 0;
  const int n = fit_count(T_ini, r, T_cycle, S_);
  for (int i = 0; i < n; ++i) {
    const int s = T_ini + i * T_cycle;
    if (grid_[static_cast<std::size_t>(c * S_ + s)] != -1) return i;
  }
  return n;
}

bool ReservationLedger::is_free(int c, int T_ini, int r, int T_cycle) const {
  return r >= 1 && fit_count(T_ini, r, T_cycle, S_) == r && free_prefix(c, T_ini, r, T_cycle) == r;
}

void ReservationLedger::commit(Reservation res) {
  if (!is_free(res.c, res.T_ini, res.r, res.T_cycle))
    throw std::logic_error("ReservationLedger: reservation for user " + std::to_string(res.user) +
                           " overlaps an owned slot");
  const int index = static_cast<int>(reservations_.size());
  for (int i = 0; i < res.r; ++i) grid_[static_cast<std::size_t>(res.c * S_ + res.slot(i))] = index;
  reservations_.push_back(std::move(res));
}

const Reservation* ReservationLedger::at(int c, int slot) const {
  if (c < 0 || c >= C_ || slot < 0 || slot >= S_) return nullptr;
  const int idx = grid_[static_cast<std::size_t>(c * S_ + slot)];
  return idx < 0 ? nullptr : &reservations_[static_cast<std::size_t>(idx)];
}

int ReservationLedger::owner(int c, int slot) const {
  const Reservation* r = at(c, slot);
  return r ? r->user : -1;
}

int ReservationLedger::free_slots(int c) const {
  return static_cast<int>(std::count(grid_.begin() + c * S_, grid_.begin() + (c + 1) * S_, -1));
}

bool ReservationLedger::conflict_free() const {
  std::vector<int> rebuilt(grid_.size(), -1);
  for (std::size_t idx = 0; idx < reservations_.size(); ++idx) {
    const Reservation& r = reservations_[idx];
    if (r.c < 0 || r.c >= C_ || r.r < 1) return false;
    for (int i = 0; i < r.r; ++i) {
      const int s = r.slot(i);
      if (s < 0 || s >= S_) return false;
      auto& cell = rebuilt[static_cast<std::size_t>(r.c * S_ + s)];
      if (cell != -1) return false;
      cell = static_cast<int>(idx);
    }
  }
  return rebuilt == grid_;
}

void ReservationLedger::clear() {
  std::fill(grid_.begin(), grid_.end(), -1);
  reservations_.clear();
}

// ---------------------------------------------------------------------------
// Backoff

int draw_backoff(int stage, const BackoffParams& params, Rng& rng) {
  const int window = (1 << stage) * params.W0;
  return std::uniform_int_distribution<int>(0, window - 1)(rng);
}

TickResult user_tick(UserState s, SlotFeedback feedback, const BackoffParams& params, Rng& rng) {
  switch (feedback) {
    case SlotFeedback::kNone:
    case SlotFeedback::kBusy:
      break;
    case SlotFeedback::kIdle:
      if (s.mode == Mode::kContention && s.W > 0) --s.W;
      break;
    case SlotFeedback::kCollided:
      s.stage = std::min(s.stage + 1, params.m);
      s.W = draw_backoff(s.stage, params, rng);
      break;
    case SlotFeedback::kRejected:
      s.W = draw_backoff(s.stage, params, rng);
      break;
    case SlotFeedback::kGranted:
      s.mode = Mode::kTransmission;
      s.stage = 0;
      s.W = 0;
      break;
    case SlotFeedback::kReleased:
      s.mode = Mode::kContention;
      s.reservation.reset();
      s.stage = 0;
      s.W = draw_backoff(0, params, rng);
      break;
  }
  TickResult out{std::move(s), UserAction::kNone};
  if (out.state.mode == Mode::kContention && out.state.W == 0)
    out.action = UserAction::kSendErts;
  return out;
}

UserState nav_update(UserState s, const EControlPacket& p, double now, const SystemConfig& c) {
  double until = now;
  switch (p.kind) {
    case PacketKind::kErts:
      until = now + airtime(c.eRTS_bytes, c.B) + c.SIFS + airtime(c.eCTS_bytes, c.B);
      break;
    case PacketKind::kEcts:
      until = now + airtime(c.eCTS_bytes, c.B);
      break;
    case PacketKind::kAck:
      until = now + c.ack_time;
      break;
    case PacketKind::kData:
      // Other groups keep transmitting on their own sub-channels.
      if (c.C > 1 && (!s.reservation || s.reservation->c != p.c)) return s;
      until = now + c.t_p;
      break;
  }
  s.nav_until = std::max(s.nav_until, until);
  return s;
}

// ---------------------------------------------------------------------------
// AP

LinkPlan plan_link(const ChannelRealization& channel, const SystemConfig& c, int group) {
  LinkPlan plan;
  if (c.C == 1) {
    auto res = alternating_optimize(channel.h, channel.H, channel.G, c.P, c.P_RIS, 1, c.phase_bits, c.sigma2);
    plan.theta = std::move(res.theta);
    plan.rho2 = std::norm(res.rho);
    plan.snr = res.snr;
    return plan;
  }
  const ChannelRealization sub = group_channel(channel, c, group);
  auto res = alternating_optimize(sub.h, sub.H, sub.G, c.P, c.P_RIS, c.L, c.phase_bits, c.sigma2);
  plan.theta = std::move(res.theta);
  plan.rho2 = std::norm(res.rho);
  plan.snr = res.snr;
  return plan;
}

LinkPlan plan_direct(const ChannelRealization& channel, const SystemConfig& c) {
  return {{}, c.P, std::norm(channel.h) * c.P / c.sigma2};
}

const LinkPlan& PhaseCache::get(const ChannelRealization& channel, const SystemConfig& config, int group) {
  const auto key = std::make_pair(channel.user, group);
  auto it = plans_.find(key);
  if (it == plans_.end())
    it = plans_.emplace(key, direct_only_ ? plan_direct(channel, config) : plan_link(channel, config, group)).first;
  return it->second;
}

ApDecision ap_handle_erts(ReservationLedger& ledger, const EControlPacket& erts, const ChannelRealization& channel,
                          const SystemConfig& config, PhaseCache* cache) {
  ApDecision out;
  EControlPacket& ects = out.ects;
  ects.kind = PacketKind::kEcts;
  ects.sender = erts.sender;
  ects.T_ini = erts.T_ini;
  ects.r = 0;
  ects.T_cycle = erts.T_cycle;
  ects.c = erts.c;
  ects.l = erts.c;
  ects.airtime = airtime(config.eCTS_bytes, config.B);

  const bool malformed = erts.r < 1 || erts.r > config.r_max || erts.c < 0 || erts.c >= ledger.channels() ||
                         erts.T_cycle < 1 || erts.T_ini < 0 || erts.T_ini >= ledger.slots();
  if (malformed) return out;

  const int S = ledger.slots();
  int start = -1;
  int count = 0;
  const int requested = fit_count(erts.T_ini, erts.r, erts.T_cycle, S);
  if (requested >= 1 && ledger.is_free(erts.c, erts.T_ini, requested, erts.T_cycle)) {
    start = erts.T_ini;
    count = requested;
  } else if (config.C == 1) {
    // Earliest start holding the full count; failing that, the earliest
    // start with the longest free run of the pattern.
    int best_start = -1, best_count = 0;
    for (int s = 0; s < S; ++s) {
      const int n = ledger.free_prefix(erts.c, s, erts.r, erts.T_cycle);
      if (n == erts.r) {
        best_start = s;
        best_count = n;
        break;
      }
      if (n > best_count) {
        best_start = s;
        best_count = n;
      }
    }
    start = best_start;
    count = best_count;
  }
  if (start < 0 || count < 1) return out;

  LinkPlan local;
  const LinkPlan* plan = nullptr;
  if (cache) {
    plan = &cache->get(channel, config, erts.c);
  } else {
    local = plan_link(channel, config, erts.c);
    plan = &local;
  }
  Reservation res;
  res.user = erts.sender;
  res.T_ini = start;
  res.r = count;
  res.T_cycle = erts.T_cycle;
  res.c = erts.c;
  res.l = erts.c;
  res.rho2 = plan->rho2;
  res.theta = plan->theta;
  res.snr = plan->snr;
  ledger.commit(res);

  ects.T_ini = start;
  ects.r = count;
  ects.rho2 = res.rho2;
  ects.granted = true;
  out.committed = std::move(res);
  return out;
}

// ---------------------------------------------------------------------------
// User view

LedgerView::LedgerView(int channels, int slots) : C_(channels), S_(slots) {
  taken_.assign(static_cast<std::size_t>(C_) * static_cast<std::size_t>(S_), 0);
}

void LedgerView::observe(const EControlPacket& ects) {
  if (ects.kind != PacketKind::kEcts || !ects.granted || ects.c < 0 || ects.c >= C_) return;
  for (int i = 0; i < ects.r; ++i) {
    const int s = ects.T_ini + i * ects.T_cycle;
    if (s >= 0 && s < S_) taken_[static_cast<std::size_t>(ects.c * S_ + s)] = 1;
  }
}

void LedgerView::clear() { std::fill(taken_.begin(), taken_.end(), 0); }

bool LedgerView::slot_free(int c, int slot) const { return taken_[static_cast<std::size_t>(c * S_ + slot)] == 0; }

int LedgerView::earliest_free(int c) const {
  for (int s = 0; s < S_; ++s)
    if (slot_free(c, s)) return s;
  return -1;
}

EControlPacket make_erts(int user, const LedgerView& view, int c, std::int64_t queue, const SystemConfig& config) {
  EControlPacket p;
  p.kind = PacketKind::kErts;
  p.sender = user;
  p.T_ini = std::max(0, view.earliest_free(c));
  p.r = static_cast<int>(std::clamp<std::int64_t>(queue, 1, config.r_max));
  p.T_cycle = config.T_cycle;
  p.c = c;
  p.l = c;
  p.airtime = airtime(config.eRTS_bytes, config.B);
  return p;
}

// ---------------------------------------------------------------------------
// Controller and trace

std::vector<ControllerSetting> controller_apply(const ReservationLedger& ledger, int slot) {
  std::vector<ControllerSetting> out(static_cast<std::size_t>(ledger.channels()));
  for (int c = 0; c < ledger.channels(); ++c) {
    auto& setting = out[static_cast<std::size_t>(c)];
    setting.channel = c;
    setting.reservation = ledger.at(c, slot);
    setting.owner = setting.reservation ? setting.reservation->user : -1;
  }
  return out;
}

std::string format_trace(const TraceEvent& e) {
  std::ostringstream os;
  os << e.frame << ',' << e.slot << ',' << e.node << ',' << e.kind << ',' << e.fields;
  return os.str();
}

}  // namespace rismac
