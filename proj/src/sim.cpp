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

#include "rismac/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace rismac {

// ---------------------------------------------------------------------------
// Metrics

namespace {

double ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

}  // namespace

double Metrics::zeta_s() const { return ratio(static_cast<double>(success_slots), static_cast<double>(negotiation_slots())); }
double Metrics::zeta_e() const { return ratio(static_cast<double>(idle_slots), static_cast<double>(negotiation_slots())); }
double Metrics::zeta_c() const { return ratio(static_cast<double>(collision_slots), static_cast<double>(negotiation_slots())); }
double Metrics::throughput() const { return ratio(data_airtime, elapsed * channels); }
double Metrics::capacity_bps() const { return ratio(capacity_bits, elapsed); }
double Metrics::collision_probability() const {
  return ratio(static_cast<double>(erts_collided), static_cast<double>(erts_sent));
}
double Metrics::served_per_frame() const { return ratio(static_cast<double>(served_users), frames); }
double Metrics::mean_tx_power() const { return ratio(tx_power_sum, static_cast<double>(data_tx)); }
double Metrics::mean_snr_db() const { return ratio(snr_db_sum, static_cast<double>(data_tx)); }

std::vector<double> Metrics::occupancy_distribution() const {
  std::vector<double> dist(occupancy.size(), 0.0);
  std::int64_t total = 0;
  for (auto n : occupancy) total += n;
  for (std::size_t j = 0; j < occupancy.size(); ++j) dist[j] = ratio(static_cast<double>(occupancy[j]), static_cast<double>(total));
  return dist;
}

void Metrics::merge(const Metrics& o) {
  frames += o.frames;
  elapsed += o.elapsed;
  idle_slots += o.idle_slots;
  success_slots += o.success_slots;
  collision_slots += o.collision_slots;
  erts_sent += o.erts_sent;
  erts_collided += o.erts_collided;
  data_tx += o.data_tx;
  data_airtime += o.data_airtime;
  capacity_bits += o.capacity_bits;
  tx_power_sum += o.tx_power_sum;
  snr_db_sum += o.snr_db_sum;
  served_users += o.served_users;
  if (occupancy.size() < o.occupancy.size()) occupancy.resize(o.occupancy.size(), 0);
  for (std::size_t j = 0; j < o.occupancy.size(); ++j) occupancy[j] += o.occupancy[j];
  per_frame.insert(per_frame.end(), o.per_frame.begin(), o.per_frame.end());
}

std::vector<PlannedTransmission> transmission_phase_schedule(const ReservationLedger& ledger, const SystemConfig&) {
  std::vector<PlannedTransmission> plan;
  for (const Reservation& r : ledger.reservations())
    for (int i = 0; i < r.r; ++i) plan.push_back({r.c, r.slot(i), r.user, r.rho2, &r.theta});
  std::sort(plan.begin(), plan.end(), [](const PlannedTransmission& a, const PlannedTransmission& b) {
    return a.slot != b.slot ? a.slot < b.slot : a.channel < b.channel;
  });
  return plan;
}

// ---------------------------------------------------------------------------
// Engine

namespace {

constexpr std::int64_t kSaturated = std::numeric_limits<std::int64_t>::max() / 4;

class Engine {
 public:
  Engine(const SystemConfig& config, std::uint64_t seed, const RunOptions& options, bool direct_only)
      : config_(config),
        options_(options),
        timings_(derived_timings(config)),
        rng_(seed),
        channels_(realize_channels(config, seed)),
        cache_(direct_only),
        ledger_(config.C, config.slots_per_phase()),
        params_{config.W0, config.m} {
    const auto K = static_cast<std::size_t>(config.K);
    users_.resize(K);
    views_.assign(K, LedgerView(config.C, config.slots_per_phase()));
    excluded_.assign(K, std::vector<char>(static_cast<std::size_t>(config.C), 0));
    for (auto& u : users_) {
      u.W = draw_backoff(0, params_, rng_);
      u.queue = config.arrival_rate > 0.0 ? 0 : kSaturated;
    }
    metrics_.channels = config.C;
    metrics_.occupancy.assign(static_cast<std::size_t>(config.C) + 1, 0);
  }

  Metrics run_mdr(int n_frames) {
    const int total = config_.warmup_frames + n_frames;
    for (int f = 0; f < total; ++f) mdr_frame(f, f >= config_.warmup_frames);
    return metrics_;
  }

  Metrics run_csma(int n_frames) {
    const int total = config_.warmup_frames + n_frames;
    metrics_.occupancy.clear();
    for (int f = 0; f < total; ++f) csma_frame(f, f >= config_.warmup_frames);
    return metrics_;
  }

 private:
  void trace(int frame, int slot, int node, const char* kind, const std::string& fields = {}) {
    if (options_.trace) options_.trace({frame, slot, node, kind, fields});
  }

  void arrivals() {
    if (config_.arrival_rate <= 0.0) return;
    std::poisson_distribution<std::int64_t> dist(config_.arrival_rate * config_.T);
    for (auto& u : users_) u.queue += dist(rng_);
  }

  bool has_room(std::size_t k) const {
    for (int c = 0; c < config_.C; ++c)
      if (!excluded_[k][static_cast<std::size_t>(c)] && views_[k].earliest_free(c) >= 0) return true;
    return false;
  }

  std::vector<std::size_t> eligible_users() const {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < users_.size(); ++k) {
      const UserState& u = users_[k];
      if (u.mode == Mode::kContention && u.queue > 0 && has_room(k)) out.push_back(k);
    }
    return out;
  }

  int pick_channel(std::size_t k) {
    if (config_.C == 1) return 0;
    std::vector<int> candidates;
    for (int c = 0; c < config_.C; ++c)
      if (!excluded_[k][static_cast<std::size_t>(c)] && views_[k].earliest_free(c) >= 0) candidates.push_back(c);
    return candidates[std::uniform_int_distribution<std::size_t>(0, candidates.size() - 1)(rng_)];
  }

  // Derived from the counters so that fast-forwarding gives bit-identical times.
  double elapsed(const FrameStats& s, double success) const {
    return s.idle_slots * config_.slot_time + s.success_slots * success + s.collision_slots * timings_.t_c;
  }

  void tick(std::size_t k, SlotFeedback fb) { users_[k] = user_tick(std::move(users_[k]), fb, params_, rng_).state; }

  // Idle slots until a counter reaches zero, the phase ends, or `limit`.
  // Returns the number of idle slots consumed.
  int idle_run(const std::vector<std::size_t>& eligible, double time_left, int frame, int vslot) {
    const int fit = static_cast<int>(std::floor(time_left / config_.slot_time + 1e-9));
    if (fit <= 0) return 0;
    int k = 1;
    if (options_.fast_forward) {
      k = std::numeric_limits<int>::max();
      for (auto u : eligible) k = std::min(k, users_[u].W);
      k = std::max(k, 1);
    }
    k = std::min(k, fit);
    if (options_.fast_forward) {
      for (auto u : eligible) users_[u].W -= k;
    } else {
      for (auto u : eligible) tick(u, SlotFeedback::kIdle);
    }
    if (options_.trace) trace(frame, vslot, -1, "idle", std::to_string(k));
    return k;
  }

  void mdr_frame(int frame, bool measured) {
    arrivals();
    ledger_.clear();
    for (auto& v : views_) v.clear();
    for (auto& e : excluded_) std::fill(e.begin(), e.end(), 0);

    FrameStats stats;
    std::int64_t erts_sent = 0, erts_collided = 0;
    std::vector<char> served(users_.size(), 0);
    int served_count = 0;
    double t = 0.0;
    int vslot = 0;

    while (true) {
      const auto eligible = eligible_users();
      if (eligible.empty()) break;
      std::vector<std::size_t> senders;
      for (auto u : eligible)
        if (users_[u].W == 0) senders.push_back(u);

      if (senders.empty()) {
        const int k = idle_run(eligible, config_.t_h - t, frame, vslot);
        if (k == 0) break;
        stats.idle_slots += k;
        stats.virtual_slots += k;
        vslot += k;
        t = elapsed(stats, timings_.t_s);
        continue;
      }
      const double need = senders.size() == 1 ? timings_.t_s : timings_.t_c;
      if (t + need > config_.t_h + 1e-12) break;

      if (senders.size() > 1) {
        for (auto u : senders) {
          tick(u, SlotFeedback::kCollided);
          if (options_.trace) trace(frame, vslot, static_cast<int>(u), "collision");
        }
        erts_sent += static_cast<std::int64_t>(senders.size());
        erts_collided += static_cast<std::int64_t>(senders.size());
        ++stats.collision_slots;
      } else {
        const std::size_t u = senders.front();
        const int c = pick_channel(u);
        const EControlPacket erts = make_erts(static_cast<int>(u), views_[u], c, users_[u].queue, config_);
        if (options_.trace) {
          std::ostringstream os;
          os << "c=" << c << ";T_ini=" << erts.T_ini << ";r=" << erts.r;
          trace(frame, vslot, static_cast<int>(u), "erts", os.str());
        }
        ApDecision d = ap_handle_erts(ledger_, erts, channels_[u], config_, &cache_);
        ++erts_sent;
        ++stats.success_slots;
        if (d.committed) {
          tick(u, SlotFeedback::kGranted);
          users_[u].reservation = d.committed;
          users_[u].queue -= d.committed->r;
          ++stats.grants;
          if (!served[u]) {
            served[u] = 1;
            ++served_count;
          }
        } else {
          tick(u, SlotFeedback::kRejected);
          excluded_[u][static_cast<std::size_t>(c)] = 1;
          ++stats.rejections;
        }
        if (options_.trace) {
          std::ostringstream os;
          os << "granted=" << d.ects.granted << ";c=" << d.ects.c << ";T_ini=" << d.ects.T_ini << ";r=" << d.ects.r
             << ";rho2=" << d.ects.rho2;
          trace(frame, vslot, -1, "ects", os.str());
        }
        views_[u].observe(d.ects);
        for (std::size_t v = 0; v < users_.size(); ++v) {
          if (v == u) continue;
          users_[v] = nav_update(std::move(users_[v]), erts, t, config_);
          const bool heard = config_.overhear_loss <= 0.0 ||
                             std::uniform_real_distribution<double>(0.0, 1.0)(rng_) >= config_.overhear_loss;
          if (heard) views_[v].observe(d.ects);
        }
      }
      ++stats.virtual_slots;
      ++vslot;
      t = elapsed(stats, timings_.t_s);
    }
    stats.negotiation_time = t;

    // Transmission phase.
    std::vector<TransmissionRecord> tx;
    std::vector<std::int64_t> occupancy(static_cast<std::size_t>(config_.C) + 1, 0);
    double airtime = 0.0, bits = 0.0, power = 0.0, snr_db = 0.0;
    const double band = config_.B / config_.C;
    for (int s = 0; s < ledger_.slots(); ++s) {
      int busy = 0;
      for (const ControllerSetting& set : controller_apply(ledger_, s)) {
        if (set.owner < 0) continue;
        ++busy;
        tx.push_back({set.channel, s, set.owner});
        airtime += config_.t_p;
        bits += band * std::log2(1.0 + set.reservation->snr) * config_.t_p;
        power += set.reservation->rho2;
        snr_db += 10.0 * std::log10(set.reservation->snr);
        if (options_.trace) trace(frame, s, set.owner, "tx", "c=" + std::to_string(set.channel));
      }
      ++occupancy[static_cast<std::size_t>(busy)];
    }
    stats.data_tx = static_cast<int>(tx.size());

    for (std::size_t k = 0; k < users_.size(); ++k) {
      if (users_[k].mode == Mode::kTransmission) {
        tick(k, SlotFeedback::kReleased);
        if (options_.trace) trace(frame, ledger_.slots(), static_cast<int>(k), "release");
      }
      users_[k].nav_until = 0.0;
    }

    if (options_.observer) options_.observer(FrameView{frame, config_, stats, ledger_, tx});
    if (!measured) return;
    metrics_.frames += 1;
    metrics_.elapsed += config_.T;
    metrics_.idle_slots += stats.idle_slots;
    metrics_.success_slots += stats.success_slots;
    metrics_.collision_slots += stats.collision_slots;
    metrics_.erts_sent += erts_sent;
    metrics_.erts_collided += erts_collided;
    metrics_.data_tx += stats.data_tx;
    metrics_.data_airtime += airtime;
    metrics_.capacity_bits += bits;
    metrics_.tx_power_sum += power;
    metrics_.snr_db_sum += snr_db;
    metrics_.served_users += served_count;
    for (std::size_t j = 0; j < occupancy.size(); ++j) metrics_.occupancy[j] += occupancy[j];
    metrics_.per_frame.push_back(stats);
  }

  // Plain CSMA/CA over the whole frame: every packet pays its own handshake
  // and the surface is configured per transmission.
  void csma_frame(int frame, bool measured) {
    arrivals();
    FrameStats stats;
    std::int64_t erts_sent = 0, erts_collided = 0;
    std::vector<char> served(users_.size(), 0);
    int served_count = 0;
    double airtime = 0.0, bits = 0.0, power = 0.0, snr_db = 0.0;
    double t = 0.0;
    int vslot = 0;
    const double exchange = timings_.t_s + config_.t_p + config_.ack_time;

    while (true) {
      std::vector<std::size_t> eligible;
      for (std::size_t k = 0; k < users_.size(); ++k)
        if (users_[k].queue > 0) eligible.push_back(k);
      if (eligible.empty()) break;
      std::vector<std::size_t> senders;
      for (auto u : eligible)
        if (users_[u].W == 0) senders.push_back(u);
      if (senders.empty()) {
        const int k = idle_run(eligible, config_.T - t, frame, vslot);
        if (k == 0) break;
        stats.idle_slots += k;
        stats.virtual_slots += k;
        vslot += k;
        t = elapsed(stats, exchange);
        continue;
      }
      const double need = senders.size() == 1 ? exchange : timings_.t_c;
      if (t + need > config_.T + 1e-12) break;
      if (senders.size() > 1) {
        for (auto u : senders) tick(u, SlotFeedback::kCollided);
        erts_sent += static_cast<std::int64_t>(senders.size());
        erts_collided += static_cast<std::int64_t>(senders.size());
        ++stats.collision_slots;
        if (options_.trace) trace(frame, vslot, -1, "collision", std::to_string(senders.size()));
      } else {
        const std::size_t u = senders.front();
        const LinkPlan& plan = cache_.get(channels_[u], config_, 0);
        ++erts_sent;
        ++stats.success_slots;
        ++stats.data_tx;
        airtime += config_.t_p;
        bits += config_.B * std::log2(1.0 + plan.snr) * config_.t_p;
        power += plan.rho2;
        snr_db += 10.0 * std::log10(plan.snr);
        --users_[u].queue;
        if (!served[u]) {
          served[u] = 1;
          ++served_count;
        }
        tick(u, SlotFeedback::kReleased);  // back to stage 0 with a fresh counter
        if (options_.trace) trace(frame, vslot, static_cast<int>(u), "tx");
      }
      ++stats.virtual_slots;
      ++vslot;
      t = elapsed(stats, exchange);
    }
    stats.negotiation_time = t;

    if (!measured) return;
    metrics_.frames += 1;
    metrics_.elapsed += config_.T;
    metrics_.idle_slots += stats.idle_slots;
    metrics_.success_slots += stats.success_slots;
    metrics_.collision_slots += stats.collision_slots;
    metrics_.erts_sent += erts_sent;
    metrics_.erts_collided += erts_collided;
    metrics_.data_tx += stats.data_tx;
    metrics_.data_airtime += airtime;
    metrics_.capacity_bits += bits;
    metrics_.tx_power_sum += power;
    metrics_.snr_db_sum += snr_db;
    metrics_.served_users += served_count;
    metrics_.per_frame.push_back(stats);
  }

  SystemConfig config_;
  RunOptions options_;
  Timings timings_;
  Rng rng_;
  std::vector<ChannelRealization> channels_;
  PhaseCache cache_;
  ReservationLedger ledger_;
  BackoffParams params_;
  std::vector<UserState> users_;
  std::vector<LedgerView> views_;
  std::vector<std::vector<char>> excluded_;
  Metrics metrics_;
};

void require_valid(const SystemConfig& config) {
  const ValidationReport report = validate(config);
  if (!report.ok()) throw std::invalid_argument("invalid configuration: " + report.to_string());
}

}  // namespace

Metrics run(const SystemConfig& config, std::uint64_t seed, int n_frames, const RunOptions& options) {
  require_valid(config);
  return Engine(config, seed, options, false).run_mdr(n_frames);
}

Metrics run_no_ris(const SystemConfig& config, std::uint64_t seed, int n_frames, const RunOptions& options) {
  require_valid(config);
  return Engine(config, seed, options, true).run_mdr(n_frames);
}

Metrics run_baseline_csma(const SystemConfig& config, std::uint64_t seed, int n_frames, const RunOptions& options) {
  require_valid(config);
  SystemConfig single = config;
  single.C = 1;
  single.L = 1;
  single.l_x = single.l_y = 0;
  return Engine(single, seed, options, false).run_csma(n_frames);
}

Metrics run_scheme(Scheme scheme, const SystemConfig& config, std::uint64_t seed, int n_frames,
                   const RunOptions& options) {
  switch (scheme) {
    case Scheme::kMdr:
      return run(config, seed, n_frames, options);
    case Scheme::kCsmaBaseline:
      return run_baseline_csma(config, seed, n_frames, options);
    case Scheme::kNoRis:
      return run_no_ris(config, seed, n_frames, options);
  }
  return {};
}

}  // namespace rismac
