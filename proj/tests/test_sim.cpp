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

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "rismac/config.hpp"
#include "rismac/protocol.hpp"
#include "rismac/sim.hpp"

using namespace rismac;

namespace {

bool same_stats(const FrameStats& a, const FrameStats& b) {
  return a.idle_slots == b.idle_slots && a.success_slots == b.success_slots &&
         a.collision_slots == b.collision_slots && a.virtual_slots == b.virtual_slots &&
         a.negotiation_time == b.negotiation_time && a.grants == b.grants && a.rejections == b.rejections &&
         a.data_tx == b.data_tx;
}

void check_same(const Metrics& a, const Metrics& b) {
  CHECK(a.frames == b.frames);
  CHECK(a.idle_slots == b.idle_slots);
  CHECK(a.success_slots == b.success_slots);
  CHECK(a.collision_slots == b.collision_slots);
  CHECK(a.erts_sent == b.erts_sent);
  CHECK(a.erts_collided == b.erts_collided);
  CHECK(a.data_tx == b.data_tx);
  CHECK(a.data_airtime == b.data_airtime);
  CHECK(a.capacity_bits == b.capacity_bits);
  CHECK(a.tx_power_sum == b.tx_power_sum);
  CHECK(a.snr_db_sum == b.snr_db_sum);
  CHECK(a.served_users == b.served_users);
  CHECK(a.occupancy == b.occupancy);
  REQUIRE(a.per_frame.size() == b.per_frame.size());
  for (std::size_t i = 0; i < a.per_frame.size(); ++i) CHECK(same_stats(a.per_frame[i], b.per_frame[i]));
}

SystemConfig small(int K) {
  SystemConfig c;
  c.K = K;
  return c;
}

}  // namespace

TEST_CASE("a single user never collides and gets data through") {
  const Metrics m = run(small(1), 3, 10);
  CHECK(m.collision_slots == 0);
  CHECK(m.erts_collided == 0);
  CHECK(m.zeta_c() == 0.0);
  CHECK(m.throughput() > 0.0);
  CHECK(m.served_per_frame() == doctest::Approx(1.0));
}

TEST_CASE("runs are deterministic in the seed") {
  for (int K : {5, 40}) {
    const Metrics a = run(small(K), 11, 8);
    const Metrics b = run(small(K), 11, 8);
    check_same(a, b);
  }
  const Metrics a = run(small(40), 11, 8);
  const Metrics c = run(small(40), 12, 8);
  CHECK(a.per_frame.size() == c.per_frame.size());
  bool differ = false;
  for (std::size_t i = 0; i < a.per_frame.size(); ++i) differ |= !same_stats(a.per_frame[i], c.per_frame[i]);
  CHECK(differ);
}

TEST_CASE("fast-forwarding idle runs does not change the outcome") {
  for (int C : {1, 2}) {
    SystemConfig c = small(30);
    c.C = c.L = C;
    RunOptions slow;
    slow.fast_forward = false;
    check_same(run(c, 5, 6), run(c, 5, 6, slow));
    check_same(run_baseline_csma(c, 5, 2), run_baseline_csma(c, 5, 2, slow));
  }
}

TEST_CASE("per-frame slot conservation and frequency invariants") {
  for (int K : {2, 20, 100}) {
    for (int C : {1, 4}) {
      SystemConfig c = small(K);
      c.C = c.L = C;
      const Metrics m = run(c, 7, 5);
      REQUIRE(m.frames == 5);
      for (const FrameStats& s : m.per_frame) {
        CHECK(s.idle_slots + s.success_slots + s.collision_slots == s.virtual_slots);
        CHECK(s.negotiation_time <= c.t_h + 1e-12);
      }
      CHECK(m.zeta_s() + m.zeta_e() + m.zeta_c() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(m.throughput() >= 0.0);
      CHECK(m.throughput() <= 1.0);
      CHECK(m.collision_probability() >= 0.0);
      CHECK(m.collision_probability() <= 1.0);
      const auto occ = m.occupancy_distribution();
      CHECK(occ.size() == static_cast<std::size_t>(C) + 1);
      CHECK(std::accumulate(occ.begin(), occ.end(), 0.0) == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("observer sees a consistent ledger every frame") {
  for (int C : {1, 2, 4}) {
    SystemConfig c = small(60);
    c.C = c.L = C;
    int frames = 0;
    RunOptions opt;
    opt.observer = [&](const FrameView& v) {
      ++frames;
      CHECK(v.ledger.conflict_free());
      for (const TransmissionRecord& t : v.transmissions) CHECK(v.ledger.owner(t.channel, t.slot) == t.user);
      int planned = 0;
      for (const Reservation& r : v.ledger.reservations()) {
        CHECK(r.r >= 1);
        CHECK(r.r <= c.r_max);
        CHECK(r.T_cycle == c.T_cycle);
        CHECK(r.slot(r.r - 1) < v.ledger.slots());
        planned += r.r;
      }
      CHECK(static_cast<int>(v.transmissions.size()) == planned);
      CHECK(v.stats.data_tx == planned);
    };
    run(c, 9, 4, opt);
    CHECK(frames == 4 + c.warmup_frames);
  }
}

TEST_CASE("transmission schedule expands reservations in slot order") {
  SystemConfig c;
  ReservationLedger empty(1, c.slots_per_phase());
  CHECK(transmission_phase_schedule(empty, c).empty());

  ReservationLedger ledger(2, 20);
  Reservation a;
  a.user = 4;
  a.T_ini = 1;
  a.r = 3;
  a.T_cycle = 4;
  ledger.commit(a);
  Reservation b = a;
  b.user = 7;
  b.c = b.l = 1;
  b.T_ini = 0;
  b.r = 2;
  b.T_cycle = 5;
  ledger.commit(b);
  const auto plan = transmission_phase_schedule(ledger, c);
  REQUIRE(plan.size() == 5);
  const int slots[] = {0, 1, 5, 5, 9};
  for (std::size_t i = 0; i < plan.size(); ++i) {
    CHECK(plan[i].slot == slots[i]);
    CHECK(plan[i].slot < ledger.slots());
    CHECK(ledger.owner(plan[i].channel, plan[i].slot) == plan[i].user);
  }
  CHECK(plan[2].channel == 0);
  CHECK(plan[3].channel == 1);
}

TEST_CASE("direct-only runs transmit at full power and lose the surface gain") {
  SystemConfig c = small(10);
  c.phase_bits = 0;
  c.path_mode = PathMode::kEqual;
  const Metrics ris = run(c, 2, 4);
  const Metrics direct = run_no_ris(c, 2, 4);
  REQUIRE(direct.data_tx > 0);
  CHECK(direct.mean_tx_power() == doctest::Approx(c.P).epsilon(1e-12));
  CHECK(ris.mean_tx_power() <= c.P * (1.0 + 1e-12));
  const double gap = ris.mean_snr_db() - direct.mean_snr_db();
  CHECK(gap == doctest::Approx(20.0 * std::log10(c.N + 1.0)).epsilon(0.02));
}

TEST_CASE("CSMA baseline airtime for one saturated user") {
  // Each exchange costs a backoff drawn from [0, W0], the handshake and one packet.
  SystemConfig c = small(1);
  const Metrics m = run_baseline_csma(c, 4, 10);
  const Timings t = derived_timings(c);
  const double best = c.t_p / (t.t_s + c.t_p);
  const double worst = c.t_p / (t.t_s + c.t_p + c.W0 * c.slot_time);
  CHECK(m.throughput() < best);
  CHECK(m.throughput() > worst);
  CHECK(m.collision_slots == 0);
  const double mean = c.t_p / (t.t_s + c.t_p + 0.5 * c.W0 * c.slot_time);
  CHECK(m.throughput() == doctest::Approx(mean).epsilon(0.02));
}

TEST_CASE("baseline ignores the channel split") {
  SystemConfig c = small(20);
  SystemConfig split = c;
  split.C = split.L = 4;
  check_same(run_baseline_csma(c, 8, 3), run_baseline_csma(split, 8, 3));
  CHECK(run_baseline_csma(split, 8, 3).channels == 1);
}

TEST_CASE("run_scheme dispatches") {
  SystemConfig c = small(15);
  check_same(run_scheme(Scheme::kMdr, c, 3, 3), run(c, 3, 3));
  check_same(run_scheme(Scheme::kNoRis, c, 3, 3), run_no_ris(c, 3, 3));
  check_same(run_scheme(Scheme::kCsmaBaseline, c, 3, 2), run_baseline_csma(c, 3, 2));
}

TEST_CASE("metrics merge by summation") {
  SystemConfig c = small(25);
  const Metrics a = run(c, 1, 3);
  const Metrics b = run(c, 2, 5);
  Metrics m = a;
  m.merge(b);
  CHECK(m.frames == 8);
  CHECK(m.data_tx == a.data_tx + b.data_tx);
  CHECK(m.erts_sent == a.erts_sent + b.erts_sent);
  CHECK(m.data_airtime == doctest::Approx(a.data_airtime + b.data_airtime));
  CHECK(m.per_frame.size() == 8);
  CHECK(m.occupancy[1] == a.occupancy[1] + b.occupancy[1]);
  CHECK(m.throughput() == doctest::Approx((a.data_airtime + b.data_airtime) / (8 * c.T)));
}

TEST_CASE("finite arrivals keep queues bounded by what arrived") {
  SystemConfig c = small(20);
  c.arrival_rate = 20.0;  // 4 packets per user per frame on average
  const Metrics m = run(c, 6, 10);
  const double frames_total = m.frames + c.warmup_frames;
  CHECK(m.data_tx > 0);
  CHECK(static_cast<double>(m.data_tx) < 1.5 * c.arrival_rate * c.T * c.K * frames_total);
}

TEST_CASE("invalid configurations are rejected") {
  SystemConfig c;
  c.K = 0;
  CHECK_THROWS_AS(run(c, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(run_baseline_csma(c, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(run_no_ris(c, 1, 1), std::invalid_argument);
  SystemConfig d;
  d.CW_max = 100;
  CHECK_THROWS_AS(run(d, 1, 1), std::invalid_argument);
}

TEST_CASE("served users grow with the channel split") {
  double prev = 0.0;
  for (int L : {1, 2, 4}) {
    SystemConfig c = small(100);
    c.C = c.L = L;
    const double served = run(c, 3, 4).served_per_frame();
    CHECK(served >= prev);
    prev = served;
  }
}
