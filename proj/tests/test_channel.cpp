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
#include <complex>
#include <random>
#include <sstream>
#include <vector>

#include "rismac/channel.hpp"
#include "rismac/phase_optimizer.hpp"

using namespace rismac;

namespace {

// Phases that line every reflected path up with the direct path.
RisConfiguration aligned(const ChannelRealization& ch) {
  std::vector<double> theta(ch.size());
  for (std::size_t n = 0; n < ch.size(); ++n) theta[n] = wrap_phase(std::arg(ch.h) - std::arg(ch.H[n] * ch.G[n]));
  return RisConfiguration::with_phases(theta);
}

SystemConfig ideal_config(int N) {
  SystemConfig c;
  c.N = N;
  c.A_x = N;
  c.A_y = 1;
  c.phase_bits = 0;
  c.path_mode = PathMode::kEqual;
  return c;
}

}  // namespace

TEST_CASE("placement distances") {
  const SystemConfig c;
  const Geometry g = geometry(c, 0);
  REQUIRE(g.d1.size() == 128);
  CHECK(g.d1[0] == doctest::Approx(55.036351623268).epsilon(1e-12));
  CHECK(g.d2[0] == 2.0);
  CHECK(g.d == 60.0);
  const double expect = wrap_phase(2 * kPi * (g.d1[0] + g.d2[0] - g.d) / c.lambda());
  CHECK(g.dphase[0] == doctest::Approx(expect));
  CHECK(g.far_field);  // 57.04 m against 60 m

  SystemConfig near = c;
  near.d = 10;
  CHECK_FALSE(geometry(near, 0).far_field);
}

TEST_CASE("degenerate geometry is rejected") {
  SystemConfig c;
  c.d_v = c.d;
  c.d_h = 0;
  CHECK_THROWS_AS(geometry(c, 0), std::invalid_argument);
  SystemConfig z;
  z.d = 0;
  CHECK_THROWS_AS(geometry(z, 0), std::invalid_argument);
  CHECK_THROWS(geometry(SystemConfig{}, 100));
}

TEST_CASE("free-space direct gain") {
  const SystemConfig c;
  const ChannelRealization ch = realize_channel(c, 0, 1);
  // lambda from c = 299792458 m/s; the rounded c = 3e8 gives 6.333e-9.
  CHECK(std::norm(ch.h) == doctest::Approx(6.3238151746038e-9).epsilon(1e-12));
  CHECK(std::norm(ch.h) == doctest::Approx(6.333e-9).epsilon(2e-3));
  CHECK(std::abs(ch.H[0] * ch.G[0]) ==
        doctest::Approx(c.lambda() / (4 * kPi * (ch.geom.d1[0] + ch.geom.d2[0]))).epsilon(1e-14));
}

TEST_CASE("realizations are reproducible") {
  SystemConfig c;
  const auto a = realize_channels(c, 3);
  const auto b = realize_channels(c, 99);
  CHECK(a[5].G == b[5].G);  // geometric mode ignores the seed

  c.channel_mode = ChannelMode::kRandomPhase;
  const auto r1 = realize_channel(c, 4, 11);
  const auto r2 = realize_channel(c, 4, 11);
  const auto r3 = realize_channel(c, 4, 12);
  CHECK(r1.G == r2.G);
  CHECK(r1.h == r2.h);
  CHECK(r1.G != r3.G);
  CHECK(std::abs(r1.G[0]) == doctest::Approx(std::abs(a[0].G[0])));
  // Phase offsets follow the drawn phases in this mode.
  CHECK(r1.geom.dphase[7] == doctest::Approx(wrap_phase(std::arg(r1.h) - std::arg(r1.H[7] * r1.G[7]))));
}

TEST_CASE("SNR of the direct link at reference power") {
  const SystemConfig c;
  const ChannelRealization ch = realize_channel(c, 0, 1);
  const cd rho = std::sqrt(c.P);
  const double s = snr_scmu(ch, RisConfiguration::off(ch.size()), rho, c.sigma2);
  CHECK(10 * std::log10(s) == doctest::Approx(3.0097916837234).epsilon(1e-10));
  CHECK(s == doctest::Approx(std::norm(ch.h * rho) / c.sigma2));
  CHECK_THROWS_AS(snr_scmu(ch, RisConfiguration::off(ch.size()), rho, 0.0), std::invalid_argument);
}

TEST_CASE("coherent gain of a 128-element surface") {
  const SystemConfig c = ideal_config(128);
  const ChannelRealization ch = realize_channel(c, 0, 1);
  const cd rho = std::sqrt(c.P);
  const double with_ris = snr_scmu(ch, aligned(ch), rho, c.sigma2);
  const double direct = snr_scmu(ch, RisConfiguration::off(ch.size()), rho, c.sigma2);
  CHECK(10 * std::log10(with_ris / direct) == doctest::Approx(20 * std::log10(129.0)).epsilon(1e-9));
  CHECK(with_ris == doctest::Approx(coherent_snr(ch.h, ch.H, ch.G, c.P, c.sigma2)).epsilon(1e-12));
}

TEST_CASE("group SNR") {
  SystemConfig c = ideal_config(128);
  c.A_x = 16;
  c.A_y = 8;
  const ChannelRealization ch = realize_channel(c, 0, 1);
  const cd rho = std::sqrt(c.P);

  SUBCASE("one group is the whole surface") {
    const auto ris = aligned(ch);
    CHECK(snr_mcmu(ch, c, 0, ris, rho, c.sigma2) == snr_scmu(ch, ris, rho, c.sigma2));
  }
  SUBCASE("two groups") {
    c.L = c.C = 2;
    for (int l = 0; l < 2; ++l) {
      const ChannelRealization g = group_channel(ch, c, l);
      CHECK(g.size() == 64);
      const double s = snr_mcmu(ch, c, l, aligned(g), rho, c.sigma2);
      const double direct = snr_mcmu(ch, c, l, RisConfiguration::off(64), rho, c.sigma2);
      CHECK(10 * std::log10(s / direct) == doctest::Approx(20 * std::log10(65.0)).epsilon(1e-9));
    }
  }
}

TEST_CASE("received power") {
  SUBCASE("empty surface is Friis") {
    SystemConfig c;
    c.N = 0;
    c.A_x = 0;
    c.A_y = 0;
    const ChannelRealization ch = realize_channel(c, 0, 1);
    const double amp = c.lambda() / (4 * kPi * c.d);
    CHECK(received_power(c, ch, RisConfiguration::off(0), c.P) == c.P * (amp * amp));
  }
  SUBCASE("matches the channel model") {
    const SystemConfig c;
    const ChannelRealization ch = realize_channel(c, 0, 1);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0, 2 * kPi);
    std::vector<double> theta(ch.size());
    for (auto& t : theta) t = u(rng);
    const auto ris = RisConfiguration::with_phases(theta);
    const double via_snr = snr_scmu(ch, ris, std::sqrt(c.P), 1.0);
    CHECK(received_power(c, ch, ris, c.P) == doctest::Approx(via_snr).epsilon(1e-10));
  }
  SUBCASE("N squared growth under alignment") {
    std::vector<double> xs, ys;
    for (int N = 8; N <= 1024; N += 8) {
      const SystemConfig c = ideal_config(N);
      const ChannelRealization ch = realize_channel(c, 0, 1);
      std::vector<double> theta(ch.size());
      for (std::size_t n = 0; n < ch.size(); ++n) theta[n] = ch.geom.dphase[n];
      const double g = received_power(c, ch, RisConfiguration::with_phases(theta), c.P);
      const double friis = c.P * std::pow(c.lambda() / (4 * kPi * c.d), 2);
      CHECK(g == doctest::Approx((N + 1.0) * (N + 1.0) * friis).epsilon(1e-9));
      xs.push_back(std::log(N));
      ys.push_back(std::log(g));
    }
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) mx += xs[i], my += ys[i];
    mx /= xs.size();
    my /= ys.size();
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) sxy += (xs[i] - mx) * (ys[i] - my), sxx += (xs[i] - mx) * (xs[i] - mx);
    CHECK(sxy / sxx == doctest::Approx(1.9798189024035).epsilon(1e-9));
  }
}

TEST_CASE("received power is invariant under a global rotation") {
  SystemConfig c;
  c.channel_mode = ChannelMode::kRandomPhase;
  ChannelRealization ch = realize_channel(c, 2, 9);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0, 2 * kPi);
  std::vector<double> theta(ch.size());
  for (auto& t : theta) t = u(rng);
  const double base = snr_scmu(ch, RisConfiguration::with_phases(theta), 1.0, 1.0);
  for (double rot : {0.3, 1.7, -2.2}) {
    ChannelRealization r = ch;
    r.h *= std::polar(1.0, rot);
    std::vector<double> t2 = theta;
    for (auto& t : t2) t += rot;
    CHECK(snr_scmu(r, RisConfiguration::with_phases(t2), 1.0, 1.0) == doctest::Approx(base).epsilon(1e-12));
  }
}

TEST_CASE("zero phases dominate on real positive channels") {
  const std::vector<cd> H{0.7, 1.1, 0.4, 0.9, 1.3, 0.2};
  const std::vector<cd> G{1.0, 0.5, 0.8, 0.3, 0.6, 1.2};
  const cd h = 0.9;
  for (int bits = 1; bits <= 3; ++bits) {
    const int psi = 1 << bits;
    const std::vector<double> zeros(H.size(), 0.0);
    const auto phi0 = RisConfiguration::with_phases(zeros).coefficients();
    const double best = snr(h, H, phi0, G, 1.0, 1.0);
    std::vector<int> idx(H.size(), 0);
    for (;;) {
      std::vector<double> theta(H.size());
      for (std::size_t n = 0; n < H.size(); ++n) theta[n] = 2 * kPi * idx[n] / psi;
      const auto phi = RisConfiguration::with_phases(theta).coefficients();
      CHECK(snr(h, H, phi, G, 1.0, 1.0) <= best * (1 + 1e-12));
      std::size_t k = 0;
      while (k < idx.size() && ++idx[k] == psi) idx[k++] = 0;
      if (k == idx.size()) break;
    }
  }
}

TEST_CASE("configuration feasibility") {
  CHECK(RisConfiguration::with_phases({0, kPi / 2, kPi}).feasible(2));
  CHECK_FALSE(RisConfiguration::with_phases({0.3}).feasible(2));
  CHECK(RisConfiguration::with_phases({0.3}).feasible(0));
  RisConfiguration r = RisConfiguration::with_phases({0.0});
  r.beta[0] = 0.5;
  CHECK_FALSE(r.feasible(0));
  for (const cd& phi : RisConfiguration::with_phases({0.1, 2.0, 5.0}).coefficients())
    CHECK(std::abs(phi) == doctest::Approx(1.0));
}

TEST_CASE("link power") {
  CHECK(total_link_power(0, 0, 0) == 0);
  CHECK(total_link_power(1e-3, 10e-3, 2e-11) == doctest::Approx(0.011 + 2e-11).epsilon(1e-15));
  CHECK(total_link_power_direct(3e-3, 2e-11) == doctest::Approx(3e-3 + 2e-11));
}

TEST_CASE("realization csv") {
  SystemConfig c;
  c.N = 4;
  c.A_x = 4;
  c.A_y = 1;
  std::ostringstream out;
  write_realization_csv(out, realize_channel(c, 0, 1));
  const std::string s = out.str();
  CHECK(s.rfind("n,d1,d2,dphase,abs_G,arg_G,abs_H,arg_H\n", 0) == 0);
  CHECK(std::count(s.begin(), s.end(), '\n') == 5);
}
