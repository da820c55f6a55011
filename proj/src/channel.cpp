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

#include "rismac/channel.hpp"

#include <cmath>
#include <ostream>
#include <random>
#include <stdexcept>

#include "rismac/kernels.hpp"

namespace rismac {

double wrap_phase(double theta) {
  double w = std::fmod(theta, 2.0 * kPi);
  if (w < 0.0) w += 2.0 * kPi;
  if (w >= 2.0 * kPi) w = 0.0;
  return w;
}

Geometry geometry(const SystemConfig& c, int k) {
  if (k < 0 || k >= c.K) throw std::out_of_range("geometry: user index out of range");
  if (!(c.d > 0.0)) throw std::invalid_argument("geometry: user-AP distance must be positive");
  const double d2 = c.d_h;
  double d1 = std::hypot(c.d_h, c.d - c.d_v);
  if (c.path_mode == PathMode::kEqual) d1 = c.d - d2;
  if (!(d1 > 0.0)) throw std::invalid_argument("geometry: user and RIS are co-located");

  Geometry g;
  g.d = c.d;
  const auto n = static_cast<std::size_t>(c.N);
  g.d1.assign(n, d1);
  g.d2.assign(n, d2);
  g.dphase.assign(n, wrap_phase(2.0 * kPi * (d1 + d2 - c.d) / c.lambda()));
  g.far_field = std::abs(d1 + d2 - c.d) <= 0.05 * c.d;
  return g;
}

ChannelRealization realize_channel(const SystemConfig& c, int k, std::uint64_t seed) {
  ChannelRealization ch;
  ch.user = k;
  ch.geom = geometry(c, k);
  const double lambda = c.lambda();
  const auto n = static_cast<std::size_t>(c.N);
  ch.G.resize(n);
  ch.H.resize(n);

  // The cascade amplitude is split evenly between the two hops so that the
  // product H G equals the free-space factor of the reflected path.
  if (c.channel_mode == ChannelMode::kGeometricLos) {
    ch.h = std::polar(lambda / (4.0 * kPi * c.d), -2.0 * kPi * c.d / lambda);
    for (std::size_t i = 0; i < n; ++i) {
      const double d1 = ch.geom.d1[i], d2 = ch.geom.d2[i];
      const double amp = std::sqrt(lambda / (4.0 * kPi * (d1 + d2)));
      ch.G[i] = std::polar(amp, -2.0 * kPi * d1 / lambda);
      ch.H[i] = std::polar(amp, -2.0 * kPi * d2 / lambda);
    }
    return ch;
  }

  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(k), 0x5249u};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
  ch.h = std::polar(lambda / (4.0 * kPi * c.d), phase(rng));
  for (std::size_t i = 0; i < n; ++i) {
    const double amp = std::sqrt(lambda / (4.0 * kPi * (ch.geom.d1[i] + ch.geom.d2[i])));
    ch.G[i] = std::polar(amp, phase(rng));
    ch.H[i] = std::polar(amp, phase(rng));
    ch.geom.dphase[i] = wrap_phase(std::arg(ch.h) - std::arg(ch.H[i] * ch.G[i]));
  }
  return ch;
}

std::vector<ChannelRealization> realize_channels(const SystemConfig& c, std::uint64_t seed) {
  std::vector<ChannelRealization> out;
  out.reserve(static_cast<std::size_t>(c.K));
  for (int k = 0; k < c.K; ++k) out.push_back(realize_channel(c, k, seed));
  return out;
}

ChannelRealization ChannelRealization::subset(std::span<const int> members) const {
  ChannelRealization s;
  s.user = user;
  s.h = h;
  s.geom.d = geom.d;
  s.geom.far_field = geom.far_field;
  for (int m : members) {
    const auto i = static_cast<std::size_t>(m);
    if (i >= G.size()) throw std::out_of_range("subset: element index out of range");
    s.G.push_back(G[i]);
    s.H.push_back(H[i]);
    s.geom.d1.push_back(geom.d1[i]);
    s.geom.d2.push_back(geom.d2[i]);
    s.geom.dphase.push_back(geom.dphase[i]);
  }
  return s;
}

ChannelRealization group_channel(const ChannelRealization& channel, const SystemConfig& config, int l) {
  const auto members = group_members(config, l);
  return channel.subset(members);
}

RisConfiguration RisConfiguration::with_phases(std::vector<double> theta) {
  RisConfiguration r;
  r.beta.assign(theta.size(), 1.0);
  r.theta = std::move(theta);
  return r;
}

RisConfiguration RisConfiguration::off(std::size_t n) {
  RisConfiguration r;
  r.theta.assign(n, 0.0);
  r.beta.assign(n, 0.0);
  return r;
}

std::vector<cd> RisConfiguration::coefficients() const {
  std::vector<cd> phi(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) phi[i] = std::polar(beta[i], theta[i]);
  return phi;
}

bool RisConfiguration::feasible(int bits) const {
  if (beta.size() != theta.size()) return false;
  const double step = bits > 0 ? 2.0 * kPi / (1 << bits) : 0.0;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    if (beta[i] == 0.0) continue;
    if (beta[i] != 1.0) return false;
    if (bits > 0) {
      const double idx = wrap_phase(theta[i]) / step;
      const double off = std::abs(idx - std::round(idx));
      if (off > 1e-9) return false;
    }
  }
  return true;
}

double snr(cd h, std::span<const cd> H, std::span<const cd> phi, std::span<const cd> G, cd rho, double sigma2) {
  if (!(sigma2 > 0.0)) throw std::invalid_argument("snr: noise power must be positive");
  const cd composite = h + kernels::triple_sum(H, phi, G);
  return std::norm(composite * rho) / sigma2;
}

double snr_scmu(const ChannelRealization& ch, const RisConfiguration& ris, cd rho, double sigma2) {
  if (ris.size() != ch.size()) throw std::invalid_argument("snr_scmu: configuration length mismatch");
  const auto phi = ris.coefficients();
  return snr(ch.h, ch.H, phi, ch.G, rho, sigma2);
}

double snr_mcmu(const ChannelRealization& ch, const SystemConfig& config, int l, const RisConfiguration& ris,
                cd rho, double sigma2) {
  return snr_scmu(group_channel(ch, config, l), ris, rho, sigma2);
}

double received_power(const SystemConfig& config, const ChannelRealization& ch, const RisConfiguration& ris,
                      double rho2) {
  if (ris.size() != ch.size()) throw std::invalid_argument("received_power: configuration length mismatch");
  if (!(ch.geom.d > 0.0)) throw std::invalid_argument("received_power: zero distance");
  const std::size_t n = ch.size();
  std::vector<cd> phasor(n);
  std::vector<double> inv(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double path = ch.geom.d1[i] + ch.geom.d2[i];
    if (!(path > 0.0)) throw std::invalid_argument("received_power: zero reflected path");
    phasor[i] = std::polar(1.0, -ch.geom.dphase[i]);
    inv[i] = 1.0 / path;
  }
  const auto phi = ris.coefficients();
  // Factored around the direct path so that an empty surface gives Friis exactly.
  const cd sum = 1.0 + ch.geom.d * kernels::weighted_sum(phi, phasor, inv);
  const double amp = config.lambda() / (4.0 * kPi * ch.geom.d);
  return rho2 * (amp * amp) * std::norm(sum);
}

void write_realization_csv(std::ostream& out, const ChannelRealization& ch) {
  out << "n,d1,d2,dphase,abs_G,arg_G,abs_H,arg_H\n";
  for (std::size_t i = 0; i < ch.size(); ++i) {
    out << i << ',' << ch.geom.d1[i] << ',' << ch.geom.d2[i] << ',' << ch.geom.dphase[i] << ','
        << std::abs(ch.G[i]) << ',' << std::arg(ch.G[i]) << ',' << std::abs(ch.H[i]) << ',' << std::arg(ch.H[i])
        << '\n';
  }
}

}  // namespace rismac
