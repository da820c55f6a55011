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

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "rismac/config.hpp"

namespace rismac {

using cd = std::complex<double>;

/// Distances and reflected-path phase offsets of one user. Every element
/// shares the placement of the reference layout, so d1/d2 are constant over n
/// unless a caller edits them.
struct Geometry {
  double d = 0.0;            ///< direct user-AP distance
  std::vector<double> d1;    ///< user -> element n
  std::vector<double> d2;    ///< element n -> AP
  std::vector<double> dphase;  ///< reflected-path phase offset in [0, 2pi)
  bool far_field = false;    ///< d1 + d2 within 5% of d for every element
};

/// Throws std::invalid_argument for d <= 0 or a co-located user and RIS.
Geometry geometry(const SystemConfig& config, int k);

struct ChannelRealization {
  int user = 0;
  cd h;
  std::vector<cd> G;  ///< user -> element
  std::vector<cd> H;  ///< element -> AP
  Geometry geom;

  std::size_t size() const { return G.size(); }
  /// Restriction to a subset of elements (an RIS group).
  ChannelRealization subset(std::span<const int> members) const;
};

/// Geometric mode is deterministic; random-phase mode keeps the free-space
/// amplitudes and draws every phase uniformly from (seed, k).
ChannelRealization realize_channel(const SystemConfig& config, int k, std::uint64_t seed);
std::vector<ChannelRealization> realize_channels(const SystemConfig& config, std::uint64_t seed);
/// The channel seen through RIS group l.
ChannelRealization group_channel(const ChannelRealization& channel, const SystemConfig& config, int l);

/// Per-element phases and amplitudes; beta is 1 for a reflecting element and
/// 0 for a switched-off one.
struct RisConfiguration {
  std::vector<double> theta;
  std::vector<double> beta;

  static RisConfiguration with_phases(std::vector<double> theta);
  static RisConfiguration off(std::size_t n);
  std::size_t size() const { return theta.size(); }
  std::vector<cd> coefficients() const;
  /// True when every active element is unit modulus and its phase lies in
  /// the 2^bits codebook (any phase when bits == 0).
  bool feasible(int bits) const;
};

/// |(h + sum H phi G) rho|^2 / sigma2. Throws for sigma2 <= 0.
double snr(cd h, std::span<const cd> H, std::span<const cd> phi, std::span<const cd> G, cd rho, double sigma2);
double snr_scmu(const ChannelRealization& channel, const RisConfiguration& ris, cd rho, double sigma2);
/// SNR through RIS group l; `ris` holds the group's N/L phases.
double snr_mcmu(const ChannelRealization& channel, const SystemConfig& config, int l,
                const RisConfiguration& ris, cd rho, double sigma2);

/// rho2 (lambda/4pi)^2 |1/d + sum phi e^{-j dphase} / (d1 + d2)|^2
double received_power(const SystemConfig& config, const ChannelRealization& channel,
                      const RisConfiguration& ris, double rho2);

inline double total_link_power(double rho2, double p_ris, double gamma) { return rho2 + p_ris + gamma; }
/// Direct link only: the user transmits at P and the RIS draws nothing.
inline double total_link_power_direct(double p, double gamma) { return p + gamma; }

/// Columns: n,d1,d2,dphase,abs_G,arg_G,abs_H,arg_H
void write_realization_csv(std::ostream& out, const ChannelRealization& channel);

double wrap_phase(double theta);  ///< into [0, 2pi)

}  // namespace rismac
