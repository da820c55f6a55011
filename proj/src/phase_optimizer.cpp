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

#include "rismac/phase_optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "rismac/channel.hpp"
#include "rismac/config.hpp"
#include "rismac/kernels.hpp"

namespace rismac {

PhaseSolution optimal_phase_scmu(cd h, std::span<const cd> H, std::span<const cd> G, cd rho) {
  if (rho == cd(0.0, 0.0)) throw std::invalid_argument("optimal_phase_scmu: rho must be nonzero");
  if (H.size() != G.size()) throw std::invalid_argument("optimal_phase_scmu: length mismatch");
  // With the rho* factors folded in: target direction of each reflected term
  // is arg(h rho*) + arg(rho) = arg(h) once the transmit phase is applied.
  const cd u = std::polar(1.0, std::arg(h * std::conj(rho)) + std::arg(rho));
  std::vector<cd> phi(H.size());
  PhaseSolution out;
  out.undefined = kernels::align_unit(H, G, u, phi);
  out.theta.resize(phi.size());
  for (std::size_t n = 0; n < phi.size(); ++n) out.theta[n] = wrap_phase(std::arg(phi[n]));
  return out;
}

cd optimal_power(cd h, std::span<const cd> H, std::span<const cd> G, std::span<const double> theta, double P,
                 double P_RIS, int L) {
  if (L < 1) throw std::invalid_argument("optimal_power: L must be at least 1");
  const double budget = P - P_RIS / L;
  if (!(budget > 0.0)) throw std::domain_error("optimal_power: transmit budget P - P_RIS/L is not positive");
  std::vector<cd> phi(theta.size());
  for (std::size_t n = 0; n < theta.size(); ++n) phi[n] = std::polar(1.0, theta[n]);
  const cd composite = h + kernels::triple_sum(H, phi, G);
  const double mag = std::abs(composite);
  const cd direction = mag > 0.0 ? composite / mag : cd(1.0, 0.0);
  return std::sqrt(budget) * direction;
}

double optimal_phase_group(cd h, std::span<const cd> H, std::span<const cd> G, cd rho) {
  if (rho == cd(0.0, 0.0)) throw std::invalid_argument("optimal_phase_group: rho must be nonzero");
  if (H.size() != G.size()) throw std::invalid_argument("optimal_phase_group: length mismatch");
  cd cascade(0.0, 0.0);
  for (std::size_t n = 0; n < H.size(); ++n) cascade += H[n] * G[n] * std::conj(rho);
  if (cascade == cd(0.0, 0.0)) return 0.0;
  return wrap_phase(std::arg(h * std::conj(rho)) - std::arg(cascade));
}

int quantize_index(double theta, int bits) {
  if (bits < 1) throw std::invalid_argument("quantize_phase: bits must be at least 1");
  const int psi = 1 << bits;
  const double step = 2.0 * kPi / psi;
  const double x = wrap_phase(theta) / step;  // in [0, psi)
  const double lo = std::floor(x);
  const double frac = x - lo;
  int idx = static_cast<int>(lo);
  if (frac > 0.5) ++idx;  // exact half goes down, toward the smaller index
  if (idx == psi) idx = 0;
  // Halfway between psi-1 and the wrap to 0: the smaller index is 0.
  if (static_cast<int>(lo) == psi - 1 && frac == 0.5) idx = 0;
  return idx;
}

double quantize_phase(double theta, int bits) {
  return quantize_index(theta, bits) * (2.0 * kPi / (1 << bits));
}

std::vector<double> best_discrete_phases(cd h, std::span<const cd> a, int bits) {
  if (bits < 1) throw std::invalid_argument("best_discrete_phases: bits must be at least 1");
  const int psi = 1 << bits;
  const double step = 2.0 * kPi / psi;
  const std::size_t n = a.size();
  std::vector<double> theta(n, 0.0);
  if (n == 0) return theta;

  std::vector<cd> codebook(static_cast<std::size_t>(psi));
  for (int i = 0; i < psi; ++i) codebook[static_cast<std::size_t>(i)] = std::polar(1.0, i * step);

  // Element n takes index round((psi_dir - arg a_n) / step); it steps up by one
  // each time the direction crosses arg a_n + (k + 1/2) step.
  struct Event {
    double at;
    std::size_t n;
  };
  std::vector<Event> events;
  events.reserve(n * static_cast<std::size_t>(psi));
  std::vector<double> base(n);
  std::vector<bool> active(n);
  for (std::size_t i = 0; i < n; ++i) {
    active[i] = a[i] != cd(0.0, 0.0);
    base[i] = std::arg(a[i]);
    if (!active[i]) continue;
    for (int k = 0; k < psi; ++k) events.push_back({wrap_phase(base[i] + (k + 0.5) * step), i});
  }
  std::sort(events.begin(), events.end(), [](const Event& x, const Event& y) { return x.at < y.at; });

  auto assign = [&](double dir, std::vector<int>& idx) {
    for (std::size_t i = 0; i < n; ++i) idx[i] = active[i] ? quantize_index(dir - base[i], bits) : 0;
  };
  auto resultant = [&](const std::vector<int>& idx) {
    cd s = h;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * codebook[static_cast<std::size_t>(idx[i])];
    return s;
  };

  // Probe points strictly inside each interval between breakpoints.
  std::vector<double> probes;
  if (events.empty()) {
    probes.push_back(0.0);
  } else {
    for (std::size_t e = 0; e < events.size(); ++e) {
      const double lo = events[e].at;
      const double hi = e + 1 < events.size() ? events[e + 1].at : events.front().at + 2.0 * kPi;
      if (hi > lo) probes.push_back(0.5 * (lo + hi));
    }
    if (probes.empty()) probes.push_back(events.front().at + kPi);
  }

  std::vector<int> idx(n), best_idx(n);
  assign(probes.front(), idx);
  cd s = resultant(idx);
  double best = std::norm(s);
  best_idx = idx;
  // Incremental walk: between consecutive probes exactly the elements whose
  // breakpoints lie in between change index.
  std::size_t e = 0;
  while (e < events.size() && events[e].at < probes.front()) ++e;
  for (std::size_t p = 1; p < probes.size(); ++p) {
    while (e < events.size() && events[e].at < probes[p]) {
      const std::size_t i = events[e].n;
      const int next = (idx[i] + 1) % psi;
      s += a[i] * (codebook[static_cast<std::size_t>(next)] - codebook[static_cast<std::size_t>(idx[i])]);
      idx[i] = next;
      ++e;
    }
    const double val = std::norm(s);
    if (val > best) {
      best = val;
      best_idx = idx;
    }
  }
  for (std::size_t i = 0; i < n; ++i) theta[i] = best_idx[i] * step;
  return theta;
}

double coherent_snr(cd h, std::span<const cd> H, std::span<const cd> G, double rho2, double sigma2) {
  const double amp = std::abs(h) + kernels::abs_product_sum(H, G);
  return amp * amp * rho2 / sigma2;
}

OptimizeResult alternating_optimize(cd h, std::span<const cd> H, std::span<const cd> G, double P, double P_RIS,
                                    int L, int bits, double sigma2, double tol, int max_iter) {
  if (H.size() != G.size()) throw std::invalid_argument("alternating_optimize: length mismatch");
  if (L < 1) throw std::invalid_argument("alternating_optimize: L must be at least 1");
  const double budget = P - P_RIS / L;
  if (!(budget > 0.0)) throw std::domain_error("alternating_optimize: transmit budget is not positive");

  std::vector<cd> cascade(H.size());
  for (std::size_t n = 0; n < H.size(); ++n) cascade[n] = H[n] * G[n];

  OptimizeResult result;
  result.rho = cd(std::sqrt(budget), 0.0);
  result.theta.assign(H.size(), 0.0);
  std::vector<cd> phi(H.size());
  auto evaluate = [&](const std::vector<double>& theta, cd rho) {
    for (std::size_t n = 0; n < theta.size(); ++n) phi[n] = std::polar(1.0, theta[n]);
    return snr(h, H, phi, G, rho, sigma2);
  };
  double current = -1.0;

  for (int it = 1; it <= max_iter; ++it) {
    // Phase step with power fixed.
    PhaseSolution cont = optimal_phase_scmu(h, H, G, result.rho);
    result.undefined = cont.undefined;
    std::vector<double> theta = std::move(cont.theta);
    if (bits > 0) {
      for (auto& t : theta) t = quantize_phase(t, bits);
      std::vector<double> refined = best_discrete_phases(h, cascade, bits);
      if (evaluate(refined, result.rho) > evaluate(theta, result.rho)) theta = std::move(refined);
    }
    // Power step with phases fixed.
    const cd rho = optimal_power(h, H, G, theta, P, P_RIS, L);
    const double value = evaluate(theta, rho);

    result.iterations = it;
    if (value >= current) {
      const double gain = current > 0.0 ? (value - current) / current : 1.0;
      result.theta = std::move(theta);
      result.rho = rho;
      current = value;
      result.snr_trace.push_back(value);
      if (gain < tol || bits == 0) {
        result.converged = true;
        break;
      }
    } else {
      // A worse iterate ends the loop; the best one so far is kept.
      result.snr_trace.push_back(current);
      result.converged = true;
      break;
    }
  }
  result.snr = current;
  return result;
}

}  // namespace rismac
