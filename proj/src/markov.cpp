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

#include "rismac/markov.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace rismac {

double tau_map(double p, int W0, int m, double q) {
  // sum_{i<m} (2p)^i replaces (1 - (2p)^m) / (1 - 2p).
  double ladder = 0.0, term = 1.0;
  for (int i = 0; i < m; ++i) {
    ladder += term;
    term *= 2.0 * p;
  }
  const double denom = q * ((W0 + 1.0) + p * W0 * ladder) + 2.0 * (1.0 - q) * (1.0 - p);
  return 2.0 * q / denom;
}

namespace {

double collision_prob(double tau, double K, double q) { return 1.0 - std::pow(1.0 - tau, K * q - 1.0); }

}  // namespace

TauSolution tau_fixed_point(double K, int W0, int m, double q) {
  if (K < 1.0) throw std::invalid_argument("tau_fixed_point: K must be at least 1");
  if (!(q > 0.0 && q <= 1.0)) throw std::invalid_argument("tau_fixed_point: q must lie in (0, 1]");
  auto f = [&](double tau) { return tau - tau_map(collision_prob(tau, K, q), W0, m, q); };

  double lo = 0.0;
  double hi = 1.0 - 1e-15;
  double flo = f(lo), fhi = f(hi);
  if (!(flo < 0.0 && fhi > 0.0)) {
    throw std::domain_error("tau_fixed_point: no sign change (f(0) = " + std::to_string(flo) +
                            ", f(1) = " + std::to_string(fhi) + ")");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-17; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) {
      lo = hi = mid;
      break;
    }
    (fm < 0.0 ? lo : hi) = mid;
  }
  const double tau = std::abs(f(lo)) <= std::abs(f(hi)) ? lo : hi;
  return {tau, collision_prob(tau, K, q), std::abs(f(tau))};
}

ContentionProbs contention_probs(double tau, double K, double q) {
  ContentionProbs z;
  const double kq = K * q;
  z.s = kq * tau * std::pow(1.0 - tau, kq - 1.0);
  z.e = std::pow(1.0 - tau, kq);
  if (tau == 0.0) z.s = 0.0;  // 0 * inf when kq < 1
  z.c = 1.0 - z.s - z.e;
  return z;
}

Rates rates(const ContentionProbs& z, double t_s, double t_c, double delta, double t_p, int r_max) {
  if (!(t_p > 0.0) || r_max < 1) throw std::domain_error("rates: t_p and r_max must be positive");
  const double denom = z.e * delta + z.s * t_s + z.c * t_c;
  if (denom == 0.0) throw std::domain_error("rates: zero mean contention slot length");
  return {z.s / denom, 1.0 / (t_p * r_max)};
}

namespace {

MarkovSolution solve_with_eta_scale(const SystemConfig& c, int j, const SolverOptions& opt) {
  const Timings t = derived_timings(c);
  const double K = c.K;
  MarkovSolution s;
  s.j = j;
  double q = opt.q0;

  auto evaluate = [&](double qq) {
    MarkovSolution out;
    out.j = j;
    out.q = qq;
    const TauSolution ts = tau_fixed_point(K, c.W0, c.m, qq);
    out.tau = ts.tau;
    out.p = ts.p;
    out.residual_tau = ts.residual;
    out.residual_p = std::abs(out.p - collision_prob(out.tau, K, qq));
    const ContentionProbs z = contention_probs(out.tau, K, qq);
    out.zeta_s = z.s;
    out.zeta_e = z.e;
    out.zeta_c = z.c;
    const Rates r = rates(z, t.t_s, t.t_c, c.slot_time, c.t_p, c.r_max);
    out.gamma = r.gamma;
    out.eta = j * r.eta;
    return out;
  };

  for (int it = 1; it <= opt.max_iter; ++it) {
    s = evaluate(q);
    s.iterations = it;
    const double target = s.eta / (s.gamma + s.eta);
    s.residual_q = std::abs(q - target);
    if (s.residual_q < opt.tol) {
      s.converged = true;
      break;
    }
    q = (1.0 - opt.damping) * target + opt.damping * q;
  }
  s.probabilities_in_range = s.p >= 0.0 && s.p <= 1.0 && s.zeta_c >= 0.0 && s.zeta_s >= 0.0 && s.zeta_e <= 1.0;
  if (!s.converged) {
    throw ConvergenceError("markov solver did not converge in " + std::to_string(opt.max_iter) +
                               " iterations (q residual " + std::to_string(s.residual_q) + ")",
                           s);
  }
  return s;
}

}  // namespace

MarkovSolution solve_self_consistent(const SystemConfig& config, const SolverOptions& options) {
  return solve_with_eta_scale(config, 1, options);
}

MarkovSolution multi_channel_solution(const SystemConfig& config, int j, const SolverOptions& options) {
  if (j < 1 || j > config.C) throw std::invalid_argument("multi_channel_solution: j must lie in [1, C]");
  return solve_with_eta_scale(config, j, options);
}

std::vector<double> mmc_steady_state(std::span<const double> gamma, double eta, int C) {
  if (C < 1) throw std::invalid_argument("mmc_steady_state: C must be at least 1");
  if (static_cast<int>(gamma.size()) < C) throw std::invalid_argument("mmc_steady_state: need gamma_0..gamma_{C-1}");
  if (!(eta > 0.0)) throw std::invalid_argument("mmc_steady_state: eta must be positive");
  std::vector<double> weight(static_cast<std::size_t>(C) + 1);
  weight[0] = 1.0;
  double w = 1.0;
  for (int j = 1; j <= C; ++j) {
    w *= gamma[static_cast<std::size_t>(j - 1)] / (eta * j);
    weight[static_cast<std::size_t>(j)] = w;
  }
  double total = 0.0;
  for (double x : weight) total += x;
  for (auto& x : weight) x /= total;
  return weight;
}

MultiChannelAnalysis analyze_multi_channel(const SystemConfig& config, const SolverOptions& options) {
  MultiChannelAnalysis a;
  for (int j = 1; j <= config.C; ++j) a.per_j.push_back(multi_channel_solution(config, j, options));
  std::vector<double> gamma(static_cast<std::size_t>(config.C));
  gamma[0] = a.per_j[0].gamma;
  for (int l = 1; l < config.C; ++l) gamma[static_cast<std::size_t>(l)] = a.per_j[static_cast<std::size_t>(l - 1)].gamma;
  a.pi = mmc_steady_state(gamma, a.per_j[0].eta, config.C);
  return a;
}

namespace {

double rate_sum(std::span<const double> snr, std::span<const int> r) {
  if (snr.size() != r.size()) throw std::invalid_argument("capacity: snr and r lengths differ");
  double sum = 0.0;
  for (std::size_t k = 0; k < snr.size(); ++k) sum += r[k] * std::log2(1.0 + snr[k]);
  return sum;
}

}  // namespace

double capacity_scmu(const SystemConfig& c, const MarkovSolution& s, std::span<const double> snr,
                     std::span<const int> r) {
  const Timings t = derived_timings(c);
  return c.t_p * c.t_h * s.zeta_s / (c.T * t.t_s * c.K) * c.B * rate_sum(snr, r);
}

double capacity_mcmu(const SystemConfig& c, std::span<const MarkovSolution> per_j, std::span<const double> pi,
                     std::span<const double> snr, std::span<const int> r) {
  if (pi.size() != per_j.size() + 1) throw std::invalid_argument("capacity_mcmu: pi must hold pi_0..pi_C");
  const Timings t = derived_timings(c);
  double weighted = 0.0;
  for (std::size_t j = 0; j < per_j.size(); ++j) weighted += per_j[j].zeta_s * pi[j + 1];
  return c.t_p * c.t_h * c.B / (c.T * t.t_s * c.K * c.C) * weighted * rate_sum(snr, r);
}

int suggested_cycle(const SystemConfig& c, const MarkovSolution& s) {
  const Timings t = derived_timings(c);
  const double x = c.t_h * s.zeta_s / t.t_s;
  if (!(x > 0.0)) return 0;
  return static_cast<int>(std::floor(x + 1e-9));
}

void write_solution_csv(std::ostream& out, std::span<const MarkovSolution> rows, std::span<const double> pi) {
  out << "j,tau,p,q,gamma,eta,zeta_s,zeta_e,zeta_c,pi,residual_tau,residual_p,residual_q,iterations,converged\n";
  for (const auto& s : rows) {
    const auto idx = static_cast<std::size_t>(s.j);
    out << s.j << ',' << s.tau << ',' << s.p << ',' << s.q << ',' << s.gamma << ',' << s.eta << ',' << s.zeta_s
        << ',' << s.zeta_e << ',' << s.zeta_c << ',';
    if (idx < pi.size()) out << pi[idx];
    out << ',' << s.residual_tau << ',' << s.residual_p << ',' << s.residual_q << ',' << s.iterations << ','
        << (s.converged ? 1 : 0) << '\n';
  }
}

}  // namespace rismac
