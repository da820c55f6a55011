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

#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rismac/config.hpp"

namespace rismac {

struct TauSolution {
  double tau = 0.0;
  double p = 0.0;
  double residual = 0.0;  ///< |tau - F(p(tau))| of the backoff fixed point
};

/// Solves the backoff fixed point jointly with p = 1 - (1 - tau)^(Kq - 1)
/// by bisection on tau. K is real so that Kq may be fractional. Throws
/// std::domain_error when the residual has no sign change on (0, 1).
TauSolution tau_fixed_point(double K, int W0, int m, double q);

/// Right-hand side of the tau equation for a given p, with the (1 - 2p)
/// factors cancelled so it stays finite at p = 1/2.
double tau_map(double p, int W0, int m, double q);

struct ContentionProbs {
  double s = 0.0;  ///< success
  double e = 0.0;  ///< idle
  double c = 0.0;  ///< collision
};

ContentionProbs contention_probs(double tau, double K, double q);

struct Rates {
  double gamma = 0.0;  ///< contention -> transmission, 1/s
  double eta = 0.0;    ///< transmission -> contention, 1/s
};

/// Throws std::domain_error when the contention time per slot is zero.
Rates rates(const ContentionProbs& z, double t_s, double t_c, double delta, double t_p, int r_max);

struct MarkovSolution {
  int j = 1;  ///< sub-channels in use (1 for the single-channel model)
  double tau = 0.0, p = 0.0, q = 0.0;
  double gamma = 0.0, eta = 0.0;
  double zeta_s = 0.0, zeta_e = 0.0, zeta_c = 0.0;
  double residual_tau = 0.0;  ///< backoff fixed point
  double residual_p = 0.0;    ///< collision expression
  double residual_q = 0.0;    ///< q - eta / (gamma + eta)
  int iterations = 0;
  bool converged = false;
  /// False when Kq < 1 pushes p or zeta_c slightly below zero; the
  /// expressions are evaluated as written.
  bool probabilities_in_range = true;
};

struct SolverOptions {
  double damping = 0.5;
  double tol = 1e-10;
  int max_iter = 10000;
  double q0 = 0.5;
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, MarkovSolution last)
      : std::runtime_error(what), last_(last) {}
  const MarkovSolution& last() const { return last_; }

 private:
  MarkovSolution last_;
};

/// Damped iteration q -> (tau, p) -> zeta -> gamma -> q.
MarkovSolution solve_self_consistent(const SystemConfig& config, const SolverOptions& options = {});
/// Same loop with eta_j = j * eta. Requires 1 <= j <= C.
MarkovSolution multi_channel_solution(const SystemConfig& config, int j, const SolverOptions& options = {});

/// pi_0..pi_C from gamma_0..gamma_{C-1} and the per-channel service rate eta.
std::vector<double> mmc_steady_state(std::span<const double> gamma, double eta, int C);

struct MultiChannelAnalysis {
  std::vector<MarkovSolution> per_j;  ///< j = 1..C
  std::vector<double> pi;             ///< j = 0..C
};

/// Solves every j and the occupancy distribution. gamma_0 is taken as the
/// j = 1 contention rate and gamma_l (l >= 1) as the rate of solution j = l.
MultiChannelAnalysis analyze_multi_channel(const SystemConfig& config, const SolverOptions& options = {});

/// Total capacity in bit/s of the single-channel system.
double capacity_scmu(const SystemConfig& config, const MarkovSolution& solution, std::span<const double> snr,
                     std::span<const int> r);
/// Total capacity in bit/s over C sub-channels.
double capacity_mcmu(const SystemConfig& config, std::span<const MarkovSolution> per_j, std::span<const double> pi,
                     std::span<const double> snr, std::span<const int> r);

/// floor(t_h zeta_s / t_s); the suggested T_cycle is N_r * t_p.
int suggested_cycle(const SystemConfig& config, const MarkovSolution& solution);

/// One row per solution. Columns:
/// j,tau,p,q,gamma,eta,zeta_s,zeta_e,zeta_c,pi,residual_tau,residual_p,residual_q,iterations,converged
void write_solution_csv(std::ostream& out, std::span<const MarkovSolution> rows, std::span<const double> pi = {});

}  // namespace rismac
