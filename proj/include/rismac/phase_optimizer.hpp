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
#include <cstddef>
#include <span>
#include <vector>

namespace rismac {

using cd = std::complex<double>;

struct PhaseSolution {
  std::vector<double> theta;  ///< per element, in [0, 2pi)
  std::size_t undefined = 0;  ///< elements with a zero cascade; their phase is 0
};

/// Continuous closed form: theta_n = arg(h rho*) - arg(H_n) - arg(G_n rho*).
/// Throws std::invalid_argument for rho == 0.
PhaseSolution optimal_phase_scmu(cd h, std::span<const cd> H, std::span<const cd> G, cd rho);

/// Budget P - P_RIS/L with the phase of the composite channel. Throws
/// std::domain_error when the budget is not positive.
cd optimal_power(cd h, std::span<const cd> H, std::span<const cd> G, std::span<const double> theta, double P,
                 double P_RIS, int L);

/// One phase shared by every element of a group:
/// arg(h rho*) - arg(sum_n H_n G_n rho*).
double optimal_phase_group(cd h, std::span<const cd> H, std::span<const cd> G, cd rho);

/// Nearest point of the 2^bits codebook on the circle; ties go to the
/// smaller index. Throws std::invalid_argument for bits < 1.
int quantize_index(double theta, int bits);
double quantize_phase(double theta, int bits);

/// Maximizes |h + sum_n a_n e^{j theta_n}| over the 2^bits codebook exactly
/// by sweeping the direction of the resultant through its N * 2^bits
/// breakpoints.
std::vector<double> best_discrete_phases(cd h, std::span<const cd> a, int bits);

struct OptimizeResult {
  std::vector<double> theta;
  cd rho;
  double snr = 0.0;
  int iterations = 0;
  bool converged = false;
  std::size_t undefined = 0;
  std::vector<double> snr_trace;  ///< SNR after each iteration
};

/// Alternates the phase update (closed form, projected onto the codebook and
/// refined by best_discrete_phases) and the power closed form until the
/// relative SNR gain drops below tol. bits == 0 selects continuous phases.
OptimizeResult alternating_optimize(cd h, std::span<const cd> H, std::span<const cd> G, double P, double P_RIS,
                                    int L, int bits, double sigma2, double tol = 1e-9, int max_iter = 100);

/// ((|h| + sum |H_n||G_n|) |rho|)^2 / sigma2
double coherent_snr(cd h, std::span<const cd> H, std::span<const cd> G, double rho2, double sigma2);

}  // namespace rismac
