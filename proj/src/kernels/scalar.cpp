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

#include <cmath>

#include "rismac/kernels.hpp"

namespace rismac::kernels::scalar {

cd triple_sum(std::span<const cd> a, std::span<const cd> b, std::span<const cd> c) {
  double re = 0.0, im = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) {
    const cd p = a[n] * b[n] * c[n];
    re += p.real();
    im += p.imag();
  }
  return {re, im};
}

cd weighted_sum(std::span<const cd> a, std::span<const cd> b, std::span<const double> w) {
  double re = 0.0, im = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) {
    const cd p = a[n] * b[n] * w[n];
    re += p.real();
    im += p.imag();
  }
  return {re, im};
}

double abs_product_sum(std::span<const cd> a, std::span<const cd> c) {
  double s = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) s += std::abs(a[n]) * std::abs(c[n]);
  return s;
}

std::size_t align_unit(std::span<const cd> a, std::span<const cd> c, cd u, std::span<cd> out) {
  std::size_t zeros = 0;
  for (std::size_t n = 0; n < a.size(); ++n) {
    const cd p = a[n] * c[n];
    const double mag = std::abs(p);
    if (mag == 0.0) {
      out[n] = cd(1.0, 0.0);
      ++zeros;
    } else {
      out[n] = u * std::conj(p) / mag;
    }
  }
  return zeros;
}

}  // namespace rismac::kernels::scalar
