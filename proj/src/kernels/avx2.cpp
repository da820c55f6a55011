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

#include <immintrin.h>

#include <cmath>

#include "rismac/kernels.hpp"

// Compiled with -mavx2 -mfma; only called after a CPUID check.

namespace rismac::kernels::avx2 {
namespace {

// Two interleaved complex products per register.
inline __m256d cmul(__m256d x, __m256d y) {
  const __m256d yre = _mm256_movedup_pd(y);
  const __m256d yim = _mm256_permute_pd(y, 0xF);
  const __m256d xs = _mm256_permute_pd(x, 0x5);
  return _mm256_fmaddsub_pd(x, yre, _mm256_mul_pd(xs, yim));
}

inline __m256d load(const cd* p) { return _mm256_loadu_pd(reinterpret_cast<const double*>(p)); }

inline cd fold(__m256d acc) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  return {lanes[0] + lanes[2], lanes[1] + lanes[3]};
}

}  // namespace

cd triple_sum(std::span<const cd> a, std::span<const cd> b, std::span<const cd> c) {
  const std::size_t n = a.size();
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_add_pd(acc0, cmul(cmul(load(&a[i]), load(&b[i])), load(&c[i])));
    acc1 = _mm256_add_pd(acc1, cmul(cmul(load(&a[i + 2]), load(&b[i + 2])), load(&c[i + 2])));
  }
  for (; i + 2 <= n; i += 2) acc0 = _mm256_add_pd(acc0, cmul(cmul(load(&a[i]), load(&b[i])), load(&c[i])));
  cd sum = fold(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) sum += a[i] * b[i] * c[i];
  return sum;
}

cd weighted_sum(std::span<const cd> a, std::span<const cd> b, std::span<const double> w) {
  const std::size_t n = a.size();
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d ww = _mm256_set_pd(w[i + 1], w[i + 1], w[i], w[i]);
    acc = _mm256_fmadd_pd(cmul(load(&a[i]), load(&b[i])), ww, acc);
  }
  cd sum = fold(acc);
  for (; i < n; ++i) sum += a[i] * b[i] * w[i];
  return sum;
}

double abs_product_sum(std::span<const cd> a, std::span<const cd> c) {
  const std::size_t n = a.size();
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d x = load(&a[i]);
    const __m256d y = load(&c[i]);
    // (|a0|^2, |c0|^2, |a1|^2, |c1|^2)
    const __m256d norms = _mm256_sqrt_pd(_mm256_hadd_pd(_mm256_mul_pd(x, x), _mm256_mul_pd(y, y)));
    acc = _mm256_fmadd_pd(norms, _mm256_permute_pd(norms, 0x5), acc);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double sum = lanes[0] + lanes[2];
  for (; i < n; ++i) sum += std::abs(a[i]) * std::abs(c[i]);
  return sum;
}

std::size_t align_unit(std::span<const cd> a, std::span<const cd> c, cd u, std::span<cd> out) {
  const std::size_t n = a.size();
  const __m256d uu = _mm256_set_pd(u.imag(), u.real(), u.imag(), u.real());
  const __m256d conj_sign = _mm256_set_pd(-1.0, 1.0, -1.0, 1.0);
  const __m256d one = _mm256_set_pd(0.0, 1.0, 0.0, 1.0);
  const __m256d zero = _mm256_setzero_pd();
  std::size_t zeros = 0;
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d p = cmul(load(&a[i]), load(&c[i]));
    const __m256d sq = _mm256_mul_pd(p, p);
    const __m256d mag = _mm256_sqrt_pd(_mm256_hadd_pd(sq, sq));
    const __m256d unit = _mm256_div_pd(cmul(uu, _mm256_mul_pd(p, conj_sign)), mag);
    const __m256d is_zero = _mm256_cmp_pd(mag, zero, _CMP_EQ_OQ);
    _mm256_storeu_pd(reinterpret_cast<double*>(&out[i]), _mm256_blendv_pd(unit, one, is_zero));
    const int mask = _mm256_movemask_pd(is_zero);
    zeros += static_cast<std::size_t>((mask & 1) + ((mask >> 2) & 1));
  }
  for (; i < n; ++i) {
    const cd p = a[i] * c[i];
    const double mag = std::abs(p);
    if (mag == 0.0) {
      out[i] = cd(1.0, 0.0);
      ++zeros;
    } else {
      out[i] = u * std::conj(p) / mag;
    }
  }
  return zeros;
}

}  // namespace rismac::kernels::avx2
