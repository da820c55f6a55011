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

// Complex reductions over RIS elements. Every kernel has a scalar reference
// and an AVX2+FMA variant selected at runtime. Inputs are interleaved
// std::complex<double> spans of equal length.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace rismac::kernels {

using cd = std::complex<double>;

enum class Backend { kScalar, kAvx2 };

bool backend_available(Backend backend);
Backend active_backend();
std::string_view backend_name(Backend backend);
// Overrides the detected backend. Throws std::invalid_argument when the
// requested backend is not available on this CPU.
void set_backend(Backend backend);

/// sum_n a[n] * b[n] * c[n]
cd triple_sum(std::span<const cd> a, std::span<const cd> b, std::span<const cd> c);
/// sum_n a[n] * b[n] * w[n], w real
cd weighted_sum(std::span<const cd> a, std::span<const cd> b, std::span<const double> w);
/// sum_n |a[n]| * |c[n]|
double abs_product_sum(std::span<const cd> a, std::span<const cd> c);
/// out[n] = u * conj(a[n] c[n]) / |a[n] c[n]|, or 1 when a[n] c[n] == 0.
/// Returns the number of zero products.
std::size_t align_unit(std::span<const cd> a, std::span<const cd> c, cd u, std::span<cd> out);

namespace scalar {
cd triple_sum(std::span<const cd> a, std::span<const cd> b, std::span<const cd> c);
cd weighted_sum(std::span<const cd> a, std::span<const cd> b, std::span<const double> w);
double abs_product_sum(std::span<const cd> a, std::span<const cd> c);
std::size_t align_unit(std::span<const cd> a, std::span<const cd> c, cd u, std::span<cd> out);
}  // namespace scalar

#if defined(RISMAC_HAVE_AVX2)
namespace avx2 {
cd triple_sum(std::span<const cd> a, std::span<const cd> b, std::span<const cd> c);
cd weighted_sum(std::span<const cd> a, std::span<const cd> b, std::span<const double> w);
double abs_product_sum(std::span<const cd> a, std::span<const cd> c);
std::size_t align_unit(std::span<const cd> a, std::span<const cd> c, cd u, std::span<cd> out);
}  // namespace avx2
#endif

}  // namespace rismac::kernels
