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

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "rismac/kernels.hpp"

namespace rismac::kernels {
namespace {

Backend detect() {
  Backend best = Backend::kScalar;
#if defined(RISMAC_HAVE_AVX2)
  if (backend_available(Backend::kAvx2)) best = Backend::kAvx2;
#endif
  if (const char* env = std::getenv("RISMAC_SIMD")) {
    const std::string want(env);
    if (want == "scalar") return Backend::kScalar;
    if (want == "avx2" && backend_available(Backend::kAvx2)) return Backend::kAvx2;
  }
  return best;
}

std::atomic<Backend>& current() {
  static std::atomic<Backend> backend{detect()};
  return backend;
}

}  // namespace

bool backend_available(Backend backend) {
  switch (backend) {
    case Backend::kScalar:
      return true;
    case Backend::kAvx2:
#if defined(RISMAC_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

Backend active_backend() { return current().load(std::memory_order_relaxed); }

std::string_view backend_name(Backend backend) {
  return backend == Backend::kAvx2 ? "avx2" : "scalar";
}

void set_backend(Backend backend) {
  if (!backend_available(backend))
    throw std::invalid_argument("SIMD backend '" + std::string(backend_name(backend)) + "' is not available");
  current().store(backend, std::memory_order_relaxed);
}

#if defined(RISMAC_HAVE_AVX2)
#define RISMAC_DISPATCH(fn, ...) \
  (active_backend() == Backend::kAvx2 ? avx2::fn(__VA_ARGS__) : scalar::fn(__VA_ARGS__))
#else
#define RISMAC_DISPATCH(fn, ...) scalar::fn(__VA_ARGS__)
#endif

cd triple_sum(std::span<const cd> a, std::span<const cd> b, std::span<const cd> c) {
  if (b.size() != a.size() || c.size() != a.size()) throw std::invalid_argument("triple_sum: length mismatch");
  return RISMAC_DISPATCH(triple_sum, a, b, c);
}

cd weighted_sum(std::span<const cd> a, std::span<const cd> b, std::span<const double> w) {
  if (b.size() != a.size() || w.size() != a.size()) throw std::invalid_argument("weighted_sum: length mismatch");
  return RISMAC_DISPATCH(weighted_sum, a, b, w);
}

double abs_product_sum(std::span<const cd> a, std::span<const cd> c) {
  if (c.size() != a.size()) throw std::invalid_argument("abs_product_sum: length mismatch");
  return RISMAC_DISPATCH(abs_product_sum, a, c);
}

std::size_t align_unit(std::span<const cd> a, std::span<const cd> c, cd u, std::span<cd> out) {
  if (c.size() != a.size() || out.size() != a.size()) throw std::invalid_argument("align_unit: length mismatch");
  return RISMAC_DISPATCH(align_unit, a, c, u, out);
}

#undef RISMAC_DISPATCH

}  // namespace rismac::kernels
