// Copyright 2026 The genesyn Authors.
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

// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.

#include <immintrin.h>

#include "genesyn/nn/kernels.hpp"

namespace genesyn::nn::kernels {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d swapped = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

// y += a * x over n elements.
inline void axpy(double* y, double a, const double* x, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_loadu_pd(y + i);
    vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void affine(std::span<const double> w, std::span<const double> b,
            std::span<const double> x, std::span<double> y) {
  const std::size_t cols = x.size();
  for (std::size_t r = 0; r < y.size(); ++r) {
    const double* row = w.data() + r * cols;
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t c = 0;
    for (; c + 8 <= cols; c += 8) {
      acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(row + c),
                             _mm256_loadu_pd(x.data() + c), acc0);
      acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(row + c + 4),
                             _mm256_loadu_pd(x.data() + c + 4), acc1);
    }
    for (; c + 4 <= cols; c += 4)
      acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(row + c),
                             _mm256_loadu_pd(x.data() + c), acc0);
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; c < cols; ++c) acc += row[c] * x[c];
    y[r] = acc + b[r];
  }
}

void affine_transpose(std::span<const double> w, std::span<const double> dy,
                      std::span<double> dx) {
  const std::size_t cols = dx.size();
  for (double& d : dx) d = 0.0;
  for (std::size_t r = 0; r < dy.size(); ++r)
    axpy(dx.data(), dy[r], w.data() + r * cols, cols);
}

void outer_accumulate(std::span<double> g, std::span<const double> dy,
                      std::span<const double> x) {
  const std::size_t cols = x.size();
  for (std::size_t r = 0; r < dy.size(); ++r)
    axpy(g.data() + r * cols, dy[r], x.data(), cols);
}

void adam_update(std::span<double> params, std::span<double> m,
                 std::span<double> v, std::span<const double> grad,
                 const AdamStep& s) {
  const __m256d b1 = _mm256_set1_pd(s.beta1);
  const __m256d b1c = _mm256_set1_pd(1.0 - s.beta1);
  const __m256d b2 = _mm256_set1_pd(s.beta2);
  const __m256d b2c = _mm256_set1_pd(1.0 - s.beta2);
  const __m256d inv_c1 = _mm256_set1_pd(1.0 / s.bias_correction1);
  const __m256d inv_c2 = _mm256_set1_pd(1.0 / s.bias_correction2);
  const __m256d lr = _mm256_set1_pd(s.learning_rate);
  const __m256d eps = _mm256_set1_pd(s.epsilon);
  const std::size_t n = params.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d g = _mm256_loadu_pd(grad.data() + i);
    __m256d vm = _mm256_mul_pd(b1, _mm256_loadu_pd(m.data() + i));
    vm = _mm256_fmadd_pd(b1c, g, vm);
    __m256d vv = _mm256_mul_pd(b2, _mm256_loadu_pd(v.data() + i));
    vv = _mm256_fmadd_pd(_mm256_mul_pd(b2c, g), g, vv);
    _mm256_storeu_pd(m.data() + i, vm);
    _mm256_storeu_pd(v.data() + i, vv);
    __m256d denom =
        _mm256_add_pd(_mm256_sqrt_pd(_mm256_mul_pd(vv, inv_c2)), eps);
    __m256d step = _mm256_div_pd(_mm256_mul_pd(lr, _mm256_mul_pd(vm, inv_c1)), denom);
    _mm256_storeu_pd(params.data() + i,
                     _mm256_sub_pd(_mm256_loadu_pd(params.data() + i), step));
  }
  for (; i < n; ++i) {
    m[i] = s.beta1 * m[i] + (1.0 - s.beta1) * grad[i];
    v[i] = s.beta2 * v[i] + (1.0 - s.beta2) * grad[i] * grad[i];
    double m_hat = m[i] / s.bias_correction1;
    double v_hat = v[i] / s.bias_correction2;
    params[i] -= s.learning_rate * m_hat / (__builtin_sqrt(v_hat) + s.epsilon);
  }
}

}  // namespace

const KernelTable* avx2_kernels() {
  static const KernelTable table{Backend::kAvx2, affine, affine_transpose,
                                 outer_accumulate, adam_update};
  return &table;
}

}  // namespace genesyn::nn::kernels
