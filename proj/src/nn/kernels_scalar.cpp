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

#include <cmath>

#include "genesyn/nn/kernels.hpp"

namespace genesyn::nn::kernels {
namespace {

void affine(std::span<const double> w, std::span<const double> b,
            std::span<const double> x, std::span<double> y) {
  const std::size_t cols = x.size();
  for (std::size_t r = 0; r < y.size(); ++r) {
    const double* row = w.data() + r * cols;
    double acc = 0.0;
    for (std::size_t c = 0; c < cols; ++c) acc += row[c] * x[c];
    y[r] = acc + b[r];
  }
}

void affine_transpose(std::span<const double> w, std::span<const double> dy,
                      std::span<double> dx) {
  const std::size_t cols = dx.size();
  for (double& d : dx) d = 0.0;
  for (std::size_t r = 0; r < dy.size(); ++r) {
    const double* row = w.data() + r * cols;
    for (std::size_t c = 0; c < cols; ++c) dx[c] += row[c] * dy[r];
  }
}

void outer_accumulate(std::span<double> g, std::span<const double> dy,
                      std::span<const double> x) {
  const std::size_t cols = x.size();
  for (std::size_t r = 0; r < dy.size(); ++r) {
    double* row = g.data() + r * cols;
    for (std::size_t c = 0; c < cols; ++c) row[c] += dy[r] * x[c];
  }
}

void adam_update(std::span<double> params, std::span<double> m,
                 std::span<double> v, std::span<const double> grad,
                 const AdamStep& s) {
  for (std::size_t i = 0; i < params.size(); ++i) {
    m[i] = s.beta1 * m[i] + (1.0 - s.beta1) * grad[i];
    v[i] = s.beta2 * v[i] + (1.0 - s.beta2) * grad[i] * grad[i];
    double m_hat = m[i] / s.bias_correction1;
    double v_hat = v[i] / s.bias_correction2;
    params[i] -= s.learning_rate * m_hat / (std::sqrt(v_hat) + s.epsilon);
  }
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{Backend::kScalar, affine, affine_transpose,
                                 outer_accumulate, adam_update};
  return table;
}

}  // namespace genesyn::nn::kernels
