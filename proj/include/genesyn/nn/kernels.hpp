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

#pragma once

// Dense-layer and optimizer inner loops. Every kernel has a scalar reference
// implementation; an AVX2+FMA variant is compiled in on x86-64 and selected
// at runtime when the CPU supports it. The two agree to rounding (FMA and
// summation order differ), which tests/kernels_test.cpp pins down.
//
// Set GENESYN_KERNELS=scalar in the environment to force the reference path.

#include <cstddef>
#include <span>
#include <string_view>

namespace genesyn::nn::kernels {

enum class Backend { kScalar, kAvx2 };

std::string_view backend_name(Backend b);

struct AdamStep {
  double learning_rate;
  double beta1;
  double beta2;
  double epsilon;
  double bias_correction1;  // 1 - beta1^t
  double bias_correction2;  // 1 - beta2^t
};

struct KernelTable {
  Backend backend;

  // y[r] = b[r] + sum_c w[r * x.size() + c] * x[c]; rows = y.size().
  void (*affine)(std::span<const double> w, std::span<const double> b,
                 std::span<const double> x, std::span<double> y);

  // dx[c] = sum_r w[r * dx.size() + c] * dy[r]  (overwrites dx).
  void (*affine_transpose)(std::span<const double> w,
                           std::span<const double> dy, std::span<double> dx);

  // g[r * x.size() + c] += dy[r] * x[c].
  void (*outer_accumulate)(std::span<double> g, std::span<const double> dy,
                           std::span<const double> x);

  // In-place Adam moment update and parameter step.
  void (*adam_update)(std::span<double> params, std::span<double> m,
                      std::span<double> v, std::span<const double> grad,
                      const AdamStep& step);
};

const KernelTable& scalar_kernels();

// nullptr when the binary was built without the AVX2 translation unit.
const KernelTable* avx2_kernels();

bool cpu_supports_avx2();

// Backend in use by the model code. Defaults to the best available one,
// overridable through the environment or select().
const KernelTable& active();
void select(Backend backend);

}  // namespace genesyn::nn::kernels
