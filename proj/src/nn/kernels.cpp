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

#include "genesyn/nn/kernels.hpp"

#include <cstdlib>
#include <string>

#include "genesyn/error.hpp"

namespace genesyn::nn::kernels {

#ifndef GENESYN_HAVE_AVX2
const KernelTable* avx2_kernels() { return nullptr; }
#endif

std::string_view backend_name(Backend b) {
  return b == Backend::kAvx2 ? "avx2" : "scalar";
}

bool cpu_supports_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

namespace {

const KernelTable* best_available() {
  if (const char* env = std::getenv("GENESYN_KERNELS");
      env && std::string(env) == "scalar")
    return &scalar_kernels();
  if (avx2_kernels() && cpu_supports_avx2()) return avx2_kernels();
  return &scalar_kernels();
}

const KernelTable*& current() {
  static const KernelTable* table = best_available();
  return table;
}

}  // namespace

const KernelTable& active() { return *current(); }

void select(Backend backend) {
  if (backend == Backend::kScalar) {
    current() = &scalar_kernels();
    return;
  }
  if (!avx2_kernels() || !cpu_supports_avx2())
    fail(ErrorCode::kConfig, "avx2 kernels are not available on this machine");
  current() = avx2_kernels();
}

}  // namespace genesyn::nn::kernels
