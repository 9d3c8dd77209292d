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

// Genes and the evolutionary operators over them. Every operator that can
// produce dead code rejection-samples until it does not, within a retry
// budget; exhausting the budget is reported as std::nullopt.

#include <optional>
#include <span>
#include <vector>

#include "genesyn/dsl.hpp"
#include "genesyn/rng.hpp"

namespace genesyn::genome {

using dsl::Gene;
using dsl::OpId;

inline constexpr int kDefaultRetries = 100;

// Per-operation weights indexed by OpId::index(); see fitness::ProbabilityMap.
using OpWeights = std::span<const double>;

// Statements whose outputs never reach the final statement, ascending.
std::vector<std::size_t> detect_dead_code(const Gene& gene);
bool has_dead_code(const Gene& gene);

// Removes the given statements (sorted, unique) from the gene.
Gene remove_statements(const Gene& gene, std::span<const std::size_t> drop);

OpId random_op(Rng& rng);

std::optional<Gene> random_gene(std::size_t length, Rng& rng,
                                int max_retries = kDefaultRetries);

// Single-point crossover at `cut` in [1, L-1]: a[0, cut) ++ b[cut, L).
Gene crossover_at(const Gene& a, const Gene& b, std::size_t cut);
std::optional<Gene> crossover(const Gene& a, const Gene& b, Rng& rng,
                              int max_retries = kDefaultRetries);

// Draws a replacement for `current`, never equal to it: uniform over the
// other 40 ops, or Roulette-weighted by `weights` when given (uniform again
// if all the other weights are zero).
OpId draw_replacement(OpId current, Rng& rng,
                      std::optional<OpWeights> weights = std::nullopt);
std::optional<Gene> mutate(const Gene& gene, Rng& rng,
                           std::optional<OpWeights> weights = std::nullopt,
                           int max_retries = kDefaultRetries);

// Cumulative-sum wheel, built once per generation and sampled many times.
class RouletteWheel {
 public:
  explicit RouletteWheel(std::span<const double> scores);

  std::size_t spin(Rng& rng) const;
  double probability(std::size_t i) const;
  std::size_t size() const { return cumulative_.size(); }

 private:
  std::vector<double> cumulative_;
  double total_ = 0.0;
};

std::size_t roulette_select(std::span<const double> scores, Rng& rng);

}  // namespace genesyn::genome
