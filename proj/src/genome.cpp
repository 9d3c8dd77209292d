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

#include "genesyn/genome.hpp"

#include <algorithm>
#include <cmath>

#include "genesyn/error.hpp"

namespace genesyn::genome {

std::vector<std::size_t> detect_dead_code(const Gene& gene) {
  const std::size_t n = gene.length();
  require(n >= 1, "gene must have at least one statement");
  std::vector<bool> live(n, false);
  live[n - 1] = true;
  // Sources always point backwards, so one reverse sweep closes the set.
  for (std::size_t k = n; k-- > 0;) {
    if (!live[k]) continue;
    for (const dsl::ArgSource& src : dsl::resolve_sources(gene, k))
      if (src.kind == dsl::ArgSource::Kind::kStatement) live[src.statement] = true;
  }
  std::vector<std::size_t> dead;
  for (std::size_t k = 0; k < n; ++k)
    if (!live[k]) dead.push_back(k);
  return dead;
}

bool has_dead_code(const Gene& gene) { return !detect_dead_code(gene).empty(); }

Gene remove_statements(const Gene& gene, std::span<const std::size_t> drop) {
  Gene out;
  for (std::size_t k = 0; k < gene.length(); ++k)
    if (!std::binary_search(drop.begin(), drop.end(), k))
      out.ops.push_back(gene.ops[k]);
  return out;
}

OpId random_op(Rng& rng) {
  return OpId(static_cast<int>(uniform_index(rng, dsl::kNumOps)) + 1);
}

std::optional<Gene> random_gene(std::size_t length, Rng& rng, int max_retries) {
  require(length >= 1, "gene length must be at least 1");
  for (int attempt = 0; attempt < max_retries; ++attempt) {
    Gene g;
    g.ops.resize(length);
    for (OpId& op : g.ops) op = random_op(rng);
    if (!has_dead_code(g)) return g;
  }
  return std::nullopt;
}

Gene crossover_at(const Gene& a, const Gene& b, std::size_t cut) {
  require(a.length() == b.length(), "crossover parents differ in length");
  require(cut >= 1 && cut < a.length(), "crossover cut out of range");
  Gene child;
  child.ops.reserve(a.length());
  child.ops.insert(child.ops.end(), a.ops.begin(),
                   a.ops.begin() + static_cast<std::ptrdiff_t>(cut));
  child.ops.insert(child.ops.end(),
                   b.ops.begin() + static_cast<std::ptrdiff_t>(cut), b.ops.end());
  return child;
}

std::optional<Gene> crossover(const Gene& a, const Gene& b, Rng& rng,
                              int max_retries) {
  require(a.length() == b.length(), "crossover parents differ in length");
  if (a.length() < 2) return std::nullopt;
  for (int attempt = 0; attempt < max_retries; ++attempt) {
    std::size_t cut = 1 + uniform_index(rng, a.length() - 1);
    Gene child = crossover_at(a, b, cut);
    if (!has_dead_code(child)) return child;
  }
  return std::nullopt;
}

OpId draw_replacement(OpId current, Rng& rng, std::optional<OpWeights> weights) {
  if (weights) {
    require(weights->size() == dsl::kNumOps, "op weights must have 41 entries");
    std::vector<double> w(weights->begin(), weights->end());
    w[static_cast<std::size_t>(current.index())] = 0.0;
    double total = 0.0;
    for (double x : w) total += x;
    if (total > 0.0)
      return OpId(static_cast<int>(RouletteWheel(w).spin(rng)) + 1);
  }
  // Uniform over the 40 ops other than `current`.
  int pick = static_cast<int>(uniform_index(rng, dsl::kNumOps - 1)) + 1;
  if (pick >= current.value) ++pick;
  return OpId(pick);
}

std::optional<Gene> mutate(const Gene& gene, Rng& rng,
                           std::optional<OpWeights> weights, int max_retries) {
  require(gene.length() >= 1, "cannot mutate an empty gene");
  for (int attempt = 0; attempt < max_retries; ++attempt) {
    Gene child = gene;
    std::size_t k = uniform_index(rng, gene.length());
    child.ops[k] = draw_replacement(gene.ops[k], rng, weights);
    if (!has_dead_code(child)) return child;
  }
  return std::nullopt;
}

RouletteWheel::RouletteWheel(std::span<const double> scores) {
  require(!scores.empty(), "roulette over an empty score sequence");
  cumulative_.reserve(scores.size());
  for (double s : scores) {
    require(s >= 0.0 && std::isfinite(s), "roulette scores must be finite and >= 0");
    total_ += s;
    cumulative_.push_back(total_);
  }
}

std::size_t RouletteWheel::spin(Rng& rng) const {
  if (total_ <= 0.0) return uniform_index(rng, cumulative_.size());
  double r = std::uniform_real_distribution<double>(0.0, total_)(rng);
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), r);
  if (it == cumulative_.end()) --it;
  return static_cast<std::size_t>(it - cumulative_.begin());
}

double RouletteWheel::probability(std::size_t i) const {
  if (total_ <= 0.0) return 1.0 / static_cast<double>(cumulative_.size());
  double prev = i == 0 ? 0.0 : cumulative_[i - 1];
  return (cumulative_[i] - prev) / total_;
}

std::size_t roulette_select(std::span<const double> scores, Rng& rng) {
  return RouletteWheel(scores).spin(rng);
}

}  // namespace genesyn::genome
