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

// Genetic search over fixed-length genes with elitism, Roulette Wheel
// selection, single-point crossover and point mutation, optionally
// interleaved with neighborhood search around the top genes once the mean
// fitness stops improving.

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "genesyn/dsl.hpp"
#include "genesyn/fitness.hpp"
#include "genesyn/rng.hpp"

namespace genesyn::search {

using dsl::ExampleSet;
using dsl::Gene;
using dsl::Program;
using dsl::Value;

enum class NsMode { kBFS, kDFS };

struct SearchConfig {
  std::size_t population_size = 100;
  double elite_fraction = 0.20;
  double crossover_rate = 0.40;
  double mutation_rate = 0.30;  // the remaining 0.30 is Roulette reproduction
  std::size_t gene_length = 4;
  std::size_t max_generations = 30000;
  std::uint64_t candidate_budget = 3'000'000;
  bool ns_enabled = false;
  NsMode ns_mode = NsMode::kBFS;
  std::size_t ns_top_n = 5;
  std::size_t ns_window = 10;
  // Draw mutation replacements from the fitness's probability map, if any.
  bool guided_mutation = false;
  std::uint64_t seed = 0;

  std::size_t elite_count() const;
  void validate() const;  // throws Error(kConfig)
};

struct Individual {
  Gene gene;
  std::vector<Value> outputs;  // one per example
  double score = 0.0;
};

struct Population {
  std::vector<Individual> members;
  std::size_t generation_index = 0;
};

enum class CandidateOrigin { kInitial, kOffspring, kNeighbor };

// Called once for every candidate counted against the budget.
using CandidateObserver = std::function<void(const Gene&, CandidateOrigin)>;

struct SearchState {
  Population population;
  std::vector<double> mean_fitness_history;
  std::uint64_t candidates_evaluated = 0;
  std::uint64_t ns_invocations = 0;
  std::chrono::nanoseconds inference_time{0};
  std::optional<Gene> found;
  bool budget_exhausted = false;
  std::optional<std::size_t> last_ns_generation;
};

struct SearchReport {
  std::optional<Program> found;
  std::uint64_t candidates_evaluated = 0;
  std::size_t generations = 0;
  std::uint64_t ns_invocations = 0;
  std::chrono::nanoseconds wall_time{0};
  std::chrono::nanoseconds inference_time{0};
  std::uint64_t seed = 0;
};

// True iff both windows are non-empty (history longer than w) and the mean of
// the last w entries is <= the mean of everything before them.
bool ns_trigger(std::span<const double> history, std::size_t window);

class Search {
 public:
  Search(const ExampleSet& examples, const fitness::FitnessFunction& fitness,
         const SearchConfig& config, CandidateObserver observer = {});

  // Generation 0: population_size random dead-code-free genes.
  void initialize();

  // Records the current mean fitness, then replaces the population with the
  // elites plus crossover / mutation / reproduction offspring.
  void step_generation();

  // Runs neighborhood search when the trigger holds and at least `window`
  // generations passed since the previous invocation. Returns true if run.
  bool maybe_neighborhood_search();

  std::optional<Gene> neighborhood_bfs(std::span<const Gene> top);
  std::optional<Gene> neighborhood_dfs(std::span<const Gene> top);

  // Best n genes by score; ties keep population order.
  std::vector<Gene> top_genes(std::size_t n) const;

  bool finished() const;
  const SearchState& state() const { return state_; }
  SearchReport report(std::chrono::nanoseconds wall_time) const;

 private:
  // Counts the candidate, runs it on the examples and checks it against
  // them. Returns nullopt (without counting) once the budget is spent.
  std::optional<Individual> evaluate(Gene gene, CandidateOrigin origin,
                                     bool want_score);
  double timed_score(const Gene& gene, std::span<const Value> outputs);
  bool stopped() const { return state_.found || state_.budget_exhausted; }

  const ExampleSet& examples_;
  const fitness::FitnessFunction& fitness_;
  SearchConfig config_;
  CandidateObserver observer_;
  Rng rng_;
  SearchState state_;
};

SearchReport synthesize(const ExampleSet& examples,
                        const fitness::FitnessArtifacts& fitness,
                        const SearchConfig& config,
                        CandidateObserver observer = {});

}  // namespace genesyn::search
