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

#include "genesyn/search.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "genesyn/error.hpp"
#include "genesyn/genome.hpp"

namespace genesyn::search {
namespace {

using Clock = std::chrono::steady_clock;

constexpr int kInitialGeneAttempts = 1000;

double mean(std::span<const double> xs) {
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

}  // namespace

std::size_t SearchConfig::elite_count() const {
  return static_cast<std::size_t>(
      std::llround(elite_fraction * static_cast<double>(population_size)));
}

void SearchConfig::validate() const {
  if (population_size < 1) fail(ErrorCode::kConfig, "population size must be >= 1");
  if (gene_length < 1) fail(ErrorCode::kConfig, "gene length must be >= 1");
  if (crossover_rate < 0 || mutation_rate < 0 || crossover_rate + mutation_rate > 1.0 + 1e-12)
    fail(ErrorCode::kConfig, "crossover and mutation rates must be >= 0 and sum to <= 1");
  double elites = elite_fraction * static_cast<double>(population_size);
  if (elite_fraction < 0 || elite_fraction > 1 ||
      std::abs(elites - std::round(elites)) > 1e-9)
    fail(ErrorCode::kConfig, "elite_fraction * population_size must be a whole count");
  if (candidate_budget < population_size)
    fail(ErrorCode::kConfig, "candidate budget must cover the initial population");
  if (ns_top_n < 1 || ns_window < 1)
    fail(ErrorCode::kConfig, "ns_top_n and ns_window must be >= 1");
}

bool ns_trigger(std::span<const double> history, std::size_t window) {
  if (window == 0 || history.size() <= window) return false;
  auto split = history.size() - window;
  return mean(history.subspan(split)) <= mean(history.first(split));
}

Search::Search(const ExampleSet& examples, const fitness::FitnessFunction& fitness,
               const SearchConfig& config, CandidateObserver observer)
    : examples_(examples),
      fitness_(fitness),
      config_(config),
      observer_(std::move(observer)),
      rng_(config.seed) {
  config_.validate();
  require(examples.size() > 0, "search needs at least one example");
}

double Search::timed_score(const Gene& gene, std::span<const Value> outputs) {
  if (!fitness_.uses_model()) return fitness_.score(gene, outputs);
  auto t0 = Clock::now();
  double s = fitness_.score(gene, outputs);
  state_.inference_time += Clock::now() - t0;
  return s;
}

std::optional<Individual> Search::evaluate(Gene gene, CandidateOrigin origin,
                                           bool want_score) {
  if (state_.candidates_evaluated >= config_.candidate_budget) {
    state_.budget_exhausted = true;
    return std::nullopt;
  }
  ++state_.candidates_evaluated;
  if (observer_) observer_(gene, origin);
  auto outputs = dsl::run_on_examples(gene, examples_);
  Individual ind{std::move(gene), std::move(outputs), 0.0};
  if (dsl::outputs_match(ind.outputs, examples_)) state_.found = ind.gene;
  if (want_score) ind.score = timed_score(ind.gene, ind.outputs);
  return ind;
}

void Search::initialize() {
  state_.population = {};
  for (std::size_t i = 0; i < config_.population_size && !stopped(); ++i) {
    std::optional<Gene> g;
    for (int attempt = 0; attempt < kInitialGeneAttempts && !g; ++attempt)
      g = genome::random_gene(config_.gene_length, rng_);
    if (!g) fail(ErrorCode::kRetryBudget, "cannot draw a dead-code-free gene");
    if (auto ind = evaluate(*std::move(g), CandidateOrigin::kInitial, true))
      state_.population.members.push_back(*std::move(ind));
  }
}

void Search::step_generation() {
  auto& members = state_.population.members;
  require(!members.empty(), "step_generation on an empty population");
  std::vector<double> scores;
  scores.reserve(members.size());
  for (const auto& m : members) scores.push_back(m.score);
  state_.mean_fitness_history.push_back(mean(scores));

  std::vector<std::size_t> order(members.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  genome::RouletteWheel wheel(scores);
  std::optional<genome::OpWeights> weights;
  if (config_.guided_mutation)
    if (const auto* pmap = fitness_.probability_map()) weights = genome::OpWeights(*pmap);

  Population next;
  next.generation_index = state_.population.generation_index + 1;
  const std::size_t n_elite = std::min(config_.elite_count(), members.size());
  for (std::size_t i = 0; i < n_elite; ++i) next.members.push_back(members[order[i]]);

  while (next.members.size() < config_.population_size && !stopped()) {
    const double r = uniform_unit(rng_);
    std::optional<Gene> child;
    if (r < config_.crossover_rate) {
      const Gene& a = members[wheel.spin(rng_)].gene;
      const Gene& b = members[wheel.spin(rng_)].gene;
      child = genome::crossover(a, b, rng_);
    } else if (r < config_.crossover_rate + config_.mutation_rate) {
      child = genome::mutate(members[wheel.spin(rng_)].gene, rng_, weights);
    }
    if (child) {
      if (auto ind = evaluate(*std::move(child), CandidateOrigin::kOffspring, true))
        next.members.push_back(*std::move(ind));
      continue;
    }
    // Reproduction, also the fallback when an operator's retries run out.
    // The copy is a fresh candidate; its outputs and score are the parent's.
    const Individual& parent = members[wheel.spin(rng_)];
    if (state_.candidates_evaluated >= config_.candidate_budget) {
      state_.budget_exhausted = true;
      break;
    }
    ++state_.candidates_evaluated;
    if (observer_) observer_(parent.gene, CandidateOrigin::kOffspring);
    next.members.push_back(parent);
  }
  state_.population = std::move(next);
}

std::vector<Gene> Search::top_genes(std::size_t n) const {
  const auto& members = state_.population.members;
  std::vector<std::size_t> order(members.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return members[a].score > members[b].score;
  });
  std::vector<Gene> out;
  for (std::size_t i = 0; i < std::min(n, order.size()); ++i)
    out.push_back(members[order[i]].gene);
  return out;
}

std::optional<Gene> Search::neighborhood_bfs(std::span<const Gene> top) {
  for (const Gene& g : top) {
    for (std::size_t i = 0; i < g.length(); ++i) {
      for (int j = 1; j <= dsl::kNumOps; ++j) {
        if (g.ops[i] == dsl::OpId(j)) continue;
        Gene n = g;
        n.ops[i] = dsl::OpId(j);
        evaluate(std::move(n), CandidateOrigin::kNeighbor, false);
        if (state_.found) return state_.found;
        if (state_.budget_exhausted) return std::nullopt;
      }
    }
  }
  return std::nullopt;
}

std::optional<Gene> Search::neighborhood_dfs(std::span<const Gene> top) {
  for (const Gene& g : top) {
    Gene base = g;
    for (std::size_t i = 0; i < base.length(); ++i) {
      std::optional<Individual> best;
      for (int j = 1; j <= dsl::kNumOps; ++j) {
        if (base.ops[i] == dsl::OpId(j)) continue;
        Gene n = base;
        n.ops[i] = dsl::OpId(j);
        auto ind = evaluate(std::move(n), CandidateOrigin::kNeighbor, true);
        if (state_.found) return state_.found;
        if (!ind) return std::nullopt;
        if (!best || ind->score > best->score) best = std::move(ind);
      }
      base = best->gene;
    }
  }
  return std::nullopt;
}

bool Search::maybe_neighborhood_search() {
  if (!config_.ns_enabled || stopped()) return false;
  const std::size_t gen = state_.population.generation_index;
  if (state_.last_ns_generation && gen - *state_.last_ns_generation < config_.ns_window)
    return false;
  if (!ns_trigger(state_.mean_fitness_history, config_.ns_window)) return false;
  state_.last_ns_generation = gen;
  ++state_.ns_invocations;
  auto top = top_genes(config_.ns_top_n);
  if (config_.ns_mode == NsMode::kBFS)
    neighborhood_bfs(top);
  else
    neighborhood_dfs(top);
  return true;
}

bool Search::finished() const {
  return stopped() || state_.population.generation_index >= config_.max_generations;
}

SearchReport Search::report(std::chrono::nanoseconds wall_time) const {
  SearchReport r;
  if (state_.found) {
    require(dsl::check_equivalence(*state_.found, examples_),
            "reported program does not reproduce the examples");
    r.found = state_.found;
  }
  r.candidates_evaluated = state_.candidates_evaluated;
  r.generations = state_.population.generation_index;
  r.ns_invocations = state_.ns_invocations;
  r.wall_time = wall_time;
  r.inference_time = state_.inference_time;
  r.seed = config_.seed;
  return r;
}

SearchReport synthesize(const ExampleSet& examples,
                        const fitness::FitnessArtifacts& artifacts,
                        const SearchConfig& config, CandidateObserver observer) {
  const auto t0 = Clock::now();
  // Building the FP scorer runs the model once per target; count it as
  // inference alongside per-gene scoring.
  auto fitness = fitness::make_fitness(artifacts, examples);
  const auto setup_inference =
      artifacts.kind == fitness::FitnessKind::kFunctionProbability
          ? Clock::now() - t0
          : Clock::duration::zero();

  Search search(examples, *fitness, config, std::move(observer));
  search.initialize();
  while (!search.finished()) {
    search.step_generation();
    search.maybe_neighborhood_search();
  }
  auto report = search.report(Clock::now() - t0);
  report.inference_time += setup_inference;
  return report;
}

}  // namespace genesyn::search
