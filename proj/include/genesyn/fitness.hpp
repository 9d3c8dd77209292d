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

// Fitness functions: the hidden-target oracles (common functions, longest
// common subsequence), the constant and output edit-distance baselines, and
// the learned scorers built on nn::Model.

#include <array>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "genesyn/dsl.hpp"
#include "genesyn/nn/model.hpp"

namespace genesyn::fitness {

using dsl::ExampleSet;
using dsl::Gene;
using dsl::Int;
using dsl::Value;

enum class FitnessKind {
  kConstant,
  kEditDistance,
  kOracleCF,
  kOracleLCS,
  kLearnedCF,
  kLearnedLCS,
  kFunctionProbability,
};

std::string_view kind_name(FitnessKind kind);
std::optional<FitnessKind> parse_kind(std::string_view name);

enum class EncodingMode { kIO, kIO2, kIODelta };

std::string_view mode_name(EncodingMode mode);
std::optional<EncodingMode> parse_mode(std::string_view name);

inline constexpr std::size_t kSlots = 12;           // per-value pad width
inline constexpr double kNormalizationScale = 256.0;

// 24 (IO), 36 (IO2), 25 (IODelta).
std::size_t feature_width(EncodingMode mode);

struct FeatureVector {
  std::vector<Int> raw;
  std::vector<double> values;  // raw / 256 clamped to [-1, 1]
};

double normalize(Int raw);

// IO:      [input | gene_output]
// IO2:     [input | target_output | gene_output]
// IODelta: [input - target_output | input - gene_output | len(target) - len(gene)]
// Each part is 12 slots; an integer value occupies slot 0, lists truncate
// at 12 and pad with 0. Differences are signed over the overlap with the
// unmatched input tail copied. `target_output` is ignored for IO.
void encode_raw(EncodingMode mode, const dsl::List& input,
                const Value* target_output, const Value& gene_output,
                std::span<Int> out);
FeatureVector encode_features(EncodingMode mode, const dsl::List& input,
                              const Value* target_output,
                              const Value& gene_output);

// |elems(g) ∩ elems(t)| over distinct op ids.
int oracle_cf(const Gene& g, const Gene& t);
// Length of the longest common subsequence of the op-id sequences.
int oracle_lcs(const Gene& g, const Gene& t);

// An integer value flattens to a one-element sequence.
std::vector<Int> flatten(const Value& v);
std::size_t levenshtein(std::span<const Int> a, std::span<const Int> b);

// 1 / (1 + mean per-example Levenshtein distance).
double edit_distance_fitness(std::span<const Value> gene_outputs,
                             std::span<const Value> target_outputs);

// Expected class value of a distribution over 0..n-1.
double expected_class(std::span<const double> probabilities);

double nn_fitness_score(const nn::Model& model, EncodingMode mode,
                        const ExampleSet& examples,
                        std::span<const Value> gene_outputs);

// Per-operation membership probability, indexed by OpId::index().
using ProbabilityMap = std::array<double, dsl::kNumOps>;

ProbabilityMap fp_probability_map(const nn::Model& model,
                                  const ExampleSet& examples);
double fp_score(const ProbabilityMap& pmap, const Gene& g);

class FitnessFunction {
 public:
  virtual ~FitnessFunction() = default;

  // `outputs` are the gene's outputs on the example inputs, in order.
  virtual double score(const Gene& gene, std::span<const Value> outputs) const = 0;

  // True when score() runs model inference (timed separately by search).
  virtual bool uses_model() const { return false; }

  virtual const ProbabilityMap* probability_map() const { return nullptr; }
};

struct FitnessArtifacts {
  FitnessKind kind = FitnessKind::kConstant;
  std::optional<Gene> target;                // oracle kinds
  std::shared_ptr<const nn::Model> model;    // learned and FP kinds
  EncodingMode mode = EncodingMode::kIO;     // learned kinds
};

// Throws Error(kConfig) when the artifacts do not fit the kind.
std::unique_ptr<FitnessFunction> make_fitness(const FitnessArtifacts& artifacts,
                                              const ExampleSet& examples);

}  // namespace genesyn::fitness
