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

// Training-data pipeline: random base programs with example inputs, random
// comparison programs, closeness labels, function-membership rows, the 3:1
// split and the on-disk dataset format.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "genesyn/dsl.hpp"
#include "genesyn/fitness.hpp"
#include "genesyn/nn/model.hpp"
#include "genesyn/rng.hpp"

namespace genesyn::datagen {

using dsl::ExampleSet;
using dsl::Gene;
using dsl::Int;
using dsl::Program;
using fitness::EncodingMode;

struct CorpusConfig {
  std::size_t n_base_programs = 2000;
  std::size_t program_length = 4;
  std::size_t n_comparisons = 20;
  std::size_t n_examples = 10;
  Int value_lo = -256;
  Int value_hi = 255;
  std::size_t min_input_length = 1;
  std::size_t max_input_length = 12;
  std::uint64_t seed = 0;

  void validate() const;
};

struct CorpusEntry {
  Program program;
  ExampleSet examples;
};

using Corpus = std::vector<CorpusEntry>;

dsl::List random_input(Rng& rng, const CorpusConfig& config);

// `m` examples of `program` of which at most half produce the default value
// (0 or []); default-producing inputs are redrawn up to `max_redraws` times.
std::optional<ExampleSet> make_examples(const Program& program, std::size_t m,
                                        Rng& rng, const CorpusConfig& config,
                                        int max_redraws = 100);

// Unique, dead-code-free base programs with their examples. Base i draws from
// its own stream derive_seed(seed, i), in index order.
Corpus generate_corpus(const CorpusConfig& config);

enum class Metric { kCF, kLCS };

// Comparison programs and their outputs on the base inputs. Labels and
// features are materialized per (metric, mode) by label_pairs.
struct PairSet {
  struct Sample {
    std::uint32_t base;
    std::uint32_t comparison;  // index into comparisons
    std::uint32_t example;
    dsl::Value output;         // comparison program on the base input
  };
  std::vector<Gene> comparisons;
  std::vector<Sample> samples;
};

PairSet generate_pairs(const Corpus& corpus, const CorpusConfig& config);

// Raw integer feature rows with labels, flat row-major. The label is a class
// index when label_arity == 1, otherwise a bit mask over label_arity labels.
struct LabeledRows {
  EncodingMode mode = EncodingMode::kIO;
  std::size_t width = 0;
  std::size_t label_arity = 1;
  std::vector<Int> raw;
  std::vector<std::uint64_t> labels;

  std::size_t size() const { return labels.size(); }
  std::span<const Int> row(std::size_t i) const {
    return {raw.data() + i * width, width};
  }
  void add(std::span<const Int> r, std::uint64_t label);
};

int metric_label(Metric metric, const Gene& comparison, const Gene& base);

LabeledRows label_pairs(const Corpus& corpus, const PairSet& pairs,
                        Metric metric, EncodingMode mode);

inline constexpr std::size_t kFunctionLabels = dsl::kNumOps;

std::uint64_t op_mask(const Gene& g);

// One IO-encoded row per (base, example) with the base's op-membership mask.
LabeledRows generate_fp_rows(const Corpus& corpus);

// Seeded shuffle, then the first 3/4 to train and the rest to test.
std::pair<LabeledRows, LabeledRows> split_dataset(const LabeledRows& rows,
                                                  std::uint64_t seed);

// Normalized training set; `n_classes` is only used for single-label rows.
nn::Dataset to_training_set(const LabeledRows& rows, std::size_t n_classes);

// Text format: header "MODE,width,label_arity,row_count", then one line per
// row of comma-separated raw features followed by the label columns.
void write_dataset(const LabeledRows& rows, const std::filesystem::path& path);

struct DatasetExpectation {
  std::optional<EncodingMode> mode;
  std::optional<std::size_t> width;
  std::optional<std::size_t> label_arity;
};

LabeledRows read_dataset(const std::filesystem::path& path,
                         const DatasetExpectation& expect = {});

void write_programs(std::span<const Program> programs,
                    const std::filesystem::path& path);
std::vector<Program> read_programs(const std::filesystem::path& path);

}  // namespace genesyn::datagen
