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

#include "genesyn/datagen.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <unordered_set>

#include "genesyn/error.hpp"
#include "genesyn/genome.hpp"

namespace genesyn::datagen {
namespace {

constexpr int kProgramAttempts = 1000;

std::string program_key(const Program& p) {
  std::string key;
  for (auto op : p.ops) key.push_back(static_cast<char>(op.value));
  return key;
}

Gene draw_gene(std::size_t length, Rng& rng) {
  for (int attempt = 0; attempt < kProgramAttempts; ++attempt)
    if (auto g = genome::random_gene(length, rng)) return *std::move(g);
  fail(ErrorCode::kRetryBudget, "could not draw a dead-code-free program of length " +
                                    std::to_string(length));
}

}  // namespace

void CorpusConfig::validate() const {
  if (n_base_programs < 1 || program_length < 1 || n_comparisons < 1 || n_examples < 1)
    fail(ErrorCode::kConfig, "corpus counts must all be at least 1");
  if (value_lo > value_hi) fail(ErrorCode::kConfig, "empty input value range");
  if (min_input_length > max_input_length || max_input_length > fitness::kSlots)
    fail(ErrorCode::kConfig, "input lengths must lie within [0, 12]");
}

dsl::List random_input(Rng& rng, const CorpusConfig& config) {
  std::size_t len = std::uniform_int_distribution<std::size_t>(
      config.min_input_length, config.max_input_length)(rng);
  std::uniform_int_distribution<Int> value(config.value_lo, config.value_hi);
  dsl::List xs(len);
  for (Int& x : xs) x = value(rng);
  return xs;
}

std::optional<ExampleSet> make_examples(const Program& program, std::size_t m,
                                        Rng& rng, const CorpusConfig& config,
                                        int max_redraws) {
  ExampleSet set;
  std::size_t defaults = 0;
  for (std::size_t j = 0; j < m; ++j) {
    dsl::List in = random_input(rng, config);
    dsl::Value out = dsl::run_program(program, in);
    defaults += dsl::is_default(out);
    set.examples.push_back({std::move(in), std::move(out)});
  }
  for (int redraw = 0; defaults * 2 > m; ++redraw) {
    if (redraw >= max_redraws) return std::nullopt;
    auto it = std::find_if(set.examples.begin(), set.examples.end(),
                           [](const dsl::IOExample& ex) { return dsl::is_default(ex.output); });
    dsl::List in = random_input(rng, config);
    dsl::Value out = dsl::run_program(program, in);
    if (!dsl::is_default(out)) --defaults;
    *it = {std::move(in), std::move(out)};
  }
  return set;
}

Corpus generate_corpus(const CorpusConfig& config) {
  config.validate();
  Corpus corpus;
  corpus.reserve(config.n_base_programs);
  std::unordered_set<std::string> seen;
  for (std::size_t b = 0; b < config.n_base_programs; ++b) {
    Rng rng(derive_seed(config.seed, b));
    bool placed = false;
    for (int attempt = 0; attempt < kProgramAttempts && !placed; ++attempt) {
      Gene g = draw_gene(config.program_length, rng);
      if (seen.contains(program_key(g))) continue;
      auto examples = make_examples(g, config.n_examples, rng, config);
      if (!examples) continue;
      seen.insert(program_key(g));
      corpus.push_back({std::move(g), *std::move(examples)});
      placed = true;
    }
    if (!placed)
      fail(ErrorCode::kRetryBudget,
           "could not find a new unique base program for index " + std::to_string(b));
  }
  return corpus;
}

PairSet generate_pairs(const Corpus& corpus, const CorpusConfig& config) {
  require(!corpus.empty(), "corpus is empty");
  std::unordered_set<std::string> corpus_keys;
  for (const auto& e : corpus) corpus_keys.insert(program_key(e.program));

  PairSet pairs;
  pairs.comparisons.reserve(corpus.size() * config.n_comparisons);
  for (std::size_t b = 0; b < corpus.size(); ++b) {
    Rng rng(derive_seed(config.seed, b, 1));
    const auto& base = corpus[b];
    for (std::size_t c = 0; c < config.n_comparisons; ++c) {
      Gene r = draw_gene(base.program.length(), rng);
      while (corpus_keys.contains(program_key(r)))
        r = draw_gene(base.program.length(), rng);
      auto ci = static_cast<std::uint32_t>(pairs.comparisons.size());
      for (std::size_t e = 0; e < base.examples.size(); ++e)
        pairs.samples.push_back({static_cast<std::uint32_t>(b), ci,
                                 static_cast<std::uint32_t>(e),
                                 dsl::run_program(r, base.examples[e].input)});
      pairs.comparisons.push_back(std::move(r));
    }
  }
  return pairs;
}

void LabeledRows::add(std::span<const Int> r, std::uint64_t label) {
  require(r.size() == width, "row width does not match the dataset");
  raw.insert(raw.end(), r.begin(), r.end());
  labels.push_back(label);
}

int metric_label(Metric metric, const Gene& comparison, const Gene& base) {
  return metric == Metric::kCF ? fitness::oracle_cf(comparison, base)
                               : fitness::oracle_lcs(comparison, base);
}

LabeledRows label_pairs(const Corpus& corpus, const PairSet& pairs, Metric metric,
                        EncodingMode mode) {
  LabeledRows rows{mode, fitness::feature_width(mode), 1, {}, {}};
  rows.raw.reserve(pairs.samples.size() * rows.width);
  rows.labels.reserve(pairs.samples.size());
  std::vector<Int> buf(rows.width);
  for (const auto& s : pairs.samples) {
    const auto& base = corpus[s.base];
    const auto& ex = base.examples[s.example];
    fitness::encode_raw(mode, ex.input, &ex.output, s.output, buf);
    rows.add(buf, static_cast<std::uint64_t>(
                      metric_label(metric, pairs.comparisons[s.comparison], base.program)));
  }
  return rows;
}

std::uint64_t op_mask(const Gene& g) {
  std::uint64_t mask = 0;
  for (auto op : g.ops) mask |= std::uint64_t{1} << op.index();
  return mask;
}

LabeledRows generate_fp_rows(const Corpus& corpus) {
  require(!corpus.empty(), "corpus is empty");
  LabeledRows rows{EncodingMode::kIO, fitness::feature_width(EncodingMode::kIO),
                   kFunctionLabels, {}, {}};
  std::vector<Int> buf(rows.width);
  for (const auto& entry : corpus) {
    std::uint64_t mask = op_mask(entry.program);
    for (const auto& ex : entry.examples.examples) {
      fitness::encode_raw(EncodingMode::kIO, ex.input, nullptr, ex.output, buf);
      rows.add(buf, mask);
    }
  }
  return rows;
}

std::pair<LabeledRows, LabeledRows> split_dataset(const LabeledRows& rows,
                                                  std::uint64_t seed) {
  if (rows.size() < 4) fail(ErrorCode::kData, "need at least 4 rows to split 3:1");
  std::vector<std::size_t> order(rows.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  const std::size_t n_test = rows.size() / 4;
  const std::size_t n_train = rows.size() - n_test;
  LabeledRows train{rows.mode, rows.width, rows.label_arity, {}, {}};
  LabeledRows test = train;
  for (std::size_t i = 0; i < order.size(); ++i)
    (i < n_train ? train : test).add(rows.row(order[i]), rows.labels[order[i]]);
  return {std::move(train), std::move(test)};
}

nn::Dataset to_training_set(const LabeledRows& rows, std::size_t n_classes) {
  nn::Dataset data;
  data.input_width = rows.width;
  if (rows.label_arity == 1) {
    data.head = nn::HeadKind::kSoftmax;
    data.n_outputs = n_classes;
  } else {
    data.head = nn::HeadKind::kSigmoidMultilabel;
    data.n_outputs = rows.label_arity;
  }
  data.features.resize(rows.raw.size());
  std::transform(rows.raw.begin(), rows.raw.end(), data.features.begin(),
                 fitness::normalize);
  data.labels = rows.labels;
  if (data.head == nn::HeadKind::kSoftmax)
    for (auto y : data.labels)
      if (y >= n_classes)
        fail(ErrorCode::kData, "class label " + std::to_string(y) +
                                   " exceeds the class count");
  return data;
}

}  // namespace genesyn::datagen
