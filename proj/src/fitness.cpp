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

#include "genesyn/fitness.hpp"

#include <algorithm>
#include <bitset>
#include <numeric>

#include "genesyn/error.hpp"

namespace genesyn::fitness {
namespace {

using dsl::List;

std::span<const Int> as_seq(const Value& v, Int& scratch) {
  if (const Int* i = std::get_if<Int>(&v)) {
    scratch = *i;
    return {&scratch, 1};
  }
  return std::get<List>(v);
}

std::size_t value_length(const Value& v) {
  return std::holds_alternative<Int>(v) ? 1 : std::get<List>(v).size();
}

void put_slots(std::span<const Int> seq, std::span<Int> out) {
  std::fill(out.begin(), out.end(), 0);
  std::copy_n(seq.begin(), std::min(seq.size(), out.size()), out.begin());
}

// input - other over the overlap; unmatched input elements copied.
void put_delta(const List& input, const Value& other, std::span<Int> out) {
  Int scratch = 0;
  auto seq = as_seq(other, scratch);
  std::fill(out.begin(), out.end(), 0);
  for (std::size_t i = 0; i < std::min(input.size(), out.size()); ++i)
    out[i] = i < seq.size() ? dsl::sat_sub(input[i], seq[i]) : input[i];
}

std::bitset<dsl::kNumOps> op_set(const Gene& g) {
  std::bitset<dsl::kNumOps> s;
  for (auto op : g.ops) s.set(static_cast<std::size_t>(op.index()));
  return s;
}

class ConstantFitness final : public FitnessFunction {
 public:
  double score(const Gene&, std::span<const Value>) const override { return 1.0; }
};

class EditDistanceFitness final : public FitnessFunction {
 public:
  explicit EditDistanceFitness(const ExampleSet& examples) {
    for (const auto& ex : examples.examples) targets_.push_back(ex.output);
  }
  double score(const Gene&, std::span<const Value> outputs) const override {
    return edit_distance_fitness(outputs, targets_);
  }

 private:
  std::vector<Value> targets_;
};

class OracleFitness final : public FitnessFunction {
 public:
  OracleFitness(Gene target, bool lcs) : target_(std::move(target)), lcs_(lcs) {}
  double score(const Gene& gene, std::span<const Value>) const override {
    return lcs_ ? oracle_lcs(gene, target_) : oracle_cf(gene, target_);
  }

 private:
  Gene target_;
  bool lcs_;
};

class LearnedFitness final : public FitnessFunction {
 public:
  LearnedFitness(std::shared_ptr<const nn::Model> model, EncodingMode mode,
                 const ExampleSet& examples)
      : model_(std::move(model)), mode_(mode), examples_(examples) {}
  double score(const Gene&, std::span<const Value> outputs) const override {
    return nn_fitness_score(*model_, mode_, examples_, outputs);
  }
  bool uses_model() const override { return true; }

 private:
  std::shared_ptr<const nn::Model> model_;
  EncodingMode mode_;
  ExampleSet examples_;
};

class FunctionProbabilityFitness final : public FitnessFunction {
 public:
  explicit FunctionProbabilityFitness(const ProbabilityMap& pmap) : pmap_(pmap) {}
  double score(const Gene& gene, std::span<const Value>) const override {
    return fp_score(pmap_, gene);
  }
  const ProbabilityMap* probability_map() const override { return &pmap_; }

 private:
  ProbabilityMap pmap_;
};

}  // namespace

std::string_view kind_name(FitnessKind kind) {
  switch (kind) {
    case FitnessKind::kConstant: return "constant";
    case FitnessKind::kEditDistance: return "edit";
    case FitnessKind::kOracleCF: return "oracle-cf";
    case FitnessKind::kOracleLCS: return "oracle-lcs";
    case FitnessKind::kLearnedCF: return "learned-cf";
    case FitnessKind::kLearnedLCS: return "learned-lcs";
    case FitnessKind::kFunctionProbability: return "fp";
  }
  return "?";
}

std::optional<FitnessKind> parse_kind(std::string_view name) {
  for (auto k : {FitnessKind::kConstant, FitnessKind::kEditDistance,
                 FitnessKind::kOracleCF, FitnessKind::kOracleLCS,
                 FitnessKind::kLearnedCF, FitnessKind::kLearnedLCS,
                 FitnessKind::kFunctionProbability})
    if (kind_name(k) == name) return k;
  return std::nullopt;
}

std::string_view mode_name(EncodingMode mode) {
  switch (mode) {
    case EncodingMode::kIO: return "IO";
    case EncodingMode::kIO2: return "IO2";
    case EncodingMode::kIODelta: return "IODELTA";
  }
  return "?";
}

std::optional<EncodingMode> parse_mode(std::string_view name) {
  for (auto m : {EncodingMode::kIO, EncodingMode::kIO2, EncodingMode::kIODelta})
    if (mode_name(m) == name) return m;
  return std::nullopt;
}

std::size_t feature_width(EncodingMode mode) {
  switch (mode) {
    case EncodingMode::kIO: return 2 * kSlots;
    case EncodingMode::kIO2: return 3 * kSlots;
    case EncodingMode::kIODelta: return 2 * kSlots + 1;
  }
  return 0;
}

double normalize(Int raw) {
  return std::clamp(static_cast<double>(raw) / kNormalizationScale, -1.0, 1.0);
}

void encode_raw(EncodingMode mode, const List& input, const Value* target_output,
                const Value& gene_output, std::span<Int> out) {
  require(out.size() == feature_width(mode), "feature buffer has the wrong width");
  require(mode == EncodingMode::kIO || target_output != nullptr,
          "this encoding needs the target output");
  Int scratch = 0;
  auto slot = [&](std::size_t part) { return out.subspan(part * kSlots, kSlots); };
  switch (mode) {
    case EncodingMode::kIO:
      put_slots(input, slot(0));
      put_slots(as_seq(gene_output, scratch), slot(1));
      break;
    case EncodingMode::kIO2:
      put_slots(input, slot(0));
      put_slots(as_seq(*target_output, scratch), slot(1));
      put_slots(as_seq(gene_output, scratch), slot(2));
      break;
    case EncodingMode::kIODelta:
      put_delta(input, *target_output, slot(0));
      put_delta(input, gene_output, slot(1));
      out[2 * kSlots] = static_cast<Int>(value_length(*target_output)) -
                        static_cast<Int>(value_length(gene_output));
      break;
  }
}

FeatureVector encode_features(EncodingMode mode, const List& input,
                              const Value* target_output, const Value& gene_output) {
  FeatureVector fv;
  fv.raw.resize(feature_width(mode));
  encode_raw(mode, input, target_output, gene_output, fv.raw);
  fv.values.resize(fv.raw.size());
  std::transform(fv.raw.begin(), fv.raw.end(), fv.values.begin(), normalize);
  return fv;
}

int oracle_cf(const Gene& g, const Gene& t) {
  return static_cast<int>((op_set(g) & op_set(t)).count());
}

int oracle_lcs(const Gene& g, const Gene& t) {
  const std::size_t n = g.length(), m = t.length();
  std::vector<int> prev(m + 1, 0), cur(m + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j)
      cur[j] = g.ops[i - 1] == t.ops[j - 1] ? prev[j - 1] + 1
                                            : std::max(prev[j], cur[j - 1]);
    std::swap(prev, cur);
  }
  return prev[m];
}

std::vector<Int> flatten(const Value& v) {
  if (const Int* i = std::get_if<Int>(&v)) return {*i};
  return std::get<List>(v);
}

std::size_t levenshtein(std::span<const Int> a, std::span<const Int> b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  std::iota(prev.begin(), prev.end(), 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j)
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1,
                         prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double edit_distance_fitness(std::span<const Value> gene_outputs,
                             std::span<const Value> target_outputs) {
  require(gene_outputs.size() == target_outputs.size() && !gene_outputs.empty(),
          "edit distance needs aligned, non-empty output sequences");
  double total = 0.0;
  Int sa = 0, sb = 0;
  for (std::size_t j = 0; j < gene_outputs.size(); ++j)
    total += static_cast<double>(
        levenshtein(as_seq(gene_outputs[j], sa), as_seq(target_outputs[j], sb)));
  return 1.0 / (1.0 + total / static_cast<double>(gene_outputs.size()));
}

double expected_class(std::span<const double> probabilities) {
  double e = 0.0;
  for (std::size_t k = 0; k < probabilities.size(); ++k)
    e += static_cast<double>(k) * probabilities[k];
  return e;
}

double nn_fitness_score(const nn::Model& model, EncodingMode mode,
                        const ExampleSet& examples,
                        std::span<const Value> gene_outputs) {
  require(model.spec.head == nn::HeadKind::kSoftmax,
          "closeness scoring needs a softmax model");
  require(gene_outputs.size() == examples.size() && examples.size() > 0,
          "one gene output per example is required");
  if (model.spec.input_width != feature_width(mode))
    fail(ErrorCode::kConfig, "model input width does not match the " +
                                 std::string(mode_name(mode)) + " encoding");
  std::vector<Int> raw(feature_width(mode));
  std::vector<double> x(raw.size());
  nn::ForwardBuffers buffers;
  double total = 0.0;
  for (std::size_t j = 0; j < examples.size(); ++j) {
    encode_raw(mode, examples[j].input, &examples[j].output, gene_outputs[j], raw);
    std::transform(raw.begin(), raw.end(), x.begin(), normalize);
    total += expected_class(nn::forward(model, x, buffers));
  }
  return total / static_cast<double>(examples.size());
}

ProbabilityMap fp_probability_map(const nn::Model& model, const ExampleSet& examples) {
  require(model.spec.head == nn::HeadKind::kSigmoidMultilabel &&
              model.spec.n_outputs == dsl::kNumOps,
          "function probabilities need a 41-label sigmoid model");
  require(examples.size() > 0, "no examples");
  if (model.spec.input_width != feature_width(EncodingMode::kIO))
    fail(ErrorCode::kConfig, "function-probability model must take IO features");
  ProbabilityMap pmap{};
  nn::ForwardBuffers buffers;
  for (const auto& ex : examples.examples) {
    auto fv = encode_features(EncodingMode::kIO, ex.input, nullptr, ex.output);
    auto p = nn::forward(model, fv.values, buffers);
    for (std::size_t k = 0; k < pmap.size(); ++k) pmap[k] += p[k];
  }
  for (double& p : pmap) p /= static_cast<double>(examples.size());
  return pmap;
}

double fp_score(const ProbabilityMap& pmap, const Gene& g) {
  auto s = op_set(g);
  double total = 0.0;
  for (std::size_t k = 0; k < pmap.size(); ++k)
    if (s.test(k)) total += pmap[k];
  return total;
}

std::unique_ptr<FitnessFunction> make_fitness(const FitnessArtifacts& a,
                                              const ExampleSet& examples) {
  switch (a.kind) {
    case FitnessKind::kConstant:
      return std::make_unique<ConstantFitness>();
    case FitnessKind::kEditDistance:
      return std::make_unique<EditDistanceFitness>(examples);
    case FitnessKind::kOracleCF:
    case FitnessKind::kOracleLCS:
      if (!a.target)
        fail(ErrorCode::kConfig, "oracle fitness needs the target program");
      return std::make_unique<OracleFitness>(*a.target,
                                             a.kind == FitnessKind::kOracleLCS);
    case FitnessKind::kLearnedCF:
    case FitnessKind::kLearnedLCS:
      if (!a.model) fail(ErrorCode::kConfig, "learned fitness needs a model");
      if (a.model->spec.head != nn::HeadKind::kSoftmax ||
          a.model->spec.input_width != feature_width(a.mode))
        fail(ErrorCode::kConfig, "model does not fit the learned fitness / encoding");
      return std::make_unique<LearnedFitness>(a.model, a.mode, examples);
    case FitnessKind::kFunctionProbability:
      if (!a.model) fail(ErrorCode::kConfig, "fp fitness needs a model");
      return std::make_unique<FunctionProbabilityFitness>(
          fp_probability_map(*a.model, examples));
  }
  fail(ErrorCode::kConfig, "unknown fitness kind");
}

}  // namespace genesyn::fitness
