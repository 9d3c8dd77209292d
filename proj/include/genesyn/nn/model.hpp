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

// A small multilayer perceptron: sigmoid hidden layers and either a softmax
// (single-label) or independent-sigmoid (multilabel) head, trained with
// mini-batch Adam.

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace genesyn::nn {

enum class HeadKind : std::uint32_t { kSoftmax = 0, kSigmoidMultilabel = 1 };

struct ModelSpec {
  std::size_t input_width = 0;
  std::vector<std::size_t> hidden;
  HeadKind head = HeadKind::kSoftmax;
  std::size_t n_outputs = 0;  // classes, or labels for the multilabel head

  // Closeness classifier: 48/24/12 hidden units, softmax over 0..L.
  static ModelSpec closeness_classifier(std::size_t input_width,
                                        std::size_t gene_length);
  // Per-operation membership predictor: 3 x 256 hidden units, 41 sigmoids.
  static ModelSpec function_probability(std::size_t input_width);

  // Throws Error(kConfig) on an unusable spec.
  void validate() const;
  bool operator==(const ModelSpec&) const = default;
};

// out x in weights, row-major.
struct Layer {
  std::size_t in = 0;
  std::size_t out = 0;
  std::vector<double> weights;
  std::vector<double> bias;

  bool operator==(const Layer&) const = default;
};

struct Model {
  ModelSpec spec;
  std::vector<Layer> layers;

  std::size_t parameter_count() const;
  bool operator==(const Model&) const = default;
};

// Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) weights, zero biases.
Model init_model(const ModelSpec& spec, std::uint64_t seed);

// Reusable activation storage so repeated inference does not allocate.
class ForwardBuffers {
 public:
  std::vector<std::vector<double>> activations;
};

std::span<const double> forward(const Model& model,
                                std::span<const double> features,
                                ForwardBuffers& buffers);
std::vector<double> forward(const Model& model, std::span<const double> features);

// Rows of normalized features with one label each: a class index for the
// softmax head, or a bit mask (bit k = label k) for the multilabel head.
struct Dataset {
  std::size_t input_width = 0;
  HeadKind head = HeadKind::kSoftmax;
  std::size_t n_outputs = 0;
  std::vector<double> features;
  std::vector<std::uint64_t> labels;

  std::size_t size() const { return labels.size(); }
  std::span<const double> row(std::size_t i) const {
    return {features.data() + i * input_width, input_width};
  }
  void add(std::span<const double> x, std::uint64_t label);
};

// Loss of one row: softmax cross-entropy, or summed per-label binary
// cross-entropy, both evaluated from the logits for stability.
double row_loss(const Model& model, std::span<const double> features,
                std::uint64_t label);

// Gradient of row_loss with respect to every weight and bias, shaped like
// model.layers.
std::vector<Layer> row_gradient(const Model& model,
                                std::span<const double> features,
                                std::uint64_t label);

struct TrainConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::size_t batch_size = 256;
  std::size_t epochs = 20;
  std::uint64_t seed = 0;

  void validate() const;
};

struct EpochStats {
  std::size_t epoch = 0;
  double train_loss = 0.0;        // mean row loss seen during the epoch
  double holdout_accuracy = 0.0;  // NaN when no holdout set was given
};

using TrainingHistory = std::vector<EpochStats>;

TrainingHistory train(Model& model, const Dataset& data,
                      const Dataset* holdout, const TrainConfig& config);

// Adam optimizer state over every parameter of a model.
class Adam {
 public:
  Adam(const Model& model, const TrainConfig& config);
  void step(Model& model, const std::vector<Layer>& grads);

 private:
  TrainConfig config_;
  std::vector<Layer> m_;
  std::vector<Layer> v_;
  std::uint64_t t_ = 0;
};

struct Evaluation {
  double accuracy = 0.0;
  std::size_t rows = 0;
  // Softmax: n x n counts, confusion[truth * n + predicted].
  // Multilabel: per label {tp, fp, fn, tn}.
  std::vector<std::size_t> confusion;
};

Evaluation evaluate(const Model& model, const Dataset& data);

// Fraction of rows carrying the most frequent class label.
double majority_baseline(const Dataset& data);

// Binary container: magic, format version, spec, little-endian f64 weights,
// CRC-32 trailer. Load checks, in order: checksum, magic, version, shape,
// then (if given) equality with `expected`.
inline constexpr std::uint32_t kModelFormatVersion = 1;
void save_model(const Model& model, const std::filesystem::path& path);
Model load_model(const std::filesystem::path& path,
                 const ModelSpec* expected = nullptr);

std::vector<std::uint8_t> serialize_model(const Model& model);
Model deserialize_model(std::span<const std::uint8_t> bytes,
                        const ModelSpec* expected = nullptr);

}  // namespace genesyn::nn
