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

#include "genesyn/nn/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "genesyn/error.hpp"
#include "genesyn/nn/kernels.hpp"
#include "genesyn/rng.hpp"

namespace genesyn::nn {
namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// Leaves the hidden activations in buffers.activations[0..n-2] and the raw
// output logits in buffers.activations.back().
void forward_logits(const Model& model, std::span<const double> x,
                    ForwardBuffers& buffers) {
  if (x.size() != model.spec.input_width)
    fail(ErrorCode::kConfig, "feature width " + std::to_string(x.size()) +
                                 " does not match model input width " +
                                 std::to_string(model.spec.input_width));
  const auto& k = kernels::active();
  buffers.activations.resize(model.layers.size());
  std::span<const double> in = x;
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    const Layer& layer = model.layers[l];
    auto& out = buffers.activations[l];
    out.resize(layer.out);
    k.affine(layer.weights, layer.bias, in, out);
    if (l + 1 < model.layers.size())
      for (double& a : out) a = sigmoid(a);
    in = out;
  }
}

double log_sum_exp(std::span<const double> z) {
  double m = *std::max_element(z.begin(), z.end());
  double s = 0.0;
  for (double v : z) s += std::exp(v - m);
  return m + std::log(s);
}

bool label_bit(std::uint64_t mask, std::size_t k) { return (mask >> k) & 1U; }

void check_label(const ModelSpec& spec, std::uint64_t label) {
  if (spec.head == HeadKind::kSoftmax)
    require(label < spec.n_outputs, "class label " + std::to_string(label) +
                                        " out of range");
  else
    require(spec.n_outputs >= 64 || (label >> spec.n_outputs) == 0,
            "label mask has bits beyond the label count");
}

// Computes the row loss and the output-layer delta (dL/dlogits).
double output_delta(const ModelSpec& spec, std::span<const double> logits,
                    std::uint64_t label, std::vector<double>& delta) {
  delta.resize(logits.size());
  if (spec.head == HeadKind::kSoftmax) {
    double lse = log_sum_exp(logits);
    for (std::size_t k = 0; k < logits.size(); ++k)
      delta[k] = std::exp(logits[k] - lse) - (k == label ? 1.0 : 0.0);
    return lse - logits[label];
  }
  double loss = 0.0;
  for (std::size_t k = 0; k < logits.size(); ++k) {
    double z = logits[k];
    double y = label_bit(label, k) ? 1.0 : 0.0;
    loss += std::max(z, 0.0) - z * y + std::log1p(std::exp(-std::abs(z)));
    delta[k] = sigmoid(z) - y;
  }
  return loss;
}

std::vector<Layer> zero_like(const Model& model) {
  std::vector<Layer> out;
  for (const Layer& l : model.layers)
    out.push_back({l.in, l.out, std::vector<double>(l.weights.size(), 0.0),
                   std::vector<double>(l.bias.size(), 0.0)});
  return out;
}

void zero_fill(std::vector<Layer>& layers) {
  for (Layer& l : layers) {
    std::fill(l.weights.begin(), l.weights.end(), 0.0);
    std::fill(l.bias.begin(), l.bias.end(), 0.0);
  }
}

struct BackpropScratch {
  ForwardBuffers fwd;
  std::vector<double> delta;
  std::vector<double> back;
};

// Adds the row gradient into `grads`; returns the row loss.
double accumulate_gradient(const Model& model, std::span<const double> x,
                           std::uint64_t label, BackpropScratch& s,
                           std::vector<Layer>& grads) {
  check_label(model.spec, label);
  forward_logits(model, x, s.fwd);
  const auto& k = kernels::active();
  double loss = output_delta(model.spec, s.fwd.activations.back(), label, s.delta);
  for (std::size_t l = model.layers.size(); l-- > 0;) {
    std::span<const double> in =
        l == 0 ? x : std::span<const double>(s.fwd.activations[l - 1]);
    k.outer_accumulate(grads[l].weights, s.delta, in);
    for (std::size_t r = 0; r < s.delta.size(); ++r) grads[l].bias[r] += s.delta[r];
    if (l == 0) break;
    s.back.resize(model.layers[l].in);
    k.affine_transpose(model.layers[l].weights, s.delta, s.back);
    const auto& a = s.fwd.activations[l - 1];
    s.delta.resize(s.back.size());
    for (std::size_t c = 0; c < s.back.size(); ++c)
      s.delta[c] = s.back[c] * a[c] * (1.0 - a[c]);
  }
  return loss;
}

}  // namespace

ModelSpec ModelSpec::closeness_classifier(std::size_t input_width,
                                          std::size_t gene_length) {
  return {input_width, {48, 24, 12}, HeadKind::kSoftmax, gene_length + 1};
}

ModelSpec ModelSpec::function_probability(std::size_t input_width) {
  return {input_width, {256, 256, 256}, HeadKind::kSigmoidMultilabel, 41};
}

void ModelSpec::validate() const {
  if (input_width == 0) fail(ErrorCode::kConfig, "model input width is zero");
  if (hidden.empty())
    fail(ErrorCode::kConfig, "model needs at least one hidden layer");
  for (std::size_t h : hidden)
    if (h == 0) fail(ErrorCode::kConfig, "hidden layer of width zero");
  if (head == HeadKind::kSoftmax && n_outputs < 2)
    fail(ErrorCode::kConfig, "softmax head needs at least two classes");
  if (head == HeadKind::kSigmoidMultilabel && (n_outputs < 1 || n_outputs > 64))
    fail(ErrorCode::kConfig, "multilabel head supports 1..64 labels");
}

std::size_t Model::parameter_count() const {
  std::size_t n = 0;
  for (const Layer& l : layers) n += l.weights.size() + l.bias.size();
  return n;
}

Model init_model(const ModelSpec& spec, std::uint64_t seed) {
  spec.validate();
  Model model{spec, {}};
  Rng rng(seed);
  std::size_t in = spec.input_width;
  auto add_layer = [&](std::size_t out) {
    double scale = 1.0 / std::sqrt(static_cast<double>(in));
    std::uniform_real_distribution<double> dist(-scale, scale);
    Layer layer{in, out, std::vector<double>(in * out), std::vector<double>(out, 0.0)};
    for (double& w : layer.weights) w = dist(rng);
    model.layers.push_back(std::move(layer));
    in = out;
  };
  for (std::size_t h : spec.hidden) add_layer(h);
  add_layer(spec.n_outputs);
  return model;
}

std::span<const double> forward(const Model& model,
                                std::span<const double> features,
                                ForwardBuffers& buffers) {
  forward_logits(model, features, buffers);
  auto& out = buffers.activations.back();
  if (model.spec.head == HeadKind::kSoftmax) {
    double lse = log_sum_exp(out);
    for (double& v : out) v = std::exp(v - lse);
  } else {
    for (double& v : out) v = sigmoid(v);
  }
  return out;
}

std::vector<double> forward(const Model& model, std::span<const double> features) {
  ForwardBuffers buffers;
  auto out = forward(model, features, buffers);
  return {out.begin(), out.end()};
}

void Dataset::add(std::span<const double> x, std::uint64_t label) {
  require(x.size() == input_width, "dataset row has the wrong width");
  features.insert(features.end(), x.begin(), x.end());
  labels.push_back(label);
}

double row_loss(const Model& model, std::span<const double> features,
                std::uint64_t label) {
  check_label(model.spec, label);
  ForwardBuffers buffers;
  forward_logits(model, features, buffers);
  std::vector<double> delta;
  return output_delta(model.spec, buffers.activations.back(), label, delta);
}

std::vector<Layer> row_gradient(const Model& model,
                                std::span<const double> features,
                                std::uint64_t label) {
  std::vector<Layer> grads = zero_like(model);
  BackpropScratch scratch;
  accumulate_gradient(model, features, label, scratch, grads);
  return grads;
}

void TrainConfig::validate() const {
  if (!(learning_rate >= 0.0))
    fail(ErrorCode::kConfig, "learning rate must be non-negative");
  if (!(beta1 > 0.0 && beta1 < 1.0 && beta2 > 0.0 && beta2 < 1.0))
    fail(ErrorCode::kConfig, "adam betas must lie in (0, 1)");
  if (!(epsilon > 0.0)) fail(ErrorCode::kConfig, "adam epsilon must be positive");
  if (batch_size < 1) fail(ErrorCode::kConfig, "batch size must be at least 1");
}

Adam::Adam(const Model& model, const TrainConfig& config)
    : config_(config), m_(zero_like(model)), v_(zero_like(model)) {}

void Adam::step(Model& model, const std::vector<Layer>& grads) {
  ++t_;
  const double t = static_cast<double>(t_);
  kernels::AdamStep s{config_.learning_rate,
                      config_.beta1,
                      config_.beta2,
                      config_.epsilon,
                      1.0 - std::pow(config_.beta1, t),
                      1.0 - std::pow(config_.beta2, t)};
  const auto& k = kernels::active();
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    k.adam_update(model.layers[l].weights, m_[l].weights, v_[l].weights,
                  grads[l].weights, s);
    k.adam_update(model.layers[l].bias, m_[l].bias, v_[l].bias, grads[l].bias, s);
  }
}

TrainingHistory train(Model& model, const Dataset& data, const Dataset* holdout,
                      const TrainConfig& config) {
  config.validate();
  if (data.size() == 0) fail(ErrorCode::kData, "training set is empty");
  if (data.input_width != model.spec.input_width || data.head != model.spec.head ||
      data.n_outputs != model.spec.n_outputs)
    fail(ErrorCode::kConfig, "dataset shape does not match the model spec");

  Rng rng(config.seed);
  Adam adam(model, config);
  std::vector<Layer> grads = zero_like(model);
  BackpropScratch scratch;
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);

  TrainingHistory history;
  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double loss_sum = 0.0;
    std::size_t batch_index = 0;
    for (std::size_t start = 0; start < order.size();
         start += config.batch_size, ++batch_index) {
      std::size_t end = std::min(order.size(), start + config.batch_size);
      zero_fill(grads);
      double batch_loss = 0.0;
      for (std::size_t i = start; i < end; ++i)
        batch_loss += accumulate_gradient(model, data.row(order[i]),
                                          data.labels[order[i]], scratch, grads);
      if (!std::isfinite(batch_loss))
        fail(ErrorCode::kNonFiniteLoss,
             "non-finite loss at epoch " + std::to_string(epoch) + ", batch " +
                 std::to_string(batch_index));
      loss_sum += batch_loss;
      const double inv = 1.0 / static_cast<double>(end - start);
      for (Layer& g : grads) {
        for (double& w : g.weights) w *= inv;
        for (double& b : g.bias) b *= inv;
      }
      adam.step(model, grads);
    }
    EpochStats stats{epoch, loss_sum / static_cast<double>(data.size()),
                     std::numeric_limits<double>::quiet_NaN()};
    if (holdout && holdout->size() > 0)
      stats.holdout_accuracy = evaluate(model, *holdout).accuracy;
    history.push_back(stats);
  }
  return history;
}

Evaluation evaluate(const Model& model, const Dataset& data) {
  if (data.size() == 0) fail(ErrorCode::kData, "evaluation set is empty");
  const std::size_t n = model.spec.n_outputs;
  Evaluation ev;
  ev.rows = data.size();
  ForwardBuffers buffers;
  if (model.spec.head == HeadKind::kSoftmax) {
    ev.confusion.assign(n * n, 0);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
      auto p = forward(model, data.row(i), buffers);
      std::size_t pred =
          static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());
      std::size_t truth = data.labels[i];
      require(truth < n, "class label out of range");
      ev.confusion[truth * n + pred] += 1;
      correct += pred == truth;
    }
    ev.accuracy = static_cast<double>(correct) / static_cast<double>(data.size());
    return ev;
  }
  ev.confusion.assign(n * 4, 0);
  std::size_t agree = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    auto p = forward(model, data.row(i), buffers);
    for (std::size_t k = 0; k < n; ++k) {
      bool pred = p[k] > 0.5;
      bool truth = label_bit(data.labels[i], k);
      std::size_t cell = pred ? (truth ? 0 : 1) : (truth ? 2 : 3);
      ev.confusion[k * 4 + cell] += 1;
      agree += pred == truth;
    }
  }
  ev.accuracy = static_cast<double>(agree) / static_cast<double>(data.size() * n);
  return ev;
}

double majority_baseline(const Dataset& data) {
  if (data.size() == 0) fail(ErrorCode::kData, "dataset is empty");
  require(data.head == HeadKind::kSoftmax,
          "majority baseline needs single-label data");
  std::vector<std::size_t> counts;
  for (std::uint64_t y : data.labels) {
    if (y >= counts.size()) counts.resize(y + 1, 0);
    counts[y] += 1;
  }
  return static_cast<double>(*std::max_element(counts.begin(), counts.end())) /
         static_cast<double>(data.size());
}

}  // namespace genesyn::nn
