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

#include <gtest/gtest.h>
#include <zlib.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include "genesyn/error.hpp"
#include "genesyn/nn/kernels.hpp"
#include "genesyn/nn/model.hpp"
#include "genesyn/rng.hpp"

namespace {

using namespace genesyn;
using namespace genesyn::nn;

std::vector<double> random_features(Rng& rng, std::size_t n) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<double> x(n);
  for (double& v : x) v = d(rng);
  return x;
}

// Scales weights up so hidden units leave the linear part of the sigmoid.
Model random_model(const ModelSpec& spec, std::uint64_t seed) {
  Model m = init_model(spec, seed);
  Rng rng(seed + 1000);
  std::uniform_real_distribution<double> d(-0.5, 0.5);
  for (Layer& l : m.layers) {
    for (double& w : l.weights) w *= 2.5;
    for (double& b : l.bias) b = d(rng);
  }
  return m;
}

double& param(Model& m, std::size_t layer, std::size_t i) {
  Layer& l = m.layers[layer];
  return i < l.weights.size() ? l.weights[i] : l.bias[i - l.weights.size()];
}

double grad_at(const std::vector<Layer>& g, std::size_t layer, std::size_t i) {
  const Layer& l = g[layer];
  return i < l.weights.size() ? l.weights[i] : l.bias[i - l.weights.size()];
}

// Returns max over parameters of |analytic - numeric| / max(1, |a| + |n|).
double worst_gradient_error(Model m, const std::vector<double>& x, std::uint64_t label) {
  auto analytic = row_gradient(m, x, label);
  const double h = 1e-5;
  double worst = 0.0;
  for (std::size_t l = 0; l < m.layers.size(); ++l) {
    std::size_t n = m.layers[l].weights.size() + m.layers[l].bias.size();
    for (std::size_t i = 0; i < n; ++i) {
      double saved = param(m, l, i);
      param(m, l, i) = saved + h;
      double up = row_loss(m, x, label);
      param(m, l, i) = saved - h;
      double down = row_loss(m, x, label);
      param(m, l, i) = saved;
      double numeric = (up - down) / (2 * h);
      double a = grad_at(analytic, l, i);
      double denom = std::max(1e-3, std::abs(a) + std::abs(numeric));
      worst = std::max(worst, std::abs(a - numeric) / denom);
    }
  }
  return worst;
}

TEST(Gradient, SoftmaxHeadMatchesCentralDifference) {
  Rng rng(1);
  ModelSpec spec{7, {6, 5}, HeadKind::kSoftmax, 5};
  for (int c = 0; c < 100; ++c) {
    auto m = random_model(spec, 100 + c);
    auto x = random_features(rng, spec.input_width);
    std::uint64_t label = uniform_index(rng, spec.n_outputs);
    ASSERT_LE(worst_gradient_error(m, x, label), 1e-4) << "case " << c;
  }
}

TEST(Gradient, MultilabelHeadMatchesCentralDifference) {
  Rng rng(2);
  ModelSpec spec{6, {5, 4}, HeadKind::kSigmoidMultilabel, 9};
  for (int c = 0; c < 100; ++c) {
    auto m = random_model(spec, 300 + c);
    auto x = random_features(rng, spec.input_width);
    std::uint64_t mask = uniform_index(rng, std::size_t{1} << spec.n_outputs);
    ASSERT_LE(worst_gradient_error(m, x, mask), 1e-4) << "case " << c;
  }
}

TEST(Gradient, FullSizeClosenessClassifier) {
  Rng rng(3);
  auto spec = ModelSpec::closeness_classifier(24, 4);
  for (int c = 0; c < 5; ++c) {
    auto m = random_model(spec, 500 + c);
    auto x = random_features(rng, 24);
    ASSERT_LE(worst_gradient_error(m, x, c % 5), 1e-4);
  }
}

TEST(Loss, SoftmaxCrossEntropyOfUniformLogits) {
  ModelSpec spec{2, {3}, HeadKind::kSoftmax, 4};
  auto m = init_model(spec, 0);
  for (Layer& l : m.layers) std::fill(l.weights.begin(), l.weights.end(), 0.0);
  std::vector<double> x{0.3, -0.2};
  EXPECT_NEAR(row_loss(m, x, 2), std::log(4.0), 1e-12);
  auto p = forward(m, x);
  for (double v : p) EXPECT_NEAR(v, 0.25, 1e-12);
}

TEST(Loss, LabelsOutOfRangeAreRejected) {
  ModelSpec spec{2, {3}, HeadKind::kSoftmax, 4};
  auto m = init_model(spec, 0);
  std::vector<double> x{0.0, 0.0};
  EXPECT_THROW(row_loss(m, x, 4), Error);
  std::vector<double> wrong_width{0.0};
  EXPECT_THROW(forward(m, wrong_width), Error);
}

TEST(Adam, FirstStepMovesEachParameterByTheLearningRate) {
  ModelSpec spec{2, {2}, HeadKind::kSoftmax, 2};
  auto m = init_model(spec, 4);
  auto before = m;
  TrainConfig cfg;
  cfg.learning_rate = 0.01;
  Adam adam(m, cfg);
  std::vector<double> x{0.5, -0.5};
  auto g = row_gradient(m, x, 1);
  adam.step(m, g);
  for (std::size_t l = 0; l < m.layers.size(); ++l)
    for (std::size_t i = 0; i < m.layers[l].weights.size(); ++i) {
      double gi = g[l].weights[i];
      double expected = before.layers[l].weights[i] -
                        (gi == 0.0 ? 0.0 : 0.01 * gi / (std::abs(gi) + 1e-8));
      EXPECT_NEAR(m.layers[l].weights[i], expected, 1e-12);
    }
}

// y = [x0 * x1 > 0] is not linearly separable, so the hidden layer must work.
Dataset xor_like(std::size_t n, std::uint64_t seed) {
  Dataset d{2, HeadKind::kSoftmax, 2, {}, {}};
  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    auto x = random_features(rng, 2);
    d.add(x, x[0] * x[1] > 0 ? 1 : 0);
  }
  return d;
}

TEST(Train, LearnsANonLinearBoundary) {
  auto train_set = xor_like(2000, 5);
  auto test_set = xor_like(500, 6);
  Model m = init_model({2, {16, 8}, HeadKind::kSoftmax, 2}, 7);
  TrainConfig cfg;
  cfg.learning_rate = 0.01;
  cfg.batch_size = 32;
  cfg.epochs = 150;
  cfg.seed = 8;
  auto history = train(m, train_set, &test_set, cfg);
  ASSERT_EQ(history.size(), 150u);
  EXPECT_LT(history.back().train_loss, history.front().train_loss);
  EXPECT_GT(evaluate(m, test_set).accuracy, 0.9);
  EXPECT_NEAR(history.back().holdout_accuracy, evaluate(m, test_set).accuracy, 1e-12);
}

TEST(Train, LearnsMultilabelTargets) {
  Dataset d{3, HeadKind::kSigmoidMultilabel, 3, {}, {}};
  Rng rng(9);
  for (int i = 0; i < 1500; ++i) {
    auto x = random_features(rng, 3);
    std::uint64_t mask = 0;
    for (int k = 0; k < 3; ++k) mask |= std::uint64_t(x[k] > 0) << k;
    d.add(x, mask);
  }
  Model m = init_model({3, {8}, HeadKind::kSigmoidMultilabel, 3}, 10);
  TrainConfig cfg;
  cfg.learning_rate = 0.02;
  cfg.batch_size = 32;
  cfg.epochs = 60;
  train(m, d, nullptr, cfg);
  auto ev = evaluate(m, d);
  EXPECT_GT(ev.accuracy, 0.95);
  ASSERT_EQ(ev.confusion.size(), 12u);
}

TEST(Train, SameSeedGivesByteIdenticalModels) {
  auto data = xor_like(300, 11);
  auto run = [&] {
    Model m = init_model({2, {6}, HeadKind::kSoftmax, 2}, 12);
    TrainConfig cfg;
    cfg.epochs = 5;
    cfg.batch_size = 16;
    cfg.seed = 13;
    train(m, data, nullptr, cfg);
    return serialize_model(m);
  };
  EXPECT_EQ(run(), run());
}

TEST(Train, NonFiniteLossStops) {
  Dataset d{2, HeadKind::kSoftmax, 2, {}, {}};
  d.add(std::vector<double>{std::numeric_limits<double>::quiet_NaN(), 0.0}, 0);
  Model m = init_model({2, {3}, HeadKind::kSoftmax, 2}, 0);
  try {
    train(m, d, nullptr, TrainConfig{});
    FAIL() << "expected a non-finite loss error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNonFiniteLoss);
  }
}

TEST(Train, RejectsMismatchedDatasets) {
  auto data = xor_like(10, 1);
  Model m = init_model({3, {4}, HeadKind::kSoftmax, 2}, 0);
  EXPECT_THROW(train(m, data, nullptr, TrainConfig{}), Error);
  TrainConfig bad;
  bad.batch_size = 0;
  Model ok = init_model({2, {4}, HeadKind::kSoftmax, 2}, 0);
  EXPECT_THROW(train(ok, data, nullptr, bad), Error);
}

TEST(Evaluate, MajorityBaselineAndConfusion) {
  Dataset d{1, HeadKind::kSoftmax, 3, {}, {}};
  for (std::uint64_t y : {0, 2, 2, 1, 2}) d.add(std::vector<double>{0.0}, y);
  EXPECT_DOUBLE_EQ(majority_baseline(d), 0.6);
  Model m = init_model({1, {2}, HeadKind::kSoftmax, 3}, 0);
  for (Layer& l : m.layers) std::fill(l.weights.begin(), l.weights.end(), 0.0);
  m.layers.back().bias = {0.0, 0.0, 1.0};
  auto ev = evaluate(m, d);
  EXPECT_DOUBLE_EQ(ev.accuracy, 0.6);
  EXPECT_EQ(ev.confusion[0 * 3 + 2], 1u);
  EXPECT_EQ(ev.confusion[2 * 3 + 2], 3u);
}

std::uint32_t crc_of(const std::vector<std::uint8_t>& b, std::size_t n) {
  return static_cast<std::uint32_t>(crc32(0L, b.data(), static_cast<uInt>(n)));
}

// Rewrites the CRC trailer so a deliberate edit passes the checksum.
void reseal(std::vector<std::uint8_t>& b) {
  std::uint32_t c = crc_of(b, b.size() - 4);
  for (int i = 0; i < 4; ++i) b[b.size() - 4 + i] = static_cast<std::uint8_t>(c >> (8 * i));
}

ErrorCode load_error(const std::vector<std::uint8_t>& bytes, const ModelSpec* expected = nullptr) {
  try {
    deserialize_model(bytes, expected);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "model loaded unexpectedly";
  return ErrorCode::kContractViolation;
}

TEST(ModelFile, RoundTripsThroughDisk) {
  auto spec = ModelSpec::closeness_classifier(25, 4);
  auto m = init_model(spec, 21);
  auto path = std::filesystem::temp_directory_path() / "genesyn_nn_test.model";
  save_model(m, path);
  EXPECT_EQ(load_model(path, &spec), m);
  std::filesystem::remove(path);
  EXPECT_THROW(load_model(path), Error);
}

TEST(ModelFile, LoadErrorsCarryDistinctCodes) {
  auto spec = ModelSpec::closeness_classifier(24, 4);
  auto bytes = serialize_model(init_model(spec, 22));

  auto flipped = bytes;
  flipped[100] ^= 0x01;
  EXPECT_EQ(load_error(flipped), ErrorCode::kModelChecksum);

  auto truncated = bytes;
  truncated.resize(bytes.size() / 2);
  EXPECT_EQ(load_error(truncated), ErrorCode::kModelChecksum);
  EXPECT_EQ(load_error({1, 2, 3}), ErrorCode::kModelChecksum);

  auto magic = bytes;
  magic[0] = 'X';
  reseal(magic);
  EXPECT_EQ(load_error(magic), ErrorCode::kModel);

  auto version = bytes;
  version[8] = 2;
  reseal(version);
  EXPECT_EQ(load_error(version), ErrorCode::kModelVersion);

  // Declared input width no longer matches the payload.
  auto shape = bytes;
  shape[12] = 30;
  reseal(shape);
  EXPECT_EQ(load_error(shape), ErrorCode::kModelShape);

  auto other = ModelSpec::closeness_classifier(24, 5);
  EXPECT_EQ(load_error(bytes, &other), ErrorCode::kModelShape);
}

TEST(ModelSpec, Validation) {
  EXPECT_THROW(init_model({0, {4}, HeadKind::kSoftmax, 2}, 0), Error);
  EXPECT_THROW(init_model({3, {}, HeadKind::kSoftmax, 2}, 0), Error);
  EXPECT_THROW(init_model({3, {4}, HeadKind::kSoftmax, 1}, 0), Error);
  EXPECT_THROW(init_model({3, {4}, HeadKind::kSigmoidMultilabel, 65}, 0), Error);
  auto fp = init_model(ModelSpec::function_probability(24), 0);
  EXPECT_EQ(fp.parameter_count(), 24u * 256 + 256 + 2 * (256 * 256 + 256) + 256 * 41 + 41);
}

// The model code gives the same answers on either kernel backend.
TEST(Backends, ForwardAgreesAcrossKernels) {
  if (!kernels::avx2_kernels() || !kernels::cpu_supports_avx2())
    GTEST_SKIP() << "AVX2 kernels unavailable";
  auto m = init_model(ModelSpec::closeness_classifier(36, 4), 30);
  Rng rng(31);
  auto x = random_features(rng, 36);
  kernels::select(kernels::Backend::kScalar);
  auto a = forward(m, x);
  auto ga = row_gradient(m, x, 3);
  kernels::select(kernels::Backend::kAvx2);
  auto b = forward(m, x);
  auto gb = row_gradient(m, x, 3);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-12);
  for (std::size_t l = 0; l < ga.size(); ++l)
    for (std::size_t i = 0; i < ga[l].weights.size(); ++i)
      EXPECT_NEAR(ga[l].weights[i], gb[l].weights[i], 1e-12);
}

}  // namespace
