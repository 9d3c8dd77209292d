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

#include <zlib.h>

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "genesyn/error.hpp"
#include "genesyn/nn/model.hpp"

namespace genesyn::nn {
namespace {

constexpr std::array<char, 8> kMagic = {'G', 'S', 'Y', 'N', 'M', 'O', 'D', 'L'};

class Writer {
 public:
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) bytes.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double d) {
    auto v = std::bit_cast<std::uint64_t>(d);
    for (int i = 0; i < 8; ++i) bytes.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  std::vector<std::uint8_t> bytes;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> b) : bytes_(b) {}

  std::size_t remaining() const { return bytes_.size() - pos_; }

  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t{bytes_[pos_++]} << (8 * i);
    return v;
  }
  double f64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t{bytes_[pos_++]} << (8 * i);
    return std::bit_cast<double>(v);
  }
  void raw(char* out, std::size_t n) {
    need(n);
    std::memcpy(out, bytes_.data() + pos_, n);
    pos_ += n;
  }

 private:
  void need(std::size_t n) const {
    if (remaining() < n) fail(ErrorCode::kModelShape, "model file ends early");
  }
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

std::uint32_t crc(std::span<const std::uint8_t> b) {
  return static_cast<std::uint32_t>(
      crc32(0L, b.data(), static_cast<uInt>(b.size())));
}

}  // namespace

std::vector<std::uint8_t> serialize_model(const Model& model) {
  Writer w;
  w.bytes.insert(w.bytes.end(), kMagic.begin(), kMagic.end());
  w.u32(kModelFormatVersion);
  w.u32(static_cast<std::uint32_t>(model.spec.input_width));
  w.u32(static_cast<std::uint32_t>(model.spec.head));
  w.u32(static_cast<std::uint32_t>(model.spec.n_outputs));
  w.u32(static_cast<std::uint32_t>(model.spec.hidden.size()));
  for (std::size_t h : model.spec.hidden) w.u32(static_cast<std::uint32_t>(h));
  for (const Layer& l : model.layers) {
    for (double x : l.weights) w.f64(x);
    for (double x : l.bias) w.f64(x);
  }
  w.u32(crc(w.bytes));
  return std::move(w.bytes);
}

Model deserialize_model(std::span<const std::uint8_t> bytes,
                        const ModelSpec* expected) {
  constexpr std::size_t kMinSize = kMagic.size() + 5 * 4 + 4;
  if (bytes.size() < kMinSize)
    fail(ErrorCode::kModelChecksum, "model file too short to carry a checksum");
  auto body = bytes.first(bytes.size() - 4);
  Reader trailer(bytes.last(4));
  if (trailer.u32() != crc(body))
    fail(ErrorCode::kModelChecksum, "model checksum mismatch (corrupt or truncated file)");

  Reader r(body);
  std::array<char, 8> magic{};
  r.raw(magic.data(), magic.size());
  if (magic != kMagic) fail(ErrorCode::kModel, "not a model file (bad magic)");
  std::uint32_t version = r.u32();
  if (version != kModelFormatVersion)
    fail(ErrorCode::kModelVersion, "model format version " + std::to_string(version) +
                                       ", expected " +
                                       std::to_string(kModelFormatVersion));

  ModelSpec spec;
  spec.input_width = r.u32();
  std::uint32_t head = r.u32();
  if (head > 1) fail(ErrorCode::kModelShape, "unknown head kind");
  spec.head = static_cast<HeadKind>(head);
  spec.n_outputs = r.u32();
  std::uint32_t n_hidden = r.u32();
  if (n_hidden > 64) fail(ErrorCode::kModelShape, "implausible hidden layer count");
  for (std::uint32_t i = 0; i < n_hidden; ++i) spec.hidden.push_back(r.u32());
  try {
    spec.validate();
  } catch (const Error& e) {
    fail(ErrorCode::kModelShape, std::string("model spec invalid: ") + e.what());
  }

  Model model{spec, {}};
  std::size_t in = spec.input_width;
  std::size_t expected_values = 0;
  std::vector<std::size_t> widths = spec.hidden;
  widths.push_back(spec.n_outputs);
  for (std::size_t out : widths) {
    expected_values += in * out + out;
    in = out;
  }
  if (r.remaining() != expected_values * 8)
    fail(ErrorCode::kModelShape, "weight payload does not match the declared layer shapes");
  in = spec.input_width;
  for (std::size_t out : widths) {
    Layer l{in, out, std::vector<double>(in * out), std::vector<double>(out)};
    for (double& x : l.weights) x = r.f64();
    for (double& x : l.bias) x = r.f64();
    model.layers.push_back(std::move(l));
    in = out;
  }
  if (expected && !(*expected == spec))
    fail(ErrorCode::kModelShape, "model shape differs from the expected spec");
  return model;
}

void save_model(const Model& model, const std::filesystem::path& path) {
  auto bytes = serialize_model(model);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kModel, "cannot write model file " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorCode::kModel, "failed writing model file " + path.string());
}

Model load_model(const std::filesystem::path& path, const ModelSpec* expected) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kModel, "cannot open model file " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return deserialize_model(bytes, expected);
}

}  // namespace genesyn::nn
