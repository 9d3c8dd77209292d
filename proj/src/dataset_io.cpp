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

#include <charconv>
#include <fstream>
#include <string>

#include "genesyn/datagen.hpp"
#include "genesyn/error.hpp"

namespace genesyn::datagen {
namespace {

// Splits on ',' into `fields`; returns false on any non-integer field.
bool parse_ints(std::string_view line, std::vector<Int>& fields) {
  fields.clear();
  const char* p = line.data();
  const char* end = line.data() + line.size();
  while (p <= end) {
    Int v = 0;
    auto [next, ec] = std::from_chars(p, end, v);
    if (ec != std::errc()) return false;
    fields.push_back(v);
    if (next == end) return true;
    if (*next != ',') return false;
    p = next + 1;
  }
  return false;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t i = s.find(sep, start);
    out.push_back(s.substr(start, i == std::string_view::npos ? i : i - start));
    if (i == std::string_view::npos) return out;
    start = i + 1;
  }
}

std::optional<std::size_t> parse_size(std::string_view s) {
  std::size_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

void write_dataset(const LabeledRows& rows, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) fail(ErrorCode::kData, "cannot write dataset " + path.string());
  out << fitness::mode_name(rows.mode) << ',' << rows.width << ','
      << rows.label_arity << ',' << rows.size() << '\n';
  std::string line;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    line.clear();
    for (Int v : rows.row(i)) {
      line += std::to_string(v);
      line += ',';
    }
    if (rows.label_arity == 1) {
      line += std::to_string(rows.labels[i]);
    } else {
      for (std::size_t k = 0; k < rows.label_arity; ++k) {
        if (k) line += ',';
        line += ((rows.labels[i] >> k) & 1U) ? '1' : '0';
      }
    }
    line += '\n';
    out << line;
  }
  if (!out) fail(ErrorCode::kData, "failed writing dataset " + path.string());
}

LabeledRows read_dataset(const std::filesystem::path& path,
                         const DatasetExpectation& expect) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kData, "cannot open dataset " + path.string());
  std::string line;
  if (!std::getline(in, line))
    fail(ErrorCode::kDataMalformedHeader, "dataset " + path.string() + " is empty");
  auto head = split(line, ',');
  if (head.size() != 4)
    fail(ErrorCode::kDataMalformedHeader, "dataset header needs 4 fields: " + line);
  auto mode = fitness::parse_mode(head[0]);
  auto width = parse_size(head[1]);
  auto arity = parse_size(head[2]);
  auto count = parse_size(head[3]);
  if (!mode || !width || !arity || !count || *arity == 0 || *arity > 64 ||
      *width != fitness::feature_width(*mode))
    fail(ErrorCode::kDataMalformedHeader, "bad dataset header: " + line);
  if ((expect.mode && *expect.mode != *mode) ||
      (expect.width && *expect.width != *width) ||
      (expect.label_arity && *expect.label_arity != *arity))
    fail(ErrorCode::kDataWidthMismatch,
         "dataset header " + line + " does not match the requested mode/width/arity");

  LabeledRows rows{*mode, *width, *arity, {}, {}};
  rows.raw.reserve(*count * *width);
  rows.labels.reserve(*count);
  std::vector<Int> fields;
  const std::size_t columns = *width + *arity;
  for (std::size_t i = 0; i < *count; ++i) {
    if (!std::getline(in, line))
      fail(ErrorCode::kDataTruncated, "dataset ends after " + std::to_string(i) +
                                          " of " + std::to_string(*count) + " rows");
    if (!parse_ints(line, fields))
      fail(ErrorCode::kData, "unparseable dataset row " + std::to_string(i));
    if (fields.size() != columns)
      fail(fields.size() < columns ? ErrorCode::kDataTruncated
                                   : ErrorCode::kDataWidthMismatch,
           "row " + std::to_string(i) + " has " + std::to_string(fields.size()) +
               " columns, expected " + std::to_string(columns));
    std::uint64_t label = 0;
    if (*arity == 1) {
      if (fields.back() < 0) fail(ErrorCode::kData, "negative class label");
      label = static_cast<std::uint64_t>(fields.back());
    } else {
      for (std::size_t k = 0; k < *arity; ++k) {
        Int bit = fields[*width + k];
        if (bit != 0 && bit != 1) fail(ErrorCode::kData, "label mask column is not 0/1");
        label |= static_cast<std::uint64_t>(bit) << k;
      }
    }
    rows.add(std::span<const Int>(fields.data(), *width), label);
  }
  return rows;
}

void write_programs(std::span<const Program> programs,
                    const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) fail(ErrorCode::kData, "cannot write " + path.string());
  for (const auto& p : programs) out << dsl::format_program(p) << '\n';
}

std::vector<Program> read_programs(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kData, "cannot open " + path.string());
  std::vector<Program> out;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) out.push_back(dsl::parse_program(line));
  return out;
}

}  // namespace genesyn::datagen
