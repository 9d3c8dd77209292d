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

#include <filesystem>
#include <fstream>
#include <set>

#include "genesyn/datagen.hpp"
#include "genesyn/error.hpp"
#include "genesyn/genome.hpp"
#include "support/oracles.hpp"

namespace {

using namespace genesyn;
using namespace genesyn::datagen;

CorpusConfig small_config(std::uint64_t seed = 1) {
  CorpusConfig c;
  c.n_base_programs = 200;
  c.n_comparisons = 5;
  c.n_examples = 6;
  c.seed = seed;
  return c;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("genesyn_datagen_" + name);
}

ErrorCode read_error(const std::string& text, const DatasetExpectation& expect = {}) {
  auto path = temp_file("bad.csv");
  std::ofstream(path) << text;
  try {
    read_dataset(path, expect);
  } catch (const Error& e) {
    std::filesystem::remove(path);
    return e.code();
  }
  std::filesystem::remove(path);
  ADD_FAILURE() << "dataset loaded unexpectedly:\n" << text;
  return ErrorCode::kContractViolation;
}

TEST(Corpus, UniqueDeadCodeFreeAndSelfConsistent) {
  auto config = small_config();
  auto corpus = generate_corpus(config);
  ASSERT_EQ(corpus.size(), config.n_base_programs);
  std::set<std::string> names;
  for (const auto& e : corpus) {
    EXPECT_EQ(e.program.length(), config.program_length);
    EXPECT_TRUE(oracle::dead_statements(e.program).empty()) << dsl::format_program(e.program);
    names.insert(dsl::format_program(e.program));
    ASSERT_EQ(e.examples.size(), config.n_examples);
    std::size_t defaults = 0;
    for (const auto& ex : e.examples.examples) {
      EXPECT_EQ(dsl::run_program(e.program, ex.input), ex.output);
      EXPECT_GE(ex.input.size(), config.min_input_length);
      EXPECT_LE(ex.input.size(), config.max_input_length);
      for (auto v : ex.input) {
        EXPECT_GE(v, config.value_lo);
        EXPECT_LE(v, config.value_hi);
      }
      defaults += dsl::is_default(ex.output);
    }
    EXPECT_LE(defaults * 2, config.n_examples);
  }
  EXPECT_EQ(names.size(), corpus.size());
}

TEST(Corpus, DeterministicForASeed) {
  auto a = generate_corpus(small_config(5));
  auto b = generate_corpus(small_config(5));
  auto c = generate_corpus(small_config(6));
  ASSERT_EQ(a.size(), b.size());
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].program, b[i].program);
    EXPECT_EQ(a[i].examples, b[i].examples);
    differs |= !(a[i].program == c[i].program);
  }
  EXPECT_TRUE(differs);
}

TEST(Examples, ConstantDefaultProgramGivesUp) {
  // COUNT(>0) after FILTER(<0) is always 0.
  auto p = dsl::parse_program("FILTER(<0)|COUNT(>0)");
  Rng rng(1);
  EXPECT_FALSE(make_examples(p, 4, rng, small_config(), 20));
}

TEST(Pairs, ComparisonsAreFreshAndLabelsMatchOracles) {
  auto config = small_config(2);
  auto corpus = generate_corpus(config);
  auto pairs = generate_pairs(corpus, config);
  ASSERT_EQ(pairs.comparisons.size(), corpus.size() * config.n_comparisons);
  ASSERT_EQ(pairs.samples.size(), pairs.comparisons.size() * config.n_examples);

  std::set<std::string> base_names;
  for (const auto& e : corpus) base_names.insert(dsl::format_program(e.program));
  for (const auto& g : pairs.comparisons) {
    EXPECT_FALSE(base_names.contains(dsl::format_program(g)));
    EXPECT_FALSE(genome::has_dead_code(g));
  }

  auto cf = label_pairs(corpus, pairs, Metric::kCF, fitness::EncodingMode::kIODelta);
  auto lcs = label_pairs(corpus, pairs, Metric::kLCS, fitness::EncodingMode::kIO);
  ASSERT_EQ(cf.size(), pairs.samples.size());
  EXPECT_EQ(cf.width, 25u);
  EXPECT_EQ(lcs.width, 24u);
  for (std::size_t i = 0; i < pairs.samples.size(); ++i) {
    const auto& s = pairs.samples[i];
    const auto& base = corpus[s.base];
    const auto& comp = pairs.comparisons[s.comparison];
    ASSERT_EQ(cf.labels[i], static_cast<std::uint64_t>(oracle::cf_bruteforce(comp, base.program)));
    ASSERT_EQ(lcs.labels[i], static_cast<std::uint64_t>(oracle::lcs_bruteforce(comp, base.program)));
    EXPECT_EQ(s.output, dsl::run_program(comp, base.examples[s.example].input));
    auto expected = fitness::encode_features(fitness::EncodingMode::kIO,
                                             base.examples[s.example].input, nullptr, s.output);
    auto row = lcs.row(i);
    ASSERT_TRUE(std::equal(row.begin(), row.end(), expected.raw.begin(), expected.raw.end()));
  }
}

TEST(FunctionRows, MaskMatchesProgramOps) {
  auto corpus = generate_corpus(small_config(3));
  auto rows = generate_fp_rows(corpus);
  EXPECT_EQ(rows.label_arity, 41u);
  ASSERT_EQ(rows.size(), corpus.size() * 6);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& program = corpus[i / 6].program;
    for (std::size_t k = 0; k < 41; ++k) {
      bool used = false;
      for (auto op : program.ops) used |= static_cast<std::size_t>(op.index()) == k;
      ASSERT_EQ(((rows.labels[i] >> k) & 1U) != 0, used);
    }
  }
  EXPECT_EQ(op_mask(dsl::parse_program("ACCESS|ZIPWITH(max)")),
            (std::uint64_t{1} << 0) | (std::uint64_t{1} << 40));
}

TEST(Split, ThreeToOneWithoutLoss) {
  LabeledRows rows{fitness::EncodingMode::kIO, 24, 1, {}, {}};
  std::vector<dsl::Int> r(24);
  for (std::size_t i = 0; i < 103; ++i) {
    r[0] = static_cast<dsl::Int>(i);
    rows.add(r, i % 5);
  }
  auto [train, test] = split_dataset(rows, 9);
  EXPECT_EQ(test.size(), 103u / 4);
  EXPECT_EQ(train.size() + test.size(), 103u);
  std::multiset<dsl::Int> ids;
  for (const auto* part : {&train, &test})
    for (std::size_t i = 0; i < part->size(); ++i) {
      ids.insert(part->row(i)[0]);
      EXPECT_EQ(part->labels[i], static_cast<std::uint64_t>(part->row(i)[0]) % 5);
    }
  EXPECT_EQ(ids.size(), 103u);
  EXPECT_EQ(std::set<dsl::Int>(ids.begin(), ids.end()).size(), 103u);
  auto again = split_dataset(rows, 9);
  EXPECT_EQ(again.first.raw, train.raw);
  EXPECT_THROW(split_dataset(LabeledRows{fitness::EncodingMode::kIO, 24, 1, {}, {}}, 0), Error);
}

TEST(TrainingSet, NormalizesAndChecksClasses) {
  LabeledRows rows{fitness::EncodingMode::kIO, 24, 1, {}, {}};
  std::vector<dsl::Int> r(24, 0);
  r[0] = 128;
  r[1] = -1000;
  rows.add(r, 4);
  auto d = to_training_set(rows, 5);
  EXPECT_DOUBLE_EQ(d.features[0], 0.5);
  EXPECT_DOUBLE_EQ(d.features[1], -1.0);
  EXPECT_THROW(to_training_set(rows, 4), Error);
}

TEST(DatasetFile, RoundTrips) {
  auto config = small_config(4);
  config.n_base_programs = 20;
  auto corpus = generate_corpus(config);
  auto pairs = generate_pairs(corpus, config);
  auto rows = label_pairs(corpus, pairs, Metric::kCF, fitness::EncodingMode::kIO2);
  auto fp = generate_fp_rows(corpus);
  auto path = temp_file("rows.csv");
  for (const auto* r : {&rows, &fp}) {
    write_dataset(*r, path);
    auto back = read_dataset(path, {r->mode, r->width, r->label_arity});
    EXPECT_EQ(back.mode, r->mode);
    EXPECT_EQ(back.raw, r->raw);
    EXPECT_EQ(back.labels, r->labels);
  }
  std::filesystem::remove(path);
}

TEST(DatasetFile, ErrorsCarryDistinctCodes) {
  EXPECT_EQ(read_error(""), ErrorCode::kDataMalformedHeader);
  EXPECT_EQ(read_error("IO,24,1\n"), ErrorCode::kDataMalformedHeader);
  EXPECT_EQ(read_error("XX,24,1,0\n"), ErrorCode::kDataMalformedHeader);
  EXPECT_EQ(read_error("IO,25,1,0\n"), ErrorCode::kDataMalformedHeader);

  std::string row;
  for (int i = 0; i < 24; ++i) row += "1,";
  row += "3\n";
  EXPECT_EQ(read_error("IO,24,1,2\n" + row), ErrorCode::kDataTruncated);
  EXPECT_EQ(read_error("IO,24,1,1\n1,2,3\n"), ErrorCode::kDataTruncated);
  EXPECT_EQ(read_error("IO,24,1,1\n9," + row), ErrorCode::kDataWidthMismatch);
  EXPECT_EQ(read_error("IO,24,1,1\n" + row, {fitness::EncodingMode::kIODelta, {}, {}}),
            ErrorCode::kDataWidthMismatch);
  EXPECT_EQ(read_error("IO,24,1,1\nx," + row), ErrorCode::kData);
}

TEST(ProgramFile, RoundTrips) {
  std::vector<dsl::Program> ps{dsl::parse_program("HEAD"),
                               dsl::parse_program("FILTER(>0)|MAP(*2)|SORT|REVERSE")};
  auto path = temp_file("programs.txt");
  write_programs(ps, path);
  EXPECT_EQ(read_programs(path), ps);
  std::filesystem::remove(path);
}

TEST(Config, Validation) {
  auto c = small_config();
  c.max_input_length = 13;
  EXPECT_THROW(generate_corpus(c), Error);
  c = small_config();
  c.value_lo = 5;
  c.value_hi = 4;
  EXPECT_THROW(generate_corpus(c), Error);
}

}  // namespace
