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

// Benchmark harness: random test targets split evenly between integer- and
// list-valued programs, repeated seeded synthesis runs, one record per run,
// and the percentile summary over those records.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "genesyn/datagen.hpp"
#include "genesyn/dsl.hpp"
#include "genesyn/fitness.hpp"
#include "genesyn/search.hpp"

namespace genesyn::bench {

using dsl::ExampleSet;
using dsl::Program;

enum class TargetClass { kSingleton, kList };

std::string_view class_name(TargetClass c);

struct TestProgram {
  std::size_t id = 0;
  Program program;
  TargetClass target_class = TargetClass::kSingleton;
  ExampleSet examples;
};

struct TestSuiteConfig {
  std::vector<std::size_t> lengths{4};
  std::size_t programs_per_length = 20;  // even: half singleton, half list
  std::size_t n_examples = 5;
  datagen::CorpusConfig inputs;          // value and length ranges only
  std::uint64_t seed = 0;

  void validate() const;
};

// Unique dead-code-free targets per length meeting the singleton/list quota.
// Throws Error(kRetryBudget) when the quota cannot be met.
std::vector<TestProgram> generate_tests(const TestSuiteConfig& config);

// One JSON object per line: id, length, class, program, examples.
void write_tests(const std::vector<TestProgram>& tests,
                 const std::filesystem::path& path);
// Re-runs every stored example; a mismatch is a data error.
std::vector<TestProgram> read_tests(const std::filesystem::path& path);

struct BenchConfig {
  search::SearchConfig search;  // gene_length and seed are set per run
  std::size_t repeats = 5;
  fitness::FitnessKind fitness = fitness::FitnessKind::kConstant;
  fitness::EncodingMode mode = fitness::EncodingMode::kIO;
  std::shared_ptr<const nn::Model> model;
  std::uint64_t seed = 0;

  void validate() const;
};

struct RunRecord {
  std::size_t target_id = 0;
  std::size_t length = 0;
  TargetClass target_class = TargetClass::kSingleton;
  std::size_t repeat_index = 0;
  std::string fitness;
  bool found = false;
  std::uint64_t candidates_evaluated = 0;
  std::uint64_t budget = 0;
  std::size_t generations = 0;
  std::uint64_t ns_invocations = 0;
  double wall_ms = 0.0;
  double inference_ms = 0.0;
  std::uint64_t seed = 0;

  bool operator==(const RunRecord&) const = default;
};

// Seed of run (target, repeat), derived from the master seed alone so any
// run can be replayed in isolation.
std::uint64_t run_seed(std::uint64_t master, std::size_t target_id,
                       std::size_t repeat);

RunRecord make_record(const TestProgram& test, std::size_t repeat,
                      const BenchConfig& config,
                      const search::SearchReport& report);

// Runs every (target, repeat); `on_record` sees each record as it completes.
// The result is sorted by (target_id, repeat_index).
std::vector<RunRecord> run_bench(const std::vector<TestProgram>& tests,
                                 const BenchConfig& config,
                                 const std::function<void(const RunRecord&)>& on_record = {});

std::string record_to_line(const RunRecord& r);
RunRecord record_from_line(std::string_view line);

// Appends records one line at a time and flushes each, so an aborted bench
// leaves every finished run on disk.
class RecordAppender {
 public:
  explicit RecordAppender(const std::filesystem::path& path);
  void append(const RunRecord& r);

 private:
  std::filesystem::path path_;
  std::unique_ptr<std::ofstream> out_;
};

// Writes records sorted by (target_id, repeat_index) plus a "<path>.crc32"
// sidecar holding the CRC-32 of the file in hex.
void write_records(std::vector<RunRecord> records, const std::filesystem::path& path);
// Verifies the sidecar checksum first.
std::vector<RunRecord> read_records(const std::filesystem::path& path);

std::uint32_t file_crc32(const std::filesystem::path& path);

inline constexpr int kPercentiles[] = {10, 20, 30, 40, 50, 60, 70, 80, 90, 100};

// Nearest rank: the ceil(p/100 * n)-th smallest value (1-based).
std::size_t nearest_rank_index(int percentile, std::size_t n);

// Percentile values at 10..100%. Failed runs sort after every success and
// report NaN for times and 100% for search space used.
struct SummaryRow {
  std::size_t length = 0;
  std::string fitness;
  int percentile = 0;
  double synthesis_pct = 0.0;
  double wall_ms = 0.0;
  double opt_ms = 0.0;  // wall_ms - inference_ms
  double space_used_pct = 0.0;
};

std::vector<SummaryRow> summarize(const std::vector<RunRecord>& records);
std::string format_summary(const std::vector<SummaryRow>& rows);

}  // namespace genesyn::bench
