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

#include "genesyn/bench.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "genesyn/error.hpp"
#include "genesyn/genome.hpp"
#include "json.hpp"

namespace genesyn::bench {
namespace {

using json = nlohmann::ordered_json;

constexpr std::size_t kDrawsPerTarget = 5000;

json value_to_json(const dsl::Value& v) {
  if (const auto* i = std::get_if<dsl::Int>(&v)) return *i;
  return std::get<dsl::List>(v);
}

dsl::Value value_from_json(const json& j) {
  if (j.is_number_integer()) return j.get<dsl::Int>();
  if (j.is_array()) return j.get<dsl::List>();
  fail(ErrorCode::kData, "example value is neither an integer nor a list");
}

std::optional<TargetClass> parse_class(std::string_view s) {
  if (s == "singleton") return TargetClass::kSingleton;
  if (s == "list") return TargetClass::kList;
  return std::nullopt;
}

bool is_learned(fitness::FitnessKind k) {
  return k == fitness::FitnessKind::kLearnedCF || k == fitness::FitnessKind::kLearnedLCS;
}

double to_ms(std::chrono::nanoseconds ns) {
  return std::chrono::duration<double, std::milli>(ns).count();
}

std::string crc_path(const std::filesystem::path& path) { return path.string() + ".crc32"; }

std::string format_number(double x) {
  if (std::isnan(x)) return "NA";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

}  // namespace

std::string_view class_name(TargetClass c) {
  return c == TargetClass::kSingleton ? "singleton" : "list";
}

void TestSuiteConfig::validate() const {
  if (lengths.empty()) fail(ErrorCode::kConfig, "no program lengths given");
  for (auto l : lengths)
    if (l < 1) fail(ErrorCode::kConfig, "program lengths must be >= 1");
  if (programs_per_length < 2 || programs_per_length % 2 != 0)
    fail(ErrorCode::kConfig, "programs per length must be even and >= 2");
  if (n_examples < 1) fail(ErrorCode::kConfig, "need at least one example per target");
  inputs.validate();
}

std::vector<TestProgram> generate_tests(const TestSuiteConfig& config) {
  config.validate();
  std::vector<TestProgram> tests;
  for (std::size_t length : config.lengths) {
    Rng rng(derive_seed(config.seed, length, 2));
    std::set<std::vector<dsl::OpId>> seen;
    std::size_t quota[2] = {config.programs_per_length / 2, config.programs_per_length / 2};
    std::size_t remaining = config.programs_per_length;
    for (std::size_t draw = 0; remaining > 0; ++draw) {
      if (draw >= kDrawsPerTarget * config.programs_per_length)
        fail(ErrorCode::kRetryBudget,
             "cannot fill the singleton/list quota for length " + std::to_string(length));
      auto g = genome::random_gene(length, rng);
      if (!g || seen.contains(g->ops)) continue;
      auto cls = dsl::output_type(*g) == dsl::Type::kInt ? TargetClass::kSingleton
                                                        : TargetClass::kList;
      auto& left = quota[static_cast<int>(cls)];
      if (left == 0) continue;
      auto examples = datagen::make_examples(*g, config.n_examples, rng, config.inputs);
      if (!examples) continue;
      seen.insert(g->ops);
      --left;
      --remaining;
      tests.push_back({tests.size(), *std::move(g), cls, *std::move(examples)});
    }
  }
  return tests;
}

void write_tests(const std::vector<TestProgram>& tests, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) fail(ErrorCode::kData, "cannot write " + path.string());
  for (const auto& t : tests) {
    json j;
    j["id"] = t.id;
    j["length"] = t.program.length();
    j["class"] = class_name(t.target_class);
    j["program"] = dsl::format_program(t.program);
    json examples = json::array();
    for (const auto& ex : t.examples.examples)
      examples.push_back(json{{"input", ex.input}, {"output", value_to_json(ex.output)}});
    j["examples"] = std::move(examples);
    out << j.dump() << '\n';
  }
  if (!out) fail(ErrorCode::kData, "failed writing " + path.string());
}

std::vector<TestProgram> read_tests(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kData, "cannot open test file " + path.string());
  std::vector<TestProgram> tests;
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    if (line.empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(n);
    try {
      auto j = json::parse(line);
      TestProgram t;
      t.id = j.at("id").get<std::size_t>();
      t.program = dsl::parse_program(j.at("program").get<std::string>());
      auto cls = parse_class(j.at("class").get<std::string>());
      if (!cls) fail(ErrorCode::kData, "unknown target class");
      t.target_class = *cls;
      if (j.at("length").get<std::size_t>() != t.program.length())
        fail(ErrorCode::kData, "length does not match the program");
      for (const auto& ex : j.at("examples"))
        t.examples.examples.push_back(
            {ex.at("input").get<dsl::List>(), value_from_json(ex.at("output"))});
      if (t.examples.size() == 0) fail(ErrorCode::kData, "target has no examples");
      if (!dsl::check_equivalence(t.program, t.examples))
        fail(ErrorCode::kData, "stored examples do not match the program");
      tests.push_back(std::move(t));
    } catch (const json::exception& e) {
      fail(ErrorCode::kData, where + ": " + e.what());
    } catch (const Error& e) {
      fail(e.code(), where + ": " + e.what());
    }
  }
  return tests;
}

void BenchConfig::validate() const {
  if (repeats < 1) fail(ErrorCode::kConfig, "repeats must be >= 1");
  search.validate();
  if ((is_learned(fitness) || fitness == fitness::FitnessKind::kFunctionProbability) && !model)
    fail(ErrorCode::kConfig,
         std::string(fitness::kind_name(fitness)) + " fitness needs a model file");
}

std::uint64_t run_seed(std::uint64_t master, std::size_t target_id, std::size_t repeat) {
  return derive_seed(master, target_id + 1, repeat + 1);
}

RunRecord make_record(const TestProgram& test, std::size_t repeat,
                      const BenchConfig& config, const search::SearchReport& report) {
  RunRecord r;
  r.target_id = test.id;
  r.length = test.program.length();
  r.target_class = test.target_class;
  r.repeat_index = repeat;
  r.fitness = std::string(fitness::kind_name(config.fitness));
  r.found = report.found.has_value();
  r.candidates_evaluated = report.candidates_evaluated;
  r.budget = config.search.candidate_budget;
  r.generations = report.generations;
  r.ns_invocations = report.ns_invocations;
  r.wall_ms = to_ms(report.wall_time);
  r.inference_ms = to_ms(report.inference_time);
  r.seed = report.seed;
  return r;
}

std::vector<RunRecord> run_bench(const std::vector<TestProgram>& tests,
                                 const BenchConfig& config,
                                 const std::function<void(const RunRecord&)>& on_record) {
  config.validate();
  if (is_learned(config.fitness))
    for (const auto& t : tests)
      if (config.model->spec.n_outputs != t.program.length() + 1)
        fail(ErrorCode::kModelShape,
             "model predicts " + std::to_string(config.model->spec.n_outputs) +
                 " classes but target " + std::to_string(t.id) + " has length " +
                 std::to_string(t.program.length()));

  std::vector<RunRecord> records;
  for (const auto& test : tests) {
    fitness::FitnessArtifacts artifacts{config.fitness, test.program, config.model,
                                        config.mode};
    for (std::size_t k = 0; k < config.repeats; ++k) {
      auto sc = config.search;
      sc.gene_length = test.program.length();
      sc.seed = run_seed(config.seed, test.id, k);
      auto report = search::synthesize(test.examples, artifacts, sc);
      records.push_back(make_record(test, k, config, report));
      if (on_record) on_record(records.back());
    }
  }
  std::stable_sort(records.begin(), records.end(), [](const auto& a, const auto& b) {
    return std::tie(a.target_id, a.repeat_index) < std::tie(b.target_id, b.repeat_index);
  });
  return records;
}

std::string record_to_line(const RunRecord& r) {
  json j;
  j["target_id"] = r.target_id;
  j["length"] = r.length;
  j["target_class"] = class_name(r.target_class);
  j["repeat_index"] = r.repeat_index;
  j["fitness"] = r.fitness;
  j["found"] = r.found;
  j["candidates_evaluated"] = r.candidates_evaluated;
  j["budget"] = r.budget;
  j["generations"] = r.generations;
  j["ns_invocations"] = r.ns_invocations;
  j["wall_ms"] = r.wall_ms;
  j["inference_ms"] = r.inference_ms;
  j["seed"] = r.seed;
  return j.dump();
}

RunRecord record_from_line(std::string_view line) {
  try {
    auto j = json::parse(line);
    RunRecord r;
    r.target_id = j.at("target_id").get<std::size_t>();
    r.length = j.at("length").get<std::size_t>();
    auto cls = parse_class(j.at("target_class").get<std::string>());
    if (!cls) fail(ErrorCode::kData, "unknown target class in record");
    r.target_class = *cls;
    r.repeat_index = j.at("repeat_index").get<std::size_t>();
    r.fitness = j.at("fitness").get<std::string>();
    r.found = j.at("found").get<bool>();
    r.candidates_evaluated = j.at("candidates_evaluated").get<std::uint64_t>();
    r.budget = j.at("budget").get<std::uint64_t>();
    r.generations = j.at("generations").get<std::size_t>();
    r.ns_invocations = j.at("ns_invocations").get<std::uint64_t>();
    r.wall_ms = j.at("wall_ms").get<double>();
    r.inference_ms = j.at("inference_ms").get<double>();
    r.seed = j.at("seed").get<std::uint64_t>();
    return r;
  } catch (const json::exception& e) {
    fail(ErrorCode::kData, std::string("bad run record: ") + e.what());
  }
}

RecordAppender::RecordAppender(const std::filesystem::path& path)
    : path_(path), out_(std::make_unique<std::ofstream>(path, std::ios::trunc)) {
  if (!*out_) fail(ErrorCode::kData, "cannot write " + path.string());
}

void RecordAppender::append(const RunRecord& r) {
  *out_ << record_to_line(r) << '\n';
  out_->flush();
  if (!*out_) fail(ErrorCode::kData, "failed appending to " + path_.string());
}

std::uint32_t file_crc32(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kData, "cannot open " + path.string());
  uLong crc = crc32(0L, Z_NULL, 0);
  char buf[1 << 16];
  while (in.read(buf, sizeof buf) || in.gcount() > 0)
    crc = crc32(crc, reinterpret_cast<const Bytef*>(buf), static_cast<uInt>(in.gcount()));
  return static_cast<std::uint32_t>(crc);
}

void write_records(std::vector<RunRecord> records, const std::filesystem::path& path) {
  std::stable_sort(records.begin(), records.end(), [](const auto& a, const auto& b) {
    return std::tie(a.target_id, a.repeat_index) < std::tie(b.target_id, b.repeat_index);
  });
  {
    std::ofstream out(path, std::ios::trunc);
    if (!out) fail(ErrorCode::kData, "cannot write " + path.string());
    for (const auto& r : records) out << record_to_line(r) << '\n';
    if (!out) fail(ErrorCode::kData, "failed writing " + path.string());
  }
  std::ofstream sidecar(crc_path(path), std::ios::trunc);
  char hex[16];
  std::snprintf(hex, sizeof hex, "%08x", file_crc32(path));
  sidecar << hex << '\n';
  if (!sidecar) fail(ErrorCode::kData, "failed writing " + crc_path(path));
}

std::vector<RunRecord> read_records(const std::filesystem::path& path) {
  std::ifstream sidecar(crc_path(path));
  std::string stored;
  if (!sidecar || !(sidecar >> stored))
    fail(ErrorCode::kData, "missing checksum file " + crc_path(path));
  char actual[16];
  std::snprintf(actual, sizeof actual, "%08x", file_crc32(path));
  if (stored != actual)
    fail(ErrorCode::kData, "checksum mismatch for " + path.string() + ": stored " + stored +
                               ", actual " + actual);
  std::ifstream in(path);
  std::vector<RunRecord> records;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) records.push_back(record_from_line(line));
  return records;
}

std::size_t nearest_rank_index(int percentile, std::size_t n) {
  require(n > 0 && percentile > 0 && percentile <= 100, "bad percentile query");
  // Integer ceil(p * n / 100) avoids floating-point rounding at exact ranks.
  std::size_t rank = (static_cast<std::size_t>(percentile) * n + 99) / 100;
  return std::max<std::size_t>(rank, 1) - 1;
}

std::vector<SummaryRow> summarize(const std::vector<RunRecord>& records) {
  std::map<std::pair<std::size_t, std::string>, std::vector<const RunRecord*>> groups;
  for (const auto& r : records) groups[{r.length, r.fitness}].push_back(&r);

  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<SummaryRow> rows;
  for (const auto& [key, runs] : groups) {
    std::vector<double> wall, opt, space;
    std::size_t found = 0;
    for (const auto* r : runs) {
      found += r->found;
      wall.push_back(r->found ? r->wall_ms : kInf);
      opt.push_back(r->found ? r->wall_ms - r->inference_ms : kInf);
      space.push_back(r->found ? 100.0 * static_cast<double>(r->candidates_evaluated) /
                                     static_cast<double>(r->budget)
                               : 100.0);
    }
    std::sort(wall.begin(), wall.end());
    std::sort(opt.begin(), opt.end());
    std::sort(space.begin(), space.end());
    auto finite = [](double x) { return std::isinf(x) ? std::nan("") : x; };
    const double pct = 100.0 * static_cast<double>(found) / static_cast<double>(runs.size());
    for (int p : kPercentiles) {
      auto i = nearest_rank_index(p, runs.size());
      rows.push_back({key.first, key.second, p, pct, finite(wall[i]), finite(opt[i]), space[i]});
    }
  }
  return rows;
}

std::string format_summary(const std::vector<SummaryRow>& rows) {
  std::ostringstream out;
  out << "length,fitness,percentile,synthesis_pct,wall_ms,opt_ms,space_used_pct\n";
  for (const auto& r : rows)
    out << r.length << ',' << r.fitness << ',' << r.percentile << ','
        << format_number(r.synthesis_pct) << ',' << format_number(r.wall_ms) << ','
        << format_number(r.opt_ms) << ',' << format_number(r.space_used_pct) << '\n';
  return out.str();
}

}  // namespace genesyn::bench
