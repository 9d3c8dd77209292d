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

// genesyn command-line front end.
//
//   genesyn gen-corpus --metric cf --out cf.csv
//   genesyn train --data cf.csv --out cf.model
//   genesyn gen-tests --out tests.jsonl
//   genesyn synth --tests tests.jsonl --target 3 --fitness oracle-cf
//   genesyn bench --tests tests.jsonl --fitness learned-cf --model cf.model --out runs.jsonl
//
// Every option may also come from a flat key=value file given with --config;
// flags on the command line win.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "genesyn/bench.hpp"
#include "genesyn/datagen.hpp"
#include "genesyn/dsl.hpp"
#include "genesyn/error.hpp"
#include "genesyn/fitness.hpp"
#include "genesyn/nn/model.hpp"
#include "genesyn/search.hpp"

namespace fs = std::filesystem;
using namespace genesyn;

namespace {

enum ExitCode {
  kExitOk = 0,
  kExitConfig = 2,
  kExitData = 3,
  kExitModel = 4,
  kExitContract = 5,
  kExitTraining = 6,
  kExitRetryBudget = 7,
  kExitInternal = 70,
};

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConfig: return kExitConfig;
    case ErrorCode::kData:
    case ErrorCode::kDataMalformedHeader:
    case ErrorCode::kDataTruncated:
    case ErrorCode::kDataWidthMismatch: return kExitData;
    case ErrorCode::kModel:
    case ErrorCode::kModelVersion:
    case ErrorCode::kModelChecksum:
    case ErrorCode::kModelShape: return kExitModel;
    case ErrorCode::kContractViolation: return kExitContract;
    case ErrorCode::kNonFiniteLoss: return kExitTraining;
    case ErrorCode::kRetryBudget: return kExitRetryBudget;
  }
  return kExitInternal;
}

int report_error(const char* code, const std::string& msg, int status) {
  std::string flat = msg;
  for (char& c : flat)
    if (c == '\n') c = ' ';
  std::cerr << "error code=" << code << " msg=" << flat << '\n';
  return status;
}

struct Options {
  std::uint64_t seed = 0;
  std::string out;
  std::string fitness = "constant";
  std::string mode = "IO";
  std::string ns = "off";
  std::uint64_t budget = 3'000'000;
  std::vector<std::size_t> lengths{4};

  // search
  std::size_t population = 100;
  std::size_t max_generations = 30000;
  std::size_t ns_top = 5;
  std::size_t ns_window = 10;
  bool guided_mutation = false;

  // gen-corpus
  std::string metric = "cf";
  std::size_t bases = 2000;
  std::size_t comparisons = 20;
  std::size_t corpus_examples = 10;
  std::string programs_out;

  // train
  std::string data;
  std::size_t epochs = 20;
  std::size_t batch = 256;
  double learning_rate = 1e-3;

  // gen-tests, synth, bench
  std::size_t programs_per_length = 20;
  std::size_t examples = 5;
  std::string tests;
  std::string model;
  std::string program;
  long target = -1;
  std::size_t repeats = 5;
  std::string summary;
};

std::size_t single_length(const Options& o) {
  if (o.lengths.size() != 1)
    fail(ErrorCode::kConfig, "this command takes exactly one --length");
  return o.lengths.front();
}

fitness::FitnessKind fitness_kind(const Options& o) {
  auto k = fitness::parse_kind(o.fitness);
  if (!k) fail(ErrorCode::kConfig, "unknown fitness \"" + o.fitness + "\"");
  return *k;
}

fitness::EncodingMode encoding_mode(const Options& o) {
  auto m = fitness::parse_mode(o.mode);
  if (!m) fail(ErrorCode::kConfig, "unknown encoding mode \"" + o.mode + "\"");
  return *m;
}

const std::string& need(const std::string& value, const char* flag) {
  if (value.empty()) fail(ErrorCode::kConfig, std::string("missing ") + flag);
  return value;
}

search::SearchConfig search_config(const Options& o) {
  search::SearchConfig c;
  c.population_size = o.population;
  c.max_generations = o.max_generations;
  c.candidate_budget = o.budget;
  c.ns_enabled = o.ns != "off";
  c.ns_mode = o.ns == "dfs" ? search::NsMode::kDFS : search::NsMode::kBFS;
  c.ns_top_n = o.ns_top;
  c.ns_window = o.ns_window;
  c.guided_mutation = o.guided_mutation;
  c.seed = o.seed;
  return c;
}

// Loads the model the fitness kind needs, checking its shape against the
// encoding and target length. Returns null for kinds without a model.
std::shared_ptr<const nn::Model> load_fitness_model(const Options& o,
                                                    fitness::FitnessKind kind,
                                                    std::size_t length) {
  using fitness::FitnessKind;
  if (kind != FitnessKind::kLearnedCF && kind != FitnessKind::kLearnedLCS &&
      kind != FitnessKind::kFunctionProbability)
    return nullptr;
  need(o.model, "--model (required by this fitness)");
  nn::ModelSpec expected =
      kind == FitnessKind::kFunctionProbability
          ? nn::ModelSpec::function_probability(fitness::feature_width(fitness::EncodingMode::kIO))
          : nn::ModelSpec::closeness_classifier(fitness::feature_width(encoding_mode(o)), length);
  return std::make_shared<const nn::Model>(nn::load_model(o.model, &expected));
}

datagen::CorpusConfig corpus_config(const Options& o) {
  datagen::CorpusConfig c;
  c.n_base_programs = o.bases;
  c.program_length = single_length(o);
  c.n_comparisons = o.comparisons;
  c.n_examples = o.corpus_examples;
  c.seed = o.seed;
  return c;
}

int cmd_gen_corpus(const Options& o) {
  const auto& out = need(o.out, "--out");
  auto config = corpus_config(o);
  auto corpus = datagen::generate_corpus(config);
  std::cout << "corpus: " << corpus.size() << " base programs\n";
  if (!o.programs_out.empty()) {
    std::vector<dsl::Program> programs;
    for (const auto& e : corpus) programs.push_back(e.program);
    datagen::write_programs(programs, o.programs_out);
  }
  datagen::LabeledRows rows;
  if (o.metric == "fp") {
    rows = datagen::generate_fp_rows(corpus);
  } else {
    auto metric = o.metric == "lcs" ? datagen::Metric::kLCS : datagen::Metric::kCF;
    auto pairs = datagen::generate_pairs(corpus, config);
    rows = datagen::label_pairs(corpus, pairs, metric, encoding_mode(o));
  }
  datagen::write_dataset(rows, out);
  std::cout << "wrote " << rows.size() << " rows (" << fitness::mode_name(rows.mode)
            << ", width " << rows.width << ") to " << out << '\n';
  return kExitOk;
}

int cmd_train(const Options& o) {
  const auto& data_path = need(o.data, "--data");
  const auto& out = need(o.out, "--out");
  auto rows = datagen::read_dataset(data_path);
  auto [train_rows, test_rows] = datagen::split_dataset(rows, o.seed);

  const std::size_t length = single_length(o);
  nn::ModelSpec spec = rows.label_arity == 1
                           ? nn::ModelSpec::closeness_classifier(rows.width, length)
                           : nn::ModelSpec::function_probability(rows.width);
  if (rows.label_arity != 1 && rows.label_arity != spec.n_outputs)
    fail(ErrorCode::kDataWidthMismatch, "multilabel dataset must have 41 label columns");
  auto train_set = datagen::to_training_set(train_rows, spec.n_outputs);
  auto test_set = datagen::to_training_set(test_rows, spec.n_outputs);

  nn::TrainConfig tc;
  tc.learning_rate = o.learning_rate;
  tc.batch_size = o.batch;
  tc.epochs = o.epochs;
  tc.seed = o.seed;
  auto model = nn::init_model(spec, o.seed);
  for (const auto& e : nn::train(model, train_set, &test_set, tc))
    std::printf("epoch %zu loss %.6f holdout_accuracy %.4f\n", e.epoch, e.train_loss,
                e.holdout_accuracy);
  auto eval = nn::evaluate(model, test_set);
  std::printf("test rows %zu accuracy %.4f", eval.rows, eval.accuracy);
  if (spec.head == nn::HeadKind::kSoftmax)
    std::printf(" majority_baseline %.4f", nn::majority_baseline(test_set));
  std::printf("\n");
  nn::save_model(model, out);
  std::cout << "wrote model to " << out << '\n';
  return kExitOk;
}

int cmd_gen_tests(const Options& o) {
  const auto& out = need(o.out, "--out");
  bench::TestSuiteConfig c;
  c.lengths = o.lengths;
  c.programs_per_length = o.programs_per_length;
  c.n_examples = o.examples;
  c.seed = o.seed;
  auto tests = bench::generate_tests(c);
  bench::write_tests(tests, out);
  std::cout << "wrote " << tests.size() << " test programs to " << out << '\n';
  return kExitOk;
}

int cmd_synth(const Options& o) {
  bench::TestProgram target;
  if (!o.program.empty()) {
    target.program = dsl::parse_program(o.program);
    datagen::CorpusConfig inputs;
    Rng rng(derive_seed(o.seed, 0, 3));
    auto ex = datagen::make_examples(target.program, o.examples, rng, inputs);
    if (!ex) fail(ErrorCode::kRetryBudget, "could not draw non-degenerate examples");
    target.examples = *std::move(ex);
  } else {
    auto tests = bench::read_tests(need(o.tests, "--tests or --program"));
    if (o.target < 0 || static_cast<std::size_t>(o.target) >= tests.size())
      fail(ErrorCode::kConfig, "--target must index the test file (0.." +
                                   std::to_string(tests.size()) + ")");
    target = tests[static_cast<std::size_t>(o.target)];
  }
  const auto kind = fitness_kind(o);
  fitness::FitnessArtifacts artifacts{kind, target.program,
                                      load_fitness_model(o, kind, target.program.length()),
                                      encoding_mode(o)};
  auto config = search_config(o);
  config.gene_length = target.program.length();
  auto report = search::synthesize(target.examples, artifacts, config);
  if (report.found)
    std::cout << "found: " << dsl::format_program(*report.found) << '\n';
  else
    std::cout << "not found\n";
  std::printf("candidates %llu generations %zu ns_invocations %llu wall_ms %.3f inference_ms %.3f\n",
              static_cast<unsigned long long>(report.candidates_evaluated), report.generations,
              static_cast<unsigned long long>(report.ns_invocations),
              std::chrono::duration<double, std::milli>(report.wall_time).count(),
              std::chrono::duration<double, std::milli>(report.inference_time).count());
  return kExitOk;
}

int cmd_bench(const Options& o) {
  const fs::path out = need(o.out, "--out");
  auto tests = bench::read_tests(need(o.tests, "--tests"));
  if (tests.empty()) fail(ErrorCode::kData, "test file holds no programs");

  bench::BenchConfig c;
  c.search = search_config(o);
  c.repeats = o.repeats;
  c.fitness = fitness_kind(o);
  c.mode = encoding_mode(o);
  c.seed = o.seed;
  c.model = load_fitness_model(o, c.fitness, tests.front().program.length());

  const fs::path partial = out.string() + ".partial";
  bench::RecordAppender appender(partial);
  auto records = bench::run_bench(tests, c, [&](const bench::RunRecord& r) {
    appender.append(r);
    std::printf("target %zu repeat %zu %s candidates %llu wall_ms %.1f\n", r.target_id,
                r.repeat_index, r.found ? "found" : "not-found",
                static_cast<unsigned long long>(r.candidates_evaluated), r.wall_ms);
    std::fflush(stdout);
  });
  bench::write_records(records, out);
  fs::remove(partial);

  const auto summary = bench::format_summary(bench::summarize(records));
  const fs::path summary_path = o.summary.empty() ? out.string() + ".summary.csv" : o.summary;
  std::ofstream(summary_path) << summary;
  std::cout << summary;
  std::cout << "wrote " << records.size() << " records to " << out.string() << ", summary to "
            << summary_path.string() << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Program synthesis by genetic search with learned fitness functions"};
  app.set_config("--config", "", "Flat key=value config file");
  app.require_subcommand(1);
  app.fallthrough();

  Options o;
  app.add_option("--seed", o.seed, "Master seed")->capture_default_str();
  app.add_option("--out", o.out, "Output path");
  app.add_option("--fitness", o.fitness,
                 "constant|edit|oracle-cf|oracle-lcs|learned-cf|learned-lcs|fp")
      ->capture_default_str();
  app.add_option("--mode", o.mode, "Feature encoding: IO|IO2|IODELTA")->capture_default_str();
  app.add_option("--ns", o.ns, "Neighborhood search: off|bfs|dfs")
      ->check(CLI::IsMember({"off", "bfs", "dfs"}))
      ->capture_default_str();
  app.add_option("--budget", o.budget, "Candidate budget per run")->capture_default_str();
  app.add_option("--length", o.lengths, "Program length(s)")->delimiter(',')->capture_default_str();
  app.add_option("--population", o.population)->capture_default_str();
  app.add_option("--max-generations", o.max_generations)->capture_default_str();
  app.add_option("--ns-top", o.ns_top, "Genes searched per NS invocation")->capture_default_str();
  app.add_option("--ns-window", o.ns_window, "NS saturation window")->capture_default_str();
  app.add_flag("--guided-mutation", o.guided_mutation,
               "Draw mutations from the fp probability map");
  app.add_option("--metric", o.metric, "gen-corpus labels: cf|lcs|fp")
      ->check(CLI::IsMember({"cf", "lcs", "fp"}))
      ->capture_default_str();
  app.add_option("--bases", o.bases, "Base programs in the corpus")->capture_default_str();
  app.add_option("--comparisons", o.comparisons, "Comparison programs per base")
      ->capture_default_str();
  app.add_option("--corpus-examples", o.corpus_examples, "Examples per base program")
      ->capture_default_str();
  app.add_option("--programs-out", o.programs_out, "Also write the base programs here");
  app.add_option("--data", o.data, "Dataset to train on");
  app.add_option("--epochs", o.epochs)->capture_default_str();
  app.add_option("--batch", o.batch)->capture_default_str();
  app.add_option("--lr", o.learning_rate)->capture_default_str();
  app.add_option("--programs-per-length", o.programs_per_length)->capture_default_str();
  app.add_option("--examples", o.examples, "Examples per test target")->capture_default_str();
  app.add_option("--tests", o.tests, "Test program file");
  app.add_option("--model", o.model, "Model file for learned/fp fitness");
  app.add_option("--program", o.program, "Target program text for synth");
  app.add_option("--target", o.target, "Index into the test file for synth");
  app.add_option("--repeats", o.repeats, "Runs per target")->capture_default_str();
  app.add_option("--summary", o.summary, "Summary CSV path (default <out>.summary.csv)");

  auto* gen_corpus = app.add_subcommand("gen-corpus", "Generate a labeled training dataset");
  auto* train = app.add_subcommand("train", "Train a fitness model");
  auto* gen_tests = app.add_subcommand("gen-tests", "Generate benchmark target programs");
  auto* synth = app.add_subcommand("synth", "Synthesize one target");
  auto* bench_cmd = app.add_subcommand("bench", "Run the benchmark over a test file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("CONFIG_ERROR", e.what(), kExitConfig);
  }

  std::cout << "# resolved config (seed=" << o.seed << ")\n"
            << app.config_to_str(true, false) << std::flush;

  try {
    if (*gen_corpus) return cmd_gen_corpus(o);
    if (*train) return cmd_train(o);
    if (*gen_tests) return cmd_gen_tests(o);
    if (*synth) return cmd_synth(o);
    if (*bench_cmd) return cmd_bench(o);
  } catch (const Error& e) {
    return report_error(error_code_name(e.code()), e.what(), exit_code_for(e.code()));
  } catch (const std::exception& e) {
    return report_error("INTERNAL_ERROR", e.what(), kExitInternal);
  }
  return kExitInternal;
}
