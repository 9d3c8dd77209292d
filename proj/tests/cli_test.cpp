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
#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace {

namespace fs = std::filesystem;

struct Result {
  int status = -1;
  std::string output;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("genesyn_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  Result run(const std::string& args) {
    std::string cmd = "cd '" + dir_.string() + "' && '" GENESYN_CLI "' " + args + " 2>&1";
    Result r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) r.output.append(buf, n);
    int st = pclose(pipe);
    r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
  }

  std::string slurp(const std::string& name) {
    std::ifstream in(dir_ / name, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path dir_;
};

TEST_F(Cli, MissingSubcommandOrBadOptionIsAConfigError) {
  EXPECT_EQ(run("").status, 2);
  auto r = run("synth --ns sideways --program HEAD");
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.output.find("error code=CONFIG_ERROR"), std::string::npos) << r.output;
}

TEST_F(Cli, LearnedFitnessWithoutModelIsAConfigError) {
  auto r = run("synth --program HEAD --fitness learned-cf");
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.output.find("CONFIG_ERROR"), std::string::npos);
  EXPECT_NE(r.output.find("# resolved config"), std::string::npos);
}

TEST_F(Cli, SynthFindsAnOracleTarget) {
  auto r = run("synth --program 'MAP(*2)|REVERSE' --length 2 --fitness oracle-cf --seed 5");
  EXPECT_EQ(r.status, 0) << r.output;
  EXPECT_NE(r.output.find("found: "), std::string::npos) << r.output;
  EXPECT_NE(r.output.find("seed=5"), std::string::npos);
}

TEST_F(Cli, CorruptInputsMapToDistinctExitCodes) {
  std::ofstream(dir_ / "bad.csv") << "hello\n";
  auto data = run("train --data bad.csv --out m.bin");
  EXPECT_EQ(data.status, 3) << data.output;
  EXPECT_NE(data.output.find("DATA_MALFORMED_HEADER"), std::string::npos);

  std::ofstream(dir_ / "bad.bin") << "not a model at all, just text";
  auto model = run("synth --program HEAD --length 1 --fitness learned-cf --model bad.bin");
  EXPECT_EQ(model.status, 4) << model.output;

  auto program = run("synth --program 'HEAD|FROB'");
  EXPECT_EQ(program.status, 3) << program.output;
}

TEST_F(Cli, ConfigFileSuppliesOptions) {
  std::ofstream(dir_ / "run.ini") << "fitness=oracle-cf\nlength=2\nseed=9\n";
  auto r = run("synth --config run.ini --program 'MAP(*2)|REVERSE'");
  EXPECT_EQ(r.status, 0) << r.output;
  EXPECT_NE(r.output.find("fitness=\"oracle-cf\""), std::string::npos) << r.output;
  EXPECT_NE(r.output.find("seed=9"), std::string::npos);
}

TEST_F(Cli, PipelineIsReproducible) {
  ASSERT_EQ(run("gen-corpus --bases 40 --comparisons 2 --seed 1 --out d.csv").status, 0);
  ASSERT_EQ(run("train --data d.csv --epochs 2 --seed 2 --out a.bin").status, 0);
  ASSERT_EQ(run("train --data d.csv --epochs 2 --seed 2 --out b.bin").status, 0);
  EXPECT_EQ(slurp("a.bin"), slurp("b.bin"));
  EXPECT_FALSE(slurp("a.bin").empty());

  ASSERT_EQ(run("gen-tests --length 2 --programs-per-length 4 --seed 3 --out t.jsonl").status, 0);
  auto bench = run("bench --tests t.jsonl --fitness learned-cf --model a.bin --out r.jsonl");
  EXPECT_EQ(bench.status, 4) << bench.output;  // model predicts 5 classes, targets need 3

  auto ok = run("bench --tests t.jsonl --fitness oracle-cf --repeats 2 --budget 2000 "
                "--seed 4 --out r.jsonl");
  ASSERT_EQ(ok.status, 0) << ok.output;
  EXPECT_TRUE(fs::exists(dir_ / "r.jsonl.crc32"));
  EXPECT_FALSE(fs::exists(dir_ / "r.jsonl.partial"));
  auto summary = slurp("r.jsonl.summary.csv");
  EXPECT_EQ(summary.rfind("length,fitness,percentile,", 0), 0u);
  EXPECT_NE(ok.output.find(summary), std::string::npos);

  std::size_t lines = 0;
  for (char c : slurp("r.jsonl")) lines += c == '\n';
  EXPECT_EQ(lines, 8u);
}

}  // namespace
