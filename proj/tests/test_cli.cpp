// Copyright 2026 The pimcbench Authors
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
#include <sstream>
#include <string>
#include <vector>

#include "pimc/cli.hpp"
#include "pimc/model.hpp"
#include "pimc/report.hpp"

namespace pimc::cli {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("pimc_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int call(const std::vector<std::string>& args) {
    out_.str("");
    err_.str("");
    return run(args, out_, err_);
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  static std::string slurp(const std::string& p) {
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

TEST(ParseArgs, BenchDefaultsFromPreset) {
  const auto cmd = parse_args({"bench", "--qubits", "8"});
  ASSERT_EQ(cmd.kind, CommandKind::bench);
  EXPECT_EQ(cmd.bench.run.points, 27u);
  EXPECT_EQ(cmd.bench.run.layers, 128u);
  EXPECT_EQ(cmd.bench.run.sweeps, 20000u);
  EXPECT_EQ(cmd.bench.reps, 10u);
  EXPECT_EQ(cmd.bench.run.backend, BackendKind::reference);
  EXPECT_EQ(cmd.bench.format, ReportFormat::csv);
}

TEST(ParseArgs, BenchOverrides) {
  const auto cmd = parse_args({"bench", "--qubits", "10", "--points", "5", "--backend", "parallel", "--format",
                               "markdown", "--sweeps", "7", "--seed", "3"});
  EXPECT_EQ(cmd.bench.run.points, 5u);
  EXPECT_EQ(cmd.bench.run.backend, BackendKind::parallel);
  EXPECT_EQ(cmd.bench.format, ReportFormat::markdown);
  EXPECT_EQ(cmd.bench.run.sweeps, 7u);
  EXPECT_EQ(cmd.bench.run.seed, 3u);
}

TEST(ParseArgs, UsageErrors) {
  EXPECT_THROW(parse_args({"bench", "--qubits", "10"}), UsageError);
  EXPECT_THROW(parse_args({"bench"}), UsageError);
  EXPECT_THROW(parse_args({"bench", "--qubits", "8", "--frobnicate"}), UsageError);
  EXPECT_THROW(parse_args({"bench", "--qubits", "8", "--backend", "cuda"}), UsageError);
  EXPECT_THROW(parse_args({"launch"}), UsageError);
  EXPECT_THROW(parse_args({"compare", "/nonexistent/a.csv", "/nonexistent/b.csv"}), UsageError);
}

TEST(ParseArgs, OtherCommands) {
  EXPECT_THROW(parse_args({}), UsageError);
  EXPECT_EQ(parse_args({"--help"}).kind, CommandKind::help);
  const auto v = parse_args({"verify", "--suite", "rng", "--suite", "delta"});
  ASSERT_EQ(v.kind, CommandKind::verify);
  EXPECT_EQ(v.verify.suites, (std::vector<std::string>{"rng", "delta"}));
  const auto g = parse_args({"gen-instance", "--qubits", "12", "--seed", "9"});
  ASSERT_EQ(g.kind, CommandKind::gen_instance);
  EXPECT_EQ(g.gen.qubits, 12u);
  EXPECT_EQ(g.gen.seed, 9u);
}

TEST_F(CliTest, UsageExitCodes) {
  EXPECT_EQ(call({"bench", "--qubits", "10"}), kExitUsage);
  EXPECT_NE(err_.str().find("--points"), std::string::npos);
  EXPECT_EQ(call({"bench", "--qubits", "8", "--bogus"}), kExitUsage);
  EXPECT_EQ(call({"--help"}), kExitOk);
}

TEST_F(CliTest, GenInstanceRoundTrips) {
  ASSERT_EQ(call({"gen-instance", "--qubits", "6", "--seed", "2", "--out", path("i.txt")}), kExitOk);
  const auto text = slurp(path("i.txt"));
  auto expected = generate_instance(6, 2, 0.5);
  expected.id = "generated";
  EXPECT_EQ(load_instance(text, "generated"), expected);
  ASSERT_EQ(call({"gen-instance", "--qubits", "6", "--seed", "2"}), kExitOk);
  EXPECT_EQ(out_.str(), text);
}

TEST_F(CliTest, BenchIsDeterministic) {
  const std::vector<std::string> base{"bench", "--qubits", "8", "--layers", "8", "--points", "3",
                                      "--sweeps", "20", "--reps", "2", "--lanes", "4", "--seed", "5"};
  auto a_args = base, b_args = base;
  a_args.insert(a_args.end(), {"--out", path("a.csv")});
  b_args.insert(b_args.end(), {"--out", path("b.csv"), "--backend", "parallel"});
  ASSERT_EQ(call(a_args), kExitOk) << err_.str();
  ASSERT_EQ(call(b_args), kExitOk) << err_.str();
  const auto a = parse_report(slurp(path("a.csv")));
  const auto b = parse_report(slurp(path("b.csv")));
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t r = 0; r < a.size(); ++r) {
    EXPECT_EQ(a[r].bytes_in, b[r].bytes_in);
    EXPECT_EQ(a[r].bytes_out, b[r].bytes_out);
    EXPECT_EQ(a[r].extra, b[r].extra);
  }
}

TEST_F(CliTest, BenchWithInstanceFile) {
  ASSERT_EQ(call({"gen-instance", "--qubits", "5", "--seed", "1", "--out", path("i.txt")}), kExitOk);
  EXPECT_EQ(call({"bench", "--qubits", "5", "--points", "2", "--layers", "4", "--sweeps", "3", "--reps", "1",
                  "--instance", path("i.txt")}),
            kExitOk)
      << err_.str();
  EXPECT_EQ(call({"bench", "--qubits", "6", "--points", "2", "--layers", "4", "--sweeps", "3", "--reps", "1",
                  "--instance", path("i.txt")}),
            kExitFailure);
  EXPECT_NE(err_.str().find("input"), std::string::npos);
}

TEST_F(CliTest, CompareFixtures) {
  const std::string fixtures = PIMC_FIXTURE_DIR;
  ASSERT_EQ(call({"compare", fixtures + "/gtx260_cuda.csv", fixtures + "/gtx260_opencl.csv"}), kExitOk)
      << err_.str();
  EXPECT_NE(out_.str().find("end_to_end"), std::string::npos);
}

TEST_F(CliTest, VerifySelectedSuite) {
  EXPECT_EQ(call({"verify", "--suite", "rng", "--suite", "size", "--fixtures", PIMC_FIXTURE_DIR}), kExitOk);
  EXPECT_NE(out_.str().find("PASS rng"), std::string::npos);
  EXPECT_EQ(call({"verify", "--suite", "nonsense"}), kExitUsage);
}

TEST_F(CliTest, CorruptFixtureFailsByName) {
  const std::string fixtures = PIMC_FIXTURE_DIR;
  fs::copy_file(fixtures + "/gtx260_cuda.csv", path("gtx260_cuda.csv"));
  auto text = slurp(fixtures + "/gtx260_opencl.csv");
  const auto at = text.find(",opencl,kernel,");
  ASSERT_NE(at, std::string::npos);
  const auto value_at = at + std::string(",opencl,kernel,").size();
  text.replace(value_at, text.find(',', value_at) - value_at, "99.0");
  std::ofstream(path("gtx260_opencl.csv")) << text;
  EXPECT_EQ(call({"verify", "--suite", "fixtures", "--fixtures", dir_.string()}), kExitFailure);
  EXPECT_NE(out_.str().find("FAIL fixtures"), std::string::npos);
}

TEST_F(CliTest, WritesAreAtomic) {
  const auto target = path("report.csv");
  write_atomically(target, "first\n");
  write_atomically(target, "second\n");
  EXPECT_EQ(slurp(target), "second\n");
  std::size_t entries = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir_)) ++entries;
  EXPECT_EQ(entries, 1u);
  EXPECT_THROW(write_atomically(path("missing/dir/x.csv"), "x"), Error);
  EXPECT_FALSE(fs::exists(path("missing")));
}

}  // namespace
}  // namespace pimc::cli
