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

#include <fstream>
#include <sstream>
#include <string>

#include "pimc/error.hpp"
#include "pimc/harness.hpp"
#include "pimc/report.hpp"

namespace pimc {
namespace {

std::string read_fixture(const std::string& name) {
  std::ifstream in(std::string(PIMC_FIXTURE_DIR) + "/" + name);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

RunStats sample_stats() {
  RunConfig c;
  c.qubits = 8;
  c.layers = 4;
  c.points = 2;
  c.sweeps = 5;
  c.lanes_per_group = 2;
  c.seed = 4;
  std::vector<PhaseRecord> records{run_benchmark(c), run_benchmark(c)};
  return aggregate(records);
}

TEST(ReportFormatNames, Parse) {
  EXPECT_EQ(parse_report_format("csv"), ReportFormat::csv);
  EXPECT_EQ(parse_report_format("markdown"), ReportFormat::markdown);
  EXPECT_THROW(parse_report_format("json"), ValidationError);
}

TEST(FormatNumber, ShortestRoundTrip) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(332313.6), "332313.6");
  EXPECT_EQ(std::stod(format_number(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(Csv, RoundTripsRuns) {
  const std::vector<RunStats> stats{sample_stats()};
  const auto rows = report_rows(stats);
  ASSERT_EQ(rows.size(), kMetricCount);
  const auto text = emit_report(stats, ReportFormat::csv);
  const auto parsed = parse_report(text);
  EXPECT_EQ(parsed, rows);
  EXPECT_EQ(format_csv(parsed), text);
  EXPECT_EQ(text.substr(0, text.find('\n')),
            "qubits,backend,metric,mean_s,stdev_s,bytes_in,bytes_out,layers,points,sweeps,reps,seed,flips,spin_digest");
}

TEST(Markdown, OneRowPerRun) {
  const std::vector<RunStats> stats{sample_stats()};
  const auto text = emit_report(stats, ReportFormat::markdown);
  std::size_t lines = 0;
  for (char c : text) lines += c == '\n';
  EXPECT_EQ(lines, 3u);
  EXPECT_NE(text.find("| 8 | reference |"), std::string::npos);
  EXPECT_THROW(emit_report(std::span<const RunStats>{}, ReportFormat::csv), DomainError);
}

TEST(ParseReport, ReportsLineNumbers) {
  try {
    parse_report("# note\nqubits,backend,metric,mean_s,stdev_s,bytes_in,bytes_out\n8,cuda,kernel,abc,0,1,1\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  EXPECT_THROW(parse_report("qubits,backend\n"), ParseError);
  EXPECT_THROW(parse_report("qubits,backend,metric,mean_s,stdev_s,bytes_in,bytes_out\n8,cuda,kernel,1\n"),
               ParseError);
  EXPECT_THROW(parse_report("# only comments\n"), ParseError);
}

TEST(Compare, SelfComparisonIsNeutral) {
  const auto rows = parse_report(read_fixture("gtx260_cuda.csv"));
  const auto cmp = compare_reports(rows, rows);
  ASSERT_EQ(cmp.size(), 28u);
  for (const auto& c : cmp) {
    EXPECT_EQ(c.ratio, 1.0);
    EXPECT_EQ(c.relative_difference, 0.0);
  }
}

TEST(Compare, MismatchedKeysAreListed) {
  const auto rows = parse_report(read_fixture("gtx260_cuda.csv"));
  auto fewer = rows;
  fewer.pop_back();
  try {
    compare_reports(rows, fewer);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("128"), std::string::npos);
  }
}

TEST(Compare, PublishedFixtureSpans) {
  const auto cuda = parse_report(read_fixture("gtx260_cuda.csv"));
  const auto opencl = parse_report(read_fixture("gtx260_opencl.csv"));
  const auto summary = summarize(compare_reports(cuda, opencl));
  EXPECT_NEAR(summary.relative_difference.at("kernel").min, 0.127, 0.005);
  EXPECT_NEAR(summary.relative_difference.at("kernel").max, 0.626, 0.005);
  EXPECT_NEAR(summary.relative_difference.at("end_to_end").min, 0.157, 0.005);
  EXPECT_NEAR(summary.relative_difference.at("end_to_end").max, 0.674, 0.005);
  EXPECT_NEAR(summary.ratio.at("transfer").min, 1.22, 0.01);
  EXPECT_NEAR(summary.ratio.at("transfer").max, 1.56, 0.01);
}

TEST(Compare, EmitsBothFormats) {
  const auto rows = parse_report(read_fixture("gtx260_cuda.csv"));
  const auto cmp = compare_reports(rows, rows);
  const auto csv = emit_comparison(cmp, ReportFormat::csv);
  const auto md = emit_comparison(cmp, ReportFormat::markdown);
  EXPECT_FALSE(csv.empty());
  EXPECT_EQ(md.rfind("|", 0), 0u);
}

}  // namespace
}  // namespace pimc
