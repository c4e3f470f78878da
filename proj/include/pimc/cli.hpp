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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "pimc/error.hpp"
#include "pimc/harness.hpp"
#include "pimc/report.hpp"

namespace pimc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Bad command line. `help()` is the usage text for the offending command.
class UsageError : public Error {
 public:
  UsageError(const std::string& what, std::string help) : Error(what), help_(std::move(help)) {}
  const std::string& help() const { return help_; }

 private:
  std::string help_;
};

struct BenchConfig {
  RunConfig run;
  std::size_t reps = 10;
  std::string output_path;  // stdout when empty
  ReportFormat format = ReportFormat::csv;
};

struct VerifyConfig {
  std::vector<std::string> suites;  // all when empty
  std::string fixture_dir;
};

struct GenInstanceConfig {
  std::size_t qubits = 0;
  std::uint64_t seed = 0;
  double density = 0.5;
  std::string output_path;
};

struct CompareConfig {
  std::string file_a;
  std::string file_b;
  std::string output_path;
  ReportFormat format = ReportFormat::csv;
};

enum class CommandKind { bench, verify, gen_instance, compare, help };

struct Command {
  CommandKind kind = CommandKind::help;
  BenchConfig bench;
  VerifyConfig verify;
  GenInstanceConfig gen;
  CompareConfig compare;
  std::string help_text;
};

/// Parses `args` (without the program name). Throws UsageError.
Command parse_args(const std::vector<std::string>& args);

int cmd_bench(const BenchConfig& config, std::ostream& out, std::ostream& err);
int cmd_verify(const VerifyConfig& config, std::ostream& out, std::ostream& err);
int cmd_gen_instance(const GenInstanceConfig& config, std::ostream& out, std::ostream& err);
int cmd_compare(const CompareConfig& config, std::ostream& out, std::ostream& err);

/// Full command dispatch. Returns 0 on success, 1 on runtime failure and 2
/// on usage errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Writes `content` to `path` through a temporary file and a rename, so an
/// interrupted write never leaves a partial file behind.
void write_atomically(const std::string& path, const std::string& content);

}  // namespace pimc::cli
