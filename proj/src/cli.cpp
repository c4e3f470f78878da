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

#include "pimc/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <unistd.h>

#include "pimc/model.hpp"
#include "pimc/verify.hpp"

#ifndef PIMC_FIXTURE_DIR
#define PIMC_FIXTURE_DIR "fixtures"
#endif

namespace pimc::cli {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << content;
  } else {
    write_atomically(path, content);
  }
}

}  // namespace

void write_atomically(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw Error("short write to '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error("cannot rename onto '" + path + "'");
  }
}

Command parse_args(const std::vector<std::string>& args) {
  Command cmd;
  CLI::App app{"Layered-Ising Monte Carlo benchmark", "pimcbench"};
  app.require_subcommand(1);

  auto& b = cmd.bench;
  std::string backend = "reference";
  std::string bench_format = "csv";
  auto* bench = app.add_subcommand("bench", "Run the timed benchmark and write a report");
  bench->add_option("--qubits", b.run.qubits, "Qubits per layer")->required()->check(CLI::PositiveNumber);
  bench->add_option("--layers", b.run.layers, "Trotter layers")->capture_default_str()->check(CLI::Range(2, 1 << 20));
  auto* points_opt = bench->add_option("--points", b.run.points, "Simulation points (default: preset for --qubits)")
                         ->check(CLI::PositiveNumber);
  bench->add_option("--sweeps", b.run.sweeps, "Sweeps per layered system")->capture_default_str();
  bench->add_option("--reps", b.reps, "Repetitions")->capture_default_str()->check(CLI::PositiveNumber);
  bench->add_option("--backend", backend, "reference or parallel")
      ->capture_default_str()
      ->check(CLI::IsMember({"reference", "parallel"}));
  bench->add_option("--lanes", b.run.lanes_per_group, "Lanes per work group")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  bench->add_option("--groups-in-flight", b.run.concurrent_groups,
                    "Parallel backend: concurrent work groups (0 = auto)")
      ->capture_default_str();
  bench->add_option("--seed", b.run.seed, "Seed for the generator and generated instance")->capture_default_str();
  bench->add_option("--instance", b.run.instance_path, "Instance file (default: generated)")
      ->check(CLI::ExistingFile);
  bench->add_option("--gamma0", b.run.gamma0, "Initial transverse field")->capture_default_str()->check(CLI::PositiveNumber);
  bench->add_option("--beta", b.run.beta, "Inverse temperature")->capture_default_str()->check(CLI::PositiveNumber);
  bench->add_option("--density", b.run.density, "Coupling density of generated instances")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  bench->add_option("--out", b.output_path, "Report path (default: stdout)");
  bench->add_option("--format", bench_format, "csv or markdown")
      ->capture_default_str()
      ->check(CLI::IsMember({"csv", "markdown"}));

  auto& v = cmd.verify;
  v.fixture_dir = PIMC_FIXTURE_DIR;
  auto* verify = app.add_subcommand("verify", "Run the built-in conformance suites");
  verify->add_option("--suite", v.suites, "Suite(s) to run (default: all)")
      ->check(CLI::IsMember(verify_suite_names()));
  verify->add_option("--fixtures", v.fixture_dir, "Directory with the timing fixtures")->capture_default_str();

  auto& g = cmd.gen;
  auto* gen = app.add_subcommand("gen-instance", "Write a random +-1 instance");
  gen->add_option("--qubits", g.qubits, "Qubits")->required()->check(CLI::PositiveNumber);
  gen->add_option("--seed", g.seed, "Coupling seed")->capture_default_str();
  gen->add_option("--density", g.density, "Probability of each coupling")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  gen->add_option("--out", g.output_path, "Output path (default: stdout)");

  auto& c = cmd.compare;
  std::string compare_format = "csv";
  auto* compare = app.add_subcommand("compare", "Ratios and relative differences of two reports");
  compare->add_option("base", c.file_a, "Baseline report")->required()->check(CLI::ExistingFile);
  compare->add_option("other", c.file_b, "Report compared against the baseline")->required()->check(CLI::ExistingFile);
  compare->add_option("--out", c.output_path, "Output path (default: stdout)");
  compare->add_option("--format", compare_format, "csv or markdown")
      ->capture_default_str()
      ->check(CLI::IsMember({"csv", "markdown"}));

  auto usage_help = [&]() -> std::string {
    for (auto* sub : {bench, verify, gen, compare}) {
      if (sub->parsed()) return sub->help();
    }
    return app.help();
  };

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    cmd.kind = CommandKind::help;
    cmd.help_text = usage_help();
    return cmd;
  } catch (const CLI::CallForAllHelp&) {
    cmd.kind = CommandKind::help;
    cmd.help_text = app.help("", CLI::AppFormatMode::All);
    return cmd;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what(), usage_help());
  }

  if (bench->parsed()) {
    cmd.kind = CommandKind::bench;
    b.run.backend = parse_backend_kind(backend);
    b.format = parse_report_format(bench_format);
    if (points_opt->count() == 0) {
      const auto preset = preset_points(b.run.qubits);
      if (!preset) {
        throw UsageError("no preset for " + std::to_string(b.run.qubits) + " qubits; pass --points",
                         bench->help());
      }
      b.run.points = *preset;
    }
    if (b.run.density <= 0.0) throw UsageError("--density must be in (0, 1]", bench->help());
  } else if (verify->parsed()) {
    cmd.kind = CommandKind::verify;
  } else if (gen->parsed()) {
    cmd.kind = CommandKind::gen_instance;
    if (g.density <= 0.0) throw UsageError("--density must be in (0, 1]", gen->help());
  } else {
    cmd.kind = CommandKind::compare;
    c.format = parse_report_format(compare_format);
  }
  return cmd;
}

int cmd_bench(const BenchConfig& config, std::ostream& out, std::ostream& err) {
  try {
    std::vector<PhaseRecord> records;
    records.reserve(config.reps);
    for (std::size_t rep = 0; rep < config.reps; ++rep) {
      records.push_back(run_benchmark(config.run));
      const auto& r = records.back();
      if (r.seconds(Metric::gpu_ops) > r.seconds(Metric::end_to_end) ||
          r.seconds(Metric::kernel) > r.seconds(Metric::gpu_ops) || r.bytes_in != r.bytes_out) {
        throw Error("accounting identity violated in repetition " + std::to_string(rep + 1));
      }
      err << "rep " << rep + 1 << "/" << config.reps << ": kernel " << format_number(r.seconds(Metric::kernel))
          << " s, end-to-end " << format_number(r.seconds(Metric::end_to_end)) << " s\n";
    }
    const RunStats stats = aggregate(records);
    emit(config.output_path, emit_report(std::span(&stats, 1), config.format), out);
    return kExitOk;
  } catch (const std::exception& e) {
    err << "bench: " << e.what() << '\n';
    return kExitFailure;
  }
}

int cmd_verify(const VerifyConfig& config, std::ostream& out, std::ostream& err) {
  try {
    return run_verify(config.suites, config.fixture_dir, out) ? kExitOk : kExitFailure;
  } catch (const std::exception& e) {
    err << "verify: " << e.what() << '\n';
    return kExitFailure;
  }
}

int cmd_gen_instance(const GenInstanceConfig& config, std::ostream& out, std::ostream& err) {
  try {
    emit(config.output_path, emit_instance(generate_instance(config.qubits, config.seed, config.density)), out);
    return kExitOk;
  } catch (const std::exception& e) {
    err << "gen-instance: " << e.what() << '\n';
    return kExitFailure;
  }
}

int cmd_compare(const CompareConfig& config, std::ostream& out, std::ostream& err) {
  try {
    const auto a = parse_report(read_file(config.file_a));
    const auto b = parse_report(read_file(config.file_b));
    const auto rows = compare_reports(a, b);
    emit(config.output_path, emit_comparison(rows, config.format), out);
    const auto summary = summarize(rows);
    for (const auto& [metric, span] : summary.relative_difference) {
      err << metric << ": relative difference " << format_number(span.min) << " .. " << format_number(span.max)
          << ", ratio " << format_number(summary.ratio.at(metric).min) << " .. "
          << format_number(summary.ratio.at(metric).max) << '\n';
    }
    return kExitOk;
  } catch (const std::exception& e) {
    err << "compare: " << e.what() << '\n';
    return kExitFailure;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Command cmd;
  try {
    cmd = parse_args(args);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << e.help();
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  switch (cmd.kind) {
    case CommandKind::help:
      out << cmd.help_text;
      return kExitOk;
    case CommandKind::bench:
      return cmd_bench(cmd.bench, out, err);
    case CommandKind::verify:
      return cmd_verify(cmd.verify, out, err);
    case CommandKind::gen_instance:
      return cmd_gen_instance(cmd.gen, out, err);
    case CommandKind::compare:
      return cmd_compare(cmd.compare, out, err);
  }
  return kExitFailure;
}

}  // namespace pimc::cli
