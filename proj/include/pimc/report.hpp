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

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pimc/harness.hpp"

namespace pimc {

enum class ReportFormat { csv, markdown };

/// Throws ValidationError for anything but "csv" or "markdown".
ReportFormat parse_report_format(std::string_view name);

/// One CSV line: a metric of one run configuration.
struct ReportRow {
  std::size_t qubits = 0;
  std::string backend;
  std::string metric;
  double mean_s = 0.0;
  double stdev_s = 0.0;
  double bytes_in = 0.0;
  double bytes_out = 0.0;
  /// Optional trailing columns in header order (layers, points, sweeps,
  /// reps, seed, flips, spin_digest, or whatever a fixture carries).
  std::vector<std::pair<std::string, std::string>> extra;

  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

/// Leading columns every report and fixture carries, in order.
inline constexpr std::string_view kReportColumns[] = {
    "qubits", "backend", "metric", "mean_s", "stdev_s", "bytes_in", "bytes_out",
};

std::vector<ReportRow> report_rows(std::span<const RunStats> stats);

/// CSV: header plus one row per (run, metric) at full precision. Markdown:
/// one table row per run with avg/stdev pairs for the GPU-operations,
/// end-to-end, kernel and transfer times, then the bytes moved in KB.
std::string emit_report(std::span<const RunStats> stats, ReportFormat format);

std::string format_csv(std::span<const ReportRow> rows);

/// Parses a report or fixture. Lines starting with '#' and blank lines are
/// skipped; the first remaining line is the header.
std::vector<ReportRow> parse_report(std::string_view text);

struct ComparisonRow {
  std::size_t qubits = 0;
  std::string metric;
  double base_mean_s = 0.0;
  double other_mean_s = 0.0;
  double ratio = 0.0;
  double relative_difference = 0.0;
};

/// Metrics compared between two reports.
inline constexpr std::string_view kComparedMetrics[] = {"kernel", "transfer", "gpu_ops", "end_to_end"};

/// Pairs rows by (qubits, metric) over kComparedMetrics. Throws
/// ValidationError listing every key present in only one of the inputs.
std::vector<ComparisonRow> compare_reports(std::span<const ReportRow> base, std::span<const ReportRow> other);

struct Span {
  double min = 0.0;
  double max = 0.0;
};

/// Per-metric range of relative differences and of ratios.
struct ComparisonSummary {
  std::map<std::string, Span> relative_difference;
  std::map<std::string, Span> ratio;
};

ComparisonSummary summarize(std::span<const ComparisonRow> rows);

std::string emit_comparison(std::span<const ComparisonRow> rows, ReportFormat format);

/// Shortest decimal that round-trips to `value`.
std::string format_number(double value);

}  // namespace pimc
