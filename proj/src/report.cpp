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

#include "pimc/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <tuple>

#include "pimc/error.hpp"

namespace pimc {

namespace {

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = line.find(',', pos);
    cells.push_back(line.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  for (auto& c : cells) {
    while (!c.empty() && (c.front() == ' ' || c.front() == '\t')) c.remove_prefix(1);
    while (!c.empty() && (c.back() == ' ' || c.back() == '\t' || c.back() == '\r')) c.remove_suffix(1);
  }
  return cells;
}

double parse_number(std::string_view cell, std::size_t line, std::string_view column) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(value)) {
    throw ParseError(line, "column '" + std::string(column) + "': expected a number, got '" + std::string(cell) + "'");
  }
  return value;
}

std::size_t parse_count(std::string_view cell, std::size_t line, std::string_view column) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size()) {
    throw ParseError(line, "column '" + std::string(column) + "': expected an integer, got '" + std::string(cell) + "'");
  }
  return value;
}

std::string fixed(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, value);
  return buf;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

}  // namespace

std::string format_number(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

ReportFormat parse_report_format(std::string_view name) {
  if (name == "csv") return ReportFormat::csv;
  if (name == "markdown" || name == "md") return ReportFormat::markdown;
  throw ValidationError("unknown format '" + std::string(name) + "' (expected csv or markdown)");
}

std::vector<ReportRow> report_rows(std::span<const RunStats> stats) {
  std::vector<ReportRow> rows;
  rows.reserve(stats.size() * kMetricCount);
  for (const auto& st : stats) {
    for (Metric m : kAllMetrics) {
      ReportRow row;
      row.qubits = st.qubits;
      row.backend = std::string(to_string(st.backend));
      row.metric = std::string(to_string(m));
      row.mean_s = st.at(m).mean;
      row.stdev_s = st.at(m).stdev;
      row.bytes_in = static_cast<double>(st.bytes_in);
      row.bytes_out = static_cast<double>(st.bytes_out);
      row.extra = {
          {"layers", std::to_string(st.layers)}, {"points", std::to_string(st.points)},
          {"sweeps", std::to_string(st.sweeps)}, {"reps", std::to_string(st.reps)},
          {"seed", std::to_string(st.seed)},     {"flips", std::to_string(st.flips)},
          {"spin_digest", hex64(st.spin_digest)},
      };
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::string format_csv(std::span<const ReportRow> rows) {
  std::ostringstream out;
  for (std::size_t c = 0; c < std::size(kReportColumns); ++c) out << (c ? "," : "") << kReportColumns[c];
  if (!rows.empty()) {
    for (const auto& [name, value] : rows.front().extra) out << ',' << name;
  }
  out << '\n';
  for (const auto& r : rows) {
    out << r.qubits << ',' << r.backend << ',' << r.metric << ',' << format_number(r.mean_s) << ','
        << format_number(r.stdev_s) << ',' << format_number(r.bytes_in) << ',' << format_number(r.bytes_out);
    for (const auto& [name, value] : r.extra) out << ',' << value;
    out << '\n';
  }
  return out.str();
}

std::string emit_report(std::span<const RunStats> stats, ReportFormat format) {
  if (stats.empty()) throw DomainError("emit_report: nothing to report");
  if (format == ReportFormat::csv) {
    const auto rows = report_rows(stats);
    return format_csv(rows);
  }

  std::ostringstream out;
  out << "| Qubits | Backend | GPU ops avg | GPU ops stdev | End-to-end avg | End-to-end stdev | "
         "Kernel avg | Kernel stdev | Transfer avg | Transfer stdev | Data transferred (KB) |\n";
  out << "|---:|:---|---:|---:|---:|---:|---:|---:|---:|---:|---:|\n";
  for (const auto& st : stats) {
    out << "| " << st.qubits << " | " << to_string(st.backend);
    for (Metric m : {Metric::gpu_ops, Metric::end_to_end, Metric::kernel, Metric::transfer}) {
      out << " | " << fixed(st.at(m).mean, 3) << " | " << fixed(st.at(m).stdev, 3);
    }
    out << " | " << fixed(static_cast<double>(st.bytes_in + st.bytes_out) / 1024.0, 2) << " |\n";
  }
  return out.str();
}

std::vector<ReportRow> parse_report(std::string_view text) {
  std::vector<ReportRow> rows;
  std::vector<std::string> header;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos || line.front() == '#') continue;

    const auto cells = split_csv(line);
    if (header.empty()) {
      if (cells.size() < std::size(kReportColumns)) {
        throw ParseError(line_no, "header needs at least " + std::to_string(std::size(kReportColumns)) + " columns");
      }
      for (std::size_t c = 0; c < std::size(kReportColumns); ++c) {
        if (cells[c] != kReportColumns[c]) {
          throw ParseError(line_no, "header column " + std::to_string(c + 1) + " must be '" +
                                        std::string(kReportColumns[c]) + "', got '" + std::string(cells[c]) + "'");
        }
      }
      for (auto c : cells) header.emplace_back(c);
      continue;
    }
    if (cells.size() != header.size()) {
      throw ParseError(line_no, "expected " + std::to_string(header.size()) + " cells, got " + std::to_string(cells.size()));
    }
    ReportRow row;
    row.qubits = parse_count(cells[0], line_no, header[0]);
    row.backend = std::string(cells[1]);
    row.metric = std::string(cells[2]);
    if (row.backend.empty() || row.metric.empty()) throw ParseError(line_no, "empty backend or metric");
    row.mean_s = parse_number(cells[3], line_no, header[3]);
    row.stdev_s = parse_number(cells[4], line_no, header[4]);
    row.bytes_in = parse_number(cells[5], line_no, header[5]);
    row.bytes_out = parse_number(cells[6], line_no, header[6]);
    if (row.stdev_s < 0.0) throw ParseError(line_no, "negative stdev");
    for (std::size_t c = std::size(kReportColumns); c < cells.size(); ++c) {
      row.extra.emplace_back(header[c], std::string(cells[c]));
    }
    rows.push_back(std::move(row));
  }
  if (header.empty()) throw ParseError(line_no, "missing header");
  return rows;
}

std::vector<ComparisonRow> compare_reports(std::span<const ReportRow> base, std::span<const ReportRow> other) {
  using Key = std::pair<std::size_t, std::string>;
  auto index = [](std::span<const ReportRow> rows, std::string_view which) {
    std::map<Key, const ReportRow*> out;
    for (const auto& r : rows) {
      if (std::find(std::begin(kComparedMetrics), std::end(kComparedMetrics), r.metric) == std::end(kComparedMetrics)) {
        continue;
      }
      if (!out.emplace(Key{r.qubits, r.metric}, &r).second) {
        throw ValidationError(std::string(which) + " report has more than one row for qubits=" +
                              std::to_string(r.qubits) + " metric=" + r.metric);
      }
    }
    return out;
  };
  const auto a = index(base, "first");
  const auto b = index(other, "second");

  std::string missing;
  for (const auto& [key, row] : a) {
    if (!b.count(key)) missing += " (qubits=" + std::to_string(key.first) + ", " + key.second + ": missing in second)";
  }
  for (const auto& [key, row] : b) {
    if (!a.count(key)) missing += " (qubits=" + std::to_string(key.first) + ", " + key.second + ": missing in first)";
  }
  if (!missing.empty()) throw ValidationError("row keys differ:" + missing);
  if (a.empty()) throw ValidationError("no comparable rows");

  std::vector<ComparisonRow> out;
  for (const auto& [key, row] : a) {
    const ReportRow& o = *b.at(key);
    out.push_back({key.first, key.second, row->mean_s, o.mean_s, ratio(o.mean_s, row->mean_s),
                   relative_difference(row->mean_s, o.mean_s)});
  }
  // Qubits ascending, metrics in kComparedMetrics order.
  auto rank = [](const std::string& m) {
    return std::find(std::begin(kComparedMetrics), std::end(kComparedMetrics), m) - std::begin(kComparedMetrics);
  };
  std::sort(out.begin(), out.end(), [&](const ComparisonRow& x, const ComparisonRow& y) {
    return std::tuple(x.qubits, rank(x.metric)) < std::tuple(y.qubits, rank(y.metric));
  });
  return out;
}

ComparisonSummary summarize(std::span<const ComparisonRow> rows) {
  ComparisonSummary summary;
  for (const auto& r : rows) {
    auto widen = [](std::map<std::string, Span>& spans, const std::string& key, double v) {
      auto [it, inserted] = spans.try_emplace(key, Span{v, v});
      if (!inserted) {
        it->second.min = std::min(it->second.min, v);
        it->second.max = std::max(it->second.max, v);
      }
    };
    widen(summary.relative_difference, r.metric, r.relative_difference);
    widen(summary.ratio, r.metric, r.ratio);
  }
  return summary;
}

std::string emit_comparison(std::span<const ComparisonRow> rows, ReportFormat format) {
  std::ostringstream out;
  if (format == ReportFormat::csv) {
    out << "qubits,metric,base_mean_s,other_mean_s,ratio,relative_difference\n";
    for (const auto& r : rows) {
      out << r.qubits << ',' << r.metric << ',' << format_number(r.base_mean_s) << ','
          << format_number(r.other_mean_s) << ',' << format_number(r.ratio) << ','
          << format_number(r.relative_difference) << '\n';
    }
    return out.str();
  }
  out << "| Qubits | Metric | Base (s) | Other (s) | Ratio | Relative difference |\n";
  out << "|---:|:---|---:|---:|---:|---:|\n";
  for (const auto& r : rows) {
    out << "| " << r.qubits << " | " << r.metric << " | " << fixed(r.base_mean_s, 3) << " | "
        << fixed(r.other_mean_s, 3) << " | " << fixed(r.ratio, 3) << " | " << fixed(r.relative_difference, 4)
        << " |\n";
  }
  return out.str();
}

}  // namespace pimc
