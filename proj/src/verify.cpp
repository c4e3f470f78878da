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

#include "pimc/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <ostream>
#include <random>
#include <sstream>

#include "pimc/backend.hpp"
#include "pimc/error.hpp"
#include "pimc/harness.hpp"
#include "pimc/kernel.hpp"
#include "pimc/model.hpp"
#include "pimc/report.hpp"
#include "pimc/rng.hpp"

namespace pimc {

namespace {

struct Failure {
  std::string what;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw Failure{what};
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Canonical sizes: qubits, points, classical spin variables at 128 layers.
constexpr std::uint64_t kTable1[][3] = {
    {8, 27, 27648},     {16, 34, 69632},     {32, 37, 151552},     {48, 57, 350208},
    {72, 71, 654336},   {96, 111, 1363968},  {128, 129, 2113536},
};

std::string suite_size() {
  for (const auto& row : kTable1) {
    require(preset_points(row[0]) == row[1], "preset points for " + std::to_string(row[0]) + " qubits");
    const auto n = variable_count(row[0], kCanonicalLayers, row[1]);
    require(n == row[2], "variable_count(" + std::to_string(row[0]) + ") = " + std::to_string(n));
  }
  return "7 rows exact";
}

std::string suite_rng() {
  for (std::uint32_t seed : {1U, 42U, 5489U}) {
    RngState state = mt_alloc(1, 1);
    mt_init(state, seed);
    std::mt19937 oracle(seed);
    for (int k = 0; k < 10000; ++k) {
      require(mt_next_u32(state, 0, 0) == oracle(), "seed " + std::to_string(seed) + " diverges at draw " + std::to_string(k));
    }
  }
  // Every lane of a strided state is MT19937 seeded with seed + base.
  RngState state = mt_alloc(2, 32);
  mt_init(state, 7);
  for (std::size_t c = 0; c < 2; ++c) {
    for (std::size_t t : {0UL, 5UL, 31UL}) {
      std::mt19937 oracle(7U + static_cast<std::uint32_t>(state.word_index(c, 0, t)));
      for (int k = 0; k < 1500; ++k) {
        require(mt_next_u32(state, c, t) == oracle(), "lane (" + std::to_string(c) + "," + std::to_string(t) + ")");
      }
    }
  }
  return "3 seeds x 10000 draws, strided lanes";
}

std::string suite_layout() {
  constexpr std::size_t nn = RngState::kDegree;
  for (std::size_t chains : {1, 2, 3}) {
    for (std::size_t threads : {1, 2, 32}) {
      const std::uint32_t seed = 12345;
      // Statically shaped mt[chain][word][thread].
      std::vector<std::vector<std::vector<std::uint32_t>>> mt(
          chains, std::vector<std::vector<std::uint32_t>>(nn, std::vector<std::uint32_t>(threads)));
      for (std::size_t c = 0; c < chains; ++c) {
        for (std::size_t t = 0; t < threads; ++t) {
          mt[c][0][t] = seed + static_cast<std::uint32_t>(c * threads * nn + t);
          for (std::uint32_t w = 1; w < nn; ++w) {
            mt[c][w][t] = 1812433253U * (mt[c][w - 1][t] ^ (mt[c][w - 1][t] >> 30)) + w;
          }
        }
      }
      RngState state = mt_alloc(chains, threads);
      mt_init(state, seed);
      const auto& flat = state.words();
      require(flat.size() == chains * nn * threads, "flat size");
      for (std::size_t c = 0; c < chains; ++c) {
        for (std::size_t w = 0; w < nn; ++w) {
          for (std::size_t t = 0; t < threads; ++t) {
            require(flat[c * threads * nn + w * threads + t] == mt[c][w][t],
                    "mismatch at (" + std::to_string(c) + "," + std::to_string(w) + "," + std::to_string(t) + ")");
          }
        }
      }
    }
  }
  return "{1,2,3}x{1,2,32}";
}

double brute_energy(const LayeredSystem& sys) {
  double e = 0.0;
  const std::size_t K = sys.layers();
  for (std::size_t k = 0; k < K; ++k) {
    for (const auto& c : sys.intra_coupling()) e -= c.value * sys.spin(k, c.i) * sys.spin(k, c.j);
    for (std::size_t i = 0; i < sys.sites(); ++i) {
      e -= sys.intra_field()[i] * sys.spin(k, i);
      e -= sys.perp_coupling() * sys.spin(k, i) * sys.spin((k + 1) % K, i);
    }
  }
  return e;
}

LayeredSystem random_small_system(std::mt19937_64& gen) {
  std::uniform_int_distribution<std::size_t> n_dist(1, 4), k_dist(2, 4);
  std::uniform_real_distribution<double> val(-2.0, 2.0), perp(0.0, 2.0);
  const std::size_t n = n_dist(gen), k = k_dist(gen);
  std::vector<Coupling> couplings;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (gen() & 1U) couplings.push_back({i, j, val(gen)});
    }
  }
  std::vector<double> fields(n);
  for (auto& h : fields) h = val(gen);
  std::vector<std::int8_t> spins(n * k);
  for (auto& s : spins) s = (gen() & 1U) ? 1 : -1;
  return LayeredSystem(k, n, std::move(couplings), std::move(fields), perp(gen), std::move(spins));
}

std::string suite_delta() {
  std::mt19937_64 gen(2024);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    LayeredSystem sys = random_small_system(gen);
    const std::size_t layer = gen() % sys.layers();
    const std::size_t site = gen() % sys.sites();
    const double before = brute_energy(sys);
    const double delta = flip_delta(sys, layer, site);
    sys.flip(layer, site);
    worst = std::max(worst, std::abs(delta - (brute_energy(sys) - before)));
  }
  require(worst <= 1e-9, "max |delta - brute force| = " + num(worst));
  return "1000 systems, max error " + num(worst);
}

std::string suite_backend() {
  for (std::uint32_t seed = 1; seed <= 20; ++seed) {
    const auto instance = generate_instance(8, seed, 0.5);
    const auto schedule = build_schedule(4, 3.0, 10.0);
    std::vector<StagedBuffers> outputs;
    std::vector<std::uint64_t> violations;
    for (BackendKind kind : {BackendKind::reference, BackendKind::parallel}) {
      RngState rng = mt_alloc(4, 32);
      mt_init(rng, seed);
      std::vector<LayeredSystem> systems;
      for (const auto& pt : schedule.points) systems.push_back(trotterize(instance, pt, 16, rng, pt.index));
      auto p = plan(4, 32, kind);
      p.concurrent_groups = 2;
      ExecutionTrace trace;
      outputs.push_back(execute(p, transfer_in(systems), 100, rng, &trace));
      violations.push_back(trace.barrier_violations);
    }
    require(outputs[0].arena == outputs[1].arena, "seed " + std::to_string(seed) + ": arenas differ");
    require(violations[1] == 0, "seed " + std::to_string(seed) + ": barrier violations");
  }
  return "20 seeds bitwise identical";
}

std::string suite_boltzmann() {
  // N = 2, K = 4: 256 states, enumerated exactly.
  const std::size_t n = 2, k = 4, count = n * k;
  LayeredSystem sys(k, n, {{0, 1, 0.4}}, {0.2, -0.1}, 0.5, std::vector<std::int8_t>(count, 1));
  auto state_of = [&](const LayeredSystem& s) {
    std::size_t idx = 0;
    for (std::size_t b = 0; b < count; ++b) {
      if (s.spins()[b] > 0) idx |= std::size_t{1} << b;
    }
    return idx;
  };

  std::vector<double> exact(std::size_t{1} << count);
  double z = 0.0, mean_exact = 0.0;
  {
    LayeredSystem probe = sys;
    std::vector<std::int8_t> spins(count);
    for (std::size_t idx = 0; idx < exact.size(); ++idx) {
      for (std::size_t b = 0; b < count; ++b) spins[b] = (idx >> b) & 1U ? 1 : -1;
      probe.set_spins(spins);
      const double e = brute_energy(probe);
      exact[idx] = std::exp(-e);
      z += exact[idx];
      mean_exact += e * exact[idx];
    }
  }
  for (auto& p : exact) p /= z;
  mean_exact /= z;

  const auto schedule = color_sites(sys, 32);
  RngState rng = mt_alloc(1, 32);
  mt_init(rng, 99);
  constexpr std::uint64_t kSweeps = 1000000, kBatches = 1000, kBatch = kSweeps / kBatches;
  std::vector<std::uint64_t> hits(exact.size(), 0);
  std::vector<double> batch_means;
  double energy = total_energy(sys), batch_sum = 0.0;
  for (std::uint64_t s = 0; s < kSweeps; ++s) {
    energy = sweep(sys, schedule, rng, 0, energy).energy;
    ++hits[state_of(sys)];
    batch_sum += energy;
    if ((s + 1) % kBatch == 0) {
      batch_means.push_back(batch_sum / kBatch);
      batch_sum = 0.0;
    }
  }
  double tv = 0.0;
  for (std::size_t idx = 0; idx < exact.size(); ++idx) {
    tv += std::abs(static_cast<double>(hits[idx]) / kSweeps - exact[idx]);
  }
  tv *= 0.5;
  const auto bm = mean_stdev(batch_means);
  const double se = bm.stdev / std::sqrt(static_cast<double>(kBatches));
  require(tv <= 0.01, "total variation " + num(tv) + " > 0.01");
  require(std::abs(bm.mean - mean_exact) <= 3.0 * se,
          "mean energy " + num(bm.mean) + " vs exact " + num(mean_exact) + " (3 SE = " + num(3 * se) + ")");
  return "TV " + num(tv) + ", <E> " + num(bm.mean) + " vs " + num(mean_exact);
}

std::vector<ReportRow> load_fixture(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), "cannot open fixture " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_report(buf.str());
  } catch (const Error& e) {
    throw Failure{"fixture " + path + ": " + e.what()};
  }
}

std::string suite_fixtures(const std::string& dir) {
  const auto cuda = load_fixture(dir + "/gtx260_cuda.csv");
  const auto opencl = load_fixture(dir + "/gtx260_opencl.csv");
  std::vector<ComparisonRow> rows;
  try {
    rows = compare_reports(cuda, opencl);
  } catch (const Error& e) {
    throw Failure{std::string("fixture comparison: ") + e.what()};
  }
  require(rows.size() == 28, "expected 7 sizes x 4 metrics, got " + std::to_string(rows.size()));
  const auto summary = summarize(rows);

  auto near = [](double v, double want, double tol) { return std::abs(v - want) <= tol; };
  const Span kernel = summary.relative_difference.at("kernel");
  require(near(kernel.min, 0.127, 0.005) && near(kernel.max, 0.626, 0.005),
          "kernel slowdown span [" + num(kernel.min) + ", " + num(kernel.max) + "]");
  const Span e2e = summary.relative_difference.at("end_to_end");
  require(near(e2e.min, 0.157, 0.005) && near(e2e.max, 0.674, 0.005),
          "end-to-end slowdown span [" + num(e2e.min) + ", " + num(e2e.max) + "]");
  const Span transfer = summary.ratio.at("transfer");
  require(transfer.min >= 1.22 - 0.01 && transfer.max <= 1.56 + 0.01,
          "transfer ratios [" + num(transfer.min) + ", " + num(transfer.max) + "]");
  require(transfer.max / transfer.min <= 1.3, "transfer ratio spread " + num(transfer.max / transfer.min));

  // gpu_ops is kernel + transfer up to the fixtures' rounding (worst row: 32 qubits, 0.45%).
  for (const auto* file : {&cuda, &opencl}) {
    std::map<std::pair<std::size_t, std::string>, double> by_key;
    for (const auto& r : *file) by_key[{r.qubits, r.metric}] = r.mean_s;
    for (const auto& preset : kSizePresets) {
      const double k = by_key.at({preset.qubits, "kernel"});
      const double t = by_key.at({preset.qubits, "transfer"});
      const double g = by_key.at({preset.qubits, "gpu_ops"});
      require(std::abs(g - (k + t)) <= 0.01 * g, "gpu_ops != kernel + transfer at " + std::to_string(preset.qubits));
    }
  }
  return "kernel [" + num(kernel.min) + ", " + num(kernel.max) + "], end-to-end [" + num(e2e.min) + ", " +
         num(e2e.max) + "], transfer ratio [" + num(transfer.min) + ", " + num(transfer.max) + "]";
}

}  // namespace

const std::vector<std::string>& verify_suite_names() {
  static const std::vector<std::string> names = {"size", "rng", "layout", "delta", "backend", "boltzmann", "fixtures"};
  return names;
}

SuiteResult run_verify_suite(std::string_view name, const std::string& fixture_dir) {
  std::function<std::string()> body;
  if (name == "size") body = suite_size;
  else if (name == "rng") body = suite_rng;
  else if (name == "layout") body = suite_layout;
  else if (name == "delta") body = suite_delta;
  else if (name == "backend") body = suite_backend;
  else if (name == "boltzmann") body = suite_boltzmann;
  else if (name == "fixtures") body = [&] { return suite_fixtures(fixture_dir); };
  else throw ValidationError("unknown verify suite '" + std::string(name) + "'");

  SuiteResult result;
  result.name = std::string(name);
  const auto start = std::chrono::steady_clock::now();
  try {
    result.detail = body();
    result.passed = true;
  } catch (const Failure& f) {
    result.detail = f.what;
  } catch (const std::exception& e) {
    result.detail = std::string("error: ") + e.what();
  }
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

bool run_verify(const std::vector<std::string>& names, const std::string& fixture_dir, std::ostream& out) {
  const auto& selected = names.empty() ? verify_suite_names() : names;
  for (const auto& n : selected) {
    if (std::find(verify_suite_names().begin(), verify_suite_names().end(), n) == verify_suite_names().end()) {
      throw ValidationError("unknown verify suite '" + n + "'");
    }
  }
  bool all = true;
  for (const auto& n : selected) {
    const auto r = run_verify_suite(n, fixture_dir);
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.2fs", r.seconds);
    out << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << timing << "): " << r.detail << '\n';
    all = all && r.passed;
  }
  return all;
}

}  // namespace pimc
