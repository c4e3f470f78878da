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

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace pimc {

struct SuiteResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

/// Suite names in run order: size, rng, layout, delta, backend, boltzmann, fixtures.
const std::vector<std::string>& verify_suite_names();

/// Runs one named suite. Unknown names throw ValidationError. `fixture_dir`
/// holds gtx260_cuda.csv and gtx260_opencl.csv.
SuiteResult run_verify_suite(std::string_view name, const std::string& fixture_dir);

/// Runs `names` (all suites when empty), printing one PASS/FAIL line each.
/// Returns true iff every suite passed.
bool run_verify(const std::vector<std::string>& names, const std::string& fixture_dir, std::ostream& out);

}  // namespace pimc
