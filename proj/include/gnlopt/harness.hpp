// Copyright 2026 The gnlopt Authors
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

// Run records and the benchmark table behind the command-line tool.
//
// Method tags: bisection, logconvex, zero_optout (GNL instances), mgnl,
// jap_dp, jap_cp, and oracle, which picks the enumeration that fits the
// instance kind and is recorded as oracle_enum, oracle_jap_dp or
// oracle_jap_cp.

#ifndef GNLOPT_HARNESS_HPP_
#define GNLOPT_HARNESS_HPP_

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gnlopt/instances.hpp"

namespace gnlopt {

inline constexpr const char* kCsvHeader =
    "instance,method,objective,bound,gap,nodes,cuts_oa,cuts_sc,cuts_mc,seconds,seed,"
    "termination";

struct RunRecord {
  std::string instance;
  std::string method;
  bool has_objective = false;
  double objective = 0.0;
  double bound = 0.0;
  double gap = 0.0;
  long nodes = 0;
  long cuts_oa = 0;
  long cuts_sc = 0;
  long cuts_mc = 0;
  double seconds = 0.0;
  std::uint64_t seed = 0;
  // Solver termination, "infeasible", or "error: <message>".
  std::string termination;
};

struct RunOptions {
  double bisection_tol = 1e-9;
  double rel_gap = 1e-9;
  double time_limit = std::numeric_limits<double>::infinity();
  long node_limit = 10'000'000;
  double epsilon = 1e-3;  // continuous-price secant accuracy
  int oracle_grid = 41;   // continuous-price oracle points per axis
  int oracle_starts = 8;
  bool timing = true;     // false writes 0 seconds
  // Replaces every record seed (the GNLOPT_SEED variable in the tool).
  std::optional<std::uint64_t> seed_override;
};

// Methods that apply to an instance kind, oracle excluded.
std::vector<std::string> default_methods(InstanceKind kind);
bool is_known_method(const std::string& method);

// Never throws for solver failures; they land in the termination field.
// Throws InvalidArgument for an unknown method tag.
RunRecord run_method(const Instance& instance, const std::string& id,
                     const std::string& method, const RunOptions& options);

// Runs every (instance, method) pair on `jobs` threads; the result is sorted
// by (instance, method). An empty list, or one holding only "oracle", adds
// the default methods of each instance's kind.
std::vector<RunRecord> run_bench(
    const std::vector<std::pair<std::string, Instance>>& instances,
    const std::vector<std::string>& methods, const RunOptions& options, int jobs = 1);

std::string csv_row(const RunRecord& record);
std::string to_csv(const std::vector<RunRecord>& records);

// Exit-code contract of the tool: 0 solved, 2 infeasible, 3 stopped by a
// limit, 4 error.
int exit_code(const RunRecord& record);

// GNLOPT_SEED when set to a valid unsigned integer.
std::optional<std::uint64_t> seed_from_env();

}  // namespace gnlopt

#endif  // GNLOPT_HARNESS_HPP_
