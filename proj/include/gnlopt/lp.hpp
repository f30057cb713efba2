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

// Bounded-variable revised primal simplex for small dense LPs.
//
//   minimize    c'x
//   subject to  row_i(x) {<=,=,>=} b_i
//               l <= x <= u          (finite)
//
// Every row gets a logical variable r_i = row_i(x) whose bounds encode the
// sense, so the working system is [A | -I] (x, r) = 0. A one-sided row takes
// its implied activity bound as the missing side, which keeps every variable
// boxed: any basis is then dual feasible after bound flips, and a dual simplex
// pass runs first. The primal simplex finishes from wherever it stops.
// Rows whose logical is basic are eliminated by substitution, so the dense LU
// only covers the basic structural columns against the remaining rows.
// Pivots are applied as product-form eta updates on top of that factor; it
// is rebuilt every `refactor_interval` pivots, or earlier when an updated
// pivot drifts from its recomputed value. A factor that turns singular
// restarts the solve from the slack basis. Primal phase 1 minimizes the sum
// of bound violations of the basic variables; pricing is Dantzig's rule with
// a switch to Bland's rule after a run of degenerate pivots.

#ifndef GNLOPT_LP_HPP_
#define GNLOPT_LP_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace gnlopt {

enum class RowSense : std::uint8_t { kLessEqual, kEqual, kGreaterEqual };

struct LpRow {
  std::vector<std::pair<int, double>> terms;
  RowSense sense = RowSense::kLessEqual;
  double rhs = 0.0;
};

struct LpProblem {
  std::vector<double> cost;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<LpRow> rows;
  std::vector<std::string> names;  // optional, used by dump_lp

  int num_cols() const { return static_cast<int>(cost.size()); }
  int num_rows() const { return static_cast<int>(rows.size()); }
  int add_column(double cost, double lower, double upper, std::string name = {});
  void add_row(LpRow row) { rows.push_back(std::move(row)); }
};

enum class LpStatus : std::uint8_t { kOptimal, kInfeasible, kUnbounded };
const char* to_string(LpStatus status);

enum class VarStatus : std::uint8_t { kBasic, kAtLower, kAtUpper };

// Status of every structural column followed by every row logical.
struct LpBasis {
  std::vector<VarStatus> status;
  bool empty() const { return status.empty(); }
};

struct LpOptions {
  double feasibility_tol = 1e-7;
  double optimality_tol = 1e-9;
  double pivot_tol = 1e-9;
  int refactor_interval = 50;
  // 0 selects a limit from the problem size.
  long max_iterations = 0;
};

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<double> x;
  std::vector<double> row_activity;
  double objective = 0.0;
  LpBasis basis;
  long iterations = 0;
};

// Throws NumericalFailure when the iteration limit is hit twice or the basis
// cannot be factorized. A warm basis with fewer row entries than the problem
// is extended with basic logicals for the new rows.
LpSolution lp_solve(const LpProblem& problem, const LpBasis* warm_start = nullptr,
                    const LpOptions& options = {});

// Plain-text dump:
//   BOUNDS
//   <col> <name> <lower> <upper> <cost>
//   ROWS
//   <row> <sense> <rhs> <col>:<coef> ...
std::string dump_lp(const LpProblem& problem);

// Largest bound or row violation of x.
double max_violation(const LpProblem& problem, const std::vector<double>& x);

}  // namespace gnlopt

#endif  // GNLOPT_LP_HPP_
