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

// Exact constrained assortment optimization under GNL and mixed GNL.
//
// All solvers work on the min form: with beta above every revenue, the
// optimal assortment minimizes beta - F(x). Two routes are offered:
//
//  * bisection on delta, where each step asks whether
//      G(delta, x) = sum_n W_n^(sigma_n-1) (beta V0_n + sum_i a_in x_i r'_i V_in)
//                    - delta sum_n W_n^sigma_n
//    can be made nonpositive (a branch-and-cut over x, W, h, k, s);
//  * a single branch-and-cut on the log-transformed model with columns
//    x, W, y, z, t, s where t_n = exp(y_n - z).
//
// Revenue figures in the results are recomputed exactly from the returned
// assortment.

#ifndef GNLOPT_ASSORTMENT_HPP_
#define GNLOPT_ASSORTMENT_HPP_

#include <optional>
#include <string>
#include <vector>

#include "gnlopt/bnb.hpp"
#include "gnlopt/choice_model.hpp"
#include "gnlopt/master.hpp"

namespace gnlopt {

struct AssortConfig {
  BnbConfig bnb = [] {
    BnbConfig c;
    c.rel_gap = 1e-9;
    c.node_cut_rounds = 1;
    c.cut_stall_tol = 1e-4;
    return c;
  }();
  bool use_submodular_cuts = true;
  bool use_logsumexp_cut = false;  // only applies when every sigma < 1
  // Adds the probability-normalization row (the purchase and no-purchase
  // shares sum to one) and the upper McCormick rows it activates.
  bool use_normalization_row = true;
  // Tightens the nest-level bounds and McCormick rows at every node from the
  // products fixed so far.
  bool tighten_nodes = true;
  // Zero-opt-out nests get a weight floor of this fraction of their smallest
  // member weight; must lie in (0, 0.5].
  double floor_fraction = 0.5;
  // Log-transformed single-segment masters also carry the bisection
  // relaxation of "revenue at least the incumbent's", updated at every node.
  bool use_incumbent_cutoff = true;
};

struct BisectionState {
  double delta_lo = 0.0;
  double delta_hi = 0.0;
  double tolerance = 0.0;
  int iterations = 0;
  Assortment best;
  double best_revenue = 0.0;
  std::vector<double> widths;  // bracket width after each iteration
};

struct AssortmentResult {
  Assortment assortment;
  double revenue = 0.0;  // exact revenue of the assortment
  double bound = 0.0;    // upper bound on the optimal revenue
  double gap = 0.0;      // (bound - revenue) / max(1, revenue)
  double beta = 0.0;
  bool feasible = false;
  Termination termination = Termination::kInfeasible;
  SolveResult solve;     // min-form statistics (summed over bisection steps)
  MasterVariables vars;  // columns of the last master solved
  std::optional<BisectionState> bisection;
};

struct SubproblemResult {
  bool nonpositive = false;  // some feasible x has G(delta, x) <= 0
  double value = 0.0;        // min G (exact mode) or best G found
  Assortment x;
  SolveResult solve;
  MasterVariables vars;
};

// Closed-form G(delta, x).
double subproblem_value(const GnlModel& model, double beta, double delta,
                        const Assortment& x);

// exact = false runs a sign test that stops at the first x with G <= 0 and
// discards nodes whose bound is positive. The pool carries cuts between
// calls; its cuts do not depend on delta.
SubproblemResult bisection_subproblem(const GnlModel& model,
                                      const LinearConstraintSet& constraints,
                                      double beta, double delta,
                                      const AssortConfig& config,
                                      CutPool* pool = nullptr, bool exact = true,
                                      const std::vector<Assortment>& hints = {});

AssortmentResult solve_gnl_bisection(const GnlModel& model,
                                     const LinearConstraintSet& constraints,
                                     double beta, double tol,
                                     const AssortConfig& config = {});

AssortmentResult solve_gnl_logconvex(const GnlModel& model,
                                     const LinearConstraintSet& constraints,
                                     double beta, const AssortConfig& config = {});

AssortmentResult solve_mgnl(const MgnlModel& mixed,
                            const LinearConstraintSet& constraints, double beta,
                            const AssortConfig& config = {});

AssortmentResult solve_zero_optout(const GnlModel& model,
                                   const LinearConstraintSet& constraints,
                                   double beta, const AssortConfig& config = {});

// Weight floor of every nest (0 for nests with a positive opt-out weight).
std::vector<double> zero_optout_floors(const GnlModel& model, double fraction);

// Text listing of the mixed bilinear formulation (variables with bounds and
// every row), for inspection only.
std::string print_mgnl_bilinear(const MgnlModel& mixed,
                                const LinearConstraintSet& constraints,
                                double beta);

}  // namespace gnlopt

#endif  // GNLOPT_ASSORTMENT_HPP_
