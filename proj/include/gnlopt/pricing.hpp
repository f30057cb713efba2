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

// Joint assortment and pricing.
//
// Prices act through the utility v_i(y) = kappa_i - eta_i y, which gives
// product i the weight exp(v_i(y) / sigma_n) in nest n and revenue y when
// sold. Pricing problems take a model "shell": only v0, alpha and sigma of
// the GnlModel are read; v and r are ignored.
//
// Discrete prices expand every (product, price) pair into a virtual item
// with a one-price row per product, which turns the problem into a plain
// constrained assortment problem.
//
// Continuous prices are handled through adaptive secant approximations of
// exp over each w = (kappa - eta y) / sigma domain. Their breakpoints become
// a price ladder, the ladder problem is solved exactly, and the prices of
// the resulting assortment are polished on the true revenue.

#ifndef GNLOPT_PRICING_HPP_
#define GNLOPT_PRICING_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gnlopt/assortment.hpp"
#include "gnlopt/choice_model.hpp"

namespace gnlopt {

struct PriceLadder {
  std::vector<std::vector<double>> prices;  // strictly increasing per product
  Eigen::VectorXd eta;
  Eigen::VectorXd kappa;

  int num_products() const { return static_cast<int>(prices.size()); }
  int num_items() const;
};

struct PriceBounds {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
  Eigen::VectorXd eta;
  Eigen::VectorXd kappa;

  int num_products() const { return static_cast<int>(lower.size()); }
};

// Throw InvalidArgument on the first violated invariant.
void validate_ladder(const PriceLadder& ladder);
void validate_bounds(const PriceBounds& bounds);
// Shell checks: v0, alpha and sigma of a pricing model over m products.
void validate_shell(const GnlModel& shell, int m);

// exp((kappa - eta * price) / sigma).
double price_weight(double kappa, double eta, double price, double sigma);

// The shell with v and r filled in for the given prices.
GnlModel priced_model(const GnlModel& shell, const PriceBounds& bounds,
                      std::span<const double> prices);

// Revenue of offering x at prices y.
double cp_revenue(const GnlModel& shell, const PriceBounds& bounds,
                  const Assortment& x, std::span<const double> y);

// ---------------------------------------------------------------------------
// Discrete prices.

struct ExpandedModel {
  GnlModel model;                 // one product per (product, level)
  LinearConstraintSet one_price;  // sum over levels <= 1, one row per product
  std::vector<std::pair<int, int>> items;  // (product, level) per item
  std::vector<int> first_item;             // first item of each product
};

ExpandedModel expand_discrete(const GnlModel& shell, const PriceLadder& ladder);

struct ExpandedMixed {
  MgnlModel mixed;
  LinearConstraintSet one_price;
  std::vector<std::pair<int, int>> items;
  std::vector<int> first_item;
};

// Every segment shares the ladder.
ExpandedMixed expand_discrete(const MgnlModel& shell, const PriceLadder& ladder);

// Maps extra rows onto the item columns and appends the one-price rows.
// The extra rows may have m columns (one per product, applied to every
// level), one column per item, or m + items columns (both, product part
// first). An empty set adds nothing.
LinearConstraintSet lift_constraints(const LinearConstraintSet& extra, int m,
                                     const std::vector<std::pair<int, int>>& items,
                                     const LinearConstraintSet& one_price);

// Revenue of a price-or-absent pattern (level -1 = not offered).
double jap_revenue(const GnlModel& shell, const PriceLadder& ladder,
                   std::span<const int> level);
double jap_revenue(const MgnlModel& shell, const PriceLadder& ladder,
                   std::span<const int> level);

enum class JapMethod { kLogConvex, kBisection };

struct JapDpConfig {
  AssortConfig assort;
  JapMethod method = JapMethod::kLogConvex;
  double bisection_tol = 1e-9;
};

struct JapDpResult {
  AssortmentResult solve;     // on the expanded model
  std::vector<int> level;     // chosen level per product, -1 when absent
  std::vector<double> price;  // chosen price, 0 when absent
  Assortment offered;         // product-level assortment
  double revenue = 0.0;
  double bound = 0.0;
};

JapDpResult solve_jap_dp(const GnlModel& shell, const PriceLadder& ladder,
                         const LinearConstraintSet& extra,
                         const JapDpConfig& config = {});
JapDpResult solve_jap_dp(const MgnlModel& shell, const PriceLadder& ladder,
                         const LinearConstraintSet& extra,
                         const JapDpConfig& config = {});

// ---------------------------------------------------------------------------
// Secant approximation of exp.

struct Breakpoints {
  std::vector<double> q;       // q_1 < ... < q_{H+1}
  std::vector<double> slopes;  // one per segment
  double epsilon = 0.0;
  double tau = 0.0;

  int segments() const { return static_cast<int>(slopes.size()); }
  double lo() const { return q.front(); }
  double hi() const { return q.back(); }
};

// Largest gap between the secant of exp over [q, q_next] and exp.
double pwla_theta(double q, double q_next);

// Furthest point (within tau) whose secant gap from q stays <= epsilon, or
// w_hi when the whole remaining interval fits.
double pwla_next_breakpoint(double q, double w_hi, double epsilon, double tau);

// Greedy breakpoints over [w_lo, w_hi]; tau <= 0 selects 1e-9 (w_hi - w_lo).
Breakpoints pwla_build(double w_lo, double w_hi, double epsilon, double tau = 0.0);

// Secant interpolant of exp at w; exact at breakpoints.
double pwla_eval(const Breakpoints& bp, double w);

// Closed-form segment-count bound for the w-domain of one (product, nest).
long pwla_bound(double lower, double upper, double eta, double kappa,
                double sigma, double epsilon);

// w range of product i in a nest with the given sigma.
std::pair<double, double> w_domain(const PriceBounds& bounds, int i, double sigma);

// Breakpoints for every (product, nest) with positive membership; empty
// for the other pairs.
struct PwlaSurrogate {
  std::vector<std::vector<Breakpoints>> bp;  // [product][nest]
  double epsilon = 0.0;
};

PwlaSurrogate build_surrogate(const GnlModel& shell, const PriceBounds& bounds,
                              double epsilon);

// Revenue with every exp(w_in) replaced by its secant interpolant.
double surrogate_revenue(const GnlModel& shell, const PriceBounds& bounds,
                         const PwlaSurrogate& surrogate, const Assortment& x,
                         std::span<const double> y);

// |F(x, y) - surrogate F(x, y)| with breakpoints built at epsilon.
double pwla_objective_gap(const GnlModel& shell, const PriceBounds& bounds,
                          const Assortment& x, std::span<const double> y,
                          double epsilon);

// ---------------------------------------------------------------------------
// Continuous prices.

struct CpConfig {
  JapDpConfig dp;
  int starts = 10;         // random restarts of the price polish
  int max_rounds = 3;      // ladder refinement rounds after the first solve
  double improve_tol = 1e-6;
  // Per-product cap on the initial ladder. Larger secant ladders are thinned.
  int max_ladder_levels = 256;
  int sweeps = 50;         // coordinate sweeps per restart
  int golden_steps = 80;   // golden-section steps per coordinate
  std::uint64_t seed = 0x9e3779b97f4a7c15ULL;
};

struct CpSolveReport {
  Assortment x;
  std::vector<double> y;         // prices (lower bound for absent products)
  double revenue = 0.0;          // true revenue at (x, y)
  double surrogate = 0.0;        // secant-approximated revenue at (x, y)
  // Dual bound of the first ladder solve. Informational only: it bounds the
  // ladder problem, not the continuous one.
  double ladder_bound = 0.0;
  double ladder_revenue = 0.0;   // revenue of the first ladder solve
  // Set when a ladder MILP failed numerically and a level sweep replaced it.
  // The ladder bound is NaN in that case.
  bool ladder_fallback = false;
  int rounds = 0;
  int polish_starts = 0;
  long polish_evaluations = 0;
  std::vector<int> ladder_sizes;  // final ladder size per product
  long nodes = 0;
  double seconds = 0.0;
};

// Constraints are rows over x (m columns) or over (x, y) (2m columns, x
// part first). In the (x, y) form the price of an absent product does not
// count: a row reads sum_i (a_x[i] + a_y[i] y_i) x_i <= b.
CpSolveReport solve_jap_cp(const GnlModel& shell, const PriceBounds& bounds,
                           const LinearConstraintSet& constraints,
                           double epsilon, const CpConfig& config = {});

// Feasibility of (x, y) under the row convention above.
bool cp_feasible(const LinearConstraintSet& constraints, const Assortment& x,
                 std::span<const double> y, double tol = 1e-9);

// Text listing of the bilinear continuous-price formulation with the secant
// price curves, for inspection only.
std::string print_cp_bilinear(const GnlModel& shell, const PriceBounds& bounds,
                              const LinearConstraintSet& constraints,
                              double epsilon);

}  // namespace gnlopt

#endif  // GNLOPT_PRICING_HPP_
