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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "gnlopt/errors.hpp"
#include "gnlopt/instances.hpp"
#include "gnlopt/oracle.hpp"
#include "gnlopt/pricing.hpp"
#include "test_util.hpp"

namespace gnlopt {
namespace {

using testing::rel_diff;

// One product in two nests with very different price sensitivity.
struct TwoNestProduct {
  GnlModel shell;
  PriceBounds bounds;
};

TwoNestProduct two_nest_product() {
  TwoNestProduct p;
  p.shell.v0 = Eigen::Vector2d(1.0, 1.0);
  p.shell.alpha = Eigen::MatrixXd(1, 2);
  p.shell.alpha << 0.1, 5.0;
  p.shell.v = Eigen::MatrixXd::Zero(1, 2);
  p.shell.sigma = Eigen::Vector2d(0.1, 0.9);
  p.shell.r = Eigen::VectorXd::Zero(1);
  p.bounds.lower = Eigen::VectorXd::Constant(1, 0.01);
  p.bounds.upper = Eigen::VectorXd::Constant(1, 10.0);
  p.bounds.eta = Eigen::VectorXd::Ones(1);
  p.bounds.kappa = Eigen::VectorXd::Constant(1, 2.0);
  return p;
}

// F(y) written out for the single product.
double two_nest_revenue(double y) {
  const double a[2] = {0.1, 5.0}, s[2] = {0.1, 0.9};
  double num = 0.0, den = 0.0;
  for (int n = 0; n < 2; ++n) {
    const double e = std::exp((2.0 - y) / s[n]);
    const double w = 1.0 + a[n] * e;
    num += a[n] * e * std::pow(w, s[n] - 1.0);
    den += std::pow(w, s[n]);
  }
  return y * num / den;
}

TEST(Secant, BoundFormula) {
  EXPECT_EQ(pwla_bound(0.0, 1.0, 1.0, 0.0, 1.0, 0.01), 4);
  EXPECT_EQ(pwla_bound(1.0, 1.0, 1.0, 0.0, 1.0, 0.01), 0);
  EXPECT_THROW(pwla_bound(1.0, 0.0, 1.0, 0.0, 1.0, 0.01), InvalidArgument);
}

TEST(Secant, SmallDomainExample) {
  const Breakpoints bp = pwla_build(-1.0, 0.0, 0.01);
  EXPECT_LE(bp.segments(), 4);
  for (double q : bp.q) EXPECT_DOUBLE_EQ(pwla_eval(bp, q), std::exp(q));
  const Breakpoints single = pwla_build(0.5, 0.5, 0.01);
  EXPECT_EQ(single.segments(), 0);
  EXPECT_DOUBLE_EQ(pwla_eval(single, 0.5), std::exp(0.5));
}

TEST(Secant, CertificateOnDenseGrid) {
  std::mt19937_64 g(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 30; ++t) {
    const double lo = -4.0 * u(g), hi = lo + 0.1 + 4.0 * u(g);
    const double eps = std::pow(10.0, -1.0 - 3.0 * u(g));
    const Breakpoints bp = pwla_build(lo, hi, eps);
    double worst = 0.0;
    for (int k = 0; k <= 10000; ++k) {
      const double w = lo + (hi - lo) * k / 10000.0;
      const double d = pwla_eval(bp, w) - std::exp(w);
      EXPECT_GE(d, -1e-12);
      worst = std::max(worst, d);
    }
    EXPECT_LE(worst, eps * (1 + 1e-9));
  }
}

TEST(Secant, MidpointIsMeanOfEnds) {
  const Breakpoints bp = pwla_build(-2.0, 1.0, 1e-3);
  const double a = bp.q[1], b = bp.q[2];
  EXPECT_NEAR(pwla_eval(bp, 0.5 * (a + b)), 0.5 * (std::exp(a) + std::exp(b)), 1e-14);
  EXPECT_THROW(pwla_eval(bp, 5.0), InvalidArgument);
}

TEST(Discrete, ExpansionPreservesRevenue) {
  GenSpec spec;
  spec.kind = InstanceKind::kJapDp;
  spec.m = 4;
  spec.levels = 3;
  spec.seed = 2;
  const Instance in = generate(spec);
  const ExpandedModel ex = expand_discrete(in.model, *in.ladder);
  EXPECT_EQ(ex.model.num_products(), in.ladder->num_items());
  const std::vector<int> level{0, -1, 2, 1};
  Assortment x(ex.model.num_products());
  for (int i = 0; i < 4; ++i)
    if (level[i] >= 0) x.set(ex.first_item[i] + level[i], true);
  EXPECT_NEAR(expected_revenue(ex.model, x), jap_revenue(in.model, *in.ladder, level), 1e-12);
}

TEST(Discrete, MatchesPatternEnumeration) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    GenSpec spec;
    spec.kind = InstanceKind::kJapDp;
    spec.m = 4;
    spec.levels = 2 + static_cast<int>(seed % 2);
    spec.seed = seed;
    const Instance in = generate(spec);
    const JapDpResult r = solve_jap_dp(in.model, *in.ladder, in.constraints);
    const OracleResult o = enumerate_jap_dp(in.model, *in.ladder, in.constraints);
    EXPECT_LE(rel_diff(r.revenue, o.objective), 1e-6);
    EXPECT_NEAR(r.revenue, jap_revenue(in.model, *in.ladder, r.level), 1e-12);
    JapDpConfig bis;
    bis.method = JapMethod::kBisection;
    EXPECT_LE(rel_diff(solve_jap_dp(in.model, *in.ladder, in.constraints, bis).revenue,
                       o.objective),
              1e-6);
  }
}

TEST(Continuous, SingleNestMatchesGrid) {
  GnlModel shell;
  shell.v0 = Eigen::VectorXd::Ones(1);
  shell.alpha = Eigen::MatrixXd::Ones(1, 1);
  shell.v = Eigen::MatrixXd::Zero(1, 1);
  shell.sigma = Eigen::VectorXd::Constant(1, 0.6);
  shell.r = Eigen::VectorXd::Zero(1);
  PriceBounds b;
  b.lower = Eigen::VectorXd::Constant(1, 0.1);
  b.upper = Eigen::VectorXd::Constant(1, 5.0);
  b.eta = Eigen::VectorXd::Constant(1, 0.8);
  b.kappa = Eigen::VectorXd::Constant(1, 1.0);
  double best = 0.0;
  const auto all = Assortment::FromIndices(1, {0});
  for (int k = 0; k <= 100000; ++k) {
    const double y[1] = {0.1 + 4.9 * k / 100000.0};
    best = std::max(best, cp_revenue(shell, b, all, y));
  }
  const CpSolveReport r = solve_jap_cp(shell, b, LinearConstraintSet::None(1), 1e-3);
  EXPECT_NEAR(r.revenue, best, 1e-4);
}

TEST(Continuous, TwoPeakProductFindsGlobalPeak) {
  const auto p = two_nest_product();
  double best = 0.0;
  for (int k = 0; k < 10000; ++k) best = std::max(best, two_nest_revenue(0.01 + 9.99 * k / 9999.0));
  const auto all = Assortment::FromIndices(1, {0});
  const double y[1] = {1.7};
  EXPECT_NEAR(cp_revenue(p.shell, p.bounds, all, y), two_nest_revenue(1.7), 1e-12);
  const CpSolveReport r = solve_jap_cp(p.shell, p.bounds, LinearConstraintSet::None(1), 1e-3);
  EXPECT_GE(r.revenue, best - 1e-3);
}

TEST(Continuous, GapShrinksWithEpsilon) {
  GenSpec spec;
  spec.kind = InstanceKind::kJapCp;
  spec.m = 4;
  spec.seed = 3;
  const Instance in = generate(spec);
  const auto x = Assortment::FromIndices(4, {0, 1, 3});
  std::mt19937_64 g(0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double g1 = 0.0, g2 = 0.0;
  for (int s = 0; s < 50; ++s) {
    std::vector<double> y(4);
    for (int i = 0; i < 4; ++i)
      y[i] = in.bounds->lower[i] + u(g) * (in.bounds->upper[i] - in.bounds->lower[i]);
    g1 = std::max(g1, pwla_objective_gap(in.model, *in.bounds, x, y, 1e-3));
    g2 = std::max(g2, pwla_objective_gap(in.model, *in.bounds, x, y, 1e-4));
  }
  EXPECT_GT(g1, 0.0);
  EXPECT_LT(g2, g1);
}

TEST(Continuous, PolishNeverLosesToLadder) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    GenSpec spec;
    spec.kind = InstanceKind::kJapCp;
    spec.m = 4;
    spec.seed = seed;
    const Instance in = generate(spec);
    const CpSolveReport r = solve_jap_cp(in.model, *in.bounds, in.constraints, 1e-3);
    EXPECT_GE(r.revenue, r.ladder_revenue - 1e-12);
    EXPECT_TRUE(cp_feasible(in.constraints, r.x, r.y));
  }
}

// Wide price bands put the optimal prices inside the band.
TEST(Continuous, WideBandMatchesOracle) {
  for (std::uint64_t seed = 5000; seed < 5005; ++seed) {
    GenSpec spec;
    spec.kind = InstanceKind::kJapCp;
    spec.m = 3;
    spec.seed = seed;
    const Instance in = generate(spec);
    PriceBounds b = *in.bounds;
    b.lower.setConstant(0.1);
    b.upper.setConstant(4.0);
    const CpSolveReport r = solve_jap_cp(in.model, b, in.constraints, 1e-3);
    const OracleResult o = enumerate_jap_cp(in.model, b, in.constraints, 41, 8);
    EXPECT_LE(std::abs(r.revenue - o.objective), 0.01 * o.objective);
    bool interior = false;
    for (int i = 0; i < 3; ++i) interior |= r.x[i] && r.y[i] < 3.999;
    EXPECT_TRUE(interior);
  }
}

TEST(Continuous, PriceRowsOverBothBlocks) {
  GenSpec spec;
  spec.kind = InstanceKind::kJapCp;
  spec.m = 3;
  spec.seed = 1;
  const Instance in = generate(spec);
  // Total price of the offered products at most 1.2.
  LinearConstraintSet c;
  c.a = Eigen::MatrixXd::Zero(1, 6);
  c.a.block(0, 3, 1, 3).setOnes();
  c.b = Eigen::VectorXd::Constant(1, 1.2);
  const CpSolveReport r = solve_jap_cp(in.model, *in.bounds, c, 1e-3);
  EXPECT_TRUE(cp_feasible(c, r.x, r.y, 1e-7));
  LinearConstraintSet bad;
  bad.a = Eigen::MatrixXd::Ones(1, 5);
  bad.b = Eigen::VectorXd::Ones(1);
  EXPECT_THROW(solve_jap_cp(in.model, *in.bounds, bad, 1e-3), UnsupportedConstraint);
}

}  // namespace
}  // namespace gnlopt
