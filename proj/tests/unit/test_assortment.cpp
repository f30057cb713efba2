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

#include "gnlopt/assortment.hpp"
#include "gnlopt/errors.hpp"
#include "gnlopt/oracle.hpp"
#include "test_util.hpp"

namespace gnlopt {
namespace {

using testing::cardinality;
using testing::mask_vector;
using testing::random_model;
using testing::ref_best;
using testing::ref_revenue;
using testing::rel_diff;

TEST(Subproblem, ClosedFormMatchesDefinition) {
  const GnlModel md = random_model(6, 3, 2, 3);
  const double beta = choose_beta(md);
  for (std::uint64_t mask = 0; mask < 64; mask += 5) {
    const auto x = Assortment::FromMask(6, mask);
    double k = 0.0;
    for (int n = 0; n < 3; ++n) k += set_K(md, n, x);
    const double f = ref_revenue(md, mask_vector(6, mask));
    for (double delta : {0.0, 0.3 * beta, beta}) {
      EXPECT_NEAR(subproblem_value(md, beta, delta, x), (beta - delta - f) * k, 1e-10);
    }
  }
}

TEST(Subproblem, ExactMinimumMatchesEnumeration) {
  const GnlModel md = random_model(7, 2, 4);
  const auto cons = cardinality(7, 3);
  const double beta = choose_beta(md);
  const double delta = 0.6 * beta;
  double best = 1e300;
  for (std::uint64_t mask = 0; mask < 128; ++mask) {
    if (__builtin_popcountll(mask) > 3) continue;
    best = std::min(best, subproblem_value(md, beta, delta, Assortment::FromMask(7, mask)));
  }
  const SubproblemResult r = bisection_subproblem(md, cons, beta, delta, AssortConfig{});
  EXPECT_NEAR(r.value, best, 1e-7 * std::max(1.0, std::abs(best)));
  EXPECT_EQ(r.nonpositive, best <= 0.0);
}

class GnlSolvers : public ::testing::TestWithParam<int> {};

TEST_P(GnlSolvers, MatchReferenceOptimum) {
  const int seed = GetParam();
  const int m = 8;
  const GnlModel md = random_model(m, 3, 300 + seed, 3);
  const int cap = 2 + seed % 4;
  const auto cons = cardinality(m, cap);
  const double best = ref_best(md, cap);
  const double beta = choose_beta(md);

  const AssortmentResult b = solve_gnl_bisection(md, cons, beta, 1e-9);
  const AssortmentResult l = solve_gnl_logconvex(md, cons, beta);
  for (const auto* r : {&b, &l}) {
    ASSERT_TRUE(r->feasible);
    EXPECT_LE(rel_diff(r->revenue, best), 1e-6);
    EXPECT_LE(r->assortment.count(), cap);
    EXPECT_GE(r->bound, r->revenue - 1e-9);
    EXPECT_NEAR(r->revenue, expected_revenue(md, r->assortment), 1e-14);
  }
  EXPECT_EQ(l.termination, Termination::kOptimal);
}

INSTANTIATE_TEST_SUITE_P(Seeds, GnlSolvers, ::testing::Range(0, 12));

TEST(Bisection, BracketHalvesExactly) {
  const GnlModel md = random_model(7, 2, 8);
  const double beta = choose_beta(md);
  const double tol = 1e-6;
  const AssortmentResult r = solve_gnl_bisection(md, cardinality(7, 3), beta, tol);
  ASSERT_TRUE(r.bisection.has_value());
  const auto& st = *r.bisection;
  ASSERT_EQ(static_cast<int>(st.widths.size()), st.iterations);
  for (int k = 0; k < st.iterations; ++k) EXPECT_EQ(st.widths[k], std::ldexp(beta, -(k + 1)));
  EXPECT_LE(st.delta_hi - st.delta_lo, tol * std::max(1.0, beta) * (1 + 1e-12));
  // The optimum lies inside the bracket in min form.
  const double best = ref_best(md, 3);
  EXPECT_LE(st.delta_lo, beta - best + 1e-9);
  EXPECT_GE(st.delta_hi, beta - best - 1e-9);
}

TEST(Logconvex, LogSumCutIsNeutral) {
  for (int seed = 0; seed < 6; ++seed) {
    const GnlModel md = random_model(8, 3, 40 + seed, 2, 0.3);
    const auto cons = cardinality(8, 4);
    const double beta = choose_beta(md);
    AssortConfig on;
    on.use_logsumexp_cut = true;
    const double a = solve_gnl_logconvex(md, cons, beta).revenue;
    const double b = solve_gnl_logconvex(md, cons, beta, on).revenue;
    EXPECT_NEAR(a, b, 1e-8);
  }
}

TEST(Logconvex, ConfigurationTogglesAgree) {
  const GnlModel md = random_model(9, 3, 77, 3);
  const auto cons = cardinality(9, 4);
  const double beta = choose_beta(md);
  const double best = ref_best(md, 4);
  for (int mask = 0; mask < 16; ++mask) {
    AssortConfig c;
    c.use_submodular_cuts = mask & 1;
    c.use_normalization_row = mask & 2;
    c.tighten_nodes = mask & 4;
    c.use_incumbent_cutoff = mask & 8;
    EXPECT_LE(rel_diff(solve_gnl_logconvex(md, cons, beta, c).revenue, best), 1e-6) << mask;
    EXPECT_LE(rel_diff(solve_gnl_bisection(md, cons, beta, 1e-9, c).revenue, best), 1e-6)
        << mask;
  }
}

TEST(Assortment, InfeasibleConstraints) {
  const GnlModel md = random_model(5, 2, 1);
  LinearConstraintSet c;
  c.a = Eigen::MatrixXd(2, 5);
  c.a.row(0).setOnes();
  c.a.row(1).setConstant(-1.0);
  c.b = Eigen::Vector2d(1.0, -2.0);  // at most one and at least two
  const double beta = choose_beta(md);
  EXPECT_FALSE(solve_gnl_logconvex(md, c, beta).feasible);
  EXPECT_FALSE(solve_gnl_bisection(md, c, beta, 1e-9).feasible);
}

TEST(Assortment, RejectsBadBeta) {
  const GnlModel md = random_model(5, 2, 1);
  EXPECT_THROW(solve_gnl_logconvex(md, cardinality(5, 2), md.r.maxCoeff()), InvalidArgument);
}

TEST(Mixed, MatchesReferenceOptimum) {
  for (int seed = 0; seed < 6; ++seed) {
    MgnlModel mixed;
    mixed.segments = {random_model(7, 2, 500 + seed), random_model(7, 2, 600 + seed)};
    mixed.segments[1].r = mixed.segments[0].r;
    mixed.theta = Eigen::Vector2d(0.35, 0.65);
    const auto cons = cardinality(7, 3);
    double best = 0.0;
    for (std::uint64_t mask = 0; mask < 128; ++mask) {
      if (__builtin_popcountll(mask) > 3) continue;
      const auto x = mask_vector(7, mask);
      best = std::max(best, 0.35 * ref_revenue(mixed.segments[0], x) +
                                0.65 * ref_revenue(mixed.segments[1], x));
    }
    const auto r = solve_mgnl(mixed, cons, choose_beta(mixed));
    EXPECT_LE(rel_diff(r.revenue, best), 1e-6);
  }
}

TEST(Mixed, SingleSegmentReducesToGnl) {
  const GnlModel md = random_model(8, 3, 21, 3);
  MgnlModel mixed;
  mixed.segments = {md};
  mixed.theta = Eigen::VectorXd::Ones(1);
  const auto cons = cardinality(8, 4);
  const double beta = choose_beta(md);
  EXPECT_NEAR(solve_mgnl(mixed, cons, beta).revenue,
              solve_gnl_logconvex(md, cons, beta).revenue, 1e-10);
}

TEST(ZeroOptOut, MatchesEnumerationAndIgnoresFloorSize) {
  for (int seed = 0; seed < 6; ++seed) {
    GnlModel md = random_model(7, 3, 700 + seed, 2);
    md.v0[seed % 3] = 0.0;
    const auto cons = cardinality(7, 3);
    const double beta = choose_beta(md);
    const OracleResult o = enumerate_assortments_zero_optout(md, cons);
    const auto r = solve_zero_optout(md, cons, beta);
    EXPECT_LE(rel_diff(r.revenue, o.objective), 1e-6);
    AssortConfig half;
    half.floor_fraction = 0.25;
    EXPECT_NEAR(solve_zero_optout(md, cons, beta, half).revenue, r.revenue, 1e-8);
  }
}

TEST(ZeroOptOut, FloorsOnlyOnZeroNests) {
  GnlModel md = random_model(5, 3, 1, 3);
  md.v0[1] = 0.0;
  const auto f = zero_optout_floors(md, 0.5);
  ASSERT_EQ(f.size(), 3u);
  EXPECT_EQ(f[0], 0.0);
  EXPECT_EQ(f[2], 0.0);
  if (md.alpha.col(1).maxCoeff() > 0.0) EXPECT_GT(f[1], 0.0);
  EXPECT_THROW(zero_optout_floors(md, 0.75), InvalidArgument);
}

TEST(Heuristics, GreedyStaysFeasible) {
  const GnlModel md = random_model(8, 2, 9);
  const auto cons = cardinality(8, 3);
  const auto g = greedy_assortment([&](const Assortment& x) { return expected_revenue(md, x); },
                                   8, cons);
  ASSERT_TRUE(g.has_value());
  EXPECT_TRUE(cons.satisfied_by(*g));
}

TEST(Printer, ListsBilinearRows) {
  MgnlModel mixed;
  mixed.segments = {random_model(4, 2, 1), random_model(4, 2, 2)};
  mixed.segments[1].r = mixed.segments[0].r;
  mixed.theta = Eigen::Vector2d(0.5, 0.5);
  const std::string text = print_mgnl_bilinear(mixed, cardinality(4, 2), choose_beta(mixed));
  EXPECT_FALSE(text.empty());
}

}  // namespace
}  // namespace gnlopt
