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

#include "gnlopt/choice_model.hpp"
#include "gnlopt/errors.hpp"
#include "test_util.hpp"

namespace gnlopt {
namespace {

using testing::mask_vector;
using testing::random_model;
using testing::ref_revenue;

TEST(Assortment, Constructors) {
  const auto a = Assortment::FromIndices(5, {0, 3});
  EXPECT_EQ(a.count(), 2);
  EXPECT_EQ(a.support(), (std::vector<int>{0, 3}));
  EXPECT_EQ(Assortment::FromMask(5, 0b01001), a);
  const std::vector<double> vals{0.9, 0.2, 0.51, 0.5, 0.0};
  EXPECT_EQ(Assortment::FromValues(vals), Assortment::FromIndices(5, {0, 2}));
}

TEST(ChoiceModel, RevenueMatchesDefinition) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const GnlModel md = random_model(6, 3, seed, 3);
    for (std::uint64_t mask = 0; mask < 64; ++mask) {
      const auto x = Assortment::FromMask(6, mask);
      EXPECT_NEAR(expected_revenue(md, x), ref_revenue(md, mask_vector(6, mask)), 1e-12);
    }
  }
}

TEST(ChoiceModel, ProbabilitiesSumToOne) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const GnlModel md = random_model(7, 3, seed, 3);
    for (std::uint64_t mask = 0; mask < 128; mask += 5) {
      const auto x = Assortment::FromMask(7, mask);
      const double total = product_choice_prob(md, x).sum() + no_purchase_prob(md, x);
      EXPECT_NEAR(total, 1.0, 1e-12);
      EXPECT_NEAR(nest_choice_prob(md, x).sum(), 1.0, 1e-12);
    }
  }
}

TEST(ChoiceModel, SingleNestWithUnitSigmaIsMultinomialLogit) {
  GnlModel md = random_model(5, 1, 3);
  md.sigma[0] = 1.0;
  const auto x = Assortment::FromIndices(5, {0, 2, 4});
  double num = 0.0, den = md.v0[0];
  for (int i : x.support()) {
    num += md.r[i] * md.v(i, 0);
    den += md.v(i, 0);
  }
  EXPECT_NEAR(expected_revenue(md, x), num / den, 1e-12);
}

TEST(ChoiceModel, EmptyAssortmentEarnsNothing) {
  const GnlModel md = random_model(4, 2, 1);
  EXPECT_EQ(expected_revenue(md, Assortment(4)), 0.0);
  EXPECT_NEAR(no_purchase_prob(md, Assortment(4)), 1.0, 1e-15);
}

TEST(ChoiceModel, MinObjectiveIsBetaMinusRevenue) {
  const GnlModel md = random_model(6, 2, 5);
  const double beta = md.r.maxCoeff() + 1.0;
  for (std::uint64_t mask = 0; mask < 64; mask += 3) {
    const auto x = Assortment::FromMask(6, mask);
    EXPECT_NEAR(min_objective(md, x, beta), beta - expected_revenue(md, x), 1e-12);
  }
  EXPECT_THROW(min_objective(md, Assortment(6), md.r.maxCoeff()), InvalidArgument);
}

TEST(ChoiceModel, MixtureIsWeightedSum) {
  MgnlModel mixed;
  mixed.segments = {random_model(5, 2, 1), random_model(5, 2, 2)};
  mixed.theta = Eigen::Vector2d(0.3, 0.7);
  const auto x = Assortment::FromIndices(5, {1, 2});
  EXPECT_NEAR(mgnl_expected_revenue(mixed, x),
              0.3 * expected_revenue(mixed.segments[0], x) +
                  0.7 * expected_revenue(mixed.segments[1], x),
              1e-14);
}

TEST(ChoiceModel, ValidationReportsEveryProblem) {
  GnlModel md = random_model(4, 2, 0);
  EXPECT_TRUE(validate_model(md).empty());
  md.sigma[0] = 1.5;
  md.alpha(0, 0) = -0.1;
  EXPECT_GE(validate_model(md).size(), 2u);
  EXPECT_THROW(require_valid(md), ModelError);

  GnlModel zero = random_model(4, 2, 0);
  zero.v0[1] = 0.0;
  EXPECT_THROW(require_valid(zero), ModelError);
  EXPECT_NO_THROW(require_valid(zero, true));
}

TEST(ChoiceModel, DimensionMismatchThrows) {
  const GnlModel md = random_model(4, 2, 0);
  EXPECT_THROW(expected_revenue(md, Assortment(3)), DimensionError);
}

TEST(ChoiceModel, ZeroOptOutEmptyNestContributesNothing) {
  GnlModel md = random_model(4, 2, 0);
  md.alpha.setZero();
  md.alpha(0, 0) = md.alpha(1, 0) = 1.0;
  md.alpha(2, 1) = md.alpha(3, 1) = 1.0;
  md.v0[1] = 0.0;
  // Only nest 0 products offered: nest 1 is empty and drops out.
  const auto x = Assortment::FromIndices(4, {0});
  const double w = md.v0[0] + md.v(0, 0);
  const double expect = md.r[0] * md.v(0, 0) * std::pow(w, md.sigma[0] - 1.0) /
                        std::pow(w, md.sigma[0]);
  EXPECT_NEAR(zero_optout_expected_revenue(md, x), expect, 1e-12);
}

// Convexity of H and concavity of K along random segments of [0,1]^m.
TEST(NestFunctions, RelaxedCurvature) {
  std::mt19937_64 g(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const GnlModel md = random_model(6, 3, trial, 3);
    std::vector<double> a(6), b(6), mid(6);
    const double lam = u(g);
    for (int i = 0; i < 6; ++i) {
      a[i] = u(g);
      b[i] = u(g);
      mid[i] = lam * a[i] + (1 - lam) * b[i];
    }
    for (int n = 0; n < 3; ++n) {
      EXPECT_LE(relaxed_H(md, n, mid),
                lam * relaxed_H(md, n, a) + (1 - lam) * relaxed_H(md, n, b) + 1e-10);
      EXPECT_GE(relaxed_K(md, n, mid),
                lam * relaxed_K(md, n, a) + (1 - lam) * relaxed_K(md, n, b) - 1e-10);
    }
  }
}

// Exhaustive marginal checks over A subset of B for m = 6.
TEST(NestFunctions, SetModularity) {
  const int m = 6;
  const GnlModel md = random_model(m, 2, 4, 2);
  auto with = [&](std::uint64_t s, int j) { return Assortment::FromMask(m, s | (1ull << j)); };
  for (std::uint64_t b = 0; b < (1ull << m); ++b) {
    for (std::uint64_t a = b;; a = (a - 1) & b) {
      for (int j = 0; j < m; ++j) {
        if (b >> j & 1) continue;
        const auto A = Assortment::FromMask(m, a), B = Assortment::FromMask(m, b);
        for (int n = 0; n < 2; ++n) {
          const double kA = set_K(md, n, with(a, j)) - set_K(md, n, A);
          const double kB = set_K(md, n, with(b, j)) - set_K(md, n, B);
          EXPECT_GE(kA, kB - 1e-10);
          EXPECT_GE(kB, -1e-10);
          const double hA = set_H(md, n, with(a, j)) - set_H(md, n, A);
          const double hB = set_H(md, n, with(b, j)) - set_H(md, n, B);
          EXPECT_LE(hA, hB + 1e-10);
          EXPECT_LE(hB, 1e-10);
          const double yA = set_Y(md, n, with(a, j)) - set_Y(md, n, A);
          const double yB = set_Y(md, n, with(b, j)) - set_Y(md, n, B);
          EXPECT_LE(yA, yB + 1e-10);
        }
        const double zA = set_Z(md, with(a, j)) - set_Z(md, Assortment::FromMask(m, a));
        const double zB = set_Z(md, with(b, j)) - set_Z(md, Assortment::FromMask(m, b));
        EXPECT_GE(zA, zB - 1e-10);
        EXPECT_GE(zB, -1e-10);
      }
      if (a == 0) break;
    }
  }
}

TEST(NestFunctions, LogSumIdentityAtConsistentPoints) {
  const GnlModel md = random_model(5, 3, 9, 3);
  for (std::uint64_t mask = 0; mask < 32; ++mask) {
    const auto x = Assortment::FromMask(5, mask);
    double acc = 0.0;
    for (int n = 0; n < 3; ++n) {
      const double y = set_Y(md, n, x);
      acc += std::exp(md.sigma[n] * y / (md.sigma[n] - 1.0));
    }
    EXPECT_NEAR(std::log(acc), set_Z(md, x), 1e-10);
  }
}

TEST(NestFunctions, PosPowRejectsZero) {
  EXPECT_NEAR(pos_pow(4.0, 0.5), 2.0, 1e-15);
  EXPECT_THROW(pos_pow(0.0, 0.5), DegenerateNestError);
}

}  // namespace
}  // namespace gnlopt
