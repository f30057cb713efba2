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

#include "gnlopt/cuts.hpp"
#include "test_util.hpp"

namespace gnlopt {
namespace {

using testing::random_model;
using testing::ref_weights;

// Every symbolic variable at its true value for the point x.
std::function<double(const VarRef&)> consistent(const GnlModel& md,
                                                const std::vector<double>& x) {
  const auto w = ref_weights(md, x);
  double z = 0.0;
  for (int n = 0; n < md.sigma.size(); ++n) z += std::pow(w[n], md.sigma[n]);
  z = std::log(z);
  return [=, &md](const VarRef& v) -> double {
    const double s = v.family == VarFamily::kX ? 0.0 : md.sigma[v.index];
    switch (v.family) {
      case VarFamily::kX: return x[v.index];
      case VarFamily::kW:
      case VarFamily::kU: return w[v.index];
      case VarFamily::kH: return std::pow(w[v.index], s - 1.0);
      case VarFamily::kK: return std::pow(w[v.index], s);
      case VarFamily::kY: return (s - 1.0) * std::log(w[v.index]);
      case VarFamily::kZ: return z;
      case VarFamily::kT: return std::exp((s - 1.0) * std::log(w[v.index]) - z);
      case VarFamily::kS: return std::pow(w[v.index], s - 1.0) * x[v.index2];
    }
    return 0.0;
  };
}

std::vector<double> random_point(int m, std::mt19937_64& g) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> x(m);
  for (auto& v : x) v = u(g);
  return x;
}

TEST(LinearCut, TermMergingAndSlack) {
  LinearCut c;
  add_term(c, VarRef::X(0), 1.0);
  add_term(c, VarRef::X(1), 2.0);
  add_term(c, VarRef::X(0), 0.5);
  add_term(c, VarRef::X(1), -2.0);
  add_term(c, VarRef::X(2), 0.0);
  EXPECT_EQ(c.coeffs.size(), 4u);
  normalize(c);
  c.rhs = 3.0;
  EXPECT_EQ(c.coeffs.size(), 1u);
  EXPECT_DOUBLE_EQ(c.coefficient(VarRef::X(0)), 1.5);
  EXPECT_DOUBLE_EQ(c.slack([](const VarRef&) { return 1.0; }), 1.5);
  c.sense = CutSense::kGreaterEqual;
  EXPECT_DOUBLE_EQ(c.slack([](const VarRef&) { return 1.0; }), -1.5);
}

TEST(OuterApproximation, TangentsAreValidEverywhere) {
  std::mt19937_64 g(7);
  for (int trial = 0; trial < 50; ++trial) {
    const GnlModel md = random_model(6, 3, trial, 3);
    const auto x0 = random_point(6, g);
    std::vector<LinearCut> cuts;
    for (int n = 0; n < 3; ++n) {
      cuts.push_back(oa_cut_H(md, n, x0));
      cuts.push_back(oa_cut_K(md, n, x0));
      const auto w0 = ref_weights(md, x0);
      cuts.push_back(oa_cut_logW(md, n, w0[n]));
      cuts.push_back(oa_cut_exp(n, -0.3 * (n + 1), 0.7));
    }
    const auto w0 = ref_weights(md, x0);
    cuts.push_back(oa_cut_logsum(md, w0));
    std::vector<double> sig(md.sigma.data(), md.sigma.data() + 3);
    std::vector<double> y0{-0.5, -1.0, -0.1};
    cuts.push_back(oa_cut_prop5(sig, y0));
    for (int p = 0; p < 200; ++p) {
      const auto value = consistent(md, random_point(6, g));
      for (const auto& c : cuts) EXPECT_GE(c.slack(value), -1e-8) << to_string(c.origin);
    }
  }
}

TEST(OuterApproximation, TangentIsTightAtAnchor) {
  std::mt19937_64 g(3);
  const GnlModel md = random_model(5, 2, 1);
  const auto x0 = random_point(5, g);
  const auto value = consistent(md, x0);
  for (int n = 0; n < 2; ++n) {
    EXPECT_NEAR(oa_cut_H(md, n, x0).slack(value), 0.0, 1e-12);
    EXPECT_NEAR(oa_cut_K(md, n, x0).slack(value), 0.0, 1e-12);
  }
}

TEST(Submodular, CutsValidOnEveryBinaryPointAndTightAtAnchor) {
  const int m = 6;
  for (int trial = 0; trial < 6; ++trial) {
    const GnlModel md = random_model(m, 2, 100 + trial);
    for (std::uint64_t anchor = 0; anchor < (1ull << m); anchor += 7) {
      const auto s0 = Assortment::FromMask(m, anchor);
      std::vector<LinearCut> cuts{submodular_cut_Z(md, s0)};
      for (int n = 0; n < 2; ++n) {
        cuts.push_back(supermodular_cut_Y(md, n, s0));
        cuts.push_back(supermodular_cut_H(md, n, s0));
        cuts.push_back(submodular_cut_K(md, n, s0));
      }
      for (std::uint64_t mask = 0; mask < (1ull << m); ++mask) {
        const auto value = consistent(md, testing::mask_vector(m, mask));
        for (const auto& c : cuts) {
          const double slack = c.slack(value);
          EXPECT_GE(slack, -1e-9) << to_string(c.origin);
          if (mask == anchor) EXPECT_NEAR(slack, 0.0, 1e-9);
        }
      }
    }
  }
}

TEST(McCormick, ExactAtBinaryPoints) {
  const double lo = 0.2, hi = 3.0;
  const auto rows = mccormick(VarRef::S(0, 1), VarRef::H(0), VarRef::X(1), lo, hi);
  ASSERT_EQ(rows.size(), 4u);
  for (double x : {0.0, 1.0}) {
    for (double h : {lo, 1.0, hi}) {
      auto at = [&](double s) {
        return [=](const VarRef& v) {
          return v.family == VarFamily::kS ? s : v.family == VarFamily::kH ? h : x;
        };
      };
      double worst = 1e300;
      for (const auto& r : rows) worst = std::min(worst, r.slack(at(h * x)));
      EXPECT_GE(worst, -1e-12);
      // Any other s value is cut off.
      for (double ds : {-0.1, 0.1}) {
        double w = 1e300;
        for (const auto& r : rows) w = std::min(w, r.slack(at(h * x + ds)));
        EXPECT_LT(w, 0.0);
      }
    }
  }
}

TEST(Bounds, ContainEveryAssortment) {
  const int m = 6;
  const GnlModel md = random_model(m, 3, 5, 3);
  const double beta = choose_beta(md);
  EXPECT_GT(beta, md.r.maxCoeff());
  const VarBounds b = variable_bounds(md, beta);
  const auto inner = Assortment::FromIndices(m, {1});
  const auto outer = Assortment::FromIndices(m, {1, 2, 4, 5});
  const VarBounds sb = set_bounds(md, inner, outer);
  for (std::uint64_t mask = 0; mask < (1ull << m); ++mask) {
    const auto x = Assortment::FromMask(m, mask);
    const bool between = x[1] && !x[0] && !x[3];
    for (int n = 0; n < 3; ++n) {
      const double h = set_H(md, n, x), k = set_K(md, n, x);
      EXPECT_GE(h, b.h_lo[n] - 1e-12);
      EXPECT_LE(h, b.h_hi[n] + 1e-12);
      EXPECT_GE(k, b.k_lo[n] - 1e-12);
      EXPECT_LE(k, b.k_hi[n] + 1e-12);
      if (between) {
        EXPECT_GE(h, sb.h_lo[n] - 1e-12);
        EXPECT_LE(h, sb.h_hi[n] + 1e-12);
        EXPECT_GE(k, sb.k_lo[n] - 1e-12);
        EXPECT_LE(k, sb.k_hi[n] + 1e-12);
      }
    }
  }
}

}  // namespace
}  // namespace gnlopt
