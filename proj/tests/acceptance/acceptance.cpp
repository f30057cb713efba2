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

// Acceptance run: thirteen checks with fixed seeds and tolerances, one
// PASS/FAIL line each. Exit status is the number of failed checks.
//
// Usage: gnlopt_acceptance [check-number ...]   (default: all)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "gnlopt/assortment.hpp"
#include "gnlopt/cuts.hpp"
#include "gnlopt/harness.hpp"
#include "gnlopt/instances.hpp"
#include "gnlopt/oracle.hpp"
#include "gnlopt/pricing.hpp"

using namespace gnlopt;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

// ---------------------------------------------------------------------------
// Batteries.

Instance make(InstanceKind kind, int m, int nests, std::uint64_t seed, int segments = 1,
              int levels = 3) {
  GenSpec s;
  s.kind = kind;
  s.m = m;
  s.n_nests = nests;
  s.seed = seed;
  s.segments = segments;
  s.levels = levels;
  return generate(s);
}

// 4 sizes x 3 nest counts x 5 seeds.
std::vector<Instance> gnl_battery() {
  std::vector<Instance> out;
  for (int m : {6, 8, 10, 12})
    for (int n : {2, 3, 4})
      for (std::uint64_t s = 0; s < 5; ++s) out.push_back(make(InstanceKind::kGnl, m, n, 1000 + s));
  return out;
}

// 2 segment counts x 3 sizes x 5 seeds.
std::vector<Instance> mgnl_battery() {
  std::vector<Instance> out;
  for (int t : {2, 3})
    for (int m : {6, 8, 10})
      for (std::uint64_t s = 0; s < 5; ++s)
        out.push_back(make(InstanceKind::kMgnl, m, 2, 2000 + s, t));
  return out;
}

// 3 sizes x 2 ladder lengths x 5 seeds.
std::vector<Instance> dp_battery() {
  std::vector<Instance> out;
  for (int m : {4, 5, 6})
    for (int l : {2, 3})
      for (std::uint64_t s = 0; s < 5; ++s)
        out.push_back(make(InstanceKind::kJapDp, m, 2, 3000 + s, 1, l));
  return out;
}

// GNL instances with the opt-out weight of one nest removed.
std::vector<Instance> zero_battery() {
  std::vector<Instance> out;
  for (int m : {6, 8})
    for (int n : {2, 3})
      for (std::uint64_t s = 0; s < 5; ++s) {
        Instance in = make(InstanceKind::kGnl, m, n, 4000 + s);
        in.model.v0[static_cast<int>(s) % n] = 0.0;
        out.push_back(in);
      }
  return out;
}

std::vector<Instance> cp_battery() {
  std::vector<Instance> out;
  for (int m : {3, 4, 5, 6})
    for (std::uint64_t s = 0; s < 5; ++s) out.push_back(make(InstanceKind::kJapCp, m, 2, 5000 + s));
  return out;
}

constexpr double kObjTol = 1e-6;
constexpr double kBisectionTol = 1e-9;
constexpr int kCpGrid = 41;
constexpr int kCpStarts = 8;
constexpr double kCpEpsilon = 1e-3;

// Results on the GNL battery, shared by several checks.
struct GnlRun {
  double oracle = 0.0;
  AssortmentResult bisection, logconvex;
  double beta = 0.0;
};

const std::vector<GnlRun>& gnl_runs(double* seconds = nullptr) {
  static std::vector<GnlRun> runs;
  static double secs = 0.0;
  if (runs.empty()) {
    const auto t0 = Clock::now();
    for (const Instance& in : gnl_battery()) {
      GnlRun r;
      r.beta = choose_beta(in.model);
      r.oracle = enumerate_assortments(in.model, in.constraints).objective;
      r.bisection = solve_gnl_bisection(in.model, in.constraints, r.beta, kBisectionTol);
      r.logconvex = solve_gnl_logconvex(in.model, in.constraints, r.beta);
      runs.push_back(std::move(r));
    }
    secs = since(t0);
  }
  if (seconds) *seconds = secs;
  return runs;
}

// ---------------------------------------------------------------------------
// Checks.

Outcome gnl_oracle_equivalence() {
  double secs = 0.0;
  const auto& runs = gnl_runs(&secs);
  int bad = 0;
  double worst = 0.0;
  for (const auto& r : runs) {
    const double eb = rel(r.bisection.revenue, r.oracle), el = rel(r.logconvex.revenue, r.oracle);
    worst = std::max({worst, eb, el});
    if (eb > kObjTol || el > kObjTol) ++bad;
  }
  return {bad == 0 && secs < 120.0,
          fmt("%zu instances, %d mismatches, worst rel diff %.2e, %.1f s (limit 120 s)",
              runs.size(), bad, worst, secs)};
}

Outcome mgnl_oracle_equivalence() {
  int bad = 0;
  double worst = 0.0;
  const auto battery = mgnl_battery();
  for (const Instance& in : battery) {
    const double o = enumerate_assortments(in.mixed, in.constraints).objective;
    const double f = solve_mgnl(in.mixed, in.constraints, choose_beta(in.mixed)).revenue;
    worst = std::max(worst, rel(f, o));
    if (rel(f, o) > kObjTol) ++bad;
  }
  // One segment with weight one against the single-model path.
  double reduction = 0.0;
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Instance in = make(InstanceKind::kGnl, 8 + static_cast<int>(s % 3), 3, 2500 + s);
    MgnlModel one;
    one.segments = {in.model};
    one.theta = Eigen::VectorXd::Ones(1);
    const double beta = choose_beta(in.model);
    const double a = solve_mgnl(one, in.constraints, beta).revenue;
    const double b = solve_gnl_logconvex(in.model, in.constraints, beta).revenue;
    reduction = std::max(reduction, std::abs(a - b));
  }
  return {bad == 0 && reduction <= 1e-10,
          fmt("%zu instances, %d mismatches, worst rel diff %.2e; one-segment reduction "
              "max diff %.1e (limit 1e-10)",
              battery.size(), bad, worst, reduction)};
}

Outcome dp_oracle_equivalence() {
  int bad = 0;
  double worst = 0.0;
  const auto battery = dp_battery();
  for (const Instance& in : battery) {
    const double o = enumerate_jap_dp(in.model, *in.ladder, in.constraints).objective;
    const double f = solve_jap_dp(in.model, *in.ladder, in.constraints).revenue;
    worst = std::max(worst, rel(f, o));
    if (rel(f, o) > kObjTol) ++bad;
  }
  return {bad == 0, fmt("%zu instances, %d mismatches, worst rel diff %.2e", battery.size(),
                        bad, worst)};
}

Outcome zero_optout() {
  int bad = 0;
  double worst = 0.0, floor_diff = 0.0;
  const auto battery = zero_battery();
  for (const Instance& in : battery) {
    const double beta = choose_beta(in.model);
    const double o = enumerate_assortments_zero_optout(in.model, in.constraints).objective;
    const double f = solve_zero_optout(in.model, in.constraints, beta).revenue;
    AssortConfig half;
    half.floor_fraction = 0.25;
    const double g = solve_zero_optout(in.model, in.constraints, beta, half).revenue;
    worst = std::max(worst, rel(f, o));
    floor_diff = std::max(floor_diff, std::abs(f - g));
    if (rel(f, o) > kObjTol) ++bad;
  }
  return {bad == 0 && floor_diff < 1e-8,
          fmt("%zu instances, %d mismatches, worst rel diff %.2e; halved floor max diff "
              "%.1e (limit 1e-8)",
              battery.size(), bad, worst, floor_diff)};
}

Outcome curvature_and_modularity() {
  long violations = 0, checks = 0;
  std::mt19937_64 g(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  // Midpoint checks of H (convex) and K (concave) on relaxed points.
  Instance in;
  for (int t = 0; t < 10000; ++t) {
    if (t % 100 == 0) in = make(InstanceKind::kGnl, 8, 3, 6000 + t / 100);
    const int m = in.m;
    std::vector<double> a(m), b(m), c(m);
    const double lam = u(g);
    for (int i = 0; i < m; ++i) {
      a[i] = u(g);
      b[i] = u(g);
      c[i] = lam * a[i] + (1 - lam) * b[i];
    }
    for (int n = 0; n < in.n_nests; ++n) {
      const double h = relaxed_H(in.model, n, c) -
                       (lam * relaxed_H(in.model, n, a) + (1 - lam) * relaxed_H(in.model, n, b));
      const double k = (lam * relaxed_K(in.model, n, a) + (1 - lam) * relaxed_K(in.model, n, b)) -
                       relaxed_K(in.model, n, c);
      checks += 2;
      if (h > 1e-10) ++violations;
      if (k > 1e-10) ++violations;
    }
  }
  const long midpoint = violations;
  // Exhaustive marginal checks over every A subset of B, j outside B.
  long marginal = 0, mchecks = 0;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const Instance in = make(InstanceKind::kGnl, 8, 3, 6500 + seed);
    const int m = in.m, nn = in.n_nests;
    const std::uint64_t full = (1ull << m) - 1;
    // Tabulate every set function once.
    std::vector<std::vector<double>> H(nn), K(nn), Y(nn);
    std::vector<double> Z(full + 1);
    for (std::uint64_t s = 0; s <= full; ++s) {
      const auto x = Assortment::FromMask(m, s);
      for (int n = 0; n < nn; ++n) {
        H[n].push_back(set_H(in.model, n, x));
        K[n].push_back(set_K(in.model, n, x));
        Y[n].push_back(set_Y(in.model, n, x));
      }
      Z[s] = set_Z(in.model, x);
    }
    auto check = [&](bool ok) {
      ++mchecks;
      if (!ok) ++marginal;
    };
    for (std::uint64_t b = 0; b <= full; ++b) {
      for (std::uint64_t a = b;; a = (a - 1) & b) {
        for (int j = 0; j < m; ++j) {
          if (b >> j & 1) continue;
          const std::uint64_t aj = a | 1ull << j, bj = b | 1ull << j;
          for (int n = 0; n < nn; ++n) {
            check(K[n][aj] - K[n][a] >= K[n][bj] - K[n][b] - 1e-10);
            check(H[n][aj] - H[n][a] <= H[n][bj] - H[n][b] + 1e-10);
            check(Y[n][aj] - Y[n][a] <= Y[n][bj] - Y[n][b] + 1e-10);
            if (a == b) {
              check(K[n][bj] >= K[n][b] - 1e-10);
              check(H[n][bj] <= H[n][b] + 1e-10);
              check(Y[n][bj] <= Y[n][b] + 1e-10);
            }
          }
          check(Z[aj] - Z[a] >= Z[bj] - Z[b] - 1e-10);
          if (a == b) check(Z[bj] >= Z[b] - 1e-10);
        }
        if (a == 0) break;
      }
    }
  }
  return {midpoint == 0 && marginal == 0,
          fmt("midpoint: %ld of %ld violated; marginal: %ld of %ld violated (tol 1e-10)",
              midpoint, checks, marginal, mchecks)};
}

// Symbolic variables at their true values for x.
std::function<double(const VarRef&)> consistent(const GnlModel& md, const std::vector<double>& x) {
  const Eigen::VectorXd w = inclusive_value(md, std::span<const double>(x));
  double z = 0.0;
  for (int n = 0; n < md.num_nests(); ++n) z += std::pow(w[n], md.sigma[n]);
  z = std::log(z);
  return [w, z, x, &md](const VarRef& v) -> double {
    const int n = v.index;
    switch (v.family) {
      case VarFamily::kX: return x[n];
      case VarFamily::kW:
      case VarFamily::kU: return w[n];
      case VarFamily::kH: return std::pow(w[n], md.sigma[n] - 1.0);
      case VarFamily::kK: return std::pow(w[n], md.sigma[n]);
      case VarFamily::kY: return (md.sigma[n] - 1.0) * std::log(w[n]);
      case VarFamily::kZ: return z;
      case VarFamily::kT: return std::exp((md.sigma[n] - 1.0) * std::log(w[n]) - z);
      case VarFamily::kS: return std::pow(w[n], md.sigma[n] - 1.0) * x[v.index2];
    }
    return 0.0;
  };
}

Outcome cut_validity() {
  std::mt19937_64 g(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  long oa_cuts = 0, oa_bad = 0;
  double oa_worst = 0.0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Instance in = make(InstanceKind::kGnl, 8, 3, 7000 + s);
    const GnlModel& md = in.model;
    const int m = in.m, nn = in.n_nests;
    std::vector<double> x0(m);
    for (auto& v : x0) v = u(g);
    const Eigen::VectorXd w0 = inclusive_value(md, std::span<const double>(x0));
    std::vector<LinearCut> cuts;
    std::vector<double> y0(nn), sig(md.sigma.data(), md.sigma.data() + nn);
    for (int n = 0; n < nn; ++n) {
      cuts.push_back(oa_cut_H(md, n, x0));
      cuts.push_back(oa_cut_K(md, n, x0));
      cuts.push_back(oa_cut_logW(md, n, w0[n]));
      y0[n] = (md.sigma[n] - 1.0) * std::log(w0[n]);
    }
    double z0 = 0.0;
    for (int n = 0; n < nn; ++n) z0 += std::pow(w0[n], md.sigma[n]);
    z0 = std::log(z0);
    for (int n = 0; n < nn; ++n) cuts.push_back(oa_cut_exp(n, y0[n], z0));
    cuts.push_back(oa_cut_logsum(md, std::span<const double>(w0.data(), nn)));
    cuts.push_back(oa_cut_prop5(sig, y0));
    for (const auto& c : cuts) {
      ++oa_cuts;
      for (int p = 0; p < 1000; ++p) {
        std::vector<double> x(m);
        for (auto& v : x) v = u(g);
        const double slack = c.slack(consistent(md, x));
        oa_worst = std::min(oa_worst, slack);
        if (slack < -1e-8) ++oa_bad;
      }
    }
  }
  long sc_cuts = 0, sc_bad = 0;
  for (std::uint64_t s = 0; s < 3; ++s) {
    const Instance in = make(InstanceKind::kGnl, 8, 3, 7500 + s);
    const int m = in.m, nn = in.n_nests;
    std::vector<std::function<double(const VarRef&)>> points;
    for (std::uint64_t mask = 0; mask < (1ull << m); ++mask) {
      std::vector<double> x(m);
      for (int i = 0; i < m; ++i) x[i] = mask >> i & 1;
      points.push_back(consistent(in.model, x));
    }
    for (std::uint64_t anchor = 0; anchor < (1ull << m); anchor += 3) {
      const auto s0 = Assortment::FromMask(m, anchor);
      std::vector<LinearCut> cuts{submodular_cut_Z(in.model, s0)};
      for (int n = 0; n < nn; ++n) {
        cuts.push_back(supermodular_cut_Y(in.model, n, s0));
        cuts.push_back(supermodular_cut_H(in.model, n, s0));
        cuts.push_back(submodular_cut_K(in.model, n, s0));
      }
      for (const auto& c : cuts) {
        ++sc_cuts;
        for (const auto& p : points)
          if (c.slack(p) < -1e-8) ++sc_bad;
      }
    }
  }
  // McCormick rows reproduce s = h x at binary x and cut off anything else.
  long mc_bad = 0;
  for (double lo : {0.05, 0.5}) {
    const double hi = lo + 2.0;
    const auto rows = mccormick(VarRef::S(0, 0), VarRef::H(0), VarRef::X(0), lo, hi);
    for (double x : {0.0, 1.0})
      for (int k = 0; k <= 20; ++k) {
        const double h = lo + (hi - lo) * k / 20.0;
        auto at = [&](double sv) {
          double worst = 1e300;
          for (const auto& r : rows)
            worst = std::min(worst, r.slack([&](const VarRef& v) {
              return v.family == VarFamily::kS ? sv : v.family == VarFamily::kH ? h : x;
            }));
          return worst;
        };
        if (at(h * x) < -1e-12) ++mc_bad;
        if (at(h * x + 1e-6) >= 0.0 || at(h * x - 1e-6) >= 0.0) ++mc_bad;
      }
  }
  return {oa_bad == 0 && sc_bad == 0 && mc_bad == 0,
          fmt("outer approximation: %ld cuts x 1000 points, %ld violations (worst slack %.1e); "
              "submodular: %ld cuts x 256 points, %ld violations; McCormick: %ld failures",
              oa_cuts, oa_bad, oa_worst, sc_cuts, sc_bad, mc_bad)};
}

Outcome logsum_cut_neutrality() {
  const auto battery = gnl_battery();
  const auto& runs = gnl_runs();
  AssortConfig on;
  on.use_logsumexp_cut = true;
  double worst = 0.0;
  int fewer_or_equal = 0;
  for (std::size_t k = 0; k < battery.size(); ++k) {
    const auto r = solve_gnl_logconvex(battery[k].model, battery[k].constraints, runs[k].beta, on);
    worst = std::max(worst, std::abs(r.revenue - runs[k].logconvex.revenue));
    if (r.solve.nodes <= runs[k].logconvex.solve.nodes) ++fewer_or_equal;
  }
  const double share = static_cast<double>(fewer_or_equal) / battery.size();
  return {worst < 1e-8 && share >= 0.5,
          fmt("max objective change %.1e (limit 1e-8); node count reduced or equal on "
              "%d/%zu instances (%.0f%%, threshold 50%%)",
              worst, fewer_or_equal, battery.size(), 100 * share)};
}

Outcome secant_approximation() {
  std::mt19937_64 g(29);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int cert_bad = 0, bound_bad = 0;
  double worst_ratio = 0.0, sum1 = 0.0, sum4 = 0.0;
  for (int t = 0; t < 100; ++t) {
    const double lo = u(g), hi = lo + 0.1 + 2.9 * u(g);
    const double eta = 0.1 + 1.9 * u(g), kappa = -1.0 + 2.0 * u(g);
    const double sigma = 0.25 + 0.75 * u(g);
    const double eps = std::pow(10.0, -2.0 - 2.0 * u(g));
    const double w_lo = (kappa - eta * hi) / sigma, w_hi = (kappa - eta * lo) / sigma;
    const Breakpoints bp = pwla_build(w_lo, w_hi, eps);
    double err = 0.0;
    for (int k = 0; k <= 10000; ++k) {
      const double w = w_lo + (w_hi - w_lo) * k / 10000.0;
      const double d = pwla_eval(bp, w) - std::exp(w);
      err = std::max(err, std::abs(d));
      if (d < -1e-12) ++cert_bad;
    }
    worst_ratio = std::max(worst_ratio, err / eps);
    if (err > eps) ++cert_bad;
    const long bound = pwla_bound(lo, hi, eta, kappa, sigma, eps);
    if (bp.segments() > bound) ++bound_bad;
    sum1 += bp.segments();
    sum4 += pwla_build(w_lo, w_hi, eps / 4).segments();
  }
  const double ratio = sum4 / sum1;
  return {cert_bad == 0 && bound_bad == 0 && ratio >= 1.5 && ratio <= 2.5,
          fmt("certificate failures %d/100 (max error/eps %.3f); segment count above bound "
              "%d/100; mean count ratio at eps/4 %.3f (range [1.5, 2.5])",
              cert_bad, worst_ratio, bound_bad, ratio)};
}

Outcome two_peak_pricing() {
  const auto t0 = Clock::now();
  GnlModel shell;
  shell.v0 = Eigen::Vector2d(1.0, 1.0);
  shell.alpha = Eigen::MatrixXd(1, 2);
  shell.alpha << 0.1, 5.0;
  shell.v = Eigen::MatrixXd::Zero(1, 2);
  shell.sigma = Eigen::Vector2d(0.1, 0.9);
  shell.r = Eigen::VectorXd::Zero(1);
  PriceBounds b;
  b.lower = Eigen::VectorXd::Constant(1, 0.01);
  b.upper = Eigen::VectorXd::Constant(1, 10.0);
  b.eta = Eigen::VectorXd::Ones(1);
  b.kappa = Eigen::VectorXd::Constant(1, 2.0);
  const auto x = Assortment::FromIndices(1, {0});
  const auto peaks = local_maxima_scan(
      [&](double y) {
        const double p[1] = {y};
        return cp_revenue(shell, b, x, p);
      },
      0.01, 10.0, 10000);
  const double secs = since(t0);
  std::string where;
  for (const auto& [y, f] : peaks) where += fmt(" (%.4f, %.5f)", y, f);
  return {peaks.size() == 2 && secs < 1.0,
          fmt("%zu local maxima on [0.01, 10]:%s; %.3f s (limit 1 s)", peaks.size(),
              where.c_str(), secs)};
}

Outcome continuous_pricing() {
  const auto battery = cp_battery();
  double worst = 0.0, excess = 0.0;
  int bad = 0;
  std::mt19937_64 g(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double gap1 = 0.0, gap2 = 0.0;
  int offered = 0, at_upper = 0;
  for (const Instance& in : battery) {
    const CpSolveReport r = solve_jap_cp(in.model, *in.bounds, in.constraints, kCpEpsilon);
    for (int i = 0; i < in.m; ++i) {
      offered += r.x[i];
      at_upper += r.x[i] && r.y[i] >= in.bounds->upper[i] - 1e-9;
    }
    const OracleResult o =
        enumerate_jap_cp(in.model, *in.bounds, in.constraints, kCpGrid, kCpStarts);
    const double d = (o.objective - r.revenue) / std::max(1e-12, o.objective);
    worst = std::max(worst, d);
    excess = std::max(excess, -d);
    if (std::abs(d) > 0.01) ++bad;
    // Approximation gap at random offers and prices for eps and eps / 2.
    for (int p = 0; p < 50; ++p) {
      Assortment x(in.m);
      std::vector<double> y(in.m);
      for (int i = 0; i < in.m; ++i) {
        x.set(i, u(g) < 0.6);
        y[i] = in.bounds->lower[i] + u(g) * (in.bounds->upper[i] - in.bounds->lower[i]);
      }
      gap1 = std::max(gap1, pwla_objective_gap(in.model, *in.bounds, x, y, kCpEpsilon));
      gap2 = std::max(gap2, pwla_objective_gap(in.model, *in.bounds, x, y, kCpEpsilon / 2));
    }
  }
  const double scaling = gap1 / gap2;
  return {bad == 0 && scaling >= 1.6 && scaling <= 2.6,
          fmt("%zu instances, %d outside 1%% (worst shortfall %.2e, worst excess %.2e; "
              "%d of %d offered prices at their upper bound); max gap %.3e at eps, %.3e at "
              "eps/2, ratio %.3f (range [1.6, 2.6])",
              battery.size(), bad, worst, excess, at_upper, offered, gap1, gap2, scaling)};
}

Outcome bisection_mechanics() {
  const auto& runs = gnl_runs();
  int width_bad = 0, end_bad = 0;
  long iterations = 0;
  for (const auto& r : runs) {
    const auto& st = *r.bisection.bisection;
    for (int k = 0; k < st.iterations; ++k)
      if (st.widths[k] != std::ldexp(r.beta, -(k + 1))) ++width_bad;
    iterations += st.iterations;
    if ((st.delta_hi - st.delta_lo) / std::max(1.0, r.beta) > kBisectionTol) ++end_bad;
  }
  return {width_bad == 0 && end_bad == 0,
          fmt("%zu runs, %ld iterations: %d widths differ from beta 2^-k; %d final brackets "
              "wider than tol %.0e",
              runs.size(), iterations, width_bad, end_bad, kBisectionTol)};
}

Outcome determinism() {
  std::vector<std::pair<std::string, Instance>> all;
  auto add = [&](const char* tag, const std::vector<Instance>& v) {
    for (std::size_t k = 0; k < v.size(); ++k)
      all.emplace_back(fmt("%s%03zu", tag, k), v[k]);
  };
  add("gnl", gnl_battery());
  add("mgnl", mgnl_battery());
  add("dp", dp_battery());
  add("zero", zero_battery());
  add("cp", cp_battery());
  RunOptions o;
  o.timing = false;
  o.oracle_grid = kCpGrid;
  o.oracle_starts = kCpStarts;
  // Default methods per kind, the zero-opt-out path, and the oracle rows.
  std::vector<std::pair<std::string, Instance>> zero;
  for (const auto& p : all)
    if (p.first.rfind("zero", 0) == 0) zero.push_back(p);
  auto battery = [&] {
    auto rows = run_bench(all, {"oracle"}, o);
    const auto z = run_bench(zero, {"zero_optout"}, o);
    rows.insert(rows.end(), z.begin(), z.end());
    return to_csv(rows);
  };
  const std::string first = battery();
  const std::string second = battery();
  const long n = std::count(first.begin(), first.end(), '\n') - 1;
  return {first == second && n > 0,
          fmt("%ld rows, %zu bytes; second run %s", n, first.size(),
              first == second ? "byte-identical" : "differs")};
}

Outcome scale_smoke() {
  double slowest = 0.0;
  int over = 0, not_optimal = 0;
  std::string times;
  for (std::uint64_t s = 0; s < 5; ++s) {
    const Instance in = make(InstanceKind::kGnl, 40, 5, s);
    const auto t0 = Clock::now();
    const auto r = solve_gnl_logconvex(in.model, in.constraints, choose_beta(in.model));
    const double secs = since(t0);
    slowest = std::max(slowest, secs);
    if (secs >= 60.0) ++over;
    if (r.termination != Termination::kOptimal) ++not_optimal;
    times += fmt(" %.1f", secs);
  }
  return {over == 0 && not_optimal == 0,
          fmt("5 instances (m=40, 5 nests), seconds:%s; %d over 60 s, %d not optimal",
              times.c_str(), over, not_optimal)};
}

struct Check {
  int id;
  const char* name;
  Outcome (*run)();
};

const Check kChecks[] = {
    {1, "gnl solvers match enumeration", gnl_oracle_equivalence},
    {2, "mixed gnl matches enumeration", mgnl_oracle_equivalence},
    {3, "discrete pricing matches enumeration", dp_oracle_equivalence},
    {4, "zero opt-out matches enumeration", zero_optout},
    {5, "curvature and modularity", curvature_and_modularity},
    {6, "cut validity", cut_validity},
    {7, "log-sum cut neutrality", logsum_cut_neutrality},
    {8, "secant approximation", secant_approximation},
    {9, "two-peak price landscape", two_peak_pricing},
    {10, "continuous pricing near-optimality", continuous_pricing},
    {11, "bisection bracket", bisection_mechanics},
    {12, "determinism", determinism},
    {13, "scale smoke", scale_smoke},
};

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int k = 1; k < argc; ++k) only.insert(std::atoi(argv[k]));
  int failed = 0;
  for (const auto& c : kChecks) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s %2d %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str(), since(t0));
    std::fflush(stdout);
  }
  return failed;
}
