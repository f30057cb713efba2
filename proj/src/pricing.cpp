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

#include "gnlopt/pricing.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <sstream>

#include "gnlopt/cuts.hpp"
#include "gnlopt/errors.hpp"
#include "gnlopt/rng.hpp"

namespace gnlopt {

int PriceLadder::num_items() const {
  int k = 0;
  for (const auto& p : prices) k += static_cast<int>(p.size());
  return k;
}

void validate_ladder(const PriceLadder& ladder) {
  const int m = ladder.num_products();
  if (ladder.eta.size() != m || ladder.kappa.size() != m)
    throw InvalidArgument("ladder eta/kappa must have one entry per product");
  for (int i = 0; i < m; ++i) {
    const auto& p = ladder.prices[i];
    if (p.empty()) throw InvalidArgument("empty price ladder for a product");
    if (!(ladder.eta[i] > 0.0) || !std::isfinite(ladder.eta[i]))
      throw InvalidArgument("price sensitivity must be positive");
    if (!std::isfinite(ladder.kappa[i]))
      throw InvalidArgument("intercept must be finite");
    for (std::size_t l = 0; l < p.size(); ++l) {
      if (!(p[l] > 0.0) || !std::isfinite(p[l]))
        throw InvalidArgument("prices must be positive");
      if (l > 0 && !(p[l] > p[l - 1]))
        throw InvalidArgument("ladder prices must be strictly increasing");
    }
  }
}

void validate_bounds(const PriceBounds& b) {
  const int m = b.num_products();
  if (b.upper.size() != m || b.eta.size() != m || b.kappa.size() != m)
    throw InvalidArgument("price bound arrays differ in length");
  for (int i = 0; i < m; ++i) {
    if (!(b.lower[i] > 0.0) || !std::isfinite(b.upper[i]))
      throw InvalidArgument("price bounds need 0 < L");
    if (!(b.lower[i] <= b.upper[i]))
      throw InvalidArgument("price bounds need L <= U");
    if (!(b.eta[i] > 0.0) || !std::isfinite(b.eta[i]))
      throw InvalidArgument("price sensitivity must be positive");
    if (!std::isfinite(b.kappa[i])) throw InvalidArgument("intercept must be finite");
  }
}

void validate_shell(const GnlModel& shell, int m) {
  const int nn = shell.num_nests();
  if (nn == 0) throw ModelError("pricing shell has no nests");
  if (shell.v0.size() != nn) throw ModelError("v0 must have one entry per nest");
  if (shell.alpha.rows() != m || shell.alpha.cols() != nn)
    throw ModelError("alpha must be products x nests");
  for (int n = 0; n < nn; ++n) {
    if (!(shell.sigma[n] > 0.0 && shell.sigma[n] <= 1.0))
      throw ModelError("sigma must lie in (0, 1]");
    if (!(shell.v0[n] > 0.0)) throw ModelError("pricing needs positive opt-out weights");
  }
  for (int i = 0; i < m; ++i) {
    bool member = false;
    for (int n = 0; n < nn; ++n) {
      if (shell.alpha(i, n) < 0.0) throw ModelError("alpha must be nonnegative");
      member = member || shell.alpha(i, n) > 0.0;
    }
    if (!member) throw ModelError("every product needs a nest");
  }
}

double price_weight(double kappa, double eta, double price, double sigma) {
  return std::exp((kappa - eta * price) / sigma);
}

GnlModel priced_model(const GnlModel& shell, const PriceBounds& b,
                      std::span<const double> prices) {
  const int m = b.num_products();
  if (static_cast<int>(prices.size()) != m)
    throw DimensionError("one price per product expected");
  GnlModel out;
  out.v0 = shell.v0;
  out.alpha = shell.alpha;
  out.sigma = shell.sigma;
  out.r.resize(m);
  out.v.resize(m, shell.num_nests());
  for (int i = 0; i < m; ++i) {
    out.r[i] = prices[i];
    for (int n = 0; n < shell.num_nests(); ++n)
      out.v(i, n) = price_weight(b.kappa[i], b.eta[i], prices[i], shell.sigma[n]);
  }
  return out;
}

double cp_revenue(const GnlModel& shell, const PriceBounds& b, const Assortment& x,
                  std::span<const double> y) {
  return expected_revenue(priced_model(shell, b, y), x);
}

// ---------------------------------------------------------------------------
// Discrete prices.

namespace {

template <typename Fill>
void expand_items(const PriceLadder& ladder, std::vector<std::pair<int, int>>& items,
                  std::vector<int>& first, LinearConstraintSet& one_price, Fill fill) {
  const int m = ladder.num_products();
  const int k = ladder.num_items();
  items.clear();
  first.assign(m, 0);
  one_price.a = Eigen::MatrixXd::Zero(m, k);
  one_price.b = Eigen::VectorXd::Ones(m);
  for (int i = 0; i < m; ++i) {
    first[i] = static_cast<int>(items.size());
    for (int l = 0; l < static_cast<int>(ladder.prices[i].size()); ++l) {
      const int j = static_cast<int>(items.size());
      items.emplace_back(i, l);
      one_price.a(i, j) = 1.0;
      fill(j, i, ladder.prices[i][l]);
    }
  }
}

GnlModel expanded_segment(const GnlModel& shell, const PriceLadder& ladder,
                          std::vector<std::pair<int, int>>& items,
                          std::vector<int>& first, LinearConstraintSet& one_price) {
  const int k = ladder.num_items();
  const int nn = shell.num_nests();
  GnlModel out;
  out.v0 = shell.v0;
  out.sigma = shell.sigma;
  out.alpha.resize(k, nn);
  out.v.resize(k, nn);
  out.r.resize(k);
  expand_items(ladder, items, first, one_price, [&](int j, int i, double p) {
    out.r[j] = p;
    for (int n = 0; n < nn; ++n) {
      out.alpha(j, n) = shell.alpha(i, n);
      out.v(j, n) = price_weight(ladder.kappa[i], ladder.eta[i], p, shell.sigma[n]);
    }
  });
  return out;
}

GnlModel ladder_model(const GnlModel& shell, const PriceLadder& ladder,
                      std::span<const int> level, Assortment& x) {
  const int m = ladder.num_products();
  if (static_cast<int>(level.size()) != m)
    throw DimensionError("one level per product expected");
  GnlModel out;
  out.v0 = shell.v0;
  out.alpha = shell.alpha;
  out.sigma = shell.sigma;
  out.r = Eigen::VectorXd::Zero(m);
  out.v = Eigen::MatrixXd::Zero(m, shell.num_nests());
  x = Assortment(m);
  for (int i = 0; i < m; ++i) {
    const int l = level[i];
    if (l < 0) continue;
    if (l >= static_cast<int>(ladder.prices[i].size()))
      throw InvalidArgument("price level out of range");
    const double p = ladder.prices[i][l];
    x.set(i, true);
    out.r[i] = p;
    for (int n = 0; n < shell.num_nests(); ++n)
      out.v(i, n) = price_weight(ladder.kappa[i], ladder.eta[i], p, shell.sigma[n]);
  }
  return out;
}

}  // namespace

ExpandedModel expand_discrete(const GnlModel& shell, const PriceLadder& ladder) {
  validate_ladder(ladder);
  validate_shell(shell, ladder.num_products());
  ExpandedModel e;
  e.model = expanded_segment(shell, ladder, e.items, e.first_item, e.one_price);
  return e;
}

ExpandedMixed expand_discrete(const MgnlModel& shell, const PriceLadder& ladder) {
  validate_ladder(ladder);
  if (shell.segments.empty()) throw ModelError("mixed shell has no segments");
  ExpandedMixed e;
  e.mixed.theta = shell.theta;
  for (const GnlModel& seg : shell.segments) {
    validate_shell(seg, ladder.num_products());
    e.mixed.segments.push_back(
        expanded_segment(seg, ladder, e.items, e.first_item, e.one_price));
  }
  return e;
}

LinearConstraintSet lift_constraints(const LinearConstraintSet& extra, int m,
                                     const std::vector<std::pair<int, int>>& items,
                                     const LinearConstraintSet& one_price) {
  if (extra.num_rows() == 0) return one_price;
  const int k = static_cast<int>(items.size());
  const int d = extra.num_vars();
  const bool product_part = d == m || d == m + k;
  const bool item_part = (d == k && d != m) || d == m + k;
  if (!product_part && !item_part)
    throw DimensionError("extra constraints must have m, items or m + items columns");
  LinearConstraintSet out;
  const int rows = extra.num_rows();
  out.a = Eigen::MatrixXd::Zero(rows + one_price.num_rows(), k);
  out.b.resize(rows + one_price.num_rows());
  for (int p = 0; p < rows; ++p) {
    for (int j = 0; j < k; ++j) {
      double a = 0.0;
      if (product_part) a += extra.a(p, items[j].first);
      if (item_part) a += extra.a(p, d == k ? j : m + j);
      out.a(p, j) = a;
    }
    out.b[p] = extra.b[p];
  }
  out.a.bottomRows(one_price.num_rows()) = one_price.a;
  out.b.tail(one_price.num_rows()) = one_price.b;
  return out;
}

double jap_revenue(const GnlModel& shell, const PriceLadder& ladder,
                   std::span<const int> level) {
  Assortment x;
  const GnlModel model = ladder_model(shell, ladder, level, x);
  return expected_revenue(model, x);
}

double jap_revenue(const MgnlModel& shell, const PriceLadder& ladder,
                   std::span<const int> level) {
  MgnlModel mixed;
  mixed.theta = shell.theta;
  Assortment x;
  for (const GnlModel& seg : shell.segments)
    mixed.segments.push_back(ladder_model(seg, ladder, level, x));
  return mgnl_expected_revenue(mixed, x);
}

namespace {

void map_back(const PriceLadder& ladder, const std::vector<std::pair<int, int>>& items,
              JapDpResult& out) {
  const int m = ladder.num_products();
  out.level.assign(m, -1);
  out.price.assign(m, 0.0);
  out.offered = Assortment(m);
  if (!out.solve.feasible) return;
  for (int j : out.solve.assortment.support()) {
    const auto [i, l] = items[j];
    if (out.level[i] >= 0) throw NumericalFailure("two prices chosen for one product");
    out.level[i] = l;
    out.price[i] = ladder.prices[i][l];
    out.offered.set(i, true);
  }
}

}  // namespace

JapDpResult solve_jap_dp(const GnlModel& shell, const PriceLadder& ladder,
                         const LinearConstraintSet& extra, const JapDpConfig& config) {
  const ExpandedModel e = expand_discrete(shell, ladder);
  const LinearConstraintSet rows =
      lift_constraints(extra, ladder.num_products(), e.items, e.one_price);
  const double beta = choose_beta(e.model);
  JapDpResult out;
  out.solve = config.method == JapMethod::kBisection
                  ? solve_gnl_bisection(e.model, rows, beta, config.bisection_tol,
                                        config.assort)
                  : solve_gnl_logconvex(e.model, rows, beta, config.assort);
  map_back(ladder, e.items, out);
  out.revenue = out.solve.feasible ? jap_revenue(shell, ladder, out.level) : 0.0;
  out.bound = out.solve.bound;
  return out;
}

JapDpResult solve_jap_dp(const MgnlModel& shell, const PriceLadder& ladder,
                         const LinearConstraintSet& extra, const JapDpConfig& config) {
  const ExpandedMixed e = expand_discrete(shell, ladder);
  const LinearConstraintSet rows =
      lift_constraints(extra, ladder.num_products(), e.items, e.one_price);
  JapDpResult out;
  out.solve = solve_mgnl(e.mixed, rows, choose_beta(e.mixed), config.assort);
  map_back(ladder, e.items, out);
  out.revenue = out.solve.feasible ? jap_revenue(shell, ladder, out.level) : 0.0;
  out.bound = out.solve.bound;
  return out;
}

// ---------------------------------------------------------------------------
// Secant approximation.

double pwla_theta(double q, double q_next) {
  if (!(q_next > q)) throw InvalidArgument("pwla_theta needs q_next > q");
  const double d = q_next - q;
  // slope = e^q g with g = (e^d - 1) / d; the gap is e^q (1 + g (ln g - 1)).
  const double g = std::expm1(d) / d;
  return std::max(0.0, std::exp(q) * (1.0 + g * (std::log(g) - 1.0)));
}

double pwla_next_breakpoint(double q, double w_hi, double epsilon, double tau) {
  if (!(w_hi > q)) throw InvalidArgument("pwla_next_breakpoint needs q < w_hi");
  if (!(epsilon > 0.0) || !(tau > 0.0))
    throw InvalidArgument("epsilon and tau must be positive");
  if (pwla_theta(q, w_hi) <= epsilon) return w_hi;
  double lo = q, hi = w_hi;
  while (hi - lo > tau) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (pwla_theta(q, mid) <= epsilon)
      lo = mid;
    else
      hi = mid;
  }
  // Guarantee progress even when epsilon is below what tau can resolve.
  if (lo <= q) lo = std::min(w_hi, q + tau);
  return lo;
}

Breakpoints pwla_build(double w_lo, double w_hi, double epsilon, double tau) {
  if (!(w_lo <= w_hi)) throw InvalidArgument("pwla_build needs w_lo <= w_hi");
  if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be positive");
  Breakpoints bp;
  bp.epsilon = epsilon;
  bp.tau = tau > 0.0 ? tau : 1e-9 * (w_hi - w_lo);
  bp.q.push_back(w_lo);
  if (w_hi > w_lo) {
    if (!(bp.tau > 0.0)) bp.tau = 1e-9 * std::max(1.0, std::abs(w_lo));
    while (bp.q.back() < w_hi)
      bp.q.push_back(pwla_next_breakpoint(bp.q.back(), w_hi, epsilon, bp.tau));
  }
  for (std::size_t h = 0; h + 1 < bp.q.size(); ++h) {
    const double a = bp.q[h], b = bp.q[h + 1];
    bp.slopes.push_back(std::exp(a) * std::expm1(b - a) / (b - a));
  }
  return bp;
}

double pwla_eval(const Breakpoints& bp, double w) {
  const double slack = 1e-12 * (1.0 + std::abs(bp.hi()) + std::abs(bp.lo()));
  if (w < bp.lo() - slack || w > bp.hi() + slack)
    throw InvalidArgument("pwla_eval outside the breakpoint domain");
  w = std::clamp(w, bp.lo(), bp.hi());
  if (bp.segments() == 0) return std::exp(bp.lo());
  auto it = std::upper_bound(bp.q.begin(), bp.q.end(), w);
  int h = static_cast<int>(it - bp.q.begin()) - 1;
  h = std::clamp(h, 0, bp.segments() - 1);
  if (w == bp.q[h]) return std::exp(w);
  if (w == bp.q[h + 1]) return std::exp(w);
  return std::exp(bp.q[h]) + bp.slopes[h] * (w - bp.q[h]);
}

long pwla_bound(double lower, double upper, double eta, double kappa, double sigma,
                double epsilon) {
  if (!(upper >= lower) || !(eta > 0.0) || !(sigma > 0.0 && sigma <= 1.0) ||
      !(epsilon > 0.0))
    throw InvalidArgument("pwla_bound: invalid parameters");
  const double v = std::exp((-lower * eta + kappa) / (2.0 * sigma)) * eta *
                   (upper - lower) / (2.0 * std::sqrt(2.0 * epsilon) * sigma);
  return static_cast<long>(std::ceil(v));
}

std::pair<double, double> w_domain(const PriceBounds& b, int i, double sigma) {
  return {(b.kappa[i] - b.eta[i] * b.upper[i]) / sigma,
          (b.kappa[i] - b.eta[i] * b.lower[i]) / sigma};
}

PwlaSurrogate build_surrogate(const GnlModel& shell, const PriceBounds& b,
                              double epsilon) {
  validate_bounds(b);
  validate_shell(shell, b.num_products());
  PwlaSurrogate s;
  s.epsilon = epsilon;
  s.bp.resize(b.num_products());
  for (int i = 0; i < b.num_products(); ++i) {
    s.bp[i].resize(shell.num_nests());
    for (int n = 0; n < shell.num_nests(); ++n) {
      if (shell.alpha(i, n) <= 0.0) continue;
      const auto [lo, hi] = w_domain(b, i, shell.sigma[n]);
      s.bp[i][n] = pwla_build(lo, hi, epsilon);
    }
  }
  return s;
}

double surrogate_revenue(const GnlModel& shell, const PriceBounds& b,
                         const PwlaSurrogate& s, const Assortment& x,
                         std::span<const double> y) {
  GnlModel model = priced_model(shell, b, y);
  for (int i = 0; i < b.num_products(); ++i) {
    for (int n = 0; n < shell.num_nests(); ++n) {
      if (shell.alpha(i, n) <= 0.0) continue;
      const double w = (b.kappa[i] - b.eta[i] * y[i]) / shell.sigma[n];
      model.v(i, n) = pwla_eval(s.bp[i][n], w);
    }
  }
  return expected_revenue(model, x);
}

double pwla_objective_gap(const GnlModel& shell, const PriceBounds& b,
                          const Assortment& x, std::span<const double> y,
                          double epsilon) {
  const PwlaSurrogate s = build_surrogate(shell, b, epsilon);
  for (int i = 0; i < b.num_products(); ++i)
    if (y[i] < b.lower[i] - 1e-12 || y[i] > b.upper[i] + 1e-12)
      throw InvalidArgument("price outside its bounds");
  return std::abs(cp_revenue(shell, b, x, y) - surrogate_revenue(shell, b, s, x, y));
}

// ---------------------------------------------------------------------------
// Continuous prices.

bool cp_feasible(const LinearConstraintSet& c, const Assortment& x,
                 std::span<const double> y, double tol) {
  if (c.num_rows() == 0) return true;
  const int m = x.size();
  const int d = c.num_vars();
  if (d != m && d != 2 * m)
    throw UnsupportedConstraint("price constraints need m or 2m columns");
  for (int p = 0; p < c.num_rows(); ++p) {
    double lhs = 0.0;
    for (int i = 0; i < m; ++i) {
      if (!x[i]) continue;
      lhs += c.a(p, i);
      if (d == 2 * m) lhs += c.a(p, m + i) * y[i];
    }
    if (lhs > c.b[p] + tol) return false;
  }
  return true;
}

namespace {

void merge_prices(std::vector<double>& prices) {
  std::sort(prices.begin(), prices.end());
  std::vector<double> out;
  for (double p : prices)
    if (out.empty() || p - out.back() > 1e-12 * (1.0 + std::abs(p))) out.push_back(p);
  prices = std::move(out);
}

PriceLadder initial_ladder(const GnlModel& shell, const PriceBounds& b,
                           const PwlaSurrogate& s, int cap) {
  const int m = b.num_products();
  PriceLadder ladder;
  ladder.eta = b.eta;
  ladder.kappa = b.kappa;
  ladder.prices.resize(m);
  for (int i = 0; i < m; ++i) {
    int pick = -1;
    for (int n = 0; n < shell.num_nests(); ++n) {
      if (shell.alpha(i, n) <= 0.0) continue;
      if (pick < 0 || s.bp[i][n].segments() > s.bp[i][pick].segments()) pick = n;
    }
    auto& p = ladder.prices[i];
    for (double q : s.bp[i][pick].q) {
      const double y = (b.kappa[i] - shell.sigma[pick] * q) / b.eta[i];
      p.push_back(std::clamp(y, b.lower[i], b.upper[i]));
    }
    p.push_back(b.lower[i]);
    p.push_back(b.upper[i]);
    merge_prices(p);
    if (static_cast<int>(p.size()) > cap) {
      // Half by breakpoint rank, half evenly in price.
      std::vector<double> thin;
      const int half = std::max(2, cap / 2);
      for (int k = 0; k < half; ++k)
        thin.push_back(p[static_cast<std::size_t>(
            std::llround(static_cast<double>(k) * (p.size() - 1) / (half - 1)))]);
      for (int k = 0; k < cap - half; ++k)
        thin.push_back(b.lower[i] + (b.upper[i] - b.lower[i]) * k / std::max(1, cap - half - 1));
      merge_prices(thin);
      p = std::move(thin);
    }
  }
  return ladder;
}

// Rows over (product, level) items for the ladder solve.
LinearConstraintSet ladder_rows(const LinearConstraintSet& c, const PriceLadder& ladder) {
  const int m = ladder.num_products();
  if (c.num_rows() == 0 || c.num_vars() == m) return c;
  if (c.num_vars() != 2 * m)
    throw UnsupportedConstraint("price constraints need m or 2m columns");
  LinearConstraintSet out;
  out.a = Eigen::MatrixXd::Zero(c.num_rows(), ladder.num_items());
  out.b = c.b;
  int j = 0;
  for (int i = 0; i < m; ++i)
    for (double p : ladder.prices[i]) {
      for (int r = 0; r < c.num_rows(); ++r) out.a(r, j) = c.a(r, i) + c.a(r, m + i) * p;
      ++j;
    }
  // A one-column-per-item matrix would be ambiguous when every ladder has a
  // single price; both readings coincide then.
  return out;
}

class Polisher {
 public:
  Polisher(const GnlModel& shell, const PriceBounds& b, const LinearConstraintSet& c,
           const CpConfig& config)
      : shell_(shell), b_(b), c_(c), config_(config) {}

  // Improves y for the fixed assortment x; returns the best revenue.
  double Run(const Assortment& x, std::vector<double>& y, double current,
             Rng& rng, int& starts, long& evaluations) {
    const std::vector<int> support = x.support();
    if (support.empty()) return current;
    double best = current;
    std::vector<double> best_y = y;
    for (int s = 0; s <= config_.starts; ++s) {
      std::vector<double> z = y;
      if (s > 0)
        for (int i : support) z[i] = rng.uniform(b_.lower[i], b_.upper[i]);
      if (!cp_feasible(c_, x, z)) continue;
      ++starts;
      double val = Eval(x, z, evaluations);
      for (int sweep = 0; sweep < config_.sweeps; ++sweep) {
        const double before = val;
        for (int i : support) val = Coordinate(x, z, i, val, evaluations);
        if (val - before <= 1e-13 * (1.0 + std::abs(val))) break;
      }
      if (val > best) {
        best = val;
        best_y = z;
      }
    }
    y = best_y;
    return best;
  }

 private:
  double Eval(const Assortment& x, const std::vector<double>& y, long& evaluations) {
    ++evaluations;
    return cp_revenue(shell_, b_, x, y);
  }

  // Price range of product i that keeps every row satisfied.
  std::pair<double, double> Range(const Assortment& x, const std::vector<double>& y,
                                  int i) const {
    double lo = b_.lower[i], hi = b_.upper[i];
    const int m = x.size();
    if (c_.num_rows() == 0 || c_.num_vars() != 2 * m) return {lo, hi};
    for (int p = 0; p < c_.num_rows(); ++p) {
      const double ay = c_.a(p, m + i);
      if (ay == 0.0) continue;
      double rest = 0.0;
      for (int j = 0; j < m; ++j) {
        if (!x[j]) continue;
        rest += c_.a(p, j);
        if (j != i) rest += c_.a(p, m + j) * y[j];
      }
      const double t = (c_.b[p] - rest) / ay;
      if (ay > 0.0)
        hi = std::min(hi, t);
      else
        lo = std::max(lo, t);
    }
    return {lo, hi};
  }

  // Coarse scan, then golden-section search around the best scan point.
  double Coordinate(const Assortment& x, std::vector<double>& y, int i, double val,
                    long& evaluations) {
    auto [lo, hi] = Range(x, y, i);
    if (!(hi > lo)) return val;
    const double keep = y[i];
    auto f = [&](double t) {
      y[i] = t;
      return Eval(x, y, evaluations);
    };
    constexpr int kScan = 8;
    int best_k = 0;
    double best_f = -1.0;
    for (int k = 0; k <= kScan; ++k) {
      const double v = f(lo + (hi - lo) * k / kScan);
      if (v > best_f) {
        best_f = v;
        best_k = k;
      }
    }
    double a = lo + (hi - lo) * std::max(0, best_k - 1) / kScan;
    double b = lo + (hi - lo) * std::min(kScan, best_k + 1) / kScan;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = f(c), fd = f(d);
    for (int step = 0; step < config_.golden_steps && b - a > 1e-12 * (1.0 + b); ++step) {
      if (fc >= fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - g * (b - a);
        fc = f(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + g * (b - a);
        fd = f(d);
      }
    }
    double t = fc >= fd ? c : d;
    double ft = std::max(fc, fd);
    if (best_f > ft) {
      t = lo + (hi - lo) * best_k / kScan;
      ft = best_f;
    }
    if (ft > val) {
      y[i] = t;
      return ft;
    }
    y[i] = keep;
    return val;
  }

  const GnlModel& shell_;
  const PriceBounds& b_;
  const LinearConstraintSet& c_;
  const CpConfig& config_;
};

// Coordinate ascent over ladder levels, used when the ladder MILP fails
// numerically. Each step picks the best level (or absence) of one product.
JapDpResult ladder_sweep(const GnlModel& shell, const PriceBounds& b,
                         const LinearConstraintSet& c, const PriceLadder& ladder) {
  const int m = b.num_products();
  JapDpResult out;
  out.offered = Assortment(m);
  out.level.assign(m, -1);
  out.price.assign(m, 0.0);
  std::vector<double> y(b.lower.data(), b.lower.data() + m);
  if (!cp_feasible(c, out.offered, y)) return out;
  out.solve.feasible = true;
  for (int sweep = 0; sweep < 100; ++sweep) {
    bool moved = false;
    for (int i = 0; i < m; ++i) {
      const int n = static_cast<int>(ladder.prices[i].size());
      for (int l = -1; l < n; ++l) {
        if (l == out.level[i]) continue;
        Assortment x = out.offered;
        x.set(i, l >= 0);
        std::vector<double> z = y;
        z[i] = l >= 0 ? ladder.prices[i][l] : b.lower[i];
        if (!cp_feasible(c, x, z)) continue;
        const double val = cp_revenue(shell, b, x, z);
        if (val > out.revenue + 1e-13 * (1.0 + out.revenue)) {
          out.revenue = val;
          out.offered = x;
          out.level[i] = l;
          out.price[i] = l >= 0 ? z[i] : 0.0;
          y = z;
          moved = true;
        }
      }
    }
    if (!moved) break;
  }
  out.bound = std::numeric_limits<double>::quiet_NaN();
  return out;
}

}  // namespace

CpSolveReport solve_jap_cp(const GnlModel& shell, const PriceBounds& b,
                           const LinearConstraintSet& constraints, double epsilon,
                           const CpConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  validate_bounds(b);
  const int m = b.num_products();
  validate_shell(shell, m);
  if (constraints.num_rows() > 0 && constraints.num_vars() != m &&
      constraints.num_vars() != 2 * m)
    throw UnsupportedConstraint("price constraints need m or 2m columns");
  if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be positive");

  const PwlaSurrogate surrogate = build_surrogate(shell, b, epsilon);
  if (config.max_ladder_levels < 2) throw InvalidArgument("max_ladder_levels must be at least 2");
  PriceLadder ladder = initial_ladder(shell, b, surrogate, config.max_ladder_levels);

  CpSolveReport rep;
  auto solve_ladder = [&]() {
    try {
      const JapDpResult dp = solve_jap_dp(shell, ladder, ladder_rows(constraints, ladder),
                                          config.dp);
      rep.nodes += dp.solve.solve.nodes;
      return dp;
    } catch (const NumericalFailure&) {
      rep.ladder_fallback = true;
      return ladder_sweep(shell, b, constraints, ladder);
    }
  };
  auto prices_of = [&](const JapDpResult& dp) {
    std::vector<double> y(m);
    for (int i = 0; i < m; ++i) y[i] = dp.level[i] >= 0 ? dp.price[i] : b.lower[i];
    return y;
  };

  const JapDpResult first = solve_ladder();
  if (!first.solve.feasible) throw InvalidArgument("price constraints are infeasible");
  rep.ladder_bound = first.bound;
  rep.ladder_revenue = first.revenue;
  rep.x = first.offered;
  rep.y = prices_of(first);
  rep.revenue = first.revenue;

  Rng rng(config.seed, 0x706f6c697368ULL);
  Polisher polish(shell, b, constraints, config);
  rep.revenue = polish.Run(rep.x, rep.y, rep.revenue, rng, rep.polish_starts,
                           rep.polish_evaluations);
  for (int round = 1; round <= config.max_rounds; ++round) {
    const double before = rep.revenue;
    for (int i = 0; i < m; ++i) {
      if (!rep.x[i]) continue;
      ladder.prices[i].push_back(rep.y[i]);
      merge_prices(ladder.prices[i]);
    }
    const JapDpResult dp = solve_ladder();
    if (dp.solve.feasible && dp.revenue > rep.revenue) {
      rep.x = dp.offered;
      rep.y = prices_of(dp);
      rep.revenue = dp.revenue;
    }
    rep.revenue = polish.Run(rep.x, rep.y, rep.revenue, rng, rep.polish_starts,
                             rep.polish_evaluations);
    rep.rounds = round;
    if (rep.revenue - before < config.improve_tol) break;
  }
  rep.revenue = cp_revenue(shell, b, rep.x, rep.y);
  rep.surrogate = surrogate_revenue(shell, b, surrogate, rep.x, rep.y);
  for (const auto& p : ladder.prices) rep.ladder_sizes.push_back(static_cast<int>(p.size()));
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

std::string print_cp_bilinear(const GnlModel& shell, const PriceBounds& b,
                              const LinearConstraintSet& constraints, double epsilon) {
  validate_bounds(b);
  const int m = b.num_products();
  const int nn = shell.num_nests();
  validate_shell(shell, m);
  const PwlaSurrogate s = build_surrogate(shell, b, epsilon);
  const double beta = b.upper.maxCoeff() + 1.0;

  std::ostringstream os;
  os << std::setprecision(17);
  os << "# bilinear continuous-price formulation, beta = " << beta << "\n";
  os << "MINIMIZE\n  delta\n";
  os << "VARIABLES\n";
  std::vector<double> w_hi(nn);
  for (int n = 0; n < nn; ++n) {
    double hi = shell.v0[n];
    for (int i = 0; i < m; ++i)
      if (shell.alpha(i, n) > 0.0) hi += shell.alpha(i, n) * std::exp(s.bp[i][n].hi());
    w_hi[n] = hi;
  }
  for (int i = 0; i < m; ++i) {
    os << "  x[" << i << "] binary\n";
    os << "  y[" << i << "] in [" << b.lower[i] << ", " << b.upper[i] << "]\n";
    for (int n = 0; n < nn; ++n) {
      if (shell.alpha(i, n) <= 0.0) continue;
      const double tl = std::exp(s.bp[i][n].lo()), th = std::exp(s.bp[i][n].hi());
      os << "  w[" << i << "," << n << "] in [" << s.bp[i][n].lo() << ", "
         << s.bp[i][n].hi() << "]\n";
      os << "  t[" << i << "," << n << "] in [" << tl << ", " << th << "]\n";
      os << "  u[" << i << "," << n << "] in [" << (beta - b.upper[i]) * tl << ", "
         << (beta - b.lower[i]) * th << "]\n";
      os << "  s[" << i << "," << n << "] in [0, " << (beta - b.lower[i]) * th << "]\n";
    }
  }
  for (int n = 0; n < nn; ++n) {
    const double lo = shell.v0[n], hi = w_hi[n], sg = shell.sigma[n];
    os << "  W[" << n << "] in [" << lo << ", " << hi << "]\n";
    os << "  h[" << n << "] in [" << std::pow(hi, sg - 1.0) << ", " << std::pow(lo, sg - 1.0)
       << "]\n";
    os << "  k[" << n << "] in [" << std::pow(lo, sg) << ", " << std::pow(hi, sg) << "]\n";
  }
  os << "  delta >= 0\n";
  os << "ROWS\n";
  os << "  ratio: sum_n h[n] (" << "beta v0[n] + sum_i alpha[i,n] s[i,n]) - delta sum_n k[n] <= 0\n";
  for (int i = 0; i < m; ++i) {
    for (int n = 0; n < nn; ++n) {
      if (shell.alpha(i, n) <= 0.0) continue;
      const Breakpoints& bp = s.bp[i][n];
      const std::string id = "[" + std::to_string(i) + "," + std::to_string(n) + "]";
      const double ul = (beta - b.upper[i]) * std::exp(bp.lo());
      const double uh = (beta - b.lower[i]) * std::exp(bp.hi());
      os << "  price" << id << ": w" << id << " = (" << b.kappa[i] << " - " << b.eta[i]
         << " y[" << i << "]) / " << shell.sigma[n] << "\n";
      os << "  curve" << id << ": t" << id << " = " << std::exp(bp.lo());
      for (int h = 0; h < bp.segments(); ++h)
        os << " + " << bp.slopes[h] * (bp.q[h + 1] - bp.q[h]) << " nu" << id << "[" << h << "]";
      os << "\n";
      os << "  fill" << id << ": w" << id << " = " << bp.lo();
      for (int h = 0; h < bp.segments(); ++h)
        os << " + " << (bp.q[h + 1] - bp.q[h]) << " nu" << id << "[" << h << "]";
      os << "\n";
      for (int h = 0; h + 1 < bp.segments(); ++h)
        os << "  order" << id << "[" << h << "]: nu" << id << "[" << h + 1 << "] <= v" << id
           << "[" << h << "] <= nu" << id << "[" << h << "]\n";
      os << "  product" << id << ": u" << id << " = (beta - y[" << i << "]) t" << id << "\n";
      os << "  mc" << id << "[0]: s" << id << " >= " << ul << " x[" << i << "]\n";
      os << "  mc" << id << "[1]: s" << id << " <= " << uh << " x[" << i << "]\n";
      os << "  mc" << id << "[2]: s" << id << " >= u" << id << " - " << uh << " (1 - x[" << i
         << "])\n";
      os << "  mc" << id << "[3]: s" << id << " <= u" << id << " - " << ul << " (1 - x[" << i
         << "])\n";
    }
  }
  for (int n = 0; n < nn; ++n) {
    os << "  weight[" << n << "]: W[" << n << "] = " << shell.v0[n];
    for (int i = 0; i < m; ++i)
      if (shell.alpha(i, n) > 0.0)
        os << " + " << shell.alpha(i, n) << " x[" << i << "] t[" << i << "," << n << "]";
    os << "\n";
    os << "  convex[" << n << "]: h[" << n << "] >= W[" << n << "]^" << shell.sigma[n] - 1.0
       << "\n";
    os << "  concave[" << n << "]: k[" << n << "] <= W[" << n << "]^" << shell.sigma[n] << "\n";
    os << "  bilinear[" << n << "]: k[" << n << "] = W[" << n << "] h[" << n << "]\n";
  }
  for (int p = 0; p < constraints.num_rows(); ++p) {
    os << "  side[" << p << "]:";
    const int d = constraints.num_vars();
    for (int j = 0; j < d; ++j) {
      const double a = constraints.a(p, j);
      if (a == 0.0) continue;
      if (j < m)
        os << " + " << a << " x[" << j << "]";
      else
        os << " + " << a << " x[" << j - m << "] y[" << j - m << "]";
    }
    os << " <= " << constraints.b[p] << "\n";
  }
  return os.str();
}

}  // namespace gnlopt
