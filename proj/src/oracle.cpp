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

#include "gnlopt/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "gnlopt/errors.hpp"
#include "gnlopt/rng.hpp"

namespace gnlopt {

namespace {

bool rows_hold(const LinearConstraintSet& c, const std::vector<double>& v) {
  for (int p = 0; p < c.num_rows(); ++p) {
    double lhs = 0.0;
    for (int j = 0; j < c.num_vars(); ++j) lhs += c.a(p, j) * v[j];
    if (lhs > c.b[p] + 1e-9) return false;
  }
  return true;
}

template <typename Revenue>
OracleResult enumerate(int m, const LinearConstraintSet& c, Revenue revenue) {
  if (m > kMaxEnumeratedProducts)
    throw SizeGuardError("enumeration is limited to 24 products");
  if (c.num_rows() > 0 && c.num_vars() != m)
    throw DimensionError("constraints must have one column per product");
  OracleResult out;
  Assortment x(m);
  std::vector<double> v(m);
  const std::uint64_t total = std::uint64_t{1} << m;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    for (int i = 0; i < m; ++i) {
      const bool on = (mask >> i) & 1u;
      x.set(i, on);
      v[i] = on ? 1.0 : 0.0;
    }
    if (!rows_hold(c, v)) continue;
    const double f = revenue(x);
    ++out.evaluated;
    if (!out.feasible || f > out.objective) {
      out.feasible = true;
      out.objective = f;
      out.best = x;
    }
  }
  return out;
}

// Model over the products with their weights at the given prices.
GnlModel at_prices(const GnlModel& shell, const Eigen::VectorXd& eta,
                   const Eigen::VectorXd& kappa, const std::vector<double>& price) {
  const int m = static_cast<int>(price.size());
  GnlModel g;
  g.v0 = shell.v0;
  g.alpha = shell.alpha;
  g.sigma = shell.sigma;
  g.r = Eigen::Map<const Eigen::VectorXd>(price.data(), m);
  g.v.resize(m, shell.num_nests());
  for (int i = 0; i < m; ++i)
    for (int n = 0; n < shell.num_nests(); ++n)
      g.v(i, n) = std::exp((kappa[i] - eta[i] * price[i]) / shell.sigma[n]);
  return g;
}

bool cp_rows_hold(const LinearConstraintSet& c, const Assortment& x,
                  const std::vector<double>& y) {
  const int m = x.size();
  if (c.num_rows() == 0) return true;
  std::vector<double> v(c.num_vars(), 0.0);
  if (c.num_vars() == m) {
    for (int i = 0; i < m; ++i) v[i] = x[i] ? 1.0 : 0.0;
  } else if (c.num_vars() == 2 * m) {
    for (int i = 0; i < m; ++i) {
      v[i] = x[i] ? 1.0 : 0.0;
      v[m + i] = x[i] ? y[i] : 0.0;
    }
  } else {
    throw UnsupportedConstraint("price constraints need m or 2m columns");
  }
  return rows_hold(c, v);
}

class PriceSearch {
 public:
  PriceSearch(const GnlModel& shell, const PriceBounds& b, const Assortment& x,
              const LinearConstraintSet& c)
      : shell_(shell), b_(b), x_(x), c_(c) {}

  // -inf for infeasible prices.
  double Value(const std::vector<double>& y) {
    if (!cp_rows_hold(c_, x_, y)) return -std::numeric_limits<double>::infinity();
    ++evaluated_;
    return expected_revenue(at_prices(shell_, b_.eta, b_.kappa, y), x_);
  }

  // Best of `points` evenly spaced prices for coordinate i in [lo, hi].
  double Line(std::vector<double>& y, int i, double lo, double hi, int points,
              double current) {
    const double keep = y[i];
    double best = current, best_t = keep;
    for (int k = 0; k < points; ++k) {
      const double t = points == 1 ? lo : lo + (hi - lo) * k / (points - 1);
      y[i] = t;
      const double f = Value(y);
      if (f > best) {
        best = f;
        best_t = t;
      }
    }
    y[i] = best_t;
    return best;
  }

  // Cyclic coordinate grids on shrinking windows around y.
  double Zoom(std::vector<double>& y, const std::vector<int>& support, double current) {
    std::vector<double> half(x_.size());
    for (int i : support) half[i] = 0.5 * (b_.upper[i] - b_.lower[i]);
    for (int round = 0; round < 60; ++round) {
      bool open = false;
      for (int i : support) {
        const double lo = std::max(b_.lower[i], y[i] - half[i]);
        const double hi = std::min(b_.upper[i], y[i] + half[i]);
        if (hi > lo) current = Line(y, i, lo, hi, 11, current);
        half[i] *= 0.5;
        open = open || half[i] > 1e-10 * (1.0 + b_.upper[i]);
      }
      if (!open) break;
    }
    return current;
  }

  long evaluated() const { return evaluated_; }

 private:
  const GnlModel& shell_;
  const PriceBounds& b_;
  const Assortment& x_;
  const LinearConstraintSet& c_;
  long evaluated_ = 0;
};

}  // namespace

OracleResult enumerate_assortments(const GnlModel& model, const LinearConstraintSet& c) {
  require_valid(model);
  return enumerate(model.num_products(), c,
                   [&](const Assortment& x) { return expected_revenue(model, x); });
}

OracleResult enumerate_assortments(const MgnlModel& mixed, const LinearConstraintSet& c) {
  require_valid(mixed);
  return enumerate(mixed.num_products(), c,
                   [&](const Assortment& x) { return mgnl_expected_revenue(mixed, x); });
}

OracleResult enumerate_assortments_zero_optout(const GnlModel& model,
                                               const LinearConstraintSet& c) {
  require_valid(model, /*allow_zero_optout=*/true);
  return enumerate(model.num_products(), c, [&](const Assortment& x) {
    return zero_optout_expected_revenue(model, x);
  });
}

OracleResult enumerate_jap_dp(const GnlModel& shell, const PriceLadder& ladder,
                              const LinearConstraintSet& c) {
  validate_ladder(ladder);
  const int m = ladder.num_products();
  validate_shell(shell, m);
  long patterns = 1;
  for (const auto& p : ladder.prices) {
    patterns *= static_cast<long>(p.size()) + 1;
    if (patterns > kMaxPricePatterns)
      throw SizeGuardError("more than 10^6 price patterns");
  }
  const int k = ladder.num_items();
  const int d = c.num_vars();
  if (c.num_rows() > 0 && d != m && d != k && d != m + k)
    throw DimensionError("constraints must have m, items or m + items columns");
  std::vector<int> first(m, 0);
  for (int i = 1; i < m; ++i)
    first[i] = first[i - 1] + static_cast<int>(ladder.prices[i - 1].size());

  OracleResult out;
  std::vector<int> level(m, -1);
  std::vector<double> price(m), v(std::max(d, 0));
  Assortment x(m);
  for (long idx = 0; idx < patterns; ++idx) {
    long rest = idx;
    for (int i = 0; i < m; ++i) {
      const long base = static_cast<long>(ladder.prices[i].size()) + 1;
      level[i] = static_cast<int>(rest % base) - 1;
      rest /= base;
    }
    if (c.num_rows() > 0) {
      std::fill(v.begin(), v.end(), 0.0);
      for (int i = 0; i < m; ++i) {
        if (level[i] < 0) continue;
        if (d == m || d == m + k) v[i] = 1.0;
        if (d == k && d != m) v[first[i] + level[i]] = 1.0;
        if (d == m + k) v[m + first[i] + level[i]] = 1.0;
      }
      if (!rows_hold(c, v)) continue;
    }
    for (int i = 0; i < m; ++i) {
      x.set(i, level[i] >= 0);
      price[i] = level[i] >= 0 ? ladder.prices[i][level[i]] : ladder.prices[i][0];
    }
    const double f =
        expected_revenue(at_prices(shell, ladder.eta, ladder.kappa, price), x);
    ++out.evaluated;
    if (!out.feasible || f > out.objective) {
      out.feasible = true;
      out.objective = f;
      out.best = x;
      out.levels = level;
      out.prices.assign(m, 0.0);
      for (int i = 0; i < m; ++i)
        if (level[i] >= 0) out.prices[i] = price[i];
    }
  }
  return out;
}

OracleResult grid_multistart_prices(const GnlModel& shell, const PriceBounds& b,
                                    const Assortment& x, int grid_n, int starts,
                                    const LinearConstraintSet& c, std::uint64_t seed) {
  validate_bounds(b);
  const int m = b.num_products();
  validate_shell(shell, m);
  if (x.size() != m) throw DimensionError("assortment size differs from the bounds");
  if (grid_n < 2) throw InvalidArgument("grid_n must be at least 2");
  const std::vector<int> support = x.support();
  const int k = static_cast<int>(support.size());

  PriceSearch search(shell, b, x, c);
  std::vector<double> y(m);
  for (int i = 0; i < m; ++i) y[i] = b.lower[i];
  OracleResult out;
  out.best = x;

  // Candidate starting points, best first.
  std::vector<std::pair<double, std::vector<double>>> seeds;
  if (k <= 4) {
    long points = 1;
    for (int s = 0; s < k; ++s) points *= grid_n;
    std::vector<double> z = y;
    for (long idx = 0; idx < points; ++idx) {
      long rest = idx;
      for (int s = 0; s < k; ++s) {
        const int i = support[s];
        const int g = static_cast<int>(rest % grid_n);
        rest /= grid_n;
        z[i] = b.lower[i] + (b.upper[i] - b.lower[i]) * g / (grid_n - 1);
      }
      const double f = search.Value(z);
      if (!std::isfinite(f)) continue;
      seeds.emplace_back(f, z);
      std::stable_sort(seeds.begin(), seeds.end(),
                       [](const auto& a, const auto& b) { return a.first > b.first; });
      if (static_cast<int>(seeds.size()) > std::max(1, starts)) seeds.pop_back();
    }
  } else {
    Rng rng(seed, 0x6f7261636c65ULL);
    for (int s = 0; s <= starts; ++s) {
      std::vector<double> z = y;
      for (int i : support)
        z[i] = s == 0 ? 0.5 * (b.lower[i] + b.upper[i])
                      : rng.uniform(b.lower[i], b.upper[i]);
      double f = search.Value(z);
      if (!std::isfinite(f)) continue;
      for (int sweep = 0; sweep < 30; ++sweep) {
        const double before = f;
        for (int i : support) f = search.Line(z, i, b.lower[i], b.upper[i], grid_n, f);
        if (f <= before) break;
      }
      seeds.emplace_back(f, z);
    }
  }
  bool found = false;
  for (auto& [f, z] : seeds) {
    const double v = search.Zoom(z, support, f);
    if (!found || v > out.objective) {
      found = true;
      out.objective = v;
      out.prices = z;
    }
  }
  out.feasible = found;
  if (!found) out.prices = y;
  out.evaluated = search.evaluated();
  return out;
}

OracleResult enumerate_jap_cp(const GnlModel& shell, const PriceBounds& b,
                              const LinearConstraintSet& c, int grid_n, int starts,
                              std::uint64_t seed) {
  const int m = b.num_products();
  if (m > kMaxEnumeratedProducts)
    throw SizeGuardError("enumeration is limited to 24 products");
  OracleResult out;
  const std::uint64_t total = std::uint64_t{1} << m;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    const Assortment x = Assortment::FromMask(m, mask);
    // Rows over x alone prune early; rows with prices are checked inside.
    if (c.num_rows() > 0 && c.num_vars() == m && !c.satisfied_by(x)) continue;
    OracleResult r = grid_multistart_prices(shell, b, x, grid_n, starts, c, seed);
    out.evaluated += r.evaluated;
    if (!r.feasible) continue;
    if (!out.feasible || r.objective > out.objective) {
      out.feasible = true;
      out.objective = r.objective;
      out.best = x;
      out.prices = r.prices;
    }
  }
  return out;
}

std::vector<std::pair<double, double>> local_maxima_scan(
    const std::function<double(double)>& f, double a, double b, int grid_n) {
  if (grid_n < 3) throw InvalidArgument("local_maxima_scan needs grid_n >= 3");
  if (!(b > a)) throw InvalidArgument("local_maxima_scan needs a < b");
  std::vector<double> xs(grid_n), fs(grid_n);
  for (int k = 0; k < grid_n; ++k) {
    xs[k] = a + (b - a) * k / (grid_n - 1);
    fs[k] = f(xs[k]);
  }
  std::vector<std::pair<double, double>> out;
  for (int k = 0; k < grid_n; ++k) {
    const bool left = k == 0 || fs[k] > fs[k - 1];
    const bool right = k == grid_n - 1 || fs[k] > fs[k + 1];
    if (left && right) out.emplace_back(xs[k], fs[k]);
  }
  return out;
}

}  // namespace gnlopt
