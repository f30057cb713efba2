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

#include "gnlopt/master.hpp"

#include <algorithm>
#include <numeric>

#include "gnlopt/errors.hpp"

namespace gnlopt {

int MasterBuilder::add_column(const VarRef& ref, double cost, double lower,
                              double upper) {
  if (vars_.columns.count(ref))
    throw InvalidArgument("duplicate master column " + to_string(ref));
  const int j = lp_.add_column(cost, lower, upper, to_string(ref));
  vars_.columns[ref] = j;
  vars_.refs.push_back(ref);
  return j;
}

PoolCut MasterBuilder::pool_cut(const LinearCut& cut) const {
  return to_pool_cut(cut, [this](const VarRef& r) { return vars_.column(r); });
}

int MasterBuilder::add_cut_row(const LinearCut& cut) {
  lp_.add_row(pool_cut(cut).row);
  ++static_counts_[cut.origin];
  return lp_.num_rows() - 1;
}

long MasterBuilder::static_rows(CutOrigin origin) const {
  auto it = static_counts_.find(origin);
  return it == static_counts_.end() ? 0 : it->second;
}

void MasterBuilder::add_constraints(const LinearConstraintSet& constraints) {
  for (int p = 0; p < constraints.num_rows(); ++p) {
    LpRow row;
    row.sense = RowSense::kLessEqual;
    row.rhs = constraints.b[p];
    for (int i = 0; i < constraints.num_vars(); ++i) {
      const double a = constraints.a(p, i);
      if (a == 0.0) continue;
      const int j = vars_.column(VarRef::X(i));
      if (j < 0) throw DimensionError("constraint references a missing product");
      row.terms.emplace_back(j, a);
    }
    lp_.add_row(std::move(row));
  }
}

namespace {

double violation(const LinearConstraintSet& c, const Assortment& x) {
  double total = 0.0;
  for (int p = 0; p < c.num_rows(); ++p) {
    double lhs = 0.0;
    for (int i = 0; i < c.num_vars(); ++i)
      if (x[i]) lhs += c.a(p, i);
    total += std::max(0.0, lhs - c.b[p]);
  }
  return total;
}

bool feasible(const LinearConstraintSet& c, const Assortment& x) {
  return c.empty() || violation(c, x) <= 1e-9;
}

// Adds products one at a time while revenue improves.
Assortment greedy_from(const RevenueFn& revenue, Assortment cur,
                       const LinearConstraintSet& constraints) {
  const int m = cur.size();
  bool cur_ok = feasible(constraints, cur);
  double cur_val = cur_ok ? revenue(cur) : -1.0;
  for (int step = 0; step < m; ++step) {
    int best_j = -1;
    double best_val = cur_ok ? cur_val : -1.0;
    double best_viol = violation(constraints, cur);
    for (int j = 0; j < m; ++j) {
      if (cur[j]) continue;
      cur.set(j, true);
      if (feasible(constraints, cur)) {
        const double v = revenue(cur);
        if (v > best_val + 1e-15 || (!cur_ok && best_j < 0)) {
          best_val = v;
          best_j = j;
          best_viol = 0.0;
        }
      } else if (!cur_ok) {
        const double viol = violation(constraints, cur);
        if (best_j < 0 && viol < best_viol) {
          best_viol = viol;
          best_j = j;
        }
      }
      cur.set(j, false);
    }
    if (best_j < 0) break;
    cur.set(best_j, true);
    cur_ok = feasible(constraints, cur);
    if (cur_ok) cur_val = revenue(cur);
  }
  return cur;
}

}  // namespace

std::optional<Assortment> greedy_assortment(const RevenueFn& revenue, int m,
                                            const LinearConstraintSet& constraints) {
  Assortment s = greedy_from(revenue, Assortment(m), constraints);
  if (!feasible(constraints, s)) return std::nullopt;
  return s;
}

std::optional<Assortment> rounding_assortment(const RevenueFn& revenue,
                                              std::span<const double> lp_x,
                                              const LinearConstraintSet& constraints) {
  const int m = static_cast<int>(lp_x.size());
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return lp_x[a] > lp_x[b]; });
  Assortment cur(m);
  std::optional<Assortment> best;
  double best_val = -1.0;
  for (int k = 0; k <= m; ++k) {
    if (k > 0) {
      if (lp_x[order[k - 1]] < 1e-9) break;
      cur.set(order[k - 1], true);
    }
    if (!feasible(constraints, cur)) continue;
    const double v = revenue(cur);
    if (v > best_val) {
      best_val = v;
      best = cur;
    }
  }
  if (!best) return std::nullopt;
  Assortment improved = greedy_from(revenue, *best, constraints);
  if (feasible(constraints, improved) && revenue(improved) > best_val) return improved;
  return best;
}

}  // namespace gnlopt
