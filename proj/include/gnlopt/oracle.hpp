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

// Brute-force ground truth. Nothing here uses the LP kernel or the
// branch-and-cut code; feasibility is checked row by row and objectives come
// straight from the choice model. Ties keep the first candidate in
// enumeration order.

#ifndef GNLOPT_ORACLE_HPP_
#define GNLOPT_ORACLE_HPP_

#include <functional>
#include <utility>
#include <vector>

#include "gnlopt/choice_model.hpp"
#include "gnlopt/pricing.hpp"

namespace gnlopt {

struct OracleResult {
  bool feasible = false;
  Assortment best;
  std::vector<double> prices;  // price per product (pricing oracles)
  std::vector<int> levels;     // ladder level per product, -1 when absent
  double objective = 0.0;
  long evaluated = 0;
};

inline constexpr int kMaxEnumeratedProducts = 24;
inline constexpr long kMaxPricePatterns = 1000000;

// Every feasible x in {0,1}^m; m <= 24.
OracleResult enumerate_assortments(const GnlModel& model,
                                   const LinearConstraintSet& constraints);
OracleResult enumerate_assortments(const MgnlModel& mixed,
                                   const LinearConstraintSet& constraints);
// Revenue under the zero-opt-out convention: an empty nest without opt-out
// weight contributes nothing.
OracleResult enumerate_assortments_zero_optout(const GnlModel& model,
                                               const LinearConstraintSet& constraints);

// Every price-or-absent pattern; prod_i (L_i + 1) <= 10^6. The constraints
// follow the column conventions of lift_constraints.
OracleResult enumerate_jap_dp(const GnlModel& shell, const PriceLadder& ladder,
                              const LinearConstraintSet& constraints);

// Best prices for a fixed assortment. Up to four offered products are
// searched on the full tensor grid with grid_n points per axis; larger
// supports use cyclic per-coordinate grids from `starts` random points. The
// best grid point is then refined by repeated local grid zooming.
// Constraints follow cp_feasible.
OracleResult grid_multistart_prices(const GnlModel& shell, const PriceBounds& bounds,
                                    const Assortment& x, int grid_n, int starts,
                                    const LinearConstraintSet& constraints = {},
                                    std::uint64_t seed = 1);

// grid_multistart_prices over every feasible assortment (m <= 24).
OracleResult enumerate_jap_cp(const GnlModel& shell, const PriceBounds& bounds,
                              const LinearConstraintSet& constraints, int grid_n,
                              int starts, std::uint64_t seed = 1);

// Grid points of f on [a, b] strictly above their neighbours; an endpoint
// counts when it is strictly above its single neighbour.
std::vector<std::pair<double, double>> local_maxima_scan(
    const std::function<double(double)>& f, double a, double b, int grid_n);

}  // namespace gnlopt

#endif  // GNLOPT_ORACLE_HPP_
