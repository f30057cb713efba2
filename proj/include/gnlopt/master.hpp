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

// Helpers shared by the assortment masters: symbolic column maps, row
// builders and assortment heuristics.

#ifndef GNLOPT_MASTER_HPP_
#define GNLOPT_MASTER_HPP_

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gnlopt/bnb.hpp"
#include "gnlopt/choice_model.hpp"
#include "gnlopt/cuts.hpp"
#include "gnlopt/lp.hpp"

namespace gnlopt {

// One LP column per symbolic variable.
struct MasterVariables {
  std::map<VarRef, int> columns;
  std::vector<VarRef> refs;  // indexed by column

  int column(const VarRef& ref) const {
    auto it = columns.find(ref);
    return it == columns.end() ? -1 : it->second;
  }
  int size() const { return static_cast<int>(refs.size()); }
};

class MasterBuilder {
 public:
  int add_column(const VarRef& ref, double cost, double lower, double upper);
  // Returns the row index.
  int add_cut_row(const LinearCut& cut);
  void add_row(LpRow row) { lp_.add_row(std::move(row)); }
  // Appends a . x <= b over the product columns.
  void add_constraints(const LinearConstraintSet& constraints);
  void mark_binary(int column) { binaries_.push_back(column); }
  PoolCut pool_cut(const LinearCut& cut) const;

  LpProblem& lp() { return lp_; }
  const LpProblem& lp() const { return lp_; }
  const std::vector<int>& binaries() const { return binaries_; }
  const MasterVariables& vars() const { return vars_; }
  long static_rows(CutOrigin origin) const;

 private:
  LpProblem lp_;
  std::vector<int> binaries_;
  MasterVariables vars_;
  std::map<CutOrigin, long> static_counts_;
};

using RevenueFn = std::function<double(const Assortment&)>;

// Add-one greedy from the empty set under the constraints; returns nothing
// when no feasible set is reached.
std::optional<Assortment> greedy_assortment(const RevenueFn& revenue, int m,
                                            const LinearConstraintSet& constraints);

// Best feasible prefix of the products ordered by decreasing LP value,
// followed by one greedy add pass.
std::optional<Assortment> rounding_assortment(const RevenueFn& revenue,
                                              std::span<const double> lp_x,
                                              const LinearConstraintSet& constraints);

}  // namespace gnlopt

#endif  // GNLOPT_MASTER_HPP_
