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

// Linear cut families for the min-form reformulations: tangent
// (outer-approximation) cuts of the convex and concave nest terms, cuts from
// submodular set functions and McCormick rows for products of a bounded
// variable with a binary.
//
// Cuts are written over symbolic variables (VarRef); a master problem maps
// them to LP columns.

#ifndef GNLOPT_CUTS_HPP_
#define GNLOPT_CUTS_HPP_

#include <cmath>
#include <compare>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gnlopt/choice_model.hpp"

namespace gnlopt {

enum class VarFamily : std::uint8_t {
  kX,  // product offered
  kW,  // nest weight in the numerator
  kU,  // nest weight in the denominator (zero-opt-out path)
  kH,  // W^(sigma-1)
  kK,  // W^sigma
  kY,  // (sigma-1) log W
  kZ,  // log sum W^sigma
  kT,  // exp(y - z)
  kS,  // product of a nest term with x_i
};

struct VarRef {
  VarFamily family = VarFamily::kX;
  int segment = 0;
  int index = 0;   // product for kX, nest otherwise
  int index2 = 0;  // product for kS

  friend auto operator<=>(const VarRef&, const VarRef&) = default;

  static VarRef X(int i) { return {VarFamily::kX, 0, i, 0}; }
  static VarRef W(int n) { return {VarFamily::kW, 0, n, 0}; }
  static VarRef U(int n) { return {VarFamily::kU, 0, n, 0}; }
  static VarRef H(int n) { return {VarFamily::kH, 0, n, 0}; }
  static VarRef K(int n) { return {VarFamily::kK, 0, n, 0}; }
  static VarRef Y(int n) { return {VarFamily::kY, 0, n, 0}; }
  static VarRef Z() { return {VarFamily::kZ, 0, 0, 0}; }
  static VarRef T(int n) { return {VarFamily::kT, 0, n, 0}; }
  static VarRef S(int n, int i) { return {VarFamily::kS, 0, n, i}; }
};

std::string to_string(const VarRef& ref);

enum class CutOrigin : std::uint8_t {
  kOaH,
  kOaK,
  kOaExp,
  kOaLogW,
  kOaLogSum,
  kOaP5,
  kScZ,
  kScY,
  kScH,
  kScK,
  kMcCormick,
  kOther,
};

const char* to_string(CutOrigin origin);
bool is_outer_approximation(CutOrigin origin);
bool is_submodular(CutOrigin origin);

enum class CutSense : std::uint8_t { kLessEqual, kGreaterEqual };

struct LinearCut {
  std::vector<std::pair<VarRef, double>> coeffs;  // sorted, merged
  double rhs = 0.0;
  CutSense sense = CutSense::kLessEqual;
  CutOrigin origin = CutOrigin::kOther;

  // Positive when satisfied.
  double slack(const std::function<double(const VarRef&)>& value) const;
  double coefficient(const VarRef& ref) const;
  // Moves every non-product variable to segment t.
  LinearCut with_segment(int t) const;
};

// Appends a term unless its coefficient is exactly zero.
void add_term(LinearCut& cut, const VarRef& ref, double coef);
// Sorts the terms, merges duplicates and drops zero sums.
void normalize(LinearCut& cut);

struct VarBounds {
  Eigen::VectorXd w_lo, w_hi;
  Eigen::VectorXd h_lo, h_hi;
  Eigen::VectorXd k_lo, k_hi;
  Eigen::VectorXd y_lo, y_hi;
  double z_lo = 0.0, z_hi = 0.0;
  Eigen::VectorXd t_lo, t_hi;
};

double choose_beta(const GnlModel& model);
double choose_beta(const MgnlModel& mixed);

// floors, when non-empty, replace the lower nest weight of nests with a zero
// opt-out weight.
VarBounds variable_bounds(const GnlModel& model, double beta,
                          std::span<const double> floors = {});

// Bounds valid for every offered set S with inner <= S <= outer; all the
// bounded quantities are monotone in S.
VarBounds set_bounds(const GnlModel& model, const Assortment& inner,
                     const Assortment& outer, std::span<const double> floors = {});

LinearCut oa_cut_H(const GnlModel& model, int n, std::span<const double> x0);
LinearCut oa_cut_K(const GnlModel& model, int n, std::span<const double> x0);
LinearCut oa_cut_exp(int n, double y0, double z0);
LinearCut oa_cut_logW(const GnlModel& model, int n, double w0);
// weight selects W (standard) or U (zero-opt-out denominator).
LinearCut oa_cut_logsum(const GnlModel& model, std::span<const double> w0,
                        VarFamily weight = VarFamily::kW);
LinearCut oa_cut_prop5(std::span<const double> sigma, std::span<const double> y0);

using SetFunction = std::function<double(const Assortment&)>;

// target <= f(S0) + sum_{j not in S0} rho_j(S0) x_j
//                 - sum_{j in S0} rho_j(all minus j) (1 - x_j)
// for submodular f.
LinearCut submodular_upper_cut(const SetFunction& f, int m, const Assortment& s0,
                               const VarRef& target, CutOrigin origin);
// Mirror image for supermodular f, built from -f.
LinearCut supermodular_lower_cut(const SetFunction& f, int m,
                                 const Assortment& s0, const VarRef& target,
                                 CutOrigin origin);

LinearCut submodular_cut_Z(const GnlModel& model, const Assortment& s0);
LinearCut supermodular_cut_Y(const GnlModel& model, int n, const Assortment& s0);
LinearCut supermodular_cut_H(const GnlModel& model, int n, const Assortment& s0);
LinearCut submodular_cut_K(const GnlModel& model, int n, const Assortment& s0);

// The four envelope rows of s = h x for x binary and h in [h_lo, h_hi].
std::vector<LinearCut> mccormick(const VarRef& s, const VarRef& h,
                                 const VarRef& x, double h_lo, double h_hi);

// Relative violation test shared by the separators.
inline bool violates(double lhs_minus_rhs_bad, double rhs) {
  return lhs_minus_rhs_bad > 1e-6 * (1.0 + std::abs(rhs));
}

}  // namespace gnlopt

#endif  // GNLOPT_CUTS_HPP_
