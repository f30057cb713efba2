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

// Generalized nested logit (GNL) and mixed GNL choice models together with
// their forward evaluation: nest weights, choice probabilities, expected
// revenue and the set functions used by the cut generators.

#ifndef GNLOPT_CHOICE_MODEL_HPP_
#define GNLOPT_CHOICE_MODEL_HPP_

#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace gnlopt {

// One customer segment. Weights are stored already exponentiated, so
// v(i, n) is the attraction of product i inside nest n.
struct GnlModel {
  Eigen::VectorXd v0;     // opt-out weight per nest
  Eigen::MatrixXd v;      // products x nests
  Eigen::MatrixXd alpha;  // products x nests, membership weights
  Eigen::VectorXd sigma;  // dissimilarity per nest, in (0, 1]
  Eigen::VectorXd r;      // revenue per product

  int num_products() const { return static_cast<int>(r.size()); }
  int num_nests() const { return static_cast<int>(sigma.size()); }
};

struct MgnlModel {
  std::vector<GnlModel> segments;
  Eigen::VectorXd theta;  // arrival probability per segment

  int num_segments() const { return static_cast<int>(segments.size()); }
  int num_products() const {
    return segments.empty() ? 0 : segments.front().num_products();
  }
};

// A 0/1 offer vector over the products.
class Assortment {
 public:
  Assortment() = default;
  explicit Assortment(int m) : bits_(m, 0) {}
  explicit Assortment(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {}

  static Assortment FromIndices(int m, std::initializer_list<int> indices);
  static Assortment FromIndices(int m, const std::vector<int>& indices);
  static Assortment FromMask(int m, std::uint64_t mask);
  // Keeps the entries of a relaxed vector above 0.5.
  static Assortment FromValues(std::span<const double> values);

  int size() const { return static_cast<int>(bits_.size()); }
  bool operator[](int i) const { return bits_[i] != 0; }
  void set(int i, bool on) { bits_[i] = on ? 1 : 0; }
  int count() const;
  std::vector<int> support() const;
  std::vector<double> as_doubles() const;
  const std::vector<std::uint8_t>& bits() const { return bits_; }

  friend bool operator==(const Assortment&, const Assortment&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

// Rows a * var <= b.
struct LinearConstraintSet {
  Eigen::MatrixXd a;
  Eigen::VectorXd b;

  int num_rows() const { return static_cast<int>(b.size()); }
  int num_vars() const { return static_cast<int>(a.cols()); }
  bool empty() const { return b.size() == 0; }
  bool satisfied_by(std::span<const double> var, double tol = 1e-9) const;
  bool satisfied_by(const Assortment& x, double tol = 1e-9) const;

  static LinearConstraintSet None(int d);
};

// exp(e * log(w)); throws DegenerateNestError when w is below 1e-300.
double pos_pow(double w, double e);

std::vector<std::string> validate_model(const GnlModel& model);
std::vector<std::string> validate_mixed(const MgnlModel& mixed);
// Throws ModelError listing all violations. The standard model also needs a
// strictly positive opt-out weight in every nest.
void require_valid(const GnlModel& model, bool allow_zero_optout = false);
void require_valid(const MgnlModel& mixed);

Eigen::VectorXd inclusive_value(const GnlModel& model, const Assortment& x);
Eigen::VectorXd inclusive_value(const GnlModel& model,
                                std::span<const double> x);
Eigen::VectorXd nest_choice_prob(const GnlModel& model, const Assortment& x);
Eigen::VectorXd product_choice_prob(const GnlModel& model, const Assortment& x);
double no_purchase_prob(const GnlModel& model, const Assortment& x);
double expected_revenue(const GnlModel& model, const Assortment& x);
double mgnl_expected_revenue(const MgnlModel& mixed, const Assortment& x);
double min_objective(const GnlModel& model, const Assortment& x, double beta);

// Revenue when some nests have no opt-out weight; an empty nest of that kind
// contributes nothing to numerator or denominator.
double zero_optout_expected_revenue(const GnlModel& model, const Assortment& x);

// Nest-level set functions: W^(sigma-1), W^sigma, (sigma-1) log W and
// log of the summed nest powers.
double set_H(const GnlModel& model, int n, const Assortment& s);
double set_K(const GnlModel& model, int n, const Assortment& s);
double set_Y(const GnlModel& model, int n, const Assortment& s);
double set_Z(const GnlModel& model, const Assortment& s);
// Same functions on relaxed points of [0,1]^m.
double relaxed_H(const GnlModel& model, int n, std::span<const double> x);
double relaxed_K(const GnlModel& model, int n, std::span<const double> x);

// log sum_n U_n^sigma_n with empty zero-opt-out nests counted as 0.
double zero_optout_set_Z(const GnlModel& model, const Assortment& s);

}  // namespace gnlopt

#endif  // GNLOPT_CHOICE_MODEL_HPP_
