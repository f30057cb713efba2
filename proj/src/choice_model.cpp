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

#include "gnlopt/choice_model.hpp"

#include <cmath>
#include <sstream>

#include "gnlopt/errors.hpp"

namespace gnlopt {

namespace {

constexpr double kDegenerateWeight = 1e-300;

void check_dims(const GnlModel& model, int m) {
  if (m != model.num_products()) {
    std::ostringstream os;
    os << "assortment has " << m << " entries, model has "
       << model.num_products() << " products";
    throw DimensionError(os.str());
  }
}

// Sum of W_n^sigma_n and the per-nest powers; throws on degenerate nests.
struct NestPowers {
  Eigen::VectorXd w;
  Eigen::VectorXd k;  // W^sigma
  Eigen::VectorXd h;  // W^(sigma-1)
  double total = 0.0;
};

NestPowers nest_powers(const GnlModel& model, const Eigen::VectorXd& w) {
  NestPowers p;
  const int nn = model.num_nests();
  p.w = w;
  p.k.resize(nn);
  p.h.resize(nn);
  for (int n = 0; n < nn; ++n) {
    if (w[n] < kDegenerateWeight) {
      throw DegenerateNestError("nest " + std::to_string(n) +
                                " has zero weight; use the zero-opt-out path");
    }
    p.k[n] = pos_pow(w[n], model.sigma[n]);
    p.h[n] = pos_pow(w[n], model.sigma[n] - 1.0);
    p.total += p.k[n];
  }
  return p;
}

}  // namespace

Assortment Assortment::FromIndices(int m, std::initializer_list<int> indices) {
  return FromIndices(m, std::vector<int>(indices));
}

Assortment Assortment::FromIndices(int m, const std::vector<int>& indices) {
  Assortment a(m);
  for (int i : indices) {
    if (i < 0 || i >= m) throw DimensionError("product index out of range");
    a.set(i, true);
  }
  return a;
}

Assortment Assortment::FromMask(int m, std::uint64_t mask) {
  Assortment a(m);
  for (int i = 0; i < m; ++i) a.set(i, (mask >> i) & 1u);
  return a;
}

Assortment Assortment::FromValues(std::span<const double> values) {
  Assortment a(static_cast<int>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) a.set(i, values[i] > 0.5);
  return a;
}

int Assortment::count() const {
  int c = 0;
  for (auto b : bits_) c += b;
  return c;
}

std::vector<int> Assortment::support() const {
  std::vector<int> s;
  for (int i = 0; i < size(); ++i)
    if (bits_[i]) s.push_back(i);
  return s;
}

std::vector<double> Assortment::as_doubles() const {
  return std::vector<double>(bits_.begin(), bits_.end());
}

bool LinearConstraintSet::satisfied_by(std::span<const double> var,
                                       double tol) const {
  if (empty()) return true;
  if (static_cast<int>(var.size()) != num_vars())
    throw DimensionError("constraint set dimension mismatch");
  for (int p = 0; p < num_rows(); ++p) {
    double lhs = 0.0;
    for (int j = 0; j < num_vars(); ++j) lhs += a(p, j) * var[j];
    if (lhs > b[p] + tol) return false;
  }
  return true;
}

bool LinearConstraintSet::satisfied_by(const Assortment& x, double tol) const {
  auto d = x.as_doubles();
  return satisfied_by(d, tol);
}

LinearConstraintSet LinearConstraintSet::None(int d) {
  LinearConstraintSet c;
  c.a.resize(0, d);
  c.b.resize(0);
  return c;
}

double pos_pow(double w, double e) {
  if (e == 0.0) return 1.0;
  if (!(w >= kDegenerateWeight)) {
    throw DegenerateNestError("power of a zero nest weight");
  }
  return std::exp(e * std::log(w));
}

std::vector<std::string> validate_model(const GnlModel& model) {
  std::vector<std::string> out;
  const int m = model.num_products();
  const int nn = model.num_nests();
  if (m <= 0) out.push_back("model has no products");
  if (nn <= 0) out.push_back("model has no nests");
  if (model.v0.size() != nn) out.push_back("v0 length differs from nest count");
  if (model.v.rows() != m || model.v.cols() != nn)
    out.push_back("v must be products x nests");
  if (model.alpha.rows() != m || model.alpha.cols() != nn)
    out.push_back("alpha must be products x nests");
  if (!out.empty()) return out;

  for (int n = 0; n < nn; ++n) {
    const double s = model.sigma[n];
    if (!(s > 0.0 && s <= 1.0))
      out.push_back("sigma[" + std::to_string(n) + "] outside (0,1]");
    if (!(model.v0[n] >= 0.0) || !std::isfinite(model.v0[n]))
      out.push_back("v0[" + std::to_string(n) + "] negative or not finite");
  }
  for (int i = 0; i < m; ++i) {
    double best = 0.0;
    bool ok = true;
    for (int n = 0; n < nn; ++n) {
      const double a = model.alpha(i, n);
      const double v = model.v(i, n);
      if (!(a >= 0.0) || !(v >= 0.0) || !std::isfinite(a) || !std::isfinite(v))
        ok = false;
      else
        best = std::max(best, a * v);
    }
    if (!ok)
      out.push_back("product " + std::to_string(i) +
                    " has a negative or non-finite weight");
    else if (best <= 0.0)
      out.push_back("product " + std::to_string(i) + " belongs to no nest");
    if (!(model.r[i] >= 0.0) || !std::isfinite(model.r[i]))
      out.push_back("r[" + std::to_string(i) + "] negative or not finite");
  }
  return out;
}

std::vector<std::string> validate_mixed(const MgnlModel& mixed) {
  std::vector<std::string> out;
  if (mixed.segments.empty()) {
    out.push_back("mixture has no segments");
    return out;
  }
  if (mixed.theta.size() != mixed.num_segments())
    out.push_back("theta length differs from segment count");
  const int m = mixed.segments.front().num_products();
  double sum = 0.0;
  for (int t = 0; t < mixed.num_segments(); ++t) {
    for (const auto& v : validate_model(mixed.segments[t]))
      out.push_back("segment " + std::to_string(t) + ": " + v);
    if (mixed.segments[t].num_products() != m)
      out.push_back("segment " + std::to_string(t) +
                    " has a different product count");
    if (t < mixed.theta.size()) {
      if (!(mixed.theta[t] > 0.0))
        out.push_back("theta[" + std::to_string(t) + "] not positive");
      sum += mixed.theta[t];
    }
  }
  if (std::abs(sum - 1.0) > 1e-9) out.push_back("theta does not sum to 1");
  return out;
}

namespace {

[[noreturn]] void throw_violations(const std::vector<std::string>& v) {
  std::string msg = "invalid model:";
  for (const auto& s : v) msg += " " + s + ";";
  throw ModelError(msg);
}

}  // namespace

void require_valid(const GnlModel& model, bool allow_zero_optout) {
  auto v = validate_model(model);
  if (v.empty() && !allow_zero_optout) {
    for (int n = 0; n < model.num_nests(); ++n)
      if (!(model.v0[n] > 0.0))
        v.push_back("v0[" + std::to_string(n) + "] must be positive");
  }
  if (!v.empty()) throw_violations(v);
}

void require_valid(const MgnlModel& mixed) {
  auto v = validate_mixed(mixed);
  if (v.empty()) {
    for (int t = 0; t < mixed.num_segments(); ++t)
      for (int n = 0; n < mixed.segments[t].num_nests(); ++n)
        if (!(mixed.segments[t].v0[n] > 0.0))
          v.push_back("segment " + std::to_string(t) + " v0[" +
                      std::to_string(n) + "] must be positive");
  }
  if (!v.empty()) throw_violations(v);
}

Eigen::VectorXd inclusive_value(const GnlModel& model, std::span<const double> x) {
  check_dims(model, static_cast<int>(x.size()));
  Eigen::VectorXd w = model.v0;
  for (int i = 0; i < model.num_products(); ++i) {
    if (x[i] == 0.0) continue;
    for (int n = 0; n < model.num_nests(); ++n)
      w[n] += model.alpha(i, n) * x[i] * model.v(i, n);
  }
  return w;
}

Eigen::VectorXd inclusive_value(const GnlModel& model, const Assortment& x) {
  auto d = x.as_doubles();
  return inclusive_value(model, std::span<const double>(d));
}

Eigen::VectorXd nest_choice_prob(const GnlModel& model, const Assortment& x) {
  const auto p = nest_powers(model, inclusive_value(model, x));
  return p.k / p.total;
}

Eigen::VectorXd product_choice_prob(const GnlModel& model, const Assortment& x) {
  const auto p = nest_powers(model, inclusive_value(model, x));
  Eigen::VectorXd prob = Eigen::VectorXd::Zero(model.num_products());
  for (int i = 0; i < model.num_products(); ++i) {
    if (!x[i]) continue;
    double acc = 0.0;
    for (int n = 0; n < model.num_nests(); ++n)
      acc += p.h[n] * model.alpha(i, n) * model.v(i, n);
    prob[i] = acc / p.total;
  }
  return prob;
}

double no_purchase_prob(const GnlModel& model, const Assortment& x) {
  const auto p = nest_powers(model, inclusive_value(model, x));
  double acc = 0.0;
  for (int n = 0; n < model.num_nests(); ++n) acc += p.h[n] * model.v0[n];
  return acc / p.total;
}

double expected_revenue(const GnlModel& model, const Assortment& x) {
  return model.r.dot(product_choice_prob(model, x));
}

double mgnl_expected_revenue(const MgnlModel& mixed, const Assortment& x) {
  if (mixed.theta.size() != mixed.num_segments())
    throw DimensionError("theta length differs from segment count");
  double f = 0.0;
  for (int t = 0; t < mixed.num_segments(); ++t) {
    if (mixed.segments[t].num_products() != x.size())
      throw DimensionError("segment " + std::to_string(t) +
                           " product count differs from assortment");
    f += mixed.theta[t] * expected_revenue(mixed.segments[t], x);
  }
  return f;
}

double min_objective(const GnlModel& model, const Assortment& x, double beta) {
  if (model.r.size() > 0 && !(beta > model.r.maxCoeff()))
    throw InvalidArgument("beta must exceed every revenue");
  const auto p = nest_powers(model, inclusive_value(model, x));
  double num = 0.0;
  for (int n = 0; n < model.num_nests(); ++n) {
    double inner = beta * model.v0[n];
    for (int i = 0; i < model.num_products(); ++i)
      if (x[i])
        inner += model.alpha(i, n) * (beta - model.r[i]) * model.v(i, n);
    num += p.h[n] * inner;
  }
  return num / p.total;
}

double zero_optout_expected_revenue(const GnlModel& model, const Assortment& x) {
  const Eigen::VectorXd w = inclusive_value(model, x);
  double num = 0.0;
  double den = 0.0;
  for (int n = 0; n < model.num_nests(); ++n) {
    if (w[n] < kDegenerateWeight) continue;
    const double hn = pos_pow(w[n], model.sigma[n] - 1.0);
    den += pos_pow(w[n], model.sigma[n]);
    for (int i = 0; i < model.num_products(); ++i)
      if (x[i]) num += hn * model.alpha(i, n) * model.v(i, n) * model.r[i];
  }
  if (den <= 0.0)
    throw DegenerateNestError("every nest is empty and has no opt-out weight");
  return num / den;
}

double set_H(const GnlModel& model, int n, const Assortment& s) {
  return pos_pow(inclusive_value(model, s)[n], model.sigma[n] - 1.0);
}

double set_K(const GnlModel& model, int n, const Assortment& s) {
  return pos_pow(inclusive_value(model, s)[n], model.sigma[n]);
}

double set_Y(const GnlModel& model, int n, const Assortment& s) {
  const double w = inclusive_value(model, s)[n];
  if (w < kDegenerateWeight) throw DegenerateNestError("log of a zero nest");
  return (model.sigma[n] - 1.0) * std::log(w);
}

double set_Z(const GnlModel& model, const Assortment& s) {
  return std::log(nest_powers(model, inclusive_value(model, s)).total);
}

double relaxed_H(const GnlModel& model, int n, std::span<const double> x) {
  return pos_pow(inclusive_value(model, x)[n], model.sigma[n] - 1.0);
}

double relaxed_K(const GnlModel& model, int n, std::span<const double> x) {
  return pos_pow(inclusive_value(model, x)[n], model.sigma[n]);
}

double zero_optout_set_Z(const GnlModel& model, const Assortment& s) {
  const Eigen::VectorXd w = inclusive_value(model, s);
  double total = 0.0;
  for (int n = 0; n < model.num_nests(); ++n)
    if (w[n] >= kDegenerateWeight) total += pos_pow(w[n], model.sigma[n]);
  if (total <= 0.0) throw DegenerateNestError("log of an empty nest sum");
  return std::log(total);
}

}  // namespace gnlopt
