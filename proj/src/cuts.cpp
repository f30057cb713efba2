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

#include "gnlopt/cuts.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gnlopt/errors.hpp"

namespace gnlopt {

std::string to_string(const VarRef& ref) {
  static const char* kNames[] = {"x", "W", "U", "h", "k", "y", "z", "t", "s"};
  std::ostringstream os;
  if (ref.segment > 0 && ref.family != VarFamily::kX) os << "g" << ref.segment << ".";
  os << kNames[static_cast<int>(ref.family)];
  switch (ref.family) {
    case VarFamily::kZ:
      break;
    case VarFamily::kS:
      os << "[" << ref.index << "," << ref.index2 << "]";
      break;
    default:
      os << "[" << ref.index << "]";
  }
  return os.str();
}

const char* to_string(CutOrigin origin) {
  switch (origin) {
    case CutOrigin::kOaH: return "OA_H";
    case CutOrigin::kOaK: return "OA_K";
    case CutOrigin::kOaExp: return "OA_EXP";
    case CutOrigin::kOaLogW: return "OA_LOGW";
    case CutOrigin::kOaLogSum: return "OA_LOGSUM";
    case CutOrigin::kOaP5: return "OA_P5";
    case CutOrigin::kScZ: return "SC_Z";
    case CutOrigin::kScY: return "SC_Y";
    case CutOrigin::kScH: return "SC_H";
    case CutOrigin::kScK: return "SC_K";
    case CutOrigin::kMcCormick: return "MCCORMICK";
    case CutOrigin::kOther: return "OTHER";
  }
  return "OTHER";
}

bool is_outer_approximation(CutOrigin origin) {
  switch (origin) {
    case CutOrigin::kOaH:
    case CutOrigin::kOaK:
    case CutOrigin::kOaExp:
    case CutOrigin::kOaLogW:
    case CutOrigin::kOaLogSum:
    case CutOrigin::kOaP5:
      return true;
    default:
      return false;
  }
}

bool is_submodular(CutOrigin origin) {
  switch (origin) {
    case CutOrigin::kScZ:
    case CutOrigin::kScY:
    case CutOrigin::kScH:
    case CutOrigin::kScK:
      return true;
    default:
      return false;
  }
}

double LinearCut::slack(const std::function<double(const VarRef&)>& value) const {
  double lhs = 0.0;
  for (const auto& [ref, c] : coeffs) lhs += c * value(ref);
  return sense == CutSense::kLessEqual ? rhs - lhs : lhs - rhs;
}

double LinearCut::coefficient(const VarRef& ref) const {
  auto it = std::lower_bound(
      coeffs.begin(), coeffs.end(), ref,
      [](const auto& term, const VarRef& r) { return term.first < r; });
  return (it != coeffs.end() && it->first == ref) ? it->second : 0.0;
}

LinearCut LinearCut::with_segment(int t) const {
  LinearCut out = *this;
  for (auto& [ref, c] : out.coeffs)
    if (ref.family != VarFamily::kX) ref.segment = t;
  normalize(out);
  return out;
}

void add_term(LinearCut& cut, const VarRef& ref, double coef) {
  if (coef == 0.0) return;
  cut.coeffs.emplace_back(ref, coef);
}

void normalize(LinearCut& cut) {
  std::sort(cut.coeffs.begin(), cut.coeffs.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::pair<VarRef, double>> merged;
  for (const auto& term : cut.coeffs) {
    if (!merged.empty() && merged.back().first == term.first)
      merged.back().second += term.second;
    else
      merged.push_back(term);
  }
  std::erase_if(merged, [](const auto& t) { return t.second == 0.0; });
  cut.coeffs = std::move(merged);
}

double choose_beta(const GnlModel& model) {
  const double rmax = model.r.size() ? model.r.maxCoeff() : 0.0;
  return rmax + std::max(1.0, 0.01 * rmax);
}

double choose_beta(const MgnlModel& mixed) {
  double rmax = 0.0;
  for (const auto& seg : mixed.segments)
    if (seg.r.size()) rmax = std::max(rmax, seg.r.maxCoeff());
  return rmax + std::max(1.0, 0.01 * rmax);
}

VarBounds variable_bounds(const GnlModel& model, double /*beta*/,
                          std::span<const double> floors) {
  const int m = model.num_products();
  return set_bounds(model, Assortment(m),
                    Assortment(std::vector<std::uint8_t>(m, 1)), floors);
}

VarBounds set_bounds(const GnlModel& model, const Assortment& inner,
                     const Assortment& outer, std::span<const double> floors) {
  const int nn = model.num_nests();
  const Eigen::VectorXd u_lo = inclusive_value(model, inner);
  const Eigen::VectorXd u_hi = inclusive_value(model, outer);
  VarBounds b;
  b.w_lo = u_lo;
  b.w_hi = u_hi;
  for (int n = 0; n < nn; ++n) {
    if (model.v0[n] > 0.0) continue;
    if (floors.empty() || !(floors[n] > 0.0))
      throw DegenerateNestError("nest " + std::to_string(n) +
                                " has zero opt-out weight and no floor");
    b.w_lo[n] = std::max(b.w_lo[n], floors[n]);
    b.w_hi[n] = std::max(b.w_hi[n], floors[n]);
  }
  b.h_lo.resize(nn);
  b.h_hi.resize(nn);
  b.k_lo.resize(nn);
  b.k_hi.resize(nn);
  b.y_lo.resize(nn);
  b.y_hi.resize(nn);
  double sum_lo = 0.0;
  double sum_hi = 0.0;
  for (int n = 0; n < nn; ++n) {
    const double s = model.sigma[n];
    b.h_lo[n] = pos_pow(b.w_hi[n], s - 1.0);
    b.h_hi[n] = pos_pow(b.w_lo[n], s - 1.0);
    b.k_lo[n] = pos_pow(b.w_lo[n], s);
    b.k_hi[n] = pos_pow(b.w_hi[n], s);
    b.y_lo[n] = (s - 1.0) * std::log(b.w_hi[n]);
    b.y_hi[n] = (s - 1.0) * std::log(b.w_lo[n]);
    // The log-sum term runs over the denominator weights, which may vanish.
    if (u_lo[n] > 0.0) sum_lo += pos_pow(u_lo[n], s);
    if (u_hi[n] > 0.0) sum_hi += pos_pow(u_hi[n], s);
  }
  if (!(sum_lo > 0.0))
    throw DegenerateNestError("no nest has a positive opt-out weight");
  b.z_lo = std::log(sum_lo);
  b.z_hi = std::log(sum_hi);
  b.t_lo.resize(nn);
  b.t_hi.resize(nn);
  for (int n = 0; n < nn; ++n) {
    b.t_lo[n] = std::exp(b.y_lo[n] - b.z_hi);
    b.t_hi[n] = std::exp(b.y_hi[n] - b.z_lo);
  }
  return b;
}

LinearCut oa_cut_H(const GnlModel& model, int n, std::span<const double> x0) {
  const double w0 = inclusive_value(model, x0)[n];
  const double s = model.sigma[n];
  const double h0 = pos_pow(w0, s - 1.0);
  LinearCut cut;
  cut.sense = CutSense::kGreaterEqual;
  cut.origin = CutOrigin::kOaH;
  add_term(cut, VarRef::H(n), 1.0);
  double rhs = h0;
  if (s != 1.0) {
    const double scale = (s - 1.0) * pos_pow(w0, s - 2.0);
    for (int i = 0; i < model.num_products(); ++i) {
      const double g = scale * model.alpha(i, n) * model.v(i, n);
      if (g == 0.0) continue;
      add_term(cut, VarRef::X(i), -g);
      rhs -= g * x0[i];
    }
  }
  cut.rhs = rhs;
  normalize(cut);
  return cut;
}

LinearCut oa_cut_K(const GnlModel& model, int n, std::span<const double> x0) {
  const double w0 = inclusive_value(model, x0)[n];
  const double s = model.sigma[n];
  const double k0 = pos_pow(w0, s);
  const double scale = s * pos_pow(w0, s - 1.0);
  LinearCut cut;
  cut.sense = CutSense::kLessEqual;
  cut.origin = CutOrigin::kOaK;
  add_term(cut, VarRef::K(n), 1.0);
  double rhs = k0;
  for (int i = 0; i < model.num_products(); ++i) {
    const double g = scale * model.alpha(i, n) * model.v(i, n);
    if (g == 0.0) continue;
    add_term(cut, VarRef::X(i), -g);
    rhs -= g * x0[i];
  }
  cut.rhs = rhs;
  normalize(cut);
  return cut;
}

LinearCut oa_cut_exp(int n, double y0, double z0) {
  const double a = y0 - z0;
  if (!std::isfinite(a) || a > 700.0)
    throw InvalidArgument("exponential tangent point out of range (scaled-error)");
  const double ea = std::exp(a);
  LinearCut cut;
  cut.sense = CutSense::kGreaterEqual;
  cut.origin = CutOrigin::kOaExp;
  add_term(cut, VarRef::T(n), 1.0);
  add_term(cut, VarRef::Y(n), -ea);
  add_term(cut, VarRef::Z(), ea);
  cut.rhs = ea * (1.0 - a);
  normalize(cut);
  return cut;
}

LinearCut oa_cut_logW(const GnlModel& model, int n, double w0) {
  if (!(w0 > 0.0)) throw InvalidArgument("log tangent needs a positive weight");
  const double s = model.sigma[n];
  LinearCut cut;
  cut.sense = CutSense::kGreaterEqual;
  cut.origin = CutOrigin::kOaLogW;
  add_term(cut, VarRef::Y(n), 1.0);
  add_term(cut, VarRef::W(n), -(s - 1.0) / w0);
  cut.rhs = (s - 1.0) * (std::log(w0) - 1.0);
  normalize(cut);
  return cut;
}

LinearCut oa_cut_logsum(const GnlModel& model, std::span<const double> w0,
                        VarFamily weight) {
  const int nn = model.num_nests();
  if (static_cast<int>(w0.size()) != nn)
    throw DimensionError("tangent point length differs from nest count");
  double total = 0.0;
  std::vector<double> k(nn);
  for (int n = 0; n < nn; ++n) {
    if (!(w0[n] > 0.0))
      throw InvalidArgument("log-sum tangent needs positive weights");
    k[n] = pos_pow(w0[n], model.sigma[n]);
    total += k[n];
  }
  LinearCut cut;
  cut.sense = CutSense::kLessEqual;
  cut.origin = CutOrigin::kOaLogSum;
  add_term(cut, VarRef::Z(), 1.0);
  double rhs = std::log(total);
  for (int n = 0; n < nn; ++n) {
    const double c = model.sigma[n] * k[n] / w0[n] / total;
    add_term(cut, VarRef{weight, 0, n, 0}, -c);
    rhs -= c * w0[n];
  }
  cut.rhs = rhs;
  normalize(cut);
  return cut;
}

LinearCut oa_cut_prop5(std::span<const double> sigma, std::span<const double> y0) {
  const int nn = static_cast<int>(sigma.size());
  if (static_cast<int>(y0.size()) != nn)
    throw DimensionError("tangent point length differs from nest count");
  std::vector<double> a(nn), e(nn);
  double emax = -INFINITY;
  for (int n = 0; n < nn; ++n) {
    if (!(sigma[n] < 1.0))
      throw InvalidArgument("log-sum-exp bound needs every sigma below 1");
    a[n] = sigma[n] / (sigma[n] - 1.0);
    e[n] = a[n] * y0[n];
    emax = std::max(emax, e[n]);
  }
  double total = 0.0;
  for (int n = 0; n < nn; ++n) total += std::exp(e[n] - emax);
  const double f0 = emax + std::log(total);
  LinearCut cut;
  cut.sense = CutSense::kGreaterEqual;
  cut.origin = CutOrigin::kOaP5;
  add_term(cut, VarRef::Z(), 1.0);
  double rhs = f0;
  for (int n = 0; n < nn; ++n) {
    const double g = a[n] * std::exp(e[n] - emax) / total;
    add_term(cut, VarRef::Y(n), -g);
    rhs -= g * y0[n];
  }
  cut.rhs = rhs;
  normalize(cut);
  return cut;
}

namespace {

// Marginals rho_j(S0) for j outside S0 and rho_j(all minus j) for j in S0.
struct Marginals {
  double f0 = 0.0;
  std::vector<double> rho;
};

Marginals marginals(const SetFunction& f, int m, const Assortment& s0) {
  if (s0.size() != m) throw DimensionError("anchor set dimension mismatch");
  Marginals out;
  out.f0 = f(s0);
  out.rho.assign(m, 0.0);
  Assortment all(std::vector<std::uint8_t>(m, 1));
  double f_all = 0.0;
  bool have_all = false;
  for (int j = 0; j < m; ++j) {
    if (!s0[j]) {
      Assortment s = s0;
      s.set(j, true);
      out.rho[j] = f(s) - out.f0;
    } else {
      if (!have_all) {
        f_all = f(all);
        have_all = true;
      }
      Assortment s = all;
      s.set(j, false);
      out.rho[j] = f_all - f(s);
    }
  }
  return out;
}

}  // namespace

LinearCut submodular_upper_cut(const SetFunction& f, int m, const Assortment& s0,
                               const VarRef& target, CutOrigin origin) {
  const Marginals mg = marginals(f, m, s0);
  LinearCut cut;
  cut.sense = CutSense::kLessEqual;
  cut.origin = origin;
  add_term(cut, target, 1.0);
  double rhs = mg.f0;
  for (int j = 0; j < m; ++j) {
    // Both branches put -rho_j x_j on the left; members also shift the rhs.
    add_term(cut, VarRef::X(j), -mg.rho[j]);
    if (s0[j]) rhs -= mg.rho[j];
  }
  cut.rhs = rhs;
  normalize(cut);
  return cut;
}

LinearCut supermodular_lower_cut(const SetFunction& f, int m,
                                 const Assortment& s0, const VarRef& target,
                                 CutOrigin origin) {
  const Marginals mg = marginals(f, m, s0);
  LinearCut cut;
  cut.sense = CutSense::kGreaterEqual;
  cut.origin = origin;
  add_term(cut, target, 1.0);
  double rhs = mg.f0;
  for (int j = 0; j < m; ++j) {
    add_term(cut, VarRef::X(j), -mg.rho[j]);
    if (s0[j]) rhs -= mg.rho[j];
  }
  cut.rhs = rhs;
  normalize(cut);
  return cut;
}

LinearCut submodular_cut_Z(const GnlModel& model, const Assortment& s0) {
  return submodular_upper_cut(
      [&](const Assortment& s) { return set_Z(model, s); },
      model.num_products(), s0, VarRef::Z(), CutOrigin::kScZ);
}

LinearCut supermodular_cut_Y(const GnlModel& model, int n, const Assortment& s0) {
  return supermodular_lower_cut(
      [&](const Assortment& s) { return set_Y(model, n, s); },
      model.num_products(), s0, VarRef::Y(n), CutOrigin::kScY);
}

LinearCut supermodular_cut_H(const GnlModel& model, int n, const Assortment& s0) {
  return supermodular_lower_cut(
      [&](const Assortment& s) { return set_H(model, n, s); },
      model.num_products(), s0, VarRef::H(n), CutOrigin::kScH);
}

LinearCut submodular_cut_K(const GnlModel& model, int n, const Assortment& s0) {
  return submodular_upper_cut(
      [&](const Assortment& s) { return set_K(model, n, s); },
      model.num_products(), s0, VarRef::K(n), CutOrigin::kScK);
}

std::vector<LinearCut> mccormick(const VarRef& s, const VarRef& h,
                                 const VarRef& x, double h_lo, double h_hi) {
  if (!(h_lo <= h_hi)) throw InvalidArgument("McCormick bounds are inverted");
  auto row = [&](CutSense sense, double cs, double ch, double cx, double rhs) {
    LinearCut c;
    c.sense = sense;
    c.origin = CutOrigin::kMcCormick;
    add_term(c, s, cs);
    add_term(c, h, ch);
    add_term(c, x, cx);
    c.rhs = rhs;
    normalize(c);
    return c;
  };
  return {
      row(CutSense::kGreaterEqual, 1.0, 0.0, -h_lo, 0.0),
      row(CutSense::kLessEqual, 1.0, 0.0, -h_hi, 0.0),
      row(CutSense::kGreaterEqual, 1.0, -1.0, -h_hi, -h_hi),
      row(CutSense::kLessEqual, 1.0, -1.0, -h_lo, -h_lo),
  };
}

}  // namespace gnlopt
