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

#include "gnlopt/assortment.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "gnlopt/errors.hpp"

namespace gnlopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

VarRef in_segment(VarRef r, int t) {
  r.segment = t;
  return r;
}

void check_constraints(const LinearConstraintSet& c, int m) {
  if (!c.empty() && c.num_vars() != m)
    throw DimensionError("constraint set must have one column per product");
}

void check_beta(double beta, double rmax) {
  if (!(beta > rmax)) throw InvalidArgument("beta must exceed every revenue");
}

// Rows a.x <= b multiplied by a nonnegative nest variable q_n whose products
// with x_i are the columns s[n,i]: sum_i a_i s[n,i] <= b q_n. Terms of
// products outside the nest are dropped, which is valid only when their
// coefficients are nonnegative.
void add_product_rows(MasterBuilder& b, const GnlModel& g,
                      const LinearConstraintSet& c, VarFamily q, int segment) {
  const int m = g.num_products();
  for (int p = 0; p < c.num_rows(); ++p)
    for (int n = 0; n < g.num_nests(); ++n) {
      LinearCut cut;
      cut.sense = CutSense::kLessEqual;
      cut.rhs = 0.0;
      cut.origin = CutOrigin::kOther;
      bool ok = true, any = false;
      for (int i = 0; i < m && ok; ++i) {
        const double a = c.a(p, i);
        if (a == 0.0) continue;
        if (g.alpha(i, n) * g.v(i, n) > 0.0) {
          add_term(cut, VarRef::S(n, i), a);
          any = true;
        } else if (a < 0.0) {
          ok = false;
        }
      }
      if (!ok || !any) continue;
      add_term(cut, VarRef{q, 0, n, 0}, -c.b[p]);
      normalize(cut);
      if (cut.coeffs.empty()) continue;
      b.add_cut_row(cut.with_segment(segment));
    }
}

// Fixings to the sets every completion lies between.
std::pair<Assortment, Assortment> fixed_sets(std::span<const std::int8_t> fix) {
  const int m = static_cast<int>(fix.size());
  Assortment inner(m), outer(m);
  for (int i = 0; i < m; ++i) {
    inner.set(i, fix[i] == 1);
    outer.set(i, fix[i] != 0);
  }
  return {inner, outer};
}

// Node bounds come from closed-form values; the slack keeps them from
// cutting off points the LP computes with rounding.
void set_column_bounds(LpProblem& lp, int j, double lo, double hi) {
  lp.lower[j] = lo - 1e-11 * (1.0 + std::abs(lo));
  lp.upper[j] = hi + 1e-11 * (1.0 + std::abs(hi));
}

struct McCormickRows {
  int n = 0;
  int i = 0;
  std::array<int, 4> rows = {-1, -1, -1, -1};
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::vector<double> product_values(const MasterBuilder& b, std::span<const double> v,
                                   int m) {
  std::vector<double> x(m);
  for (int i = 0; i < m; ++i) x[i] = v[b.vars().column(VarRef::X(i))];
  return x;
}

double dot_cost(const LpProblem& lp, const std::vector<double>& v) {
  double s = 0.0;
  for (int j = 0; j < lp.num_cols(); ++j) s += lp.cost[j] * v[j];
  return s;
}

void fill_revenue_fields(AssortmentResult& res, const RevenueFn& revenue) {
  res.feasible = res.solve.has_incumbent;
  res.termination = res.solve.termination;
  if (!res.feasible) {
    res.revenue = 0.0;
    res.bound = res.solve.bound == kInf ? -kInf : res.beta - res.solve.bound;
    res.gap = kInf;
    return;
  }
  res.revenue = revenue(res.assortment);
  res.bound = std::max(res.revenue, res.beta - res.solve.bound);
  res.gap = (res.bound - res.revenue) / std::max(1.0, std::abs(res.revenue));
}

// ---------------------------------------------------------------------------
// Log-transformed master over one or more customer segments.

class ConvexMaster {
 public:
  ConvexMaster(std::vector<const GnlModel*> segments, std::vector<double> theta,
               const LinearConstraintSet& constraints, double beta,
               const AssortConfig& config, bool zero_optout, RevenueFn revenue)
      : segs_(std::move(segments)), theta_(std::move(theta)), cons_(constraints),
        beta_(beta), cfg_(config), zero_(zero_optout), revenue_(std::move(revenue)) {
    m_ = segs_.front()->num_products();
    Build();
  }

  AssortmentResult Solve();

 private:
  struct SegData {
    std::vector<double> floors;
    VarBounds b;
    std::vector<McCormickRows> mc;
  };

  void Build();
  void Tighten(std::span<const std::int8_t> fix, LpProblem& lp) const;
  void RootCuts(CutPool& pool) const;
  SeparationResult Separate(std::span<const double> v, bool integral) const;
  Candidate Exact(const Assortment& x) const;
  double Val(std::span<const double> v, const VarRef& r) const {
    return v[b_.vars().column(r)];
  }
  double ZeroY(int t, int n, const Assortment& s) const;
  PoolCut Pool(const LinearCut& c, int t) const {
    return b_.pool_cut(c.with_segment(t));
  }

  std::vector<const GnlModel*> segs_;
  std::vector<double> theta_;
  const LinearConstraintSet& cons_;
  double beta_;
  AssortConfig cfg_;
  bool zero_;
  RevenueFn revenue_;
  int m_ = 0;
  MasterBuilder b_;
  std::vector<SegData> data_;
  bool all_sigma_below_one_ = true;
  // Incumbent cutoff block (single-segment GNL): columns h, k and q = h x in
  // segment cut_seg_, one row sum_n h_n W_n - gap sum_n k_n <= 0 whose gap
  // coefficient follows the best feasible assortment evaluated so far.
  bool cutoff_ = false;
  int cut_seg_ = 0;
  int cutoff_row_ = -1;
  VarBounds cut_bounds_;
  std::vector<McCormickRows> cut_mc_;
  mutable double best_gap_ = kInf;
  void BuildCutoff();
  LpRow CutoffRow(double gap) const;
};

void ConvexMaster::Build() {
  for (int i = 0; i < m_; ++i) {
    const int j = b_.add_column(VarRef::X(i), 0.0, 0.0, 1.0);
    b_.mark_binary(j);
  }
  data_.resize(segs_.size());
  for (std::size_t ts = 0; ts < segs_.size(); ++ts) {
    const int t = static_cast<int>(ts);
    const GnlModel& g = *segs_[t];
    const int nn = g.num_nests();
    SegData& d = data_[t];
    if (zero_) d.floors = zero_optout_floors(g, cfg_.floor_fraction);
    d.b = variable_bounds(g, beta_, d.floors);
    for (int n = 0; n < nn; ++n)
      if (!(g.sigma[n] < 1.0)) all_sigma_below_one_ = false;

    for (int n = 0; n < nn; ++n) {
      b_.add_column(in_segment(VarRef::W(n), t), 0.0, d.b.w_lo[n], d.b.w_hi[n]);
      if (zero_) {
        double u_hi = g.v0[n];
        for (int i = 0; i < m_; ++i) u_hi += g.alpha(i, n) * g.v(i, n);
        b_.add_column(in_segment(VarRef::U(n), t), 0.0, g.v0[n], u_hi);
      }
      b_.add_column(in_segment(VarRef::Y(n), t), 0.0, d.b.y_lo[n], d.b.y_hi[n]);
      b_.add_column(in_segment(VarRef::T(n), t), theta_[t] * beta_ * g.v0[n],
                    d.b.t_lo[n], d.b.t_hi[n]);
    }
    b_.add_column(in_segment(VarRef::Z(), t), 0.0, d.b.z_lo, d.b.z_hi);
    for (int n = 0; n < nn; ++n)
      for (int i = 0; i < m_; ++i) {
        const double av = g.alpha(i, n) * g.v(i, n);
        if (av <= 0.0) continue;
        b_.add_column(in_segment(VarRef::S(n, i), t),
                      theta_[t] * av * (beta_ - g.r[i]), 0.0, d.b.t_hi[n]);
      }

    // Weight definitions.
    const auto col = [&](const VarRef& r) { return b_.vars().column(in_segment(r, t)); };
    for (int n = 0; n < nn; ++n) {
      LpRow def;
      def.sense = RowSense::kEqual;
      def.rhs = g.v0[n];
      def.terms.emplace_back(col(zero_ ? VarRef::U(n) : VarRef::W(n)), 1.0);
      for (int i = 0; i < m_; ++i) {
        const double av = g.alpha(i, n) * g.v(i, n);
        if (av > 0.0) def.terms.emplace_back(b_.vars().column(VarRef::X(i)), -av);
      }
      b_.add_row(std::move(def));
      if (!zero_) continue;
      if (g.v0[n] > 0.0) {
        b_.add_row({{{col(VarRef::W(n)), 1.0}, {col(VarRef::U(n)), -1.0}},
                    RowSense::kEqual, 0.0});
      } else {
        // W = max(U, floor) at binary x.
        const double fl = d.floors[n];
        b_.add_row({{{col(VarRef::W(n)), 1.0}, {col(VarRef::U(n)), -1.0}},
                    RowSense::kGreaterEqual, 0.0});
        for (int i = 0; i < m_; ++i) {
          if (g.alpha(i, n) * g.v(i, n) <= 0.0) continue;
          b_.add_row({{{col(VarRef::W(n)), 1.0},
                       {col(VarRef::U(n)), -1.0},
                       {b_.vars().column(VarRef::X(i)), fl}},
                      RowSense::kLessEqual, fl});
        }
      }
    }
    // Without the normalization row only the lower envelope of s = t x can
    // bind, since s has a positive cost.
    const bool norm = cfg_.use_normalization_row;
    for (int n = 0; n < nn; ++n)
      for (int i = 0; i < m_; ++i) {
        if (g.alpha(i, n) * g.v(i, n) <= 0.0) continue;
        auto rows = mccormick(VarRef::S(n, i), VarRef::T(n), VarRef::X(i),
                              d.b.t_lo[n], d.b.t_hi[n]);
        McCormickRows mr{n, i};
        for (int r : {0, 1, 2, 3})
          if (norm || r == 0 || r == 2)
            mr.rows[r] = b_.add_cut_row(rows[r].with_segment(t));
        d.mc.push_back(mr);
      }
    if (norm) {
      LpRow row;
      row.sense = RowSense::kEqual;
      row.rhs = 1.0;
      for (int n = 0; n < nn; ++n) {
        if (g.v0[n] > 0.0) row.terms.emplace_back(col(VarRef::T(n)), g.v0[n]);
        for (int i = 0; i < m_; ++i) {
          const double av = g.alpha(i, n) * g.v(i, n);
          if (av > 0.0) row.terms.emplace_back(col(VarRef::S(n, i)), av);
        }
      }
      b_.add_row(std::move(row));
      add_product_rows(b_, g, cons_, VarFamily::kT, t);
    }
  }
  cutoff_ = cfg_.use_incumbent_cutoff && !zero_ && segs_.size() == 1;
  if (cutoff_) BuildCutoff();
  b_.add_constraints(cons_);
}

LpRow ConvexMaster::CutoffRow(double gap) const {
  const GnlModel& g = *segs_.front();
  const auto col = [&](const VarRef& r) { return b_.vars().column(in_segment(r, cut_seg_)); };
  LpRow row;
  row.sense = RowSense::kLessEqual;
  row.rhs = 0.0;
  for (int n = 0; n < g.num_nests(); ++n) {
    if (g.v0[n] > 0.0) row.terms.emplace_back(col(VarRef::H(n)), beta_ * g.v0[n]);
    row.terms.emplace_back(col(VarRef::K(n)), -gap);
    for (int i = 0; i < m_; ++i) {
      const double av = g.alpha(i, n) * g.v(i, n);
      if (av > 0.0) row.terms.emplace_back(col(VarRef::S(n, i)), av * (beta_ - g.r[i]));
    }
  }
  return row;
}

void ConvexMaster::BuildCutoff() {
  const GnlModel& g = *segs_.front();
  const int nn = g.num_nests();
  cut_seg_ = static_cast<int>(segs_.size());
  cut_bounds_ = variable_bounds(g, beta_);
  const auto col = [&](const VarRef& r) { return b_.vars().column(in_segment(r, cut_seg_)); };
  for (int n = 0; n < nn; ++n) {
    b_.add_column(in_segment(VarRef::H(n), cut_seg_), 0.0, cut_bounds_.h_lo[n],
                  cut_bounds_.h_hi[n]);
    b_.add_column(in_segment(VarRef::K(n), cut_seg_), 0.0, cut_bounds_.k_lo[n],
                  cut_bounds_.k_hi[n]);
  }
  for (int n = 0; n < nn; ++n)
    for (int i = 0; i < m_; ++i) {
      if (g.alpha(i, n) * g.v(i, n) <= 0.0) continue;
      b_.add_column(in_segment(VarRef::S(n, i), cut_seg_), 0.0, 0.0, cut_bounds_.h_hi[n]);
      auto rows = mccormick(VarRef::S(n, i), VarRef::H(n), VarRef::X(i),
                            cut_bounds_.h_lo[n], cut_bounds_.h_hi[n]);
      McCormickRows mr{n, i};
      for (int r = 0; r < 4; ++r) mr.rows[r] = b_.add_cut_row(rows[r].with_segment(cut_seg_));
      cut_mc_.push_back(mr);
    }
  // h_n W_n = k_n summed over nests.
  LpRow norm;
  norm.sense = RowSense::kEqual;
  norm.rhs = 0.0;
  for (int n = 0; n < nn; ++n) {
    norm.terms.emplace_back(col(VarRef::H(n)), g.v0[n]);
    norm.terms.emplace_back(col(VarRef::K(n)), -1.0);
    for (int i = 0; i < m_; ++i) {
      const double av = g.alpha(i, n) * g.v(i, n);
      if (av > 0.0) norm.terms.emplace_back(col(VarRef::S(n, i)), av);
    }
  }
  b_.add_row(std::move(norm));
  add_product_rows(b_, g, cons_, VarFamily::kH, cut_seg_);
  // With gap = beta the row holds for every assortment.
  b_.add_row(CutoffRow(beta_));
  cutoff_row_ = b_.lp().num_rows() - 1;
}

void ConvexMaster::Tighten(std::span<const std::int8_t> fix, LpProblem& lp) const {
  const auto [inner, outer] = fixed_sets(fix);
  for (std::size_t ts = 0; ts < segs_.size(); ++ts) {
    const int t = static_cast<int>(ts);
    const GnlModel& g = *segs_[t];
    const SegData& d = data_[t];
    const VarBounds nb = set_bounds(g, inner, outer, d.floors);
    const auto col = [&](const VarRef& r) { return b_.vars().column(in_segment(r, t)); };
    for (int n = 0; n < g.num_nests(); ++n) {
      set_column_bounds(lp, col(VarRef::W(n)), nb.w_lo[n], nb.w_hi[n]);
      set_column_bounds(lp, col(VarRef::Y(n)), nb.y_lo[n], nb.y_hi[n]);
      set_column_bounds(lp, col(VarRef::T(n)), nb.t_lo[n], nb.t_hi[n]);
    }
    if (zero_) {
      const Eigen::VectorXd ulo = inclusive_value(g, inner);
      const Eigen::VectorXd uhi = inclusive_value(g, outer);
      for (int n = 0; n < g.num_nests(); ++n)
        set_column_bounds(lp, col(VarRef::U(n)), ulo[n], uhi[n]);
    }
    set_column_bounds(lp, col(VarRef::Z()), nb.z_lo, nb.z_hi);
    for (const McCormickRows& mr : d.mc) {
      const double lo = lp.lower[col(VarRef::T(mr.n))];
      const double hi = lp.upper[col(VarRef::T(mr.n))];
      lp.upper[col(VarRef::S(mr.n, mr.i))] = hi;
      auto rows = mccormick(VarRef::S(mr.n, mr.i), VarRef::T(mr.n), VarRef::X(mr.i), lo, hi);
      for (int r = 0; r < 4; ++r)
        if (mr.rows[r] >= 0) lp.rows[mr.rows[r]] = Pool(rows[r], t).row;
    }
  }
  if (!cutoff_) return;
  const GnlModel& g = *segs_.front();
  const VarBounds nb = set_bounds(g, inner, outer);
  const auto col = [&](const VarRef& r) { return b_.vars().column(in_segment(r, cut_seg_)); };
  for (int n = 0; n < g.num_nests(); ++n) {
    set_column_bounds(lp, col(VarRef::H(n)), nb.h_lo[n], nb.h_hi[n]);
    set_column_bounds(lp, col(VarRef::K(n)), nb.k_lo[n], nb.k_hi[n]);
  }
  for (const McCormickRows& mr : cut_mc_) {
    const double lo = lp.lower[col(VarRef::H(mr.n))];
    const double hi = lp.upper[col(VarRef::H(mr.n))];
    lp.upper[col(VarRef::S(mr.n, mr.i))] = hi;
    auto rows = mccormick(VarRef::S(mr.n, mr.i), VarRef::H(mr.n), VarRef::X(mr.i), lo, hi);
    for (int r = 0; r < 4; ++r) lp.rows[mr.rows[r]] = Pool(rows[r], cut_seg_).row;
  }
  // Keep assortments within a relative 1e-9 of the incumbent.
  const double gap = std::min(beta_, best_gap_ + 1e-9 * std::max(1.0, beta_));
  lp.rows[cutoff_row_] = CutoffRow(gap);
}

double ConvexMaster::ZeroY(int t, int n, const Assortment& s) const {
  const GnlModel& g = *segs_[t];
  const double u = inclusive_value(g, s)[n];
  const double w = g.v0[n] > 0.0 ? u : std::max(u, data_[t].floors[n]);
  return (g.sigma[n] - 1.0) * std::log(w);
}

void ConvexMaster::RootCuts(CutPool& pool) const {
  Assortment none(m_);
  Assortment all(std::vector<std::uint8_t>(m_, 1));
  for (std::size_t ts = 0; ts < segs_.size(); ++ts) {
    const int t = static_cast<int>(ts);
    const GnlModel& g = *segs_[t];
    const SegData& d = data_[t];
    const int nn = g.num_nests();
    for (int n = 0; n < nn; ++n) {
      if (g.sigma[n] >= 1.0) continue;
      const double lo = d.b.w_lo[n], hi = d.b.w_hi[n];
      for (double w : {lo, std::sqrt(lo * hi), hi})
        pool.add(Pool(oa_cut_logW(g, n, w), t));
    }
    std::vector<double> wl(nn), wh(nn);
    for (int n = 0; n < nn; ++n) {
      wl[n] = d.b.w_lo[n];
      wh[n] = d.b.w_hi[n];
    }
    const VarFamily fam = zero_ ? VarFamily::kU : VarFamily::kW;
    pool.add(Pool(oa_cut_logsum(g, wl, fam), t));
    pool.add(Pool(oa_cut_logsum(g, wh, fam), t));
    for (int n = 0; n < nn; ++n) {
      const double ymid = 0.5 * (d.b.y_lo[n] + d.b.y_hi[n]);
      const double zmid = 0.5 * (d.b.z_lo + d.b.z_hi);
      for (auto [y, z] : {std::pair{d.b.y_hi[n], d.b.z_lo},
                          std::pair{d.b.y_lo[n], d.b.z_hi}, std::pair{ymid, zmid}})
        pool.add(Pool(oa_cut_exp(n, y, z), t));
    }
    if (cfg_.use_submodular_cuts) {
      for (const Assortment* s : {&none, &all}) {
        if (zero_) {
          pool.add(Pool(submodular_upper_cut(
                            [&](const Assortment& a) { return zero_optout_set_Z(g, a); },
                            m_, *s, VarRef::Z(), CutOrigin::kScZ),
                        t));
          for (int n = 0; n < nn; ++n)
            if (g.sigma[n] < 1.0)
              pool.add(Pool(supermodular_lower_cut(
                                [&](const Assortment& a) { return ZeroY(t, n, a); },
                                m_, *s, VarRef::Y(n), CutOrigin::kScY),
                            t));
        } else {
          pool.add(Pool(submodular_cut_Z(g, *s), t));
          for (int n = 0; n < nn; ++n)
            if (g.sigma[n] < 1.0) pool.add(Pool(supermodular_cut_Y(g, n, *s), t));
        }
      }
    }
  }
  if (!cutoff_) return;
  const GnlModel& g = *segs_.front();
  std::vector<double> zeros(m_, 0.0), ones(m_, 1.0);
  for (int n = 0; n < g.num_nests(); ++n) {
    for (const auto* p : {&zeros, &ones}) {
      pool.add(Pool(oa_cut_H(g, n, *p), cut_seg_));
      pool.add(Pool(oa_cut_K(g, n, *p), cut_seg_));
    }
    if (cfg_.use_submodular_cuts)
      for (const Assortment* s : {&none, &all}) {
        pool.add(Pool(supermodular_cut_H(g, n, *s), cut_seg_));
        pool.add(Pool(submodular_cut_K(g, n, *s), cut_seg_));
      }
  }
}

SeparationResult ConvexMaster::Separate(std::span<const double> v,
                                        bool integral) const {
  SeparationResult out;
  const auto xs = product_values(b_, v, m_);
  Assortment support = Assortment::FromValues(xs);
  for (std::size_t ts = 0; ts < segs_.size(); ++ts) {
    const int t = static_cast<int>(ts);
    const GnlModel& g = *segs_[t];
    const SegData& d = data_[t];
    const int nn = g.num_nests();
    const double z = Val(v, in_segment(VarRef::Z(), t));
    std::vector<double> y(nn), wd(nn), tangent(nn);
    double sum = 0.0;
    for (int n = 0; n < nn; ++n) {
      const double w = Val(v, in_segment(VarRef::W(n), t));
      y[n] = Val(v, in_segment(VarRef::Y(n), t));
      if (g.sigma[n] < 1.0) {
        const double need = (g.sigma[n] - 1.0) * std::log(w);
        if (violates(need - y[n], need))
          out.cuts.push_back(Pool(oa_cut_logW(g, n, w), t));
      }
      wd[n] = zero_ ? Val(v, in_segment(VarRef::U(n), t)) : w;
      tangent[n] = wd[n];
      if (zero_ && g.v0[n] <= 0.0) tangent[n] = std::max(wd[n], d.floors[n]);
      if (wd[n] > 1e-12) sum += pos_pow(wd[n], g.sigma[n]);
    }
    const double g_true = std::log(sum);
    if (violates(z - g_true, g_true))
      out.cuts.push_back(
          Pool(oa_cut_logsum(g, tangent, zero_ ? VarFamily::kU : VarFamily::kW), t));
    for (int n = 0; n < nn; ++n) {
      const double tv = Val(v, in_segment(VarRef::T(n), t));
      const double need = std::exp(y[n] - z);
      if (violates(need - tv, need))
        out.cuts.push_back(Pool(oa_cut_exp(n, y[n], z), t));
    }
    if (cfg_.use_logsumexp_cut && all_sigma_below_one_) {
      std::vector<double> sig(g.sigma.data(), g.sigma.data() + nn);
      double emax = -kInf;
      std::vector<double> e(nn);
      for (int n = 0; n < nn; ++n) {
        e[n] = sig[n] / (sig[n] - 1.0) * y[n];
        emax = std::max(emax, e[n]);
      }
      double acc = 0.0;
      for (int n = 0; n < nn; ++n) acc += std::exp(e[n] - emax);
      const double f = emax + std::log(acc);
      if (violates(f - z, f)) out.cuts.push_back(Pool(oa_cut_prop5(sig, y), t));
    }
    if (integral && (cfg_.use_submodular_cuts || zero_)) {
      const double z_exact = zero_ ? zero_optout_set_Z(g, support) : set_Z(g, support);
      if (violates(z - z_exact, z_exact)) {
        if (zero_)
          out.cuts.push_back(Pool(submodular_upper_cut(
                                      [&](const Assortment& a) {
                                        return zero_optout_set_Z(g, a);
                                      },
                                      m_, support, VarRef::Z(), CutOrigin::kScZ),
                                  t));
        else
          out.cuts.push_back(Pool(submodular_cut_Z(g, support), t));
      }
      if (cfg_.use_submodular_cuts) {
        for (int n = 0; n < nn; ++n) {
          if (g.sigma[n] >= 1.0) continue;
          const double y_exact = zero_ ? ZeroY(t, n, support) : set_Y(g, n, support);
          if (!violates(y_exact - y[n], y_exact)) continue;
          if (zero_)
            out.cuts.push_back(Pool(supermodular_lower_cut(
                                        [&](const Assortment& a) { return ZeroY(t, n, a); },
                                        m_, support, VarRef::Y(n), CutOrigin::kScY),
                                    t));
          else
            out.cuts.push_back(Pool(supermodular_cut_Y(g, n, support), t));
        }
      }
    }
  }
  if (cutoff_) {
    const GnlModel& g = *segs_.front();
    const Eigen::VectorXd w = inclusive_value(g, std::span<const double>(xs));
    for (int n = 0; n < g.num_nests(); ++n) {
      const double h = Val(v, in_segment(VarRef::H(n), cut_seg_));
      const double k = Val(v, in_segment(VarRef::K(n), cut_seg_));
      const double hx = pos_pow(w[n], g.sigma[n] - 1.0);
      const double kx = pos_pow(w[n], g.sigma[n]);
      if (violates(hx - h, hx)) {
        out.cuts.push_back(Pool(oa_cut_H(g, n, xs), cut_seg_));
        if (integral && cfg_.use_submodular_cuts)
          out.cuts.push_back(Pool(supermodular_cut_H(g, n, support), cut_seg_));
      }
      if (violates(k - kx, kx)) {
        out.cuts.push_back(Pool(oa_cut_K(g, n, xs), cut_seg_));
        if (integral && cfg_.use_submodular_cuts)
          out.cuts.push_back(Pool(submodular_cut_K(g, n, support), cut_seg_));
      }
    }
  }
  if (integral && out.cuts.empty()) out.exact = Exact(support);
  return out;
}

Candidate ConvexMaster::Exact(const Assortment& x) const {
  std::vector<double> v(b_.vars().size(), 0.0);
  auto set = [&](const VarRef& r, double val) { v[b_.vars().column(r)] = val; };
  for (int i = 0; i < m_; ++i) set(VarRef::X(i), x[i] ? 1.0 : 0.0);
  for (std::size_t ts = 0; ts < segs_.size(); ++ts) {
    const int t = static_cast<int>(ts);
    const GnlModel& g = *segs_[t];
    const int nn = g.num_nests();
    const Eigen::VectorXd u = inclusive_value(g, x);
    std::vector<double> w(nn);
    double sum = 0.0;
    for (int n = 0; n < nn; ++n) {
      w[n] = u[n];
      if (zero_ && g.v0[n] <= 0.0) w[n] = std::max(u[n], data_[t].floors[n]);
      if (u[n] > 1e-300) sum += pos_pow(u[n], g.sigma[n]);
    }
    const double z = std::log(sum);
    set(in_segment(VarRef::Z(), t), z);
    for (int n = 0; n < nn; ++n) {
      const double y = (g.sigma[n] - 1.0) * std::log(w[n]);
      const double tn = std::exp(y - z);
      set(in_segment(VarRef::W(n), t), w[n]);
      if (zero_) set(in_segment(VarRef::U(n), t), u[n]);
      set(in_segment(VarRef::Y(n), t), y);
      set(in_segment(VarRef::T(n), t), tn);
      for (int i = 0; i < m_; ++i)
        if (g.alpha(i, n) * g.v(i, n) > 0.0)
          set(in_segment(VarRef::S(n, i), t), x[i] ? tn : 0.0);
    }
  }
  if (cutoff_) {
    const GnlModel& g = *segs_.front();
    const Eigen::VectorXd w = inclusive_value(g, x);
    for (int n = 0; n < g.num_nests(); ++n) {
      const double h = pos_pow(w[n], g.sigma[n] - 1.0);
      set(in_segment(VarRef::H(n), cut_seg_), h);
      set(in_segment(VarRef::K(n), cut_seg_), pos_pow(w[n], g.sigma[n]));
      for (int i = 0; i < m_; ++i)
        if (g.alpha(i, n) * g.v(i, n) > 0.0)
          set(in_segment(VarRef::S(n, i), cut_seg_), x[i] ? h : 0.0);
    }
    if (cons_.satisfied_by(x)) best_gap_ = std::min(best_gap_, beta_ - revenue_(x));
  }
  return {v, dot_cost(b_.lp(), v)};
}

AssortmentResult ConvexMaster::Solve() {
  CutPool pool;
  RootCuts(pool);
  BnbHooks hooks;
  hooks.separate = [this](std::span<const double> v, bool integral) {
    return Separate(v, integral);
  };
  if (cfg_.tighten_nodes)
    hooks.tighten = [this](std::span<const std::int8_t> fix, LpProblem& lp) {
      Tighten(fix, lp);
    };
  hooks.heuristic = [this](std::span<const double> v) -> std::optional<Candidate> {
    const auto xs = product_values(b_, v, m_);
    auto s = rounding_assortment(revenue_, xs, cons_);
    if (!s) return std::nullopt;
    return Exact(*s);
  };
  if (auto s = greedy_assortment(revenue_, m_, cons_)) hooks.starts.push_back(Exact(*s));

  AssortmentResult res;
  res.beta = beta_;
  res.solve = bnb_solve(b_.lp(), b_.binaries(), hooks, cfg_.bnb, &pool);
  res.solve.cuts[CutOrigin::kMcCormick] += b_.static_rows(CutOrigin::kMcCormick);
  res.vars = b_.vars();
  if (res.solve.has_incumbent)
    res.assortment = Assortment::FromValues(product_values(b_, res.solve.values, m_));
  fill_revenue_fields(res, revenue_);
  return res;
}

// ---------------------------------------------------------------------------
// Bisection master: columns x, W, h, k, s with h >= H(x), k <= K(x).

class BisectionMaster {
 public:
  BisectionMaster(const GnlModel& model, const LinearConstraintSet& constraints,
                  double beta, const AssortConfig& config)
      : g_(model), cons_(constraints), beta_(beta), cfg_(config),
        m_(model.num_products()) {
    Build();
  }

  void SetDelta(double delta) {
    delta_ = delta;
    for (int n = 0; n < g_.num_nests(); ++n)
      b_.lp().cost[b_.vars().column(VarRef::K(n))] = -delta;
  }
  void RootCuts(CutPool& pool) const;
  SeparationResult Separate(std::span<const double> v, bool integral) const;
  Candidate Exact(const Assortment& x) const;
  void Tighten(std::span<const std::int8_t> fix, LpProblem& lp) const;
  const MasterBuilder& builder() const { return b_; }

 private:
  void Build();

  const GnlModel& g_;
  const LinearConstraintSet& cons_;
  double beta_;
  AssortConfig cfg_;
  int m_;
  double delta_ = 0.0;
  VarBounds bounds_;
  MasterBuilder b_;
  std::vector<McCormickRows> mc_;
};

void BisectionMaster::Build() {
  const int nn = g_.num_nests();
  bounds_ = variable_bounds(g_, beta_);
  for (int i = 0; i < m_; ++i) b_.mark_binary(b_.add_column(VarRef::X(i), 0.0, 0.0, 1.0));
  for (int n = 0; n < nn; ++n) {
    b_.add_column(VarRef::W(n), 0.0, bounds_.w_lo[n], bounds_.w_hi[n]);
    b_.add_column(VarRef::H(n), beta_ * g_.v0[n], bounds_.h_lo[n], bounds_.h_hi[n]);
    b_.add_column(VarRef::K(n), 0.0, bounds_.k_lo[n], bounds_.k_hi[n]);
  }
  for (int n = 0; n < nn; ++n)
    for (int i = 0; i < m_; ++i) {
      const double av = g_.alpha(i, n) * g_.v(i, n);
      if (av <= 0.0) continue;
      b_.add_column(VarRef::S(n, i), av * (beta_ - g_.r[i]), 0.0, bounds_.h_hi[n]);
    }
  for (int n = 0; n < nn; ++n) {
    LpRow def;
    def.sense = RowSense::kEqual;
    def.rhs = g_.v0[n];
    def.terms.emplace_back(b_.vars().column(VarRef::W(n)), 1.0);
    for (int i = 0; i < m_; ++i) {
      const double av = g_.alpha(i, n) * g_.v(i, n);
      if (av > 0.0) def.terms.emplace_back(b_.vars().column(VarRef::X(i)), -av);
    }
    b_.add_row(std::move(def));
  }
  const bool norm = cfg_.use_normalization_row;
  for (int n = 0; n < nn; ++n)
    for (int i = 0; i < m_; ++i) {
      if (g_.alpha(i, n) * g_.v(i, n) <= 0.0) continue;
      auto rows = mccormick(VarRef::S(n, i), VarRef::H(n), VarRef::X(i),
                            bounds_.h_lo[n], bounds_.h_hi[n]);
      McCormickRows mr{n, i};
      for (int r : {0, 1, 2, 3})
        if (norm || r == 0 || r == 2) mr.rows[r] = b_.add_cut_row(rows[r]);
      mc_.push_back(mr);
    }
  if (norm) {
    // sum_n h_n W_n = sum_n k_n, with h_n W_n expanded through s = h x.
    LpRow row;
    row.sense = RowSense::kEqual;
    row.rhs = 0.0;
    for (int n = 0; n < nn; ++n) {
      row.terms.emplace_back(b_.vars().column(VarRef::H(n)), g_.v0[n]);
      row.terms.emplace_back(b_.vars().column(VarRef::K(n)), -1.0);
      for (int i = 0; i < m_; ++i) {
        const double av = g_.alpha(i, n) * g_.v(i, n);
        if (av > 0.0) row.terms.emplace_back(b_.vars().column(VarRef::S(n, i)), av);
      }
    }
    b_.add_row(std::move(row));
    add_product_rows(b_, g_, cons_, VarFamily::kH, 0);
  }
  b_.add_constraints(cons_);
}

void BisectionMaster::Tighten(std::span<const std::int8_t> fix,
                              LpProblem& lp) const {
  const auto [inner, outer] = fixed_sets(fix);
  const VarBounds nb = set_bounds(g_, inner, outer);
  const auto col = [&](const VarRef& r) { return b_.vars().column(r); };
  for (int n = 0; n < g_.num_nests(); ++n) {
    set_column_bounds(lp, col(VarRef::W(n)), nb.w_lo[n], nb.w_hi[n]);
    set_column_bounds(lp, col(VarRef::H(n)), nb.h_lo[n], nb.h_hi[n]);
    set_column_bounds(lp, col(VarRef::K(n)), nb.k_lo[n], nb.k_hi[n]);
  }
  for (const McCormickRows& mr : mc_) {
    const double lo = lp.lower[col(VarRef::H(mr.n))];
    const double hi = lp.upper[col(VarRef::H(mr.n))];
    lp.upper[col(VarRef::S(mr.n, mr.i))] = hi;
    auto rows = mccormick(VarRef::S(mr.n, mr.i), VarRef::H(mr.n), VarRef::X(mr.i), lo, hi);
    for (int r = 0; r < 4; ++r)
      if (mr.rows[r] >= 0) lp.rows[mr.rows[r]] = b_.pool_cut(rows[r]).row;
  }
}

void BisectionMaster::RootCuts(CutPool& pool) const {
  std::vector<double> zeros(m_, 0.0), ones(m_, 1.0);
  Assortment none(m_);
  Assortment all(std::vector<std::uint8_t>(m_, 1));
  for (int n = 0; n < g_.num_nests(); ++n) {
    for (const auto* p : {&zeros, &ones}) {
      pool.add(b_.pool_cut(oa_cut_H(g_, n, *p)));
      pool.add(b_.pool_cut(oa_cut_K(g_, n, *p)));
    }
    if (cfg_.use_submodular_cuts) {
      for (const Assortment* s : {&none, &all}) {
        pool.add(b_.pool_cut(supermodular_cut_H(g_, n, *s)));
        pool.add(b_.pool_cut(submodular_cut_K(g_, n, *s)));
      }
    }
  }
}

SeparationResult BisectionMaster::Separate(std::span<const double> v,
                                           bool integral) const {
  SeparationResult out;
  const auto xs = product_values(b_, v, m_);
  const Eigen::VectorXd w = inclusive_value(g_, std::span<const double>(xs));
  const Assortment support = Assortment::FromValues(xs);
  for (int n = 0; n < g_.num_nests(); ++n) {
    const double h = v[b_.vars().column(VarRef::H(n))];
    const double k = v[b_.vars().column(VarRef::K(n))];
    const double hx = pos_pow(w[n], g_.sigma[n] - 1.0);
    const double kx = pos_pow(w[n], g_.sigma[n]);
    if (violates(hx - h, hx)) {
      out.cuts.push_back(b_.pool_cut(oa_cut_H(g_, n, xs)));
      if (integral && cfg_.use_submodular_cuts)
        out.cuts.push_back(b_.pool_cut(supermodular_cut_H(g_, n, support)));
    }
    if (violates(k - kx, kx)) {
      out.cuts.push_back(b_.pool_cut(oa_cut_K(g_, n, xs)));
      if (integral && cfg_.use_submodular_cuts)
        out.cuts.push_back(b_.pool_cut(submodular_cut_K(g_, n, support)));
    }
  }
  if (integral && out.cuts.empty()) out.exact = Exact(support);
  return out;
}

Candidate BisectionMaster::Exact(const Assortment& x) const {
  std::vector<double> v(b_.vars().size(), 0.0);
  auto set = [&](const VarRef& r, double val) { v[b_.vars().column(r)] = val; };
  const Eigen::VectorXd w = inclusive_value(g_, x);
  for (int i = 0; i < m_; ++i) set(VarRef::X(i), x[i] ? 1.0 : 0.0);
  for (int n = 0; n < g_.num_nests(); ++n) {
    const double h = pos_pow(w[n], g_.sigma[n] - 1.0);
    set(VarRef::W(n), w[n]);
    set(VarRef::H(n), h);
    set(VarRef::K(n), pos_pow(w[n], g_.sigma[n]));
    for (int i = 0; i < m_; ++i)
      if (g_.alpha(i, n) * g_.v(i, n) > 0.0) set(VarRef::S(n, i), x[i] ? h : 0.0);
  }
  return {v, dot_cost(b_.lp(), v)};
}

SubproblemResult run_subproblem(BisectionMaster& master, const GnlModel& model,
                                const LinearConstraintSet& constraints,
                                double beta, double delta, const AssortConfig& config,
                                CutPool& pool, bool exact,
                                const std::vector<Assortment>& hints) {
  master.SetDelta(delta);
  const int m = model.num_products();
  const RevenueFn revenue = [&](const Assortment& x) { return expected_revenue(model, x); };
  BnbHooks hooks;
  hooks.separate = [&](std::span<const double> v, bool integral) {
    return master.Separate(v, integral);
  };
  if (config.tighten_nodes)
    hooks.tighten = [&](std::span<const std::int8_t> fix, LpProblem& lp) {
      master.Tighten(fix, lp);
    };
  hooks.heuristic = [&](std::span<const double> v) -> std::optional<Candidate> {
    std::vector<double> xs(m);
    for (int i = 0; i < m; ++i)
      xs[i] = v[master.builder().vars().column(VarRef::X(i))];
    auto s = rounding_assortment(revenue, xs, constraints);
    if (!s) return std::nullopt;
    return master.Exact(*s);
  };
  for (const auto& h : hints)
    if (constraints.satisfied_by(h)) hooks.starts.push_back(master.Exact(h));
  BnbConfig bc = config.bnb;
  if (!exact) {
    bc.target = 0.0;
    bc.cutoff = 0.0;
  }
  SubproblemResult out;
  out.solve = bnb_solve(master.builder().lp(), master.builder().binaries(), hooks, bc, &pool);
  out.vars = master.builder().vars();
  if (out.solve.has_incumbent) {
    out.x = Assortment::FromValues(std::span<const double>(out.solve.values).first(m));
    out.value = subproblem_value(model, beta, delta, out.x);
    out.nonpositive = out.value <= 0.0;
  } else {
    out.value = out.solve.bound;
  }
  return out;
}

}  // namespace

std::vector<double> zero_optout_floors(const GnlModel& model, double fraction) {
  if (!(fraction > 0.0 && fraction <= 0.5))
    throw InvalidArgument("floor fraction must lie in (0, 0.5]");
  std::vector<double> floors(model.num_nests(), 0.0);
  for (int n = 0; n < model.num_nests(); ++n) {
    if (model.v0[n] > 0.0) continue;
    double smallest = kInf;
    for (int i = 0; i < model.num_products(); ++i) {
      const double av = model.alpha(i, n) * model.v(i, n);
      if (av > 0.0) smallest = std::min(smallest, av);
    }
    if (smallest == kInf)
      throw ModelError("nest " + std::to_string(n) +
                       " has no opt-out weight and no member products");
    floors[n] = fraction * smallest;
  }
  return floors;
}

double subproblem_value(const GnlModel& model, double beta, double delta,
                        const Assortment& x) {
  const Eigen::VectorXd w = inclusive_value(model, x);
  double g = 0.0;
  for (int n = 0; n < model.num_nests(); ++n) {
    double inner = beta * model.v0[n];
    for (int i = 0; i < model.num_products(); ++i)
      if (x[i]) inner += model.alpha(i, n) * (beta - model.r[i]) * model.v(i, n);
    g += pos_pow(w[n], model.sigma[n] - 1.0) * inner -
         delta * pos_pow(w[n], model.sigma[n]);
  }
  return g;
}

SubproblemResult bisection_subproblem(const GnlModel& model,
                                      const LinearConstraintSet& constraints,
                                      double beta, double delta,
                                      const AssortConfig& config, CutPool* pool,
                                      bool exact,
                                      const std::vector<Assortment>& hints) {
  require_valid(model);
  check_constraints(constraints, model.num_products());
  check_beta(beta, model.r.maxCoeff());
  if (delta < 0.0) throw InvalidArgument("delta must be nonnegative");
  BisectionMaster master(model, constraints, beta, config);
  CutPool local;
  CutPool& p = pool ? *pool : local;
  if (p.size() == 0) master.RootCuts(p);
  return run_subproblem(master, model, constraints, beta, delta, config, p, exact,
                        hints);
}

AssortmentResult solve_gnl_bisection(const GnlModel& model,
                                     const LinearConstraintSet& constraints,
                                     double beta, double tol,
                                     const AssortConfig& config) {
  require_valid(model);
  const int m = model.num_products();
  check_constraints(constraints, m);
  check_beta(beta, model.r.maxCoeff());
  if (!(tol > 0.0)) throw InvalidArgument("bisection tolerance must be positive");
  const auto t0 = std::chrono::steady_clock::now();
  const RevenueFn revenue = [&](const Assortment& x) { return expected_revenue(model, x); };

  BisectionMaster master(model, constraints, beta, config);
  CutPool pool;
  master.RootCuts(pool);

  AssortmentResult res;
  res.beta = beta;
  BisectionState st;
  st.tolerance = tol;
  std::vector<Assortment> hints;
  if (auto g = greedy_assortment(revenue, m, constraints)) hints.push_back(*g);

  auto budget = [&]() {
    AssortConfig c = config;
    c.bnb.time_limit = config.bnb.time_limit - seconds_since(t0);
    return c;
  };
  auto absorb = [&](const SubproblemResult& sub) {
    res.solve.nodes += sub.solve.nodes;
    res.solve.lp_iterations += sub.solve.lp_iterations;
  };

  // The bracket is kept as integer numerators over 2^k so that its width is
  // exactly beta * 2^-k.
  std::uint64_t lo_num = 0, hi_num = 1;
  int k = 0;
  auto delta_of = [&](std::uint64_t num) {
    return std::ldexp(static_cast<double>(num), -k) * beta;
  };
  Termination term = Termination::kOptimal;

  // delta = beta: any feasible x gives G <= 0, so this is a feasibility check.
  SubproblemResult first =
      run_subproblem(master, model, constraints, beta, beta, budget(), pool, false, hints);
  absorb(first);
  if (!first.nonpositive) {
    const bool limited = first.solve.termination == Termination::kTimeLimit ||
                         first.solve.termination == Termination::kNodeLimit;
    res.solve.termination = limited ? first.solve.termination : Termination::kInfeasible;
    res.solve.bound = limited ? -kInf : kInf;
    res.solve.seconds = seconds_since(t0);
    res.solve.cuts = pool.counts();
    res.solve.cuts[CutOrigin::kMcCormick] += master.builder().static_rows(CutOrigin::kMcCormick);
    res.vars = master.builder().vars();
    fill_revenue_fields(res, revenue);
    res.termination = res.solve.termination;
    return res;
  }
  st.best = first.x;
  st.best_revenue = revenue(first.x);
  std::vector<double> best_values = first.solve.values;

  const double stop_width = tol * std::max(1.0, beta);
  while (k < 62 && std::ldexp(beta, -k) * static_cast<double>(hi_num - lo_num) > stop_width) {
    ++k;
    lo_num *= 2;
    hi_num *= 2;
    const std::uint64_t mid = lo_num + 1;
    const double delta = delta_of(mid);
    hints.assign(1, st.best);
    SubproblemResult sub =
        run_subproblem(master, model, constraints, beta, delta, budget(), pool, false, hints);
    absorb(sub);
    if (sub.nonpositive) {
      hi_num = mid;
      const double f = revenue(sub.x);
      if (f > st.best_revenue) {
        st.best_revenue = f;
        st.best = sub.x;
        best_values = sub.solve.values;
      }
    } else if (sub.solve.termination == Termination::kTimeLimit ||
               sub.solve.termination == Termination::kNodeLimit) {
      // Undecided: undo the refinement and stop.
      lo_num /= 2;
      hi_num /= 2;
      --k;
      term = sub.solve.termination;
      break;
    } else {
      lo_num = mid;
    }
    st.widths.push_back(std::ldexp(beta, -k) * static_cast<double>(hi_num - lo_num));
    ++st.iterations;
  }
  st.delta_lo = delta_of(lo_num);
  st.delta_hi = delta_of(hi_num);

  res.assortment = st.best;
  res.solve.has_incumbent = true;
  res.solve.values = master.Exact(st.best).values;
  master.SetDelta(st.delta_hi);
  res.solve.objective = beta - st.best_revenue;
  res.solve.bound = st.delta_lo;
  res.solve.gap = (res.solve.objective - res.solve.bound) /
                  std::max(1.0, std::abs(res.solve.objective));
  res.solve.termination = term;
  res.solve.cuts = pool.counts();
  res.solve.cuts[CutOrigin::kMcCormick] += master.builder().static_rows(CutOrigin::kMcCormick);
  res.solve.seconds = seconds_since(t0);
  res.vars = master.builder().vars();
  res.bisection = st;
  fill_revenue_fields(res, revenue);
  return res;
}

AssortmentResult solve_gnl_logconvex(const GnlModel& model,
                                     const LinearConstraintSet& constraints,
                                     double beta, const AssortConfig& config) {
  require_valid(model);
  check_constraints(constraints, model.num_products());
  check_beta(beta, model.r.maxCoeff());
  ConvexMaster master({&model}, {1.0}, constraints, beta, config, false,
                      [&](const Assortment& x) { return expected_revenue(model, x); });
  return master.Solve();
}

AssortmentResult solve_mgnl(const MgnlModel& mixed,
                            const LinearConstraintSet& constraints, double beta,
                            const AssortConfig& config) {
  require_valid(mixed);
  check_constraints(constraints, mixed.num_products());
  double rmax = 0.0;
  std::vector<const GnlModel*> segs;
  std::vector<double> theta;
  for (int t = 0; t < mixed.num_segments(); ++t) {
    segs.push_back(&mixed.segments[t]);
    theta.push_back(mixed.theta[t]);
    rmax = std::max(rmax, mixed.segments[t].r.maxCoeff());
  }
  check_beta(beta, rmax);
  ConvexMaster master(segs, theta, constraints, beta, config, false,
                      [&](const Assortment& x) { return mgnl_expected_revenue(mixed, x); });
  return master.Solve();
}

AssortmentResult solve_zero_optout(const GnlModel& model,
                                   const LinearConstraintSet& constraints,
                                   double beta, const AssortConfig& config) {
  require_valid(model, /*allow_zero_optout=*/true);
  check_constraints(constraints, model.num_products());
  check_beta(beta, model.r.maxCoeff());
  bool any_positive = false;
  for (int n = 0; n < model.num_nests(); ++n) any_positive |= model.v0[n] > 0.0;
  if (!any_positive)
    throw ModelError("at least one nest needs a positive opt-out weight");
  zero_optout_floors(model, config.floor_fraction);  // validates nest membership
  ConvexMaster master({&model}, {1.0}, constraints, beta, config, true,
                      [&](const Assortment& x) {
                        return zero_optout_expected_revenue(model, x);
                      });
  return master.Solve();
}

std::string print_mgnl_bilinear(const MgnlModel& mixed,
                                const LinearConstraintSet& constraints,
                                double beta) {
  require_valid(mixed);
  std::ostringstream os;
  os.precision(17);
  const int m = mixed.num_products();
  os << "MINIMIZE";
  for (int t = 0; t < mixed.num_segments(); ++t)
    os << (t ? " + " : " ") << mixed.theta[t] << " d[" << t << "]";
  os << "\nVARIABLES\n";
  for (int i = 0; i < m; ++i) os << "x[" << i << "] binary\n";
  for (int t = 0; t < mixed.num_segments(); ++t) {
    const GnlModel& g = mixed.segments[t];
    const VarBounds b = variable_bounds(g, beta);
    os << "d[" << t << "] in [0, " << beta << "]\n";
    for (int n = 0; n < g.num_nests(); ++n) {
      os << "W[" << t << "," << n << "] in [" << b.w_lo[n] << ", " << b.w_hi[n] << "]\n";
      os << "h[" << t << "," << n << "] in [" << b.h_lo[n] << ", " << b.h_hi[n] << "]\n";
      os << "k[" << t << "," << n << "] in [" << b.k_lo[n] << ", " << b.k_hi[n] << "]\n";
    }
  }
  os << "ROWS\n";
  for (int t = 0; t < mixed.num_segments(); ++t) {
    const GnlModel& g = mixed.segments[t];
    os << "ratio[" << t << "]:";
    for (int n = 0; n < g.num_nests(); ++n) {
      os << " + h[" << t << "," << n << "] * (" << beta * g.v0[n];
      for (int i = 0; i < m; ++i) {
        const double c = g.alpha(i, n) * (beta - g.r[i]) * g.v(i, n);
        if (c != 0.0) os << " + " << c << " x[" << i << "]";
      }
      os << ")";
    }
    os << " = d[" << t << "] * (";
    for (int n = 0; n < g.num_nests(); ++n)
      os << (n ? " + " : "") << "k[" << t << "," << n << "]";
    os << ")\n";
    for (int n = 0; n < g.num_nests(); ++n) {
      os << "weight[" << t << "," << n << "]: W[" << t << "," << n << "]";
      for (int i = 0; i < m; ++i) {
        const double c = g.alpha(i, n) * g.v(i, n);
        if (c != 0.0) os << " - " << c << " x[" << i << "]";
      }
      os << " = " << g.v0[n] << "\n";
      os << "bilinear[" << t << "," << n << "]: k[" << t << "," << n << "] = W[" << t
         << "," << n << "] * h[" << t << "," << n << "]\n";
      os << "convex[" << t << "," << n << "]: h[" << t << "," << n << "] >= W[" << t
         << "," << n << "]^(" << g.sigma[n] - 1.0 << ")\n";
      os << "concave[" << t << "," << n << "]: k[" << t << "," << n << "] <= W[" << t
         << "," << n << "]^(" << g.sigma[n] << ")\n";
    }
  }
  for (int p = 0; p < constraints.num_rows(); ++p) {
    os << "side[" << p << "]:";
    for (int i = 0; i < constraints.num_vars(); ++i)
      if (constraints.a(p, i) != 0.0) os << " + " << constraints.a(p, i) << " x[" << i << "]";
    os << " <= " << constraints.b[p] << "\n";
  }
  return os.str();
}

}  // namespace gnlopt
