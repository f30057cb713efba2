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

#include "gnlopt/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

#include "gnlopt/errors.hpp"

namespace gnlopt {

int LpProblem::add_column(double c, double lo, double up, std::string name) {
  cost.push_back(c);
  lower.push_back(lo);
  upper.push_back(up);
  if (!name.empty() || !names.empty()) {
    names.resize(cost.size() - 1);
    names.push_back(std::move(name));
  }
  return static_cast<int>(cost.size()) - 1;
}

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
  }
  return "unknown";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

class Simplex {
 public:
  Simplex(const LpProblem& p, const LpOptions& o);
  LpSolution Run(const LpBasis* warm);

 private:
  enum class Outcome { kOptimal, kInfeasible, kUnbounded, kIterationLimit, kSingular };

  void SetSlackBasis();
  bool LoadBasis(const LpBasis& warm);
  bool Factorize();
  // Records a pivot at basis position p whose entering column solved
  // against the previous basis is `alpha`; refactors when the update list
  // is full. Returns true after a refactorization (basic values refreshed);
  // a singular refactorization sets singular_.
  bool Update(int p, const Eigen::VectorXd& alpha);
  void ComputeBasics();
  void Column(int j, Eigen::VectorXd& out) const;
  void Ftran(Eigen::VectorXd& z) const;
  void Btran(Eigen::VectorXd& y) const;
  double Infeasibility(int j) const;
  Outcome Iterate(long limit);
  Outcome DualIterate(long limit);
  void ReducedCosts(std::vector<double>& d) const;
  // Moves nonbasic variables to the bound their reduced cost favors.
  bool MakeDualFeasible(const std::vector<double>& d);
  LpSolution Extract(LpStatus status) const;

  LpOptions opt_;
  int n_ = 0;
  int m_ = 0;
  std::vector<double> lo_, up_, cost_;
  std::vector<std::vector<std::pair<int, double>>> cols_;
  std::vector<int> head_;  // basic variable at each position
  std::vector<int> pos_;   // basis position or -1
  std::vector<VarStatus> st_;
  std::vector<double> x_;
  // Basis factorization. Rows whose logical is basic are solved by
  // substitution; only the rows left uncovered (srow_) against the basic
  // structural columns (spos_) form the dense LU. Later pivots are kept as
  // product-form updates until the next refactorization.
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  std::vector<int> spos_;
  std::vector<int> scol_;  // structural column at spos_ when factored
  std::vector<int> srow_;
  std::vector<int> rowt_;
  std::vector<int> lpos_;  // basis position of each row's logical, or -1
  struct Eta {
    int p = 0;
    double pivot = 1.0;
    std::vector<std::pair<int, double>> a;  // off-pivot entries
  };
  std::vector<Eta> etas_;
  long iterations_ = 0;
  bool bland_ = false;
  bool singular_ = false;
};

Simplex::Simplex(const LpProblem& p, const LpOptions& o)
    : opt_(o), n_(p.num_cols()), m_(p.num_rows()) {
  if (static_cast<int>(p.lower.size()) != n_ ||
      static_cast<int>(p.upper.size()) != n_)
    throw DimensionError("bound arrays differ from the column count");
  const int total = n_ + m_;
  lo_.resize(total);
  up_.resize(total);
  cost_.assign(total, 0.0);
  for (int j = 0; j < n_; ++j) {
    if (!std::isfinite(p.lower[j]) || !std::isfinite(p.upper[j]))
      throw InvalidArgument("every LP column needs finite bounds");
    lo_[j] = p.lower[j];
    up_[j] = p.upper[j];
    cost_[j] = p.cost[j];
  }
  cols_.assign(n_, {});
  for (int i = 0; i < m_; ++i) {
    const LpRow& row = p.rows[i];
    for (const auto& [j, a] : row.terms) {
      if (j < 0 || j >= n_) throw DimensionError("row references a missing column");
      if (a != 0.0) cols_[j].emplace_back(i, a);
    }
    // One-sided rows take the activity range implied by the column bounds
    // as their missing bound, so every variable is boxed.
    double amin = 0.0, amax = 0.0;
    for (const auto& [j, a] : row.terms) {
      amin += a > 0.0 ? a * p.lower[j] : a * p.upper[j];
      amax += a > 0.0 ? a * p.upper[j] : a * p.lower[j];
    }
    double& l = lo_[n_ + i];
    double& u = up_[n_ + i];
    switch (row.sense) {
      case RowSense::kLessEqual: l = std::min(amin, row.rhs); u = row.rhs; break;
      case RowSense::kGreaterEqual: l = row.rhs; u = std::max(amax, row.rhs); break;
      case RowSense::kEqual: l = row.rhs; u = row.rhs; break;
    }
  }
  // Merge repeated entries of a column within the same row.
  for (auto& col : cols_) {
    std::sort(col.begin(), col.end());
    std::vector<std::pair<int, double>> merged;
    for (const auto& e : col) {
      if (!merged.empty() && merged.back().first == e.first)
        merged.back().second += e.second;
      else
        merged.push_back(e);
    }
    col = std::move(merged);
  }
  if (opt_.max_iterations <= 0) opt_.max_iterations = 50L * (n_ + m_) + 2000;
}

void Simplex::SetSlackBasis() {
  const int total = n_ + m_;
  st_.assign(total, VarStatus::kAtLower);
  head_.resize(m_);
  pos_.assign(total, -1);
  for (int j = 0; j < n_; ++j)
    st_[j] = std::abs(lo_[j]) <= std::abs(up_[j]) ? VarStatus::kAtLower
                                                  : VarStatus::kAtUpper;
  for (int i = 0; i < m_; ++i) {
    st_[n_ + i] = VarStatus::kBasic;
    head_[i] = n_ + i;
    pos_[n_ + i] = i;
  }
}

bool Simplex::LoadBasis(const LpBasis& warm) {
  const int total = n_ + m_;
  const int given = static_cast<int>(warm.status.size());
  if (given < n_ || given > total) return false;
  st_.assign(total, VarStatus::kBasic);
  std::copy(warm.status.begin(), warm.status.end(), st_.begin());
  head_.clear();
  pos_.assign(total, -1);
  for (int j = 0; j < total; ++j) {
    if (st_[j] == VarStatus::kBasic) {
      pos_[j] = static_cast<int>(head_.size());
      head_.push_back(j);
    } else if (st_[j] == VarStatus::kAtUpper && !std::isfinite(up_[j])) {
      st_[j] = VarStatus::kAtLower;
    } else if (st_[j] == VarStatus::kAtLower && !std::isfinite(lo_[j])) {
      st_[j] = VarStatus::kAtUpper;
    }
  }
  return static_cast<int>(head_.size()) == m_;
}

void Simplex::Column(int j, Eigen::VectorXd& out) const {
  out.setZero(m_);
  if (j < n_) {
    for (const auto& [i, a] : cols_[j]) out[i] = a;
  } else {
    out[j - n_] = -1.0;
  }
}

bool Simplex::Factorize() {
  spos_.clear();
  scol_.clear();
  srow_.clear();
  etas_.clear();
  rowt_.assign(m_, -1);
  lpos_.assign(m_, -1);
  for (int p = 0; p < m_; ++p) {
    if (head_[p] < n_) {
      spos_.push_back(p);
      scol_.push_back(head_[p]);
    } else {
      lpos_[head_[p] - n_] = p;
    }
  }
  for (int i = 0; i < m_; ++i) {
    if (pos_[n_ + i] >= 0) continue;
    rowt_[i] = static_cast<int>(srow_.size());
    srow_.push_back(i);
  }
  const int k = static_cast<int>(spos_.size());
  if (static_cast<int>(srow_.size()) != k) return false;
  if (k == 0) return true;
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(k, k);
  for (int s = 0; s < k; ++s)
    for (const auto& [i, a] : cols_[scol_[s]])
      if (rowt_[i] >= 0) b(rowt_[i], s) = a;
  lu_.compute(b);
  const auto diag = lu_.matrixLU().diagonal().cwiseAbs();
  const double big = diag.maxCoeff();
  const double small = diag.minCoeff();
  return big > 0.0 && small > 1e-11 * std::max(1.0, big);
}

// Solves B z = c; c is indexed by row, the result by basis position.
void Simplex::Ftran(Eigen::VectorXd& z) const {
  if (m_ == 0) return;
  const int k = static_cast<int>(spos_.size());
  Eigen::VectorXd zs;
  if (k > 0) {
    Eigen::VectorXd ct(k);
    for (int t = 0; t < k; ++t) ct[t] = z[srow_[t]];
    zs = lu_.solve(ct);
  }
  Eigen::VectorXd out(m_);
  for (int i = 0; i < m_; ++i) {
    const int p = lpos_[i];
    if (p >= 0) out[p] = -z[i];
  }
  for (int s = 0; s < k; ++s) {
    out[spos_[s]] = zs[s];
    if (zs[s] == 0.0) continue;
    for (const auto& [i, a] : cols_[scol_[s]]) {
      const int p = lpos_[i];
      if (p >= 0) out[p] += a * zs[s];
    }
  }
  for (const Eta& e : etas_) {
    const double zp = out[e.p] / e.pivot;
    out[e.p] = zp;
    if (zp == 0.0) continue;
    for (const auto& [q, a] : e.a) out[q] -= a * zp;
  }
  z.swap(out);
}

// Solves B^T y = d; d is indexed by basis position, the result by row.
void Simplex::Btran(Eigen::VectorXd& y) const {
  if (m_ == 0) return;
  const int k = static_cast<int>(spos_.size());
  for (auto e = etas_.rbegin(); e != etas_.rend(); ++e) {
    double r = y[e->p];
    for (const auto& [q, a] : e->a) r -= a * y[q];
    y[e->p] = r / e->pivot;
  }
  Eigen::VectorXd out = Eigen::VectorXd::Zero(m_);
  for (int i = 0; i < m_; ++i) {
    const int p = lpos_[i];
    if (p >= 0) out[i] = -y[p];
  }
  if (k > 0) {
    Eigen::VectorXd rhs(k);
    for (int s = 0; s < k; ++s) {
      double r = y[spos_[s]];
      for (const auto& [i, a] : cols_[scol_[s]])
        if (lpos_[i] >= 0) r -= a * out[i];
      rhs[s] = r;
    }
    const Eigen::VectorXd yt = lu_.transpose().solve(rhs);
    for (int t = 0; t < k; ++t) out[srow_[t]] = yt[t];
  }
  y.swap(out);
}

bool Simplex::Update(int p, const Eigen::VectorXd& alpha) {
  if (static_cast<int>(etas_.size()) >= opt_.refactor_interval) {
    if (!Factorize()) {
      singular_ = true;
      return true;
    }
    ComputeBasics();
    return true;
  }
  Eta e;
  e.p = p;
  e.pivot = alpha[p];
  for (int q = 0; q < m_; ++q)
    if (q != p && alpha[q] != 0.0) e.a.emplace_back(q, alpha[q]);
  etas_.push_back(std::move(e));
  return false;
}

void Simplex::ComputeBasics() {
  const int total = n_ + m_;
  x_.assign(total, 0.0);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m_);
  for (int j = 0; j < total; ++j) {
    if (st_[j] == VarStatus::kBasic) continue;
    x_[j] = st_[j] == VarStatus::kAtLower ? lo_[j] : up_[j];
    if (x_[j] == 0.0) continue;
    if (j < n_) {
      for (const auto& [i, a] : cols_[j]) rhs[i] -= a * x_[j];
    } else {
      rhs[j - n_] += x_[j];
    }
  }
  Ftran(rhs);
  for (int p = 0; p < m_; ++p) x_[head_[p]] = rhs[p];
}

double Simplex::Infeasibility(int j) const {
  const double tol = 1e-9 * (1.0 + std::max(std::abs(x_[j]), 0.0));
  if (x_[j] < lo_[j] - tol) return lo_[j] - x_[j];
  if (x_[j] > up_[j] + tol) return x_[j] - up_[j];
  return 0.0;
}

Simplex::Outcome Simplex::Iterate(long limit) {
  const int total = n_ + m_;
  Eigen::VectorXd y(m_), alpha(m_), col(m_);
  std::vector<double> phase_cost(total, 0.0);
  int degenerate_run = 0;

  while (true) {
    if (iterations_ >= limit) return Outcome::kIterationLimit;

    // Phase selection from the current basic values.
    const double feas = opt_.feasibility_tol * 0.1;
    bool phase1 = false;
    for (int p = 0; p < m_; ++p) {
      const int j = head_[p];
      if (x_[j] < lo_[j] - feas || x_[j] > up_[j] + feas) {
        phase1 = true;
        break;
      }
    }
    for (int p = 0; p < m_; ++p) {
      const int j = head_[p];
      double c = 0.0;
      if (phase1) {
        if (x_[j] < lo_[j] - feas) c = -1.0;
        else if (x_[j] > up_[j] + feas) c = 1.0;
      } else {
        c = cost_[j];
      }
      y[p] = c;
    }
    Btran(y);

    // Pricing.
    int enter = -1;
    double best = 0.0;
    int dir = 0;
    for (int j = 0; j < total; ++j) {
      if (st_[j] == VarStatus::kBasic) continue;
      if (lo_[j] == up_[j]) continue;
      double d = phase1 ? 0.0 : cost_[j];
      if (j < n_) {
        for (const auto& [i, a] : cols_[j]) d -= y[i] * a;
      } else {
        d += y[j - n_];
      }
      int this_dir = 0;
      if (st_[j] == VarStatus::kAtLower && d < -opt_.optimality_tol) this_dir = 1;
      if (st_[j] == VarStatus::kAtUpper && d > opt_.optimality_tol) this_dir = -1;
      if (this_dir == 0) continue;
      if (bland_) {
        enter = j;
        dir = this_dir;
        break;
      }
      if (std::abs(d) > best) {
        best = std::abs(d);
        enter = j;
        dir = this_dir;
      }
    }
    if (enter < 0) return phase1 ? Outcome::kInfeasible : Outcome::kOptimal;

    Column(enter, col);
    alpha = col;
    Ftran(alpha);

    // Ratio test, two passes: bound on the step with a small tolerance, then
    // the largest pivot among the candidates within that bound.
    const double tol = 1e-9;
    double theta_max = up_[enter] - lo_[enter];
    double relaxed = theta_max;
    std::vector<std::pair<int, double>> cand;  // position, exact ratio
    cand.reserve(16);
    for (int p = 0; p < m_; ++p) {
      const double a = alpha[p];
      if (std::abs(a) < opt_.pivot_tol) continue;
      const int j = head_[p];
      const double rate = -dir * a;
      double limit_exact = kInf;
      double limit_relaxed = kInf;
      const bool below = x_[j] < lo_[j] - feas;
      const bool above = x_[j] > up_[j] + feas;
      if (rate > 0.0) {
        const double target = below ? lo_[j] : up_[j];
        if (above) continue;
        if (std::isfinite(target)) {
          limit_exact = (target - x_[j]) / rate;
          limit_relaxed = (target - x_[j] + tol) / rate;
        }
      } else {
        const double target = above ? up_[j] : lo_[j];
        if (below) continue;
        if (std::isfinite(target)) {
          limit_exact = (x_[j] - target) / -rate;
          limit_relaxed = (x_[j] - target + tol) / -rate;
        }
      }
      if (!std::isfinite(limit_exact)) continue;
      relaxed = std::min(relaxed, limit_relaxed);
      cand.emplace_back(p, limit_exact);
    }
    int leave_pos = -1;
    double theta = theta_max;
    if (!cand.empty()) {
      double best_pivot = -1.0;
      double min_exact = kInf;
      for (const auto& [p, r] : cand) min_exact = std::min(min_exact, r);
      for (const auto& [p, r] : cand) {
        if (bland_) {
          if (r > min_exact + 1e-12) continue;
          if (leave_pos < 0 || head_[p] < head_[leave_pos]) leave_pos = p;
        } else {
          if (r > relaxed) continue;
          if (std::abs(alpha[p]) > best_pivot) {
            best_pivot = std::abs(alpha[p]);
            leave_pos = p;
          }
        }
      }
      if (leave_pos >= 0) {
        double r = 0.0;
        for (const auto& [p, rr] : cand)
          if (p == leave_pos) r = rr;
        r = std::max(r, 0.0);
        if (r < theta_max) {
          theta = r;
        } else {
          leave_pos = -1;
        }
      }
    }
    if (!std::isfinite(theta)) {
      if (phase1) return Outcome::kInfeasible;
      return Outcome::kUnbounded;
    }

    ++iterations_;
    degenerate_run = theta < 1e-12 ? degenerate_run + 1 : 0;
    if (degenerate_run > 10 * std::max(1, m_)) bland_ = true;

    // Step.
    const double step = dir * theta;
    x_[enter] += step;
    for (int p = 0; p < m_; ++p) x_[head_[p]] -= step * alpha[p];

    if (leave_pos < 0) {
      // Bound flip of the entering variable.
      st_[enter] = dir > 0 ? VarStatus::kAtUpper : VarStatus::kAtLower;
      x_[enter] = dir > 0 ? up_[enter] : lo_[enter];
      continue;
    }

    const int leave = head_[leave_pos];
    const double rate = -dir * alpha[leave_pos];
    // The leaving variable sits at the bound it moved onto.
    if (rate > 0.0) {
      const bool to_lower = std::abs(x_[leave] - lo_[leave]) <
                            std::abs(x_[leave] - up_[leave]);
      st_[leave] = to_lower ? VarStatus::kAtLower : VarStatus::kAtUpper;
    } else {
      const bool to_upper = std::abs(x_[leave] - up_[leave]) <
                            std::abs(x_[leave] - lo_[leave]);
      st_[leave] = to_upper ? VarStatus::kAtUpper : VarStatus::kAtLower;
    }
    if (st_[leave] == VarStatus::kAtLower && !std::isfinite(lo_[leave]))
      st_[leave] = VarStatus::kAtUpper;
    if (st_[leave] == VarStatus::kAtUpper && !std::isfinite(up_[leave]))
      st_[leave] = VarStatus::kAtLower;
    x_[leave] = st_[leave] == VarStatus::kAtLower ? lo_[leave] : up_[leave];
    pos_[leave] = -1;
    head_[leave_pos] = enter;
    pos_[enter] = leave_pos;
    st_[enter] = VarStatus::kBasic;

    Update(leave_pos, alpha);
    if (singular_) return Outcome::kSingular;
  }
}

void Simplex::ReducedCosts(std::vector<double>& d) const {
  const int total = n_ + m_;
  Eigen::VectorXd y(m_);
  for (int p = 0; p < m_; ++p) y[p] = cost_[head_[p]];
  Btran(y);
  d.assign(total, 0.0);
  for (int j = 0; j < total; ++j) {
    if (st_[j] == VarStatus::kBasic) continue;
    double v = cost_[j];
    if (j < n_) {
      for (const auto& [i, a] : cols_[j]) v -= y[i] * a;
    } else {
      v += y[j - n_];
    }
    d[j] = v;
  }
}

bool Simplex::MakeDualFeasible(const std::vector<double>& d) {
  bool flipped = false;
  for (int j = 0; j < n_ + m_; ++j) {
    if (st_[j] == VarStatus::kBasic || lo_[j] == up_[j]) continue;
    if (st_[j] == VarStatus::kAtLower && d[j] < -opt_.optimality_tol) {
      st_[j] = VarStatus::kAtUpper;
      flipped = true;
    } else if (st_[j] == VarStatus::kAtUpper && d[j] > opt_.optimality_tol) {
      st_[j] = VarStatus::kAtLower;
      flipped = true;
    }
  }
  return flipped;
}

Simplex::Outcome Simplex::DualIterate(long limit) {
  const int total = n_ + m_;
  Eigen::VectorXd rho(m_), col(m_);
  std::vector<double> d, row(total, 0.0);
  const double feas = opt_.feasibility_tol * 0.1;
  // Reduced costs are updated along with the basis and recomputed on every
  // refresh of the basic values.
  bool fresh = false;
  while (true) {
    if (iterations_ >= limit) return Outcome::kIterationLimit;
    if (!fresh) {
      ReducedCosts(d);
      fresh = true;
    }
    if (MakeDualFeasible(d)) ComputeBasics();

    // Leaving row: the largest bound violation.
    int leave_pos = -1;
    double worst = feas;
    for (int p = 0; p < m_; ++p) {
      const int j = head_[p];
      const double v = std::max(lo_[j] - x_[j], x_[j] - up_[j]);
      if (v > worst) {
        worst = v;
        leave_pos = p;
      }
    }
    if (leave_pos < 0) return Outcome::kOptimal;
    const int leave = head_[leave_pos];
    const bool below = x_[leave] < lo_[leave];

    // Row of B^-1 [A | -I] at the leaving position.
    rho.setZero(m_);
    rho[leave_pos] = 1.0;
    Btran(rho);
    for (int j = 0; j < total; ++j) {
      if (st_[j] == VarStatus::kBasic) continue;
      double a = 0.0;
      if (j < n_) {
        for (const auto& [i, v] : cols_[j]) a += rho[i] * v;
      } else {
        a = -rho[j - n_];
      }
      row[j] = a;
    }

    // Dual ratio test in two passes.
    // Reduced cost in the direction the variable may move; slightly wrong
    // signs count as zero.
    auto DualSlack = [&](int j) {
      return std::max(0.0, st_[j] == VarStatus::kAtLower ? d[j] : -d[j]);
    };
    auto eligible = [&](int j) {
      if (st_[j] == VarStatus::kBasic || lo_[j] == up_[j]) return false;
      const double a = row[j];
      const bool at_lower = st_[j] == VarStatus::kAtLower;
      // x_leave changes by -a per unit increase of x_j.
      if (below) return at_lower ? a < -opt_.pivot_tol : a > opt_.pivot_tol;
      return at_lower ? a > opt_.pivot_tol : a < -opt_.pivot_tol;
    };
    double bound = kInf;
    for (int j = 0; j < total; ++j) {
      if (!eligible(j)) continue;
      bound = std::min(bound, (DualSlack(j) + opt_.optimality_tol) / std::abs(row[j]));
    }
    if (bound == kInf) return Outcome::kInfeasible;
    int enter = -1;
    double best_pivot = 0.0;
    for (int j = 0; j < total; ++j) {
      if (!eligible(j)) continue;
      if (DualSlack(j) / std::abs(row[j]) > bound) continue;
      if (std::abs(row[j]) > best_pivot) {
        best_pivot = std::abs(row[j]);
        enter = j;
      }
    }

    Column(enter, col);
    Ftran(col);
    const double piv = col[leave_pos];
    const bool drift = std::abs(piv - row[enter]) > 1e-6 * (1.0 + std::abs(piv));
    if (std::abs(piv) < opt_.pivot_tol || (drift && !etas_.empty())) {
      // The factorization disagrees with the row; rebuild and retry.
      if (!Factorize()) return Outcome::kSingular;
      ComputeBasics();
      fresh = false;
      ++iterations_;
      continue;
    }
    const double target = below ? lo_[leave] : up_[leave];
    const double step = (x_[leave] - target) / piv;
    x_[enter] += step;
    for (int p = 0; p < m_; ++p) x_[head_[p]] -= step * col[p];
    const double dstep = d[enter] / row[enter];
    for (int j = 0; j < total; ++j)
      if (st_[j] != VarStatus::kBasic) d[j] -= dstep * row[j];
    d[enter] = 0.0;
    d[leave] = -dstep;
    st_[leave] = below ? VarStatus::kAtLower : VarStatus::kAtUpper;
    x_[leave] = target;
    pos_[leave] = -1;
    head_[leave_pos] = enter;
    pos_[enter] = leave_pos;
    st_[enter] = VarStatus::kBasic;
    ++iterations_;
    if (Update(leave_pos, col)) fresh = false;
    if (singular_) return Outcome::kSingular;
  }
}

LpSolution Simplex::Extract(LpStatus status) const {
  LpSolution sol;
  sol.status = status;
  sol.iterations = iterations_;
  sol.x.assign(x_.begin(), x_.begin() + n_);
  sol.row_activity.assign(x_.begin() + n_, x_.end());
  double obj = 0.0;
  for (int j = 0; j < n_; ++j) obj += cost_[j] * x_[j];
  sol.objective = obj;
  sol.basis.status = st_;
  return sol;
}

LpSolution Simplex::Run(const LpBasis* warm) {
  bool loaded = warm && !warm->empty() && LoadBasis(*warm);
  if (loaded && !Factorize()) loaded = false;
  if (!loaded) {
    SetSlackBasis();
    if (!Factorize()) throw NumericalFailure("slack basis is singular");
  }
  ComputeBasics();

  // Dual simplex first; the primal loop below finishes or repairs.
  const Outcome dual = DualIterate(opt_.max_iterations);
  if (dual == Outcome::kSingular) {
    singular_ = false;
    SetSlackBasis();
    if (!Factorize()) throw NumericalFailure("slack basis is singular");
  }
  if (dual == Outcome::kInfeasible) {
    if (Factorize()) {
      ComputeBasics();
      double worst = 0.0;
      for (int p = 0; p < m_; ++p) worst = std::max(worst, Infeasibility(head_[p]));
      if (worst > opt_.feasibility_tol) return Extract(LpStatus::kInfeasible);
    }
  }
  const long dual_iterations = iterations_;
  if (!Factorize()) {
    SetSlackBasis();
    if (!Factorize()) throw NumericalFailure("slack basis is singular");
  }
  ComputeBasics();

  for (int attempt = 0; attempt < 3; ++attempt) {
    const Outcome out = Iterate(dual_iterations + opt_.max_iterations * (attempt + 1));
    singular_ = false;
    if (out == Outcome::kIterationLimit || out == Outcome::kSingular) {
      if (attempt == 0) {
        // Restart once from scratch with Bland's rule.
        bland_ = true;
        SetSlackBasis();
        if (!Factorize()) throw NumericalFailure("slack basis is singular");
        ComputeBasics();
        continue;
      }
      throw NumericalFailure("simplex iteration limit reached or basis singular");
    }
    if (out == Outcome::kUnbounded) return Extract(LpStatus::kUnbounded);
    // Re-verify on a fresh factorization before reporting.
    if (!Factorize()) {
      SetSlackBasis();
      if (!Factorize()) throw NumericalFailure("slack basis is singular");
      ComputeBasics();
      continue;
    }
    ComputeBasics();
    double worst = 0.0;
    for (int p = 0; p < m_; ++p) worst = std::max(worst, Infeasibility(head_[p]));
    if (out == Outcome::kInfeasible) {
      if (worst > opt_.feasibility_tol) return Extract(LpStatus::kInfeasible);
      continue;  // drift made it look infeasible; iterate again
    }
    if (worst <= opt_.feasibility_tol) {
      // Clamp tiny violations so callers see values inside the bounds.
      for (int p = 0; p < m_; ++p) {
        const int j = head_[p];
        x_[j] = std::clamp(x_[j], lo_[j], up_[j]);
      }
      return Extract(LpStatus::kOptimal);
    }
  }
  throw NumericalFailure("simplex could not reach a verified optimum");
}

}  // namespace

LpSolution lp_solve(const LpProblem& problem, const LpBasis* warm_start,
                    const LpOptions& options) {
  Simplex s(problem, options);
  return s.Run(warm_start);
}

std::string dump_lp(const LpProblem& p) {
  std::ostringstream os;
  os.precision(17);
  os << "BOUNDS\n";
  for (int j = 0; j < p.num_cols(); ++j) {
    const std::string name =
        j < static_cast<int>(p.names.size()) && !p.names[j].empty()
            ? p.names[j]
            : "c" + std::to_string(j);
    os << j << ' ' << name << ' ' << p.lower[j] << ' ' << p.upper[j] << ' '
       << p.cost[j] << '\n';
  }
  os << "ROWS\n";
  for (int i = 0; i < p.num_rows(); ++i) {
    const LpRow& r = p.rows[i];
    const char* sense = r.sense == RowSense::kLessEqual ? "<="
                        : r.sense == RowSense::kEqual   ? "="
                                                        : ">=";
    os << i << ' ' << sense << ' ' << r.rhs;
    for (const auto& [j, a] : r.terms) os << ' ' << j << ':' << a;
    os << '\n';
  }
  return os.str();
}

double max_violation(const LpProblem& p, const std::vector<double>& x) {
  double worst = 0.0;
  for (int j = 0; j < p.num_cols(); ++j) {
    worst = std::max(worst, p.lower[j] - x[j]);
    worst = std::max(worst, x[j] - p.upper[j]);
  }
  for (const LpRow& r : p.rows) {
    double lhs = 0.0;
    for (const auto& [j, a] : r.terms) lhs += a * x[j];
    if (r.sense != RowSense::kGreaterEqual) worst = std::max(worst, lhs - r.rhs);
    if (r.sense != RowSense::kLessEqual) worst = std::max(worst, r.rhs - lhs);
  }
  return worst;
}

}  // namespace gnlopt
