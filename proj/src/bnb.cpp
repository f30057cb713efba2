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

#include "gnlopt/bnb.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <queue>

#include "gnlopt/errors.hpp"

namespace gnlopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double round_rel(double v, double scale) {
  return std::nearbyint(v / scale * 1e12);
}

}  // namespace

bool CutPool::add(const PoolCut& cut) { return insert(cut).second; }

std::pair<int, bool> CutPool::insert(const PoolCut& cut) {
  double scale = 0.0;
  for (const auto& [j, a] : cut.row.terms) scale = std::max(scale, std::abs(a));
  if (scale == 0.0) return {-1, false};
  std::vector<double> key;
  key.reserve(2 * cut.row.terms.size() + 3);
  key.push_back(static_cast<double>(cut.origin));
  key.push_back(static_cast<double>(cut.row.sense));
  auto terms = cut.row.terms;
  std::sort(terms.begin(), terms.end());
  for (const auto& [j, a] : terms) {
    key.push_back(j);
    key.push_back(round_rel(a, scale));
  }
  key.push_back(round_rel(cut.row.rhs, scale));
  const auto [it, fresh] = keys_.emplace(std::move(key), size());
  if (!fresh) return {it->second, false};
  cuts_.push_back(cut);
  return {it->second, true};
}

std::map<CutOrigin, long> CutPool::counts() const {
  std::map<CutOrigin, long> out;
  for (const auto& c : cuts_) ++out[c.origin];
  return out;
}

const char* to_string(Termination t) {
  switch (t) {
    case Termination::kOptimal: return "optimal";
    case Termination::kInfeasible: return "infeasible";
    case Termination::kNodeLimit: return "node_limit";
    case Termination::kTimeLimit: return "time_limit";
    case Termination::kTargetReached: return "target_reached";
    case Termination::kCutoff: return "cutoff";
  }
  return "unknown";
}

PoolCut to_pool_cut(const LinearCut& cut,
                    const std::function<int(const VarRef&)>& column) {
  PoolCut pc;
  pc.origin = cut.origin;
  pc.row.sense = cut.sense == CutSense::kLessEqual ? RowSense::kLessEqual
                                                   : RowSense::kGreaterEqual;
  pc.row.rhs = cut.rhs;
  for (const auto& [ref, c] : cut.coeffs) {
    const int j = column(ref);
    if (j < 0) throw InvalidArgument("cut references " + to_string(ref) +
                                     ", which has no column");
    pc.row.terms.emplace_back(j, c);
  }
  return pc;
}

namespace {

struct Node {
  double bound = -kInf;
  long id = 0;
  int depth = 0;
  std::vector<std::int8_t> fix;  // per binary: -1 free, 0 or 1 fixed
  std::shared_ptr<const LpBasis> basis;
  // Pool cuts in the LP the basis belongs to, in row order, and the pool
  // size when it was saved; cuts added later enter with basic logicals.
  std::shared_ptr<const std::vector<int>> active;
  int pool_mark = 0;
};

class BranchAndCut {
 public:
  BranchAndCut(const LpProblem& problem, const std::vector<int>& binaries,
               const BnbHooks& hooks, const BnbConfig& config, CutPool& pool)
      : base_(problem), work_(problem), binaries_(binaries), hooks_(hooks),
        cfg_(config), pool_(pool) {
    for (int j : binaries_) {
      if (j < 0 || j >= problem.num_cols())
        throw DimensionError("binary column out of range");
      if (problem.lower[j] < 0.0 || problem.upper[j] > 1.0)
        throw InvalidArgument("binary columns need bounds inside [0,1]");
    }
    base_rows_ = problem.num_rows();
    cuts_before_ = pool_.counts();
  }

  SolveResult Run();

 private:
  double Elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }
  // Rebuilds the cut rows of the work LP from a node's saved list.
  void LoadRows(const Node& node);
  void Activate(int index);
  int AddCuts(const std::vector<PoolCut>& cuts);
  // Activates pool cuts the point violates; returns how many.
  int ActivateViolated(const std::vector<double>& x);
  // Drops slack cut rows from the node's saved LP.
  void Purge(Node& node, const LpSolution& sol) const;
  bool Feasible(const std::vector<double>& x) const;
  void Offer(const Candidate& c);
  bool Prunable(double bound) const;
  // Returns true when the node must be branched on; fills the branching
  // column and the node bound.
  bool Process(Node& node, int* branch_on);

  const LpProblem& base_;
  LpProblem work_;
  std::vector<int> binaries_;
  const BnbHooks& hooks_;
  BnbConfig cfg_;
  CutPool& pool_;
  int base_rows_ = 0;
  std::vector<int> active_;
  std::vector<char> in_lp_;
  std::map<CutOrigin, long> cuts_before_;
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
  SolveResult res_;
  double cutoff_min_ = kInf;  // smallest bound discarded by the cutoff
  bool target_hit_ = false;
  long next_id_ = 0;
};

void BranchAndCut::LoadRows(const Node& node) {
  work_.rows.resize(base_rows_);
  active_.clear();
  in_lp_.assign(pool_.size(), 0);
  if (node.active) {
    for (int i : *node.active) Activate(i);
    for (int i = node.pool_mark; i < pool_.size(); ++i) Activate(i);
  } else {
    for (int i = 0; i < pool_.size(); ++i) Activate(i);
  }
}

void BranchAndCut::Activate(int index) {
  if (index >= static_cast<int>(in_lp_.size())) in_lp_.resize(pool_.size(), 0);
  if (in_lp_[index]) return;
  in_lp_[index] = 1;
  active_.push_back(index);
  work_.rows.push_back(pool_.cuts()[index].row);
}

int BranchAndCut::AddCuts(const std::vector<PoolCut>& cuts) {
  int added = 0;
  for (const auto& c : cuts) {
    const auto [index, fresh] = pool_.insert(c);
    if (index < 0) continue;
    if (index < static_cast<int>(in_lp_.size()) && in_lp_[index]) continue;
    Activate(index);
    ++added;
  }
  return added;
}

int BranchAndCut::ActivateViolated(const std::vector<double>& x) {
  int added = 0;
  in_lp_.resize(pool_.size(), 0);
  for (int i = 0; i < pool_.size(); ++i) {
    if (in_lp_[i]) continue;
    const LpRow& r = pool_.cuts()[i].row;
    double lhs = 0.0;
    for (const auto& [j, a] : r.terms) lhs += a * x[j];
    const double tol = 1e-9 * (1.0 + std::abs(r.rhs));
    const bool bad = r.sense == RowSense::kLessEqual ? lhs > r.rhs + tol
                     : r.sense == RowSense::kGreaterEqual ? lhs < r.rhs - tol
                                                          : std::abs(lhs - r.rhs) > tol;
    if (bad) {
      Activate(i);
      ++added;
    }
  }
  return added;
}

void BranchAndCut::Purge(Node& node, const LpSolution& sol) const {
  const int n = work_.num_cols();
  LpBasis basis;
  basis.status.assign(sol.basis.status.begin(), sol.basis.status.begin() + n + base_rows_);
  auto keep = std::make_shared<std::vector<int>>();
  for (std::size_t k = 0; k < active_.size(); ++k) {
    const int row = base_rows_ + static_cast<int>(k);
    const LpRow& r = work_.rows[row];
    const double slack = r.sense == RowSense::kLessEqual ? r.rhs - sol.row_activity[row]
                                                         : sol.row_activity[row] - r.rhs;
    const VarStatus st = sol.basis.status[n + row];
    if (st == VarStatus::kBasic && slack > 1e-6 * (1.0 + std::abs(r.rhs))) continue;
    keep->push_back(active_[k]);
    basis.status.push_back(st);
  }
  node.basis = std::make_shared<const LpBasis>(std::move(basis));
  node.active = std::move(keep);
  node.pool_mark = pool_.size();
}

bool BranchAndCut::Feasible(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != work_.num_cols()) return false;
  for (int j = 0; j < work_.num_cols(); ++j) {
    const double tol = 1e-6 * (1.0 + std::abs(base_.upper[j]));
    if (x[j] < base_.lower[j] - tol || x[j] > base_.upper[j] + tol) return false;
  }
  for (int j : binaries_)
    if (std::min(x[j], 1.0 - x[j]) > cfg_.integrality_tol) return false;
  auto holds = [&](const LpRow& r) {
    double lhs = 0.0;
    for (const auto& [j, a] : r.terms) lhs += a * x[j];
    const double tol = 1e-6 * (1.0 + std::abs(r.rhs));
    if (r.sense != RowSense::kGreaterEqual && lhs > r.rhs + tol) return false;
    if (r.sense != RowSense::kLessEqual && lhs < r.rhs - tol) return false;
    return true;
  };
  for (const LpRow& r : base_.rows)
    if (!holds(r)) return false;
  for (const PoolCut& c : pool_.cuts())
    if (!holds(c.row)) return false;
  return true;
}

void BranchAndCut::Offer(const Candidate& c) {
  if (c.objective >= res_.objective) return;
  if (!Feasible(c.values)) return;
  res_.has_incumbent = true;
  res_.values = c.values;
  res_.objective = c.objective;
  if (cfg_.target && c.objective <= *cfg_.target) target_hit_ = true;
}

bool BranchAndCut::Prunable(double bound) const {
  if (cfg_.cutoff && bound > *cfg_.cutoff) return true;
  if (!res_.has_incumbent) return false;
  return bound >= res_.objective - cfg_.rel_gap * std::max(1.0, std::abs(res_.objective));
}

bool BranchAndCut::Process(Node& node, int* branch_on) {
  // Apply the node's fixings.
  for (std::size_t b = 0; b < binaries_.size(); ++b) {
    const int j = binaries_[b];
    work_.lower[j] = node.fix[b] == 1 ? 1.0 : base_.lower[j];
    work_.upper[j] = node.fix[b] == 0 ? 0.0 : base_.upper[j];
  }
  if (hooks_.tighten) hooks_.tighten(node.fix, work_);
  LoadRows(node);
  const int max_rounds = node.depth == 0 ? cfg_.root_cut_rounds : cfg_.node_cut_rounds;
  int rounds = 0;
  int lazy_rounds = 0;
  int stalled = 0;
  double last_bound = -kInf;
  bool heuristic_done = false;
  while (true) {
    LpSolution sol = lp_solve(work_, node.basis.get(), cfg_.lp);
    res_.lp_iterations += sol.iterations;
    if (sol.status == LpStatus::kInfeasible) return false;
    if (sol.status == LpStatus::kUnbounded)
      throw NumericalFailure("node relaxation is unbounded");
    node.basis = std::make_shared<const LpBasis>(sol.basis);
    if (ActivateViolated(sol.x) > 0) continue;
    node.bound = std::max(node.bound, sol.objective);
    if (cfg_.cutoff && node.bound > *cfg_.cutoff) {
      cutoff_min_ = std::min(cutoff_min_, node.bound);
      return false;
    }
    if (Prunable(node.bound)) return false;

    int best = -1;
    double best_frac = cfg_.integrality_tol;
    for (std::size_t b = 0; b < binaries_.size(); ++b) {
      const double v = sol.x[binaries_[b]];
      const double frac = std::min(v - std::floor(v), std::ceil(v) - v);
      if (frac > best_frac + 1e-15) {
        best_frac = frac;
        best = static_cast<int>(b);
      }
    }

    if (best < 0) {
      // Integral: lazy constraint check.
      for (int j : binaries_) sol.x[j] = std::round(sol.x[j]);
      SeparationResult sep;
      if (hooks_.separate) sep = hooks_.separate(sol.x, true);
      if (!sep.cuts.empty() && AddCuts(sep.cuts) > 0) {
        if (++lazy_rounds > 2000)
          throw NumericalFailure("lazy separation does not converge");
        continue;
      }
      // No new cut: the point is accepted.
      if (sep.exact) {
        Offer(*sep.exact);
      } else {
        Offer({sol.x, sol.objective});
      }
      return false;
    }

    if (hooks_.heuristic && !heuristic_done) {
      heuristic_done = true;
      if (auto cand = hooks_.heuristic(sol.x)) Offer(*cand);
      if (target_hit_) return false;
      if (Prunable(node.bound)) return false;
    }

    if (rounds < max_rounds && hooks_.separate) {
      const double improve = node.bound - last_bound;
      if (improve < cfg_.cut_stall_tol * (1.0 + std::abs(node.bound))) ++stalled;
      else stalled = 0;
      last_bound = node.bound;
      if (stalled < 2) {
        SeparationResult sep = hooks_.separate(sol.x, false);
        if (!sep.cuts.empty() && AddCuts(sep.cuts) > 0) {
          ++rounds;
          continue;
        }
      }
    }
    *branch_on = best;
    Purge(node, sol);
    return true;
  }
}

SolveResult BranchAndCut::Run() {
  for (const auto& c : hooks_.starts) Offer(c);

  auto cmp = [this](const Node& a, const Node& b) {
    if (cfg_.node_selection == NodeSelection::kDepthFirst) {
      if (a.depth != b.depth) return a.depth < b.depth;
      return a.id < b.id;
    }
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.id > b.id;
  };
  std::priority_queue<Node, std::vector<Node>, decltype(cmp)> open(cmp);
  Node root;
  root.id = next_id_++;
  root.fix.assign(binaries_.size(), -1);
  open.push(std::move(root));

  double reported_bound = -kInf;
  Termination term = Termination::kOptimal;
  bool limited = false;

  while (!open.empty() && !target_hit_) {
    if (res_.nodes >= cfg_.node_limit) {
      term = Termination::kNodeLimit;
      limited = true;
      break;
    }
    if (Elapsed() > cfg_.time_limit) {
      term = Termination::kTimeLimit;
      limited = true;
      break;
    }
    Node node = open.top();
    open.pop();
    if (Prunable(node.bound)) {
      if (cfg_.cutoff && node.bound > *cfg_.cutoff)
        cutoff_min_ = std::min(cutoff_min_, node.bound);
      continue;
    }
    ++res_.nodes;
    int branch = -1;
    if (Process(node, &branch)) {
      for (int v : {1, 0}) {
        Node child;
        child.bound = node.bound;
        child.id = next_id_++;
        child.depth = node.depth + 1;
        child.fix = node.fix;
        child.fix[branch] = static_cast<std::int8_t>(v);
        child.basis = node.basis;
        child.active = node.active;
        child.pool_mark = node.pool_mark;
        open.push(std::move(child));
      }
    }
    double open_bound = open.empty() ? kInf : open.top().bound;
    if (cfg_.node_selection == NodeSelection::kDepthFirst && !open.empty()) {
      open_bound = kInf;
      auto copy = open;
      while (!copy.empty()) {
        open_bound = std::min(open_bound, copy.top().bound);
        copy.pop();
      }
    }
    double bound = std::min({open_bound, res_.objective, cutoff_min_});
    reported_bound = std::max(reported_bound, std::min(bound, res_.objective));
    if (hooks_.progress)
      hooks_.progress({res_.nodes, reported_bound, res_.objective});
    if (res_.has_incumbent &&
        res_.objective - bound <= cfg_.rel_gap * std::max(1.0, std::abs(res_.objective)))
      break;
  }

  double open_bound = kInf;
  while (!open.empty()) {
    open_bound = std::min(open_bound, open.top().bound);
    open.pop();
  }
  double bound = std::min({open_bound, res_.objective, cutoff_min_});
  if (!std::isfinite(bound) && !res_.has_incumbent && !limited && !target_hit_)
    bound = kInf;  // proven infeasible
  res_.bound = target_hit_ ? reported_bound : std::max(reported_bound, bound);
  if (target_hit_) {
    term = Termination::kTargetReached;
    res_.bound = std::min(res_.bound, res_.objective);
  } else if (!limited) {
    if (res_.has_incumbent && (cutoff_min_ == kInf || cutoff_min_ >= res_.objective))
      term = Termination::kOptimal;
    else if (cutoff_min_ < kInf)
      term = Termination::kCutoff;
    else
      term = res_.has_incumbent ? Termination::kOptimal : Termination::kInfeasible;
  }
  res_.termination = term;
  if (res_.has_incumbent) {
    res_.bound = std::min(res_.bound, res_.objective);
    res_.gap = (res_.objective - res_.bound) / std::max(1.0, std::abs(res_.objective));
  }
  auto after = pool_.counts();
  for (const auto& [origin, count] : after) {
    const long delta = count - (cuts_before_.count(origin) ? cuts_before_[origin] : 0);
    if (delta > 0) res_.cuts[origin] = delta;
  }
  res_.seconds = Elapsed();
  return res_;
}

}  // namespace

SolveResult bnb_solve(const LpProblem& problem, const std::vector<int>& binaries,
                      const BnbHooks& hooks, const BnbConfig& config,
                      CutPool* pool) {
  if (config.integrality_tol <= 0.0 || config.rel_gap < 0.0)
    throw InvalidArgument("tolerances must be positive");
  CutPool local;
  BranchAndCut bc(problem, binaries, hooks, config, pool ? *pool : local);
  return bc.Run();
}

}  // namespace gnlopt
