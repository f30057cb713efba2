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

// LP-based branch-and-cut over binary columns with a lazy-cut callback.
//
// The separator is called on every node LP solution. At integral points it
// must return the cuts violated by the point (an empty answer accepts the
// point as incumbent); at fractional points it may return tightening cuts.
// Every cut is global: it goes into one pool shared by all open nodes. A
// node LP holds the pool cuts its parent kept binding plus any the node
// point violates; slack cut rows are dropped before a node is branched on.

#ifndef GNLOPT_BNB_HPP_
#define GNLOPT_BNB_HPP_

#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "gnlopt/cuts.hpp"
#include "gnlopt/lp.hpp"

namespace gnlopt {

struct PoolCut {
  LpRow row;
  CutOrigin origin = CutOrigin::kOther;
};

class CutPool {
 public:
  // Returns false when an equivalent cut (same origin, sense and coefficients
  // up to 1e-12 relative) is already present.
  bool add(const PoolCut& cut);
  // Index of the cut in the pool and whether it was new.
  std::pair<int, bool> insert(const PoolCut& cut);
  int size() const { return static_cast<int>(cuts_.size()); }
  const std::vector<PoolCut>& cuts() const { return cuts_; }
  std::map<CutOrigin, long> counts() const;

 private:
  std::map<std::vector<double>, int> keys_;
  std::vector<PoolCut> cuts_;
};

enum class NodeSelection : std::uint8_t { kBestBound, kDepthFirst };

struct BnbConfig {
  double integrality_tol = 1e-6;
  double rel_gap = 1e-6;
  long node_limit = 10'000'000;
  double time_limit = std::numeric_limits<double>::infinity();  // seconds
  NodeSelection node_selection = NodeSelection::kBestBound;
  int root_cut_rounds = 30;
  int node_cut_rounds = 3;
  // Separation at a node stops after two rounds that each raise the bound by
  // less than this fraction of (1 + |bound|).
  double cut_stall_tol = 1e-7;
  // Nodes whose bound exceeds the cutoff are discarded.
  std::optional<double> cutoff;
  // Stop as soon as an incumbent at or below this value exists.
  std::optional<double> target;
  LpOptions lp;
};

enum class Termination : std::uint8_t {
  kOptimal,
  kInfeasible,
  kNodeLimit,
  kTimeLimit,
  kTargetReached,
  kCutoff,  // search exhausted; everything left was above the cutoff
};

const char* to_string(Termination t);

struct SolveResult {
  bool has_incumbent = false;
  std::vector<double> values;
  double objective = std::numeric_limits<double>::infinity();
  double bound = -std::numeric_limits<double>::infinity();
  double gap = std::numeric_limits<double>::infinity();
  long nodes = 0;
  long lp_iterations = 0;
  std::map<CutOrigin, long> cuts;
  double seconds = 0.0;
  Termination termination = Termination::kInfeasible;
};

// A complete assignment proposed as incumbent, with its true objective.
struct Candidate {
  std::vector<double> values;
  double objective = 0.0;
};

struct SeparationResult {
  std::vector<PoolCut> cuts;
  // For an accepted integral point: the exactly evaluated assignment that
  // replaces the LP values as incumbent.
  std::optional<Candidate> exact;
};

struct BnbProgress {
  long nodes = 0;
  double bound = 0.0;
  double incumbent = 0.0;
};

struct BnbHooks {
  std::function<SeparationResult(std::span<const double>, bool integral)> separate;
  std::function<std::optional<Candidate>(std::span<const double>)> heuristic;
  std::vector<Candidate> starts;
  std::function<void(const BnbProgress&)> progress;
  // Called before a node is solved with its fixings (per binary: -1 free,
  // 0 or 1). It may tighten column bounds and rewrite rows of the problem
  // given to bnb_solve, provided the changes are valid for every completion
  // of the fixings; it must overwrite everything it changes on every call.
  // Incumbents are checked against the original problem only.
  std::function<void(std::span<const std::int8_t> fix, LpProblem& lp)> tighten;
};

// The pool may be supplied to keep cuts across related solves.
SolveResult bnb_solve(const LpProblem& problem, const std::vector<int>& binaries,
                      const BnbHooks& hooks, const BnbConfig& config,
                      CutPool* pool = nullptr);

// Converts a symbolic cut to an LP row through a column lookup.
PoolCut to_pool_cut(const LinearCut& cut,
                    const std::function<int(const VarRef&)>& column);

}  // namespace gnlopt

#endif  // GNLOPT_BNB_HPP_
