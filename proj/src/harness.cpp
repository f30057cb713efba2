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

#include "gnlopt/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <map>
#include <thread>
#include <tuple>

#include "gnlopt/assortment.hpp"
#include "gnlopt/errors.hpp"
#include "gnlopt/oracle.hpp"
#include "gnlopt/pricing.hpp"

namespace gnlopt {

namespace {

constexpr const char* kMethods[] = {"bisection", "logconvex", "zero_optout", "mgnl",
                                    "jap_dp",    "jap_cp",    "oracle"};

AssortConfig assort_config(const RunOptions& o) {
  AssortConfig c;
  c.bnb.rel_gap = o.rel_gap;
  c.bnb.time_limit = o.time_limit;
  c.bnb.node_limit = o.node_limit;
  return c;
}

void count_cuts(RunRecord& r, const std::map<CutOrigin, long>& cuts) {
  for (const auto& [origin, n] : cuts) {
    if (origin == CutOrigin::kMcCormick) r.cuts_mc += n;
    else if (is_submodular(origin)) r.cuts_sc += n;
    else if (is_outer_approximation(origin)) r.cuts_oa += n;
  }
}

void from_assortment(RunRecord& r, const AssortmentResult& res) {
  r.nodes = res.solve.nodes;
  count_cuts(r, res.solve.cuts);
  r.termination = to_string(res.termination);
  if (!res.feasible) {
    if (res.termination == Termination::kOptimal) r.termination = "infeasible";
    return;
  }
  r.has_objective = true;
  r.objective = res.revenue;
  r.bound = res.bound;
  r.gap = res.gap;
}

void from_oracle(RunRecord& r, const OracleResult& o) {
  r.nodes = o.evaluated;
  if (!o.feasible) {
    r.termination = "infeasible";
    return;
  }
  r.has_objective = true;
  r.objective = o.objective;
  r.bound = o.objective;
  r.gap = 0.0;
  r.termination = "optimal";
}

void require_kind(const Instance& in, std::initializer_list<InstanceKind> kinds,
                  const std::string& method) {
  for (InstanceKind k : kinds)
    if (in.kind == k) return;
  throw KindMismatch("method " + method + " does not apply to " + to_string(in.kind) +
                     " instances");
}

void run_into(RunRecord& r, const Instance& in, const std::string& method,
              const RunOptions& o) {
  const AssortConfig cfg = assort_config(o);
  if (method == "bisection" || method == "logconvex" || method == "zero_optout") {
    require_kind(in, {InstanceKind::kGnl}, method);
    const double beta = choose_beta(in.model);
    if (method == "bisection")
      from_assortment(r, solve_gnl_bisection(in.model, in.constraints, beta,
                                             o.bisection_tol, cfg));
    else if (method == "logconvex")
      from_assortment(r, solve_gnl_logconvex(in.model, in.constraints, beta, cfg));
    else
      from_assortment(r, solve_zero_optout(in.model, in.constraints, beta, cfg));
  } else if (method == "mgnl") {
    require_kind(in, {InstanceKind::kMgnl}, method);
    from_assortment(r, solve_mgnl(in.mixed, in.constraints, choose_beta(in.mixed), cfg));
  } else if (method == "jap_dp") {
    require_kind(in, {InstanceKind::kJapDp}, method);
    JapDpConfig dc;
    dc.assort = cfg;
    dc.bisection_tol = o.bisection_tol;
    const JapDpResult res = solve_jap_dp(in.model, *in.ladder, in.constraints, dc);
    from_assortment(r, res.solve);
    if (r.has_objective) {
      r.objective = res.revenue;
      r.bound = res.bound;
      r.gap = (res.bound - res.revenue) / std::max(1.0, std::abs(res.revenue));
    }
  } else if (method == "jap_cp") {
    require_kind(in, {InstanceKind::kJapCp}, method);
    CpConfig cc;
    cc.dp.assort = cfg;
    cc.dp.bisection_tol = o.bisection_tol;
    const CpSolveReport rep = solve_jap_cp(in.model, *in.bounds, in.constraints,
                                           o.epsilon, cc);
    r.nodes = rep.nodes;
    r.has_objective = true;
    r.objective = rep.revenue;
    // No proven bound for continuous prices.
    r.bound = std::numeric_limits<double>::quiet_NaN();
    r.gap = std::numeric_limits<double>::quiet_NaN();
    r.termination = "heuristic";
  } else if (method == "oracle") {
    switch (in.kind) {
      case InstanceKind::kGnl:
        r.method = "oracle_enum";
        from_oracle(r, enumerate_assortments(in.model, in.constraints));
        break;
      case InstanceKind::kMgnl:
        r.method = "oracle_enum";
        from_oracle(r, enumerate_assortments(in.mixed, in.constraints));
        break;
      case InstanceKind::kJapDp:
        r.method = "oracle_jap_dp";
        from_oracle(r, enumerate_jap_dp(in.model, *in.ladder, in.constraints));
        break;
      case InstanceKind::kJapCp:
        r.method = "oracle_jap_cp";
        from_oracle(r, enumerate_jap_cp(in.model, *in.bounds, in.constraints,
                                        o.oracle_grid, o.oracle_starts));
        // Grid search: a lower estimate, not a certificate.
        r.bound = std::numeric_limits<double>::quiet_NaN();
        r.gap = std::numeric_limits<double>::quiet_NaN();
        if (r.has_objective) r.termination = "heuristic";
        break;
    }
  } else {
    throw InvalidArgument("unknown method: " + method);
  }
}

std::string real(double v, const char* fmt) {
  if (std::isnan(v)) return "";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

// Commas and quotes in free text would break the table.
std::string field(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '"', '\'');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

}  // namespace

std::vector<std::string> default_methods(InstanceKind kind) {
  switch (kind) {
    case InstanceKind::kGnl: return {"bisection", "logconvex"};
    case InstanceKind::kMgnl: return {"mgnl"};
    case InstanceKind::kJapDp: return {"jap_dp"};
    case InstanceKind::kJapCp: return {"jap_cp"};
  }
  return {};
}

bool is_known_method(const std::string& method) {
  return std::find(std::begin(kMethods), std::end(kMethods), method) != std::end(kMethods);
}

RunRecord run_method(const Instance& instance, const std::string& id,
                     const std::string& method, const RunOptions& options) {
  if (!is_known_method(method)) throw InvalidArgument("unknown method: " + method);
  RunRecord r;
  r.instance = id;
  r.method = method;
  r.seed = options.seed_override.value_or(instance.seed);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    run_into(r, instance, method, options);
  } catch (const std::exception& e) {
    r.has_objective = false;
    r.termination = std::string("error: ") + e.what();
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.seconds = options.timing ? secs : 0.0;
  return r;
}

std::vector<RunRecord> run_bench(
    const std::vector<std::pair<std::string, Instance>>& instances,
    const std::vector<std::string>& methods, const RunOptions& options, int jobs) {
  for (const auto& m : methods)
    if (!is_known_method(m)) throw InvalidArgument("unknown method: " + m);
  std::vector<std::pair<int, std::string>> tasks;
  for (int i = 0; i < static_cast<int>(instances.size()); ++i) {
    const auto own = methods.empty() || (methods.size() == 1 && methods[0] == "oracle")
                         ? default_methods(instances[i].second.kind)
                         : std::vector<std::string>{};
    for (const auto& m : own) tasks.emplace_back(i, m);
    for (const auto& m : methods) tasks.emplace_back(i, m);
  }
  std::vector<RunRecord> out(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t; (t = next.fetch_add(1)) < tasks.size();) {
      const auto& [i, m] = tasks[t];
      out[t] = run_method(instances[i].second, instances[i].first, m, options);
    }
  };
  const int n = std::clamp(jobs, 1, std::max(1, static_cast<int>(tasks.size())));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < n; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  std::stable_sort(out.begin(), out.end(), [](const RunRecord& a, const RunRecord& b) {
    return std::tie(a.instance, a.method) < std::tie(b.instance, b.method);
  });
  return out;
}

std::string csv_row(const RunRecord& r) {
  std::string s = field(r.instance) + ',' + field(r.method) + ',';
  if (r.has_objective) {
    s += real(r.objective, "%.12g") + ',' + real(r.bound, "%.12g") + ',' +
         real(r.gap, "%.3e") + ',';
  } else {
    s += ",,,";
  }
  s += std::to_string(r.nodes) + ',' + std::to_string(r.cuts_oa) + ',' +
       std::to_string(r.cuts_sc) + ',' + std::to_string(r.cuts_mc) + ',' +
       real(r.seconds, "%.3f") + ',' + std::to_string(r.seed) + ',' + field(r.termination);
  return s;
}

std::string to_csv(const std::vector<RunRecord>& records) {
  std::string s = std::string(kCsvHeader) + '\n';
  for (const auto& r : records) s += csv_row(r) + '\n';
  return s;
}

int exit_code(const RunRecord& r) {
  if (r.termination.rfind("error", 0) == 0) return 4;
  if (r.termination == "infeasible") return 2;
  if (r.termination == "time_limit" || r.termination == "node_limit") return 3;
  return 0;
}

std::optional<std::uint64_t> seed_from_env() {
  const char* v = std::getenv("GNLOPT_SEED");
  if (!v || !*v) return std::nullopt;
  std::uint64_t s = 0;
  const char* end = v + std::strlen(v);
  auto [p, ec] = std::from_chars(v, end, s);
  if (ec != std::errc() || p != end) return std::nullopt;
  return s;
}

}  // namespace gnlopt
