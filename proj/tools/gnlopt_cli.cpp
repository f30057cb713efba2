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

// gnlopt gen | solve | bench. Exit codes: 0 success, 2 infeasible, 3 stopped
// by a limit, 4 error (usage errors included).

#include <algorithm>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gnlopt/harness.hpp"
#include "gnlopt/instances.hpp"

namespace fs = std::filesystem;
using namespace gnlopt;

namespace {

constexpr int kExitError = 4;

void add_run_flags(CLI::App* cmd, RunOptions& o, bool& no_timing) {
  cmd->add_option("--tol", o.bisection_tol, "Bisection bracket tolerance (relative to max(1, beta))")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--rel-gap", o.rel_gap, "Branch-and-cut relative gap")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--time-limit", o.time_limit, "Seconds per solve")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--node-limit", o.node_limit, "Branch-and-cut nodes per solve")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--epsilon", o.epsilon, "Secant accuracy for continuous prices")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--oracle-grid", o.oracle_grid, "Price grid points per axis (oracle)")
      ->check(CLI::Range(2, 100000));
  cmd->add_option("--oracle-starts", o.oracle_starts, "Price oracle random starts")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--no-timing", no_timing, "Write 0 for wall seconds");
}

int cmd_gen(const GenSpec& spec, const std::string& kind, const std::string& out) {
  GenSpec s = spec;
  s.kind = parse_kind(kind);
  save(generate(s), out);
  return 0;
}

int cmd_solve(const std::string& path, std::string method, RunOptions o,
              const std::string& record) {
  const Instance in = load(path);
  if (method.empty()) method = default_methods(in.kind).front();
  const RunRecord r = run_method(in, fs::path(path).stem().string(), method, o);
  if (r.has_objective)
    std::printf("objective %.12g bound %.12g gap %.3e termination %s\n", r.objective,
                r.bound, r.gap, r.termination.c_str());
  else
    std::printf("termination %s\n", r.termination.c_str());
  if (!record.empty()) {
    const bool fresh = !fs::exists(record) || fs::file_size(record) == 0;
    std::ofstream f(record, std::ios::app);
    if (!f) throw std::runtime_error("cannot write " + record);
    if (fresh) f << kCsvHeader << '\n';
    f << csv_row(r) << '\n';
  }
  return exit_code(r);
}

int cmd_bench(const std::string& dir, const std::vector<std::string>& methods,
              bool with_oracle, int jobs, const RunOptions& o, const std::string& csv) {
  if (!fs::is_directory(dir)) throw std::runtime_error("not a directory: " + dir);
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());

  std::vector<std::pair<std::string, Instance>> instances;
  std::vector<RunRecord> failed;
  for (const auto& f : files) {
    try {
      instances.emplace_back(f.stem().string(), load(f.string()));
    } catch (const std::exception& e) {
      RunRecord r;
      r.instance = f.stem().string();
      r.method = "load";
      r.seed = o.seed_override.value_or(0);
      r.termination = std::string("error: ") + e.what();
      failed.push_back(r);
    }
  }
  std::vector<std::string> list = methods;
  if (with_oracle) list.push_back("oracle");
  std::vector<RunRecord> rows = run_bench(instances, list, o, jobs);
  rows.insert(rows.end(), failed.begin(), failed.end());
  std::stable_sort(rows.begin(), rows.end(), [](const RunRecord& a, const RunRecord& b) {
    return std::tie(a.instance, a.method) < std::tie(b.instance, b.method);
  });
  const std::string text = to_csv(rows);
  if (csv.empty() || csv == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
  } else {
    std::ofstream f(csv, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + csv);
    f << text;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Assortment and pricing optimization under generalized nested logit"};
  app.require_subcommand(1);

  GenSpec spec;
  std::string kind = "gnl", out;
  auto* gen = app.add_subcommand("gen", "Generate a seeded instance");
  gen->add_option("--kind", kind, "gnl, mgnl, jap_dp or jap_cp");
  gen->add_option("--m", spec.m, "Products")->check(CLI::PositiveNumber);
  gen->add_option("--nests", spec.n_nests, "Nests")->check(CLI::PositiveNumber);
  gen->add_option("--segments", spec.segments, "Customer segments (mgnl)")
      ->check(CLI::PositiveNumber);
  gen->add_option("--levels", spec.levels, "Price levels per product (jap_dp)")
      ->check(CLI::PositiveNumber);
  gen->add_option("--cross-rate", spec.cross_rate, "Nest entries per product");
  gen->add_option("--seed", spec.seed, "Seed");
  bool no_constraints = false;
  gen->add_flag("--no-constraints", no_constraints, "Omit the cardinality rows");
  gen->add_option("-o,--out", out, "Output file")->required();

  std::string path, method, record;
  RunOptions solve_opts;
  bool solve_no_timing = false;
  auto* solve = app.add_subcommand("solve", "Solve one instance");
  solve->add_option("instance", path, "Instance file")->required();
  solve->add_option("--method", method,
                    "bisection, logconvex, zero_optout, mgnl, jap_dp, jap_cp or oracle");
  solve->add_option("--record", record, "Append the run record to this CSV file");
  add_run_flags(solve, solve_opts, solve_no_timing);

  std::string dir, csv;
  std::vector<std::string> methods;
  bool with_oracle = false;
  int jobs = 1;
  RunOptions bench_opts;
  bool bench_no_timing = false;
  auto* bench = app.add_subcommand("bench", "Run methods over a directory of instances");
  bench->add_option("directory", dir, "Directory of .json instances")->required();
  bench->add_option("--methods", methods, "Methods (default: by instance kind)")
      ->delimiter(',');
  bench->add_flag("--with-oracle", with_oracle, "Add the brute-force oracle rows");
  bench->add_option("--jobs", jobs, "Parallel runs")->check(CLI::PositiveNumber);
  bench->add_option("--csv", csv, "Output CSV (default: stdout)");
  add_run_flags(bench, bench_opts, bench_no_timing);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  try {
    const auto env_seed = seed_from_env();
    if (*gen) {
      spec.with_constraints = !no_constraints;
      return cmd_gen(spec, kind, out);
    }
    if (*solve) {
      solve_opts.timing = !solve_no_timing;
      solve_opts.seed_override = env_seed;
      if (!method.empty() && !is_known_method(method))
        throw std::invalid_argument("unknown method: " + method);
      return cmd_solve(path, method, solve_opts, record);
    }
    bench_opts.timing = !bench_no_timing;
    bench_opts.seed_override = env_seed;
    for (const auto& m : methods)
      if (!is_known_method(m)) throw std::invalid_argument("unknown method: " + m);
    return cmd_bench(dir, methods, with_oracle, jobs, bench_opts, csv);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitError;
  }
}
