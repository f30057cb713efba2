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

// Seeded benchmark instances and their JSON form.
//
// Generation:
//   sigma_n ~ U[0.25, 1)
//   nest membership: every product joins one uniform nest, then
//     ceil(gamma m) - m extra (product, nest) entries are drawn with
//     replacement, at most one entry per (product, nest)
//   alpha_in ~ U(0, 1) on memberships, normalized over nests
//   u_i = 1 - U[0, 1), X_i, Y_i ~ U[0.1, 10)
//   V_in = (1 - u_i) Y_i, r_i = u_i^2 X_i, V0_n = 1
//   mixed: Y_ti per segment, theta_t ~ U(0, 1) normalized
//   discrete prices: mu_i ~ U[-1, 1), eta_i, gamma_i ~ U(0, 1),
//     p_il = l gamma_i + 0.5 for l = 1..L, kappa_i = mu_i
//   continuous prices: L_i = 0.5, U_i = 0.5 gamma_i + 0.5, eta and kappa
//     drawn as for discrete prices
//   rows: sum_i x_i <= ceil(0.5 m) and, per nest, sum_{i in S_n} x_i <=
//     ceil(0.8 |S_n|)
//
// Each field family draws from its own stream, so the draws of one family
// do not depend on the others.

#ifndef GNLOPT_INSTANCES_HPP_
#define GNLOPT_INSTANCES_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gnlopt/choice_model.hpp"
#include "gnlopt/pricing.hpp"

namespace gnlopt {

enum class InstanceKind { kGnl, kMgnl, kJapDp, kJapCp };

const char* to_string(InstanceKind kind);
// Accepts "gnl", "mgnl", "jap_dp", "jap_cp" in any letter case.
InstanceKind parse_kind(const std::string& text);

struct GenSpec {
  InstanceKind kind = InstanceKind::kGnl;
  int m = 10;
  int n_nests = 2;
  int segments = 1;  // mixed instances
  int levels = 3;    // discrete price ladders
  double cross_rate = 1.2;
  std::uint64_t seed = 0;
  bool with_constraints = true;
};

void validate_spec(const GenSpec& spec);

inline constexpr int kSchemaVersion = 1;

struct Instance {
  InstanceKind kind = InstanceKind::kGnl;
  int m = 0;
  int n_nests = 0;
  GnlModel model;  // the model, or the pricing shell (v and r unused)
  MgnlModel mixed;  // mixed instances only
  LinearConstraintSet constraints;
  std::optional<PriceLadder> ladder;
  std::optional<PriceBounds> bounds;
  std::uint64_t seed = 0;
  // Raw draws and settings kept for reference (u, X, Y, gamma, mu, ...).
  std::map<std::string, std::vector<double>> gen_params;
};

Instance generate(const GenSpec& spec);

std::string to_json(const Instance& instance);
// Throws ParseError on malformed text or a schema mismatch and KindMismatch
// when `expect` is given and differs.
Instance from_json(const std::string& text,
                   std::optional<InstanceKind> expect = std::nullopt);

void save(const Instance& instance, const std::string& path);
Instance load(const std::string& path,
              std::optional<InstanceKind> expect = std::nullopt);

}  // namespace gnlopt

#endif  // GNLOPT_INSTANCES_HPP_
