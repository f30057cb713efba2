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

#include "gnlopt/instances.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "gnlopt/errors.hpp"
#include "gnlopt/rng.hpp"

namespace gnlopt {

using Json = nlohmann::ordered_json;

const char* to_string(InstanceKind kind) {
  switch (kind) {
    case InstanceKind::kGnl: return "gnl";
    case InstanceKind::kMgnl: return "mgnl";
    case InstanceKind::kJapDp: return "jap_dp";
    case InstanceKind::kJapCp: return "jap_cp";
  }
  return "unknown";
}

InstanceKind parse_kind(const std::string& text) {
  std::string t = text;
  std::transform(t.begin(), t.end(), t.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (t == "gnl") return InstanceKind::kGnl;
  if (t == "mgnl") return InstanceKind::kMgnl;
  if (t == "jap_dp") return InstanceKind::kJapDp;
  if (t == "jap_cp") return InstanceKind::kJapCp;
  throw InvalidArgument("unknown instance kind '" + text + "'");
}

namespace {

// Stream ids, one per field family. Never renumber.
enum Stream : std::uint64_t {
  kSigma = 1,
  kMembership = 2,
  kAlpha = 3,
  kU = 4,
  kX = 5,
  kY = 6,
  kTheta = 7,
  kMu = 8,
  kEta = 9,
  kGamma = 10,
};

// ceil(gamma m), robust to the representation error of gamma.
long entry_count(double gamma, int m) {
  return static_cast<long>(std::ceil(gamma * m - 1e-9));
}

}  // namespace

void validate_spec(const GenSpec& s) {
  if (s.m <= 0) throw InvalidArgument("m must be positive");
  if (s.n_nests <= 0) throw InvalidArgument("the nest count must be positive");
  if (!(s.cross_rate >= 1.0)) throw InvalidArgument("cross rate must be at least 1");
  if (entry_count(s.cross_rate, s.m) > static_cast<long>(s.n_nests) * s.m)
    throw InvalidArgument("more nest entries requested than (product, nest) slots");
  if (s.kind == InstanceKind::kMgnl && s.segments <= 0)
    throw InvalidArgument("mixed instances need at least one segment");
  if (s.kind == InstanceKind::kJapDp && s.levels <= 0)
    throw InvalidArgument("discrete price ladders need at least one level");
}

Instance generate(const GenSpec& s) {
  validate_spec(s);
  const int m = s.m;
  const int nn = s.n_nests;
  Instance inst;
  inst.kind = s.kind;
  inst.m = m;
  inst.n_nests = nn;
  inst.seed = s.seed;

  // Nest structure.
  Eigen::VectorXd sigma(nn);
  Rng rs(s.seed, kSigma);
  for (int n = 0; n < nn; ++n) sigma[n] = rs.uniform(0.25, 1.0);

  std::vector<std::vector<char>> member(m, std::vector<char>(nn, 0));
  Rng rm(s.seed, kMembership);
  for (int i = 0; i < m; ++i) member[i][rm.below(nn)] = 1;
  const long extra = entry_count(s.cross_rate, m) - m;
  for (long e = 0; e < extra; ++e) {
    const int i = static_cast<int>(rm.below(m));
    std::vector<int> free;
    for (int n = 0; n < nn; ++n)
      if (!member[i][n]) free.push_back(n);
    if (free.empty()) continue;
    member[i][free[rm.below(free.size())]] = 1;
  }

  Eigen::MatrixXd alpha = Eigen::MatrixXd::Zero(m, nn);
  Rng ra(s.seed, kAlpha);
  for (int i = 0; i < m; ++i) {
    double sum = 0.0;
    for (int n = 0; n < nn; ++n)
      if (member[i][n]) sum += alpha(i, n) = ra.open_unit();
    alpha.row(i) /= sum;
  }

  GnlModel base;
  base.v0 = Eigen::VectorXd::Ones(nn);
  base.alpha = alpha;
  base.sigma = sigma;
  base.v = Eigen::MatrixXd::Zero(m, nn);
  base.r = Eigen::VectorXd::Zero(m);

  // Rows: global and per-nest cardinality.
  if (s.with_constraints) {
    inst.constraints.a = Eigen::MatrixXd::Zero(1 + nn, m);
    inst.constraints.b.resize(1 + nn);
    inst.constraints.a.row(0).setOnes();
    inst.constraints.b[0] = std::ceil(0.5 * m);
    for (int n = 0; n < nn; ++n) {
      int size = 0;
      for (int i = 0; i < m; ++i)
        if (member[i][n]) {
          inst.constraints.a(1 + n, i) = 1.0;
          ++size;
        }
      inst.constraints.b[1 + n] = std::ceil(0.8 * size);
    }
  } else {
    inst.constraints = LinearConstraintSet::None(m);
  }

  auto fill_weights = [&](GnlModel& g, const std::vector<double>& u,
                          const std::vector<double>& y) {
    for (int i = 0; i < m; ++i)
      for (int n = 0; n < nn; ++n)
        if (member[i][n]) g.v(i, n) = (1.0 - u[i]) * y[i];
  };

  switch (s.kind) {
    case InstanceKind::kGnl:
    case InstanceKind::kMgnl: {
      Rng ru(s.seed, kU), rx(s.seed, kX), ry(s.seed, kY);
      std::vector<double> u(m), x(m);
      for (int i = 0; i < m; ++i) u[i] = ru.half_open_unit();
      for (int i = 0; i < m; ++i) x[i] = rx.uniform(0.1, 10.0);
      for (int i = 0; i < m; ++i) base.r[i] = u[i] * u[i] * x[i];
      inst.gen_params["u"] = u;
      inst.gen_params["X"] = x;
      const int segments = s.kind == InstanceKind::kMgnl ? s.segments : 1;
      std::vector<double> all_y;
      for (int t = 0; t < segments; ++t) {
        std::vector<double> y(m);
        for (int i = 0; i < m; ++i) y[i] = ry.uniform(0.1, 10.0);
        all_y.insert(all_y.end(), y.begin(), y.end());
        GnlModel g = base;
        fill_weights(g, u, y);
        if (s.kind == InstanceKind::kGnl) inst.model = g;
        else inst.mixed.segments.push_back(g);
      }
      inst.gen_params["Y"] = all_y;
      if (s.kind == InstanceKind::kMgnl) {
        Rng rt(s.seed, kTheta);
        inst.mixed.theta.resize(segments);
        for (int t = 0; t < segments; ++t) inst.mixed.theta[t] = rt.open_unit();
        inst.mixed.theta /= inst.mixed.theta.sum();
        inst.model = inst.mixed.segments.front();
      }
      break;
    }
    case InstanceKind::kJapDp:
    case InstanceKind::kJapCp: {
      Rng rmu(s.seed, kMu), reta(s.seed, kEta), rg(s.seed, kGamma);
      Eigen::VectorXd mu(m), eta(m), gamma(m);
      for (int i = 0; i < m; ++i) mu[i] = rmu.uniform(-1.0, 1.0);
      for (int i = 0; i < m; ++i) eta[i] = reta.open_unit();
      for (int i = 0; i < m; ++i) gamma[i] = rg.open_unit();
      inst.gen_params["mu"] = std::vector<double>(mu.data(), mu.data() + m);
      inst.gen_params["gamma"] = std::vector<double>(gamma.data(), gamma.data() + m);
      inst.model = base;
      if (s.kind == InstanceKind::kJapDp) {
        PriceLadder ladder;
        ladder.eta = eta;
        ladder.kappa = mu;
        ladder.prices.resize(m);
        for (int i = 0; i < m; ++i)
          for (int l = 1; l <= s.levels; ++l)
            ladder.prices[i].push_back(l * gamma[i] + 0.5);
        inst.ladder = ladder;
      } else {
        PriceBounds b;
        b.lower = Eigen::VectorXd::Constant(m, 0.5);
        b.upper = (b.lower.array() * gamma.array() + 0.5).matrix();
        b.eta = eta;
        b.kappa = mu;
        inst.bounds = b;
      }
      break;
    }
  }
  inst.gen_params["cross_rate"] = {s.cross_rate};
  if (s.kind == InstanceKind::kJapDp)
    inst.gen_params["levels"] = {static_cast<double>(s.levels)};
  return inst;
}

// ---------------------------------------------------------------------------
// JSON.

namespace {

Json vec(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Json mat(const Eigen::MatrixXd& m) {
  Json a = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    a.push_back(row);
  }
  return a;
}

void append_real(std::string& out, double v) {
  if (!std::isfinite(v)) throw InvalidArgument("non-finite value in instance");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

bool scalar_array(const Json& j) {
  for (const auto& e : j)
    if (e.is_array() || e.is_object()) return false;
  return true;
}

// Writes reals with 17 significant digits; arrays of scalars stay on one line.
void emit(const Json& j, int indent, std::string& out) {
  const std::string pad(indent, ' ');
  const std::string inner(indent + 2, ' ');
  if (j.is_object()) {
    if (j.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    bool first = true;
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!first) out += ",\n";
      first = false;
      out += inner + Json(it.key()).dump() + ": ";
      emit(it.value(), indent + 2, out);
    }
    out += "\n" + pad + "}";
  } else if (j.is_array()) {
    if (j.empty() || scalar_array(j)) {
      out += "[";
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += ", ";
        first = false;
        emit(e, indent + 2, out);
      }
      out += "]";
      return;
    }
    out += "[\n";
    bool first = true;
    for (const auto& e : j) {
      if (!first) out += ",\n";
      first = false;
      out += inner;
      emit(e, indent + 2, out);
    }
    out += "\n" + pad + "]";
  } else if (j.is_number_float()) {
    append_real(out, j.get<double>());
  } else {
    out += j.dump();
  }
}

[[noreturn]] void bad(const std::string& what) {
  throw ParseError("instance file: " + what);
}

Eigen::VectorXd read_vec(const Json& j, int n, const char* name) {
  if (!j.is_array() || static_cast<int>(j.size()) != n)
    bad(std::string(name) + " must be an array of length " + std::to_string(n));
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) {
    if (!j[i].is_number()) bad(std::string(name) + " holds a non-number");
    v[i] = j[i].get<double>();
  }
  return v;
}

Eigen::MatrixXd read_mat(const Json& j, int rows, int cols, const char* name) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows)
    bad(std::string(name) + " must have " + std::to_string(rows) + " rows");
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i) m.row(i) = read_vec(j[i], cols, name).transpose();
  return m;
}

const Json& field(const Json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end()) bad(std::string("missing field '") + name + "'");
  return *it;
}

int read_size(const Json& j, const char* name) {
  const Json& f = field(j, name);
  if (!f.is_number_integer() || f.get<long>() <= 0)
    bad(std::string(name) + " must be a positive integer");
  return f.get<int>();
}

}  // namespace

std::string to_json(const Instance& inst) {
  const bool mixed = inst.kind == InstanceKind::kMgnl;
  const bool pricing = inst.kind == InstanceKind::kJapDp || inst.kind == InstanceKind::kJapCp;
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = to_string(inst.kind);
  j["m"] = inst.m;
  j["n_nests"] = inst.n_nests;
  if (mixed) j["T"] = inst.mixed.num_segments();
  j["sigma"] = vec(inst.model.sigma);
  if (mixed) {
    Json v0 = Json::array(), v = Json::array();
    for (const GnlModel& g : inst.mixed.segments) {
      v0.push_back(vec(g.v0));
      v.push_back(mat(g.v));
    }
    j["v0"] = v0;
    j["alpha"] = mat(inst.model.alpha);
    j["v"] = v;
    j["r"] = vec(inst.model.r);
    j["theta"] = vec(inst.mixed.theta);
  } else {
    j["v0"] = vec(inst.model.v0);
    j["alpha"] = mat(inst.model.alpha);
    if (!pricing) {
      j["v"] = mat(inst.model.v);
      j["r"] = vec(inst.model.r);
    }
  }
  Json c;
  c["a"] = mat(inst.constraints.a);
  c["b"] = vec(inst.constraints.b);
  j["constraints"] = c;
  if (inst.ladder) {
    Json lad = Json::array();
    for (const auto& p : inst.ladder->prices) {
      Json row = Json::array();
      for (double v : p) row.push_back(v);
      lad.push_back(row);
    }
    j["price_ladder"] = lad;
    j["eta"] = vec(inst.ladder->eta);
    j["kappa"] = vec(inst.ladder->kappa);
  }
  if (inst.bounds) {
    Json b;
    b["lower"] = vec(inst.bounds->lower);
    b["upper"] = vec(inst.bounds->upper);
    j["price_bounds"] = b;
    j["eta"] = vec(inst.bounds->eta);
    j["kappa"] = vec(inst.bounds->kappa);
  }
  j["seed"] = inst.seed;
  Json gp = Json::object();
  for (const auto& [k, v] : inst.gen_params) {
    Json a = Json::array();
    for (double x : v) a.push_back(x);
    gp[k] = a;
  }
  j["gen_params"] = gp;
  std::string out;
  emit(j, 0, out);
  out += "\n";
  return out;
}

Instance from_json(const std::string& text, std::optional<InstanceKind> expect) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("instance file is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) bad("top level must be an object");
  const Json& version = field(j, "schema_version");
  if (!version.is_number_integer() || version.get<int>() != kSchemaVersion)
    bad("schema version mismatch (expected " + std::to_string(kSchemaVersion) + ")");
  const Json& kind_field = field(j, "kind");
  if (!kind_field.is_string()) bad("kind must be a string");
  Instance inst;
  try {
    inst.kind = parse_kind(kind_field.get<std::string>());
  } catch (const InvalidArgument&) {
    bad("unknown kind '" + kind_field.get<std::string>() + "'");
  }
  if (expect && *expect != inst.kind)
    throw KindMismatch(std::string("expected a ") + to_string(*expect) + " instance, got " +
                       to_string(inst.kind));

  const int m = inst.m = read_size(j, "m");
  const int nn = inst.n_nests = read_size(j, "n_nests");
  const bool mixed = inst.kind == InstanceKind::kMgnl;
  const bool pricing =
      inst.kind == InstanceKind::kJapDp || inst.kind == InstanceKind::kJapCp;

  GnlModel base;
  base.sigma = read_vec(field(j, "sigma"), nn, "sigma");
  base.alpha = read_mat(field(j, "alpha"), m, nn, "alpha");
  if (mixed) {
    const int t = read_size(j, "T");
    const Json& v0 = field(j, "v0");
    const Json& v = field(j, "v");
    if (!v0.is_array() || static_cast<int>(v0.size()) != t) bad("v0 must have T rows");
    if (!v.is_array() || static_cast<int>(v.size()) != t) bad("v must have T blocks");
    const Json& r = field(j, "r");
    Eigen::VectorXd rv;
    const bool per_segment = r.is_array() && !r.empty() && r[0].is_array();
    if (!per_segment) rv = read_vec(r, m, "r");
    inst.mixed.theta = read_vec(field(j, "theta"), t, "theta");
    for (int s = 0; s < t; ++s) {
      GnlModel g = base;
      g.v0 = read_vec(v0[s], nn, "v0");
      g.v = read_mat(v[s], m, nn, "v");
      g.r = per_segment ? read_vec(r[s], m, "r") : rv;
      inst.mixed.segments.push_back(g);
    }
    inst.model = inst.mixed.segments.front();
  } else {
    base.v0 = read_vec(field(j, "v0"), nn, "v0");
    if (pricing) {
      base.v = Eigen::MatrixXd::Zero(m, nn);
      base.r = Eigen::VectorXd::Zero(m);
    } else {
      base.v = read_mat(field(j, "v"), m, nn, "v");
      base.r = read_vec(field(j, "r"), m, "r");
    }
    inst.model = base;
  }

  const Json& c = field(j, "constraints");
  if (!c.is_object()) bad("constraints must be an object");
  const Json& cb = field(c, "b");
  if (!cb.is_array()) bad("constraints.b must be an array");
  const int rows = static_cast<int>(cb.size());
  const Json& ca = field(c, "a");
  int cols = m;
  if (rows > 0) {
    if (!ca.is_array() || ca.empty() || !ca[0].is_array()) bad("constraints.a must be a matrix");
    cols = static_cast<int>(ca[0].size());
  }
  inst.constraints.b = read_vec(cb, rows, "constraints.b");
  inst.constraints.a = rows > 0 ? read_mat(ca, rows, cols, "constraints.a")
                                : Eigen::MatrixXd(0, m);

  if (inst.kind == InstanceKind::kJapDp) {
    PriceLadder ladder;
    const Json& lad = field(j, "price_ladder");
    if (!lad.is_array() || static_cast<int>(lad.size()) != m)
      bad("price_ladder must have one row per product");
    for (const Json& row : lad) {
      if (!row.is_array()) bad("price_ladder rows must be arrays");
      std::vector<double> p;
      for (const Json& e : row) {
        if (!e.is_number()) bad("price_ladder holds a non-number");
        p.push_back(e.get<double>());
      }
      ladder.prices.push_back(p);
    }
    ladder.eta = read_vec(field(j, "eta"), m, "eta");
    ladder.kappa = read_vec(field(j, "kappa"), m, "kappa");
    inst.ladder = ladder;
  } else if (inst.kind == InstanceKind::kJapCp) {
    PriceBounds b;
    const Json& pb = field(j, "price_bounds");
    b.lower = read_vec(field(pb, "lower"), m, "price_bounds.lower");
    b.upper = read_vec(field(pb, "upper"), m, "price_bounds.upper");
    b.eta = read_vec(field(j, "eta"), m, "eta");
    b.kappa = read_vec(field(j, "kappa"), m, "kappa");
    inst.bounds = b;
  }
  const Json& seed = field(j, "seed");
  if (!seed.is_number_unsigned() && !seed.is_number_integer()) bad("seed must be an integer");
  inst.seed = seed.get<std::uint64_t>();
  if (auto it = j.find("gen_params"); it != j.end()) {
    if (!it->is_object()) bad("gen_params must be an object");
    for (auto g = it->begin(); g != it->end(); ++g) {
      std::vector<double> v;
      if (!g.value().is_array()) bad("gen_params entries must be arrays");
      for (const Json& e : g.value()) {
        if (!e.is_number()) bad("gen_params holds a non-number");
        v.push_back(e.get<double>());
      }
      inst.gen_params[g.key()] = v;
    }
  }
  return inst;
}

void save(const Instance& inst, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidArgument("cannot write " + path);
  f << to_json(inst);
  if (!f) throw InvalidArgument("failed writing " + path);
}

Instance load(const std::string& path, std::optional<InstanceKind> expect) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InvalidArgument("cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return from_json(ss.str(), expect);
}

}  // namespace gnlopt
