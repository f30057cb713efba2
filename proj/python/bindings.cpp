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

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gnlopt/assortment.hpp"
#include "gnlopt/choice_model.hpp"
#include "gnlopt/cuts.hpp"
#include "gnlopt/errors.hpp"
#include "gnlopt/instances.hpp"
#include "gnlopt/oracle.hpp"
#include "gnlopt/pricing.hpp"

namespace py = pybind11;
using namespace gnlopt;

namespace {

Assortment to_assortment(const std::vector<bool>& bits) {
  Assortment x(static_cast<int>(bits.size()));
  for (std::size_t i = 0; i < bits.size(); ++i) x.set(static_cast<int>(i), bits[i]);
  return x;
}

std::vector<bool> to_bits(const Assortment& x) {
  std::vector<bool> out(x.size());
  for (int i = 0; i < x.size(); ++i) out[i] = x[i];
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Assortment and pricing optimization under generalized nested logit.";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<DimensionError>(m, "DimensionError", error.ptr());
  py::register_exception<ModelError>(m, "ModelError", error.ptr());
  py::register_exception<DegenerateNestError>(m, "DegenerateNestError", error.ptr());
  py::register_exception<InvalidArgument>(m, "InvalidArgument", error.ptr());
  py::register_exception<NumericalFailure>(m, "NumericalFailure", error.ptr());
  py::register_exception<SizeGuardError>(m, "SizeGuardError", error.ptr());
  py::register_exception<UnsupportedConstraint>(m, "UnsupportedConstraint", error.ptr());
  py::register_exception<ParseError>(m, "ParseError", error.ptr());
  py::register_exception<KindMismatch>(m, "KindMismatch", error.ptr());

  py::class_<GnlModel>(m, "GnlModel")
      .def(py::init<>())
      .def_readwrite("v0", &GnlModel::v0)
      .def_readwrite("v", &GnlModel::v)
      .def_readwrite("alpha", &GnlModel::alpha)
      .def_readwrite("sigma", &GnlModel::sigma)
      .def_readwrite("r", &GnlModel::r)
      .def_property_readonly("num_products", &GnlModel::num_products)
      .def_property_readonly("num_nests", &GnlModel::num_nests);

  py::class_<MgnlModel>(m, "MgnlModel")
      .def(py::init<>())
      .def_readwrite("segments", &MgnlModel::segments)
      .def_readwrite("theta", &MgnlModel::theta)
      .def_property_readonly("num_products", &MgnlModel::num_products);

  py::class_<Assortment>(m, "Assortment")
      .def(py::init<int>(), py::arg("m"))
      .def(py::init(&to_assortment), py::arg("bits"))
      .def_static("from_indices",
                  py::overload_cast<int, const std::vector<int>&>(&Assortment::FromIndices),
                  py::arg("m"), py::arg("indices"))
      .def("__len__", &Assortment::size)
      .def("__getitem__", [](const Assortment& x, int i) {
        if (i < 0 || i >= x.size()) throw py::index_error();
        return x[i];
      })
      .def("__eq__", [](const Assortment& a, const Assortment& b) { return a == b; })
      .def("count", &Assortment::count)
      .def("support", &Assortment::support)
      .def("tolist", &to_bits)
      .def("__repr__", [](const Assortment& x) {
        std::string s = "Assortment([";
        for (int i : x.support()) s += (s.back() == '[' ? "" : ", ") + std::to_string(i);
        return s + "])";
      });

  py::class_<LinearConstraintSet>(m, "LinearConstraintSet")
      .def(py::init<>())
      .def(py::init([](Eigen::MatrixXd a, Eigen::VectorXd b) {
             if (a.rows() != b.size()) throw DimensionError("rows of a and b differ");
             return LinearConstraintSet{std::move(a), std::move(b)};
           }),
           py::arg("a"), py::arg("b"))
      .def_readwrite("a", &LinearConstraintSet::a)
      .def_readwrite("b", &LinearConstraintSet::b)
      .def_static("none", &LinearConstraintSet::None, py::arg("d"))
      .def_property_readonly("num_rows", &LinearConstraintSet::num_rows);

  py::class_<PriceLadder>(m, "PriceLadder")
      .def(py::init<>())
      .def_readwrite("prices", &PriceLadder::prices)
      .def_readwrite("eta", &PriceLadder::eta)
      .def_readwrite("kappa", &PriceLadder::kappa);

  py::class_<PriceBounds>(m, "PriceBounds")
      .def(py::init<>())
      .def_readwrite("lower", &PriceBounds::lower)
      .def_readwrite("upper", &PriceBounds::upper)
      .def_readwrite("eta", &PriceBounds::eta)
      .def_readwrite("kappa", &PriceBounds::kappa);

  py::enum_<Termination>(m, "Termination")
      .value("OPTIMAL", Termination::kOptimal)
      .value("INFEASIBLE", Termination::kInfeasible)
      .value("NODE_LIMIT", Termination::kNodeLimit)
      .value("TIME_LIMIT", Termination::kTimeLimit)
      .value("TARGET_REACHED", Termination::kTargetReached)
      .value("CUTOFF", Termination::kCutoff);

  py::class_<AssortConfig>(m, "AssortConfig")
      .def(py::init<>())
      .def_property(
          "time_limit", [](const AssortConfig& c) { return c.bnb.time_limit; },
          [](AssortConfig& c, double t) { c.bnb.time_limit = t; })
      .def_property(
          "node_limit", [](const AssortConfig& c) { return c.bnb.node_limit; },
          [](AssortConfig& c, long n) { c.bnb.node_limit = n; })
      .def_property(
          "rel_gap", [](const AssortConfig& c) { return c.bnb.rel_gap; },
          [](AssortConfig& c, double g) { c.bnb.rel_gap = g; })
      .def_readwrite("use_submodular_cuts", &AssortConfig::use_submodular_cuts)
      .def_readwrite("use_logsumexp_cut", &AssortConfig::use_logsumexp_cut)
      .def_readwrite("use_normalization_row", &AssortConfig::use_normalization_row)
      .def_readwrite("tighten_nodes", &AssortConfig::tighten_nodes)
      .def_readwrite("floor_fraction", &AssortConfig::floor_fraction)
      .def_readwrite("use_incumbent_cutoff", &AssortConfig::use_incumbent_cutoff);

  py::class_<AssortmentResult>(m, "AssortmentResult")
      .def_readonly("assortment", &AssortmentResult::assortment)
      .def_readonly("revenue", &AssortmentResult::revenue)
      .def_readonly("bound", &AssortmentResult::bound)
      .def_readonly("gap", &AssortmentResult::gap)
      .def_readonly("beta", &AssortmentResult::beta)
      .def_readonly("feasible", &AssortmentResult::feasible)
      .def_readonly("termination", &AssortmentResult::termination)
      .def_property_readonly("nodes", [](const AssortmentResult& r) { return r.solve.nodes; })
      .def_property_readonly("seconds",
                             [](const AssortmentResult& r) { return r.solve.seconds; })
      .def_property_readonly("bisection_widths", [](const AssortmentResult& r) {
        return r.bisection ? r.bisection->widths : std::vector<double>{};
      });

  py::enum_<JapMethod>(m, "JapMethod")
      .value("LOG_CONVEX", JapMethod::kLogConvex)
      .value("BISECTION", JapMethod::kBisection);

  py::class_<JapDpConfig>(m, "JapDpConfig")
      .def(py::init<>())
      .def_readwrite("assort", &JapDpConfig::assort)
      .def_readwrite("method", &JapDpConfig::method)
      .def_readwrite("bisection_tol", &JapDpConfig::bisection_tol);

  py::class_<JapDpResult>(m, "JapDpResult")
      .def_readonly("level", &JapDpResult::level)
      .def_readonly("price", &JapDpResult::price)
      .def_readonly("offered", &JapDpResult::offered)
      .def_readonly("revenue", &JapDpResult::revenue)
      .def_readonly("bound", &JapDpResult::bound);

  py::class_<CpConfig>(m, "CpConfig")
      .def(py::init<>())
      .def_readwrite("dp", &CpConfig::dp)
      .def_readwrite("starts", &CpConfig::starts)
      .def_readwrite("max_rounds", &CpConfig::max_rounds)
      .def_readwrite("max_ladder_levels", &CpConfig::max_ladder_levels)
      .def_readwrite("seed", &CpConfig::seed);

  py::class_<CpSolveReport>(m, "CpSolveReport")
      .def_readonly("x", &CpSolveReport::x)
      .def_readonly("y", &CpSolveReport::y)
      .def_readonly("revenue", &CpSolveReport::revenue)
      .def_readonly("surrogate", &CpSolveReport::surrogate)
      .def_readonly("ladder_revenue", &CpSolveReport::ladder_revenue)
      .def_readonly("ladder_fallback", &CpSolveReport::ladder_fallback)
      .def_readonly("ladder_sizes", &CpSolveReport::ladder_sizes)
      .def_readonly("seconds", &CpSolveReport::seconds);

  py::class_<OracleResult>(m, "OracleResult")
      .def_readonly("feasible", &OracleResult::feasible)
      .def_readonly("best", &OracleResult::best)
      .def_readonly("prices", &OracleResult::prices)
      .def_readonly("levels", &OracleResult::levels)
      .def_readonly("objective", &OracleResult::objective)
      .def_readonly("evaluated", &OracleResult::evaluated);

  py::enum_<InstanceKind>(m, "InstanceKind")
      .value("GNL", InstanceKind::kGnl)
      .value("MGNL", InstanceKind::kMgnl)
      .value("JAP_DP", InstanceKind::kJapDp)
      .value("JAP_CP", InstanceKind::kJapCp);

  py::class_<GenSpec>(m, "GenSpec")
      .def(py::init<>())
      .def_readwrite("kind", &GenSpec::kind)
      .def_readwrite("m", &GenSpec::m)
      .def_readwrite("n_nests", &GenSpec::n_nests)
      .def_readwrite("segments", &GenSpec::segments)
      .def_readwrite("levels", &GenSpec::levels)
      .def_readwrite("cross_rate", &GenSpec::cross_rate)
      .def_readwrite("seed", &GenSpec::seed)
      .def_readwrite("with_constraints", &GenSpec::with_constraints);

  py::class_<Instance>(m, "Instance")
      .def_readonly("kind", &Instance::kind)
      .def_readonly("m", &Instance::m)
      .def_readonly("n_nests", &Instance::n_nests)
      .def_readonly("model", &Instance::model)
      .def_readonly("mixed", &Instance::mixed)
      .def_readonly("constraints", &Instance::constraints)
      .def_readonly("ladder", &Instance::ladder)
      .def_readonly("bounds", &Instance::bounds)
      .def_readonly("seed", &Instance::seed);

  // Choice model.
  m.def("expected_revenue", &expected_revenue, py::arg("model"), py::arg("x"));
  m.def("mgnl_expected_revenue", &mgnl_expected_revenue, py::arg("mixed"), py::arg("x"));
  m.def("zero_optout_expected_revenue", &zero_optout_expected_revenue, py::arg("model"),
        py::arg("x"));
  m.def("product_choice_prob", &product_choice_prob, py::arg("model"), py::arg("x"));
  m.def("no_purchase_prob", &no_purchase_prob, py::arg("model"), py::arg("x"));
  m.def("validate_model", &validate_model, py::arg("model"));
  m.def("choose_beta", py::overload_cast<const GnlModel&>(&choose_beta), py::arg("model"));
  m.def("choose_beta", py::overload_cast<const MgnlModel&>(&choose_beta), py::arg("mixed"));

  // Assortment solvers. The GIL is released for the solve itself.
  const auto nogil = py::call_guard<py::gil_scoped_release>();
  m.def("solve_gnl_bisection", &solve_gnl_bisection, py::arg("model"),
        py::arg("constraints"), py::arg("beta"), py::arg("tol") = 1e-9,
        py::arg("config") = AssortConfig{}, nogil);
  m.def("solve_gnl_logconvex", &solve_gnl_logconvex, py::arg("model"),
        py::arg("constraints"), py::arg("beta"), py::arg("config") = AssortConfig{}, nogil);
  m.def("solve_mgnl", &solve_mgnl, py::arg("mixed"), py::arg("constraints"), py::arg("beta"),
        py::arg("config") = AssortConfig{}, nogil);
  m.def("solve_zero_optout", &solve_zero_optout, py::arg("model"), py::arg("constraints"),
        py::arg("beta"), py::arg("config") = AssortConfig{}, nogil);

  // Pricing.
  m.def("solve_jap_dp",
        py::overload_cast<const GnlModel&, const PriceLadder&, const LinearConstraintSet&,
                          const JapDpConfig&>(&solve_jap_dp),
        py::arg("shell"), py::arg("ladder"), py::arg("constraints"),
        py::arg("config") = JapDpConfig{}, nogil);
  m.def("solve_jap_cp", &solve_jap_cp, py::arg("shell"), py::arg("bounds"),
        py::arg("constraints"), py::arg("epsilon"), py::arg("config") = CpConfig{}, nogil);
  m.def("cp_revenue", [](const GnlModel& shell, const PriceBounds& b, const Assortment& x,
                         const std::vector<double>& y) { return cp_revenue(shell, b, x, y); },
        py::arg("shell"), py::arg("bounds"), py::arg("x"), py::arg("y"));
  m.def("pwla_bound", &pwla_bound, py::arg("lower"), py::arg("upper"), py::arg("eta"),
        py::arg("kappa"), py::arg("sigma"), py::arg("epsilon"));

  // Reference oracles.
  m.def("enumerate_assortments",
        py::overload_cast<const GnlModel&, const LinearConstraintSet&>(&enumerate_assortments),
        py::arg("model"), py::arg("constraints"));
  m.def("enumerate_assortments",
        py::overload_cast<const MgnlModel&, const LinearConstraintSet&>(&enumerate_assortments),
        py::arg("mixed"), py::arg("constraints"));
  m.def("enumerate_jap_dp", &enumerate_jap_dp, py::arg("shell"), py::arg("ladder"),
        py::arg("constraints"));
  m.def("local_maxima_scan", &local_maxima_scan, py::arg("f"), py::arg("a"), py::arg("b"),
        py::arg("grid_n"));

  // Instances.
  m.def("generate", &generate, py::arg("spec"));
  m.def("to_json", &to_json, py::arg("instance"));
  m.def("from_json", &from_json, py::arg("text"), py::arg("expect") = std::nullopt);
  m.def("save", &save, py::arg("instance"), py::arg("path"));
  m.def("load", &load, py::arg("path"), py::arg("expect") = std::nullopt);
}
