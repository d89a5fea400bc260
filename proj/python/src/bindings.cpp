#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "quadfr/errors.hpp"
#include "quadfr/experiments.hpp"
#include "quadfr/io.hpp"
#include "quadfr/stability.hpp"

namespace py = pybind11;
using namespace quadfr;

namespace {

std::vector<std::pair<double, double>> coords(const PointSet& p) {
  std::vector<std::pair<double, double>> out;
  for (auto c : p.coords) out.emplace_back(c.x, c.y);
  return out;
}

py::dict operators_dict(const OperatorSet& o) {
  py::dict d;
  d["basis"] = o.basis.name();
  d["points"] = coords(o.points);
  d["flux_points"] = [&] {
    std::vector<std::pair<double, double>> v;
    for (auto p : o.faces.all_points()) v.emplace_back(p.x, p.y);
    return v;
  }();
  d["V"] = o.V;
  d["M"] = o.M;
  d["Dx"] = o.Dx;
  d["Dy"] = o.Dy;
  d["L"] = o.L;
  d["W"] = o.W;
  d["Nx"] = o.Nx;
  d["Ny"] = o.Ny;
  d["modal_mass"] = o.modal_mass;
  d["sbp_residual"] = sbp_residual(o);
  d["hash"] = operator_hash(o);
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Flux reconstruction operators and filter families on quadrilaterals";

  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<UnstableScheme>(m, "UnstableScheme", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<UnsupportedConfiguration>(m, "UnsupportedConfiguration", PyExc_ValueError);

  py::enum_<BasisKind>(m, "BasisKind")
      .value("maximal", BasisKind::maximal)
      .value("total", BasisKind::total)
      .value("euclidean", BasisKind::euclidean);

  m.def("parse_basis", &parse_basis_kind, py::arg("name"));

  m.def(
      "basis_modes",
      [](BasisKind kind, int k) {
        std::vector<std::pair<int, int>> out;
        for (auto md : make_basis(kind, k).modes) out.emplace_back(md.v, md.w);
        return out;
      },
      py::arg("kind"), py::arg("k"), "Mode indices (v, w) in storage order.");

  m.def(
      "solution_points", [](BasisKind kind, int k) { return coords(default_point_set(make_basis(kind, k))); },
      py::arg("kind"), py::arg("k"));

  m.def(
      "operators", [](BasisKind kind, int k) { return operators_dict(*make_operators(kind, k)); },
      py::arg("kind"), py::arg("k"), "Reference-element operators as numpy arrays.");

  m.def(
      "derive_q_family",
      [](BasisKind kind, int k, const std::string& method) {
        QDerivationOptions opt;
        opt.method = method == "numeric" ? NullspaceMethod::numeric : NullspaceMethod::exact;
        const QFamily fam = derive_q_family(*make_operators(kind, k), opt);
        py::dict d;
        d["generators"] = fam.generators;
        d["labels"] = fam.canonical_labels;
        d["reference"] = fam.reference ? py::cast(to_string(*fam.reference)) : py::none();
        return d;
      },
      py::arg("kind"), py::arg("k"), py::arg("method") = "exact",
      "Modal generators of the admissible filter family.");

  m.def(
      "check_stability",
      [](BasisKind kind, int k, const std::vector<double>& q) {
        const auto ops = make_operators(kind, k);
        const auto r = check_stability(*ops, derive_q_family(*ops), q);
        py::dict d;
        d["stable"] = r.stable;
        d["failing_pivot"] = r.failing_pivot ? py::cast(*r.failing_pivot) : py::none();
        d["min_pivot"] = r.min_pivot;
        return d;
      },
      py::arg("kind"), py::arg("k"), py::arg("q"));

  m.def(
      "correction_matrix",
      [](BasisKind kind, int k, const std::vector<double>& q) {
        const auto ops = make_operators(kind, k);
        return correction_matrix(ops, derive_q_family(*ops), q).C;
      },
      py::arg("kind"), py::arg("k"), py::arg("q"), "C = (M + Q)^-1 L^T W.");

  m.def("order_of_accuracy", &order_of_accuracy, py::arg("h_error"));

  m.def(
      "run_advection",
      [](BasisKind kind, int k, std::vector<double> q, int n, double theta, double dt, double t_end,
         double kappa, const std::string& ic, std::uint64_t seed, int sample_every) {
        RunSpec s;
        s.basis = kind;
        s.k = k;
        s.q = std::move(q);
        s.n = n;
        s.solver.theta = theta;
        s.solver.dt = dt;
        s.solver.t_end = t_end;
        s.solver.kappa = kappa;
        s.ic = parse_initial_condition(ic);
        s.morlet = random_morlet(4, 3.0, seed);
        s.sample_every = sample_every;
        RunResult r;
        {
          py::gil_scoped_release release;
          r = run_advection(s);
        }
        py::dict d;
        d["t"] = r.t;
        d["energy"] = r.energy;
        d["error"] = r.error;
        d["integral"] = r.integral;
        d["h"] = r.h;
        return d;
      },
      py::arg("kind"), py::arg("k"), py::arg("q") = std::vector<double>{}, py::arg("n") = 8,
      py::arg("theta") = 0.0, py::arg("dt") = 1e-3, py::arg("t_end") = 1.0, py::arg("kappa") = 1.0,
      py::arg("ic") = "morlet", py::arg("seed") = 0, py::arg("sample_every") = 100);

  m.def("git_blob_hash", [](const std::string& s) { return git_blob_hash(s); }, py::arg("content"));

  m.attr("__version__") = "0.1.0";
}
