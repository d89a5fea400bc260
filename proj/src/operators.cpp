#include "quadfr/operators.hpp"

#include <stdexcept>

#include "quadfr/errors.hpp"

namespace quadfr {

Eigen::MatrixXd OperatorSet::gradient() const {
  Eigen::MatrixXd g(2 * Dx.rows(), Dx.cols());
  g << Dx, Dy;
  return g;
}

Eigen::MatrixXd modal_derivative(const BasisSpec& basis, int direction) {
  const std::size_t n = basis.size();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t col = 0; col < n; ++col) {
    const ModeIndex m = basis.modes[col];
    const int order = direction == 0 ? m.v : m.w;
    const auto coeff = legendre_derivative_coefficients(order);
    for (int j = 0; j < order; ++j) {
      if (coeff[j] == 0.0) continue;
      const ModeIndex target = direction == 0 ? ModeIndex{j, m.w} : ModeIndex{m.v, j};
      const auto row = basis.index_of(target);
      if (!row) {
        throw BasisNotClosed("derivative of mode (" + std::to_string(m.v) + "," +
                             std::to_string(m.w) + ") leaves basis " + basis.name());
      }
      d(*row, col) = coeff[j];
    }
  }
  return d;
}

Eigen::MatrixXd rotation_transform(const BasisSpec& basis) {
  const std::size_t n = basis.size();
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    const ModeIndex m = basis.modes[j];
    const auto target = basis.index_of({m.w, m.v});
    if (!target) throw BasisNotClosed("basis " + basis.name() + " is not swap closed");
    t(*target, j) = (m.w % 2 == 0) ? 1.0 : -1.0;
  }
  return t;
}

Eigen::MatrixXd reflection_transform(const BasisSpec& basis) {
  Eigen::VectorXd s(basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j) s(j) = basis.modes[j].v % 2 == 0 ? 1.0 : -1.0;
  return s.asDiagonal();
}

Eigen::MatrixXd face_vandermonde(const FaceSet& faces) {
  const int n = faces.points_per_face;
  Eigen::MatrixXd vf = Eigen::MatrixXd::Zero(faces.size(), faces.size());
  for (int f = 0; f < 4; ++f) {
    for (int i = 0; i < n; ++i) {
      for (int m = 0; m < n; ++m) {
        vf(f * n + i, f * n + m) = legendre_eval(m, faces.nodes[i]);
      }
    }
  }
  return vf;
}

OperatorSet build_operators(const BasisSpec& basis, const PointSet& points) {
  if (points.size() != basis.size()) {
    throw std::invalid_argument("build_operators: need as many points as modes");
  }
  OperatorSet ops;
  ops.basis = basis;
  ops.points = points;
  ops.faces = face_points(basis.k_max);

  Vandermonde vdm = vandermonde(basis, points);
  ops.V = std::move(vdm.matrix);
  ops.V_inv = std::move(*vdm.inverse);

  const std::size_t n = basis.size();
  ops.modal_mass.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const ModeIndex m = basis.modes[j];
    ops.modal_mass(j) = 4.0 / ((2.0 * m.v + 1.0) * (2.0 * m.w + 1.0));
  }
  ops.M = ops.V_inv.transpose() * ops.modal_mass.asDiagonal() * ops.V_inv;
  ops.M = 0.5 * (ops.M + ops.M.transpose()).eval();

  ops.Dx_modal = modal_derivative(basis, 0);
  ops.Dy_modal = modal_derivative(basis, 1);
  ops.Dx = ops.V * ops.Dx_modal * ops.V_inv;
  ops.Dy = ops.V * ops.Dy_modal * ops.V_inv;

  const auto flux = ops.faces.all_points();
  ops.L_modal = evaluate_modes(basis, flux);
  ops.L = ops.L_modal * ops.V_inv;

  const auto w = ops.faces.all_weights();
  const auto nx = ops.faces.normal_components(0);
  const auto ny = ops.faces.normal_components(1);
  ops.W = Eigen::Map<const Eigen::VectorXd>(w.data(), w.size());
  ops.Nx = Eigen::Map<const Eigen::VectorXd>(nx.data(), nx.size());
  ops.Ny = Eigen::Map<const Eigen::VectorXd>(ny.data(), ny.size());

  ops.T_modal = rotation_transform(basis);
  ops.R_modal = reflection_transform(basis);
  return ops;
}

OperatorSetPtr make_operators(BasisKind kind, int k_max) {
  const BasisSpec basis = make_basis(kind, k_max);
  return std::make_shared<const OperatorSet>(build_operators(basis, default_point_set(basis)));
}

double sbp_residual(const OperatorSet& ops) {
  const Eigen::MatrixXd bx = ops.L.transpose() * (ops.W.cwiseProduct(ops.Nx)).asDiagonal() * ops.L;
  const Eigen::MatrixXd by = ops.L.transpose() * (ops.W.cwiseProduct(ops.Ny)).asDiagonal() * ops.L;
  const Eigen::MatrixXd rx = ops.M * ops.Dx + ops.Dx.transpose() * ops.M - bx;
  const Eigen::MatrixXd ry = ops.M * ops.Dy + ops.Dy.transpose() * ops.M - by;
  return std::max(rx.cwiseAbs().maxCoeff(), ry.cwiseAbs().maxCoeff());
}

Eigen::MatrixXd nodal_to_modal(const OperatorSet& ops, const Eigen::MatrixXd& nodal) {
  return ops.V_inv * nodal * ops.V;
}

Eigen::MatrixXd modal_to_nodal(const OperatorSet& ops, const Eigen::MatrixXd& modal) {
  return ops.V * modal * ops.V_inv;
}

}  // namespace quadfr
