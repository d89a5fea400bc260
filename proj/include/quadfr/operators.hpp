#pragma once

#include <memory>

#include <Eigen/Dense>

#include "quadfr/basis.hpp"
#include "quadfr/points.hpp"

namespace quadfr {

/// Reference-element operators for one (basis, solution points) pair.
///
/// Nodal and modal forms are linked by u = V u~; operators transform as
/// B~ = V^-1 B V and bilinear forms as M = V^-T M~ V^-1. Flux points follow
/// the FaceSet ordering (bottom, right, top, left; counter-clockwise).
struct OperatorSet {
  BasisSpec basis;
  PointSet points;
  FaceSet faces;

  Eigen::MatrixXd V;
  Eigen::MatrixXd V_inv;
  Eigen::VectorXd modal_mass;  // diagonal of M~
  Eigen::MatrixXd M;
  Eigen::MatrixXd Dx, Dy;
  Eigen::MatrixXd Dx_modal, Dy_modal;
  Eigen::MatrixXd L;        // n_flux x n_sol
  Eigen::MatrixXd L_modal;  // n_flux x n_modes, L V
  Eigen::VectorXd W;        // boundary quadrature weights
  Eigen::VectorXd Nx, Ny;   // outward normal components per flux point
  Eigen::MatrixXd T_modal;  // quarter-turn rotation
  Eigen::MatrixXd R_modal;  // reflection x -> -x

  std::size_t n_sol() const noexcept { return basis.size(); }
  std::size_t n_flux() const noexcept { return faces.size(); }
  Eigen::MatrixXd gradient() const;
};

using OperatorSetPtr = std::shared_ptr<const OperatorSet>;

/// Throws SingularVandermonde when the points are not unisolvent for the basis.
OperatorSet build_operators(const BasisSpec& basis, const PointSet& points);

/// Operators on the default point set of the basis family.
OperatorSetPtr make_operators(BasisKind kind, int k_max);

/// Max-norm of M Dx + Dx^T M - L^T W Nx L and its y counterpart.
double sbp_residual(const OperatorSet& ops);

/// Exact modal differentiation; throws BasisNotClosed if a derivative leaves
/// the span of the basis. direction is 0 for x and 1 for y.
Eigen::MatrixXd modal_derivative(const BasisSpec& basis, int direction);

/// Signed permutation for the pull-back (x, y) -> (y, -x): mode (v, w) maps to
/// (w, v) with sign (-1)^w. Throws BasisNotClosed if the swap leaves the basis.
Eigen::MatrixXd rotation_transform(const BasisSpec& basis);

/// Diagonal sign matrix (-1)^v for the reflection x -> -x.
Eigen::MatrixXd reflection_transform(const BasisSpec& basis);

Eigen::MatrixXd nodal_to_modal(const OperatorSet& ops, const Eigen::MatrixXd& nodal);
Eigen::MatrixXd modal_to_nodal(const OperatorSet& ops, const Eigen::MatrixXd& modal);

/// Block-diagonal face Vandermonde: entry (flux point, face mode) is
/// psi_m(s) in the face coordinate of that flux point.
Eigen::MatrixXd face_vandermonde(const FaceSet& faces);

}  // namespace quadfr
