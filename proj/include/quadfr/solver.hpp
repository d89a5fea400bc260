#pragma once

#include <array>
#include <functional>
#include <numbers>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "quadfr/stability.hpp"

namespace quadfr {

/// Uniform periodic mesh of [0, length]^2.
struct MeshConfig {
  int nx = 8;
  int ny = 8;
  double length = 2.0 * std::numbers::pi;

  double hx() const { return length / nx; }
  double hy() const { return length / ny; }
  std::size_t n_elements() const { return static_cast<std::size_t>(nx) * ny; }
  /// Element (ex, ey) is stored at index ey * nx + ex.
  std::size_t element_index(int ex, int ey) const;
};

struct SolverConfig {
  double theta = 0.0;  // a = (cos theta, sin theta)
  double kappa = 1.0;  // 1 upwind, 0 central
  double dt = 1e-3;
  double t_end = 1.0;
  /// A warning is issued when dt (k+1)^2 / h exceeds this bound.
  double cfl_warning_bound = 1.0;
};

/// u(j, e): solution point j of element e.
struct SolverState {
  Eigen::MatrixXd u;
  double t = 0.0;
  long step = 0;
  double t0 = 0.0;  // t = t0 + step dt
};

/// Linear advection u_t + a . grad u = 0 on a periodic mesh.
class AdvectionSolver {
 public:
  AdvectionSolver(SchemeInstance scheme, MeshConfig mesh, SolverConfig config);

  const SchemeInstance& scheme() const { return scheme_; }
  const OperatorSet& ops() const { return *scheme_.ops; }
  const MeshConfig& mesh() const { return mesh_; }
  const SolverConfig& config() const { return config_; }

  /// Physical coordinates of reference point p in element e.
  Point2 physical(std::size_t e, Point2 p) const;

  /// Samples f at every solution point.
  SolverState project(const std::function<double(double, double)>& f, double t = 0.0) const;

  /// du/dt. Throws DivergedError on non-finite input.
  Eigen::MatrixXd rhs(const Eigen::MatrixXd& u) const;

  /// One Shu-Osher SSP-RK3 step of size config().dt.
  void step_ssprk3(SolverState& state) const;

  /// sum_e (hx hy / 4) u_e^T (M + Q) u_e.
  double energy(const SolverState& state) const;
  double energy(const Eigen::MatrixXd& u) const;

  /// Domain integral sum_e (hx hy / 4) 1^T M u_e.
  double integral(const SolverState& state) const;

  /// dt (k+1)^2 / min(hx, hy).
  double cfl_number() const;
  std::optional<std::string> cfl_warning() const;

  /// Flux point partner across the face and neighbour element.
  std::size_t partner_flux_point(std::size_t flux_index) const { return partner_[flux_index]; }
  std::size_t neighbour(std::size_t e, Face f) const;

 private:
  SchemeInstance scheme_;
  MeshConfig mesh_;
  SolverConfig config_;
  Eigen::MatrixXd volume_;     // (2/hx) a_x Dx + (2/hy) a_y Dy
  Eigen::MatrixXd lift_;       // C diag(metric)
  Eigen::VectorXd jump_coeff_; // (a.n - kappa |a.n|) / 2 per flux point
  std::vector<std::size_t> partner_;
  std::vector<std::array<std::size_t, 4>> neighbours_;
};

}  // namespace quadfr
