#include "quadfr/solver.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "quadfr/errors.hpp"

namespace quadfr {

namespace {

Face opposite(Face f) {
  switch (f) {
    case Face::bottom: return Face::top;
    case Face::right: return Face::left;
    case Face::top: return Face::bottom;
    case Face::left: return Face::right;
  }
  return f;
}

/// Reference coordinates of a flux point shifted into the neighbour across
/// the face, so that matching points coincide.
Point2 across(Point2 p, Face f) {
  switch (f) {
    case Face::bottom: return {p.x, p.y + 2.0};
    case Face::right: return {p.x - 2.0, p.y};
    case Face::top: return {p.x, p.y - 2.0};
    case Face::left: return {p.x + 2.0, p.y};
  }
  return p;
}

}  // namespace

std::size_t MeshConfig::element_index(int ex, int ey) const {
  const int x = ((ex % nx) + nx) % nx;
  const int y = ((ey % ny) + ny) % ny;
  return static_cast<std::size_t>(y) * nx + x;
}

AdvectionSolver::AdvectionSolver(SchemeInstance scheme, MeshConfig mesh, SolverConfig config)
    : scheme_(std::move(scheme)), mesh_(mesh), config_(config) {
  if (!scheme_.ops) throw std::invalid_argument("scheme has no operators");
  if (mesh_.nx < 2 || mesh_.ny < 2) throw std::invalid_argument("mesh needs at least 2x2 elements");
  if (!(config_.kappa >= 0.0 && config_.kappa <= 1.0))
    throw std::invalid_argument("kappa must lie in [0, 1]");
  if (!(config_.dt > 0.0)) throw std::invalid_argument("dt must be positive");

  const OperatorSet& ops = *scheme_.ops;
  const FaceSet& faces = ops.faces;
  const int np = faces.points_per_face;
  const double ax = std::cos(config_.theta);
  const double ay = std::sin(config_.theta);
  const double mx = 2.0 / mesh_.hx();
  const double my = 2.0 / mesh_.hy();

  volume_ = mx * ax * ops.Dx + my * ay * ops.Dy;

  const std::size_t nf = ops.n_flux();
  Eigen::VectorXd metric(nf);
  jump_coeff_.resize(nf);
  partner_.resize(nf);
  for (int f = 0; f < 4; ++f) {
    const Face face = static_cast<Face>(f);
    const auto& data = faces.faces[f];
    const bool x_face = face == Face::left || face == Face::right;
    for (int j = 0; j < np; ++j) {
      const std::size_t i = faces.flux_index(face, j);
      const double an = ax * data.normal.x + ay * data.normal.y;
      metric(i) = x_face ? mx : my;
      jump_coeff_(i) = 0.5 * (an - config_.kappa * std::abs(an));
      partner_[i] = faces.flux_index(opposite(face), np - 1 - j);

      const Point2 here = across(data.points[j], face);
      const Point2 there = faces.faces[static_cast<int>(opposite(face))].points[np - 1 - j];
      if (std::abs(here.x - there.x) > 1e-12 || std::abs(here.y - there.y) > 1e-12) {
        throw std::logic_error("periodic flux point pairing does not match coordinates");
      }
    }
  }
  lift_ = scheme_.C * metric.asDiagonal();

  neighbours_.resize(mesh_.n_elements());
  for (int ey = 0; ey < mesh_.ny; ++ey) {
    for (int ex = 0; ex < mesh_.nx; ++ex) {
      auto& n = neighbours_[mesh_.element_index(ex, ey)];
      n[static_cast<int>(Face::bottom)] = mesh_.element_index(ex, ey - 1);
      n[static_cast<int>(Face::right)] = mesh_.element_index(ex + 1, ey);
      n[static_cast<int>(Face::top)] = mesh_.element_index(ex, ey + 1);
      n[static_cast<int>(Face::left)] = mesh_.element_index(ex - 1, ey);
    }
  }
}

std::size_t AdvectionSolver::neighbour(std::size_t e, Face f) const {
  return neighbours_.at(e)[static_cast<int>(f)];
}

Point2 AdvectionSolver::physical(std::size_t e, Point2 p) const {
  const std::size_t ex = e % mesh_.nx;
  const std::size_t ey = e / mesh_.nx;
  return {(ex + 0.5 * (p.x + 1.0)) * mesh_.hx(), (ey + 0.5 * (p.y + 1.0)) * mesh_.hy()};
}

SolverState AdvectionSolver::project(const std::function<double(double, double)>& f,
                                     double t) const {
  const auto& pts = ops().points.coords;
  SolverState s;
  s.t = s.t0 = t;
  s.u.resize(pts.size(), mesh_.n_elements());
  for (std::size_t e = 0; e < mesh_.n_elements(); ++e) {
    for (std::size_t j = 0; j < pts.size(); ++j) {
      const Point2 x = physical(e, pts[j]);
      s.u(j, e) = f(x.x, x.y);
    }
  }
  return s;
}

Eigen::MatrixXd AdvectionSolver::rhs(const Eigen::MatrixXd& u) const {
  if (!u.allFinite()) throw DivergedError("non-finite solution values");
  const OperatorSet& o = ops();
  const int np = o.faces.points_per_face;
  const Eigen::MatrixXd uf = o.L * u;
  Eigen::MatrixXd jump(uf.rows(), uf.cols());
  for (std::size_t e = 0; e < mesh_.n_elements(); ++e) {
    const auto& nb = neighbours_[e];
    for (std::size_t i = 0; i < partner_.size(); ++i) {
      const std::size_t other = nb[i / np];
      jump(i, e) = jump_coeff_(i) * (uf(partner_[i], other) - uf(i, e));
    }
  }
  Eigen::MatrixXd du = -volume_ * u;
  du.noalias() -= lift_ * jump;
  return du;
}

void AdvectionSolver::step_ssprk3(SolverState& state) const {
  const double dt = config_.dt;
  const Eigen::MatrixXd& u = state.u;
  Eigen::MatrixXd u1 = u + dt * rhs(u);
  Eigen::MatrixXd u2 = 0.75 * u + 0.25 * (u1 + dt * rhs(u1));
  Eigen::MatrixXd next = (1.0 / 3.0) * u + (2.0 / 3.0) * (u2 + dt * rhs(u2));
  if (!next.allFinite()) {
    std::ostringstream msg;
    msg << "solution diverged at step " << state.step + 1 << " (t = " << state.t + dt << ")";
    throw DivergedError(msg.str());
  }
  state.u = std::move(next);
  ++state.step;
  state.t = state.t0 + static_cast<double>(state.step) * dt;
}

double AdvectionSolver::energy(const Eigen::MatrixXd& u) const {
  const double jac = mesh_.hx() * mesh_.hy() / 4.0;
  return jac * u.cwiseProduct(scheme_.energy_matrix * u).sum();
}

double AdvectionSolver::energy(const SolverState& state) const { return energy(state.u); }

double AdvectionSolver::integral(const SolverState& state) const {
  const double jac = mesh_.hx() * mesh_.hy() / 4.0;
  const Eigen::RowVectorXd w = Eigen::RowVectorXd::Ones(ops().n_sol()) * ops().M;
  return jac * (w * state.u).sum();
}

double AdvectionSolver::cfl_number() const {
  const double k1 = ops().basis.k_max + 1.0;
  return config_.dt * k1 * k1 / std::min(mesh_.hx(), mesh_.hy());
}

std::optional<std::string> AdvectionSolver::cfl_warning() const {
  const double cfl = cfl_number();
  if (cfl <= config_.cfl_warning_bound) return std::nullopt;
  std::ostringstream msg;
  msg << "dt (k+1)^2 / h = " << cfl << " exceeds " << config_.cfl_warning_bound;
  return msg.str();
}

}  // namespace quadfr
