#include <doctest.h>

#include <cmath>
#include <numbers>

#include "quadfr/errors.hpp"
#include "quadfr/solver.hpp"
#include "quadfr/stability.hpp"

using namespace quadfr;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

AdvectionSolver make_solver(BasisKind kind, int k, int n, double theta, double kappa,
                            std::vector<double> q = {}, double dt = 1e-3) {
  const auto ops = make_operators(kind, k);
  SchemeInstance scheme = dg_scheme(ops);
  if (!q.empty()) scheme = correction_matrix(ops, derive_q_family(*ops), q);
  MeshConfig mesh;
  mesh.nx = n;
  mesh.ny = n;
  SolverConfig cfg;
  cfg.theta = theta;
  cfg.kappa = kappa;
  cfg.dt = dt;
  return AdvectionSolver(std::move(scheme), mesh, cfg);
}

Eigen::VectorXd flat(const Eigen::MatrixXd& u) { return Eigen::Map<const Eigen::VectorXd>(u.data(), u.size()); }

/// Global semi-discrete operator assembled column by column.
Eigen::MatrixXd global_matrix(const AdvectionSolver& s, Eigen::Index rows, Eigen::Index cols) {
  const Eigen::Index n = rows * cols;
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    Eigen::MatrixXd e = Eigen::MatrixXd::Zero(rows, cols);
    e.data()[j] = 1.0;
    a.col(j) = flat(s.rhs(e));
  }
  return a;
}

Eigen::MatrixXd energy_weight(const AdvectionSolver& s, Eigen::Index cols) {
  const Eigen::Index r = s.scheme().energy_matrix.rows();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(r * cols, r * cols);
  const double jac = s.mesh().hx() * s.mesh().hy() / 4.0;
  for (Eigen::Index e = 0; e < cols; ++e) h.block(e * r, e * r, r, r) = jac * s.scheme().energy_matrix;
  return h;
}

}  // namespace

TEST_CASE("constant states are steady") {
  for (auto kind : {BasisKind::maximal, BasisKind::total, BasisKind::euclidean}) {
    const auto s = make_solver(kind, 3, 3, 0.3, 1.0);
    const SolverState st = s.project([](double, double) { return 2.5; }, 0.0);
    CHECK(s.rhs(st.u).cwiseAbs().maxCoeff() < 1e-11);
  }
}

TEST_CASE("energy of the unit state is the domain area") {
  const auto s = make_solver(BasisKind::total, 2, 4, 0.0, 1.0, {0.01, 0.0, 0.0});
  const SolverState st = s.project([](double, double) { return 1.0; }, 0.0);
  CHECK(s.energy(st) == doctest::Approx(kTwoPi * kTwoPi).epsilon(1e-12));
  CHECK(s.integral(st) == doctest::Approx(kTwoPi * kTwoPi).epsilon(1e-12));
}

TEST_CASE("semi-discrete operator is consistent with the advection derivative") {
  double prev = INFINITY;
  for (int n : {4, 8, 16}) {
    const double theta = 0.4;
    const auto s = make_solver(BasisKind::euclidean, 3, n, theta, 1.0);
    const SolverState st = s.project([](double x, double y) { return std::sin(x) * std::sin(y); }, 0.0);
    const SolverState ex = s.project(
        [&](double x, double y) {
          return -(std::cos(theta) * std::cos(x) * std::sin(y) + std::sin(theta) * std::sin(x) * std::cos(y));
        },
        0.0);
    const double err = (s.rhs(st.u) - ex.u).cwiseAbs().maxCoeff();
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev < 1e-2);
}

TEST_CASE("central flux is skew-adjoint in the energy norm") {
  for (auto q : {std::vector<double>{}, std::vector<double>{0.02, -0.01, 0.03}}) {
    const auto s = make_solver(BasisKind::total, 2, 3, 0.7, 0.0, q);
    const Eigen::Index r = static_cast<Eigen::Index>(s.ops().n_sol()), c = 9;
    const Eigen::MatrixXd a = global_matrix(s, r, c);
    const Eigen::MatrixXd h = energy_weight(s, c);
    const Eigen::MatrixXd sym = h * a + a.transpose() * h;
    CHECK(sym.cwiseAbs().maxCoeff() < 1e-11 * a.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("upwind flux dissipates energy") {
  const auto s = make_solver(BasisKind::maximal, 2, 3, 1.1, 1.0, {0.01, 0.02});
  const Eigen::Index r = static_cast<Eigen::Index>(s.ops().n_sol()), c = 9;
  const Eigen::MatrixXd a = global_matrix(s, r, c);
  const Eigen::MatrixXd h = energy_weight(s, c);
  const Eigen::MatrixXd sym = h * a + a.transpose() * h;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (sym + sym.transpose()));
  CHECK(eig.eigenvalues().maxCoeff() < 1e-10);
}

TEST_CASE("one RK3 step matches the cubic Taylor polynomial of the linear operator") {
  const double dt = 0.01;
  const auto s = make_solver(BasisKind::euclidean, 2, 3, 0.5, 1.0, {}, dt);
  SolverState st = s.project([](double x, double y) { return std::cos(x) + std::sin(2 * y); }, 0.0);
  const Eigen::MatrixXd u0 = st.u;
  const Eigen::MatrixXd a1 = s.rhs(u0);
  const Eigen::MatrixXd a2 = s.rhs(a1);
  const Eigen::MatrixXd a3 = s.rhs(a2);
  const Eigen::MatrixXd expected = u0 + dt * a1 + dt * dt / 2 * a2 + dt * dt * dt / 6 * a3;
  s.step_ssprk3(st);
  CHECK((st.u - expected).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(st.step == 1);
  CHECK(st.t == doctest::Approx(dt));
}

TEST_CASE("energy decreases and the integral is conserved") {
  const auto s = make_solver(BasisKind::total, 3, 6, 0.9, 1.0, {0.01, 0.01, 0.0}, 2e-3);
  SolverState st = s.project([](double x, double y) { return std::exp(std::sin(x) * std::cos(y)); }, 0.0);
  double e_prev = s.energy(st);
  const double mass = s.integral(st);
  for (int i = 0; i < 200; ++i) {
    s.step_ssprk3(st);
    const double e = s.energy(st);
    CHECK(e <= e_prev * (1 + 1e-14));
    e_prev = e;
  }
  CHECK(std::abs(s.integral(st) - mass) < 1e-12 * std::abs(mass));
  CHECK(st.t == doctest::Approx(0.4).epsilon(1e-15));
}

TEST_CASE("mesh topology") {
  const auto s = make_solver(BasisKind::maximal, 2, 3, 0.0, 1.0);
  CHECK(s.neighbour(0, Face::left) == 2);
  CHECK(s.neighbour(0, Face::bottom) == 6);
  CHECK(s.neighbour(4, Face::right) == 5);
  CHECK(s.neighbour(4, Face::top) == 7);
  const Point2 p = s.physical(5, {-1.0, 1.0});
  CHECK(p.x == doctest::Approx(2 * kTwoPi / 3));
  CHECK(p.y == doctest::Approx(2 * kTwoPi / 3));
  MeshConfig m;
  m.nx = 3;
  CHECK(m.element_index(-1, 0) == 2);
  CHECK(m.element_index(3, 1) == 3);
}

TEST_CASE("invalid configurations") {
  const auto ops = make_operators(BasisKind::maximal, 2);
  MeshConfig mesh;
  SolverConfig cfg;
  cfg.kappa = 1.5;
  CHECK_THROWS_AS(AdvectionSolver(dg_scheme(ops), mesh, cfg), std::invalid_argument);
  cfg.kappa = 1.0;
  cfg.dt = 0.0;
  CHECK_THROWS_AS(AdvectionSolver(dg_scheme(ops), mesh, cfg), std::invalid_argument);
  cfg.dt = 1e-3;
  mesh.nx = 1;
  CHECK_THROWS_AS(AdvectionSolver(dg_scheme(ops), mesh, cfg), std::invalid_argument);
}

TEST_CASE("non-finite states raise") {
  const auto s = make_solver(BasisKind::maximal, 2, 2, 0.0, 1.0);
  SolverState st = s.project([](double, double) { return 1.0; }, 0.0);
  st.u(0, 0) = NAN;
  CHECK_THROWS_AS(s.rhs(st.u), DivergedError);
  CHECK_THROWS_AS(s.step_ssprk3(st), DivergedError);
}

TEST_CASE("CFL warning") {
  const auto quiet = make_solver(BasisKind::maximal, 3, 8, 0.0, 1.0, {}, 1e-3);
  CHECK_FALSE(quiet.cfl_warning().has_value());
  const auto loud = make_solver(BasisKind::maximal, 3, 8, 0.0, 1.0, {}, 0.1);
  CHECK(loud.cfl_warning().has_value());
  CHECK(loud.cfl_number() == doctest::Approx(0.1 * 16 / (kTwoPi / 8)));
}
