#include <doctest.h>

#include <cmath>
#include <numbers>

#include "quadfr/errors.hpp"
#include "quadfr/experiments.hpp"
#include "quadfr/stability.hpp"

using namespace quadfr;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

TEST_CASE("uniform stream matches numpy RandomState") {
  SeededRng a(0);
  for (double v : {0.5488135039273248, 0.7151893663724195, 0.6027633760716439, 0.5448831829968969,
                   0.4236547993389047, 0.6458941130666561})
    CHECK(a.uniform() == v);
  SeededRng b(12345);
  for (double v : {0.9296160928171479, 0.3163755545817859, 0.18391881167709445, 0.2045602785530397,
                   0.5677250290816866, 0.5955447029792516})
    CHECK(b.uniform() == v);
}

TEST_CASE("large seeds fold to 32 bits") {
  const std::uint64_t seed = (std::uint64_t{5} << 32) | 9u;
  SeededRng a(seed), b(5u ^ 9u);
  for (int i = 0; i < 5; ++i) CHECK(a.uniform() == b.uniform());
}

TEST_CASE("Morlet normalisation constant") {
  for (double s : {1.0, 2.0, 3.0, 5.0}) {
    const double oracle = 1.0 / std::sqrt(1.0 + std::exp(-s * s) - 2.0 * std::exp(-0.75 * s * s));
    CHECK(morlet_c_sigma(s) == doctest::Approx(oracle).epsilon(1e-15));
  }
  CHECK(morlet_c_sigma(3.0) == doctest::Approx(1.001112).epsilon(1e-6));
}

TEST_CASE("random Morlet configuration") {
  const MorletConfig m = random_morlet(4, 3.0, 0);
  REQUIRE(m.centers.size() == 4);
  REQUIRE(m.kappas.size() == 4);
  CHECK(m.centers[0].x == doctest::Approx(3.448296944257913).epsilon(1e-15));
  CHECK(m.centers[0].y == doctest::Approx(4.493667318642264).epsilon(1e-15));
  CHECK(m.kappas[0] == 0.6027633760716439);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(m.centers[i].x >= 0.0);
    CHECK(m.centers[i].x < kTwoPi);
    CHECK(m.kappas[i] >= 0.0);
    CHECK(m.kappas[i] < 1.0);
  }
  CHECK_NOTHROW(m.validate());
  MorletConfig bad = m;
  bad.kappas.pop_back();
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("Morlet field") {
  MorletConfig m;
  m.n = 1;
  m.centers = {{1.0, 2.0}};
  m.kappas = {0.25};
  const double scale = morlet_c_sigma(3.0) * std::pow(std::numbers::pi, -0.25);
  CHECK(morlet_ic(m, 1.0, 2.0) == doctest::Approx(scale * 0.75));
  CHECK(morlet_profile(0.0, 3.0, 0.25) == doctest::Approx(0.75));
  CHECK(morlet_profile(1.0, 3.0, 0.0) == doctest::Approx(std::exp(-0.5) * std::cos(3.0)));
  // Periodic in both directions.
  CHECK(morlet_ic(m, 0.3, 0.1) == doctest::Approx(morlet_ic(m, 0.3 + kTwoPi, 0.1 - kTwoPi)).epsilon(1e-14));
  // Pure translation along (cos theta, sin theta).
  const double theta = 0.6, t = 0.8;
  CHECK(exact_solution(m, theta, t, 1.0 + t * std::cos(theta), 2.0 + t * std::sin(theta)) ==
        doctest::Approx(scale * 0.75));
}

TEST_CASE("order of accuracy") {
  CHECK(order_of_accuracy({{0.1, 1e-4}, {0.05, 6.25e-6}}) == doctest::Approx(4.0));
  CHECK(order_of_accuracy({{0.4, 8.0}, {0.2, 1.0}, {0.1, 0.125}}) == doctest::Approx(3.0));
  CHECK_THROWS_AS(order_of_accuracy({{0.1, 1e-4}, {0.1, 1e-5}}), DegenerateFit);
  CHECK_THROWS_AS(order_of_accuracy({{0.1, 0.0}, {0.05, 1e-5}}), DegenerateFit);
  CHECK_THROWS_AS(order_of_accuracy({{0.1, 1e-4}}), DegenerateFit);
}

TEST_CASE("error norm of a constant offset is the domain side length") {
  const auto ops = make_operators(BasisKind::total, 2);
  MeshConfig mesh;
  mesh.nx = mesh.ny = 4;
  const AdvectionSolver s(dg_scheme(ops), mesh, SolverConfig{});
  const auto f = [](double x, double y) { return x * y; };
  SolverState st = s.project([&](double x, double y) { return f(x, y) + 1.0; }, 0.0);
  // The projected field is a polynomial per element only where f is; use a
  // bilinear field so the interpolant is exact.
  CHECK(error_norm(s, st, f, 5) == doctest::Approx(kTwoPi).epsilon(1e-12));
  CHECK_THROWS_AS(error_norm(s, st, f, 3), std::invalid_argument);
}

TEST_CASE("advection run records samples and rejects unstable filters") {
  RunSpec spec;
  spec.basis = BasisKind::euclidean;
  spec.k = 2;
  spec.n = 4;
  spec.solver.dt = 1e-2;
  spec.solver.t_end = 0.1;
  spec.ic = InitialConditionKind::sine;
  spec.sample_every = 5;
  const RunResult r = run_advection(spec);
  REQUIRE(r.t.size() == 3);
  CHECK(r.t.back() == doctest::Approx(0.1));
  CHECK(r.error.front() < r.error.back());
  CHECK(r.energy.back() <= r.energy.front());
  CHECK(r.h == doctest::Approx(kTwoPi / 4));

  spec.basis = BasisKind::maximal;
  spec.q = {0.0, -0.5};
  CHECK_THROWS_AS(run_advection(spec), UnstableScheme);
}

TEST_CASE("batch results keep the input order") {
  std::vector<RunSpec> specs;
  for (int n : {4, 3, 5}) {
    RunSpec s;
    s.basis = BasisKind::total;
    s.k = 2;
    s.n = n;
    s.solver.dt = 1e-2;
    s.solver.t_end = 0.05;
    s.ic = InitialConditionKind::gauss;
    specs.push_back(s);
  }
  const auto out = run_batch(specs, 2);
  REQUIRE(out.size() == 3);
  CHECK(out[0].h == doctest::Approx(kTwoPi / 4));
  CHECK(out[1].h == doctest::Approx(kTwoPi / 3));
  CHECK(out[2].h == doctest::Approx(kTwoPi / 5));
  const RunResult single = run_advection(specs[1]);
  CHECK(single.error.back() == out[1].error.back());
}

TEST_CASE("maximal basis errors are symmetric under swapping the axes") {
  SweepOptions opt;
  opt.dt = 1e-2;
  opt.ic = InitialConditionKind::sine;
  const auto res = angle_sweep({BasisKind::maximal}, 2, {0.0, std::numbers::pi / 2}, {4, 6}, 0.2, opt);
  REQUIRE(res.size() == 1);
  REQUIRE(res[0].rows.size() == 2);
  CHECK(res[0].rows[0].error == doctest::Approx(res[0].rows[1].error).epsilon(1e-10));
  CHECK(res[0].rows[0].order == doctest::Approx(res[0].rows[1].order).epsilon(1e-8));
}

TEST_CASE("default angles and CSV output") {
  const auto a = default_angles();
  REQUIRE(a.size() == 13);
  CHECK(a.front() == 0.0);
  CHECK(a.back() == doctest::Approx(std::numbers::pi / 2));
  SweepResult r{BasisKind::total, {{0.1, 3.5, 1e-3}}};
  const std::string csv = sweep_csv(r);
  CHECK(csv.rfind("theta,order,error\n", 0) == 0);
  CHECK(csv.find("0.10000000000000001,3.5,0.001") != std::string::npos);
  OrderSeries s{BasisKind::total, {0.0, 1.0}, {4.0, 3.9}};
  CHECK(order_csv(s).rfind("t,order\n", 0) == 0);
  RunResult rr;
  rr.t = {0.0};
  rr.energy = {1.0};
  rr.error = {0.0};
  rr.integral = {0.0};
  CHECK(run_csv(rr).rfind("t,energy,error", 0) == 0);
}

TEST_CASE("initial condition names") {
  CHECK(parse_initial_condition("morlet") == InitialConditionKind::morlet);
  CHECK(parse_initial_condition("sine") == InitialConditionKind::sine);
  CHECK(parse_initial_condition("gauss") == InitialConditionKind::gauss);
  CHECK_THROWS(parse_initial_condition("square"));
  CHECK(to_string(InitialConditionKind::gauss) == "gauss");
}
