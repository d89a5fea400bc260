#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "quadfr/errors.hpp"
#include "quadfr/experiments.hpp"
#include "quadfr/stability.hpp"

using namespace quadfr;

namespace {

OperatorSetPtr ops_for(ReferenceFamily id) {
  const BasisSpec b = reference_basis(id);
  return make_operators(b.kind, b.k_max);
}

bool all_hold(const std::vector<Inequality>& suite, const std::vector<double>& q) {
  for (const auto& i : suite)
    if (!i.holds(q)) return false;
  return true;
}

}  // namespace

TEST_CASE("derived families have the expected dimensions and match the closed forms") {
  const std::map<ReferenceFamily, std::size_t> dims = {
      {ReferenceFamily::max_k2, 2}, {ReferenceFamily::max_k3, 3}, {ReferenceFamily::tot_k2, 3},
      {ReferenceFamily::tot_k3, 3}, {ReferenceFamily::tot_k4, 6}, {ReferenceFamily::euc_k2, 2},
      {ReferenceFamily::euc_k3, 3}, {ReferenceFamily::euc_k4, 4}};
  for (auto id : kAllReferenceFamilies) {
    CAPTURE(to_string(id));
    const auto ops = ops_for(id);
    for (auto method : {NullspaceMethod::exact, NullspaceMethod::numeric}) {
      QDerivationOptions opt;
      opt.method = method;
      opt.align_to_reference = false;
      const QFamily fam = derive_q_family(*ops, opt);
      CHECK(fam.n_params() == dims.at(id));
      const auto report = match_reference_family(fam, id);
      CHECK(report.exact == (method == NullspaceMethod::exact));
      CHECK(report.derived_dim == report.reference_dim);
      for (const auto& g : fam.generators) CHECK(constraint_residuals(ops->basis, g).max() < 1e-12);
    }
    const QFamily aligned = derive_q_family(*ops);
    REQUIRE(aligned.reference.has_value());
    CHECK(*aligned.reference == id);
    CHECK(aligned.canonical_labels.size() == aligned.n_params());
  }
}

TEST_CASE("raw generators satisfy every constraint") {
  for (auto id : kAllReferenceFamilies) {
    const BasisSpec basis = reference_basis(id);
    const auto& table = reference_generators(id);
    for (const auto& gen : table) {
      Eigen::MatrixXd q = Eigen::MatrixXd::Zero(basis.size(), basis.size());
      for (const auto& e : gen) {
        const auto r = *basis.index_of(e.row), c = *basis.index_of(e.col);
        q(r, c) = q(c, r) = to_double(e.value);
      }
      CHECK(constraint_residuals(basis, q).max() < 1e-12);
      CHECK(q.row(*basis.index_of({0, 0})).cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("span mismatch is reported") {
  const auto ops = ops_for(ReferenceFamily::max_k2);
  QFamily fam = derive_q_family(*ops);
  fam.generators.pop_back();
  fam.exact_generators.clear();
  CHECK_THROWS_AS(match_reference_family(fam, ReferenceFamily::max_k2), SpanMismatch);
}

TEST_CASE("evaluate rejects the wrong number of parameters") {
  const auto ops = ops_for(ReferenceFamily::tot_k2);
  const QFamily fam = derive_q_family(*ops);
  const std::vector<double> q = {0.1};
  CHECK_THROWS_AS(fam.evaluate(q), std::invalid_argument);
}

TEST_CASE("stability boundaries") {
  SUBCASE("maximal k = 2 just below q1 = -4/15") {
    const auto ops = ops_for(ReferenceFamily::max_k2);
    const QFamily fam = derive_q_family(*ops);
    // q0 = 2 keeps the second condition satisfied near the boundary.
    const std::vector<double> q = {2.0, -4.0 / 15.0 - 1e-3};
    const auto r = check_stability(*ops, fam, q);
    CHECK_FALSE(r.stable);
    CHECK(r.failing_pivot.has_value());
    const std::vector<double> ok = {2.0, -4.0 / 15.0 + 1e-3};
    CHECK(check_stability(*ops, fam, ok).stable);
  }
  SUBCASE("total k = 2 with a large coupling") {
    const auto ops = ops_for(ReferenceFamily::tot_k2);
    const QFamily fam = derive_q_family(*ops);
    const std::vector<double> q = {0.0, 0.0, 0.9};
    CHECK_FALSE(check_stability(*ops, fam, q).stable);
    CHECK_FALSE(all_hold(inequality_suite(ReferenceFamily::tot_k2), q));
  }
  SUBCASE("Euclidean k = 3 at the origin") {
    const auto suite = inequality_suite(ReferenceFamily::euc_k3);
    const std::vector<double> zero(3, 0.0);
    for (const auto& i : suite) CHECK(i.g(zero) > 0.0);
  }
  SUBCASE("one-parameter boundaries") {
    const auto suite = inequality_suite(ReferenceFamily::max_k2);
    const std::vector<double> on = {2.0, -4.0 / 15.0};
    CHECK(suite[0].g(on) == doctest::Approx(0.0).scale(1.0));
    CHECK_FALSE(suite[0].holds(on));
  }
}

TEST_CASE("the total k = 2 condition uses q0 + 4/5") {
  const auto ops = ops_for(ReferenceFamily::tot_k2);
  const QFamily fam = derive_q_family(*ops);
  const std::vector<double> q = {-0.58, -0.09, 0.17};
  CHECK(check_stability(*ops, fam, q).stable);
  CHECK(all_hold(inequality_suite(ReferenceFamily::tot_k2), q));
  CHECK(q[0] + 4.0 / 9.0 < 0.0);
}

TEST_CASE("closed-form conditions agree with the Cholesky test") {
  // Conditions that cannot be violated alone inside the sampled box.
  const std::set<std::pair<ReferenceFamily, std::size_t>> implied = {
      {ReferenceFamily::tot_k3, 0}, {ReferenceFamily::tot_k3, 1}, {ReferenceFamily::euc_k4, 1}};
  for (auto id : kAllReferenceFamilies) {
    CAPTURE(to_string(id));
    const auto ops = ops_for(id);
    const QFamily fam = derive_q_family(*ops);
    const auto suite = inequality_suite(id);
    SeededRng rng(7);
    std::vector<int> alone(suite.size(), 0);
    int inside = 0, mismatches = 0;
    std::vector<double> q(fam.n_params());
    const double boxes[] = {0.25, 1.0, 3.0};
    for (int s = 0; s < 6000; ++s) {
      const double b = boxes[s % 3];
      for (auto& x : q) x = rng.uniform(-b, b);
      const bool stable = check_stability(*ops, fam, q).stable;
      std::vector<std::size_t> failing;
      for (std::size_t i = 0; i < suite.size(); ++i)
        if (!suite[i].holds(q)) failing.push_back(i);
      if (failing.empty()) ++inside;
      if (failing.size() == 1) ++alone[failing[0]];
      if (failing.empty() != stable) ++mismatches;
    }
    CHECK(mismatches == 0);
    CHECK(inside > 0);
    for (std::size_t i = 0; i < suite.size(); ++i) {
      CAPTURE(suite[i].label);
      if (alone[i] == 0) CHECK(implied.count({id, i}) == 1);
    }
  }
}

TEST_CASE("correction matrix at q = 0 is the DG correction") {
  for (auto id : kAllReferenceFamilies) {
    const auto ops = ops_for(id);
    const QFamily fam = derive_q_family(*ops);
    const std::vector<double> zero(fam.n_params(), 0.0);
    const SchemeInstance s = correction_matrix(ops, fam, zero);
    const SchemeInstance dg = dg_scheme(ops);
    CHECK((s.C - dg.C).cwiseAbs().maxCoeff() < 1e-12);
    const Eigen::MatrixXd expected = ops->M.inverse() * ops->L.transpose() * ops->W.asDiagonal();
    CHECK((dg.C - expected).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("corrections conserve the boundary flux") {
  const auto ops = ops_for(ReferenceFamily::tot_k4);
  const QFamily fam = derive_q_family(*ops);
  SeededRng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> q(fam.n_params());
    for (auto& x : q) x = rng.uniform(-0.05, 0.05);
    if (!check_stability(*ops, fam, q).stable) continue;
    const SchemeInstance s = correction_matrix(ops, fam, q);
    const Eigen::RowVectorXd ones = Eigen::RowVectorXd::Ones(ops->n_sol());
    const Eigen::RowVectorXd lhs = ones * ops->M * s.C;
    const Eigen::RowVectorXd rhs = Eigen::RowVectorXd::Ones(ops->n_flux()) * ops->W.asDiagonal();
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-11);
  }
}

TEST_CASE("correction matrix depends continuously on q") {
  const auto ops = ops_for(ReferenceFamily::euc_k3);
  const QFamily fam = derive_q_family(*ops);
  std::vector<double> q = {0.02, 0.01, -0.01};
  const SchemeInstance a = correction_matrix(ops, fam, q);
  for (auto& x : q) x += 1e-8;
  const SchemeInstance b = correction_matrix(ops, fam, q);
  CHECK((a.C - b.C).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("unstable parameters are rejected") {
  const auto ops = ops_for(ReferenceFamily::max_k2);
  const QFamily fam = derive_q_family(*ops);
  const std::vector<double> q = {0.0, -0.5};
  CHECK_THROWS_AS(correction_matrix(ops, fam, q), UnstableScheme);
}

TEST_CASE("DG correction field ranges at k = 3") {
  PointSet grid;
  for (int i = 0; i <= 100; ++i)
    for (int j = 0; j <= 100; ++j) grid.coords.push_back({-1 + 0.02 * i, -1 + 0.02 * j});
  const auto tot = correction_divergence_field(dg_scheme(make_operators(BasisKind::total, 3)), 1, grid);
  const auto euc = correction_divergence_field(dg_scheme(make_operators(BasisKind::euclidean, 3)), 1, grid);
  CHECK(tot.minCoeff() == doctest::Approx(-2.17).epsilon(0.02));
  CHECK(tot.maxCoeff() == doctest::Approx(5.68).epsilon(0.02));
  CHECK(euc.minCoeff() == doctest::Approx(-3.17).epsilon(0.02));
  CHECK(euc.maxCoeff() == doctest::Approx(7.86).epsilon(0.02));
  CHECK(euc.maxCoeff() > tot.maxCoeff());
}

TEST_CASE("one-dimensional corrections") {
  SUBCASE("boundary values") {
    for (double c : {0.0, 0.01, 0.2}) {
      const OneDCorrection h = vcjh_1d(2, c);
      CHECK(h.right(1.0) == doctest::Approx(1.0));
      CHECK(h.right(-1.0) == doctest::Approx(0.0).scale(1.0));
      CHECK(h.left(-1.0) == doctest::Approx(1.0));
      CHECK(h.left(1.0) == doctest::Approx(0.0).scale(1.0));
      CHECK(h.left(0.3) == doctest::Approx(h.right(-0.3)));
    }
    const OneDCorrection e = extended_1d(2, 0.05, -0.03);
    CHECK(e.right(1.0) == doctest::Approx(1.0));
    CHECK(e.right(-1.0) == doctest::Approx(0.0).scale(1.0));
  }
  SUBCASE("k = 2 derivative coefficients") {
    for (double c : {0.0, 0.01, 0.05, 0.2}) {
      const auto d = vcjh_1d(2, c).right_derivative();
      REQUIRE(d.size() == 3);
      CHECK(d[0] == doctest::Approx(0.5));
      CHECK(d[2] == doctest::Approx(5.0 / (45.0 * c + 2.0)));
    }
    const auto e = extended_1d(2, 0.0, 0.0).right_derivative();
    CHECK(e[1] == doctest::Approx(1.5));
    CHECK(e[2] == doctest::Approx(2.5));
  }
  SUBCASE("eta and domain") {
    CHECK(vcjh_eta(2, 1.0) == doctest::Approx(22.5));
    CHECK_THROWS_AS(vcjh_1d(2, -0.05), DomainError);
    CHECK_NOTHROW(vcjh_1d(2, -0.05, DomainCheck::skip));
    CHECK_THROWS_AS(vcjh_1d(2, -2.0 / 45.0, DomainCheck::skip), DomainError);
    CHECK_THROWS_AS(extended_1d(3, 0.0, 0.0), DomainError);
    CHECK_THROWS_AS(extended_1d(2, 0.0, -0.4), DomainError);
  }
}

TEST_CASE("tensor-product DG correction equals the nodal DG correction") {
  const auto ops = make_operators(BasisKind::maximal, 2);
  const Eigen::MatrixXd tp = tensor_product_correction(*ops, vcjh_1d(2, 0.0));
  CHECK((tp - dg_correction_modal(*ops)).cwiseAbs().maxCoeff() < 1e-13);
  const QFamily fam = derive_q_family(*ops);
  const std::vector<double> cs = {0.0, 0.05};
  const std::vector<std::pair<double, double>> ext = {{0.0, 0.0}};
  const auto rep = tensor_product_analysis(*ops, fam, cs, ext);
  CHECK(rep.vcjh[0].residual < 1e-12);
  CHECK(rep.vcjh[1].residual > 1e-3);
  CHECK(rep.extended[0].residual < 1e-12);
}

TEST_CASE("tensor-product corrections match the closed-form tables") {
  const auto ops = make_operators(BasisKind::maximal, 2);
  SUBCASE("VCJH") {
    for (double c : {0.0, 0.1, 0.3}) {
      const double t = 5.0 / (45.0 * c + 2.0);
      Eigen::MatrixXd expected(9, 12);
      expected << 0.5, 0, 0, 0.5, 0, 0, 0.5, 0, 0, 0.5, 0, 0,  //
          0, 0.5, 0, 1.5, 0, 0, 0, -0.5, 0, -1.5, 0, 0,        //
          0, 0, 0.5, t, 0, 0, 0, 0, 0.5, t, 0, 0,              //
          -1.5, 0, 0, 0, 0.5, 0, 1.5, 0, 0, 0, -0.5, 0,        //
          0, -1.5, 0, 0, 1.5, 0, 0, -1.5, 0, 0, 1.5, 0,        //
          0, 0, -1.5, 0, t, 0, 0, 0, 1.5, 0, -t, 0,            //
          t, 0, 0, 0, 0, 0.5, t, 0, 0, 0, 0, 0.5,              //
          0, t, 0, 0, 0, 1.5, 0, -t, 0, 0, 0, -1.5,            //
          0, 0, t, 0, 0, t, 0, 0, t, 0, 0, t;
      const Eigen::MatrixXd tp = tensor_product_correction(*ops, vcjh_1d(2, c));
      CHECK((tp - expected).cwiseAbs().maxCoeff() < 1e-13);
    }
  }
  SUBCASE("extended range") {
    for (auto [c0, c1] : {std::pair{0.0, 0.0}, std::pair{0.05, 0.05}, std::pair{-0.1, 0.1}}) {
      const double psi = 175 * c1 * c1 - 42 * c0 - 12;
      const double a = (63 * c0 + 105 * c1 + 18) / psi, b = 5 / (5 * c1 + 2);
      Eigen::MatrixXd printed(9, 12);
      printed << -0.5, 0, 0, 0.5, 0, 0, 0.5, 0, 0, -0.5, 0, 0,  //
          0, -0.5, 0, -a, 0, 0, 0, -0.5, 0, -a, 0, 0,           //
          0, 0, -0.5, b, 0, 0, 0, 0, 0.5, -b, 0, 0,             //
          -a, 0, 0, 0, 0.5, 0, -a, 0, 0, 0, 0.5, 0,             //
          0, -a, 0, 0, -a, 0, 0, a, 0, 0, a, 0,                 //
          0, 0, -a, 0, b, 0, 0, 0, -a, 0, b, 0,                 //
          -b, 0, 0, 0, 0, 0.5, b, 0, 0, 0, 0, -0.5,             //
          0, -b, 0, 0, 0, -a, 0, -b, 0, 0, 0, -a,               //
          0, 0, -b, 0, 0, b, 0, 0, b, 0, 0, -b;
      const Eigen::MatrixXd tp = tensor_product_correction(*ops, extended_1d(2, c0, c1));
      // Right and top faces agree; bottom and left carry the opposite sign.
      CHECK((tp.middleCols(3, 6) - printed.middleCols(3, 6)).cwiseAbs().maxCoeff() < 1e-13);
      CHECK((tp.leftCols(3) + printed.leftCols(3)).cwiseAbs().maxCoeff() < 1e-13);
      CHECK((tp.rightCols(3) + printed.rightCols(3)).cwiseAbs().maxCoeff() < 1e-13);
    }
  }
}
