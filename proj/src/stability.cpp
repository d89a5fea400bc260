#include "quadfr/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "quadfr/errors.hpp"

namespace quadfr {

namespace {

std::string mode_str(ModeIndex m) {
  return "(" + std::to_string(m.v) + "," + std::to_string(m.w) + ")";
}

std::size_t upper_index(std::size_t i, std::size_t j, std::size_t n) {
  if (i > j) std::swap(i, j);
  return i * n - i * (i - 1) / 2 + (j - i);
}

std::size_t upper_size(std::size_t n) { return n * (n + 1) / 2; }

Eigen::MatrixXd upper_to_matrix(const Eigen::VectorXd& u, std::size_t n) {
  Eigen::MatrixXd m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) m(i, j) = m(j, i) = u(upper_index(i, j, n));
  return m;
}

Eigen::MatrixXd upper_to_matrix(const RationalRow& u, std::size_t n) {
  Eigen::VectorXd d(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) d(i) = to_double(u[i]);
  return upper_to_matrix(d, n);
}

Eigen::VectorXd matrix_to_upper(const Eigen::MatrixXd& m) {
  const std::size_t n = m.rows();
  Eigen::VectorXd u(upper_size(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) u(upper_index(i, j, n)) = m(i, j);
  return u;
}

/// Modal operators are integer valued for Legendre bases.
std::vector<std::vector<long>> to_integer(const Eigen::MatrixXd& m) {
  std::vector<std::vector<long>> out(m.rows(), std::vector<long>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double r = std::round(m(i, j));
      if (std::abs(r - m(i, j)) > 1e-12) throw std::logic_error("non-integer modal operator");
      out[i][j] = static_cast<long>(r);
    }
  }
  return out;
}

/// Upper-triangle unknowns that survive the reflection and constant-mode
/// constraints; all others are identically zero.
std::vector<std::size_t> free_unknowns(const BasisSpec& basis) {
  const std::size_t n = basis.size();
  const auto constant = basis.index_of({0, 0});
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      if (constant && (i == *constant || j == *constant)) continue;
      if ((basis.modes[i].v - basis.modes[j].v) % 2 != 0) continue;
      out.push_back(upper_index(i, j, n));
    }
  }
  return out;
}

/// Linear constraints over the free unknowns, coefficient-wise integer.
/// row(i, j) <- coefficient of Q(a, b) in condition (i, j).
std::vector<std::vector<long>> constraint_rows(const BasisSpec& basis,
                                               const std::vector<std::size_t>& unknowns) {
  const std::size_t n = basis.size();
  std::vector<long> column_of(upper_size(n), -1);
  for (std::size_t c = 0; c < unknowns.size(); ++c) column_of[unknowns[c]] = static_cast<long>(c);

  const auto dx = to_integer(modal_derivative(basis, 0));
  const auto dy = to_integer(modal_derivative(basis, 1));
  const auto t = to_integer(rotation_transform(basis));

  std::vector<std::vector<long>> rows;
  auto add = [&](std::vector<long>& row, std::size_t a, std::size_t b, long coeff) {
    if (coeff == 0) return;
    const long c = column_of[upper_index(a, b, n)];
    if (c >= 0) row[c] += coeff;
  };
  auto push = [&](std::vector<long>&& row) {
    if (std::any_of(row.begin(), row.end(), [](long x) { return x != 0; })) rows.push_back(row);
  };

  // Q A + A^T Q = 0 for A = Dx~, Dy~ (symmetric, so i <= j suffices).
  for (const auto* a : {&dx, &dy}) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        std::vector<long> row(unknowns.size(), 0);
        for (std::size_t l = 0; l < n; ++l) {
          add(row, i, l, (*a)[l][j]);
          add(row, l, j, (*a)[l][i]);
        }
        push(std::move(row));
      }
    }
  }
  // T Q - Q T = 0.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<long> row(unknowns.size(), 0);
      for (std::size_t l = 0; l < n; ++l) {
        add(row, l, j, t[i][l]);
        add(row, i, l, -t[l][j]);
      }
      push(std::move(row));
    }
  }
  return rows;
}

void check_compatible(const BasisSpec& a, const BasisSpec& b) {
  if (a.modes != b.modes) {
    throw std::invalid_argument("family basis " + a.name() + " does not match operator basis " +
                                b.name());
  }
}

/// Row-reduce a set of numeric row vectors with partial pivoting, scaling
/// each pivot to 1.
Eigen::MatrixXd numeric_rref(Eigen::MatrixXd a, double tol) {
  Eigen::Index r = 0;
  for (Eigen::Index c = 0; c < a.cols() && r < a.rows(); ++c) {
    Eigen::Index p;
    const double best = a.col(c).segment(r, a.rows() - r).cwiseAbs().maxCoeff(&p);
    if (best <= tol) continue;
    p += r;
    a.row(r).swap(a.row(p));
    a.row(r) /= a(r, c);
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      if (i != r) a.row(i) -= a(i, c) * a.row(r);
    }
    a.row(r) = a.row(r).unaryExpr([tol](double x) { return std::abs(x) <= tol ? 0.0 : x; });
    ++r;
  }
  return a.topRows(r);
}

/// Coefficients x minimizing |B x - t| and the residual max-norm.
std::pair<Eigen::VectorXd, Eigen::VectorXd> least_squares(const Eigen::MatrixXd& b,
                                                          const Eigen::VectorXd& t) {
  Eigen::VectorXd x = b.completeOrthogonalDecomposition().solve(t);
  return {x, b * x - t};
}

RationalRow reference_upper(const BasisSpec& basis, const GeneratorTable& table) {
  const std::size_t n = basis.size();
  RationalRow u(upper_size(n), Rational(0));
  for (const auto& e : table) {
    const auto i = basis.index_of(e.row);
    const auto j = basis.index_of(e.col);
    if (!i || !j) {
      throw SpanMismatch("reference entry " + mode_str(e.row) + "x" + mode_str(e.col) +
                         " is not in basis " + basis.name());
    }
    u[upper_index(*i, *j, n)] = e.value;
  }
  return u;
}

std::vector<std::string> default_labels(std::size_t m) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < m; ++i) labels.push_back("q" + std::to_string(i));
  return labels;
}

Eigen::MatrixXd stack_upper(const std::vector<Eigen::MatrixXd>& gens) {
  if (gens.empty()) return {};
  Eigen::MatrixXd b(upper_size(gens.front().rows()), gens.size());
  for (std::size_t i = 0; i < gens.size(); ++i) b.col(i) = matrix_to_upper(gens[i]);
  return b;
}

std::string entry_str(const BasisSpec& basis, Eigen::Index upper) {
  const std::size_t n = basis.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      if (upper_index(i, j, n) == static_cast<std::size_t>(upper))
        return mode_str(basis.modes[i]) + "x" + mode_str(basis.modes[j]);
  return "?";
}

}  // namespace

Eigen::MatrixXd QFamily::evaluate(std::span<const double> q) const {
  if (q.size() != generators.size()) {
    throw std::invalid_argument("expected " + std::to_string(generators.size()) +
                                " parameters, got " + std::to_string(q.size()));
  }
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(basis.size(), basis.size());
  for (std::size_t i = 0; i < q.size(); ++i) out += q[i] * generators[i];
  return out;
}

double ConstraintResiduals::max() const {
  return std::max({symmetry, antisymmetry_x, antisymmetry_y, rotation, reflection});
}

ConstraintResiduals constraint_residuals(const BasisSpec& basis, const Eigen::MatrixXd& q) {
  const Eigen::MatrixXd dx = modal_derivative(basis, 0);
  const Eigen::MatrixXd dy = modal_derivative(basis, 1);
  const Eigen::MatrixXd t = rotation_transform(basis);
  const Eigen::MatrixXd r = reflection_transform(basis);
  ConstraintResiduals res;
  res.symmetry = (q - q.transpose()).cwiseAbs().maxCoeff();
  const Eigen::MatrixXd ax = q * dx;
  const Eigen::MatrixXd ay = q * dy;
  res.antisymmetry_x = (ax + ax.transpose()).cwiseAbs().maxCoeff();
  res.antisymmetry_y = (ay + ay.transpose()).cwiseAbs().maxCoeff();
  res.rotation = (t * q - q * t).cwiseAbs().maxCoeff();
  res.reflection = (r * q - q * r).cwiseAbs().maxCoeff();
  return res;
}

QFamily derive_q_family(const OperatorSet& ops, const QDerivationOptions& options) {
  return derive_q_family(ops.basis, options);
}

QFamily derive_q_family(const BasisSpec& basis, const QDerivationOptions& options) {
  if (!basis.swap_closed()) throw BasisNotClosed("basis " + basis.name() + " is not swap closed");
  const std::size_t n = basis.size();
  const auto unknowns = free_unknowns(basis);
  const auto rows = constraint_rows(basis, unknowns);

  QFamily family;
  family.basis = basis;

  if (options.method == NullspaceMethod::exact) {
    RationalRows system;
    system.reserve(rows.size());
    for (const auto& r : rows) system.emplace_back(r.begin(), r.end());
    const RationalRows null = rational_nullspace(std::move(system), unknowns.size());
    for (const auto& v : null) {
      RationalRow full(upper_size(n), Rational(0));
      for (std::size_t c = 0; c < unknowns.size(); ++c) full[unknowns[c]] = v[c];
      family.generators.push_back(upper_to_matrix(full, n));
      family.exact_generators.push_back(std::move(full));
    }
  } else {
    Eigen::MatrixXd a(std::max<std::size_t>(rows.size(), 1), unknowns.size());
    a.setZero();
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t c = 0; c < unknowns.size(); ++c) a(i, c) = static_cast<double>(rows[i][c]);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
    const Eigen::VectorXd& s = svd.singularValues();
    const double smax = s.size() > 0 ? s(0) : 0.0;
    auto nullity = [&](double tol) {
      Eigen::Index rank = 0;
      for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > tol * smax) ++rank;
      return static_cast<Eigen::Index>(unknowns.size()) - rank;
    };
    const Eigen::Index dim = nullity(options.rank_tolerance);
    if (nullity(options.rank_tolerance * 10) != dim || nullity(options.rank_tolerance / 10) != dim) {
      throw RankDeficiency("nullspace dimension of " + basis.name() +
                           " is unstable under tolerance perturbation");
    }
    const Eigen::MatrixXd null = svd.matrixV().rightCols(dim).transpose();
    const Eigen::MatrixXd canon = numeric_rref(null, 1e-12);
    for (Eigen::Index g = 0; g < canon.rows(); ++g) {
      Eigen::VectorXd full = Eigen::VectorXd::Zero(upper_size(n));
      for (std::size_t c = 0; c < unknowns.size(); ++c) full(unknowns[c]) = canon(g, c);
      family.generators.push_back(upper_to_matrix(full, n));
    }
  }
  family.canonical_labels = default_labels(family.generators.size());

  if (options.align_to_reference) {
    if (const auto id = reference_family_for(basis)) {
      try {
        const auto report = match_reference_family(family, *id);
        (void)report;
        family.generators.clear();
        family.exact_generators.clear();
        for (const auto& table : reference_generators(*id)) {
          RationalRow u = reference_upper(basis, table);
          family.generators.push_back(upper_to_matrix(u, n));
          family.exact_generators.push_back(std::move(u));
        }
        family.canonical_labels = default_labels(family.generators.size());
        family.reference = id;
      } catch (const SpanMismatch&) {
        // Keep the raw nullspace basis.
      }
    }
  }
  return family;
}

ReferenceMatchReport match_reference_family(const QFamily& family, ReferenceFamily id) {
  const BasisSpec& basis = family.basis;
  const std::size_t n = basis.size();
  const auto& tables = reference_generators(id);

  RationalRows ref;
  for (const auto& t : tables) ref.push_back(reference_upper(basis, t));

  ReferenceMatchReport report;
  report.reference = id;
  report.derived_dim = family.n_params();
  report.reference_dim = ref.size();
  report.change_of_parameters = Eigen::MatrixXd::Zero(report.derived_dim, report.reference_dim);

  std::vector<Eigen::MatrixXd> ref_mats;
  for (const auto& r : ref) ref_mats.push_back(upper_to_matrix(r, n));
  const Eigen::MatrixXd ref_stack = stack_upper(ref_mats);
  const Eigen::MatrixXd der_stack = stack_upper(family.generators);

  auto mismatch = [&](const std::string& what, const Eigen::VectorXd& residual) {
    Eigen::Index worst;
    residual.cwiseAbs().maxCoeff(&worst);
    throw SpanMismatch(what + "; offending entry " + entry_str(basis, worst) + " residual " +
                       std::to_string(residual(worst)));
  };

  const bool exact = family.exact_generators.size() == family.n_params() && family.n_params() > 0;
  for (std::size_t g = 0; g < family.n_params(); ++g) {
    const Eigen::VectorXd target = der_stack.col(g);
    auto [x, res] = least_squares(ref_stack, target);
    if (exact) {
      const auto coeff = express_in_span(ref, family.exact_generators[g]);
      if (coeff.empty()) mismatch("derived generator " + std::to_string(g) + " not in span", res);
      for (std::size_t j = 0; j < coeff.size(); ++j)
        report.change_of_parameters(g, j) = to_double(coeff[j]);
    } else {
      if (res.cwiseAbs().maxCoeff() > 1e-9)
        mismatch("derived generator " + std::to_string(g) + " not in span", res);
      report.change_of_parameters.row(g) = x.transpose();
    }
  }
  if (report.derived_dim != report.reference_dim) {
    for (std::size_t j = 0; j < ref.size(); ++j) {
      auto [x, res] = least_squares(der_stack, ref_stack.col(j));
      if (family.n_params() == 0 || res.cwiseAbs().maxCoeff() > 1e-9)
        mismatch("reference generator q" + std::to_string(j) + " not in derived span", res);
    }
    throw SpanMismatch("dimension mismatch: derived " + std::to_string(report.derived_dim) +
                       " vs reference " + std::to_string(report.reference_dim));
  }
  report.exact = exact;
  return report;
}

StabilityReport check_stability(const Eigen::VectorXd& modal_mass, const Eigen::MatrixXd& q_modal) {
  Eigen::MatrixXd a = q_modal;
  a.diagonal() += modal_mass;
  const Eigen::Index n = a.rows();
  StabilityReport report;
  report.threshold = 1e-13 * a.trace();
  report.min_pivot = std::numeric_limits<double>::infinity();
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double d = a(j, j) - l.row(j).head(j).squaredNorm();
    report.min_pivot = std::min(report.min_pivot, d);
    if (!(d > report.threshold)) {
      report.stable = false;
      report.failing_pivot = static_cast<std::size_t>(j);
      return report;
    }
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (Eigen::Index i = j + 1; i < n; ++i)
      l(i, j) = (a(i, j) - l.row(i).head(j).dot(l.row(j).head(j))) / ljj;
  }
  return report;
}

StabilityReport check_stability(const OperatorSet& ops, const QFamily& family,
                                std::span<const double> q) {
  check_compatible(family.basis, ops.basis);
  return check_stability(ops.modal_mass, family.evaluate(q));
}

SchemeInstance correction_matrix(OperatorSetPtr ops, const QFamily& family,
                                 std::span<const double> q) {
  check_compatible(family.basis, ops->basis);
  SchemeInstance s;
  s.q_values.assign(q.begin(), q.end());
  s.Q_modal = family.evaluate(q);
  const auto report = check_stability(ops->modal_mass, s.Q_modal);
  if (!report.stable) {
    std::ostringstream msg;
    msg << "M~ + Q~ is not positive definite for " << ops->basis.name() << " (pivot "
        << *report.failing_pivot << ")";
    throw UnstableScheme(msg.str(), *report.failing_pivot);
  }
  s.Q = ops->V_inv.transpose() * s.Q_modal * ops->V_inv;
  s.Q = 0.5 * (s.Q + s.Q.transpose()).eval();
  s.energy_matrix = ops->M + s.Q;
  const Eigen::MatrixXd rhs = ops->L.transpose() * ops->W.asDiagonal();
  s.C = s.energy_matrix.llt().solve(rhs);
  s.ops = std::move(ops);
  return s;
}

SchemeInstance dg_scheme(OperatorSetPtr ops) {
  QFamily empty;
  empty.basis = ops->basis;
  return correction_matrix(std::move(ops), empty, {});
}

Eigen::VectorXd correction_divergence_field(const SchemeInstance& scheme, std::size_t flux_index,
                                            const PointSet& grid) {
  const OperatorSet& ops = *scheme.ops;
  if (flux_index >= ops.n_flux()) throw std::out_of_range("flux index out of range");
  const Eigen::VectorXd modal = ops.V_inv * scheme.C.col(flux_index) / ops.W(flux_index);
  return evaluate_modes(ops.basis, grid.coords) * modal;
}

// 1D corrections.

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

double legendre_series(const std::vector<double>& c, double x) {
  double s = 0.0;
  for (std::size_t n = 0; n < c.size(); ++n) s += c[n] * legendre_eval(static_cast<int>(n), x);
  return s;
}

std::vector<double> mirror(const std::vector<double>& c) {
  std::vector<double> out(c);
  for (std::size_t n = 1; n < out.size(); n += 2) out[n] = -out[n];
  return out;
}

/// Antiderivative in Legendre coefficients, normalised to vanish at x = -1.
std::vector<double> legendre_antiderivative(const std::vector<double>& d) {
  std::vector<double> h(d.size() + 1, 0.0);
  if (!d.empty()) h[1] += d[0];
  for (std::size_t n = 1; n < d.size(); ++n) {
    const double s = d[n] / (2.0 * n + 1.0);
    h[n + 1] += s;
    h[n - 1] -= s;
  }
  h[0] -= legendre_series(h, -1.0);
  return h;
}

}  // namespace

double OneDCorrection::left(double x) const { return legendre_series(h_left, x); }
double OneDCorrection::right(double x) const { return legendre_series(h_right, x); }

std::vector<double> OneDCorrection::right_derivative() const {
  std::vector<double> d(h_right.size() > 1 ? h_right.size() - 1 : 1, 0.0);
  for (std::size_t n = 1; n < h_right.size(); ++n) {
    const auto c = legendre_derivative_coefficients(static_cast<int>(n));
    for (std::size_t j = 0; j < n; ++j) d[j] += h_right[n] * c[j];
  }
  return d;
}

double vcjh_eta(int k, double c) {
  const double ak_kfact = factorial(2 * k) / (std::pow(2.0, k) * factorial(k));
  return c * (2.0 * k + 1.0) * ak_kfact * ak_kfact / 2.0;
}

OneDCorrection vcjh_1d(int k, double c, DomainCheck check) {
  if (k < 1) throw std::invalid_argument("vcjh_1d: k must be at least 1");
  const double eta = vcjh_eta(k, c);
  if (check == DomainCheck::enforce && !(eta > -1.0)) {
    throw DomainError("vcjh_1d: eta_k(c) = " + std::to_string(eta) + " <= -1");
  }
  if (std::abs(1.0 + eta) < 1e-14) throw DomainError("vcjh_1d: 1 + eta_k(c) = 0");
  OneDCorrection corr;
  corr.kind = c == 0.0 ? CorrectionKind::dg : CorrectionKind::vcjh;
  corr.k = k;
  corr.params = {c};
  corr.h_right.assign(k + 2, 0.0);
  corr.h_right[k] = 0.5;
  corr.h_right[k - 1] = 0.5 * eta / (1.0 + eta);
  corr.h_right[k + 1] = 0.5 / (1.0 + eta);
  corr.h_left = mirror(corr.h_right);
  return corr;
}

OneDCorrection extended_1d(int k, double c0, double c1) {
  if (k != 2) throw DomainError("extended_1d: only k = 2 is defined");
  const double psi = 175.0 * c1 * c1 - 42.0 * c0 - 12.0;
  const double denom = 5.0 * c1 + 2.0;
  if (std::abs(psi) < 1e-14) throw DomainError("extended_1d: Psi = 0");
  if (std::abs(denom) < 1e-14) throw DomainError("extended_1d: 5 c1 + 2 = 0");
  const double theta0 = (63.0 * c0 + 105.0 * c1 + 18.0) / psi;
  const double theta1 = 5.0 / denom;
  OneDCorrection corr;
  corr.kind = CorrectionKind::extended;
  corr.k = k;
  corr.params = {c0, c1};
  corr.h_right = legendre_antiderivative({0.5, -theta0, theta1});
  corr.h_left = mirror(corr.h_right);
  return corr;
}

Eigen::MatrixXd tensor_product_correction(const OperatorSet& ops, const OneDCorrection& corr) {
  const BasisSpec& basis = ops.basis;
  if (basis.kind != BasisKind::maximal || corr.k != basis.k_max) {
    throw UnsupportedConfiguration("tensor-product corrections need a maximal basis of order k");
  }
  const auto g = corr.right_derivative();
  const int np = ops.faces.points_per_face;
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(basis.size(), ops.n_flux());
  auto sign = [](int n) { return n % 2 == 0 ? 1.0 : -1.0; };
  for (std::size_t row = 0; row < basis.size(); ++row) {
    const int v = basis.modes[row].v;
    const int w = basis.modes[row].w;
    for (int m = 0; m < np; ++m) {
      const auto at = [&](Face f) { return static_cast<int>(f) * np + m; };
      if (w == m) c(row, at(Face::right)) = g[v];
      if (v == m) c(row, at(Face::top)) = sign(m) * g[w];
      if (v == m) c(row, at(Face::bottom)) = sign(w) * g[w];
      if (w == m) c(row, at(Face::left)) = sign(m) * sign(v) * g[v];
    }
  }
  return c;
}

Eigen::MatrixXd dg_correction_modal(const OperatorSet& ops) {
  const Eigen::MatrixXd vf = face_vandermonde(ops.faces);
  const Eigen::MatrixXd lift = ops.L_modal.transpose() * ops.W.asDiagonal() * vf;
  return ops.modal_mass.cwiseInverse().asDiagonal() * lift;
}

TensorProductReport tensor_product_analysis(
    const OperatorSet& ops, const QFamily& family, std::span<const double> c_grid,
    std::span<const std::pair<double, double>> extended_grid) {
  check_compatible(family.basis, ops.basis);
  const Eigen::MatrixXd c_dg = dg_correction_modal(ops);
  const Eigen::MatrixXd mass = ops.modal_mass.asDiagonal();

  auto solve = [&](const OneDCorrection& corr) {
    const Eigen::MatrixXd c_tp = tensor_product_correction(ops, corr);
    const Eigen::MatrixXd rhs = -mass * (c_tp - c_dg);
    const Eigen::Index size = rhs.size();
    Eigen::MatrixXd a(size, family.n_params());
    for (std::size_t i = 0; i < family.n_params(); ++i) {
      const Eigen::MatrixXd bc = family.generators[i] * c_tp;
      a.col(i) = Eigen::Map<const Eigen::VectorXd>(bc.data(), size);
    }
    const Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(rhs.data(), size);
    TensorProductRow row;
    row.params = corr.params;
    if (family.n_params() == 0) {
      row.residual = b.norm();
      return row;
    }
    auto [x, res] = least_squares(a, b);
    row.residual = res.norm();
    row.q.assign(x.data(), x.data() + x.size());
    return row;
  };

  TensorProductReport report;
  for (double c : c_grid) report.vcjh.push_back(solve(vcjh_1d(ops.basis.k_max, c, DomainCheck::skip)));
  for (auto [c0, c1] : extended_grid) report.extended.push_back(solve(extended_1d(2, c0, c1)));
  return report;
}

}  // namespace quadfr
