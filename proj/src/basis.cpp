#include "quadfr/basis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

#include "quadfr/errors.hpp"

namespace quadfr {

namespace {

// Relative slack toward inclusion in the L_p selection test. Must stay well
// below the smallest genuine excess, 9.4e-11 for mode (3,2) at k=3, p=50.
constexpr double kSelectionSlack = 1e-12;

struct ApproxEuclideanRow {
  int k_max;
  double p;
};

constexpr ApproxEuclideanRow kApproxEuclidean[] = {
    {2, 48.0}, {3, 50.0}, {4, 2.0}, {5, 21.0}, {6, 3.0},
    {7, 3.0},  {8, 2.2},  {9, 2.0}, {10, 2.4}, {11, 2.2},
};

}  // namespace

std::optional<std::size_t> BasisSpec::index_of(ModeIndex m) const {
  auto it = std::find(modes.begin(), modes.end(), m);
  if (it == modes.end()) return std::nullopt;
  return static_cast<std::size_t>(it - modes.begin());
}

bool BasisSpec::swap_closed() const {
  return std::all_of(modes.begin(), modes.end(), [this](ModeIndex m) {
    return index_of({m.w, m.v}).has_value();
  });
}

std::string BasisSpec::name() const {
  std::string prefix;
  switch (kind) {
    case BasisKind::maximal: prefix = "max"; break;
    case BasisKind::total: prefix = "tot"; break;
    case BasisKind::euclidean: prefix = "euc"; break;
  }
  return prefix + "_k" + std::to_string(k_max);
}

double legendre_eval(int order, double x) {
  if (order < 0) throw std::invalid_argument("legendre_eval: negative order");
  if (order == 0) return 1.0;
  double prev = 1.0;
  double cur = x;
  for (int n = 1; n < order; ++n) {
    const double next = ((2.0 * n + 1.0) * x * cur - n * prev) / (n + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

double legendre_deriv(int order, double x) {
  if (order < 0) throw std::invalid_argument("legendre_deriv: negative order");
  // psi_{n+1}' = (n + 1) psi_n + x psi_n', exact at the end points.
  double p_prev = 1.0;
  double p = x;
  double dp = 1.0;
  if (order == 0) return 0.0;
  for (int n = 1; n < order; ++n) {
    const double dnext = (n + 1.0) * p + x * dp;
    const double pnext = ((2.0 * n + 1.0) * x * p - n * p_prev) / (n + 1.0);
    p_prev = p;
    p = pnext;
    dp = dnext;
  }
  return dp;
}

std::vector<double> legendre_derivative_coefficients(int order) {
  if (order < 0) throw std::invalid_argument("negative Legendre order");
  std::vector<double> c(static_cast<std::size_t>(std::max(order, 1)), 0.0);
  for (int j = order - 1; j >= 0; j -= 2) c[j] = 2.0 * j + 1.0;
  return c;
}

double mode_norm(ModeIndex m, double p) {
  if (std::isinf(p)) return std::max(m.v, m.w);
  if (m.v == 0) return m.w;
  if (m.w == 0) return m.v;
  return std::pow(std::pow(m.v, p) + std::pow(m.w, p), 1.0 / p);
}

BasisSpec build_basis(int k_max, double norm_p) {
  return build_basis(k_max, norm_p,
                     std::isinf(norm_p) ? ModeOrdering::y_major : ModeOrdering::x_major);
}

BasisSpec build_basis(int k_max, double norm_p, ModeOrdering ordering) {
  if (k_max < 1) throw std::invalid_argument("build_basis: k_max must be >= 1");
  if (!(norm_p > 0.0)) throw std::invalid_argument("build_basis: norm_p must be positive");

  BasisSpec basis;
  basis.k_max = k_max;
  basis.norm_p = norm_p;
  basis.ordering = ordering;
  if (std::isinf(norm_p)) {
    basis.kind = BasisKind::maximal;
  } else if (norm_p == 1.0) {
    basis.kind = BasisKind::total;
  } else {
    basis.kind = BasisKind::euclidean;
  }

  const double bound = k_max * (1.0 + kSelectionSlack);
  for (int v = 0; v <= k_max; ++v) {
    for (int w = 0; w <= k_max; ++w) {
      if (mode_norm({v, w}, norm_p) <= bound) basis.modes.push_back({v, w});
    }
  }
  if (ordering == ModeOrdering::y_major) {
    std::sort(basis.modes.begin(), basis.modes.end(), [](ModeIndex a, ModeIndex b) {
      return std::tie(a.w, a.v) < std::tie(b.w, b.v);
    });
  }
  return basis;
}

double approx_euclidean_p(int k_max) {
  for (const auto& row : kApproxEuclidean) {
    if (row.k_max == k_max) return row.p;
  }
  throw UnsupportedConfiguration("no approximate Euclidean p tabulated for k_max = " +
                                 std::to_string(k_max));
}

BasisSpec make_basis(BasisKind kind, int k_max) {
  switch (kind) {
    case BasisKind::maximal: return build_basis(k_max, kInfinity);
    case BasisKind::total: return build_basis(k_max, 1.0);
    case BasisKind::euclidean: return build_basis(k_max, approx_euclidean_p(k_max));
  }
  throw std::logic_error("unreachable");
}

BasisKind parse_basis_kind(std::string_view text) {
  if (text == "max" || text == "maximal" || text == "inf") return BasisKind::maximal;
  if (text == "total" || text == "tot" || text == "1") return BasisKind::total;
  if (text == "euclid" || text == "euclidean" || text == "euc" || text == "2*")
    return BasisKind::euclidean;
  throw std::invalid_argument("unknown basis '" + std::string(text) + "'");
}

std::string to_string(BasisKind kind) {
  switch (kind) {
    case BasisKind::maximal: return "maximal";
    case BasisKind::total: return "total";
    case BasisKind::euclidean: return "euclidean";
  }
  return "?";
}

std::string to_string(ModeOrdering ordering) {
  return ordering == ModeOrdering::x_major ? "x_major" : "y_major";
}

Eigen::MatrixXd evaluate_modes(const BasisSpec& basis, std::span<const Point2> points) {
  const int k = basis.k_max;
  Eigen::MatrixXd out(points.size(), basis.size());
  std::vector<double> px(k + 1), py(k + 1);
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (int n = 0; n <= k; ++n) {
      px[n] = legendre_eval(n, points[i].x);
      py[n] = legendre_eval(n, points[i].y);
    }
    for (std::size_t j = 0; j < basis.size(); ++j) {
      out(i, j) = px[basis.modes[j].v] * py[basis.modes[j].w];
    }
  }
  return out;
}

Vandermonde vandermonde(const BasisSpec& basis, const PointSet& points) {
  if (points.size() < basis.size()) {
    throw std::invalid_argument("vandermonde: fewer points than modes");
  }
  Vandermonde out;
  out.matrix = evaluate_modes(basis, points.coords);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(out.matrix);
  const auto& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  out.condition = smin > 0.0 ? s(0) / smin : kInfinity;
  if (!(out.condition < 1.0 / std::numeric_limits<double>::epsilon())) {
    throw SingularVandermonde("Vandermonde matrix for " + basis.name() + " on '" +
                              points.label + "' is singular (condition " +
                              std::to_string(out.condition) + ")");
  }
  if (out.matrix.rows() == out.matrix.cols()) {
    out.inverse = out.matrix.partialPivLu().inverse();
  }
  return out;
}

}  // namespace quadfr
