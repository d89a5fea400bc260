#pragma once

#include <compare>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "quadfr/point.hpp"

namespace quadfr {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Product mode psi_v(x) psi_w(y).
struct ModeIndex {
  int v = 0;
  int w = 0;

  auto operator<=>(const ModeIndex&) const = default;
};

enum class BasisKind { maximal, total, euclidean };

/// x_major is lexicographic by (v, w); y_major is lexicographic by (w, v),
/// i.e. index = w (k + 1) + v for the maximal basis.
enum class ModeOrdering { x_major, y_major };

struct BasisSpec {
  int k_max = 0;
  double norm_p = kInfinity;
  BasisKind kind = BasisKind::maximal;
  ModeOrdering ordering = ModeOrdering::x_major;
  std::vector<ModeIndex> modes;

  std::size_t size() const noexcept { return modes.size(); }
  std::optional<std::size_t> index_of(ModeIndex m) const;
  bool swap_closed() const;
  /// Short identifier such as "max_k3", "tot_k2" or "euc_k4".
  std::string name() const;
};

/// Legendre polynomial normalised so that psi_k(1) = 1.
double legendre_eval(int order, double x);
double legendre_deriv(int order, double x);

/// Coefficients c_j with psi_order' = sum_j c_j psi_j (length max(order, 1)).
std::vector<double> legendre_derivative_coefficients(int order);

/// ||(v, w)||_p, with p = kInfinity meaning max(v, w).
double mode_norm(ModeIndex m, double p);

/// Modes with ||(v, w)||_p <= k_max. The default ordering is y_major for
/// p = infinity and x_major otherwise.
BasisSpec build_basis(int k_max, double norm_p);
BasisSpec build_basis(int k_max, double norm_p, ModeOrdering ordering);

/// p used for the approximate Euclidean basis at a given order (k_max 2..11).
double approx_euclidean_p(int k_max);

/// Basis of the given family; euclidean means the approximate Euclidean basis.
BasisSpec make_basis(BasisKind kind, int k_max);

BasisKind parse_basis_kind(std::string_view text);
std::string to_string(BasisKind kind);
std::string to_string(ModeOrdering ordering);

/// phi_j(x_i) for every point and mode, without solvability checks.
Eigen::MatrixXd evaluate_modes(const BasisSpec& basis, std::span<const Point2> points);

struct Vandermonde {
  Eigen::MatrixXd matrix;
  std::optional<Eigen::MatrixXd> inverse;
  double condition = 0.0;
};

/// V[i][j] = phi_j(x_i). Throws SingularVandermonde when the 2-norm condition
/// number exceeds 1/epsilon.
Vandermonde vandermonde(const BasisSpec& basis, const PointSet& points);

}  // namespace quadfr
