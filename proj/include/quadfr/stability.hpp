#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "quadfr/basis.hpp"
#include "quadfr/operators.hpp"
#include "quadfr/rational.hpp"

namespace quadfr {

// Filter families Q~(q) = sum_i q_i B~_i, stored in modal form.

/// Closed-form families known for the shipped configurations.
enum class ReferenceFamily { max_k2, max_k3, tot_k2, tot_k3, tot_k4, euc_k2, euc_k3, euc_k4 };

inline constexpr ReferenceFamily kAllReferenceFamilies[] = {
    ReferenceFamily::max_k2, ReferenceFamily::max_k3, ReferenceFamily::tot_k2,
    ReferenceFamily::tot_k3, ReferenceFamily::tot_k4, ReferenceFamily::euc_k2,
    ReferenceFamily::euc_k3, ReferenceFamily::euc_k4};

std::string to_string(ReferenceFamily id);
ReferenceFamily parse_reference_family(std::string_view text);
BasisSpec reference_basis(ReferenceFamily id);
std::optional<ReferenceFamily> reference_family_for(const BasisSpec& basis);

/// One upper-triangular entry of a symmetric generator, keyed by modes.
struct GeneratorEntry {
  ModeIndex row;
  ModeIndex col;
  Rational value;
};
using GeneratorTable = std::vector<GeneratorEntry>;

/// Generator i multiplies parameter q_i.
const std::vector<GeneratorTable>& reference_generators(ReferenceFamily id);

enum class NullspaceMethod { exact, numeric };

struct QDerivationOptions {
  NullspaceMethod method = NullspaceMethod::exact;
  /// Replace the raw nullspace basis by the closed-form generators when the
  /// spans agree, so that parameter labels are stable.
  bool align_to_reference = true;
  double rank_tolerance = 1e-10;
};

struct QFamily {
  BasisSpec basis;
  std::vector<Eigen::MatrixXd> generators;
  /// Upper triangles (row-major, i <= j) of the generators when derived exactly.
  std::vector<RationalRow> exact_generators;
  std::vector<std::string> canonical_labels;
  std::optional<ReferenceFamily> reference;

  std::size_t n_params() const noexcept { return generators.size(); }
  /// Q~(q). Throws std::invalid_argument when |q| != n_params.
  Eigen::MatrixXd evaluate(std::span<const double> q) const;
};

/// Symmetric Q~ with Q~ D~x and Q~ D~y antisymmetric, commuting with the
/// quarter-turn and the x-reflection, and with a zero constant-mode row.
/// Throws RankDeficiency when the numeric nullspace dimension changes under a
/// x10 change of tolerance.
QFamily derive_q_family(const OperatorSet& ops, const QDerivationOptions& options = {});
QFamily derive_q_family(const BasisSpec& basis, const QDerivationOptions& options = {});

/// Max-norm residuals of the defining constraints for one generator.
struct ConstraintResiduals {
  double symmetry = 0.0;
  double antisymmetry_x = 0.0;
  double antisymmetry_y = 0.0;
  double rotation = 0.0;
  double reflection = 0.0;
  double max() const;
};
ConstraintResiduals constraint_residuals(const BasisSpec& basis, const Eigen::MatrixXd& q_modal);

struct ReferenceMatchReport {
  ReferenceFamily reference;
  std::size_t derived_dim = 0;
  std::size_t reference_dim = 0;
  bool exact = false;
  /// Row i: derived generator i in terms of the reference generators.
  Eigen::MatrixXd change_of_parameters;
};

/// Verifies span equality; throws SpanMismatch naming an offending entry.
ReferenceMatchReport match_reference_family(const QFamily& family, ReferenceFamily id);

// Positive-definiteness test of M~ + Q~.

struct StabilityReport {
  bool stable = true;
  std::optional<std::size_t> failing_pivot;
  double min_pivot = 0.0;
  double threshold = 0.0;
};

/// Cholesky of M~ + Q~(q); a pivot at or below 1e-13 trace is a failure.
StabilityReport check_stability(const OperatorSet& ops, const QFamily& family,
                                std::span<const double> q);
StabilityReport check_stability(const Eigen::VectorXd& modal_mass, const Eigen::MatrixXd& q_modal);

/// Closed-form condition g(q) > 0.
struct Inequality {
  std::string label;
  std::function<double(std::span<const double>)> g;
  bool holds(std::span<const double> q) const { return g(q) > 0.0; }
};

std::vector<Inequality> inequality_suite(ReferenceFamily id);

// Correction matrices.

struct SchemeInstance {
  OperatorSetPtr ops;
  std::vector<double> q_values;
  Eigen::MatrixXd Q_modal;
  Eigen::MatrixXd Q;
  Eigen::MatrixXd C;  // n_sol x n_flux
  Eigen::MatrixXd energy_matrix;  // M + Q
};

/// C = (M + Q)^-1 L^T W. Throws UnstableScheme when M~ + Q~ is not positive
/// definite.
SchemeInstance correction_matrix(OperatorSetPtr ops, const QFamily& family,
                                 std::span<const double> q);
SchemeInstance dg_scheme(OperatorSetPtr ops);

/// Divergence of the correction field for a unit jump at one flux point:
/// column flux_index of C divided by its boundary weight, evaluated on grid.
Eigen::VectorXd correction_divergence_field(const SchemeInstance& scheme, std::size_t flux_index,
                                            const PointSet& grid);

// One-dimensional corrections and the tensor-product construction.

enum class CorrectionKind { dg, vcjh, extended };

/// h_L and h_R as Legendre coefficient vectors of degree k + 1.
struct OneDCorrection {
  CorrectionKind kind = CorrectionKind::dg;
  int k = 0;
  std::vector<double> params;
  std::vector<double> h_left;
  std::vector<double> h_right;

  double left(double x) const;
  double right(double x) const;
  /// Legendre coefficients of h_R', degree k.
  std::vector<double> right_derivative() const;
};

double vcjh_eta(int k, double c);

enum class DomainCheck { enforce, skip };

/// eta_k(c) > -1 is the stable range c > -2 / ((2k+1)(a_k k!)^2). With
/// DomainCheck::enforce a value outside it throws DomainError; with skip only
/// 1 + eta_k = 0 does.
OneDCorrection vcjh_1d(int k, double c, DomainCheck check = DomainCheck::enforce);

/// Two-parameter k = 2 family with h_R' = psi0/2 - theta0 psi1 + theta1 psi2.
/// Throws DomainError when the denominators vanish or for k != 2.
OneDCorrection extended_1d(int k, double c0, double c1);

/// Modal x face-modal correction of the tensor product of a 1D correction on
/// the maximal basis: entry (mode, face mode) of V^-1 C V_f.
Eigen::MatrixXd tensor_product_correction(const OperatorSet& ops, const OneDCorrection& corr);
/// Same representation for the DG correction.
Eigen::MatrixXd dg_correction_modal(const OperatorSet& ops);

struct TensorProductRow {
  std::vector<double> params;
  double residual = 0.0;
  std::vector<double> q;
};

struct TensorProductReport {
  std::vector<TensorProductRow> vcjh;
  std::vector<TensorProductRow> extended;
};

/// Least-squares residual of sum_i q_i B~_i C~_tp = -M~ (C~_tp - C~_DG) over the
/// family, for each c and each (c0, c1) pair.
TensorProductReport tensor_product_analysis(const OperatorSet& ops, const QFamily& family,
                                            std::span<const double> c_grid,
                                            std::span<const std::pair<double, double>> extended_grid);

}  // namespace quadfr
