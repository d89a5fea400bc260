#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "quadfr/solver.hpp"

namespace quadfr {

/// Mersenne twister stream with uniform draws identical to
/// numpy.random.RandomState(seed).random_sample() for seeds below 2^32.
/// Larger seeds are folded to 32 bits as (hi xor lo).
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed);
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::mt19937 engine_;
};

SeededRng seeded_rng(std::uint64_t seed);

struct MorletConfig {
  int n = 4;
  double sigma = 3.0;
  std::vector<Point2> centers;
  std::vector<double> kappas;
  std::uint64_t rng_seed = 0;
  double length = 2.0 * std::numbers::pi;

  /// Throws std::invalid_argument when the invariants do not hold.
  void validate() const;
};

/// Centres uniform on [0, length]^2 and kappa_i uniform on [0, 1], drawn in
/// the order x1, y1, kappa1, x2, ...
MorletConfig random_morlet(int n, double sigma, std::uint64_t seed,
                           double length = 2.0 * std::numbers::pi);

double morlet_c_sigma(double sigma);

/// Radial profile exp(-r^2 / 2)(cos(sigma r) - kappa).
double morlet_profile(double r, double sigma, double kappa);

/// Sum of wavelets scaled by c_sigma pi^(-1/4). Distances use the nearest
/// periodic image and its eight neighbours, so the field is smooth and
/// periodic to ~1e-19.
double morlet_ic(const MorletConfig& cfg, double x, double y);

/// morlet_ic translated by t (cos theta, sin theta).
double exact_solution(const MorletConfig& cfg, double theta, double t, double x, double y);

/// Exact solution u(t, x, y) of an advection problem.
using ExactField = std::function<double(double t, double x, double y)>;

enum class InitialConditionKind { morlet, sine, gauss };
InitialConditionKind parse_initial_condition(std::string_view text);
std::string to_string(InitialConditionKind kind);

/// Exact advected field for the given initial condition; sine is
/// sin(x) sin(y), gauss a periodic Gaussian of width 0.5 at the centre.
ExactField make_exact_field(InitialConditionKind kind, const MorletConfig& morlet, double theta,
                            double length = 2.0 * std::numbers::pi);

/// Absolute discrete L2 error using an n x n Gauss rule per element.
/// Throws std::invalid_argument when quad_strength < k_max + 2.
double error_norm(const AdvectionSolver& solver, const SolverState& state,
                  const std::function<double(double, double)>& exact, int quad_strength);

/// log(E1/E2)/log(h1/h2) for two levels, least-squares slope of log E
/// against log h otherwise. Throws DegenerateFit if any E <= 0 or fewer
/// than two distinct h.
double order_of_accuracy(const std::vector<std::pair<double, double>>& h_error);

inline constexpr const char* kErrorNormDefinition =
    "absolute discrete L2 norm over [0,2pi]^2, per-element tensor Gauss-Legendre rule";

// Advection runs.

struct RunSpec {
  BasisKind basis = BasisKind::maximal;
  int k = 3;
  std::vector<double> q;  // empty: DG
  int n = 8;              // nx = ny = n
  SolverConfig solver;
  InitialConditionKind ic = InitialConditionKind::morlet;
  MorletConfig morlet;
  int sample_every = 100;  // steps between samples; 0 samples start and end only
  int quad_strength = 0;   // 0: k + 3
};

struct RunResult {
  std::vector<double> t;
  std::vector<double> energy;
  std::vector<double> error;
  std::vector<double> integral;
  double h = 0.0;
};

/// max |I(t) - I(0)| over the samples, relative to max(|I(0)|, L sqrt(E(0))),
/// which bounds |I| by Cauchy-Schwarz on the square of side L.
double integral_drift(const RunResult& result, double length = 2.0 * std::numbers::pi);

/// Rejects unstable q before stepping.
RunResult run_advection(const RunSpec& spec);

/// Runs jobs on a pool of workers; results are ordered like the input.
/// workers = 0 uses the hardware concurrency.
std::vector<RunResult> run_batch(const std::vector<RunSpec>& specs, unsigned workers = 0);

struct SweepRow {
  double theta = 0.0;
  double order = 0.0;
  double error = 0.0;
  double integral_drift = 0.0;  // largest over the grids
};

struct SweepResult {
  BasisKind basis;
  std::vector<SweepRow> rows;
};

struct SweepOptions {
  std::vector<double> q;
  double dt = 1e-3;
  double kappa = 1.0;
  InitialConditionKind ic = InitialConditionKind::morlet;
  MorletConfig morlet;
  unsigned workers = 0;
};

/// For each basis and theta: run every grid, fit the order over all grids,
/// record the error on the finest grid at t_end.
std::vector<SweepResult> angle_sweep(const std::vector<BasisKind>& bases, int k,
                                     const std::vector<double>& thetas,
                                     const std::vector<int>& grids, double t_end,
                                     const SweepOptions& options = {});

struct OrderSeries {
  BasisKind basis;
  std::vector<double> t;
  std::vector<double> order;
  double integral_drift = 0.0;
};

/// Two-grid order at every sample time.
OrderSeries order_series(BasisKind basis, const RunResult& coarse, const RunResult& fine);

std::vector<OrderSeries> order_vs_time(const std::vector<BasisKind>& bases, int k, double theta,
                                       std::pair<int, int> grids, double t_end, int sample_every,
                                       const SweepOptions& options = {});

/// 13 uniformly spaced angles on [0, pi/2].
std::vector<double> default_angles(int count = 13);

std::string sweep_csv(const SweepResult& result);
std::string order_csv(const OrderSeries& series);
std::string run_csv(const RunResult& result);

}  // namespace quadfr
