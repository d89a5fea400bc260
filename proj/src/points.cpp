#include "quadfr/points.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <gsl/gsl_multimin.h>

#include "quadfr/errors.hpp"

namespace quadfr {

namespace {

constexpr double kPi = std::numbers::pi;

// Points may sit on the boundary of the square but not beyond it.
constexpr double kSquareTolerance = 1e-14;

// Approximate Euclidean layouts for k_max = 2 and 4, frozen from
// optimise_orbit_layout (plane-wave objective) and rounded to 6 digits.
constexpr double EUCLID_K2_AXIS = 0.727128;
constexpr double EUCLID_K2_DIAG = 1.088887;
constexpr double EUCLID_K4_AXIS = 0.553160;
constexpr double EUCLID_K4_DIAG = 1.215552;
constexpr double EUCLID_K4_GEN_R = 0.947228;
constexpr double EUCLID_K4_GEN_ANGLE = -0.323835;

bool inside_square(Point2 p) {
  return std::abs(p.x) <= 1.0 + kSquareTolerance && std::abs(p.y) <= 1.0 + kSquareTolerance;
}

}  // namespace

GaussRule gauss_legendre_1d(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre_1d: n must be >= 1");
  GaussRule rule;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Newton from the Tricomi estimate of the i-th largest root.
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      const double dx = legendre_eval(n, x) / legendre_deriv(n, x);
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre_deriv(n, x);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[n - 1 - i] = x;
    rule.nodes[i] = -x;
    rule.weights[n - 1 - i] = w;
    rule.weights[i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

std::vector<Point2> FaceSet::all_points() const {
  std::vector<Point2> out;
  out.reserve(size());
  for (const auto& f : faces) out.insert(out.end(), f.points.begin(), f.points.end());
  return out;
}

std::vector<double> FaceSet::all_weights() const {
  std::vector<double> out;
  out.reserve(size());
  for (const auto& f : faces) out.insert(out.end(), f.weights.begin(), f.weights.end());
  return out;
}

std::vector<double> FaceSet::normal_components(int direction) const {
  std::vector<double> out;
  out.reserve(size());
  for (const auto& f : faces) {
    const double n = direction == 0 ? f.normal.x : f.normal.y;
    out.insert(out.end(), f.points.size(), n);
  }
  return out;
}

FaceSet face_points(int k_max) {
  if (k_max < 0) throw std::invalid_argument("face_points: negative order");
  const GaussRule rule = gauss_legendre_1d(k_max + 1);
  FaceSet set;
  set.points_per_face = k_max + 1;
  set.nodes = rule.nodes;
  const Point2 normals[4] = {{0.0, -1.0}, {1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}};
  for (int f = 0; f < 4; ++f) {
    auto& face = set.faces[f];
    face.face = static_cast<Face>(f);
    face.normal = normals[f];
    face.weights = rule.weights;
    for (double s : rule.nodes) {
      switch (face.face) {
        case Face::bottom: face.points.push_back({s, -1.0}); break;
        case Face::right: face.points.push_back({1.0, s}); break;
        case Face::top: face.points.push_back({-s, 1.0}); break;
        case Face::left: face.points.push_back({-1.0, -s}); break;
      }
    }
  }
  return set;
}

std::string to_string(Face f) {
  switch (f) {
    case Face::bottom: return "bottom";
    case Face::right: return "right";
    case Face::top: return "top";
    case Face::left: return "left";
  }
  return "?";
}

PointSet tensor_points(int k_max) {
  if (k_max < 1) throw std::invalid_argument("tensor_points: k_max must be >= 1");
  const GaussRule rule = gauss_legendre_1d(k_max + 1);
  PointSet set;
  set.label = "gauss_legendre_tensor_" + std::to_string(k_max + 1) + "x" +
              std::to_string(k_max + 1);
  for (double y : rule.nodes) {
    for (double x : rule.nodes) set.coords.push_back({x, y});
  }
  return set;
}

PointSet padua_points(int n) {
  if (n < 1) throw std::invalid_argument("padua_points: n must be >= 1");
  PointSet set;
  set.label = "padua_interior_lissajous_n" + std::to_string(n);
  for (int j = 1; j <= n + 1; ++j) {
    for (int k = 1; k <= n + 2; ++k) {
      if ((j + k) % 2 != 0) continue;
      // cos(pi/2) is not exactly zero in floating point.
      const double x = (2 * j == n + 2) ? 0.0 : std::cos(j * kPi / (n + 2));
      const double y = (2 * k == n + 3) ? 0.0 : std::cos(k * kPi / (n + 3));
      set.coords.push_back({x, y});
    }
  }
  return set;
}

Orbit Orbit::generic_through(Point2 p) {
  return generic(std::hypot(p.x, p.y), std::atan2(p.y, p.x));
}

std::size_t Orbit::size() const {
  switch (type) {
    case OrbitType::center: return 1;
    case OrbitType::axis:
    case OrbitType::diagonal: return 4;
    case OrbitType::generic: return 8;
  }
  return 0;
}

PointSet orbit_points(std::span<const Orbit> orbits) {
  PointSet set;
  set.label = "orbits";
  for (const auto& o : orbits) {
    std::vector<Point2> pts;
    switch (o.type) {
      case OrbitType::center:
        pts = {{0.0, 0.0}};
        set.label += "_c";
        break;
      case OrbitType::axis:
        pts = {{o.r, 0.0}, {0.0, o.r}, {-o.r, 0.0}, {0.0, -o.r}};
        set.label += "_a";
        break;
      case OrbitType::diagonal: {
        const double s = o.r / std::numbers::sqrt2;
        pts = {{s, s}, {-s, s}, {-s, -s}, {s, -s}};
        set.label += "_d";
        break;
      }
      case OrbitType::generic: {
        const double x = o.r * std::cos(o.angle);
        const double y = o.r * std::sin(o.angle);
        pts = {{x, y}, {-y, x}, {-x, -y}, {y, -x}, {y, x}, {-x, y}, {-y, -x}, {x, -y}};
        set.label += "_g";
        break;
      }
    }
    for (const auto& p : pts) {
      if (!inside_square(p)) {
        std::ostringstream msg;
        msg << "orbit point (" << p.x << ", " << p.y << ") leaves the reference square";
        throw OrbitOverflow(msg.str());
      }
      set.coords.push_back(p);
    }
  }
  return set;
}

std::vector<Orbit> euclidean_layout(int k_max) {
  switch (k_max) {
    case 2:
      return {Orbit::axis(EUCLID_K2_AXIS), Orbit::diagonal(EUCLID_K2_DIAG)};
    case 3:
      // L2-optimised 13 point layout.
      return {Orbit::center(), Orbit::diagonal(0.89367 * std::numbers::sqrt2),
              Orbit::generic_through({0.37165, 0.79694})};
    case 4:
      return {Orbit::center(), Orbit::axis(EUCLID_K4_AXIS), Orbit::diagonal(EUCLID_K4_DIAG),
              Orbit::generic(EUCLID_K4_GEN_R, EUCLID_K4_GEN_ANGLE)};
    default:
      break;
  }
  throw UnsupportedConfiguration("no stored approximate Euclidean layout for k_max = " +
                                 std::to_string(k_max));
}

PointSet default_point_set(const BasisSpec& basis) {
  PointSet set;
  switch (basis.kind) {
    case BasisKind::maximal:
      set = tensor_points(basis.k_max);
      break;
    case BasisKind::total:
      set = padua_points(basis.k_max);
      break;
    case BasisKind::euclidean: {
      const auto orbits = euclidean_layout(basis.k_max);
      set = orbit_points(orbits);
      set.label = "euclidean_l2_layout_k" + std::to_string(basis.k_max);
      break;
    }
  }
  if (set.size() != basis.size()) {
    throw UnsupportedConfiguration("point set '" + set.label + "' has " +
                                   std::to_string(set.size()) + " points but basis " +
                                   basis.name() + " has " + std::to_string(basis.size()) +
                                   " modes");
  }
  return set;
}

PointSet rotate_quarter_turn(const PointSet& points) {
  PointSet out;
  out.label = points.label + "_rot90";
  for (const auto& p : points.coords) out.coords.push_back({-p.y, p.x});
  return out;
}

bool same_point_set(const PointSet& a, const PointSet& b, double tol) {
  if (a.size() != b.size()) return false;
  std::vector<bool> used(b.size(), false);
  for (const auto& p : a.coords) {
    bool found = false;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (!used[j] && std::abs(p.x - b.coords[j].x) <= tol &&
          std::abs(p.y - b.coords[j].y) <= tol) {
        used[j] = true;
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

std::string to_csv(const PointSet& points) {
  std::ostringstream out;
  out << std::setprecision(17) << "x,y\n";
  for (const auto& p : points.coords) out << p.x << ',' << p.y << '\n';
  return out.str();
}

double interpolation_objective(const BasisSpec& basis, const PointSet& points) {
  if (points.size() != basis.size()) return std::numeric_limits<double>::infinity();
  const Eigen::MatrixXd v = evaluate_modes(basis, points.coords);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(v);
  const auto& s = svd.singularValues();
  if (!(s(s.size() - 1) > 1e-8 * s(0))) return std::numeric_limits<double>::infinity();

  const GaussRule rule = gauss_legendre_1d(12);
  std::vector<Point2> quad;
  std::vector<double> wq;
  for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      quad.push_back({rule.nodes[i], rule.nodes[j]});
      wq.push_back(rule.weights[i] * rule.weights[j]);
    }
  }
  const Eigen::MatrixXd interp = evaluate_modes(basis, quad) * v.partialPivLu().inverse();

  constexpr double kWaveNumber = 2.5;
  constexpr int kDirections = 8;
  double total = 0.0;
  int count = 0;
  for (int d = 0; d < kDirections; ++d) {
    const double a = kPi * d / kDirections;
    for (double phase : {0.0, kPi / 2}) {
      auto f = [&](Point2 p) {
        return std::cos(kWaveNumber * (p.x * std::cos(a) + p.y * std::sin(a)) + phase);
      };
      Eigen::VectorXd samples(points.size());
      for (std::size_t i = 0; i < points.size(); ++i) samples(i) = f(points.coords[i]);
      const Eigen::VectorXd u = interp * samples;
      double err = 0.0, norm = 0.0;
      for (std::size_t q = 0; q < quad.size(); ++q) {
        const double fe = f(quad[q]);
        err += wq[q] * (u(q) - fe) * (u(q) - fe);
        norm += wq[q] * fe * fe;
      }
      total += std::sqrt(err / norm);
      ++count;
    }
  }
  return total / count;
}

namespace {

struct LayoutProblem {
  const BasisSpec* basis;
  std::vector<Orbit> orbits;
  int evaluations = 0;
};

// Parameters per orbit: axis/diagonal -> r; generic -> (r, angle).
std::vector<double> pack(const std::vector<Orbit>& orbits) {
  std::vector<double> x;
  for (const auto& o : orbits) {
    if (o.type == OrbitType::center) continue;
    x.push_back(o.r);
    if (o.type == OrbitType::generic) x.push_back(o.angle);
  }
  return x;
}

std::vector<Orbit> unpack(std::vector<Orbit> orbits, const gsl_vector* x) {
  std::size_t k = 0;
  for (auto& o : orbits) {
    if (o.type == OrbitType::center) continue;
    o.r = gsl_vector_get(x, k++);
    if (o.type == OrbitType::generic) o.angle = gsl_vector_get(x, k++);
  }
  return orbits;
}

double layout_cost(const gsl_vector* x, void* params) {
  auto* problem = static_cast<LayoutProblem*>(params);
  ++problem->evaluations;
  try {
    const auto orbits = unpack(problem->orbits, x);
    const PointSet pts = orbit_points(orbits);
    const double value = interpolation_objective(*problem->basis, pts);
    return std::isfinite(value) ? value : 1e30;
  } catch (const OrbitOverflow&) {
    return 1e30;
  }
}

}  // namespace

OrbitLayout optimise_orbit_layout(const BasisSpec& basis, std::vector<Orbit> seed,
                                  int max_iterations) {
  LayoutProblem problem{&basis, seed, 0};
  const std::vector<double> start = pack(seed);
  OrbitLayout result;
  if (start.empty()) {
    result.orbits = seed;
    result.objective = interpolation_objective(basis, orbit_points(seed));
    return result;
  }

  const std::size_t n = start.size();
  gsl_vector* x = gsl_vector_alloc(n);
  gsl_vector* step = gsl_vector_alloc(n);
  for (std::size_t i = 0; i < n; ++i) {
    gsl_vector_set(x, i, start[i]);
    gsl_vector_set(step, i, 0.05);
  }
  gsl_multimin_function fn{&layout_cost, n, &problem};
  gsl_multimin_fminimizer* solver =
      gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n);
  gsl_multimin_fminimizer_set(solver, &fn, x, step);
  for (int it = 0; it < max_iterations; ++it) {
    if (gsl_multimin_fminimizer_iterate(solver) != 0) break;
    if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(solver), 1e-10) == GSL_SUCCESS)
      break;
  }
  result.orbits = unpack(seed, gsl_multimin_fminimizer_x(solver));
  result.objective = gsl_multimin_fminimizer_minimum(solver);
  result.evaluations = problem.evaluations;
  gsl_multimin_fminimizer_free(solver);
  gsl_vector_free(step);
  gsl_vector_free(x);
  return result;
}

}  // namespace quadfr
