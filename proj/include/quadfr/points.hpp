#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "quadfr/basis.hpp"
#include "quadfr/point.hpp"

namespace quadfr {

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1], nodes ascending.
GaussRule gauss_legendre_1d(int n);

enum class Face { bottom = 0, right = 1, top = 2, left = 3 };

/// Flux points on the four faces of the reference square.
///
/// Faces are enumerated bottom, right, top, left. Each face is traversed
/// counter-clockwise, so the face coordinate s runs along +x on the bottom,
/// +y on the right, -x on the top and -y on the left face. Flux point j of a
/// face has face coordinate nodes[j] (ascending). Opposite faces of adjacent
/// elements therefore pair flux point j with n - 1 - j.
struct FaceSet {
  struct FaceData {
    Face face = Face::bottom;
    std::vector<Point2> points;
    std::vector<double> weights;
    Point2 normal;
  };

  int points_per_face = 0;
  std::vector<double> nodes;
  std::array<FaceData, 4> faces;

  std::size_t size() const noexcept { return 4 * static_cast<std::size_t>(points_per_face); }
  std::size_t flux_index(Face f, int j) const {
    return static_cast<std::size_t>(f) * points_per_face + j;
  }
  std::vector<Point2> all_points() const;
  std::vector<double> all_weights() const;
  std::vector<double> normal_components(int direction) const;
};

FaceSet face_points(int k_max);

std::string to_string(Face f);

/// (k_max+1)^2 tensor product of Gauss-Legendre nodes, x fastest.
PointSet tensor_points(int k_max);

/// The (n+1)(n+2)/2 interior self-intersections of the Lissajous curve
/// (cos((n+3)t), cos((n+2)t)): x = cos(j pi/(n+2)), y = cos(k pi/(n+3)),
/// 1 <= j <= n+1, 1 <= k <= n+2, j + k even.
PointSet padua_points(int n);

enum class OrbitType { center, axis, diagonal, generic };

/// Generator of a point orbit under the symmetry group of the square.
/// axis and diagonal orbits are placed at distance r from the centre; the
/// generic orbit is seeded by the polar point (r cos angle, r sin angle).
struct Orbit {
  OrbitType type = OrbitType::center;
  double r = 0.0;
  double angle = 0.0;

  static Orbit center() { return {OrbitType::center, 0.0, 0.0}; }
  static Orbit axis(double r) { return {OrbitType::axis, r, 0.0}; }
  static Orbit diagonal(double r) { return {OrbitType::diagonal, r, 0.0}; }
  static Orbit generic(double r, double angle) { return {OrbitType::generic, r, angle}; }
  static Orbit generic_through(Point2 p);
  std::size_t size() const;
};

/// Throws OrbitOverflow when a generated point leaves [-1, 1]^2.
PointSet orbit_points(std::span<const Orbit> orbits);

/// Solution points used for each basis: tensor Gauss-Legendre for maximal,
/// Padua points for total, stored orbit layouts for approximate Euclidean
/// (k_max 2, 3, 4). Throws UnsupportedConfiguration otherwise.
PointSet default_point_set(const BasisSpec& basis);

/// Stored orbit generators for the approximate Euclidean layouts.
std::vector<Orbit> euclidean_layout(int k_max);

/// Image of a point set under (x, y) -> (-y, x).
PointSet rotate_quarter_turn(const PointSet& points);

/// True when both sets contain the same points (any order) within tol.
bool same_point_set(const PointSet& a, const PointSet& b, double tol = 1e-12);

/// "x,y" header followed by one row per point at 17 significant digits.
std::string to_csv(const PointSet& points);

// Layout generation for orbit-based point sets.

/// Mean relative L2 interpolation error of a family of plane waves, computed
/// with a 12x12 Gauss rule. Returns +inf for non-unisolvent sets.
double interpolation_objective(const BasisSpec& basis, const PointSet& points);

struct OrbitLayout {
  std::vector<Orbit> orbits;
  double objective = 0.0;
  int evaluations = 0;
};

/// Nelder-Mead over the orbit radii and angles, starting from the seed.
OrbitLayout optimise_orbit_layout(const BasisSpec& basis, std::vector<Orbit> seed,
                                  int max_iterations = 2000);

}  // namespace quadfr
