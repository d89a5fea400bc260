#include <cmath>
#include <algorithm>
#include <map>
#include <stdexcept>

#include "quadfr/errors.hpp"
#include "quadfr/stability.hpp"

namespace quadfr {

namespace {

Rational R(long n, long d = 1) { return Rational(n) / d; }

GeneratorEntry E(int v0, int w0, int v1, int w1, Rational value) {
  return {{v0, w0}, {v1, w1}, std::move(value)};
}

GeneratorEntry D(int v, int w, Rational value = 1) { return E(v, w, v, w, std::move(value)); }

std::map<ReferenceFamily, std::vector<GeneratorTable>> build_tables() {
  std::map<ReferenceFamily, std::vector<GeneratorTable>> t;
  t[ReferenceFamily::max_k2] = {
      {D(2, 2)},
      {D(2, 1), D(1, 2), E(2, 0, 2, 2, -3), E(0, 2, 2, 2, -3)},
  };
  t[ReferenceFamily::max_k3] = {
      {D(3, 3)},
      {D(3, 2), D(2, 3), E(3, 1, 3, 3, R(-5, 3)), E(1, 3, 3, 3, R(-5, 3))},
      {E(1, 1, 3, 3, 1), E(2, 1, 2, 3, R(-3, 5)), E(3, 1, 1, 3, 1), E(1, 2, 3, 2, R(-3, 5)),
       D(2, 2, R(9, 25))},
  };
  t[ReferenceFamily::tot_k2] = {
      {D(0, 2), D(2, 0)},
      {D(1, 1)},
      {E(0, 2, 2, 0, 1)},
  };
  t[ReferenceFamily::tot_k3] = {
      {D(0, 3), D(3, 0)},
      {D(1, 2), D(2, 1)},
      {E(0, 3, 2, 1, 1), E(1, 2, 3, 0, 1)},
  };
  t[ReferenceFamily::tot_k4] = {
      {D(0, 4), D(4, 0)},
      {D(1, 3), D(3, 1)},
      {D(2, 2)},
      {E(0, 4, 2, 2, 1), E(2, 2, 4, 0, 1)},
      {E(1, 3, 3, 1, 1)},
      {E(0, 4, 4, 0, 1)},
  };
  t[ReferenceFamily::euc_k2] = {
      {D(1, 2), D(2, 1)},
      {E(0, 1, 2, 1, -3), E(0, 2, 2, 0, 9), E(1, 0, 1, 2, -3), D(1, 1)},
  };
  t[ReferenceFamily::euc_k3] = {
      {D(1, 3), D(3, 1)},
      {D(2, 2)},
      {E(1, 3, 3, 1, 1)},
  };
  t[ReferenceFamily::euc_k4] = {
      {D(0, 4), D(4, 0)},
      {D(2, 3), D(3, 2)},
      {E(1, 2, 3, 2, R(-5, 3)), E(1, 3, 3, 1, R(25, 9)), E(2, 1, 2, 3, R(-5, 3)), D(2, 2)},
      {E(0, 4, 4, 0, 1)},
  };
  return t;
}

using Q = std::span<const double>;

}  // namespace

std::string to_string(ReferenceFamily id) {
  switch (id) {
    case ReferenceFamily::max_k2: return "max_k2";
    case ReferenceFamily::max_k3: return "max_k3";
    case ReferenceFamily::tot_k2: return "tot_k2";
    case ReferenceFamily::tot_k3: return "tot_k3";
    case ReferenceFamily::tot_k4: return "tot_k4";
    case ReferenceFamily::euc_k2: return "euc_k2";
    case ReferenceFamily::euc_k3: return "euc_k3";
    case ReferenceFamily::euc_k4: return "euc_k4";
  }
  throw std::invalid_argument("unknown reference family");
}

ReferenceFamily parse_reference_family(std::string_view text) {
  for (auto id : kAllReferenceFamilies) {
    if (to_string(id) == text) return id;
  }
  throw std::invalid_argument("unknown reference family: " + std::string(text));
}

BasisSpec reference_basis(ReferenceFamily id) {
  switch (id) {
    case ReferenceFamily::max_k2: return make_basis(BasisKind::maximal, 2);
    case ReferenceFamily::max_k3: return make_basis(BasisKind::maximal, 3);
    case ReferenceFamily::tot_k2: return make_basis(BasisKind::total, 2);
    case ReferenceFamily::tot_k3: return make_basis(BasisKind::total, 3);
    case ReferenceFamily::tot_k4: return make_basis(BasisKind::total, 4);
    case ReferenceFamily::euc_k2: return make_basis(BasisKind::euclidean, 2);
    case ReferenceFamily::euc_k3: return make_basis(BasisKind::euclidean, 3);
    case ReferenceFamily::euc_k4: return make_basis(BasisKind::euclidean, 4);
  }
  throw std::invalid_argument("unknown reference family");
}

std::optional<ReferenceFamily> reference_family_for(const BasisSpec& basis) {
  for (auto id : kAllReferenceFamilies) {
    const BasisSpec ref = reference_basis(id);
    if (ref.kind != basis.kind || ref.k_max != basis.k_max) continue;
    // Same mode set in any ordering.
    auto a = ref.modes;
    auto b = basis.modes;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a == b) return id;
  }
  return std::nullopt;
}

const std::vector<GeneratorTable>& reference_generators(ReferenceFamily id) {
  static const auto tables = build_tables();
  return tables.at(id);
}

std::vector<Inequality> inequality_suite(ReferenceFamily id) {
  switch (id) {
    case ReferenceFamily::max_k2:
      return {
          {"q1 + 4/15 > 0", [](Q q) { return q[1] + 4.0 / 15.0; }},
          {"50 q0 - 1125 q1^2 + 8 > 0",
           [](Q q) { return 50.0 * q[0] - 1125.0 * q[1] * q[1] + 8.0; }},
      };
    case ReferenceFamily::max_k3:
      return {
          {"16/441 - q2^2 > 0", [](Q q) { return 16.0 / 441.0 - q[2] * q[2]; }},
          {"-189 q2^2 + 140 q1 + 16 > 0",
           [](Q q) { return -189.0 * q[2] * q[2] + 140.0 * q[1] + 16.0; }},
          {"(4 - 21 q2)(1008 q2 + 2352 q0 + 12348 q2 q0 - 5292 q2^2 - 27783 q2^3 - 68600 q1^2 "
           "+ 192) > 0",
           [](Q q) {
             const double a = q[0], b = q[1], c = q[2];
             return (4.0 - 21.0 * c) * (1008.0 * c + 2352.0 * a + 12348.0 * c * a -
                                        5292.0 * c * c - 27783.0 * c * c * c -
                                        68600.0 * b * b + 192.0);
           }},
      };
    case ReferenceFamily::tot_k2:
      return {
          {"q1 + 4/9 > 0", [](Q q) { return q[1] + 4.0 / 9.0; }},
          {"q0 + 4/5 > 0", [](Q q) { return q[0] + 4.0 / 5.0; }},
          {"(5 q0 + 4)^2 - 25 q2^2 > 0",
           [](Q q) { return (5.0 * q[0] + 4.0) * (5.0 * q[0] + 4.0) - 25.0 * q[2] * q[2]; }},
      };
    case ReferenceFamily::tot_k3:
      return {
          {"q0 + 4/7 > 0", [](Q q) { return q[0] + 4.0 / 7.0; }},
          {"q1 + 4/15 > 0", [](Q q) { return q[1] + 4.0 / 15.0; }},
          {"28 q0 + 105 q0 q1 + 60 q1 - 105 q2^2 + 16 > 0",
           [](Q q) {
             return 28.0 * q[0] + 105.0 * q[0] * q[1] + 60.0 * q[1] - 105.0 * q[2] * q[2] + 16.0;
           }},
      };
    case ReferenceFamily::tot_k4:
      return {
          {"q0 + 4/9 > 0", [](Q q) { return q[0] + 4.0 / 9.0; }},
          {"q1 + 4/21 > 0", [](Q q) { return q[1] + 4.0 / 21.0; }},
          {"36 q0 + 225 q0 q2 + 100 q2 - 225 q3^2 + 16 > 0",
           [](Q q) {
             return 36.0 * q[0] + 225.0 * q[0] * q[2] + 100.0 * q[2] - 225.0 * q[3] * q[3] + 16.0;
           }},
          {"(21 q1 + 4)^2 - 441 q4^2 > 0",
           [](Q q) { return (21.0 * q[1] + 4.0) * (21.0 * q[1] + 4.0) - 441.0 * q[4] * q[4]; }},
          {"(9 q0 - 9 q5 + 4)(9 q0 (25 q2 + 4) + 25 q2 (9 q5 + 4) + 2 (-225 q3^2 + 18 q5 + 8)) > 0",
           [](Q q) {
             const double a = 9.0 * q[0] - 9.0 * q[5] + 4.0;
             const double b = 9.0 * q[0] * (25.0 * q[2] + 4.0) + 25.0 * q[2] * (9.0 * q[5] + 4.0) +
                              2.0 * (-225.0 * q[3] * q[3] + 18.0 * q[5] + 8.0);
             return a * b;
           }},
      };
    case ReferenceFamily::euc_k2:
      return {
          {"60 q0 - 405 q1^2 + 16 > 0",
           [](Q q) { return 60.0 * q[0] - 405.0 * q[1] * q[1] + 16.0; }},
          {"16 - 2025 q1^2 > 0", [](Q q) { return 16.0 - 2025.0 * q[1] * q[1]; }},
      };
    case ReferenceFamily::euc_k3:
      return {
          {"21 q0 + 4 > 0", [](Q q) { return 21.0 * q[0] + 4.0; }},
          {"25 q1 + 4 > 0", [](Q q) { return 25.0 * q[1] + 4.0; }},
          {"21 q0 (21 q0 + 8) - 441 q2^2 + 16 > 0",
           [](Q q) { return 21.0 * q[0] * (21.0 * q[0] + 8.0) - 441.0 * q[2] * q[2] + 16.0; }},
      };
    case ReferenceFamily::euc_k4:
      return {
          {"q0 + 4/9 > 0", [](Q q) { return q[0] + 4.0 / 9.0; }},
          {"q2 + 4/25 > 0", [](Q q) { return q[2] + 4.0 / 25.0; }},
          {"420 q1 + 48 - 4375 q2^2 > 0",
           [](Q q) { return 420.0 * q[1] + 48.0 - 4375.0 * q[2] * q[2]; }},
          {"144 - 30625 q2^2 > 0", [](Q q) { return 144.0 - 30625.0 * q[2] * q[2]; }},
          {"9 q0 (9 q0 + 8) - 81 q3^2 + 16 > 0",
           [](Q q) { return 9.0 * q[0] * (9.0 * q[0] + 8.0) - 81.0 * q[3] * q[3] + 16.0; }},
      };
  }
  throw std::invalid_argument("unknown reference family");
}

}  // namespace quadfr
