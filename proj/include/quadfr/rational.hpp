#pragma once

#include <cstddef>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace quadfr {

using Rational = boost::multiprecision::cpp_rational;
using RationalRow = std::vector<Rational>;
using RationalRows = std::vector<RationalRow>;

/// Reduced row echelon form in place; returns the pivot columns.
std::vector<std::size_t> rref(RationalRows& rows, std::size_t n_cols);

std::size_t rational_rank(RationalRows rows, std::size_t n_cols);

/// Basis of {x : A x = 0}. Each vector has a single free variable set to 1
/// and the remaining free variables 0, ordered by free column.
RationalRows rational_nullspace(RationalRows rows, std::size_t n_cols);

/// Coefficients c with sum_i c_i basis[i] = target, or empty if target is not
/// in the span. basis must be linearly independent.
std::vector<Rational> express_in_span(const RationalRows& basis, const RationalRow& target);

double to_double(const Rational& r);

}  // namespace quadfr
