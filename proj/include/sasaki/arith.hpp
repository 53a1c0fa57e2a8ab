#pragma once

// Exact integer and rational linear algebra over small dense matrices.
//
// Matrices are stored row-major as vectors of rows. Sizes are desk scale
// (n <= ~6, d <= ~12), so the algorithms favour clarity over asymptotics.

#include <boost/multiprecision/gmp.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sasaki {

using Integer = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

using IntVec = std::vector<Integer>;
using RatVec = std::vector<Rational>;
using IntMatrix = std::vector<IntVec>;
using RatMatrix = std::vector<RatVec>;

Integer gcd_of(const IntVec& v);
Integer lcm(const Integer& a, const Integer& b);

/// Divides out the content. The zero vector is returned unchanged.
IntVec primitive(IntVec v);

Integer dot(const IntVec& a, const IntVec& b);
Rational dot(const RatVec& a, const IntVec& b);
double dot(const std::vector<double>& a, const IntVec& b);

RatVec to_rational(const IntVec& v);
std::vector<double> to_double(const IntVec& v);
std::vector<double> to_double(const RatVec& v);
double to_double(const Rational& q);

/// Clears denominators and returns the primitive integer vector on the ray of v.
IntVec primitive_direction(const RatVec& v);

IntMatrix transpose(const IntMatrix& a);
IntMatrix multiply(const IntMatrix& a, const IntMatrix& b);
IntVec multiply(const IntMatrix& a, const IntVec& v);
IntMatrix identity_matrix(std::size_t n);

/// Bareiss fraction-free determinant.
Integer determinant(IntMatrix a);

std::size_t rank(const IntMatrix& rows);

RatMatrix to_rational(const IntMatrix& a);

/// Gauss-Jordan inverse; empty optional when singular.
std::optional<RatMatrix> inverse(RatMatrix a);

/// Inverse of a matrix with determinant +-1, or nullopt if it is not unimodular.
std::optional<IntMatrix> unimodular_inverse(const IntMatrix& a);

/// A * U = H with U unimodular and H in column echelon form: columns
/// [rank, k) of H are zero, and column j < rank has its first nonzero entry
/// (positive) strictly below that of column j - 1.
struct ColumnEchelon {
  IntMatrix h;
  IntMatrix u;
  std::size_t rank = 0;
};
ColumnEchelon column_echelon(const IntMatrix& a);

/// Integer basis of {x in Z^k : A x = 0}, rows in Hermite normal form.
IntMatrix integer_kernel(const IntMatrix& a);

/// Row Hermite normal form of a full-row-rank integer matrix.
IntMatrix row_hermite(IntMatrix a);

/// Some integer solution of A x = b, or nullopt when none exists.
std::optional<IntVec> solve_integer(const IntMatrix& a, const IntVec& b);

/// Unimodular matrix whose first row is the given primitive vector.
IntMatrix complete_to_unimodular(const IntVec& row);

/// Product of the elementary divisors of the row lattice: gcd of all
/// rank x rank minors. Equals 1 exactly when the lattice is saturated.
Integer lattice_index(const IntMatrix& rows);

bool is_perfect_square(const Integer& x);

/// Best rational approximation p/q of x with q <= max_den (continued fractions).
Rational best_rational(double x, std::int64_t max_den);

/// Parses an optionally signed decimal integer; throws ParseError.
Integer parse_integer(const std::string& text);

/// Parses "p", "p/q" or a decimal literal ("0.25", "-1e-3") exactly.
Rational parse_rational(const std::string& text);

std::string to_string(const Integer& z);
std::string to_string(const Rational& q);
std::string to_string(const IntVec& v);

}  // namespace sasaki
