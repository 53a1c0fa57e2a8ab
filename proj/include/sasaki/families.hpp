#pragma once

// The two-parameter family Y^{p,q} and the three-parameter family L^{a,b,c}.

#include "sasaki/lattice_cone.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace sasaki {

enum class FamilyKind { Ypq, Labc };

struct FamilySpec {
  FamilyKind kind = FamilyKind::Ypq;
  std::int64_t p = 0, q = 0;
  std::int64_t a = 0, b = 0, c = 0;

  static FamilySpec ypq(std::int64_t p, std::int64_t q);
  static FamilySpec labc(std::int64_t a, std::int64_t b, std::int64_t c);

  std::int64_t d() const { return a + b - c; }
  std::string label() const;
};

/// Throws ValidationError unless gcd(p, q) = 1 and 0 < q < p.
void validate_ypq(std::int64_t p, std::int64_t q);

/// Hard requirements for L^{a,b,c}: positive entries, a <= b, c <= b and
/// gcd(a, b, c, d) = 1. Returns false when the pairwise coprimality of
/// {a, b} with {c, d} fails (the orbifold case); throws otherwise.
bool validate_labc(std::int64_t a, std::int64_t b, std::int64_t c);

MomentCone ypq_cone(std::int64_t p, std::int64_t q);

/// vol[Y^{p,q}] / pi^3 with p multiplying the radical in the denominator.
double ypq_volume(std::int64_t p, std::int64_t q);

/// The same expression without the factor p before the radical. Kept as a
/// diagnostic; it is negative for some admissible (p, q).
double ypq_volume_unscaled_radical(std::int64_t p, std::int64_t q);

/// 4p^2 - 3q^2 is a perfect square.
bool ypq_is_quasiregular(std::int64_t p, std::int64_t q);

struct LabcCone {
  MomentCone cone;
  IntVec charges;       // (a, b, -c, -d) aligned with cone.normals()
  bool coprime = true;  // pairwise coprimality of {a, b} with {c, d}
};

/// Four Gorenstein normals with a v_A + b v_B - c v_C - d v_D = 0 in convex
/// position A, C, B, D. The edge A C is (1, 0) in the height-one plane.
LabcCone labc_cone(std::int64_t a, std::int64_t b, std::int64_t c);

}  // namespace sasaki
