#pragma once

// Rational polyhedral moment cones C* = {y : <y, v_a> >= 0} and their fans.
//
// All computations here are exact. Normals and rays are kept primitive and
// sorted lexicographically so that reports are reproducible.

#include "sasaki/arith.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sasaki {

/// Unimodular M with M v_a = (1, w_a) for every facet normal v_a.
struct GorensteinBasis {
  IntMatrix m;
  std::vector<IntVec> w;
};

/// Integer relations sum_a Q^a v_a = 0, one primitive row per relation.
struct ChargeMatrix {
  IntMatrix rows;
};

struct GoodnessResult {
  bool good = true;
  std::vector<std::size_t> witness_face;  // normal indices of the offending face
  Integer witness_index = 1;              // index of the generated sublattice
};

class MomentCone {
 public:
  /// Validates and canonicalises a normal set, computes the rays and
  /// evaluates the goodness and Gorenstein flags. Throws NotStrictlyConvex
  /// when the normals do not cut out a pointed full-dimensional cone, and
  /// ValidationError for zero, duplicate or redundant normals.
  static MomentCone from_normals(IntMatrix normals);

  std::size_t dim() const { return dim_; }
  std::size_t facet_count() const { return normals_.size(); }
  const IntMatrix& normals() const { return normals_; }
  /// Generators of C*.
  const IntMatrix& rays() const { return rays_; }
  /// Generators of the fan cone C (the facet normals).
  const IntMatrix& fan_rays() const { return normals_; }

  bool strictly_convex() const { return true; }
  std::optional<bool> good() const { return good_; }
  std::optional<bool> gorenstein() const { return gorenstein_; }
  const std::optional<GorensteinBasis>& gorenstein_basis() const { return basis_; }

  /// Bitmask over normals vanishing on each ray (same order as rays()).
  const std::vector<std::uint64_t>& ray_incidence() const { return incidence_; }

  /// True when every normal already has first coordinate 1.
  bool in_gorenstein_form() const;

  /// Cone-file text for this cone.
  std::string to_text() const;

 private:
  std::size_t dim_ = 0;
  IntMatrix normals_;
  IntMatrix rays_;
  std::vector<std::uint64_t> incidence_;
  std::optional<bool> good_;
  std::optional<bool> gorenstein_;
  std::optional<GorensteinBasis> basis_;
};

/// Parses the line-oriented cone format and evaluates all flags.
MomentCone parse_cone(std::string_view text);
MomentCone load_cone(const std::string& path);

/// Extreme rays of {y : <y, a> >= 0 for a in generators} by double
/// description, primitive and sorted. Requires a pointed full-dimensional
/// result; throws NotStrictlyConvex otherwise.
IntMatrix dual_cone(const IntMatrix& generators);
inline IntMatrix dual_cone(const MomentCone& cone) { return dual_cone(cone.normals()); }

/// Tight normal sets of the proper nonzero faces of C*, largest sets
/// (smallest faces) first, ties by index order.
/// A face of C* with tight set S corresponds to the cone of C spanned by S.
std::vector<std::vector<std::size_t>> cone_faces(const MomentCone& cone);

GoodnessResult is_good(const MomentCone& cone);

/// Integer covector gamma with <gamma, v_a> = 1 completed to a unimodular M,
/// then reduced so that w_0 = 0 and the w_a - w_0 are in Hermite form. Cones
/// already at height one get M = identity. Throws NotGorenstein.
/// MomentCone::from_normals stores this result on the cone.
GorensteinBasis gorenstein_normalize(const MomentCone& cone);

/// The cone with normals M v_a. M must be unimodular.
MomentCone transform(const MomentCone& cone, const IntMatrix& m);

/// The cone expressed in its Gorenstein basis, flags evaluated.
MomentCone gorenstein_form(const MomentCone& cone);

ChargeMatrix kernel_charges(const MomentCone& cone);

/// Some M in GL(n, Z) with M * from = to as sets, searched exhaustively.
std::optional<IntMatrix> find_lattice_map(const IntMatrix& from, const IntMatrix& to);

/// Lattice equivalence of fans; nullopt if none. Capped at 10 facets.
std::optional<IntMatrix> cones_equivalent(const MomentCone& a, const MomentCone& b);

}  // namespace sasaki
