#pragma once

// Volume of the Reeb polytope Delta(xi) = C* cap {<y, xi> <= 1/2}.
//
// C* is split into simplicial cones with generators u_1..u_n. Each piece
// contributes the simplex with vertices 0 and u_i / (2 <xi, u_i>), so
//
//   vol[Delta(xi)] = sum |det U| / (2^n n! prod <xi, u_i>),
//
// a rational function of xi that is differentiated term by term.

#include "sasaki/arith.hpp"
#include "sasaki/lattice_cone.hpp"

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace sasaki {

/// A Reeb vector in fan coordinates, with an exact value when rational.
struct ReebVector {
  std::vector<double> components;
  std::optional<RatVec> exact;

  static ReebVector from_exact(RatVec xi);
  static ReebVector from_double(std::vector<double> xi);
  std::size_t dim() const { return components.size(); }
};

/// Orbifold chart of one simplicial piece: C^n / Gamma with |Gamma| = order
/// and torus weights dual to the piece's facet normals.
struct OrbifoldChart {
  std::vector<RatVec> weights;
  Integer order = 1;
};

struct SimplicialPiece {
  IntMatrix generators;  // n primitive rays, one per row
  Integer det = 1;       // |det| of the generator matrix
  OrbifoldChart chart;
};

struct SimplicialDecomposition {
  std::size_t dim = 0;
  std::vector<SimplicialPiece> pieces;
  bool unimodular = false;
};

/// Pulling triangulation of C* using only its rays. The top-level anchor is
/// rays()[anchor_index]; lower-dimensional faces are anchored at their
/// lexicographically smallest ray.
SimplicialDecomposition decompose(const MomentCone& cone, std::size_t anchor_index = 0);

/// Stellar refinement until every piece is unimodular. Added rays are
/// lattice points of the fundamental parallelepipeds.
SimplicialDecomposition refine_unimodular(const SimplicialDecomposition& dec);

struct VolumeReport {
  ReebVector xi;
  double vol_delta = 0.0;
  double vol_link = 0.0;
  double sphere_ratio = 0.0;
  Eigen::VectorXd gradient;
  Eigen::MatrixXd hessian;
};

double volume_delta(const SimplicialDecomposition& dec, const ReebVector& xi);
Rational volume_delta_exact(const SimplicialDecomposition& dec, const RatVec& xi);

/// 2n (2 pi)^n vol[Delta].
double link_volume(double vol_delta, std::size_t n);
/// link_volume of volume_delta(dec, xi).
double volume_link(const SimplicialDecomposition& dec, const ReebVector& xi);
/// vol_link / vol(S^{2n-1}) = 2^n n! vol[Delta].
double sphere_ratio(double vol_delta, std::size_t n);
Rational sphere_ratio_exact(const Rational& vol_delta, std::size_t n);
double sphere_volume(std::size_t n);

Eigen::VectorXd volume_gradient(const SimplicialDecomposition& dec, const ReebVector& xi);
Eigen::MatrixXd volume_hessian(const SimplicialDecomposition& dec, const ReebVector& xi);
RatVec volume_gradient_exact(const SimplicialDecomposition& dec, const RatVec& xi);

VolumeReport evaluate_volume(const SimplicialDecomposition& dec, const ReebVector& xi);

/// Fixed-point sum  sum_F (1/d_F) prod_i 1/<xi, w_F^i>  over orbifold charts.
/// For a unimodular decomposition d_F = 1 and w_F^i are the generators.
double localization_sum(const SimplicialDecomposition& dec, const ReebVector& xi);
Rational localization_sum_exact(const SimplicialDecomposition& dec, const RatVec& xi);

/// Throws ReebOutsideCone unless <xi, u> > 0 for every ray of C*.
void require_interior(const MomentCone& cone, const ReebVector& xi);

}  // namespace sasaki
