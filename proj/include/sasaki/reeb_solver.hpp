#pragma once

// Volume minimization over the Reeb slice N = {xi in C : <gamma, xi> = n},
// where gamma is the Gorenstein covector (<gamma, v_a> = 1 for all normals).
//
// N is parametrised as xi = n v_0 + sum_j z_j b_j with b_j an integer basis
// of ker gamma, so slice coordinates z are integral exactly when xi is.

#include "sasaki/families.hpp"
#include "sasaki/lattice_cone.hpp"
#include "sasaki/volume.hpp"

#include <optional>
#include <string>
#include <vector>

namespace sasaki {

struct SliceFrame {
  IntVec gamma;      // <gamma, v_a> = 1
  IntVec origin;     // n v_0
  IntMatrix tangent; // rows b_1..b_{n-1}, a basis of ker gamma

  static SliceFrame of(const MomentCone& cone);
  std::vector<double> point(const Eigen::VectorXd& z) const;
  RatVec point(const RatVec& z) const;
  Eigen::VectorXd coordinates(const std::vector<double>& xi) const;
  /// Scales xi onto the slice. Requires <gamma, xi> > 0.
  RatVec project(const RatVec& xi) const;
  Eigen::VectorXd restrict_gradient(const Eigen::VectorXd& g) const;
  Eigen::MatrixXd restrict_hessian(const Eigen::MatrixXd& h) const;
};

struct ReebPolytope {
  std::vector<RatVec> vertices;  // n v_a for every facet normal
  RatVec interior_start;         // vertex centroid
};

/// Throws NotGorenstein.
ReebPolytope reeb_polytope(const MomentCone& cone);

struct SolverOptions {
  double tol = 1e-10;
  int max_iter = 200;
  std::optional<std::vector<double>> start;  // defaults to the vertex centroid
  std::int64_t snap_denominator = 10000;
};

struct CriticalPoint {
  ReebVector xi_star;   // exact when a rational snap is certified
  VolumeReport vol_report;
  std::optional<Rational> sphere_ratio_exact;
  double grad_norm = 0.0;  // restricted gradient at xi_star
  int newton_iters = 0;
  int gradient_steps = 0;  // iterations that fell back to steepest descent
  double hessian_min_eig = 0.0;
  std::vector<double> volume_trace;  // vol_delta at every accepted iterate
  // Smallest restricted Hessian eigenvalue at the iterates where it was formed, then at xi_star.
  std::vector<double> hessian_eig_trace;
};

/// Damped Newton descent on the slice. Throws NonConvergence after
/// max_iter iterations or when backtracking stalls.
CriticalPoint minimize_volume(const MomentCone& cone, const SolverOptions& options = {});

struct ProjectedFace {
  std::vector<std::size_t> normals;  // tight normal indices of a face of C*
  Integer index = 1;                 // index of Z zeta + span(normals) in its saturation
};

struct QuotientFan {
  IntVec direction;      // primitive integer direction zeta of xi
  IntMatrix projection;  // unimodular P with P zeta = e_1
  IntMatrix rays;        // P v_a with the first coordinate dropped
  std::vector<ProjectedFace> faces;
  bool smooth = true;    // every index is 1
};

/// Projects the fan along xi. Throws RequiresRationalReeb when xi has no
/// exact value and ReebOutsideCone when xi is not interior to C.
QuotientFan quotient_fan(const MomentCone& cone, const ReebVector& xi);

struct FutakiReport {
  ReebVector candidate;  // scaled onto the slice
  Eigen::VectorXd obstruction_vector;
  double vol_delta = 0.0;
  double relative_norm = 0.0;  // |obstruction| / vol_delta
  bool obstructed = false;     // relative_norm > 1e-9
};

/// Restricted gradient of vol[Delta] at the candidate, in exact arithmetic
/// when the candidate is rational. Throws ReebOutsideCone.
FutakiReport futaki_test(const MomentCone& cone, const ReebVector& candidate);

enum class Regularity { Regular, QuasiRegular, Irregular, Undetermined };
const char* to_string(Regularity r);

struct RationalApproximation {
  std::int64_t max_denominator = 0;
  RatVec xi_over_n;
  double residual = 0.0;  // max |xi_i / n - approx_i|
};

struct RegularityReport {
  Regularity kind = Regularity::Undetermined;
  std::string basis;  // which criterion decided
  std::vector<RationalApproximation> approximations;
};

RegularityReport classify_regularity(const MomentCone& cone, const CriticalPoint& cp,
                                     const std::optional<FamilySpec>& context = std::nullopt);

}  // namespace sasaki
