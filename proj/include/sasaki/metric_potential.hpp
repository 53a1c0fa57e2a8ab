#pragma once

// Toric symplectic potentials on the moment cone C* = {y : <y, v_a> >= 0}:
//   G = G_can + G_xi + h,
//   G_can = 1/2 sum_a l_a log l_a,            l_a = <y, v_a>,
//   G_xi  = 1/2 l_xi log l_xi - 1/2 l_s log l_s,  l_xi = <xi, y>, l_s = sum_a l_a,
// with h homogeneous of degree one. The metric is G_ij dy dy + G^ij dphi dphi.

#include "sasaki/lattice_cone.hpp"
#include "sasaki/volume.hpp"

#include <Eigen/Dense>

#include <functional>
#include <optional>

namespace sasaki {

/// Pointwise evaluator of a degree-one homogeneous function. Must be re-entrant.
struct HomogeneousTerm {
  std::function<double(const Eigen::VectorXd&)> value;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> hessian;
};

/// h(y) = <c, y>.
HomogeneousTerm linear_term(Eigen::VectorXd c);

struct PotentialSpec {
  MomentCone cone;
  ReebVector xi;
  std::optional<HomogeneousTerm> h;
};

struct PotentialValue {
  double value = 0.0;
  Eigen::VectorXd gradient;
  Eigen::MatrixXd hessian;  // G_ij
  Eigen::MatrixXd inverse;  // G^ij
  double min_eigenvalue = 0.0;
};

/// Throws BoundaryEvaluation unless every <y, v_a> and <xi, y> is positive,
/// ValidationError on dimension mismatch or when h fails h(2y) = 2 h(y).
/// The inverse is formed from the eigendecomposition and is meaningful only
/// when min_eigenvalue > 0.
PotentialValue potential(const PotentialSpec& spec, const Eigen::VectorXd& y);

struct MetricBlocks {
  Eigen::MatrixXd radial;   // G_ij
  Eigen::MatrixXd angular;  // G^ij
  double min_eigenvalue = 0.0;
  double inverse_residual = 0.0;  // max |G_ij G^jk - delta|
};

/// As potential, and throws NonConvex (naming y and the smallest eigenvalue)
/// unless G_ij is positive definite with G_ij G^jk = delta to 1e-10.
MetricBlocks metric_blocks(const PotentialSpec& spec, const Eigen::VectorXd& y);

}  // namespace sasaki
