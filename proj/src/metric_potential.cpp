#include "sasaki/metric_potential.hpp"

#include "sasaki/errors.hpp"

#include <cmath>
#include <sstream>

namespace sasaki {

namespace {

constexpr double kInverseTolerance = 1e-10;
constexpr double kHomogeneityTolerance = 1e-9;

Eigen::VectorXd as_eigen(const IntVec& v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i].convert_to<double>();
  return out;
}

std::string describe(const Eigen::VectorXd& y) {
  std::ostringstream s;
  s.precision(17);
  s << "(";
  for (Eigen::Index i = 0; i < y.size(); ++i) s << (i ? ", " : "") << y(i);
  s << ")";
  return s.str();
}

// Adds sign * 1/2 l log l for l = <a, y>.
void add_entropy(const Eigen::VectorXd& a, const Eigen::VectorXd& y, double sign, PotentialValue& out) {
  const double l = a.dot(y);
  out.value += sign * 0.5 * l * std::log(l);
  out.gradient += sign * 0.5 * (std::log(l) + 1.0) * a;
  out.hessian += sign * (a * a.transpose()) / (2.0 * l);
}

}  // namespace

HomogeneousTerm linear_term(Eigen::VectorXd c) {
  HomogeneousTerm h;
  h.value = [c](const Eigen::VectorXd& y) { return c.dot(y); };
  h.gradient = [c](const Eigen::VectorXd&) { return c; };
  h.hessian = [c](const Eigen::VectorXd&) { return Eigen::MatrixXd::Zero(c.size(), c.size()).eval(); };
  return h;
}

PotentialValue potential(const PotentialSpec& spec, const Eigen::VectorXd& y) {
  const auto n = static_cast<Eigen::Index>(spec.cone.dim());
  if (y.size() != n || spec.xi.dim() != spec.cone.dim()) throw ValidationError("dimension mismatch");
  const Eigen::VectorXd xi = Eigen::Map<const Eigen::VectorXd>(spec.xi.components.data(), n);
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(n);
  for (const auto& v : spec.cone.normals()) {
    const Eigen::VectorXd a = as_eigen(v);
    if (!(a.dot(y) > 0)) throw BoundaryEvaluation("y = " + describe(y) + " is not interior to the moment cone");
    sum += a;
  }
  if (!(xi.dot(y) > 0)) throw BoundaryEvaluation("<xi, y> is not positive at y = " + describe(y));

  PotentialValue out;
  out.gradient = Eigen::VectorXd::Zero(n);
  out.hessian = Eigen::MatrixXd::Zero(n, n);
  for (const auto& v : spec.cone.normals()) add_entropy(as_eigen(v), y, 1.0, out);
  add_entropy(xi, y, 1.0, out);
  add_entropy(sum, y, -1.0, out);
  if (spec.h) {
    const double hy = spec.h->value(y);
    if (std::abs(spec.h->value(2.0 * y) - 2.0 * hy) > kHomogeneityTolerance * std::max(1.0, std::abs(hy)))
      throw ValidationError("h is not homogeneous of degree one at y = " + describe(y));
    out.value += hy;
    out.gradient += spec.h->gradient(y);
    out.hessian += spec.h->hessian(y);
  }
  out.hessian = 0.5 * (out.hessian + out.hessian.transpose());

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(out.hessian);
  const Eigen::VectorXd lambda = eig.eigenvalues();
  out.min_eigenvalue = lambda.minCoeff();
  out.inverse = eig.eigenvectors() * lambda.cwiseInverse().asDiagonal() * eig.eigenvectors().transpose();
  return out;
}

MetricBlocks metric_blocks(const PotentialSpec& spec, const Eigen::VectorXd& y) {
  const PotentialValue p = potential(spec, y);
  std::ostringstream eig;
  eig.precision(6);
  eig << p.min_eigenvalue;
  if (!(p.min_eigenvalue > 0))
    throw NonConvex("Hessian not positive definite at y = " + describe(y) + ", smallest eigenvalue " + eig.str());
  MetricBlocks out;
  out.radial = p.hessian;
  out.angular = p.inverse;
  out.min_eigenvalue = p.min_eigenvalue;
  const auto n = p.hessian.rows();
  out.inverse_residual = (p.hessian * p.inverse - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
  if (out.inverse_residual > kInverseTolerance)
    throw NonConvex("Hessian too ill-conditioned to invert at y = " + describe(y) + ", smallest eigenvalue " + eig.str());
  return out;
}

}  // namespace sasaki
