#include "sasaki/reeb_solver.hpp"

#include "sasaki/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <sstream>

namespace sasaki {

namespace {

constexpr double kArmijo = 1e-4;
constexpr double kMaxCondition = 1e12;
constexpr double kBoundaryMargin = 1e-12;
constexpr double kMinStep = 1e-20;
constexpr double kObstructionTolerance = 1e-9;
constexpr int kPolishSteps = 4;

bool strictly_interior(const MomentCone& cone, const std::vector<double>& xi) {
  for (const auto& u : cone.rays())
    if (dot(xi, u) <= kBoundaryMargin) return false;
  return true;
}

std::string describe(const std::vector<double>& xi) {
  std::ostringstream out;
  out.precision(17);
  out << "(";
  for (std::size_t i = 0; i < xi.size(); ++i) out << (i ? "," : "") << xi[i];
  out << ")";
  return out.str();
}

double min_eigenvalue(const Eigen::MatrixXd& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(h, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

}  // namespace

SliceFrame SliceFrame::of(const MomentCone& cone) {
  if (!cone.gorenstein_basis()) throw NotGorenstein("cone is not Gorenstein; the Reeb slice is undefined");
  const std::size_t n = cone.dim();
  SliceFrame f;
  f.gamma = cone.gorenstein_basis()->m[0];
  f.origin = cone.normals()[0];
  for (auto& x : f.origin) x *= static_cast<long>(n);
  f.tangent = integer_kernel(IntMatrix{f.gamma});
  return f;
}

std::vector<double> SliceFrame::point(const Eigen::VectorXd& z) const {
  std::vector<double> xi = to_double(origin);
  for (std::size_t j = 0; j < tangent.size(); ++j)
    for (std::size_t k = 0; k < xi.size(); ++k) xi[k] += z(static_cast<Eigen::Index>(j)) * tangent[j][k].convert_to<double>();
  return xi;
}

RatVec SliceFrame::point(const RatVec& z) const {
  RatVec xi = to_rational(origin);
  for (std::size_t j = 0; j < tangent.size(); ++j)
    for (std::size_t k = 0; k < xi.size(); ++k) xi[k] += z[j] * tangent[j][k];
  return xi;
}

Eigen::VectorXd SliceFrame::coordinates(const std::vector<double>& xi) const {
  const auto n = static_cast<Eigen::Index>(xi.size());
  const auto m = static_cast<Eigen::Index>(tangent.size());
  Eigen::MatrixXd t(n, m);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    rhs(k) = xi[k] - origin[k].convert_to<double>();
    for (Eigen::Index j = 0; j < m; ++j) t(k, j) = tangent[j][k].convert_to<double>();
  }
  return t.colPivHouseholderQr().solve(rhs);
}

RatVec SliceFrame::project(const RatVec& xi) const {
  const Rational h = dot(xi, gamma);
  if (h <= 0) throw ReebOutsideCone("Reeb vector does not pair positively with the Gorenstein covector");
  RatVec out = xi;
  const Rational s = Rational(static_cast<long>(xi.size())) / h;
  for (auto& x : out) x *= s;
  return out;
}

Eigen::VectorXd SliceFrame::restrict_gradient(const Eigen::VectorXd& g) const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(tangent.size()));
  for (std::size_t j = 0; j < tangent.size(); ++j) {
    double s = 0;
    for (std::size_t k = 0; k < tangent[j].size(); ++k) s += tangent[j][k].convert_to<double>() * g(static_cast<Eigen::Index>(k));
    out(static_cast<Eigen::Index>(j)) = s;
  }
  return out;
}

Eigen::MatrixXd SliceFrame::restrict_hessian(const Eigen::MatrixXd& h) const {
  const auto n = static_cast<Eigen::Index>(origin.size());
  const auto m = static_cast<Eigen::Index>(tangent.size());
  Eigen::MatrixXd t(n, m);
  for (Eigen::Index k = 0; k < n; ++k)
    for (Eigen::Index j = 0; j < m; ++j) t(k, j) = tangent[j][k].convert_to<double>();
  return t.transpose() * h * t;
}

ReebPolytope reeb_polytope(const MomentCone& cone) {
  SliceFrame::of(cone);  // throws NotGorenstein
  const auto n = static_cast<long>(cone.dim());
  ReebPolytope out;
  out.interior_start.assign(cone.dim(), 0);
  for (const auto& v : cone.normals()) {
    RatVec vertex = to_rational(v);
    for (auto& x : vertex) x *= n;
    for (std::size_t k = 0; k < vertex.size(); ++k) out.interior_start[k] += vertex[k] / static_cast<long>(cone.facet_count());
    out.vertices.push_back(std::move(vertex));
  }
  return out;
}

CriticalPoint minimize_volume(const MomentCone& cone, const SolverOptions& options) {
  if (!(options.tol > 0)) throw ValidationError("solver tolerance must be positive");
  if (options.max_iter <= 0) throw ValidationError("max_iter must be positive");
  const auto frame = SliceFrame::of(cone);
  const auto dec = decompose(cone);
  const std::size_t n = cone.dim();

  std::vector<double> xi = options.start ? *options.start : to_double(reeb_polytope(cone).interior_start);
  if (xi.size() != n) throw ValidationError("starting point has the wrong dimension");
  if (options.start) {
    // Scale the start onto the slice.
    const double h = dot(xi, frame.gamma);
    if (!(h > 0)) throw ReebOutsideCone("starting point is outside the Reeb cone");
    for (auto& x : xi) x *= static_cast<double>(n) / h;
  }
  if (!strictly_interior(cone, xi)) throw ReebOutsideCone("starting point " + describe(xi) + " is not interior to the Reeb cone");

  Eigen::VectorXd z = frame.coordinates(xi);
  CriticalPoint cp;
  double f = volume_delta(dec, ReebVector::from_double(xi));
  cp.volume_trace.push_back(f);

  Eigen::VectorXd gz = frame.restrict_gradient(volume_gradient(dec, ReebVector::from_double(xi)));
  int iter = 0;
  while (gz.norm() >= options.tol) {
    if (iter == options.max_iter)
      throw NonConvergence("no critical point after " + std::to_string(iter) + " iterations; last iterate " + describe(xi));
    ++iter;

    const Eigen::MatrixXd hz = frame.restrict_hessian(volume_hessian(dec, ReebVector::from_double(xi)));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(hz, Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues().minCoeff(), hi = eig.eigenvalues().maxCoeff();
    cp.hessian_eig_trace.push_back(lo);
    Eigen::VectorXd step;
    if (lo > 0 && hi / lo <= kMaxCondition) {
      step = -hz.ldlt().solve(gz);
    } else {
      step = -gz;
      ++cp.gradient_steps;
    }
    const double slope = gz.dot(step);

    double alpha = 1.0;
    while (true) {
      const Eigen::VectorXd zt = z + alpha * step;
      const auto xt = frame.point(zt);
      if (strictly_interior(cone, xt)) {
        const double ft = volume_delta(dec, ReebVector::from_double(xt));
        const Eigen::VectorXd gt = frame.restrict_gradient(volume_gradient(dec, ReebVector::from_double(xt)));
        const bool armijo = ft <= f + kArmijo * alpha * slope;
        // Below roundoff in f, progress is judged by the gradient alone.
        const bool flat = std::abs(ft - f) <= 4 * std::numeric_limits<double>::epsilon() * f && gt.norm() < gz.norm();
        if (armijo || flat) {
          z = zt;
          xi = xt;
          f = std::min(ft, f);
          gz = gt;
          cp.volume_trace.push_back(ft);
          break;
        }
      }
      alpha /= 2;
      if (alpha < kMinStep)
        throw NonConvergence("line search stalled at " + describe(xi) + " with gradient norm " + std::to_string(gz.norm()));
    }
  }
  cp.newton_iters = iter;

  // Polish: full Newton steps while they keep shrinking the gradient.
  for (int k = 0; k < kPolishSteps; ++k) {
    const Eigen::MatrixXd hz = frame.restrict_hessian(volume_hessian(dec, ReebVector::from_double(xi)));
    cp.hessian_eig_trace.push_back(min_eigenvalue(hz));
    const Eigen::VectorXd zt = z - hz.ldlt().solve(gz);
    const auto xt = frame.point(zt);
    if (!strictly_interior(cone, xt)) break;
    const Eigen::VectorXd gt = frame.restrict_gradient(volume_gradient(dec, ReebVector::from_double(xt)));
    if (!(gt.norm() < gz.norm())) break;
    z = zt;
    xi = xt;
    gz = gt;
    cp.volume_trace.push_back(std::min(cp.volume_trace.back(), volume_delta(dec, ReebVector::from_double(xt))));
  }
  cp.grad_norm = gz.norm();
  cp.xi_star = ReebVector::from_double(xi);

  // Certify a rational critical point when a small-denominator snap has an
  // exactly vanishing restricted gradient.
  RatVec zq;
  for (Eigen::Index j = 0; j < z.size(); ++j) zq.push_back(best_rational(z(j), options.snap_denominator));
  const RatVec xq = frame.point(zq);
  bool interior = true;
  for (const auto& u : cone.rays()) interior = interior && dot(xq, u) > 0;
  if (interior) {
    const RatVec g = volume_gradient_exact(dec, xq);
    bool critical = true;
    for (const auto& b : frame.tangent) {
      Rational s = 0;
      for (std::size_t k = 0; k < n; ++k) s += g[k] * b[k];
      critical = critical && s == 0;
    }
    if (critical) {
      cp.xi_star = ReebVector::from_exact(xq);
      cp.sphere_ratio_exact = sphere_ratio_exact(volume_delta_exact(dec, xq), n);
      cp.grad_norm = 0.0;
    }
  }

  cp.vol_report = evaluate_volume(dec, cp.xi_star);
  cp.hessian_min_eig = min_eigenvalue(frame.restrict_hessian(cp.vol_report.hessian));
  cp.hessian_eig_trace.push_back(cp.hessian_min_eig);
  return cp;
}

QuotientFan quotient_fan(const MomentCone& cone, const ReebVector& xi) {
  if (!xi.exact) throw RequiresRationalReeb("the quotient fan needs a rational Reeb vector");
  require_interior(cone, xi);
  QuotientFan out;
  out.direction = primitive_direction(*xi.exact);
  const IntMatrix u = complete_to_unimodular(out.direction);
  const auto p = unimodular_inverse(transpose(u));
  if (!p) throw InternalError("completion of the Reeb direction is not unimodular");
  out.projection = *p;
  for (const auto& v : cone.normals()) {
    const IntVec image = multiply(out.projection, v);
    out.rays.emplace_back(image.begin() + 1, image.end());
  }
  for (const auto& face : cone_faces(cone)) {
    IntMatrix gens{out.direction};
    for (auto a : face) gens.push_back(cone.normals()[a]);
    ProjectedFace pf{face, lattice_index(gens)};
    out.smooth = out.smooth && pf.index == 1;
    out.faces.push_back(std::move(pf));
  }
  return out;
}

FutakiReport futaki_test(const MomentCone& cone, const ReebVector& candidate) {
  const auto frame = SliceFrame::of(cone);
  const auto dec = decompose(cone);
  const std::size_t n = cone.dim();
  if (candidate.dim() != n) throw ValidationError("candidate has the wrong dimension");
  FutakiReport out;
  if (candidate.exact) {
    const RatVec xi = frame.project(*candidate.exact);
    out.candidate = ReebVector::from_exact(xi);
    require_interior(cone, out.candidate);
    const RatVec g = volume_gradient_exact(dec, xi);
    out.obstruction_vector.resize(static_cast<Eigen::Index>(frame.tangent.size()));
    for (std::size_t j = 0; j < frame.tangent.size(); ++j) {
      Rational s = 0;
      for (std::size_t k = 0; k < n; ++k) s += g[k] * frame.tangent[j][k];
      out.obstruction_vector(static_cast<Eigen::Index>(j)) = to_double(s);
    }
    out.vol_delta = to_double(volume_delta_exact(dec, xi));
  } else {
    std::vector<double> xi = candidate.components;
    const double h = dot(xi, frame.gamma);
    if (!(h > 0)) throw ReebOutsideCone("candidate does not pair positively with the Gorenstein covector");
    for (auto& x : xi) x *= static_cast<double>(n) / h;
    out.candidate = ReebVector::from_double(xi);
    require_interior(cone, out.candidate);
    out.obstruction_vector = frame.restrict_gradient(volume_gradient(dec, out.candidate));
    out.vol_delta = volume_delta(dec, out.candidate);
  }
  out.relative_norm = out.obstruction_vector.norm() / out.vol_delta;
  out.obstructed = out.relative_norm > kObstructionTolerance;
  return out;
}

const char* to_string(Regularity r) {
  switch (r) {
    case Regularity::Regular: return "regular";
    case Regularity::QuasiRegular: return "quasi-regular";
    case Regularity::Irregular: return "irregular";
    case Regularity::Undetermined: return "undetermined";
  }
  return "undetermined";
}

RegularityReport classify_regularity(const MomentCone& cone, const CriticalPoint& cp,
                                     const std::optional<FamilySpec>& context) {
  RegularityReport out;
  const double n = static_cast<double>(cone.dim());
  for (std::int64_t den : {10, 100, 1000, 10000, 1000000}) {
    RationalApproximation approx{den, {}, 0.0};
    for (double x : cp.xi_star.components) {
      const Rational q = best_rational(x / n, den);
      approx.residual = std::max(approx.residual, std::abs(x / n - to_double(q)));
      approx.xi_over_n.push_back(q);
    }
    out.approximations.push_back(std::move(approx));
  }

  if (context && context->kind == FamilyKind::Ypq) {
    const bool quasi = ypq_is_quasiregular(context->p, context->q);
    out.kind = quasi ? Regularity::QuasiRegular : Regularity::Irregular;
    out.basis = "perfect-square test on 4p^2-3q^2";
    return out;
  }
  if (cp.xi_star.exact) {
    const auto qf = quotient_fan(cone, cp.xi_star);
    out.kind = qf.smooth ? Regularity::Regular : Regularity::QuasiRegular;
    out.basis = "certified rational critical point";
    return out;
  }
  out.basis = "floating-point critical point; rationality not certified";
  return out;
}

}  // namespace sasaki
