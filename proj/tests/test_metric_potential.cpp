#include "doctest.h"

#include "corpus.hpp"
#include "sasaki/errors.hpp"
#include "sasaki/metric_potential.hpp"
#include "sasaki/reeb_solver.hpp"

#include <cmath>
#include <random>

using namespace sasaki;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

VectorXd vec(std::initializer_list<double> xs) {
  VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

VectorXd as_eigen(const IntVec& v) {
  VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i].convert_to<double>();
  return out;
}

ReebVector normal_sum(const MomentCone& cone) {
  std::vector<double> s(cone.dim(), 0.0);
  for (const auto& v : cone.normals())
    for (std::size_t k = 0; k < s.size(); ++k) s[k] += v[k].convert_to<double>();
  return ReebVector::from_double(s);
}

VectorXd random_interior(const MomentCone& cone, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> w(0.05, 1.0);
  VectorXd y = VectorXd::Zero(static_cast<Eigen::Index>(cone.dim()));
  for (const auto& u : cone.rays()) y += w(rng) * as_eigen(u);
  return y;
}

ReebVector random_reeb(const MomentCone& cone, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> w(0.05, 1.0);
  std::vector<double> xi(cone.dim(), 0.0);
  for (const auto& v : cone.normals()) {
    const double c = w(rng);
    for (std::size_t k = 0; k < xi.size(); ++k) xi[k] += c * v[k].convert_to<double>();
  }
  return ReebVector::from_double(xi);
}

// -k |y|: degree one and concave.
HomogeneousTerm negative_norm(double k) {
  HomogeneousTerm h;
  h.value = [k](const VectorXd& y) { return -k * y.norm(); };
  h.gradient = [k](const VectorXd& y) { return (-k * y / y.norm()).eval(); };
  h.hessian = [k](const VectorXd& y) {
    const double r = y.norm();
    return (-k * (MatrixXd::Identity(y.size(), y.size()) - y * y.transpose() / (r * r)) / r).eval();
  };
  return h;
}

const MomentCone kOrthant = MomentCone::from_normals({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
const MomentCone kConifold = MomentCone::from_normals({{1, 0, 0}, {1, 1, 0}, {1, 1, 1}, {1, 0, 1}});

}  // namespace

TEST_CASE("orthant canonical potential is the flat metric") {
  const PotentialSpec spec{kOrthant, normal_sum(kOrthant), std::nullopt};
  const VectorXd y = vec({0.3, 1.7, 2.2});
  const auto blocks = metric_blocks(spec, y);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      CHECK(blocks.radial(i, j) == doctest::Approx(i == j ? 1 / (2 * y(i)) : 0.0).epsilon(1e-14));
      CHECK(blocks.angular(i, j) == doctest::Approx(i == j ? 2 * y(i) : 0.0).epsilon(1e-13));
    }
}

TEST_CASE("xi term vanishes at the normal sum") {
  std::mt19937_64 rng(3);
  for (const auto& [name, cone] : corpus::toric()) {
    INFO(name);
    const PotentialSpec spec{cone, normal_sum(cone), std::nullopt};
    const VectorXd y = random_interior(cone, rng);
    double g_can = 0;
    for (const auto& v : cone.normals()) {
      const double l = as_eigen(v).dot(y);
      g_can += 0.5 * l * std::log(l);
    }
    CHECK(potential(spec, y).value == doctest::Approx(g_can).epsilon(1e-13));
  }
}

TEST_CASE("derivatives match finite differences") {
  std::mt19937_64 rng(17);
  for (const auto& [name, cone] : corpus::toric()) {
    INFO(name);
    for (int trial = 0; trial < 3; ++trial) {
      const PotentialSpec spec{cone, random_reeb(cone, rng), std::nullopt};
      const VectorXd y = random_interior(cone, rng);
      const auto p = potential(spec, y);
      const double h = 1e-5 * y.norm();
      for (Eigen::Index i = 0; i < y.size(); ++i) {
        VectorXd e = VectorXd::Zero(y.size());
        e(i) = h;
        const double fd = (potential(spec, y + e).value - potential(spec, y - e).value) / (2 * h);
        CHECK(fd == doctest::Approx(p.gradient(i)).epsilon(1e-7).scale(p.gradient.norm()));
        const VectorXd fd_row = (potential(spec, y + e).gradient - potential(spec, y - e).gradient) / (2 * h);
        CHECK((fd_row - p.hessian.row(i).transpose()).norm() <= 1e-6 * p.hessian.norm());
      }
    }
  }
}

TEST_CASE("scaling identity and degree -1 Hessian") {
  std::mt19937_64 rng(23);
  for (const auto& [name, cone] : corpus::toric()) {
    INFO(name);
    const auto cp = minimize_volume(cone);
    for (const auto& xi : {cp.xi_star, random_reeb(cone, rng)}) {
      const PotentialSpec spec{cone, xi, std::nullopt};
      const VectorXd y = random_interior(cone, rng);
      const VectorXd x = Eigen::Map<const VectorXd>(xi.components.data(), y.size());
      const auto p1 = potential(spec, y);
      const auto p2 = potential(spec, 2.0 * y);
      CHECK(p2.value == doctest::Approx(2 * p1.value + x.dot(y) * std::log(2.0)).epsilon(1e-12));
      for (double lambda : {0.1, 3.0, 250.0}) {
        const auto pl = potential(spec, lambda * y);
        CHECK((lambda * pl.hessian - p1.hessian).norm() <= 1e-10 * p1.hessian.norm());
      }
    }
  }
}

TEST_CASE("linear h leaves the Hessian unchanged") {
  std::mt19937_64 rng(29);
  std::normal_distribution<double> g;
  for (const auto& [name, cone] : corpus::toric()) {
    INFO(name);
    VectorXd c(static_cast<Eigen::Index>(cone.dim()));
    for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = g(rng);
    const ReebVector xi = random_reeb(cone, rng);
    const PotentialSpec bare{cone, xi, std::nullopt};
    const PotentialSpec with_h{cone, xi, linear_term(c)};
    const VectorXd y = random_interior(cone, rng);
    const auto a = potential(bare, y), b = potential(with_h, y);
    CHECK((a.hessian - b.hessian).norm() == 0.0);
    CHECK((b.gradient - a.gradient - c).norm() <= 1e-12 * (1 + c.norm()));
    CHECK(b.value == doctest::Approx(a.value + c.dot(y)).epsilon(1e-13));
  }
}

TEST_CASE("inverse consistency and convexity at random interior points") {
  std::mt19937_64 rng(31);
  for (const auto& [name, cone] : corpus::toric()) {
    INFO(name);
    const auto cp = minimize_volume(cone);
    for (int trial = 0; trial < 100; ++trial) {
      const PotentialSpec spec{cone, trial % 2 ? cp.xi_star : random_reeb(cone, rng), std::nullopt};
      const auto blocks = metric_blocks(spec, random_interior(cone, rng));
      CHECK(blocks.min_eigenvalue > 0);
      CHECK(blocks.inverse_residual <= 1e-10);
      CHECK((blocks.radial - blocks.radial.transpose()).norm() == 0.0);
      CHECK((blocks.angular - blocks.angular.transpose()).norm() <= 1e-12 * blocks.angular.norm());
    }
  }
}

TEST_CASE("conifold at a symmetric point") {
  const PotentialSpec spec{kConifold, ReebVector::from_double({3, 1.5, 1.5}), std::nullopt};
  // y = (1, 0, 0) pairs to 1 with every normal.
  const auto blocks = metric_blocks(spec, vec({1, 0, 0}));
  CHECK(blocks.min_eigenvalue > 0);
  // Swapping the last two coordinates is a symmetry of the cone and of xi.
  CHECK(blocks.radial(1, 1) == doctest::Approx(blocks.radial(2, 2)).epsilon(1e-14));
  CHECK(blocks.radial(0, 1) == doctest::Approx(blocks.radial(0, 2)).epsilon(1e-14));
  CHECK_THROWS_AS(metric_blocks(spec, vec({1, -1, 0})), BoundaryEvaluation);
}

TEST_CASE("det G_ij diverges like a simple pole at a facet") {
  std::mt19937_64 rng(37);
  for (const auto& [name, cone] : corpus::toric()) {
    INFO(name);
    const PotentialSpec spec{cone, random_reeb(cone, rng), std::nullopt};
    // p is interior to the facet of normals[0]: a positive mix of the rays on it.
    VectorXd p = VectorXd::Zero(static_cast<Eigen::Index>(cone.dim()));
    for (const auto& u : cone.rays())
      if (dot(cone.normals()[0], u) == 0) p += as_eigen(u);
    const VectorXd q = random_interior(cone, rng);
    double previous = potential(spec, p + 1e-2 * q).hessian.determinant();
    for (double eps : {1e-3, 1e-4, 1e-5, 1e-6}) {
      const double det = potential(spec, p + eps * q).hessian.determinant();
      CHECK(det / previous == doctest::Approx(10.0).epsilon(0.1));
      previous = det;
    }
    CHECK_THROWS_AS(potential(spec, p), BoundaryEvaluation);
  }
}

TEST_CASE("errors") {
  const PotentialSpec spec{kOrthant, ReebVector::from_double({1, 1, 1}), std::nullopt};
  CHECK_THROWS_AS(potential(spec, vec({1, 0, 1})), BoundaryEvaluation);
  CHECK_THROWS_AS(potential(spec, vec({1, 1})), ValidationError);
  const PotentialSpec skew{kOrthant, ReebVector::from_double({1, -5, 1}), std::nullopt};
  CHECK_THROWS_AS(potential(skew, vec({0.1, 1, 0.1})), BoundaryEvaluation);

  const PotentialSpec concave{kOrthant, ReebVector::from_double({1, 1, 1}), negative_norm(50)};
  CHECK_THROWS_WITH_AS(metric_blocks(concave, vec({1, 2, 3})), doctest::Contains("smallest eigenvalue"), NonConvex);
  const PotentialSpec mild{kOrthant, ReebVector::from_double({1, 1, 1}), negative_norm(1e-3)};
  CHECK(metric_blocks(mild, vec({1, 2, 3})).min_eigenvalue > 0);

  HomogeneousTerm quadratic;
  quadratic.value = [](const VectorXd& y) { return y.squaredNorm(); };
  quadratic.gradient = [](const VectorXd& y) { return (2 * y).eval(); };
  quadratic.hessian = [](const VectorXd& y) { return (2 * MatrixXd::Identity(y.size(), y.size())).eval(); };
  CHECK_THROWS_AS(potential(PotentialSpec{kOrthant, ReebVector::from_double({1, 1, 1}), quadratic}, vec({1, 2, 3})),
                  ValidationError);
}
