#include "doctest.h"

#include "oracles.hpp"
#include "sasaki/errors.hpp"
#include "sasaki/reeb_solver.hpp"

#include <cmath>
#include <numeric>
#include <random>

using namespace sasaki;

namespace {

const IntMatrix kConifold = {{1, 0, 0}, {1, 1, 0}, {1, 1, 1}, {1, 0, 1}};
const IntMatrix kFlatGorenstein = {{1, 0, 0}, {1, 1, 0}, {1, 0, 1}};
const IntMatrix kOrthant = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};

MomentCone cone_of(const IntMatrix& normals) { return MomentCone::from_normals(normals); }

RatVec rat(std::initializer_list<Rational> xs) { return RatVec(xs); }

bool pairs_positively(const MomentCone& cone, const RatVec& xi) {
  for (const auto& u : cone.rays())
    if (dot(xi, u) <= 0) return false;
  return true;
}

std::vector<double> random_start(std::mt19937_64& rng, const MomentCone& cone) {
  std::uniform_real_distribution<double> w(0.01, 1.0);
  std::vector<double> xi(cone.dim(), 0.0);
  for (const auto& v : cone.normals()) {
    const double c = w(rng);
    for (std::size_t k = 0; k < xi.size(); ++k) xi[k] += c * v[k].convert_to<double>();
  }
  return xi;
}

// One-dimensional golden-section minimum of vol along xi = (3, t, t) on the conifold slice.
double conifold_diagonal_minimum() {
  const auto dec = decompose(cone_of(kConifold));
  auto f = [&](double t) { return volume_delta(dec, ReebVector::from_double({3, t, t})); };
  double lo = 0.01, hi = 2.99;
  const double r = (std::sqrt(5.0) - 1) / 2;
  for (int i = 0; i < 200; ++i) {
    const double a = hi - r * (hi - lo), b = lo + r * (hi - lo);
    if (f(a) < f(b)) hi = b; else lo = a;
  }
  return (lo + hi) / 2;
}

}  // namespace

TEST_CASE("reeb_polytope") {
  const auto flat = reeb_polytope(cone_of(kFlatGorenstein));
  REQUIRE(flat.vertices.size() == 3);
  for (const auto& v : flat.vertices) CHECK(v[0] == 3);
  CHECK(flat.interior_start == rat({3, 1, 1}));

  const auto y21 = ypq_cone(2, 1);
  CHECK(reeb_polytope(y21).vertices.size() == 4);
  CHECK(pairs_positively(y21, rat({3, 3, 3})));
  CHECK(pairs_positively(y21, reeb_polytope(y21).interior_start));

  const auto con = cone_of(kConifold);
  const auto p = reeb_polytope(con);
  CHECK(p.interior_start == rat({3, Rational(3, 2), Rational(3, 2)}));
  CHECK(pairs_positively(con, p.interior_start));

  // Not at height one: the slice uses the Gorenstein covector (1, 1, 1).
  const auto orth = reeb_polytope(cone_of(kOrthant));
  CHECK(orth.interior_start == rat({1, 1, 1}));

  CHECK_THROWS_AS(reeb_polytope(cone_of({{1, 0}, {-1, 3}})), NotGorenstein);
}

TEST_CASE("slice frame is a lattice basis") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const auto cone = cone_of(oracle::random_gorenstein_normals(rng));
    const auto f = SliceFrame::of(cone);
    IntMatrix basis{cone.normals()[0]};
    for (const auto& b : f.tangent) {
      CHECK(dot(b, f.gamma) == 0);
      basis.push_back(b);
    }
    CHECK(abs(determinant(basis)) == 1);
    for (const auto& v : cone.normals()) CHECK(dot(v, f.gamma) == 1);
  }
}

TEST_CASE("minimize_volume closed-form cases") {
  const auto flat = minimize_volume(cone_of(kFlatGorenstein));
  REQUIRE(flat.xi_star.exact);
  CHECK(*flat.xi_star.exact == rat({3, 1, 1}));
  CHECK(flat.sphere_ratio_exact == Rational(1));
  CHECK(flat.vol_report.sphere_ratio == doctest::Approx(1.0).epsilon(1e-12));

  const auto con = minimize_volume(cone_of(kConifold));
  REQUIRE(con.xi_star.exact);
  CHECK(*con.xi_star.exact == rat({3, Rational(3, 2), Rational(3, 2)}));
  CHECK(con.sphere_ratio_exact == Rational(16, 27));
  // Independent 1D search along the symmetric diagonal.
  CHECK(conifold_diagonal_minimum() == doctest::Approx(1.5).epsilon(1e-6));

  const auto orth = minimize_volume(cone_of(kOrthant));
  REQUIRE(orth.xi_star.exact);
  CHECK(*orth.xi_star.exact == rat({1, 1, 1}));
  CHECK(orth.sphere_ratio_exact == Rational(1));

  const auto y21 = minimize_volume(ypq_cone(2, 1));
  CHECK_FALSE(y21.xi_star.exact);
  CHECK(std::abs(y21.vol_report.sphere_ratio - (13 * std::sqrt(13.0) + 46) / 324) < 1e-8);
  CHECK(y21.grad_norm < 1e-10);
  CHECK(y21.hessian_min_eig > 0);
}

TEST_CASE("family round trip: solver matches the closed form") {
  for (std::int64_t p = 2; p <= 5; ++p)
    for (std::int64_t q = 1; q < p; ++q) {
      if (std::gcd(p, q) != 1) continue;
      const auto cp = minimize_volume(ypq_cone(p, q));
      CHECK(std::abs(cp.vol_report.sphere_ratio - ypq_volume(p, q)) < 1e-8);
    }
}

TEST_CASE("uniqueness from random starts") {
  std::mt19937_64 rng(32);
  std::vector<MomentCone> cones{ypq_cone(2, 1), ypq_cone(5, 2), cone_of(kConifold)};
  for (int i = 0; i < 4; ++i) cones.push_back(cone_of(oracle::random_gorenstein_normals(rng)));
  for (const auto& cone : cones) {
    const auto ref = minimize_volume(cone);
    for (int trial = 0; trial < 10; ++trial) {
      SolverOptions opt;
      opt.start = random_start(rng, cone);
      const auto cp = minimize_volume(cone, opt);
      for (std::size_t k = 0; k < cone.dim(); ++k)
        CHECK(std::abs(cp.xi_star.components[k] - ref.xi_star.components[k]) < 1e-8);
    }
  }
}

TEST_CASE("volume decreases along accepted steps") {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 15; ++trial) {
    const auto cone = cone_of(oracle::random_gorenstein_normals(rng));
    SolverOptions opt;
    opt.start = random_start(rng, cone);
    const auto cp = minimize_volume(cone, opt);
    for (std::size_t i = 1; i < cp.volume_trace.size(); ++i)
      CHECK(cp.volume_trace[i] <= cp.volume_trace[i - 1] * (1 + 1e-15));
    CHECK(cp.hessian_min_eig > 0);
    CHECK(cp.newton_iters <= 200);
  }
}

TEST_CASE("critical point is invariant under the conifold swap") {
  SolverOptions opt;
  opt.start = std::vector<double>{3, 0.4, 2.1};
  const auto cp = minimize_volume(cone_of(kConifold), opt);
  CHECK(std::abs(cp.xi_star.components[1] - cp.xi_star.components[2]) < 1e-10);
}

TEST_CASE("solver error paths") {
  SolverOptions opt;
  opt.max_iter = 1;
  opt.start = std::vector<double>{3, 0.05, 0.05};
  CHECK_THROWS_AS(minimize_volume(ypq_cone(2, 1), opt), NonConvergence);
  opt = {};
  opt.start = std::vector<double>{3, 5, -1};
  CHECK_THROWS_AS(minimize_volume(ypq_cone(2, 1), opt), ReebOutsideCone);
  opt = {};
  opt.tol = 0;
  CHECK_THROWS_AS(minimize_volume(ypq_cone(2, 1), opt), ValidationError);
}

TEST_CASE("quotient fan") {
  const auto y21 = ypq_cone(2, 1);
  const auto qf = quotient_fan(y21, ReebVector::from_exact(rat({3, 3, 3})));
  CHECK(qf.direction == IntVec{1, 1, 1});
  CHECK(qf.smooth);
  const IntMatrix target{{-1, -1}, {0, -1}, {1, 1}, {-1, 0}};
  CHECK(find_lattice_map(qf.rays, target).has_value());
  for (const auto& face : qf.faces) CHECK(face.index == 1);

  const auto flat = quotient_fan(cone_of(kFlatGorenstein), ReebVector::from_exact(rat({3, 1, 1})));
  CHECK(flat.smooth);
  CHECK(find_lattice_map(flat.rays, IntMatrix{{1, 0}, {0, 1}, {-1, -1}}).has_value());

  // A weighted direction gives orbifold points.
  const auto weighted = quotient_fan(cone_of(kFlatGorenstein), ReebVector::from_exact(rat({4, 1, 1})));
  CHECK_FALSE(weighted.smooth);

  CHECK_THROWS_AS(quotient_fan(y21, ReebVector::from_double({3, 3, 3})), RequiresRationalReeb);
  CHECK_THROWS_AS(quotient_fan(y21, ReebVector::from_exact(rat({3, 0, 0}))), ReebOutsideCone);
}

TEST_CASE("futaki_test") {
  // At the critical point the obstruction vanishes.
  const auto y21 = ypq_cone(2, 1);
  const auto cp = minimize_volume(y21);
  const auto at_star = futaki_test(y21, cp.xi_star);
  CHECK(at_star.obstruction_vector.norm() < 10 * 1e-10);
  CHECK_FALSE(at_star.obstructed);

  const auto con = cone_of(kConifold);
  const auto exact_star = futaki_test(con, ReebVector::from_exact(rat({3, Rational(3, 2), Rational(3, 2)})));
  CHECK(exact_star.obstruction_vector.norm() == 0.0);

  // The del Pezzo direction is obstructed.
  const auto dp1 = futaki_test(y21, ReebVector::from_exact(rat({3, 3, 3})));
  CHECK(dp1.obstructed);
  CHECK(dp1.relative_norm > 1e-3);

  // Point reflection of the square maps (3,1,2) to (3,2,1) and negates the obstruction.
  const auto a = futaki_test(con, ReebVector::from_exact(rat({3, 1, 2})));
  const auto b = futaki_test(con, ReebVector::from_exact(rat({3, 2, 1})));
  CHECK(a.obstructed);
  CHECK((a.obstruction_vector + b.obstruction_vector).norm() == 0.0);

  // Candidates off the slice are rescaled.
  const auto scaled = futaki_test(con, ReebVector::from_exact(rat({6, 2, 4})));
  CHECK(*scaled.candidate.exact == rat({3, 1, 2}));
  CHECK((scaled.obstruction_vector - a.obstruction_vector).norm() == 0.0);

  // Independent check: central differences of vol along the slice tangents.
  const auto frame = SliceFrame::of(y21);
  const auto dec = decompose(y21);
  for (std::size_t j = 0; j < frame.tangent.size(); ++j) {
    const double h = 1e-6;
    std::vector<double> plus{3, 3, 3}, minus{3, 3, 3};
    for (std::size_t k = 0; k < 3; ++k) {
      plus[k] += h * frame.tangent[j][k].convert_to<double>();
      minus[k] -= h * frame.tangent[j][k].convert_to<double>();
    }
    const double fd = (volume_delta(dec, ReebVector::from_double(plus)) - volume_delta(dec, ReebVector::from_double(minus))) / (2 * h);
    CHECK(dp1.obstruction_vector(static_cast<Eigen::Index>(j)) == doctest::Approx(fd).epsilon(1e-6));
  }

  CHECK_THROWS_AS(futaki_test(y21, ReebVector::from_exact(rat({3, 0, 0}))), ReebOutsideCone);
}

TEST_CASE("classify_regularity") {
  const auto flat = cone_of(kFlatGorenstein);
  CHECK(classify_regularity(flat, minimize_volume(flat)).kind == Regularity::Regular);

  const auto y21 = ypq_cone(2, 1);
  const auto cp21 = minimize_volume(y21);
  CHECK(classify_regularity(y21, cp21, FamilySpec::ypq(2, 1)).kind == Regularity::Irregular);
  const auto undetermined = classify_regularity(y21, cp21);
  CHECK(undetermined.kind == Regularity::Undetermined);
  CHECK(undetermined.approximations.size() == 5);
  CHECK(undetermined.approximations.back().residual < 1e-11);

  const auto y73 = ypq_cone(7, 3);
  const auto cp73 = minimize_volume(y73);
  CHECK(classify_regularity(y73, cp73, FamilySpec::ypq(7, 3)).kind == Regularity::QuasiRegular);
  // The certified path, when it fires, must agree.
  if (cp73.xi_star.exact) CHECK(classify_regularity(y73, cp73).kind == Regularity::QuasiRegular);

  CHECK(std::string(to_string(Regularity::QuasiRegular)) == "quasi-regular");
}
