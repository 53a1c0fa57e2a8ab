#include "doctest.h"

#include "corpus.hpp"
#include "oracles.hpp"
#include "sasaki/errors.hpp"
#include "sasaki/reeb_solver.hpp"
#include "sasaki/spectral_zeta.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

using namespace sasaki;

namespace {

const IntMatrix kConifold = {{1, 0, 0}, {1, 1, 0}, {1, 1, 1}, {1, 0, 1}};
const IntMatrix kFlatGorenstein = {{1, 0, 0}, {1, 1, 0}, {1, 0, 1}};
const IntMatrix kOrthant = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};

MomentCone cone_of(const IntMatrix& normals) { return MomentCone::from_normals(normals); }

// All of the box [-B, B]^3 filtered by the inequalities.
std::vector<double> brute_charges_3d(const MomentCone& cone, const std::vector<double>& xi, double cutoff, int box) {
  std::vector<double> out;
  for (int a = -box; a <= box; ++a)
    for (int b = -box; b <= box; ++b)
      for (int c = -box; c <= box; ++c) {
        const IntVec m{a, b, c};
        if (std::any_of(cone.normals().begin(), cone.normals().end(), [&](const IntVec& v) { return dot(v, m) < 0; }))
          continue;
        const double q = xi[0] * a + xi[1] * b + xi[2] * c;
        if (q <= cutoff + 1e-12 * std::max(1.0, cutoff)) out.push_back(q);
      }
  std::sort(out.begin(), out.end());
  return out;
}

std::map<long, int> layer_counts(const std::vector<double>& charges) {
  std::map<long, int> out;
  for (double c : charges) ++out[std::lround(c)];
  return out;
}

}  // namespace

TEST_CASE("orthant layers are binomial") {
  const auto charges = enumerate_charges(cone_of(kOrthant), ReebVector::from_double({1, 1, 1}), 3);
  CHECK(layer_counts(charges) == std::map<long, int>{{0, 1}, {1, 3}, {2, 6}, {3, 10}});
  // Exact Ehrhart polynomial of the standard simplex.
  const auto big = enumerate_charges(cone_of(kOrthant), ReebVector::from_double({1, 1, 1}), 40);
  CHECK(big.size() == 41 * 42 * 43 / 6);
}

TEST_CASE("enumeration agrees with a full-box filter") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> w(0.1, 1.0);
  for (int trial = 0; trial < 12; ++trial) {
    const auto cone = cone_of(oracle::random_gorenstein_normals(rng, 2));
    std::vector<double> xi(3, 0.0);
    for (const auto& v : cone.normals()) {
      const double c = w(rng);
      for (int k = 0; k < 3; ++k) xi[k] += c * v[k].convert_to<double>();
    }
    double cutoff = 0;
    for (const auto& u : cone.rays()) cutoff = std::max(cutoff, dot(xi, u));
    cutoff *= 2.5;
    int box = 0;
    for (const auto& u : cone.rays())
      for (int k = 0; k < 3; ++k)
        box = std::max(box, static_cast<int>(std::ceil(cutoff * std::abs(u[k].convert_to<double>()) / dot(xi, u))) + 1);
    const auto fast = enumerate_charges(cone, ReebVector::from_double(xi), cutoff);
    const auto slow = brute_charges_3d(cone, xi, cutoff, box);
    REQUIRE(fast.size() == slow.size());
    for (std::size_t i = 0; i < fast.size(); ++i) CHECK(fast[i] == doctest::Approx(slow[i]).epsilon(1e-12));
  }
}

TEST_CASE("minimal charges at distinguished Reeb vectors") {
  const auto con = cone_of(kConifold);
  const auto charges = enumerate_charges(con, ReebVector::from_double({3, 1.5, 1.5}), 1.5);
  REQUIRE(charges.size() == 5);
  CHECK(charges[0] == 0.0);
  for (std::size_t i = 1; i < 5; ++i) CHECK(charges[i] == 1.5);

  const auto flat = enumerate_charges(cone_of(kFlatGorenstein), ReebVector::from_double({3, 1, 1}), 1);
  CHECK(flat == std::vector<double>{0, 1, 1, 1});
}

TEST_CASE("enumeration errors") {
  const auto con = cone_of(kConifold);
  CHECK_THROWS_AS(enumerate_charges(con, ReebVector::from_double({3, 1.5, 1.5}), 40, 100), CapacityExceeded);
  CHECK_THROWS_AS(enumerate_charges(con, ReebVector::from_double({3, 3, 0}), 5), ReebOutsideCone);
  CHECK_THROWS_AS(enumerate_charges(con, ReebVector::from_double({3, 1.5, 1.5}), -1), ValidationError);
}

TEST_CASE("lattice count approaches the volume term") {
  // Count / (ratio L^n / n!) -> 1; at L = 40 the orthant is still 15.7% above.
  const auto dec = decompose(cone_of(kOrthant));
  const ReebVector xi = ReebVector::from_double({1, 1, 1});
  double previous = 1e9;
  for (double cutoff : {40.0, 100.0, 200.0}) {
    const double count = static_cast<double>(enumerate_charges(cone_of(kOrthant), xi, cutoff).size());
    const double rel = count / estimated_point_count(dec, xi, cutoff) - 1;
    CHECK(rel > 0);
    CHECK(rel < previous);
    previous = rel;
  }
  CHECK(previous < 0.05);
}

TEST_CASE("tail cutoff bounds the truncation error") {
  // Orthant at (1,1,1): Z(t) = (1 - e^-t)^-3 exactly.
  const auto cone = cone_of(kOrthant);
  const auto dec = decompose(cone);
  const ReebVector xi = ReebVector::from_double({1, 1, 1});
  for (double t : {2.0, 1.0, 0.5, 0.25}) {
    const double cutoff = tail_cutoff(dec, xi, t, 1e-6);
    const auto charges = enumerate_charges(cone, xi, cutoff);
    long double z = 0;
    for (auto it = charges.rbegin(); it != charges.rend(); ++it) z += std::exp(-static_cast<long double>(t) * *it);
    const long double exact = 1.0L / std::pow(-std::expm1(-static_cast<long double>(t)), 3.0L);
    const double tail = static_cast<double>(std::pow(static_cast<long double>(t), 3.0L) * (exact - z));
    CHECK(tail >= -1e-12);
    CHECK(tail <= 1e-6);
  }
}

TEST_CASE("extrapolate_to_zero is exact on polynomials") {
  const std::vector<double> x{1, 0.5, 0.25, 0.125, 0.0625};
  std::vector<double> y;
  for (double t : x) y.push_back(2 - 3 * t + 0.5 * t * t * t);
  const auto [value, correction] = extrapolate_to_zero(x, y);
  CHECK(value == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(correction < 1e-12);
  const auto [v4, c4] = extrapolate_to_zero({x[0], x[1], x[2], x[3]}, {y[0], y[1], y[2], y[3]});
  CHECK(v4 == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(c4 > 1e-3);
  // Three points cannot reproduce a cubic.
  const auto [v3, c3] = extrapolate_to_zero({1, 0.5, 0.25}, {y[0], y[1], y[2]});
  CHECK(c3 > 1e-3);
  CHECK(v3 != doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("zeta limit: orthant closed form") {
  const auto est = zeta_limit(cone_of(kOrthant), ReebVector::from_double({1, 1, 1}));
  CHECK(std::abs(est.extrapolated_limit - 1.0) < 1e-3);
  CHECK(est.point_count <= 5'000'000);
  CHECK_FALSE(est.capacity_limited);
  for (const auto& s : est.samples) {
    const double exact = std::pow(s.t / -std::expm1(-s.t), 3.0);
    CHECK(std::abs(s.value - exact) <= 1e-6);
  }
  CHECK(est.min_charge == 1.0);
  CHECK(est.eigenvalue_min == 1.0 * (1.0 + 4.0));
}

TEST_CASE("zeta limit matches the volume at critical points") {
  for (const auto& cone : {cone_of(kConifold), ypq_cone(2, 1)}) {
    const auto cp = minimize_volume(cone);
    const auto est = zeta_limit(cone, cp.xi_star);
    CHECK(std::abs(est.extrapolated_limit - cp.vol_report.sphere_ratio) < 1e-3);
    CHECK(est.point_count <= 5'000'000);
    CHECK(est.eigenvalue_min == lichnerowicz_eigenvalue(est.min_charge, 3));
  }
}

TEST_CASE("explicit schedules drop unaffordable levels") {
  ZetaSchedule s;
  s.t0 = 1.0;
  s.levels = 8;
  s.cap = 300'000;
  const auto est = zeta_limit(cone_of(kConifold), ReebVector::from_double({3, 1.5, 1.5}), s);
  CHECK(est.capacity_limited);
  CHECK(est.samples.size() >= 2);
  CHECK(est.samples.size() < 8);
  CHECK(est.point_count <= 300'000);

  s.t0 = 0.01;
  CHECK_THROWS_AS(zeta_limit(cone_of(kConifold), ReebVector::from_double({3, 1.5, 1.5}), s), CapacityExceeded);
  s.levels = 1;
  CHECK_THROWS_AS(zeta_limit(cone_of(kConifold), ReebVector::from_double({3, 1.5, 1.5}), s), ValidationError);
}

TEST_CASE("lichnerowicz_scan examples") {
  const auto flat = lichnerowicz_scan(cone_of(kFlatGorenstein), ReebVector::from_double({3, 1, 1}));
  CHECK(flat.min_charge == 1.0);
  CHECK(flat.multiplicity == 3);
  CHECK_FALSE(flat.obstructed);
  CHECK(flat.eigenvalue == 5.0);

  const auto con = lichnerowicz_scan(cone_of(kConifold), ReebVector::from_double({3, 1.5, 1.5}));
  CHECK(con.min_charge == 1.5);
  CHECK(con.multiplicity == 4);
  CHECK_FALSE(con.obstructed);

  // Pairings of the conifold rays with (3, 2.9, 0.05).
  const std::vector<double> skew{3, 2.9, 0.05};
  const auto cone = cone_of(kConifold);
  double smallest = 1e9;
  for (const auto& u : cone.rays()) smallest = std::min(smallest, dot(skew, u));
  CHECK(smallest == doctest::Approx(0.05));
  const auto sk = lichnerowicz_scan(cone, ReebVector::from_double(skew));
  CHECK(sk.obstructed);
  CHECK(sk.min_charge == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(sk.witness == LatticePoint{0, 0, 1});
  CHECK(sk.eigenvalue == sk.min_charge * (sk.min_charge + 4));
}

TEST_CASE("lichnerowicz scan matches the smallest enumerated charge") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> w(0.05, 1.0);
  for (int trial = 0; trial < 15; ++trial) {
    const auto cone = cone_of(oracle::random_gorenstein_normals(rng));
    std::vector<double> xi(3, 0.0);
    for (const auto& v : cone.normals()) {
      const double c = w(rng);
      for (int k = 0; k < 3; ++k) xi[k] += c * v[k].convert_to<double>();
    }
    double max_ray = 0;
    for (const auto& u : cone.rays()) max_ray = std::max(max_ray, dot(xi, u));
    const auto all = enumerate_charges(cone, ReebVector::from_double(xi), max_ray);
    const auto scan = lichnerowicz_scan(cone, ReebVector::from_double(xi));
    CHECK(scan.min_charge == all[1]);
  }
}

TEST_CASE("critical Reeb vectors are Lichnerowicz-unobstructed across the corpus") {
  for (const auto& [name, cone] : corpus::toric()) {
    INFO(name);
    const auto cp = minimize_volume(cone);
    const auto scan = lichnerowicz_scan(cone, cp.xi_star);
    CHECK(scan.min_charge >= 1 - 1e-12);
  }
}
