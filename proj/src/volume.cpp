#include "sasaki/volume.hpp"

#include "sasaki/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>

namespace sasaki {

namespace {

constexpr double kNearBoundary = 1e-12;

Integer factorial(std::size_t n) {
  Integer f = 1;
  for (std::size_t i = 2; i <= n; ++i) f *= static_cast<unsigned>(i);
  return f;
}

// 2^n n!
Integer simplex_normaliser(std::size_t n) {
  return (Integer(1) << static_cast<unsigned>(n)) * factorial(n);
}

OrbifoldChart make_chart(const IntMatrix& generators) {
  const std::size_t n = generators.size();
  auto u_inv = inverse(to_rational(generators));
  if (!u_inv) throw InternalError("degenerate simplicial piece");
  // Column i of U^{-1} is normal to every generator but u_i.
  IntMatrix normals(n);
  for (std::size_t i = 0; i < n; ++i) {
    RatVec col(n);
    for (std::size_t k = 0; k < n; ++k) col[k] = (*u_inv)[k][i];
    normals[i] = primitive_direction(col);
  }
  OrbifoldChart chart;
  Integer det = determinant(normals);
  chart.order = det < 0 ? Integer(-det) : det;
  auto n_inv = inverse(to_rational(normals));
  for (std::size_t i = 0; i < n; ++i) {
    RatVec w(n);
    for (std::size_t k = 0; k < n; ++k) w[k] = (*n_inv)[k][i];
    chart.weights.push_back(std::move(w));
  }
  return chart;
}

SimplicialPiece make_piece(IntMatrix generators) {
  SimplicialPiece piece;
  Integer det = determinant(generators);
  piece.det = det < 0 ? Integer(-det) : det;
  piece.chart = make_chart(generators);
  piece.generators = std::move(generators);
  return piece;
}

using Subset = std::vector<std::size_t>;

std::vector<Subset> triangulate(const MomentCone& cone, const Subset& face, std::size_t k,
                                std::optional<std::size_t> anchor_override) {
  if (face.size() == k) return {face};
  const std::size_t anchor = anchor_override.value_or(face.front());
  const auto& rays = cone.rays();
  std::set<Subset> facets;
  for (const auto& v : cone.normals()) {
    Subset s;
    for (auto r : face)
      if (dot(v, rays[r]) == 0) s.push_back(r);
    if (s.size() == face.size() || s.size() + 1 < k) continue;
    if (std::find(s.begin(), s.end(), anchor) != s.end()) continue;
    IntMatrix gens;
    for (auto r : s) gens.push_back(rays[r]);
    if (rank(gens) != k - 1) continue;
    facets.insert(std::move(s));
  }
  std::vector<Subset> out;
  for (const auto& facet : facets) {
    for (auto simplex : triangulate(cone, facet, k - 1, std::nullopt)) {
      simplex.insert(simplex.begin(), anchor);
      out.push_back(std::move(simplex));
    }
  }
  return out;
}

template <typename T>
T to_scalar(const Integer& z) {
  if constexpr (std::is_same_v<T, double>) {
    return z.convert_to<double>();
  } else {
    return T(z);
  }
}

template <typename T>
T pairing(const std::vector<T>& xi, const IntVec& u) {
  T s = 0;
  for (std::size_t i = 0; i < xi.size(); ++i) s += xi[i] * to_scalar<T>(u[i]);
  return s;
}

template <typename T>
T checked_pairing(const std::vector<T>& xi, const IntVec& u) {
  const T p = pairing(xi, u);
  if (p <= 0) throw ReebOutsideCone("Reeb vector pairs non-positively with ray " + to_string(u));
  if constexpr (std::is_same_v<T, double>) {
    if (p < kNearBoundary) throw ReebNearBoundary("Reeb vector within 1e-12 of the boundary of the fan cone");
  }
  return p;
}

template <typename T>
T volume_impl(const SimplicialDecomposition& dec, const std::vector<T>& xi) {
  T total = 0;
  for (const auto& piece : dec.pieces) {
    T prod = 1;
    for (const auto& u : piece.generators) prod *= checked_pairing(xi, u);
    total += to_scalar<T>(piece.det) / prod;
  }
  return total / to_scalar<T>(simplex_normaliser(dec.dim));
}

// Gradient and Hessian of sum_p det_p / prod_i <xi, u_i>, then normalised.
template <typename T>
void derivatives_impl(const SimplicialDecomposition& dec, const std::vector<T>& xi,
                      std::vector<T>& grad, std::vector<std::vector<T>>* hess) {
  const std::size_t n = dec.dim;
  grad.assign(n, T(0));
  if (hess) hess->assign(n, std::vector<T>(n, T(0)));
  const T norm = to_scalar<T>(simplex_normaliser(n));
  for (const auto& piece : dec.pieces) {
    std::vector<T> p(n);
    T term = to_scalar<T>(piece.det);
    for (std::size_t i = 0; i < n; ++i) {
      p[i] = checked_pairing(xi, piece.generators[i]);
      term /= p[i];
    }
    term /= norm;
    std::vector<T> s(n, T(0));
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i) s[k] += to_scalar<T>(piece.generators[i][k]) / p[i];
    for (std::size_t k = 0; k < n; ++k) grad[k] -= term * s[k];
    if (!hess) continue;
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t l = 0; l < n; ++l) {
        T q = 0;
        for (std::size_t i = 0; i < n; ++i)
          q += to_scalar<T>(piece.generators[i][k]) * to_scalar<T>(piece.generators[i][l]) / (p[i] * p[i]);
        (*hess)[k][l] += term * (s[k] * s[l] + q);
      }
  }
}

template <typename T>
T localization_impl(const SimplicialDecomposition& dec, const std::vector<T>& xi) {
  T total = 0;
  for (const auto& piece : dec.pieces) {
    // Weights are positive multiples of the generators; the sign check on
    // the generators covers them.
    for (const auto& u : piece.generators) checked_pairing(xi, u);
    T prod = to_scalar<T>(piece.chart.order);
    for (const auto& w : piece.chart.weights) {
      T s = 0;
      for (std::size_t i = 0; i < xi.size(); ++i) {
        if constexpr (std::is_same_v<T, double>) {
          s += xi[i] * to_double(w[i]);
        } else {
          s += xi[i] * w[i];
        }
      }
      prod *= s;
    }
    total += T(1) / prod;
  }
  return total;
}

void check_dim(const SimplicialDecomposition& dec, std::size_t n) {
  if (dec.dim != n) throw ValidationError("Reeb vector has dimension " + std::to_string(n) + ", cone has " + std::to_string(dec.dim));
}

}  // namespace

ReebVector ReebVector::from_exact(RatVec xi) {
  ReebVector r;
  r.components = to_double(xi);
  r.exact = std::move(xi);
  return r;
}

ReebVector ReebVector::from_double(std::vector<double> xi) {
  ReebVector r;
  r.components = std::move(xi);
  return r;
}

SimplicialDecomposition decompose(const MomentCone& cone, std::size_t anchor_index) {
  const auto& rays = cone.rays();
  SimplicialDecomposition dec;
  dec.dim = cone.dim();
  Subset all(rays.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  for (const auto& simplex : triangulate(cone, all, cone.dim(), anchor_index % rays.size())) {
    IntMatrix gens;
    for (auto r : simplex) gens.push_back(rays[r]);
    dec.pieces.push_back(make_piece(std::move(gens)));
  }
  dec.unimodular = std::all_of(dec.pieces.begin(), dec.pieces.end(), [](const auto& p) { return p.det == 1; });
  return dec;
}

SimplicialDecomposition refine_unimodular(const SimplicialDecomposition& dec) {
  SimplicialDecomposition out;
  out.dim = dec.dim;
  out.unimodular = true;
  std::vector<IntMatrix> work;
  for (const auto& p : dec.pieces) work.push_back(p.generators);
  const std::size_t n = dec.dim;
  while (!work.empty()) {
    IntMatrix gens = std::move(work.back());
    work.pop_back();
    Integer det = determinant(gens);
    if (det < 0) det = -det;
    if (det == 1) {
      out.pieces.push_back(make_piece(std::move(gens)));
      continue;
    }
    // Coordinates lambda = y U^{-1} of lattice points in the box around
    // the half-open parallelepiped sum lambda_i u_i, 0 <= lambda_i < 1.
    const auto u_inv = *inverse(to_rational(gens));
    IntVec lo(n, 0), hi(n, 0);
    for (const auto& u : gens)
      for (std::size_t k = 0; k < n; ++k) (u[k] < 0 ? lo[k] : hi[k]) += u[k];
    std::optional<IntVec> best;
    RatVec best_lambda;
    Rational best_sum;
    IntVec y = lo;
    while (true) {
      RatVec lambda(n, 0);
      bool inside = true;
      Rational sum = 0;
      for (std::size_t i = 0; i < n && inside; ++i) {
        for (std::size_t k = 0; k < n; ++k) lambda[i] += y[k] * u_inv[k][i];
        inside = lambda[i] >= 0 && lambda[i] < 1;
        sum += lambda[i];
      }
      if (inside && sum > 0 && (!best || sum < best_sum)) {
        best = y;
        best_lambda = lambda;
        best_sum = sum;
      }
      std::size_t k = 0;
      while (k < n && y[k] == hi[k]) y[k] = lo[k], ++k;
      if (k == n) break;
      ++y[k];
    }
    if (!best) throw InternalError("no interior parallelepiped point in a non-unimodular piece");
    for (std::size_t i = 0; i < n; ++i) {
      if (best_lambda[i] == 0) continue;
      IntMatrix child = gens;
      child[i] = *best;
      work.push_back(std::move(child));
    }
  }
  std::sort(out.pieces.begin(), out.pieces.end(),
            [](const auto& a, const auto& b) { return a.generators < b.generators; });
  return out;
}

double volume_delta(const SimplicialDecomposition& dec, const ReebVector& xi) {
  check_dim(dec, xi.dim());
  return volume_impl(dec, xi.components);
}

Rational volume_delta_exact(const SimplicialDecomposition& dec, const RatVec& xi) {
  check_dim(dec, xi.size());
  return volume_impl(dec, xi);
}

double sphere_volume(std::size_t n) {
  // vol(S^{2n-1}) = 2 pi^n / (n-1)!
  return 2.0 * std::pow(std::numbers::pi, static_cast<double>(n)) / factorial(n - 1).convert_to<double>();
}

double link_volume(double vol_delta, std::size_t n) {
  return 2.0 * static_cast<double>(n) * std::pow(2.0 * std::numbers::pi, static_cast<double>(n)) * vol_delta;
}

double volume_link(const SimplicialDecomposition& dec, const ReebVector& xi) {
  return link_volume(volume_delta(dec, xi), dec.dim);
}

double sphere_ratio(double vol_delta, std::size_t n) {
  return simplex_normaliser(n).convert_to<double>() * vol_delta;
}

Rational sphere_ratio_exact(const Rational& vol_delta, std::size_t n) {
  return Rational(simplex_normaliser(n)) * vol_delta;
}

Eigen::VectorXd volume_gradient(const SimplicialDecomposition& dec, const ReebVector& xi) {
  check_dim(dec, xi.dim());
  std::vector<double> g;
  derivatives_impl<double>(dec, xi.components, g, nullptr);
  return Eigen::Map<Eigen::VectorXd>(g.data(), static_cast<Eigen::Index>(g.size()));
}

Eigen::MatrixXd volume_hessian(const SimplicialDecomposition& dec, const ReebVector& xi) {
  check_dim(dec, xi.dim());
  std::vector<double> g;
  std::vector<std::vector<double>> h;
  derivatives_impl<double>(dec, xi.components, g, &h);
  const auto n = static_cast<Eigen::Index>(dec.dim);
  Eigen::MatrixXd out(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) out(i, j) = h[i][j];
  return out;
}

RatVec volume_gradient_exact(const SimplicialDecomposition& dec, const RatVec& xi) {
  check_dim(dec, xi.size());
  RatVec g;
  derivatives_impl<Rational>(dec, xi, g, nullptr);
  return g;
}

VolumeReport evaluate_volume(const SimplicialDecomposition& dec, const ReebVector& xi) {
  check_dim(dec, xi.dim());
  VolumeReport rep;
  rep.xi = xi;
  const std::size_t n = dec.dim;
  if (xi.exact) {
    rep.vol_delta = to_double(volume_delta_exact(dec, *xi.exact));
  } else {
    rep.vol_delta = volume_delta(dec, xi);
  }
  rep.vol_link = link_volume(rep.vol_delta, n);
  rep.sphere_ratio = sphere_ratio(rep.vol_delta, n);
  std::vector<double> g;
  std::vector<std::vector<double>> h;
  derivatives_impl<double>(dec, xi.components, g, &h);
  rep.gradient = Eigen::Map<Eigen::VectorXd>(g.data(), static_cast<Eigen::Index>(n));
  rep.hessian.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) rep.hessian(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = h[i][j];
  return rep;
}

double localization_sum(const SimplicialDecomposition& dec, const ReebVector& xi) {
  check_dim(dec, xi.dim());
  return localization_impl(dec, xi.components);
}

Rational localization_sum_exact(const SimplicialDecomposition& dec, const RatVec& xi) {
  check_dim(dec, xi.size());
  return localization_impl(dec, xi);
}

void require_interior(const MomentCone& cone, const ReebVector& xi) {
  if (xi.dim() != cone.dim()) throw ValidationError("Reeb vector dimension does not match the cone");
  for (const auto& u : cone.rays()) {
    const bool positive = xi.exact ? dot(*xi.exact, u) > 0 : dot(xi.components, u) > 0;
    if (!positive) throw ReebOutsideCone("Reeb vector pairs non-positively with ray " + to_string(u));
  }
}

}  // namespace sasaki
