#include "sasaki/spectral_zeta.hpp"

#include "sasaki/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace sasaki {

namespace {

constexpr double kChargeSlack = 1e-12;
constexpr double kObstructionSlack = 1e-12;
constexpr int kTailGrid = 64;
// Lattice points slightly exceed the leading-order count near the boundary.
constexpr double kCountMargin = 1.25;
constexpr int kMinAutoLevels = 3;

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

std::int64_t to_i64(const Integer& z) {
  if (z > std::numeric_limits<std::int32_t>::max() || z < std::numeric_limits<std::int32_t>::min())
    throw CapacityExceeded("normal entry " + to_string(z) + " is too large for lattice enumeration");
  return z.convert_to<std::int64_t>();
}

double charge_bound(double cutoff) { return cutoff + kChargeSlack * std::max(1.0, cutoff); }

}  // namespace

void for_each_charge(const MomentCone& cone, const ReebVector& xi, double cutoff, std::size_t cap,
                     const std::function<void(const LatticePoint&, double)>& visit) {
  const std::size_t n = cone.dim();
  if (xi.dim() != n) throw ValidationError("Reeb vector has the wrong dimension");
  if (!(cutoff > 0) || !std::isfinite(cutoff)) throw ValidationError("charge cutoff must be positive and finite");
  require_interior(cone, xi);
  const auto& x = xi.components;
  const double bound = charge_bound(cutoff);

  // Bounding box from the vertices 0 and cutoff * u / <xi, u>.
  std::vector<std::int64_t> lo(n, 0), hi(n, 0);
  for (const auto& u : cone.rays()) {
    const double p = dot(x, u);
    for (std::size_t k = 0; k < n; ++k) {
      const double c = cutoff * u[k].convert_to<double>() / p;
      lo[k] = std::min<std::int64_t>(lo[k], static_cast<std::int64_t>(std::floor(c)) - 1);
      hi[k] = std::max<std::int64_t>(hi[k], static_cast<std::int64_t>(std::ceil(c)) + 1);
    }
  }
  double prefixes = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) prefixes *= static_cast<double>(hi[k] - lo[k] + 1);
  if (prefixes > 64.0 * static_cast<double>(cap) + 1e6)
    throw CapacityExceeded("charge cutoff " + std::to_string(cutoff) + " needs too large a search box");

  std::vector<std::vector<std::int64_t>> normals;
  for (const auto& v : cone.normals()) {
    std::vector<std::int64_t> row;
    for (const auto& e : v) row.push_back(to_i64(e));
    normals.push_back(std::move(row));
  }

  const std::size_t last = n - 1;
  LatticePoint m(lo.begin(), lo.end());
  std::size_t visited = 0;
  while (true) {
    // Exact integer range of the last coordinate for this prefix.
    std::int64_t a = std::numeric_limits<std::int64_t>::min(), b = std::numeric_limits<std::int64_t>::max();
    bool feasible = true;
    for (const auto& v : normals) {
      std::int64_t s = 0;
      for (std::size_t k = 0; k < last; ++k) s += v[k] * m[k];
      if (v[last] > 0) a = std::max(a, ceil_div(-s, v[last]));
      else if (v[last] < 0) b = std::min(b, floor_div(s, -v[last]));
      else if (s < 0) feasible = false;
    }
    double c = 0;
    for (std::size_t k = 0; k < last; ++k) c += x[k] * static_cast<double>(m[k]);
    if (x[last] > 0) b = std::min(b, static_cast<std::int64_t>(std::floor((bound - c) / x[last])));
    else if (x[last] < 0) a = std::max(a, static_cast<std::int64_t>(std::ceil((bound - c) / x[last])));
    else if (c > bound) feasible = false;

    if (feasible && a <= b) {
      if (a == std::numeric_limits<std::int64_t>::min() || b == std::numeric_limits<std::int64_t>::max())
        throw InternalError("unbounded lattice slice; the cone is not pointed");
      for (std::int64_t t = a; t <= b; ++t) {
        m[last] = t;
        double charge = 0;
        for (std::size_t k = 0; k < n; ++k) charge += x[k] * static_cast<double>(m[k]);
        if (charge > bound) continue;
        if (++visited > cap)
          throw CapacityExceeded("more than " + std::to_string(cap) + " lattice points below charge " + std::to_string(cutoff));
        visit(m, std::max(charge, 0.0));
      }
    }

    // Odometer over the prefix.
    std::size_t k = last;
    while (k > 0) {
      --k;
      if (m[k] < hi[k]) {
        ++m[k];
        break;
      }
      m[k] = lo[k];
      if (k == 0) return;
    }
  }
}

std::vector<double> enumerate_charges(const MomentCone& cone, const ReebVector& xi, double cutoff, std::size_t cap) {
  std::vector<double> out;
  for_each_charge(cone, xi, cutoff, cap, [&](const LatticePoint&, double c) { out.push_back(c); });
  std::sort(out.begin(), out.end());
  return out;
}

double estimated_point_count(const SimplicialDecomposition& dec, const ReebVector& xi, double cutoff) {
  // vol{y in C* : <xi, y> <= L} = (2L)^n vol[Delta(xi)].
  return volume_delta(dec, xi) * std::pow(2 * cutoff, static_cast<double>(dec.dim));
}

double tail_cutoff(const SimplicialDecomposition& dec, const ReebVector& xi, double t, double tol) {
  if (!(t > 0) || !(tol > 0)) throw ValidationError("tail bound needs t > 0 and tol > 0");
  const double n = static_cast<double>(dec.dim);
  double best = std::numeric_limits<double>::infinity();
  for (int j = 1; j < kTailGrid; ++j) {
    const double s = t * j / kTailGrid;
    double bound = 0;
    for (const auto& piece : dec.pieces) {
      double term = piece.det.convert_to<double>();
      for (const auto& u : piece.generators) term /= -std::expm1(-s * dot(xi.components, u));
      bound += term;
    }
    const double cutoff = (std::log(bound / tol) + n * std::log(t)) / (t - s);
    best = std::min(best, cutoff);
  }
  return std::max(best, 0.0);
}

std::pair<double, double> extrapolate_to_zero(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.empty()) throw ValidationError("extrapolation needs matching nonempty samples");
  const std::size_t l = x.size();
  // t[i][j]: interpolant through points i-j..i evaluated at 0.
  std::vector<std::vector<double>> t(l, std::vector<double>(l, 0.0));
  for (std::size_t i = 0; i < l; ++i) {
    t[i][0] = y[i];
    for (std::size_t j = 1; j <= i; ++j)
      t[i][j] = t[i][j - 1] + (t[i][j - 1] - t[i - 1][j - 1]) * x[i] / (x[i - j] - x[i]);
  }
  const double value = t[l - 1][l - 1];
  const double correction = l > 1 ? std::abs(value - t[l - 1][l - 2]) : std::numeric_limits<double>::infinity();
  return {value, correction};
}

double lichnerowicz_eigenvalue(double lambda, std::size_t n) {
  return lambda * (lambda + 2.0 * static_cast<double>(n) - 2.0);
}

ZetaEstimate zeta_limit(const MomentCone& cone, const ReebVector& xi, const ZetaSchedule& schedule) {
  if (schedule.t0 < 0 || schedule.levels < 2 || !(schedule.truncation_tol > 0) || !(schedule.pole_fraction > 0))
    throw ValidationError("zeta schedule needs t0 >= 0, levels >= 2 and positive tolerances");
  require_interior(cone, xi);
  const auto dec = decompose(cone);
  const std::size_t n = cone.dim();

  double min_ray = std::numeric_limits<double>::infinity(), max_ray = 0;
  for (const auto& u : cone.rays()) {
    min_ray = std::min(min_ray, dot(xi.components, u));
    max_ray = std::max(max_ray, dot(xi.components, u));
  }
  auto cutoff_at = [&](double t) { return std::max(tail_cutoff(dec, xi, t, schedule.truncation_tol), min_ray); };
  auto count_at = [&](double t) { return kCountMargin * estimated_point_count(dec, xi, cutoff_at(t)); };
  const auto cap = static_cast<double>(schedule.cap);
  const auto exceeded = [&] {
    return CapacityExceeded("zeta schedule needs more than " + std::to_string(schedule.cap) + " lattice points");
  };

  ZetaEstimate est;
  est.xi = xi;
  est.pole_radius = 2 * std::numbers::pi / max_ray;
  std::vector<double> ts;
  if (schedule.t0 > 0) {
    for (int k = 0; k < schedule.levels; ++k) {
      const double t = schedule.t0 / std::pow(2.0, k);
      if (count_at(t) > cap) {
        est.capacity_limited = true;
        break;
      }
      ts.push_back(t);
    }
  } else {
    // Smallest t within the point budget, then doublings up to the pole fraction.
    const double t_hi = schedule.pole_fraction * est.pole_radius;
    const double budget = std::min(static_cast<double>(schedule.budget), cap);
    double t_min = t_hi;
    if (count_at(t_hi) <= budget) {
      double lo = t_hi / 1048576.0, hi = t_hi;
      for (int i = 0; i < 60 && hi / lo > 1 + 1e-6; ++i) {
        const double mid = std::sqrt(lo * hi);
        (count_at(mid) <= budget ? hi : lo) = mid;
      }
      t_min = hi;
    }
    int levels = std::min(schedule.levels, 1 + static_cast<int>(std::lround(std::log2(t_hi / t_min))));
    if (levels < kMinAutoLevels) est.capacity_limited = true;
    if (levels < 2) {
      levels = 2;
      t_min = t_hi / 2;
      if (count_at(t_min) > cap) throw exceeded();
    }
    for (int k = levels - 1; k >= 0; --k) ts.push_back(t_min * std::pow(2.0, k));
  }
  if (ts.size() < 2) throw exceeded();

  std::vector<double> cutoffs;
  for (double t : ts) cutoffs.push_back(cutoff_at(t));
  est.cutoff = *std::max_element(cutoffs.begin(), cutoffs.end());
  const auto charges = enumerate_charges(cone, xi, est.cutoff, schedule.cap);
  est.point_count = charges.size();

  std::vector<double> values;
  for (double t : ts) {
    // Smallest terms first.
    long double z = 0;
    for (auto it = charges.rbegin(); it != charges.rend(); ++it) z += std::exp(-static_cast<long double>(t) * *it);
    const double value = static_cast<double>(std::pow(static_cast<long double>(t), static_cast<long double>(n)) * z);
    est.samples.push_back({t, value});
    values.push_back(value);
  }
  std::tie(est.extrapolated_limit, est.error_bar) = extrapolate_to_zero(ts, values);

  // charges[0] is the apex.
  est.min_charge = charges.size() > 1 ? charges[1] : 0.0;
  est.eigenvalue_min = lichnerowicz_eigenvalue(est.min_charge, n);
  return est;
}

LichnerowiczReport lichnerowicz_scan(const MomentCone& cone, const ReebVector& xi) {
  require_interior(cone, xi);
  double cutoff = std::numeric_limits<double>::infinity();
  for (const auto& u : cone.rays()) cutoff = std::min(cutoff, dot(xi.components, u));

  std::vector<std::pair<double, LatticePoint>> found;
  for_each_charge(cone, xi, cutoff, 5'000'000, [&](const LatticePoint& m, double c) {
    if (std::any_of(m.begin(), m.end(), [](std::int64_t e) { return e != 0; })) found.emplace_back(c, m);
  });
  if (found.empty()) throw InternalError("no nonzero lattice point below the smallest ray charge");

  LichnerowiczReport out;
  out.min_charge = std::min_element(found.begin(), found.end())->first;
  const double tie = kChargeSlack * std::max(1.0, out.min_charge);
  for (const auto& [c, m] : found)
    if (c <= out.min_charge + tie) {
      if (out.multiplicity++ == 0) out.witness = m;
    }
  out.eigenvalue = lichnerowicz_eigenvalue(out.min_charge, cone.dim());
  out.obstructed = out.min_charge < 1 - kObstructionSlack;
  return out;
}

}  // namespace sasaki
