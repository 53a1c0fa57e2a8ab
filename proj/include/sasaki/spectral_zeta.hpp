#pragma once

// Holomorphic charge spectrum of a toric cone: the lattice points m of C*
// carry charge <xi, m>, and Z(t) = sum_m exp(-t <xi, m>).

#include "sasaki/lattice_cone.hpp"
#include "sasaki/volume.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

namespace sasaki {

using LatticePoint = std::vector<std::int64_t>;

/// Calls visit(m, <xi, m>) for every m in C* cap Z^n with charge <= cutoff,
/// in lexicographic order of m. Throws ReebOutsideCone, ValidationError for
/// a non-positive cutoff and CapacityExceeded when more than cap points
/// would be visited.
void for_each_charge(const MomentCone& cone, const ReebVector& xi, double cutoff, std::size_t cap,
                     const std::function<void(const LatticePoint&, double)>& visit);

/// Sorted charges (with multiplicity) of all lattice points up to cutoff.
std::vector<double> enumerate_charges(const MomentCone& cone, const ReebVector& xi, double cutoff,
                                      std::size_t cap = 5'000'000);

/// Leading-order estimate of the number of lattice points with charge <= cutoff.
double estimated_point_count(const SimplicialDecomposition& dec, const ReebVector& xi, double cutoff);

/// Smallest cutoff L with t^n * sum_{<xi,m> > L} exp(-t <xi,m>) <= tol, from
/// the bound Z(s) <= sum_pieces det / prod (1 - exp(-s <xi,u_i>)) and
/// exp(-t c) <= exp(-(t-s) L) exp(-s c) for c > L, optimised over s.
double tail_cutoff(const SimplicialDecomposition& dec, const ReebVector& xi, double t, double tol);

/// Samples t_k = t0 / 2^k. With t0 = 0 the schedule is automatic: the
/// smallest t is the one whose cutoff fits the point budget, and levels are
/// added by doubling while t stays below pole_fraction * 2 pi / c_max, c_max
/// the largest ray charge (t^n Z(t) has poles at 2 pi i k / <xi, u>).
struct ZetaSchedule {
  double t0 = 0.0;
  int levels = 6;  // maximum
  double truncation_tol = 1e-6;
  std::size_t budget = 4'000'000;
  double pole_fraction = 1.0;
  std::size_t cap = 5'000'000;
};

struct ZetaSample {
  double t = 0.0;
  double value = 0.0;  // t^n Z_trunc(t)
};

struct ZetaEstimate {
  ReebVector xi;
  double cutoff = 0.0;
  std::size_t point_count = 0;
  std::vector<ZetaSample> samples;
  double extrapolated_limit = 0.0;
  double error_bar = 0.0;  // magnitude of the last extrapolation correction
  double pole_radius = 0.0;
  double min_charge = 0.0;
  double eigenvalue_min = 0.0;  // min_charge (min_charge + 2n - 2)
  bool capacity_limited = false;  // fewer levels than intended fit the cap
};

/// Polynomial extrapolation of t^n Z(t) to t = 0 over the schedule. With an
/// explicit t0, levels whose cutoff would exceed the cap are dropped from
/// the small-t end. Throws CapacityExceeded when fewer than two levels fit.
ZetaEstimate zeta_limit(const MomentCone& cone, const ReebVector& xi, const ZetaSchedule& schedule = {});

/// Neville extrapolation to x = 0; returns (value, last correction).
std::pair<double, double> extrapolate_to_zero(const std::vector<double>& x, const std::vector<double>& y);

struct LichnerowiczReport {
  double min_charge = 0.0;
  LatticePoint witness;
  std::size_t multiplicity = 0;
  double eigenvalue = 0.0;  // min_charge (min_charge + 2n - 2)
  bool obstructed = false;  // min_charge < 1 - 1e-12
};

/// The smallest nonzero charge. Ray generators are lattice points, so the
/// scan stops at the smallest ray charge.
LichnerowiczReport lichnerowicz_scan(const MomentCone& cone, const ReebVector& xi);

double lichnerowicz_eigenvalue(double lambda, std::size_t n);

}  // namespace sasaki
