#pragma once

// Obstruction screen for weighted homogeneous hypersurface singularities
// {F = 0} in C^{n+1}, F of degree d under the weights w.

#include "sasaki/arith.hpp"

#include <cstddef>
#include <istream>
#include <optional>
#include <string>
#include <vector>

namespace sasaki {

struct HypersurfaceSingularity {
  IntVec weights;  // n + 1 positive entries with gcd 1
  Integer degree;

  static HypersurfaceSingularity make(IntVec weights, Integer degree);

  std::size_t n() const { return weights.size() - 1; }
  Integer weight_sum() const;
  Integer weight_product() const;
  Integer weight_min() const;
  /// Charge of the holomorphic volume form under the weight action, |w| - d.
  Integer form_charge() const { return weight_sum() - degree; }
  bool fano() const { return form_charge() > 0; }
  /// n / (|w| - d); requires fano().
  Rational mu() const;
};

/// Brieskorn-Pham exponents a_i: w_i = lcm(a) / a_i and d = lcm(a).
HypersurfaceSingularity brieskorn(const IntVec& exponents);

enum class ScreenVerdict { PassesScreen, Obstructed, NotFano };
const char* to_string(ScreenVerdict v);

struct ScreenReport {
  HypersurfaceSingularity input;
  bool fano = false;
  Integer bishop_lhs, bishop_rhs;  // d (|w| - d)^n and w_prod n^n
  bool bishop_obstructed = false;
  bool bishop_equality = false;
  Integer lich_lhs, lich_rhs;  // |w| - d and n w_min
  bool lich_obstructed = false;
  bool lich_equality = false;
  RatVec coordinate_charges;  // n w_j / (|w| - d); empty unless fano
  std::optional<Rational> volume_ratio;  // bishop_lhs / bishop_rhs; unset unless fano
  bool flat = false;  // volume_ratio == 1
  ScreenVerdict verdict = ScreenVerdict::PassesScreen;
  std::vector<std::string> reasons;  // "bishop", "lichnerowicz"
};

/// Throws ValidationError for non-positive entries, fewer than two weights or
/// gcd(w) != 1. A non-Fano pair is a verdict, not an error.
ScreenReport screen(const IntVec& weights, const Integer& degree);
ScreenReport screen(const HypersurfaceSingularity& h);

/// lim_{t -> 0} t^n (1 - e^{-t d mu}) / prod_i (1 - e^{-t w_i mu}), computed by
/// multiplying out truncated power series with rational coefficients.
/// Throws ValidationError when the pair is not Fano.
Rational hypersurface_zeta_ratio(const IntVec& weights, const Integer& degree);

/// Parses "w1,...,w_{n+1};d". Throws ParseError carrying line when given.
HypersurfaceSingularity parse_screen_line(const std::string& text, int line = 0);

/// One entry per non-blank line; '#' starts a comment. Weight validation
/// failures are reported as ValidationError prefixed with the line number.
std::vector<HypersurfaceSingularity> parse_screen_batch(std::istream& in);

/// Screens every input using up to jobs threads; output order matches input.
std::vector<ScreenReport> screen_batch(const std::vector<HypersurfaceSingularity>& inputs, std::size_t jobs = 1);

}  // namespace sasaki
