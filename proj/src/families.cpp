#include "sasaki/families.hpp"

#include "sasaki/errors.hpp"

#include <array>
#include <cmath>
#include <numeric>

namespace sasaki {

namespace {

struct Bezout {
  std::int64_t g, x, y;  // g = a x + b y
};

Bezout extended_gcd(std::int64_t a, std::int64_t b) {
  if (b == 0) return {a, 1, 0};
  const auto r = extended_gcd(b, a % b);
  return {r.g, r.y, r.x - (a / b) * r.y};
}

std::int64_t floor_mod(std::int64_t x, std::int64_t m) {
  const std::int64_t r = x % m;
  return r < 0 ? r + m : r;
}

// Bounds keep every intermediate of the closed forms inside int64.
constexpr std::int64_t kMaxParameter = 1'000'000;

void require_bounded(std::int64_t x, const char* name) {
  if (x > kMaxParameter) throw ValidationError(std::string(name) + " exceeds " + std::to_string(kMaxParameter));
}

}  // namespace

FamilySpec FamilySpec::ypq(std::int64_t p, std::int64_t q) {
  FamilySpec s;
  s.kind = FamilyKind::Ypq;
  s.p = p;
  s.q = q;
  return s;
}

FamilySpec FamilySpec::labc(std::int64_t a, std::int64_t b, std::int64_t c) {
  FamilySpec s;
  s.kind = FamilyKind::Labc;
  s.a = a;
  s.b = b;
  s.c = c;
  return s;
}

std::string FamilySpec::label() const {
  if (kind == FamilyKind::Ypq) return "Y^{" + std::to_string(p) + "," + std::to_string(q) + "}";
  return "L^{" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + "}";
}

void validate_ypq(std::int64_t p, std::int64_t q) {
  if (q <= 0 || q >= p) throw ValidationError("Y^{p,q} requires 0 < q < p");
  require_bounded(p, "p");
  if (std::gcd(p, q) != 1) throw ValidationError("Y^{p,q} requires gcd(p, q) = 1");
}

bool validate_labc(std::int64_t a, std::int64_t b, std::int64_t c) {
  if (a <= 0 || b <= 0 || c <= 0) throw ValidationError("L^{a,b,c} requires positive a, b, c");
  require_bounded(b, "b");
  if (a > b || c > b) throw ValidationError("L^{a,b,c} requires a <= b and c <= b");
  const std::int64_t d = a + b - c;
  if (std::gcd(std::gcd(a, b), std::gcd(c, d)) != 1) throw ValidationError("L^{a,b,c} requires gcd(a, b, c, a+b-c) = 1");
  for (auto x : {a, b})
    for (auto y : {c, d})
      if (std::gcd(x, y) != 1) return false;
  return true;
}

MomentCone ypq_cone(std::int64_t p, std::int64_t q) {
  validate_ypq(p, q);
  return MomentCone::from_normals({{1, 0, 0}, {1, 1, 0}, {1, p, p}, {1, p - q - 1, p - q}});
}

bool ypq_is_quasiregular(std::int64_t p, std::int64_t q) {
  validate_ypq(p, q);
  return is_perfect_square(Integer(4 * p * p - 3 * q * q));
}

double ypq_volume(std::int64_t p, std::int64_t q) {
  validate_ypq(p, q);
  const double pp = static_cast<double>(p), qq = static_cast<double>(q);
  const double root = std::sqrt(4 * pp * pp - 3 * qq * qq);
  return qq * qq * (2 * pp + root) / (3 * pp * pp * (3 * qq * qq - 2 * pp * pp + pp * root));
}

double ypq_volume_unscaled_radical(std::int64_t p, std::int64_t q) {
  validate_ypq(p, q);
  const double pp = static_cast<double>(p), qq = static_cast<double>(q);
  const double root = std::sqrt(4 * pp * pp - 3 * qq * qq);
  return qq * qq * (2 * pp + root) / (3 * pp * pp * (3 * qq * qq - 2 * pp * pp + root));
}

LabcCone labc_cone(std::int64_t a, std::int64_t b, std::int64_t c) {
  const bool coprime = validate_labc(a, b, c);
  const std::int64_t d = a + b - c;

  // Positive charges sit on one diagonal (A, B), negative ones on the other
  // (C, D). With A = 0 and C = (1, 0) the relation fixes B = (x_B, delta)
  // and D = (x_D, beta) once beta s - delta r = 1. Try the labelings in a
  // fixed order until the diagonal charges beta, delta are coprime.
  const std::array<std::array<std::int64_t, 4>, 4> labelings{{
      {a, b, c, d}, {b, a, c, d}, {a, b, d, c}, {b, a, d, c}}};
  for (const auto& [alpha, beta, gamma, delta] : labelings) {
    const auto e = extended_gcd(beta, delta);
    if (e.g != 1) continue;
    const std::int64_t s = e.x, r = -e.y;  // beta s - delta r = 1
    const std::int64_t xb = floor_mod(gamma * s, delta);
    const std::int64_t t = (xb - gamma * s) / delta;
    const std::int64_t xd = gamma * r + beta * t;

    const IntMatrix normals{{1, 0, 0}, {1, xb, delta}, {1, 1, 0}, {1, xd, beta}};
    const IntVec q{alpha, beta, -gamma, -delta};
    IntVec sum(3, 0);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t k = 0; k < 3; ++k) sum[k] += q[i] * normals[i][k];
    if (sum != IntVec(3, 0)) throw InternalError("L^{a,b,c} construction violates its charge relation");

    LabcCone out{MomentCone::from_normals(normals), {}, coprime};
    for (const auto& v : out.cone.normals())
      for (std::size_t i = 0; i < 4; ++i)
        if (normals[i] == v) out.charges.push_back(q[i]);

    const auto kernel = kernel_charges(out.cone).rows;
    IntVec negated = out.charges;
    for (auto& x : negated) x = -x;
    if (kernel.size() != 1 || (kernel[0] != out.charges && kernel[0] != negated))
      throw InternalError("L^{a,b,c} kernel does not reproduce the charges");
    if (coprime && !out.cone.good().value_or(false)) throw InternalError("L^{a,b,c} cone is not good");
    return out;
  }
  throw ValidationError("L^{a,b,c} has no lattice realization with a primitive edge");
}

}  // namespace sasaki
