#include "sasaki/hypersurface.hpp"

#include "sasaki/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <thread>

namespace sasaki {

namespace {

Integer power(const Integer& base, std::size_t e) {
  Integer out = 1;
  for (std::size_t i = 0; i < e; ++i) out *= base;
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

Integer parse_positive(const std::string& raw, const char* what, int line) {
  const std::string s = trim(raw);
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); }))
    throw ParseError(std::string("expected a positive integer ") + what + ", got '" + s + "'", line);
  return Integer(s);
}

// Truncated power series in t with rational coefficients.
using Series = std::vector<Rational>;

// (1 - exp(-a t)) / t = sum_k (-1)^k a^{k+1} t^k / (k+1)!
Series one_minus_exp_over_t(const Rational& a, std::size_t order) {
  Series s(order);
  Rational term = a;
  for (std::size_t k = 0; k < order; ++k) {
    s[k] = term;
    term *= -a / Rational(static_cast<long>(k + 2));
  }
  return s;
}

Series multiply(const Series& x, const Series& y) {
  Series out(x.size(), Rational(0));
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; i + j < x.size(); ++j) out[i + j] += x[i] * y[j];
  return out;
}

// x / y with y[0] != 0.
Series divide(const Series& x, const Series& y) {
  Series out(x.size(), Rational(0));
  for (std::size_t k = 0; k < x.size(); ++k) {
    Rational r = x[k];
    for (std::size_t j = 1; j <= k; ++j) r -= y[j] * out[k - j];
    out[k] = r / y[0];
  }
  return out;
}

}  // namespace

HypersurfaceSingularity HypersurfaceSingularity::make(IntVec weights, Integer degree) {
  if (weights.size() < 2) throw ValidationError("a hypersurface needs at least two weights");
  for (const auto& w : weights)
    if (w <= 0) throw ValidationError("weights must be positive");
  if (degree <= 0) throw ValidationError("degree must be positive");
  if (gcd_of(weights) != 1) throw ValidationError("weights must have gcd 1");
  return {std::move(weights), std::move(degree)};
}

Integer HypersurfaceSingularity::weight_sum() const {
  Integer s = 0;
  for (const auto& w : weights) s += w;
  return s;
}

Integer HypersurfaceSingularity::weight_product() const {
  Integer p = 1;
  for (const auto& w : weights) p *= w;
  return p;
}

Integer HypersurfaceSingularity::weight_min() const { return *std::min_element(weights.begin(), weights.end()); }

Rational HypersurfaceSingularity::mu() const {
  if (!fano()) throw ValidationError("charge normalization requires |w| > d");
  return Rational(Integer(static_cast<long>(n())), form_charge());
}

HypersurfaceSingularity brieskorn(const IntVec& exponents) {
  if (exponents.size() < 2) throw ValidationError("a hypersurface needs at least two exponents");
  Integer l = 1;
  for (const auto& a : exponents) {
    if (a <= 0) throw ValidationError("exponents must be positive");
    l = lcm(l, a);
  }
  IntVec w;
  for (const auto& a : exponents) w.push_back(l / a);
  return HypersurfaceSingularity::make(std::move(w), l);
}

const char* to_string(ScreenVerdict v) {
  switch (v) {
    case ScreenVerdict::PassesScreen: return "passes-screen";
    case ScreenVerdict::Obstructed: return "obstructed";
    case ScreenVerdict::NotFano: return "not-fano";
  }
  return "unknown";
}

ScreenReport screen(const IntVec& weights, const Integer& degree) {
  return screen(HypersurfaceSingularity::make(weights, degree));
}

ScreenReport screen(const HypersurfaceSingularity& h) {
  ScreenReport r;
  r.input = h;
  const std::size_t n = h.n();
  const Integer charge = h.form_charge();
  const Integer nn = Integer(static_cast<long>(n));
  r.fano = charge > 0;
  r.bishop_lhs = h.degree * power(charge, n);
  r.bishop_rhs = h.weight_product() * power(nn, n);
  r.lich_lhs = charge;
  r.lich_rhs = nn * h.weight_min();
  if (!r.fano) {
    r.verdict = ScreenVerdict::NotFano;
    return r;
  }
  r.bishop_obstructed = r.bishop_lhs > r.bishop_rhs;
  r.bishop_equality = r.bishop_lhs == r.bishop_rhs;
  r.lich_obstructed = r.lich_lhs > r.lich_rhs;
  r.lich_equality = r.lich_lhs == r.lich_rhs;
  for (const auto& w : h.weights) r.coordinate_charges.push_back(Rational(nn * w, charge));
  r.volume_ratio = Rational(r.bishop_lhs, r.bishop_rhs);
  r.flat = r.bishop_equality;
  if (r.bishop_obstructed) r.reasons.push_back("bishop");
  if (r.lich_obstructed) r.reasons.push_back("lichnerowicz");
  r.verdict = r.reasons.empty() ? ScreenVerdict::PassesScreen : ScreenVerdict::Obstructed;
  return r;
}

Rational hypersurface_zeta_ratio(const IntVec& weights, const Integer& degree) {
  const auto h = HypersurfaceSingularity::make(weights, degree);
  if (!h.fano()) throw ValidationError("zeta ratio requires |w| > d");
  const Rational mu = h.mu();
  // t^n (1 - e^{-t d mu}) / prod (1 - e^{-t w mu}) = f_{d mu} / prod f_{w mu}, f_a = (1 - e^{-a t}) / t.
  constexpr std::size_t kOrder = 4;
  Series den(kOrder, Rational(0));
  den[0] = 1;
  for (const auto& w : h.weights) den = multiply(den, one_minus_exp_over_t(mu * w, kOrder));
  return divide(one_minus_exp_over_t(mu * h.degree, kOrder), den)[0];
}

HypersurfaceSingularity parse_screen_line(const std::string& text, int line) {
  const auto semi = text.find(';');
  if (semi == std::string::npos || text.find(';', semi + 1) != std::string::npos)
    throw ParseError("expected 'w1,...,wk;d'", line);
  const std::string lhs = text.substr(0, semi);
  IntVec w;
  std::size_t start = 0;
  while (true) {
    const auto comma = lhs.find(',', start);
    w.push_back(parse_positive(lhs.substr(start, comma - start), "weight", line));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  const Integer d = parse_positive(text.substr(semi + 1), "degree", line);
  try {
    return HypersurfaceSingularity::make(std::move(w), d);
  } catch (const ValidationError& e) {
    if (line > 0) throw ValidationError("line " + std::to_string(line) + ": " + e.what());
    throw;
  }
}

std::vector<HypersurfaceSingularity> parse_screen_batch(std::istream& in) {
  std::vector<HypersurfaceSingularity> out;
  std::string text;
  int line = 0;
  while (std::getline(in, text)) {
    ++line;
    const auto hash = text.find('#');
    if (hash != std::string::npos) text.erase(hash);
    if (trim(text).empty()) continue;
    out.push_back(parse_screen_line(text, line));
  }
  return out;
}

std::vector<ScreenReport> screen_batch(const std::vector<HypersurfaceSingularity>& inputs, std::size_t jobs) {
  std::vector<ScreenReport> out(inputs.size());
  jobs = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(1, inputs.size()));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < inputs.size(); i = next++) out[i] = screen(inputs[i]);
  };
  std::vector<std::thread> pool;
  for (std::size_t j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return out;
}

}  // namespace sasaki
