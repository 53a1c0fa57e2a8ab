#include "sasaki/arith.hpp"

#include "sasaki/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

namespace sasaki {

namespace {

Integer abs_int(const Integer& z) { return z < 0 ? Integer(-z) : z; }

// Floor division for signed integers.
Integer floor_div(const Integer& a, const Integer& b) {
  Integer q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

void column_axpy(IntMatrix& m, std::size_t dst, std::size_t src, const Integer& factor) {
  for (auto& row : m) row[dst] -= factor * row[src];
}

void column_swap(IntMatrix& m, std::size_t a, std::size_t b) {
  for (auto& row : m) std::swap(row[a], row[b]);
}

void column_negate(IntMatrix& m, std::size_t c) {
  for (auto& row : m) row[c] = -row[c];
}

template <typename F>
void for_each_subset(std::size_t n, std::size_t k, F&& f) {
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  if (k > n) return;
  while (true) {
    f(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

Integer gcd_of(const IntVec& v) {
  Integer g = 0;
  for (const auto& x : v) g = boost::multiprecision::gcd(g, abs_int(x));
  return g;
}

Integer lcm(const Integer& a, const Integer& b) {
  if (a == 0 || b == 0) return 0;
  return abs_int(a / boost::multiprecision::gcd(a, b) * b);
}

IntVec primitive(IntVec v) {
  const Integer g = gcd_of(v);
  if (g > 1)
    for (auto& x : v) x /= g;
  return v;
}

Integer dot(const IntVec& a, const IntVec& b) {
  Integer s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Rational dot(const RatVec& a, const IntVec& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double dot(const std::vector<double>& a, const IntVec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i].convert_to<double>();
  return s;
}

RatVec to_rational(const IntVec& v) { return RatVec(v.begin(), v.end()); }

std::vector<double> to_double(const IntVec& v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(x.convert_to<double>());
  return out;
}

std::vector<double> to_double(const RatVec& v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(to_double(x));
  return out;
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

IntVec primitive_direction(const RatVec& v) {
  Integer den = 1;
  for (const auto& x : v) den = lcm(den, boost::multiprecision::denominator(x));
  IntVec out;
  out.reserve(v.size());
  for (const auto& x : v)
    out.push_back(boost::multiprecision::numerator(x) * (den / boost::multiprecision::denominator(x)));
  return primitive(std::move(out));
}

IntMatrix transpose(const IntMatrix& a) {
  if (a.empty()) return {};
  IntMatrix t(a[0].size(), IntVec(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
  return t;
}

IntMatrix multiply(const IntMatrix& a, const IntMatrix& b) {
  const std::size_t inner = b.size();
  const std::size_t cols = inner ? b[0].size() : 0;
  IntMatrix out(a.size(), IntVec(cols, 0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < inner; ++k)
      for (std::size_t j = 0; j < cols; ++j) out[i][j] += a[i][k] * b[k][j];
  return out;
}

IntVec multiply(const IntMatrix& a, const IntVec& v) {
  IntVec out(a.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = dot(a[i], v);
  return out;
}

IntMatrix identity_matrix(std::size_t n) {
  IntMatrix m(n, IntVec(n, 0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

Integer determinant(IntMatrix a) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  Integer sign = 1;
  Integer prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < n && a[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(a[k], a[p]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

RatMatrix to_rational(const IntMatrix& a) {
  RatMatrix out;
  out.reserve(a.size());
  for (const auto& row : a) out.push_back(to_rational(row));
  return out;
}

std::size_t rank(const IntMatrix& rows) {
  RatMatrix m = to_rational(rows);
  if (m.empty()) return 0;
  const std::size_t cols = m[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t p = r;
    while (p < m.size() && m[p][c] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[r], m[p]);
    for (std::size_t i = r + 1; i < m.size(); ++i) {
      if (m[i][c] == 0) continue;
      const Rational f = m[i][c] / m[r][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    ++r;
  }
  return r;
}

std::optional<RatMatrix> inverse(RatMatrix a) {
  const std::size_t n = a.size();
  RatMatrix inv(n, RatVec(n, 0));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) return std::nullopt;
    std::swap(a[c], a[p]);
    std::swap(inv[c], inv[p]);
    const Rational piv = a[c][c];
    for (std::size_t j = 0; j < n; ++j) {
      a[c][j] /= piv;
      inv[c][j] /= piv;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || a[i][c] == 0) continue;
      const Rational f = a[i][c];
      for (std::size_t j = 0; j < n; ++j) {
        a[i][j] -= f * a[c][j];
        inv[i][j] -= f * inv[c][j];
      }
    }
  }
  return inv;
}

std::optional<IntMatrix> unimodular_inverse(const IntMatrix& a) {
  const Integer det = determinant(a);
  if (det != 1 && det != -1) return std::nullopt;
  auto inv = inverse(to_rational(a));
  if (!inv) return std::nullopt;
  IntMatrix out(a.size(), IntVec(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) out[i][j] = boost::multiprecision::numerator((*inv)[i][j]);
  return out;
}

ColumnEchelon column_echelon(const IntMatrix& a) {
  ColumnEchelon res;
  res.h = a;
  const std::size_t m = a.size();
  const std::size_t k = m ? a[0].size() : 0;
  res.u = identity_matrix(k);
  std::vector<std::size_t> pivot_rows;
  std::size_t col = 0;
  for (std::size_t i = 0; i < m && col < k; ++i) {
    while (true) {
      std::size_t best = k;
      for (std::size_t j = col; j < k; ++j) {
        if (res.h[i][j] == 0) continue;
        if (best == k || abs_int(res.h[i][j]) < abs_int(res.h[i][best])) best = j;
      }
      if (best == k) break;
      if (best != col) {
        column_swap(res.h, col, best);
        column_swap(res.u, col, best);
      }
      bool done = true;
      for (std::size_t j = col + 1; j < k; ++j) {
        if (res.h[i][j] == 0) continue;
        const Integer q = floor_div(res.h[i][j], res.h[i][col]);
        column_axpy(res.h, j, col, q);
        column_axpy(res.u, j, col, q);
        if (res.h[i][j] != 0) done = false;
      }
      if (done) break;
    }
    if (res.h[i][col] == 0) continue;
    if (res.h[i][col] < 0) {
      column_negate(res.h, col);
      column_negate(res.u, col);
    }
    // Reduce earlier columns modulo the new pivot so the form is canonical.
    for (std::size_t j = 0; j < col; ++j) {
      const Integer q = floor_div(res.h[i][j], res.h[i][col]);
      if (q != 0) {
        column_axpy(res.h, j, col, q);
        column_axpy(res.u, j, col, q);
      }
    }
    pivot_rows.push_back(i);
    ++col;
  }
  res.rank = col;
  return res;
}

IntMatrix integer_kernel(const IntMatrix& a) {
  if (a.empty()) return {};
  const auto ech = column_echelon(a);
  const std::size_t k = a[0].size();
  IntMatrix basis;
  for (std::size_t j = ech.rank; j < k; ++j) {
    IntVec col(k);
    for (std::size_t r = 0; r < k; ++r) col[r] = ech.u[r][j];
    basis.push_back(std::move(col));
  }
  if (basis.empty()) return basis;
  return row_hermite(std::move(basis));
}

IntMatrix row_hermite(IntMatrix a) {
  if (a.empty()) return a;
  const auto ech = column_echelon(transpose(a));
  IntMatrix t = transpose(ech.h);
  t.resize(ech.rank);
  return t;
}

std::optional<IntVec> solve_integer(const IntMatrix& a, const IntVec& b) {
  const std::size_t m = a.size();
  if (m == 0) return IntVec{};
  const std::size_t k = a[0].size();
  const auto ech = column_echelon(a);
  IntVec y(k, 0);
  std::size_t j = 0;
  for (std::size_t i = 0; i < m && j < ech.rank; ++i) {
    if (ech.h[i][j] == 0) continue;
    Integer rest = b[i];
    for (std::size_t c = 0; c < j; ++c) rest -= ech.h[i][c] * y[c];
    if (rest % ech.h[i][j] != 0) return std::nullopt;
    y[j] = rest / ech.h[i][j];
    ++j;
  }
  for (std::size_t i = 0; i < m; ++i) {
    Integer s = 0;
    for (std::size_t c = 0; c < ech.rank; ++c) s += ech.h[i][c] * y[c];
    if (s != b[i]) return std::nullopt;
  }
  return multiply(ech.u, y);
}

IntMatrix complete_to_unimodular(const IntVec& row) {
  if (gcd_of(row) != 1) throw ValidationError("vector " + to_string(row) + " is not primitive");
  const auto ech = column_echelon(IntMatrix{row});
  auto inv = unimodular_inverse(ech.u);
  if (!inv) throw InternalError("column reduction produced a non-unimodular transform");
  return *inv;
}

Integer lattice_index(const IntMatrix& rows) {
  if (rows.empty()) return 1;
  const std::size_t r = rank(rows);
  if (r == 0) return 1;
  const std::size_t cols = rows[0].size();
  Integer g = 0;
  for_each_subset(rows.size(), r, [&](const std::vector<std::size_t>& ri) {
    for_each_subset(cols, r, [&](const std::vector<std::size_t>& ci) {
      IntMatrix minor(r, IntVec(r));
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) minor[i][j] = rows[ri[i]][ci[j]];
      g = boost::multiprecision::gcd(g, abs_int(determinant(std::move(minor))));
    });
  });
  return g;
}

bool is_perfect_square(const Integer& x) {
  if (x < 0) return false;
  const Integer s = boost::multiprecision::sqrt(x);
  return s * s == x;
}

Rational best_rational(double x, std::int64_t max_den) {
  // Convergents h_k / k_k of the continued fraction of x.
  Integer h_prev = 1, h = static_cast<std::int64_t>(std::floor(x));
  Integer k_prev = 0, k = 1;
  double frac = x - std::floor(x);
  for (int iter = 0; iter < 64 && frac > 1e-15; ++iter) {
    const double inv = 1.0 / frac;
    const auto a = static_cast<std::int64_t>(std::floor(inv));
    const Integer k_next = a * k + k_prev;
    if (k_next > max_den) break;
    const Integer h_next = a * h + h_prev;
    h_prev = h;
    h = h_next;
    k_prev = k;
    k = k_next;
    frac = inv - static_cast<double>(a);
  }
  return Rational(h, k);
}

Integer parse_integer(const std::string& text) {
  std::size_t pos = 0;
  bool negative = false;
  if (!text.empty() && (text[0] == '+' || text[0] == '-')) negative = text[pos++] == '-';
  if (pos == text.size() || !std::all_of(text.begin() + static_cast<std::ptrdiff_t>(pos), text.end(),
                                         [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    throw ParseError("expected an integer, got '" + text + "'");
  // Leading zeros would select octal in the Integer string constructor.
  const auto first = text.find_first_not_of('0', pos);
  const Integer value(first == std::string::npos ? std::string("0") : text.substr(first));
  return negative ? Integer(-value) : value;
}

Rational parse_rational(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw ParseError("empty number");
  const auto slash = s.find('/');
  try {
    if (slash != std::string::npos) {
      const Integer num = parse_integer(s.substr(0, slash));
      const Integer den = parse_integer(s.substr(slash + 1));
      if (den == 0) throw ParseError("zero denominator in '" + text + "'");
      return Rational(num, den);
    }
    std::size_t pos = 0;
    bool negative = false;
    if (s[pos] == '+' || s[pos] == '-') negative = s[pos++] == '-';
    std::string digits;
    long exponent = 0;
    bool seen_point = false;
    bool any_digit = false;
    for (; pos < s.size(); ++pos) {
      const char c = s[pos];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        digits.push_back(c);
        any_digit = true;
        if (seen_point) --exponent;
      } else if (c == '.' && !seen_point) {
        seen_point = true;
      } else if (c == 'e' || c == 'E') {
        exponent += std::stol(s.substr(pos + 1));
        pos = s.size();
        break;
      } else {
        throw ParseError("invalid number '" + text + "'");
      }
    }
    if (!any_digit) throw ParseError("invalid number '" + text + "'");
    // Leading zeros would select octal in the Integer string constructor.
    const auto first = digits.find_first_not_of('0');
    digits = first == std::string::npos ? "0" : digits.substr(first);
    Rational value{Integer(digits)};
    Integer scale = boost::multiprecision::pow(Integer(10), static_cast<unsigned>(std::labs(exponent)));
    if (exponent >= 0) {
      value *= scale;
    } else {
      value /= scale;
    }
    return negative ? Rational(-value) : value;
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception&) {
    throw ParseError("invalid number '" + text + "'");
  }
}

std::string to_string(const Integer& z) { return z.str(); }

std::string to_string(const Rational& q) { return q.str(); }

std::string to_string(const IntVec& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += v[i].str();
  }
  return out + ")";
}

}  // namespace sasaki
