#include "sasaki/lattice_cone.hpp"

#include "sasaki/errors.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <set>
#include <sstream>

namespace sasaki {

namespace {

constexpr std::size_t kMaxNormals = 64;
constexpr std::size_t kMaxEquivalenceFacets = 10;

struct TrackedRay {
  IntVec v;
  std::uint64_t tight = 0;
};

IntMatrix select_rows(const IntMatrix& rows, std::uint64_t mask) {
  IntMatrix out;
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (mask & (std::uint64_t{1} << i)) out.push_back(rows[i]);
  return out;
}

std::uint64_t tight_mask(const IntMatrix& rows, const IntVec& y) {
  std::uint64_t mask = 0;
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (dot(rows[i], y) == 0) mask |= std::uint64_t{1} << i;
  return mask;
}

std::vector<std::size_t> mask_indices(std::uint64_t mask) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; mask; ++i, mask >>= 1)
    if (mask & 1) out.push_back(i);
  return out;
}

// Column-matrix inverse helper: returns columns of A_sel^{-1} as primitive
// integer rays of the simplicial cone {y : A_sel y >= 0}.
std::vector<IntVec> simplicial_rays(const IntMatrix& basis_rows) {
  auto inv = inverse(to_rational(basis_rows));
  if (!inv) throw InternalError("simplicial basis is singular");
  const std::size_t n = basis_rows.size();
  std::vector<IntVec> rays;
  for (std::size_t j = 0; j < n; ++j) {
    RatVec col(n);
    for (std::size_t i = 0; i < n; ++i) col[i] = (*inv)[i][j];
    rays.push_back(primitive_direction(col));
  }
  return rays;
}

}  // namespace

IntMatrix dual_cone(const IntMatrix& generators) {
  if (generators.empty()) throw NotStrictlyConvex("no generators");
  const std::size_t n = generators[0].size();
  if (generators.size() > kMaxNormals) throw ValidationError("more than 64 generators");
  for (const auto& g : generators) {
    if (g.size() != n) throw ValidationError("generators of mixed dimension");
  }
  if (rank(generators) < n)
    throw NotStrictlyConvex("generators do not span; the dual cone contains a line");

  // Greedy basis of n independent rows.
  std::vector<std::size_t> basis;
  IntMatrix basis_rows;
  for (std::size_t i = 0; i < generators.size() && basis.size() < n; ++i) {
    basis_rows.push_back(generators[i]);
    if (rank(basis_rows) == basis_rows.size()) {
      basis.push_back(i);
    } else {
      basis_rows.pop_back();
    }
  }

  std::uint64_t processed = 0;
  for (auto i : basis) processed |= std::uint64_t{1} << i;

  std::vector<TrackedRay> rays;
  for (auto& r : simplicial_rays(basis_rows)) {
    TrackedRay t{std::move(r), 0};
    t.tight = tight_mask(generators, t.v) & processed;
    rays.push_back(std::move(t));
  }

  for (std::size_t a = 0; a < generators.size(); ++a) {
    if (processed & (std::uint64_t{1} << a)) continue;
    const IntVec& row = generators[a];
    const std::uint64_t bit = std::uint64_t{1} << a;
    std::vector<TrackedRay> pos, neg, next;
    std::vector<Integer> pos_val, neg_val;
    for (auto& r : rays) {
      const Integer s = dot(row, r.v);
      if (s > 0) {
        pos_val.push_back(s);
        pos.push_back(r);
      } else if (s < 0) {
        neg_val.push_back(s);
        neg.push_back(r);
      } else {
        r.tight |= bit;
        next.push_back(r);
      }
    }
    for (std::size_t p = 0; p < pos.size(); ++p) {
      for (std::size_t q = 0; q < neg.size(); ++q) {
        const std::uint64_t common = pos[p].tight & neg[q].tight;
        if (static_cast<std::size_t>(std::popcount(common)) + 2 < n) continue;
        if (rank(select_rows(generators, common)) != n - 2) continue;
        IntVec combo(n);
        for (std::size_t k = 0; k < n; ++k)
          combo[k] = pos_val[p] * neg[q].v[k] - neg_val[q] * pos[p].v[k];
        next.push_back({primitive(std::move(combo)), common | bit});
      }
    }
    for (auto& r : pos) next.push_back(std::move(r));
    rays = std::move(next);
    processed |= bit;
  }

  IntMatrix out;
  for (auto& r : rays) out.push_back(std::move(r.v));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (out.empty() || rank(out) < n)
    throw NotStrictlyConvex("the dual cone is not full-dimensional; the fan contains a line");
  return out;
}

MomentCone MomentCone::from_normals(IntMatrix normals) {
  if (normals.empty()) throw ValidationError("cone has no facet normals");
  const std::size_t n = normals[0].size();
  if (n < 2) throw ValidationError("cone dimension must be at least 2");
  for (auto& v : normals) {
    if (v.size() != n) throw ValidationError("normal " + to_string(v) + " has the wrong dimension");
    if (gcd_of(v) == 0) throw ValidationError("zero normal");
    v = primitive(std::move(v));
  }
  std::sort(normals.begin(), normals.end());
  if (std::adjacent_find(normals.begin(), normals.end()) != normals.end())
    throw ValidationError("duplicate facet normal");

  MomentCone cone;
  cone.dim_ = n;
  cone.rays_ = dual_cone(normals);
  cone.normals_ = std::move(normals);
  for (const auto& r : cone.rays_) cone.incidence_.push_back(tight_mask(cone.normals_, r));

  // Every normal must support a facet: its tight rays span a hyperplane.
  for (std::size_t a = 0; a < cone.normals_.size(); ++a) {
    IntMatrix on_facet;
    for (std::size_t r = 0; r < cone.rays_.size(); ++r)
      if (cone.incidence_[r] & (std::uint64_t{1} << a)) on_facet.push_back(cone.rays_[r]);
    if (rank(on_facet) != n - 1)
      throw ValidationError("normal " + to_string(cone.normals_[a]) + " does not define a facet");
  }

  cone.good_ = is_good(cone).good;
  try {
    cone.basis_ = gorenstein_normalize(cone);
    cone.gorenstein_ = true;
  } catch (const NotGorenstein&) {
    cone.gorenstein_ = false;
  }
  return cone;
}

bool MomentCone::in_gorenstein_form() const {
  return std::all_of(normals_.begin(), normals_.end(), [](const IntVec& v) { return v[0] == 1; });
}

std::string MomentCone::to_text() const {
  std::ostringstream out;
  out << "dim " << dim_ << "\n";
  for (const auto& v : normals_) {
    out << "normal";
    for (const auto& x : v) out << ' ' << x;
    out << "\n";
  }
  return out.str();
}

MomentCone parse_cone(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  std::optional<std::size_t> dim;
  IntMatrix normals;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string key;
    if (!(fields >> key)) continue;
    std::vector<std::string> tokens;
    for (std::string tok; fields >> tok;) tokens.push_back(tok);
    auto to_int = [&](const std::string& tok) {
      try {
        return parse_integer(tok);
      } catch (const ParseError&) {
        throw ParseError("expected an integer, got '" + tok + "'", line_no);
      }
    };
    if (key == "dim") {
      if (dim) throw ParseError("duplicate 'dim' line", line_no);
      if (tokens.size() != 1) throw ParseError("'dim' takes exactly one integer", line_no);
      const Integer d = to_int(tokens[0]);
      if (d < 2 || d > 16) throw ParseError("dimension must be between 2 and 16", line_no);
      dim = d.convert_to<std::size_t>();
    } else if (key == "normal") {
      if (!dim) throw ParseError("'normal' before 'dim'", line_no);
      if (tokens.size() != *dim)
        throw ParseError("normal has " + std::to_string(tokens.size()) + " entries, expected " + std::to_string(*dim), line_no);
      IntVec v;
      for (const auto& tok : tokens) v.push_back(to_int(tok));
      if (gcd_of(v) == 0) throw ParseError("zero normal", line_no);
      normals.push_back(std::move(v));
    } else {
      throw ParseError("unknown keyword '" + key + "'", line_no);
    }
  }
  if (!dim) throw ParseError("missing 'dim' line");
  if (normals.empty()) throw ParseError("no 'normal' lines");
  return MomentCone::from_normals(std::move(normals));
}

MomentCone load_cone(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open cone file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_cone(buf.str());
}

std::vector<std::vector<std::size_t>> cone_faces(const MomentCone& cone) {
  // Closure of the ray tight sets under intersection.
  std::set<std::uint64_t> faces(cone.ray_incidence().begin(), cone.ray_incidence().end());
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<std::uint64_t> current(faces.begin(), faces.end());
    for (std::size_t i = 0; i < current.size(); ++i)
      for (std::size_t j = i + 1; j < current.size(); ++j) {
        const std::uint64_t meet = current[i] & current[j];
        if (meet && faces.insert(meet).second) grew = true;
      }
  }

  std::vector<std::vector<std::size_t>> ordered;
  for (auto mask : faces) ordered.push_back(mask_indices(mask));
  std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a < b;
  });
  return ordered;
}

GoodnessResult is_good(const MomentCone& cone) {
  const auto ordered = cone_faces(cone);
  GoodnessResult res;
  for (const auto& face : ordered) {
    IntMatrix gens;
    for (auto a : face) gens.push_back(cone.normals()[a]);
    const Integer index = lattice_index(gens);
    if (index != 1) {
      res.good = false;
      res.witness_face = face;
      res.witness_index = index;
      return res;
    }
  }
  return res;
}

GorensteinBasis gorenstein_normalize(const MomentCone& cone) {
  const std::size_t n = cone.dim();
  GorensteinBasis out;
  if (cone.in_gorenstein_form()) {
    out.m = identity_matrix(n);
    for (const auto& v : cone.normals()) out.w.emplace_back(v.begin() + 1, v.end());
    return out;
  }
  const auto gamma = solve_integer(cone.normals(), IntVec(cone.facet_count(), 1));
  if (!gamma) throw NotGorenstein("no integer covector pairs to 1 with every normal");
  const IntMatrix m0 = complete_to_unimodular(*gamma);

  std::vector<IntVec> w;
  for (const auto& v : cone.normals()) {
    const IntVec img = multiply(m0, v);
    w.emplace_back(img.begin() + 1, img.end());
  }
  // Translate w_0 to the origin and put the differences in Hermite form.
  const IntVec origin = w.front();
  IntMatrix diffs(n - 1, IntVec(w.size()));
  for (std::size_t a = 0; a < w.size(); ++a)
    for (std::size_t i = 0; i + 1 < n; ++i) diffs[i][a] = w[a][i] - origin[i];
  const IntMatrix a = transpose(column_echelon(transpose(diffs)).u);
  const IntVec shift = multiply(a, origin);

  IntMatrix t = identity_matrix(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    t[i + 1][0] = -shift[i];
    for (std::size_t j = 0; j + 1 < n; ++j) t[i + 1][j + 1] = a[i][j];
  }
  out.m = multiply(t, m0);
  for (const auto& v : cone.normals()) {
    const IntVec img = multiply(out.m, v);
    if (img[0] != 1) throw InternalError("Gorenstein basis does not put normals at height 1");
    out.w.emplace_back(img.begin() + 1, img.end());
  }
  return out;
}

MomentCone transform(const MomentCone& cone, const IntMatrix& m) {
  IntMatrix normals;
  for (const auto& v : cone.normals()) normals.push_back(multiply(m, v));
  return MomentCone::from_normals(std::move(normals));
}

MomentCone gorenstein_form(const MomentCone& cone) {
  if (cone.in_gorenstein_form()) return cone;
  const auto& basis = cone.gorenstein_basis();
  if (!basis) throw NotGorenstein("cone is not Gorenstein");
  return transform(cone, basis->m);
}

ChargeMatrix kernel_charges(const MomentCone& cone) {
  return ChargeMatrix{integer_kernel(transpose(cone.normals()))};
}

std::optional<IntMatrix> find_lattice_map(const IntMatrix& from, const IntMatrix& to) {
  if (from.size() != to.size() || from.empty()) return std::nullopt;
  const std::size_t n = from[0].size();
  if (to[0].size() != n) return std::nullopt;

  std::vector<std::size_t> basis;
  IntMatrix basis_rows;
  for (std::size_t i = 0; i < from.size() && basis.size() < n; ++i) {
    basis_rows.push_back(from[i]);
    if (rank(basis_rows) == basis_rows.size()) {
      basis.push_back(i);
    } else {
      basis_rows.pop_back();
    }
  }
  if (basis.size() < n) return std::nullopt;
  // Columns of the source basis; M = B * A^{-1}.
  const auto a_inv = inverse(to_rational(transpose(basis_rows)));
  if (!a_inv) return std::nullopt;

  std::set<IntVec> target(to.begin(), to.end());
  if (target.size() != to.size()) return std::nullopt;

  std::vector<std::size_t> choice(n, 0);
  std::vector<bool> used(to.size(), false);

  std::optional<IntMatrix> found;
  auto attempt = [&]() {
    IntMatrix b(n, IntVec(n));
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i) b[i][j] = to[choice[j]][i];
    IntMatrix m(n, IntVec(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        Rational s = 0;
        for (std::size_t k = 0; k < n; ++k) s += b[i][k] * (*a_inv)[k][j];
        if (boost::multiprecision::denominator(s) != 1) return false;
        m[i][j] = boost::multiprecision::numerator(s);
      }
    const Integer det = determinant(m);
    if (det != 1 && det != -1) return false;
    for (const auto& v : from)
      if (!target.count(multiply(m, v))) return false;
    found = std::move(m);
    return true;
  };

  // Depth-first over injective assignments of the source basis.
  auto search = [&](auto&& self, std::size_t depth) -> bool {
    if (depth == n) return attempt();
    for (std::size_t t = 0; t < to.size(); ++t) {
      if (used[t]) continue;
      used[t] = true;
      choice[depth] = t;
      if (self(self, depth + 1)) return true;
      used[t] = false;
    }
    return false;
  };
  search(search, 0);
  return found;
}

std::optional<IntMatrix> cones_equivalent(const MomentCone& a, const MomentCone& b) {
  if (a.dim() != b.dim() || a.facet_count() != b.facet_count()) return std::nullopt;
  if (a.facet_count() > kMaxEquivalenceFacets)
    throw CapacityExceeded("equivalence search is capped at " + std::to_string(kMaxEquivalenceFacets) + " facets");
  return find_lattice_map(a.fan_rays(), b.fan_rays());
}

}  // namespace sasaki
