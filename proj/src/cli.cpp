#include "sasaki/cli.hpp"

#include "sasaki/errors.hpp"
#include "sasaki/families.hpp"
#include "sasaki/hypersurface.hpp"
#include "sasaki/metric_potential.hpp"
#include "sasaki/reeb_solver.hpp"
#include "sasaki/report.hpp"
#include "sasaki/spectral_zeta.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

namespace sasaki {

namespace {

// Warning codes double as ledger keys.
const Warning kYpqDenominator{
    "W-YPQ-DENOM",
    "closed-form Y^{p,q} volume uses p * sqrt(4p^2 - 3q^2) in the denominator; the variant without the factor p "
    "disagrees with the solver and is negative for some (p, q)"};
const Warning kOrbifold{"W-ORBIFOLD",
                        "cone is not good: the link is an orbifold and the critical Reeb vector is reported regardless"};
const Warning kZetaCapacity{"W-ZETA-CAPACITY",
                            "fewer extrapolation levels than requested fit the lattice point cap; the error bar is weaker"};

struct Outcome {
  Json results = Json::object();
  std::vector<Warning> warnings;
  int exit_code = kExitOk;
  std::string summary;
};

class Inputs {
 public:
  explicit Inputs(std::uint64_t seed) : digest_(seed) {}

  std::string read(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot read '" + path + "'");
    std::ostringstream s;
    s << in.rdbuf();
    digest_ = fnv1a(s.str(), digest_);
    return s.str();
  }

  MomentCone cone(const std::string& path) { return parse_cone(read(path)); }
  std::uint64_t digest() const { return digest_; }

 private:
  std::uint64_t digest_;
};

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonConvergence:
    case ErrorKind::CapacityExceeded:
    case ErrorKind::NonConvex:
      return kExitNumerical;
    case ErrorKind::Internal:
      return kExitInternal;
    default:
      return kExitInvalid;
  }
}

std::string join(const std::vector<double>& xs) {
  std::ostringstream s;
  s.precision(12);
  for (std::size_t i = 0; i < xs.size(); ++i) s << (i ? ", " : "") << xs[i];
  return s.str();
}

std::string describe(const ReebVector& xi) {
  if (!xi.exact) return "(" + join(xi.components) + ")";
  std::string s = "(";
  for (std::size_t i = 0; i < xi.exact->size(); ++i) s += (i ? ", " : "") + to_string((*xi.exact)[i]);
  return s + ")";
}

Json cone_summary(const MomentCone& cone) {
  Json j;
  j["dim"] = cone.dim();
  j["normals"] = integer_rows(cone.normals());
  j["rays"] = integer_rows(cone.rays());
  return j;
}

Json solve_json(const MomentCone& cone, const CriticalPoint& cp, const RegularityReport& reg, double tol) {
  Json j;
  j["xi_star"] = reeb(cp.xi_star);
  if (cp.sphere_ratio_exact) {
    const Rational vol = volume_delta_exact(decompose(cone), *cp.xi_star.exact);
    j["vol_delta"] = exact(vol);
    j["sphere_ratio"] = exact(*cp.sphere_ratio_exact);
  } else {
    j["vol_delta"] = iterative(cp.vol_report.vol_delta, tol);
    j["sphere_ratio"] = iterative(cp.vol_report.sphere_ratio, tol);
  }
  j["vol_link"] = real(cp.vol_report.vol_link);
  j["grad_norm"] = real(cp.grad_norm);
  j["newton_iters"] = cp.newton_iters;
  j["gradient_steps"] = cp.gradient_steps;
  j["hessian_min_eig"] = real(cp.hessian_min_eig);
  Json r;
  r["kind"] = to_string(reg.kind);
  r["basis"] = reg.basis;
  if (!reg.approximations.empty()) {
    Json a = Json::array();
    for (const auto& x : reg.approximations)
      a.push_back({{"max_denominator", x.max_denominator}, {"xi_over_n", exacts(x.xi_over_n)}, {"residual", real(x.residual)}});
    r["approximations"] = a;
  }
  j["regularity"] = r;
  return j;
}

std::string ratio_text(const CriticalPoint& cp) {
  if (cp.sphere_ratio_exact) return to_string(*cp.sphere_ratio_exact);
  std::ostringstream s;
  s.precision(12);
  s << cp.vol_report.sphere_ratio;
  return s.str();
}

Json screen_json(const ScreenReport& r) {
  Json j;
  j["weights"] = integers(r.input.weights);
  j["degree"] = exact(r.input.degree);
  j["n"] = r.input.n();
  j["fano"] = r.fano;
  j["bishop"] = {{"lhs", exact(r.bishop_lhs)},
                 {"rhs", exact(r.bishop_rhs)},
                 {"obstructed", r.bishop_obstructed},
                 {"equality", r.bishop_equality}};
  j["lichnerowicz"] = {{"lhs", exact(r.lich_lhs)},
                       {"rhs", exact(r.lich_rhs)},
                       {"obstructed", r.lich_obstructed},
                       {"equality", r.lich_equality}};
  if (r.fano) {
    j["coordinate_charges"] = exacts(r.coordinate_charges);
    j["volume_ratio"] = exact(*r.volume_ratio);
    j["zeta_ratio"] = exact(hypersurface_zeta_ratio(r.input.weights, r.input.degree));
  }
  j["flat"] = r.flat;
  j["verdict"] = to_string(r.verdict);
  j["reasons"] = r.reasons;
  return j;
}

Rational rational_option(const std::string& text) { return parse_rational(text); }

SolverOptions solver_options(const std::string& tol, int max_iter) {
  SolverOptions o;
  o.tol = to_double(rational_option(tol));
  o.max_iter = max_iter;
  return o;
}

Json lichnerowicz_json(const LichnerowiczReport& l) {
  return {{"min_charge", real(l.min_charge)},
          {"witness", l.witness},
          {"multiplicity", l.multiplicity},
          {"eigenvalue", real(l.eigenvalue)},
          {"obstructed", l.obstructed}};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Reeb vector, volume and obstruction toolkit for toric Kähler cones", "sasaki"};
  app.require_subcommand(1);
  app.fallthrough();
  bool json = false, quiet = false;
  app.add_flag("--json", json, "Machine-readable JSON report");
  app.add_flag("--quiet", quiet, "No summary on standard error");

  std::string cone_path, cone_path2, xi_text, tol = "1e-10", y_text, weights, degree, exponents, batch;
  int max_iter = 200, levels = 6, samples = 100;
  std::string t0 = "0";
  std::size_t budget = ZetaSchedule{}.budget, jobs = 1;
  std::uint64_t seed = 1;
  std::int64_t p = 0, q = 0, a = 0, b = 0, c = 0;

  auto* check = app.add_subcommand("check", "Validate a cone file and report its flags");
  check->add_option("cone", cone_path, "Cone file")->required();

  auto* solve = app.add_subcommand("solve", "Minimise the Reeb polytope volume");
  solve->add_option("cone", cone_path, "Cone file")->required();
  solve->add_option("--tol", tol, "Gradient tolerance");
  solve->add_option("--max-iter", max_iter, "Iteration limit");

  auto* zeta = app.add_subcommand("zeta", "Extrapolate t^n Z(t) to t = 0");
  zeta->add_option("cone", cone_path, "Cone file")->required();
  zeta->add_option("--xi", xi_text, "Reeb vector, comma separated")->required();
  zeta->add_option("--levels", levels, "Maximum number of t levels");
  zeta->add_option("--t0", t0, "Largest t; 0 selects the schedule automatically");
  zeta->add_option("--budget", budget, "Lattice point budget of the automatic schedule");

  auto* family = app.add_subcommand("family", "Build and solve a named family");
  family->require_subcommand(1);
  auto* ypq = family->add_subcommand("ypq", "Y^{p,q}");
  ypq->add_option("-p", p)->required();
  ypq->add_option("-q", q)->required();
  auto* labc = family->add_subcommand("labc", "L^{a,b,c}");
  labc->add_option("-a", a)->required();
  labc->add_option("-b", b)->required();
  labc->add_option("-c", c)->required();

  auto* screen_cmd = app.add_subcommand("screen", "Bishop and Lichnerowicz screen of weighted hypersurfaces");
  auto* w_opt = screen_cmd->add_option("--weights", weights, "w1,...,w_{n+1}");
  auto* d_opt = screen_cmd->add_option("--degree", degree, "Degree d");
  auto* e_opt = screen_cmd->add_option("--exponents", exponents, "Brieskorn exponents a1,...,a_{n+1}");
  auto* b_opt = screen_cmd->add_option("--batch", batch, "File of 'w1,...;d' lines");
  screen_cmd->add_option("--jobs", jobs, "Worker threads for --batch");
  w_opt->needs(d_opt);
  d_opt->needs(w_opt);
  w_opt->excludes(e_opt)->excludes(b_opt);
  e_opt->excludes(b_opt);

  auto* equiv = app.add_subcommand("equiv", "Decide lattice equivalence of two cones");
  equiv->add_option("cone", cone_path, "First cone file")->required();
  equiv->add_option("other", cone_path2, "Second cone file")->required();

  auto* futaki = app.add_subcommand("futaki", "Volume gradient obstruction at a Reeb vector");
  futaki->add_option("cone", cone_path, "Cone file")->required();
  futaki->add_option("--xi", xi_text, "Reeb vector, comma separated")->required();

  auto* probe = app.add_subcommand("potential-probe", "Evaluate the symplectic potential metric blocks");
  probe->add_option("cone", cone_path, "Cone file")->required();
  probe->add_option("--xi", xi_text, "Reeb vector (default: the critical one)");
  probe->add_option("--y", y_text, "Evaluation point (default: random interior samples)");
  probe->add_option("--samples", samples, "Number of random samples");
  probe->add_option("--seed", seed, "Sampling seed");

  std::string command;
  for (std::size_t i = 0; i < args.size(); ++i) command += (i ? " " : "") + args[i];
  std::uint64_t arg_hash = 0xcbf29ce484222325ULL;
  for (const auto& s : args) arg_hash = fnv1a(std::string_view(s.c_str(), s.size() + 1), arg_hash);

  Report report;
  report.command = command;
  report.input_digest = fnv1a_hex(arg_hash);
  int code = kExitOk;
  std::string summary;

  const auto emit = [&] {
    out << (json ? to_json(report).dump(2) + "\n" : to_text(report));
    if (!quiet && !summary.empty()) err << summary << "\n";
    return code;
  };

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    // A subcommand's help request surfaces as CallForHelp above; everything else is a usage error.
    report.error = ReportError{to_string(ErrorKind::Parse), e.what()};
    code = kExitInvalid;
    summary = std::string("error: ") + e.what();
    return emit();
  }

  Inputs inputs(arg_hash);
  const auto start = std::chrono::steady_clock::now();
  try {
    Outcome o;
    if (check->parsed()) {
      const auto cone = inputs.cone(cone_path);
      o.results = cone_summary(cone);
      o.results["facet_count"] = cone.facet_count();
      o.results["strictly_convex"] = cone.strictly_convex();
      o.results["gorenstein"] = cone.gorenstein() ? Json(*cone.gorenstein()) : Json();
      o.results["in_gorenstein_form"] = cone.in_gorenstein_form();
      if (cone.gorenstein_basis()) o.results["gorenstein_basis"] = integer_rows(cone.gorenstein_basis()->m);
      const auto good = is_good(cone);
      o.results["good"] = good.good;
      if (!good.good) {
        o.results["goodness_witness"] = {{"face", good.witness_face}, {"index", exact(good.witness_index)}};
        o.warnings.push_back(kOrbifold);
      }
      o.results["charges"] = integer_rows(kernel_charges(cone).rows);
      o.results["face_count"] = cone_faces(cone).size();
      o.summary = "check: " + std::string(good.good ? "good" : "not good") + " cone with " +
                  std::to_string(cone.facet_count()) + " facets";
    } else if (solve->parsed()) {
      const auto cone = inputs.cone(cone_path);
      const auto opts = solver_options(tol, max_iter);
      const auto cp = minimize_volume(cone, opts);
      o.results = solve_json(cone, cp, classify_regularity(cone, cp), opts.tol);
      if (!is_good(cone).good) o.warnings.push_back(kOrbifold);
      o.summary = "solve: sphere_ratio = " + ratio_text(cp) + " at xi* = " + describe(cp.xi_star);
    } else if (zeta->parsed()) {
      const auto cone = inputs.cone(cone_path);
      const auto xi = parse_reeb(xi_text);
      ZetaSchedule s;
      s.t0 = to_double(rational_option(t0));
      s.levels = levels;
      s.budget = budget;
      const auto est = zeta_limit(cone, xi, s);
      const double ratio = evaluate_volume(decompose(cone), xi).sphere_ratio;
      o.results["xi"] = reeb(xi);
      o.results["cutoff"] = real(est.cutoff);
      o.results["point_count"] = est.point_count;
      Json samples_json = Json::array();
      for (const auto& smp : est.samples) samples_json.push_back({{"t", smp.t}, {"value", real(smp.value)}});
      o.results["samples"] = samples_json;
      o.results["extrapolated_limit"] = extrapolated(est.extrapolated_limit, est.error_bar);
      o.results["sphere_ratio"] = real(ratio);
      o.results["difference"] = real(est.extrapolated_limit - ratio);
      o.results["pole_radius"] = real(est.pole_radius);
      o.results["min_charge"] = real(est.min_charge);
      o.results["eigenvalue_min"] = real(est.eigenvalue_min);
      o.results["capacity_limited"] = est.capacity_limited;
      o.results["lichnerowicz"] = lichnerowicz_json(lichnerowicz_scan(cone, xi));
      if (est.capacity_limited) o.warnings.push_back(kZetaCapacity);
      std::ostringstream s2;
      s2.precision(8);
      s2 << "zeta: limit " << est.extrapolated_limit << " +- " << est.error_bar << " vs sphere_ratio " << ratio;
      o.summary = s2.str();
    } else if (family->parsed()) {
      std::optional<FamilySpec> spec;
      MomentCone cone = [&] {
        if (ypq->parsed()) {
          spec = FamilySpec::ypq(p, q);
          return ypq_cone(p, q);
        }
        spec = FamilySpec::labc(a, b, c);
        const auto l = labc_cone(a, b, c);
        o.results["charges"] = integers(l.charges);
        o.results["coprime"] = l.coprime;
        if (!l.coprime) o.warnings.push_back(kOrbifold);
        return l.cone;
      }();
      Json head;
      head["family"] = spec->label();
      head.update(cone_summary(cone));
      head.update(o.results);
      o.results = head;
      o.results["good"] = is_good(cone).good;
      const SolverOptions opts;
      const auto cp = minimize_volume(cone, opts);
      o.results["solve"] = solve_json(cone, cp, classify_regularity(cone, cp, spec), opts.tol);
      if (ypq->parsed()) {
        // vol(S^5) = pi^3, so the closed form is already a sphere ratio.
        o.results["closed_form"] = {{"sphere_ratio", real(ypq_volume(p, q))},
                                    {"without_factor_p", real(ypq_volume_unscaled_radical(p, q))},
                                    {"discriminant", 4 * p * p - 3 * q * q},
                                    {"quasi_regular", ypq_is_quasiregular(p, q)}};
        o.warnings.push_back(kYpqDenominator);
      }
      o.summary = "family " + spec->label() + ": sphere_ratio = " + ratio_text(cp);
    } else if (screen_cmd->parsed()) {
      std::vector<HypersurfaceSingularity> items;
      if (!batch.empty()) {
        std::istringstream in(inputs.read(batch));
        items = parse_screen_batch(in);
      } else if (!exponents.empty()) {
        IntVec e;
        std::istringstream list(exponents);
        for (std::string item; std::getline(list, item, ',');) e.push_back(parse_integer(item));
        items.push_back(brieskorn(e));
      } else if (!weights.empty()) {
        items.push_back(parse_screen_line(weights + ";" + degree));
      } else {
        throw ValidationError("screen needs --weights with --degree, --exponents or --batch");
      }
      const auto reports = screen_batch(items, jobs);
      std::size_t obstructed = 0;
      for (const auto& r : reports) obstructed += r.verdict == ScreenVerdict::Obstructed;
      if (batch.empty()) {
        o.results = screen_json(reports.front());
        o.summary = std::string("screen: ") + to_string(reports.front().verdict);
      } else {
        Json list = Json::array();
        for (const auto& r : reports) list.push_back(screen_json(r));
        o.results["count"] = reports.size();
        o.results["obstructed"] = obstructed;
        o.results["reports"] = list;
        o.summary = "screen: " + std::to_string(obstructed) + " of " + std::to_string(reports.size()) + " obstructed";
      }
      if (obstructed > 0) o.exit_code = kExitObstructed;
    } else if (equiv->parsed()) {
      const auto first = inputs.cone(cone_path);
      const auto second = inputs.cone(cone_path2);
      const auto m = cones_equivalent(first, second);
      o.results["equivalent"] = m.has_value();
      if (m) o.results["map"] = integer_rows(*m);
      o.summary = std::string("equiv: ") + (m ? "equivalent" : "not equivalent");
    } else if (futaki->parsed()) {
      const auto cone = inputs.cone(cone_path);
      const auto xi = parse_reeb(xi_text);
      const auto rep = futaki_test(cone, xi);
      o.results["candidate"] = reeb(rep.candidate);
      o.results["vol_delta"] = real(rep.vol_delta);
      o.results["obstruction_vector"] =
          reals(std::vector<double>(rep.obstruction_vector.data(), rep.obstruction_vector.data() + rep.obstruction_vector.size()),
                rep.candidate.exact ? "exact-derived" : "float64");
      o.results["relative_norm"] = real(rep.relative_norm);
      o.results["threshold"] = 1e-9;
      o.results["obstructed"] = rep.obstructed;
      if (rep.candidate.exact) {
        const auto fan = quotient_fan(cone, rep.candidate);
        Json singular = Json::array();
        for (const auto& f : fan.faces)
          if (f.index != 1) singular.push_back({{"normals", f.normals}, {"index", exact(f.index)}});
        o.results["quotient"] = {{"direction", integers(fan.direction)},
                                 {"rays", integer_rows(fan.rays)},
                                 {"smooth", fan.smooth},
                                 {"singular_faces", singular}};
      }
      if (!is_good(cone).good) o.warnings.push_back(kOrbifold);
      if (rep.obstructed) o.exit_code = kExitObstructed;
      std::ostringstream s2;
      s2.precision(6);
      s2 << "futaki: " << (rep.obstructed ? "obstructed" : "unobstructed") << ", relative norm " << rep.relative_norm;
      o.summary = s2.str();
    } else if (probe->parsed()) {
      const auto cone = inputs.cone(cone_path);
      const ReebVector xi = xi_text.empty() ? minimize_volume(cone).xi_star : parse_reeb(xi_text);
      const PotentialSpec spec{cone, xi, std::nullopt};
      o.results["xi"] = reeb(xi);
      const auto to_vec = [](const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
      const auto rows = [&](const Eigen::MatrixXd& m) {
        Json r = Json::array();
        for (Eigen::Index i = 0; i < m.rows(); ++i) r.push_back(to_vec(m.row(i).transpose()));
        return r;
      };
      if (!y_text.empty()) {
        const auto yv = parse_reals(y_text);
        const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(yv.data(), static_cast<Eigen::Index>(yv.size()));
        const auto p0 = potential(spec, y);
        const auto blocks = metric_blocks(spec, y);
        o.results["y"] = yv;
        o.results["value"] = real(p0.value);
        o.results["gradient"] = reals(to_vec(p0.gradient));
        o.results["G_ij"] = rows(blocks.radial);
        o.results["G^ij"] = rows(blocks.angular);
        o.results["min_eigenvalue"] = real(blocks.min_eigenvalue);
        o.results["inverse_residual"] = real(blocks.inverse_residual);
      } else {
        if (samples <= 0) throw ValidationError("--samples must be positive");
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> w(0.05, 1.0);
        double min_eig = INFINITY, max_residual = 0.0;
        for (int k = 0; k < samples; ++k) {
          Eigen::VectorXd y = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(cone.dim()));
          for (const auto& u : cone.rays()) {
            const double weight = w(rng);
            for (std::size_t i = 0; i < cone.dim(); ++i) y(static_cast<Eigen::Index>(i)) += weight * u[i].convert_to<double>();
          }
          const auto blocks = metric_blocks(spec, y);
          min_eig = std::min(min_eig, blocks.min_eigenvalue);
          max_residual = std::max(max_residual, blocks.inverse_residual);
        }
        o.results["samples"] = samples;
        o.results["seed"] = seed;
        o.results["min_eigenvalue"] = real(min_eig);
        o.results["max_inverse_residual"] = real(max_residual);
      }
      o.summary = "potential-probe: convex at every evaluated point";
    }
    report.results = std::move(o.results);
    report.warnings = std::move(o.warnings);
    code = o.exit_code;
    summary = std::move(o.summary);
  } catch (const Error& e) {
    report.error = ReportError{to_string(e.kind()), e.what()};
    code = exit_code_for(e.kind());
    summary = std::string("error (") + to_string(e.kind()) + "): " + e.what();
  } catch (const std::exception& e) {
    report.error = ReportError{to_string(ErrorKind::Internal), e.what()};
    code = kExitInternal;
    summary = std::string("error: ") + e.what();
  }
  report.input_digest = fnv1a_hex(inputs.digest());
  report.timing_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return emit();
}

}  // namespace sasaki
