#include "cli.hpp"

#include "hplab/asymptotics.hpp"
#include "hplab/io.hpp"
#include "hplab/ode.hpp"
#include "hplab/potential.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

namespace hplab::cli {

namespace {

struct Flags {
  std::string alpha;
  int n = 0;
  std::vector<int> n_list;
  int s = 2;
  unsigned precision_bits = 0;
  int truncation_order = 0;
  std::string output;
  std::string format;
  std::string config;

  int order = 10;
  int power = 1;
  std::string variant = "printed";
  int k = 2;
  bool rho = false;
  int points = 400;
  std::string kind = "lambda";
  std::vector<std::string> x;
  std::vector<std::string> z;
  std::string which = "eq1";
  std::vector<double> grid;
  int quad_n = 32;
  int base = 1;
};

// Subcommand-specific value: flag, then config file, then default.
struct Picker {
  const CLI::App& app;
  const json& extra;

  template <class T>
  T get(const std::string& flag, const std::string& key, const T& flag_value, const T& fallback) const {
    if (app.count(flag) > 0) return flag_value;
    if (extra.contains(key)) {
      try {
        return extra.at(key).get<T>();
      } catch (const json::exception& e) {
        throw InvalidArgument("config key '" + key + "': " + e.what());
      }
    }
    return fallback;
  }
};

struct Result {
  json body = json::object();
  json checks = json::array();
  std::string regime = "exact";  // exact | float | double
  std::optional<std::string> csv;

  void check(const std::string& name, bool passed, json detail = nullptr) {
    json c = {{"name", name}, {"passed", passed}};
    if (!detail.is_null()) c["detail"] = std::move(detail);
    checks.push_back(std::move(c));
  }
  std::optional<std::string> first_failure() const {
    for (const auto& c : checks)
      if (!c.at("passed").get<bool>()) return c.at("name").get<std::string>();
    return std::nullopt;
  }
};

using Command = std::function<Result(const RunConfig&, const Picker&, const Flags&)>;

bool is_usage_error(const HpError& e) {
  static const char* codes[] = {"ExponentSumNonzero", "IntegerExponent", "InvalidArgument",  "DivisionByZero",
                                "OnBranchCut",        "OutsideSupport",  "OnBoundary",       "OrderMismatch",
                                "TruncationTooShort"};
  for (const char* c : codes)
    if (e.code() == c) return true;
  return false;
}

std::vector<int> n_values(const RunConfig& c, const char* cmd) {
  if (!c.n_list.empty()) return c.n_list;
  if (c.n) return {*c.n};
  throw InvalidArgument(std::string(cmd) + " needs --n or --n-list");
}

// k alpha must stay non-integral for k = 1..s or the system (1, f, ..., f^s)
// degenerates.
void check_two_point_exponents(const Rational& alpha, int s) {
  for (int k = 1; k <= s; ++k) {
    Rational ka = alpha * k;
    if (ka.get_den() == 1) {
      throw IntegerExponent(std::to_string(k) + "*alpha = " + to_string(ka) + " is an integer (" + std::to_string(k) +
                            "alpha in Z); the two-point system needs k*alpha not in Z for k = 1.." +
                            std::to_string(s));
    }
  }
}

QFn function_of(const RunConfig& c) {
  if (c.extra.contains("function")) return qfn_from_json(c.extra.at("function"));
  check_two_point_exponents(c.alpha, c.s);
  return two_point_function(c.alpha);
}

json residual_json(const RationalFunction<Rational>& r) {
  if (r.num().is_zero()) return "0";
  return "(" + to_string(r.num()) + ") / (" + to_string(r.den()) + ")";
}

json hp_json(const HPSolution<Rational>& sol) {
  json q = json::array();
  for (const auto& p : sol.Q) q.push_back(to_json(p));
  return {{"n", sol.n},
          {"s", sol.s},
          {"Q", q},
          {"normal", sol.normal},
          {"defect", sol.defect},
          {"defect_resolved", sol.defect_resolved},
          {"nullspace_dim", sol.nullspace_dim},
          {"leading_remainder", to_json(sol.leading_remainder)}};
}

std::vector<HPSolution<Rational>> solve_all(const RunConfig& c, const QFn& f, const std::vector<int>& ns) {
  if (!c.truncation_order) return hp_sweep(f, c.s, ns, Exec::Parallel);
  auto sys = power_tails(f, c.s, *c.truncation_order);
  std::vector<HPSolution<Rational>> out;
  for (int n : ns) out.push_back(hp_solve(sys, n, Exec::Parallel));
  return out;
}

std::vector<BigComplex> z_values(const Picker& pk, const Flags& fl, const char* fallback) {
  std::vector<BigComplex> zs;
  if (pk.app.count("--z") > 0) {
    for (const auto& t : fl.z) zs.push_back(parse_complex(t));
  } else if (pk.extra.contains("z")) {
    const auto& j = pk.extra.at("z");
    if (j.is_array() && !j.empty() && (j[0].is_object() || j[0].is_array() || j[0].is_string())) {
      for (const auto& v : j) zs.push_back(complex_from_json(v));
    } else {
      zs.push_back(complex_from_json(j));
    }
  } else {
    zs.push_back(parse_complex(fallback));
  }
  return zs;
}

std::vector<double> default_grid_E() {
  std::vector<double> g;
  for (int i = 0; i < 20; ++i) g.push_back(-0.95 + 0.1 * i);
  return g;
}

std::vector<double> default_grid_F() {
  std::vector<double> g;
  for (int i = 0; i < 20; ++i) g.push_back((i % 2 ? -1 : 1) * (1.05 + 0.4 * i));
  return g;
}

// ---------------------------------------------------------------- commands

Result cmd_expand(const RunConfig& c, const Picker& pk, const Flags& fl) {
  Result r;
  const QFn f = c.extra.contains("function") ? qfn_from_json(c.extra.at("function")) : two_point_function(c.alpha);
  const int power = pk.get<int>("--power", "power", fl.power, 1);
  const int order = pk.get<int>("--order", "order", fl.order, c.truncation_order.value_or(10));
  if (order < 0) throw InvalidArgument("order must be >= 0");
  const QFn fk = f.power(power);
  const auto tail = expand_at_infinity(fk, order);
  json coeffs = json::array();
  std::ostringstream csv;
  csv << "m,coefficient\n";
  for (int m = 0; m <= order; ++m) {
    coeffs.push_back(to_json(tail.coeff(-m)));
    csv << m << ',' << to_string(tail.coeff(-m)) << '\n';
  }
  r.body = {{"function", to_json(f)}, {"power", power}, {"order", order}, {"coefficients", coeffs}};
  r.csv = csv.str();
  return r;
}

Result cmd_hp(const RunConfig& c, const Picker&, const Flags&) {
  Result r;
  const QFn f = function_of(c);
  json sols = json::array();
  for (const auto& sol : solve_all(c, f, n_values(c, "hp"))) sols.push_back(hp_json(sol));
  r.body = {{"function", to_json(f)}, {"solutions", sols}};
  return r;
}

Result cmd_pade(const RunConfig& c, const Picker&, const Flags&) {
  Result r;
  const bool two_point = !c.extra.contains("function");
  const QFn f = c.extra.contains("function") ? qfn_from_json(c.extra.at("function")) : two_point_function(c.alpha);
  json out = json::array();
  for (int n : n_values(c, "pade")) {
    auto p = pade_solve(f, n, Exec::Parallel);
    json e = {{"n", n},
              {"P", to_json(p.P)},
              {"Q", to_json(p.Q)},
              {"M_n", to_json(p.M_n)},
              {"defect", p.defect},
              {"normal", p.normal}};
    if (two_point) {
      const bool ok = jacobi_crosscheck(c.alpha, n);
      e["jacobi_proportional"] = ok;
      r.check("n=" + std::to_string(n) + ": denominator proportional to P_n^(alpha,-alpha)", ok);
    }
    out.push_back(std::move(e));
  }
  r.body = {{"function", to_json(f)}, {"approximants", out}};
  return r;
}

OdeVariant parse_variant(const std::string& v) {
  if (v == "printed") return OdeVariant::Printed;
  if (v == "derived") return OdeVariant::Derived;
  throw InvalidArgument("variant must be printed or derived");
}

Result cmd_ode_verify(const RunConfig& c, const Picker& pk, const Flags& fl) {
  Result r;
  if (c.s != 2) throw InvalidArgument("ode-verify covers s = 2");
  check_two_point_exponents(c.alpha, 2);
  const std::string vname = pk.get<std::string>("--variant", "variant", fl.variant, "printed");
  const OdeVariant variant = parse_variant(vname);
  const QFn f = two_point_function(c.alpha), fneg = two_point_function(-c.alpha);
  json out = json::array();
  for (int n : n_values(c, "ode-verify")) {
    const auto sol = hp_solve(f, 2, n);
    const auto ode = build_ode_p2_s2(c.alpha, n, false, variant);
    const auto flipped = build_ode_p2_s2(c.alpha, n, true, variant);
    json res = json::array();
    for (int k = 0; k <= 2; ++k) {
      auto rk = ode_residual(ode, QuasiSolution<Rational>{sol.Q[static_cast<size_t>(k)], k, f});
      res.push_back(residual_json(rk));
      r.check("n=" + std::to_string(n) + ": third-order equation annihilates Q_" + std::to_string(k) + " f^" +
                  std::to_string(k),
              rk.num().is_zero());
    }
    auto rf = ode_residual(flipped, QuasiSolution<Rational>{sol.Q[2], 0, fneg});
    r.check("n=" + std::to_string(n) + ": flipped equation annihilates Q_2", rf.num().is_zero());
    out.push_back({{"n", n},
                   {"ode", to_json(ode)},
                   {"flipped_ode", to_json(flipped)},
                   {"residuals", res},
                   {"flipped_residual", residual_json(rf)}});
  }
  r.body = {{"variant", vname}, {"cases", out}};
  return r;
}

Result cmd_ode_extract(const RunConfig& c, const Picker&, const Flags&) {
  Result r;
  const bool two_point = !c.extra.contains("function");
  const QFn f = function_of(c);
  json out = json::array();
  for (int n : n_values(c, "ode-extract")) {
    auto sys = power_tails(f, c.s, extraction_order(c.s, n, f.p()));
    auto sol = hp_solve(sys, n);
    auto ode = extract_ode_wronskian(sys, sol);
    json e = {{"n", n}, {"ode", to_json(ode)}};
    bool all = true;
    for (int k = 0; k <= c.s; ++k)
      all = all && ode_residual(ode, QuasiSolution<Rational>{sol.Q[static_cast<size_t>(k)], k, f}).num().is_zero();
    r.check("n=" + std::to_string(n) + ": extracted equation annihilates every Q_k f^k", all);
    auto audit = structure_audit(ode, f, c.s, n);
    e["degenerate"] = audit.degenerate;
    e["audit_checks"] = audit.checks;
    e["H"] = to_json(audit.H);
    if (two_point && c.s == 2) {
      e["proportional_to_printed"] = proportional(ode, build_ode_p2_s2(c.alpha, n, false, OdeVariant::Printed));
      e["proportional_to_derived"] = proportional(ode, build_ode_p2_s2(c.alpha, n, false, OdeVariant::Derived));
    }
    out.push_back(std::move(e));
  }
  r.body = {{"function", to_json(f)}, {"s", c.s}, {"cases", out}};
  return r;
}

Result cmd_zeros(const RunConfig& c, const Picker& pk, const Flags& fl) {
  Result r;
  r.regime = "float";
  const bool two_point = !c.extra.contains("function");
  const QFn f = function_of(c);
  const bool rho = pk.get<bool>("--rho", "rho", fl.rho, false);
  const int k = pk.get<int>("--k", "k", fl.k, c.s);
  if (k < 0 || k > c.s) throw InvalidArgument("k must lie in 0..s");
  if (rho && (!two_point || c.s != 2)) throw InvalidArgument("--rho needs the two-point family with s = 2");
  const int points = pk.get<int>("--points", "points", fl.points, 400);
  const auto ns = n_values(c, "zeros");
  const auto sols = solve_all(c, f, ns);
  json out = json::array();
  std::ostringstream csv;
  csv << "n,index,re,im\n";
  for (const auto& sol : sols) {
    json e = {{"n", sol.n}};
    std::vector<BigComplex> pts;
    if (rho) {
      auto form = rho_form(sol, c.alpha, clustered_grid(points), Exec::Parallel);
      auto zs = rho_zeros(sol, c.alpha, form);
      e["sign_changes"] = form.sign_changes;
      e["refinements"] = form.refinements;
      for (const auto& x : zs) pts.push_back(make_complex(x, BigFloat(0)));
      r.check("n=" + std::to_string(sol.n) + ": rho_n has at least 2n+1 sign changes on (-1, 1)",
              form.sign_changes >= 2 * sol.n + 1, {{"sign_changes", form.sign_changes}});
    } else {
      const auto& Q = sol.Q[static_cast<size_t>(k)];
      auto m = roots(Q, c.precision_bits, {2000, Exec::Parallel});
      auto cert = certify_real_roots(Q, m);
      pts = m.points;
      e["degree"] = Q.degree();
      e["at_infinity"] = m.at_infinity;
      e["certificate"] = {{"all_real", cert.all_real},
                          {"outside_unit", cert.outside_unit},
                          {"certified", cert.certified},
                          {"min_distance_to_unit", cert.min_distance_to_unit}};
      if (two_point && c.s == 2) {
        r.check("n=" + std::to_string(sol.n) + ": zeros of Q_" + std::to_string(k) + " are real with |x| > 1",
                cert.all_real && cert.outside_unit, {{"certified", cert.certified}});
      }
    }
    json zs = json::array();
    for (size_t i = 0; i < pts.size(); ++i) {
      zs.push_back(to_json(pts[i]));
      csv << sol.n << ',' << i << ',' << to_string(BigFloat(pts[i].real()), static_cast<int>(precision_digits10()))
          << ',' << to_string(BigFloat(pts[i].imag()), static_cast<int>(precision_digits10())) << '\n';
    }
    e["zeros"] = zs;
    out.push_back(std::move(e));
  }
  r.body = {{"k", k}, {"rho", rho}, {"cases", out}};
  r.csv = csv.str();
  return r;
}

Result cmd_density(const RunConfig& c, const Picker& pk, const Flags& fl) {
  Result r;
  r.regime = "float";
  const DensityKind kind = parse_density_kind(pk.get<std::string>("--kind", "kind", fl.kind, "lambda"));
  std::vector<std::string> xs = pk.get<std::vector<std::string>>("--x", "x", fl.x, {});
  if (xs.empty() && c.extra.contains("x") && c.extra.at("x").is_number()) xs.push_back(c.extra.at("x").dump());
  r.body["kind"] = to_string(kind);
  if (xs.empty() && !c.n && c.n_list.empty()) throw InvalidArgument("density needs --x or --n");
  json vals = json::array();
  for (const auto& t : xs) {
    const BigComplex x = parse_complex(t);
    vals.push_back({{"x", to_json(BigFloat(x.real()))}, {"density", to_json(density(kind, BigFloat(x.real())))}});
  }
  r.body["values"] = vals;
  if (c.n || !c.n_list.empty()) {
    if (c.s != 2) throw InvalidArgument("empirical densities need s = 2");
    const QFn f = function_of(c);
    json emp = json::array();
    std::ostringstream csv;
    for (const auto& sol : solve_all(c, f, n_values(c, "density"))) {
      EmpiricalMeasure m;
      if (kind == DensityKind::Nu) {
        m = roots(sol.Q[2], c.precision_bits, {2000, Exec::Parallel});
      } else {
        auto form = rho_form(sol, c.alpha, clustered_grid(400), Exec::Parallel);
        m = real_measure(rho_zeros(sol, c.alpha, form));
      }
      emp.push_back({{"n", sol.n}, {"points", m.points.size()}, {"ks", measure_distance(m, kind)}});
      write_density_csv(csv, m, kind);
    }
    r.body["empirical"] = emp;
    r.csv = csv.str();
  } else {
    std::ostringstream csv;
    csv << "x,density\n";
    for (size_t i = 0; i < xs.size(); ++i)
      csv << vals[i]["x"].get<std::string>() << ',' << vals[i]["density"].get<std::string>() << '\n';
    r.csv = csv.str();
  }
  return r;
}

bool decreasing(const std::vector<BigFloat>& v) {
  for (size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1])) return false;
  return true;
}

Result cmd_ratio(const RunConfig& c, const Picker& pk, const Flags& fl) {
  Result r;
  r.regime = "float";
  if (c.s != 2) throw InvalidArgument("ratio covers s = 2");
  check_two_point_exponents(c.alpha, 2);
  const std::vector<int> ns = c.n_list.empty() ? (c.n ? std::vector<int>{*c.n} : std::vector<int>{10, 20, 40}) : c.n_list;
  const auto sols = hp_sweep(two_point_function(c.alpha), 2, ns, Exec::Parallel);
  json out = json::array();
  for (const auto& z : z_values(pk, fl, "0,1")) {
    auto errs = ratio_limit_check(sols, z, c.alpha);
    const BigComplex f0 = f0_complex(c.alpha, z);
    const BigComplex lim1 = -BigComplex(2) * BigComplex(cos(to_bigfloat(c.alpha) * pi())) * f0;
    json rows = json::array();
    std::vector<BigFloat> e1, e0;
    for (const auto& e : errs) {
      rows.push_back({{"n", e.n}, {"skipped", e.skipped}, {"err_q1", to_json(e.err_q1)}, {"err_q0", to_json(e.err_q0)}});
      if (!e.skipped) {
        e1.push_back(e.err_q1);
        e0.push_back(e.err_q0);
      }
    }
    const std::string zs = to_string(z, 6);
    r.check("z=" + zs + ": |Q1/Q2 - limit| decreases over n", decreasing(e1));
    r.check("z=" + zs + ": |Q0/Q2 - limit| decreases over n", decreasing(e0));
    out.push_back({{"z", to_json(z)}, {"limit_q1_over_q2", to_json(lim1)}, {"limit_q0_over_q2", to_json(BigComplex(f0 * f0))},
                   {"errors", rows}});
  }
  r.body = {{"points", out}};
  return r;
}

Result cmd_cubic(const RunConfig& c, const Picker& pk, const Flags& fl) {
  Result r;
  r.regime = "float";
  const double tol = c.tolerance("cubic", std::pow(10.0, -0.8 * precision_digits10()));
  json out = json::array();
  for (const auto& z : z_values(pk, fl, "0,1")) {
    auto b = cubic_branches(z);
    const BigComplex w = z * z - BigComplex(1);
    BigFloat res = 0;
    for (const auto* y : {&b.y1, &b.y2, &b.y3}) res = std::max(res, abs_big(cubic_residual(z, *y)));
    const BigFloat v1 = abs_big(b.y1 + b.y2 + b.y3);
    const BigFloat v2 = abs_big(b.y1 * b.y2 + b.y1 * b.y3 + b.y2 * b.y3 + BigComplex(3) / w);
    const BigFloat v3 = abs_big(b.y1 * b.y2 * b.y3 + BigComplex(2) * z / (w * w));
    const BigFloat worst = std::max({res, v1, v2, v3});
    r.check("z=" + to_string(z, 6) + ": cubic residual and Vieta identities below tolerance", worst < tol,
            {{"worst", to_json(worst)}, {"tolerance", tol}});
    out.push_back({{"z", to_json(z)},
                   {"y1", to_json(b.y1)},
                   {"y2", to_json(b.y2)},
                   {"y3", to_json(b.y3)},
                   {"residual", to_json(res)},
                   {"vieta", {to_json(v1), to_json(v2), to_json(v3)}}});
  }
  r.body = {{"points", out}};
  return r;
}

Result cmd_ordering(const RunConfig& c, const Picker& pk, const Flags& fl) {
  Result r;
  r.regime = "float";
  const int base = pk.get<int>("--base", "base", fl.base, 1);
  const double tol = c.tolerance("ordering_margin", 1e-6);
  json out = json::array();
  for (const auto& z : z_values(pk, fl, "0,1")) {
    auto sv = sheet_ordering(z, base);
    r.check("z=" + to_string(z, 6) + ": phi3 < phi2 < phi1", sv.ordered && sv.margin > tol,
            {{"margin", to_json(sv.margin)}});
    out.push_back({{"z", to_json(z)},
                   {"phi1", to_json(sv.phi1)},
                   {"phi2", to_json(sv.phi2)},
                   {"phi3", to_json(sv.phi3)},
                   {"ordered", sv.ordered},
                   {"margin", to_json(sv.margin)}});
  }
  r.body = {{"base", base}, {"points", out}};
  return r;
}

Result cmd_equilibrium(const RunConfig& c, const Picker& pk, const Flags& fl) {
  Result r;
  r.regime = "double";
  const std::string which = pk.get<std::string>("--which", "which", fl.which, "eq1");
  const int quad_n = pk.get<int>("--quad-n", "quad_n", fl.quad_n, 32);
  const double tol = c.tolerance("equilibrium", 1e-6);
  EquilibriumResult e;
  std::vector<double> grid;
  if (which == "eq1") {
    grid = pk.get<std::vector<double>>("--grid", "grid", fl.grid, default_grid_E());
    e = equilibrium_check(Equilibrium::Eq1, grid, quad_n, Exec::Parallel);
  } else if (which == "eq2" || which == "balayage") {
    grid = pk.get<std::vector<double>>("--grid", "grid", fl.grid, default_grid_F());
    e = which == "eq2" ? equilibrium_check(Equilibrium::Eq2, grid, quad_n, Exec::Parallel)
                       : balayage_check(grid, quad_n, Exec::Parallel);
  } else {
    throw InvalidArgument("which must be eq1, eq2 or balayage");
  }
  r.check(which + ": spread over the grid below tolerance", e.spread < tol, {{"spread", e.spread}, {"tolerance", tol}});
  std::ostringstream csv;
  csv.precision(17);
  csv << "x,value\n";
  for (size_t i = 0; i < grid.size(); ++i) csv << grid[i] << ',' << e.values[i] << '\n';
  r.csv = csv.str();
  r.body = {{"which", which}, {"quad_n", quad_n}, {"grid", grid}, {"values", e.values}, {"spread", e.spread}};
  return r;
}

Result cmd_report(const RunConfig& c, const Picker&, const Flags&) {
  Result r;
  r.regime = "float";
  if (c.n_list.empty()) throw InvalidArgument("report needs a nonempty n_list");
  if (c.s != 2) throw InvalidArgument("report covers s = 2");
  check_two_point_exponents(c.alpha, 2);
  const QFn f = two_point_function(c.alpha), fneg = two_point_function(-c.alpha);
  const auto sols = solve_all(c, f, c.n_list);

  json normality = json::array(), zeros = json::array(), ks_nu = json::array(), ks_lambda = json::array();
  json ode = json::array();
  for (const auto& sol : sols) {
    const std::string tag = "n=" + std::to_string(sol.n) + ": ";
    normality.push_back({{"n", sol.n}, {"normal", sol.normal}, {"defect", sol.defect}});
    r.check(tag + "index is normal", sol.normal);

    for (int k = 0; k <= 2; ++k) {
      const auto& Q = sol.Q[static_cast<size_t>(k)];
      auto m = roots(Q, c.precision_bits, {2000, Exec::Parallel});
      auto cert = certify_real_roots(Q, m);
      zeros.push_back({{"n", sol.n}, {"k", k}, {"all_real", cert.all_real}, {"outside_unit", cert.outside_unit},
                       {"certified", cert.certified}});
      r.check(tag + "zeros of Q_" + std::to_string(k) + " are real with |x| > 1", cert.all_real && cert.outside_unit);
      if (k == 2) ks_nu.push_back({{"n", sol.n}, {"ks", measure_distance(m, DensityKind::Nu)}});
    }
    auto form = rho_form(sol, c.alpha, clustered_grid(400), Exec::Parallel);
    r.check(tag + "rho_n has at least 2n+1 sign changes", form.sign_changes >= 2 * sol.n + 1);
    auto lam = real_measure(rho_zeros(sol, c.alpha, form));
    ks_lambda.push_back({{"n", sol.n}, {"ks", measure_distance(lam, DensityKind::Lambda)}});

    json status = json::object();
    for (auto [name, variant] : {std::pair{"printed", OdeVariant::Printed}, std::pair{"derived", OdeVariant::Derived}}) {
      auto eq = build_ode_p2_s2(c.alpha, sol.n, false, variant);
      auto fl = build_ode_p2_s2(c.alpha, sol.n, true, variant);
      bool zero = ode_residual(fl, QuasiSolution<Rational>{sol.Q[2], 0, fneg}).num().is_zero();
      for (int k = 0; k <= 2; ++k)
        zero = zero && ode_residual(eq, QuasiSolution<Rational>{sol.Q[static_cast<size_t>(k)], k, f}).num().is_zero();
      status[name] = zero ? "zero" : "nonzero";
      if (variant == OdeVariant::Derived) r.check(tag + "derived third-order equations annihilate the forms", zero);
    }
    ode.push_back({{"n", sol.n}, {"residuals", status}});
  }

  json ratio = json::array();
  for (const auto& e : ratio_limit_check(sols, imag_unit(), c.alpha))
    ratio.push_back({{"n", e.n}, {"skipped", e.skipped}, {"err_q1", to_json(e.err_q1)}, {"err_q0", to_json(e.err_q0)}});

  const double tol = c.tolerance("equilibrium", 1e-6);
  const double eq1 = equilibrium_check(Equilibrium::Eq1, default_grid_E(), 32, Exec::Parallel).spread;
  const double eq2 = equilibrium_check(Equilibrium::Eq2, default_grid_F(), 32, Exec::Parallel).spread;
  const double bal = balayage_check(default_grid_F(), 32, Exec::Parallel).spread;
  r.check("eq1 spread below tolerance", eq1 < tol);
  r.check("eq2 spread below tolerance", eq2 < tol);
  r.check("balayage spread below tolerance", bal < tol);

  r.body = {{"normality", normality},
            {"zero_location", zeros},
            {"ks", {{"nu", ks_nu}, {"lambda", ks_lambda}}},
            {"ratio_at_i", ratio},
            {"ode_residuals", ode},
            {"equilibrium_spreads", {{"eq1", eq1}, {"eq2", eq2}, {"balayage", bal}}}};
  return r;
}

void emit(const RunConfig& c, const std::string& text, std::ostream& out) {
  if (c.output_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(c.output_path);
  if (!file) throw InvalidArgument("cannot open output file '" + c.output_path + "'");
  file << text;
}

json error_doc(const std::string& cmd, const std::string& code, const std::string& message) {
  return {{"schema_version", kSchemaVersion},
          {"command", cmd},
          {"status", "error"},
          {"error", {{"code", code}, {"message", message}}}};
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hermite-Pade polynomial laboratory"};
  app.require_subcommand(1);
  app.fallthrough();
  Flags fl;
  app.add_option("--alpha", fl.alpha, "exponent alpha as a rational string");
  app.add_option("--n", fl.n, "index n");
  app.add_option("--n-list", fl.n_list, "comma-separated indices")->delimiter(',');
  app.add_option("--s", fl.s, "number of powers of f");
  app.add_option("--precision-bits", fl.precision_bits, "float working precision (>= 64)");
  app.add_option("--truncation-order", fl.truncation_order, "expansion order at infinity");
  app.add_option("--output", fl.output, "write to this file instead of stdout");
  app.add_option("--format", fl.format, "json or csv");
  app.add_option("--config", fl.config, "JSON config file (flags take precedence)");

  std::map<std::string, Command> commands;
  auto sub = [&](const char* name, const char* help, Command cmd) {
    commands[name] = std::move(cmd);
    return app.add_subcommand(name, help);
  };
  auto* expand = sub("expand", "Laurent expansion of f^k at infinity", cmd_expand);
  expand->add_option("--order", fl.order, "number of coefficients after c_0");
  expand->add_option("--power", fl.power, "k");
  sub("hp", "type I Hermite-Pade polynomials", cmd_hp);
  sub("pade", "Pade approximants at infinity", cmd_pade);
  auto* verify = sub("ode-verify", "check the third-order equations on the Hermite-Pade forms", cmd_ode_verify);
  verify->add_option("--variant", fl.variant, "printed or derived constants");
  sub("ode-extract", "extract the equation from Wronskian minors", cmd_ode_extract);
  auto* zeros = sub("zeros", "zeros of Q_{n,k} or of rho_n", cmd_zeros);
  zeros->add_option("--k", fl.k, "which Q_{n,k}");
  zeros->add_flag("--rho", fl.rho, "zeros of rho_n on (-1, 1)");
  zeros->add_option("--points", fl.points, "initial grid size for rho_n");
  auto* dens = sub("density", "limit densities and empirical comparisons", cmd_density);
  dens->add_option("--kind", fl.kind, "nu or lambda");
  dens->add_option("--x", fl.x, "evaluation points");
  auto* ratio = sub("ratio", "ratio asymptotics Q1/Q2, Q0/Q2", cmd_ratio);
  ratio->add_option("--z", fl.z, "points as re,im (repeatable)");
  auto* cubic = sub("cubic", "branches of the cubic equation", cmd_cubic);
  cubic->add_option("--z", fl.z, "points as re,im (repeatable)");
  auto* ordering = sub("ordering", "ordering of the sheet functions phi_j", cmd_ordering);
  ordering->add_option("--z", fl.z, "points as re,im (repeatable)");
  ordering->add_option("--base", fl.base, "base branch point, 1 or -1");
  auto* eq = sub("equilibrium", "equilibrium identities and balayage", cmd_equilibrium);
  eq->add_option("--which", fl.which, "eq1, eq2 or balayage");
  eq->add_option("--grid", fl.grid, "evaluation grid")->delimiter(',');
  eq->add_option("--quad-n", fl.quad_n, "Gauss-Legendre order and grading depth");
  sub("report", "aggregate report over n_list", cmd_report);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return 1;
  }

  const CLI::App* active = app.get_subcommands().front();
  const std::string cmd = active->get_name();
  const Picker pk{*active, json::object()};
  // In-process callers get their working precision back.
  struct Restore {
    unsigned bits;
    ~Restore() { set_precision_bits(bits); }
  } restore{precision_bits()};
  try {
    RunConfig cfg;
    if (const char* env = std::getenv("HP_LAB_PRECISION_BITS"); env && *env) cfg.precision_bits = init_precision_from_env();
    if (!fl.config.empty()) {
      std::ifstream in(fl.config);
      if (!in) throw InvalidArgument("cannot read config file '" + fl.config + "'");
      json j;
      try {
        j = json::parse(in);
      } catch (const json::exception& e) {
        throw InvalidArgument(std::string("config file is not valid JSON: ") + e.what());
      }
      cfg = config_from_json(j, cfg);
    }
    if (app.count("--alpha")) cfg.alpha = rational_from_json(fl.alpha);
    if (app.count("--n")) cfg.n = fl.n;
    if (app.count("--n-list")) cfg.n_list = fl.n_list;
    if (app.count("--s")) cfg.s = fl.s;
    if (app.count("--precision-bits")) cfg.precision_bits = fl.precision_bits;
    if (app.count("--truncation-order")) cfg.truncation_order = fl.truncation_order;
    if (app.count("--output")) cfg.output_path = fl.output;
    if (app.count("--format")) cfg.format = fl.format;
    cfg.validate();
    set_precision_bits(cfg.precision_bits);

    const Picker picker{*active, cfg.extra};
    Result res = commands.at(cmd)(cfg, picker, fl);
    const auto failure = res.first_failure();
    if (cfg.format == "csv") {
      if (!res.csv) throw InvalidArgument(cmd + " has no CSV output");
      emit(cfg, *res.csv, out);
    } else {
      json doc = {{"schema_version", kSchemaVersion},
                  {"command", cmd},
                  {"config", to_json(cfg)},
                  {"regime", res.regime},
                  {"result", res.body},
                  {"checks", res.checks},
                  {"status", failure ? "check_failed" : "ok"}};
      if (res.regime == "float") doc["precision_bits"] = cfg.precision_bits;
      if (res.regime == "double") doc["precision_bits"] = 53;
      if (failure) doc["failing_invariant"] = *failure;
      emit(cfg, doc.dump(2) + "\n", out);
    }
    if (failure) {
      err << cmd << ": check failed: " << *failure << '\n';
      return 2;
    }
    return 0;
  } catch (const HpError& e) {
    const int code = is_usage_error(e) ? 1 : 2;
    out << error_doc(cmd, e.code(), e.what()).dump(2) << '\n';
    err << cmd << ": " << e.what() << '\n';
    return code;
  } catch (const std::invalid_argument& e) {
    out << error_doc(cmd, "InvalidArgument", e.what()).dump(2) << '\n';
    err << cmd << ": " << e.what() << '\n';
    return 1;
  } catch (const json::exception& e) {
    out << error_doc(cmd, "InvalidArgument", e.what()).dump(2) << '\n';
    err << cmd << ": " << e.what() << '\n';
    return 1;
  }
}

}  // namespace hplab::cli
