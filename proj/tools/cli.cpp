#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "confsphere/conformal.hpp"
#include "confsphere/extremal.hpp"
#include "confsphere/identities.hpp"
#include "json.hpp"

namespace confsphere::cli {

namespace {

using nlohmann::json;

struct InvalidConfig : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  int n = 5;
  int k = 1;
  bool sigma2 = false;
  int degree = 3;
  int trials = 20;
  std::uint64_t seed = 1;
  std::string xi;
  int L = 6;
  int nodes = 0;  // 0: the command's own default
  double tol = 0.0;
  std::string out;
  std::string init = "random";
  std::string input = "1";

  json to_json() const {
    return {{"n", n},         {"k", k},       {"sigma2", sigma2}, {"degree", degree}, {"trials", trials},
            {"seed", seed},   {"xi", xi},     {"L", L},           {"nodes", nodes},   {"tol", tol},
            {"init", init},   {"input", input}};
  }
};

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidConfig(what);
}

// n in [5, 9]; GJMS orders 1 <= k with 2k < n.
OperatorDescriptor checked_descriptor(const RunConfig& c) {
  require(c.n >= 5 && c.n <= 9, "--n must lie in [5, 9]");
  if (c.sigma2) return sigma2_descriptor(c.n);
  require(c.k >= 1 && 2 * c.k < c.n, "--k must satisfy 1 <= k and 2k < n");
  return gjms_descriptor(c.n, c.k);
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      require(item.find_first_not_of(" \t", used) == std::string::npos, "bad number in list: " + item);
    } catch (const std::logic_error&) {
      throw InvalidConfig("bad number in list: " + item);
    }
  }
  return v;
}

double bubble_exponent(const OperatorDescriptor& d) {
  return d.kind == OperatorDescriptor::Kind::Gjms ? 0.5 * (d.n - 2 * d.k) : 0.25 * (d.n - 4);
}

struct Report {
  json body;
  bool ok = true;
  std::string summary;
};

Report verify_identities(const RunConfig& c) {
  const OperatorDescriptor d = checked_descriptor(c);
  require(c.degree >= 0 && c.degree <= 6, "--degree must lie in [0, 6]");
  require(c.trials >= 1 && c.trials <= 1000, "--trials must lie in [1, 1000]");
  BatteryOptions opt;
  opt.n = c.n;
  opt.k = d.k;
  opt.degree = c.degree;
  opt.trials = c.trials;
  opt.seed = c.seed;
  const auto reports = c.sigma2 ? run_sigma2_battery(opt) : run_gjms_battery(opt);
  Report r;
  json list = json::array();
  int failures = 0;
  for (const auto& x : reports) {
    list.push_back(x.to_json());
    if (!x.verdict) ++failures;
  }
  r.ok = failures == 0;
  r.body = {{"checks", list}, {"total", reports.size()}, {"failures", failures}};
  std::ostringstream s;
  s << d.name << " n=" << c.n << (c.sigma2 ? "" : " k=" + std::to_string(c.k)) << ": " << reports.size() - failures << "/"
    << reports.size() << " exact identities hold";
  r.summary = s.str();
  return r;
}

Report bubble_check(const RunConfig& c) {
  const OperatorDescriptor d = checked_descriptor(c);
  const std::vector<double> xis = parse_list(c.xi.empty() ? "0,0.3,0.6" : c.xi);
  require(!xis.empty(), "--xi needs at least one value");
  for (double x : xis) require(std::abs(x) < 0.95, "--xi values must satisfy |xi| < 0.95");
  const int nodes = c.nodes == 0 ? 200 : c.nodes;
  require(nodes >= 20 && nodes <= 2000, "--nodes must lie in [20, 2000]");
  const double tol = c.tol == 0.0 ? 1e-6 : c.tol;
  require(tol > 0.0, "--tol must be positive");

  const JacobiQuadrature quad(c.n, nodes);
  const ConstraintSet cs = ConstraintSet::for_descriptor(d);
  const double w = sphere_volume(c.n);
  const double sharp = to_double(sharp_constant(d));
  const double energy_tol = d.kind == OperatorDescriptor::Kind::Gjms ? 1e-7 : 1e-6;
  Report r;
  json list = json::array();
  for (double x : xis) {
    // xi = 0 is the constant, which takes the exact deficit route.
    const ZonalFunction b = x == 0.0 ? ZonalFunction::constant(c.n, 1.0) : ZonalFunction::bubble(c.n, std::abs(x), bubble_exponent(d));
    const double mass_err = std::abs(cs.mass(b, quad) - w) / w;
    const double energy = energy_zonal(d, b, quad);
    const double energy_err = std::abs(energy - sharp * w) / (sharp * w);
    const double def = deficit(b, d, quad);
    const double el = euler_lagrange_residual(b, d, energy, quad);
    json e = {{"xi", x},
              {"mass_rel_error", mass_err},
              {"energy", energy},
              {"energy_rel_error", energy_err},
              {"deficit", def},
              {"euler_lagrange_residual", el}};
    bool pass = mass_err <= 1e-8 && energy_err <= energy_tol && std::abs(def) <= tol * w && el <= 1e-7 * std::max(1.0, sharp);
    if (cs.sigma1_positive) {
      const ZonalFunction s1 = sigma1_zonal(b);
      double lo = s1.evaluate(quad.nodes().front());
      for (double t : quad.nodes()) lo = std::min(lo, s1.evaluate(t));
      e["min_sigma1"] = lo;
      pass = pass && lo > 0.0;
    }
    e["pass"] = pass;
    r.ok = r.ok && pass;
    list.push_back(e);
  }
  r.body = {{"omega_n", w}, {"sharp", sharp}, {"bubbles", list}};
  r.summary = d.name + " bubbles: " + (r.ok ? "all within tolerance" : "tolerance violated");
  return r;
}

Report balance_cmd(const RunConfig& c) {
  const OperatorDescriptor d = checked_descriptor(c);
  const int nodes = c.nodes == 0 ? 48 : c.nodes;
  require(nodes >= 4 && nodes <= 200, "--nodes must lie in [4, 200]");
  const double tol = c.tol == 0.0 ? 1e-10 : c.tol;
  require(tol > 0.0, "--tol must be positive");

  SphereField u;
  if (c.input == "bubble") {
    std::vector<double> xi = parse_list(c.xi.empty() ? "0" : c.xi);
    require(xi.size() <= static_cast<std::size_t>(c.n + 1), "--xi has more than n+1 components");
    Eigen::VectorXd v = Eigen::VectorXd::Zero(c.n + 1);
    for (std::size_t i = 0; i < xi.size(); ++i) v[static_cast<Eigen::Index>(i)] = xi[i];
    require(v.norm() < 0.95, "bubble centre must satisfy |xi| < 0.95");
    const Bubble b = d.kind == OperatorDescriptor::Kind::Gjms ? Bubble::gjms(c.n, d.k, v) : Bubble::sigma2(c.n, v);
    u = b.field();
  } else {
    AmbientPoly p(c.n + 1);
    try {
      p = AmbientPoly::parse(c.n + 1, c.input);
    } catch (const std::exception& e) {
      throw InvalidConfig(std::string("cannot parse --input: ") + e.what());
    }
    u = [p](std::span<const double> x) { return p.evaluate(x); };
  }

  const SphereQuadrature quad(c.n, nodes);
  for (std::size_t q = 0; q < quad.size(); ++q) require(u(quad.point(q)) > 0.0, "--input must be positive on the sphere");
  BalanceOptions opt;
  opt.tolerance = tol;
  const double N = ConstraintSet::for_descriptor(d).exponent();
  const BalanceResult res = balance(u, N, quad, opt);

  double lo = res.balanced(quad.point(0)), hi = lo;
  for (std::size_t q = 0; q < quad.size(); ++q) {
    const double v = res.balanced(quad.point(q));
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  Report r;
  r.ok = res.converged;
  r.body = {{"xi", std::vector<double>(res.map.xi().data(), res.map.xi().data() + res.map.xi().size())},
            {"residual", res.residual},
            {"residual_norm", res.residual_norm},
            {"iterations", res.iterations},
            {"converged", res.converged},
            {"balanced_min", lo},
            {"balanced_max", hi}};
  std::ostringstream s;
  s << "balance: " << (res.converged ? "converged" : "did not converge") << " in " << res.iterations
    << " Newton steps, moment norm " << res.residual_norm;
  r.summary = s.str();
  return r;
}

Report minimize_cmd(const RunConfig& c) {
  const OperatorDescriptor d = checked_descriptor(c);
  require(c.L >= 0 && c.L <= 8, "--L must lie in [0, 8]");
  require(c.init == "random" || c.init == "constant", "--init must be random or constant");
  MinimizationOptions opt;
  opt.init = c.init;
  opt.nodes = c.nodes == 0 ? 200 : c.nodes;
  require(opt.nodes >= 20 && opt.nodes <= 2000, "--nodes must lie in [20, 2000]");
  const double tol = c.tol == 0.0 ? 1e-4 : c.tol;
  require(tol > 0.0, "--tol must be positive");

  const MinimizationResult res = minimize_quotient(d, c.L, c.seed, opt);
  const double w = sphere_volume(c.n);
  Report r;
  const bool close = std::abs(res.deficit) <= tol * w;
  r.ok = res.converged && close;
  r.body = res.to_json();
  r.body["quotient_within_tol"] = close;
  if (d.kind == OperatorDescriptor::Kind::Sigma2) r.body["min_sigma1"] = res.min_sigma1;
  std::ostringstream s;
  s << d.name << " L=" << c.L << ": quotient/omega_n = " << res.quotient / w << " (sharp " << res.sharp / w << "), "
    << res.iterations << " iterations, " << (res.converged ? "converged" : "not converged");
  r.summary = s.str();
  return r;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact and numeric checks for conformally covariant operators on round spheres", "confsphere"};
  app.require_subcommand(1);
  RunConfig c;

  auto common = [&c](CLI::App* sub) {
    sub->add_option("--n", c.n, "sphere dimension, 5..9")->capture_default_str();
    sub->add_option("--k", c.k, "GJMS half-order")->capture_default_str();
    sub->add_flag("--sigma2", c.sigma2, "use the sigma_2 operator instead of GJMS");
    sub->add_option("--seed", c.seed, "PRNG seed")->capture_default_str();
    sub->add_option("--nodes", c.nodes, "quadrature nodes (command default when 0)");
    sub->add_option("--tol", c.tol, "tolerance (command default when 0)");
    sub->add_option("--out", c.out, "write the JSON report here");
  };
  CLI::App* verify = app.add_subcommand("verify-identities", "exact commutator and Dirichlet-form batteries");
  common(verify);
  verify->add_option("--degree", c.degree, "degree of random inputs")->capture_default_str();
  verify->add_option("--trials", c.trials, "number of random inputs")->capture_default_str();
  CLI::App* bubble = app.add_subcommand("bubble-check", "mass, energy, deficit and Euler-Lagrange residual of bubbles");
  common(bubble);
  bubble->add_option("--xi", c.xi, "comma list of |xi| values (default 0,0.3,0.6)");
  CLI::App* bal = app.add_subcommand("balance", "conformally balance a positive function");
  common(bal);
  bal->add_option("--input", c.input, "polynomial in x0..xn, e.g. \"1 + 1/10 * x0\", or \"bubble\"")->capture_default_str();
  bal->add_option("--xi", c.xi, "bubble centre components for --input bubble");
  CLI::App* mini = app.add_subcommand("minimize", "minimize the Sobolev quotient over zonal harmonics");
  common(mini);
  mini->add_option("--L", c.L, "truncation degree, 0..8")->capture_default_str();
  mini->add_option("--init", c.init, "random or constant")->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }

  Report r;
  try {
    if (verify->parsed()) {
      c.command = "verify-identities";
      r = verify_identities(c);
    } else if (bubble->parsed()) {
      c.command = "bubble-check";
      r = bubble_check(c);
    } else if (bal->parsed()) {
      c.command = "balance";
      r = balance_cmd(c);
    } else {
      c.command = "minimize";
      r = minimize_cmd(c);
    }
  } catch (const InvalidConfig& e) {
    err << "invalid configuration: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::invalid_argument& e) {
    err << "invalid configuration: " << e.what() << "\n";
    return kExitInvalid;
  }

  json report = {{"schema", 1}, {"command", c.command}, {"config", c.to_json()}, {"ok", r.ok}};
  report.update(r.body);
  const std::string text = report.dump(2) + "\n";
  if (!c.out.empty()) {
    std::ofstream f(c.out);
    if (!f) {
      err << "cannot write " << c.out << "\n";
      return kExitInvalid;
    }
    f << text;
    out << r.summary << "\n";
  } else {
    out << text;
    err << r.summary << "\n";
  }
  return r.ok ? kExitOk : kExitFailed;
}

}  // namespace confsphere::cli
