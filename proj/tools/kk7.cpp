// kk7: derive, solve and verify traveling-wave solutions of seventh-order KdV equations,
// and run spectral simulations of them.
//
// Exit status: 0 all requested checks passed, 1 a check failed, 2 usage or configuration
// error, 3 solver degree bound exceeded.

#include "kk7/sim/reference.hpp"
#include "kk7/solver/pipeline.hpp"
#include "kk7/verify/verify.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace kk7;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kCheckFailed = 1, kUsage = 2, kBound = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string equation = "kk7";
  std::string ansatz;
  std::optional<std::string> amplitudes;
  std::uint32_t degree_bound = 40;
  std::string json_path;
  std::string id;
  bool all = false;
  bool fixtures = false;
  unsigned digits = 50;
  int samples = 50;
  std::string format = "json";
  std::string output;
  // simulate
  std::string mu = "1";
  std::size_t n = 256;
  double length = 40;
  double dt = 1e-7;
  double final_time = 0.05;
  double dealias = 2.5;
  std::string scheme = "etd-rk4";
  long every = 5000;
  int retries = 3;
  std::string state_path;
  std::optional<double> tolerance;
};

PdeCoefficients equation_of(const Options& o) {
  try {
    return coefficients_from_string(o.equation);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
}

AnsatzSpec spec_of(const Options& o) {
  AnsatzSpec spec;
  try {
    spec.family = family_from_name(o.ansatz);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  if (o.amplitudes) {
    std::vector<std::string> names;
    std::stringstream ss(*o.amplitudes);
    for (std::string a; std::getline(ss, a, ',');)
      if (!a.empty()) names.push_back(a);
    spec.amplitudes = names;
  }
  try {
    spec.active_amplitudes();
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  return spec;
}

ClosedFormSolution solution_of(const std::string& id) {
  if (id == "u0-printed") return printed_one_soliton();
  if (id == "u0-bracketed") return bracketed_one_soliton();
  try {
    return catalog_entry(id);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw UsageError("cannot write " + path);
  f << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

int run_derive(const Options& o) {
  auto spec = spec_of(o);
  PolySystem sys = derive_family_system(equation_of(o), spec);
  std::cout << "equation " << o.equation << ", ansatz " << family_name(spec.family) << ": " << sys.size()
            << " equations in";
  for (const auto& u : sys.unknowns) std::cout << ' ' << u;
  std::cout << '\n';
  for (std::size_t k = 0; k < sys.size(); ++k)
    std::cout << "  [zeta^" << sys.zeta_powers[k] << "] " << sys.equations[k].to_string() << " = 0\n";
  for (const auto& f : sys.nonzero) std::cout << "  nonzero: " << f.to_string() << '\n';
  for (const auto& g : sys.nonzero_any) {
    std::cout << "  not all zero:";
    for (const auto& p : g) std::cout << ' ' << p.to_string();
    std::cout << '\n';
  }
  if (!o.json_path.empty()) {
    json j{{"equation", o.equation}, {"ansatz", family_name(spec.family)}, {"unknowns", sys.unknowns}};
    j["equations"] = json::array();
    for (std::size_t k = 0; k < sys.size(); ++k)
      j["equations"].push_back({{"zeta_power", sys.zeta_powers[k]}, {"poly", sys.equations[k].to_string()}});
    write_text(o.json_path, dump(j));
  }
  return kOk;
}

json variety_json(const SolutionVariety& v) {
  json values = json::object();
  for (const auto& [name, val] : v.values) values[name] = val.to_string();
  json relations = json::array();
  for (const auto& r : v.relations) relations.push_back(r.to_string() + " = 0");
  return {{"values", values}, {"relations", relations}, {"free_parameters", v.free_parameters}};
}

int run_solve(const Options& o) {
  auto spec = spec_of(o);
  SolveOptions opts;
  opts.degree_bound = o.degree_bound;
  FamilySolution fs = solve_family(equation_of(o), spec, opts);
  std::cout << fs.varieties.size() << " solution sets for " << o.equation << " / " << family_name(spec.family) << '\n';
  json out{{"equation", o.equation}, {"ansatz", family_name(spec.family)}, {"scale", spec.scale_symbol()}};
  out["varieties"] = json::array();
  for (std::size_t k = 0; k < fs.varieties.size(); ++k) {
    const auto& v = fs.varieties[k];
    std::cout << "  [" << k + 1 << "] " << v.to_string() << '\n';
    out["varieties"].push_back(variety_json(v));
  }
  write_text(o.json_path.empty() ? "solutions.json" : o.json_path, dump(out));
  return kOk;
}

unsigned default_digits() {
  if (const char* env = std::getenv("KK7_PRECISION")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 30 || v > 10000) throw UsageError("KK7_PRECISION must be an integer >= 30");
    return static_cast<unsigned>(v);
  }
  return 50;
}

// One verdict line; exact symbolic residual plus numeric residual below 10^(6 - digits).
bool verify_one(const ClosedFormSolution& s, const PdeCoefficients& k, const Options& o) {
  const bool exact = symbolically_exact(s, k);
  NumericOptions no;
  no.digits = o.digits;
  no.samples = o.samples;
  auto r = numeric_residual(s, k, no);
  const HpFloat tol = boost::multiprecision::pow(HpFloat(10), 6 - static_cast<int>(o.digits));
  const bool ok = exact && r.max_abs < tol;
  std::cout << (ok ? "PASS " : "FAIL ") << s.id << "  symbolic=" << (exact ? "0" : "nonzero")
            << "  numeric=" << r.max_abs.str(3, std::ios::scientific) << " (" << r.accepted << " samples)\n";
  return ok;
}

int run_verify(const Options& o) {
  if (o.all == !o.id.empty()) throw UsageError("verify needs exactly one of --id or --all");
  const auto k = equation_of(o);
  std::vector<ClosedFormSolution> todo = o.all ? catalog() : std::vector<ClosedFormSolution>{solution_of(o.id)};
  if (o.all && o.fixtures) todo.push_back(printed_one_soliton());
  int failed = 0;
  for (const auto& s : todo) failed += !verify_one(s, k, o);
  return failed ? kCheckFailed : kOk;
}

int run_continue(const Options& o) {
  const auto src = solution_of(o.id);
  ClosedFormSolution out;
  try {
    out = periodic_continue(src);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  } catch (const std::domain_error& e) {
    std::cout << "FAIL " << e.what() << '\n';
    return kCheckFailed;
  }
  std::cout << out.id << "(x,t) = " << out.expr.to_infix() << '\n';
  std::cout << "  " << out.speed_symbol << " = " << out.speed().to_infix() << ", kind " << kind_name(out.kind) << '\n';
  for (const auto& c : out.constraints) std::cout << "  constraint " << c.to_string() << " = 0\n";
  bool ok = symbolically_exact(out, equation_of(o));
  bool matches = true;
  try {
    matches = canonical(catalog_entry(out.id).expr) == out.expr;
    std::cout << "  catalog " << out.id << ": " << (matches ? "structurally equal" : "differs") << '\n';
  } catch (const std::invalid_argument&) {
  }
  std::cout << (ok && matches ? "PASS" : "FAIL") << " residual " << (ok ? "0" : "nonzero") << '\n';
  return ok && matches ? kOk : kCheckFailed;
}

int run_simulate(const Options& o) {
  const auto sol = solution_of(o.id);
  GaussianRational mu;
  try {
    mu = GaussianRational::parse(o.mu);
  } catch (const std::exception& e) {
    throw UsageError("--mu: " + std::string(e.what()));
  }
  std::map<std::string, GaussianRational> params{{sol.family == "cole-hopf" ? "k" : "mu", mu}};
  Reference ref;
  try {
    ref = closed_form_reference(sol, params, o.length / 2);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  SimConfig cfg;
  cfg.coefficients = equation_of(o);
  cfg.dt = o.dt;
  cfg.final_time = o.final_time;
  cfg.dealias = o.dealias;
  try {
    cfg.scheme = scheme_from_name(o.scheme);
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  GridState s0;
  try {
    s0 = GridState::sample(o.n, o.length, [&](double x) { return ref(x, 0); });
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  std::vector<Diagnostics> rows;
  GridState final_state;
  for (int attempt = 0;; ++attempt) {
    rows.clear();
    try {
      final_state = integrate(s0, cfg, [&](const GridState& s) { rows.push_back(diagnostics(s, ref)); }, o.every);
      break;
    } catch (const SimulationError& e) {
      if (attempt >= o.retries) {
        std::cout << "FAIL " << e.what() << '\n';
        return kCheckFailed;
      }
      std::cerr << e.what() << "; retrying with dt = " << cfg.dt / 2 << '\n';
      cfg.dt /= 2;
    }
  }
  std::ostringstream csv;
  write_series_csv(csv, rows);
  write_text(o.json_path.empty() ? "simulate.csv" : o.json_path, csv.str());
  if (!o.state_path.empty()) {
    std::ostringstream st;
    write_state_csv(st, final_state);
    write_text(o.state_path, st.str());
  }
  const auto& first = rows.front();
  const auto& last = rows.back();
  const double drift = std::abs(last.mass - first.mass) / std::max(std::abs(first.mass), 1e-300);
  std::cout.precision(3);
  std::cout << std::scientific << "t = " << last.time << "  max error " << last.max_error << "  mass drift " << drift
            << (conserves_mass(cfg.coefficients) ? "" : " (no flux form: mass is not an invariant)") << "  dt "
            << cfg.dt << '\n';
  if (o.tolerance) {
    const bool ok = last.max_error < *o.tolerance;
    std::cout << (ok ? "PASS" : "FAIL") << " max error below " << *o.tolerance << '\n';
    return ok ? kOk : kCheckFailed;
  }
  return kOk;
}

int run_catalog(const Options& o) {
  const auto cat = catalog();
  if (o.format == "json") {
    write_text(o.output, dump(catalog_json(cat)));
  } else {
    std::ostringstream out;
    for (const auto& s : cat)
      out << s.id << "  " << s.family << "  " << kind_name(s.kind) << "  " << s.speed_symbol << " = "
          << s.speed().to_infix() << "\n    u = " << s.expr.to_infix() << '\n';
    write_text(o.output, out.str());
  }
  return kOk;
}

void add_equation(CLI::App* sub, Options& o) {
  sub->add_option("--equation,-e", o.equation, "ski7, lax7, kk7 or seven comma-separated rationals")
      ->capture_default_str();
}

void add_ansatz(CLI::App* sub, Options& o) {
  sub->add_option("--ansatz,-a", o.ansatz, "cole-hopf, tanh-coth or sinh-cosh")
      ->required()
      ->check(CLI::IsMember({"cole-hopf", "tanh-coth", "sinh-cosh"}));
  sub->add_option("--amplitudes", o.amplitudes, "comma-separated amplitudes kept free (default all)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Traveling-wave solutions of seventh-order KdV equations"};
  app.require_subcommand(1);
  Options o;
  try {
    o.digits = default_digits();
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }

  auto* derive = app.add_subcommand("derive", "print the deduplicated algebraic system of an ansatz");
  add_equation(derive, o);
  add_ansatz(derive, o);
  derive->add_option("--json", o.json_path, "also write the system as JSON");

  auto* solve = app.add_subcommand("solve", "solve the system and print the parameter sets");
  add_equation(solve, o);
  add_ansatz(solve, o);
  solve->add_option("--degree-bound", o.degree_bound, "Groebner degree bound")->check(CLI::PositiveNumber)->capture_default_str();
  solve->add_option("--json", o.json_path, "JSON output path (default solutions.json)");

  auto* verify = app.add_subcommand("verify", "symbolic and numeric residuals of catalog entries");
  add_equation(verify, o);
  auto* id_opt = verify->add_option("--id", o.id, "catalog id (u0..u18, u0-printed, u0-bracketed)");
  verify->add_flag("--all", o.all, "every catalog entry")->excludes(id_opt);
  verify->add_flag("--fixtures", o.fixtures, "with --all, also check the printed one-soliton (expected to fail)");
  verify->add_option("--digits", o.digits, "numeric precision (default $KK7_PRECISION or 50)")->check(CLI::Range(30u, 10000u));
  verify->add_option("--samples", o.samples, "numeric samples")->check(CLI::Range(1, 100000))->capture_default_str();

  auto* cont = app.add_subcommand("continue", "continue a hyperbolic entry to its periodic partner");
  add_equation(cont, o);
  cont->add_option("--id", o.id, "catalog id")->required();

  auto* sim = app.add_subcommand("simulate", "pseudo-spectral run from a catalog solution");
  add_equation(sim, o);
  sim->add_option("--id", o.id, "catalog id of a non-singular solution")->required();
  sim->add_option("--mu", o.mu, "shape parameter (mu, or k for the one-soliton)")->capture_default_str();
  sim->add_option("--n", o.n, "grid points (power of two >= 16)")->capture_default_str();
  sim->add_option("--length", o.length, "domain length")->check(CLI::PositiveNumber)->capture_default_str();
  sim->add_option("--dt", o.dt, "time step")->check(CLI::PositiveNumber)->capture_default_str();
  sim->add_option("--T", o.final_time, "final time")->check(CLI::NonNegativeNumber)->capture_default_str();
  sim->add_option("--dealias", o.dealias, "padding ratio (>= 2.5)")->check(CLI::Range(2.5, 16.0))->capture_default_str();
  sim->add_option("--scheme", o.scheme, "etd-rk4 or if-rk4")
      ->check(CLI::IsMember({"etd-rk4", "if-rk4"}))
      ->capture_default_str();
  sim->add_option("--every", o.every, "diagnostics interval in steps")->check(CLI::PositiveNumber)->capture_default_str();
  sim->add_option("--retries", o.retries, "step halvings after a blow-up")->check(CLI::Range(0, 20))->capture_default_str();
  sim->add_option("--csv", o.json_path, "time-series CSV path (default simulate.csv)");
  sim->add_option("--state", o.state_path, "final state CSV path");
  sim->add_option("--tolerance", o.tolerance, "fail unless the final max error is below this");

  auto* cat = app.add_subcommand("catalog", "dump the solution catalog");
  cat->add_option("--format", o.format, "json or text")->check(CLI::IsMember({"json", "text"}))->capture_default_str();
  cat->add_option("--output,-o", o.output, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::string what = e.what();
    std::replace(what.begin(), what.end(), '\n', ' ');
    std::cerr << "error: " << what << '\n';
    return kUsage;
  }

  try {
    if (*derive) return run_derive(o);
    if (*solve) return run_solve(o);
    if (*verify) return run_verify(o);
    if (*cont) return run_continue(o);
    if (*sim) return run_simulate(o);
    if (*cat) return run_catalog(o);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DegreeBoundExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBound;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kCheckFailed;
  }
  return kUsage;
}
