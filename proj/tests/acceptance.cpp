// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include "kk7/sim/reference.hpp"
#include "kk7/solver/pipeline.hpp"
#include "kk7/verify/verify.hpp"
#include "planted_systems.hpp"

#include <chrono>
#include <cstdio>
#include <iostream>
#include <set>
#include <sstream>

using namespace kk7;
using oracle::any_contains;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int n, bool ok, const std::string& what, const std::string& detail) {
  std::cout << (ok ? "PASS" : "FAIL") << " [" << n << "] " << what << ": " << detail << std::endl;
  failures += !ok;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

MultiPoly Q(const char* s) { return MultiPoly::parse(s); }

// Tolerances.
constexpr double kColeHopfSeconds = 30;
constexpr double kAnsatzSeconds = 300;
constexpr unsigned kDigits = 50;
constexpr int kSamples = 50;
const char* const kNumericTol = "1e-40";
constexpr double kSimError = 1e-6;
constexpr double kSimDrift = 1e-10;
constexpr double kSimSeconds = 300;
constexpr double kOrderRatio = 8;
constexpr double kAboveFloor = 10;  // a dt pair counts when its coarse error exceeds 10x the floor

void cole_hopf() {
  auto t0 = Clock::now();
  auto fs = solve_family(preset("kk7"), AnsatzSpec{Family::ColeHopf, std::nullopt});
  const double secs = seconds_since(t0);
  bool found = false;
  for (const auto& v : fs.varieties)
    found |= v.is_point() && v.values.size() == 3 && v.values.at("A") == Q("1/2") && v.values.at("B") == Q("-k^2/24") &&
             v.values.at("omega") == Q("-k^7/48");
  report(1, found && secs < kColeHopfSeconds, "Cole-Hopf reproduction",
         std::string(found ? "A = 1/2, B = -k^2/24, omega = -k^7/48 found" : "expected point missing") + " among " +
             std::to_string(fs.varieties.size()) + " varieties in " + sci(secs) + " s (limit 30 s)");
}

void cole_hopf_system() {
  // The eight printed bullets, with the speed written omega.
  const char* bullets[] = {
      "-A*k^9-42*A*B*k^7-504*A*B^2*k^5-2016*A*B^3*k^3+A*omega*k^2",
      "A*k^9+42*A*B*k^7+504*A*B^2*k^5+2016*A*B^3*k^3-A*omega*k^2",
      "-441*A^2*k^9+247*A*k^9-3276*A^2*B*k^7+2310*A*B*k^7-6048*A^2*B^2*k^5+3528*A*B^2*k^5-10080*A*B^3*k^3+5*A*omega*k^2",
      "441*A^2*k^9-247*A*k^9+3276*A^2*B*k^7-2310*A*B*k^7+6048*A^2*B^2*k^5-3528*A*B^2*k^5+10080*A*B^3*k^3-5*A*omega*k^2",
      "-3402*A^3*k^9+10143*A^2*k^9-4293*A*k^9-6048*A^3*B*k^7+15876*A^2*B*k^7-7938*A*B*k^7-18144*A^2*B^2*k^5+13608*A*B^2*k^5-18144*A*B^3*k^3+9*A*omega*k^2",
      "3402*A^3*k^9-10143*A^2*k^9+4293*A*k^9+6048*A^3*B*k^7-15876*A^2*B*k^7+7938*A*B*k^7+18144*A^2*B^2*k^5-13608*A*B^2*k^5+18144*A*B^3*k^3-9*A*omega*k^2",
      "-2016*A^4*k^9+18774*A^3*k^9-40320*A^2*k^9+15619*A*k^9-6048*A^3*B*k^7+19152*A^2*B*k^7-10290*A*B*k^7-12096*A^2*B^2*k^5+9576*A*B^2*k^5-10080*A*B^3*k^3+5*A*omega*k^2",
      "2016*A^4*k^9-18774*A^3*k^9+40320*A^2*k^9-15619*A*k^9+6048*A^3*B*k^7-19152*A^2*B*k^7+10290*A*B*k^7+12096*A^2*B^2*k^5-9576*A*B^2*k^5+10080*A*B^3*k^3-5*A*omega*k^2",
  };
  std::set<std::string> printed, derived;
  for (const char* b : bullets) printed.insert(content_normalize(Q(b)).to_string());
  auto sys = derive_family_system(preset("kk7"), AnsatzSpec{Family::ColeHopf, std::nullopt});
  for (const auto& e : sys.equations) derived.insert(content_normalize(e).to_string());
  report(2, printed.size() == 4 && printed == derived, "Cole-Hopf system match",
         "8 printed bullets collapse to " + std::to_string(printed.size()) + ", derived system has " +
             std::to_string(sys.size()) + " equations, normalized sets " + (printed == derived ? "equal" : "differ"));
}

void ansatz_sets() {
  auto t0 = Clock::now();
  auto tc = solve_family(preset("kk7"), AnsatzSpec{Family::TanhCoth, std::nullopt});
  auto pt = [](const char* c, const char* d, const char* lambda) {
    return oracle::Point{{"a", Q("0")}, {"b", Q("0")}, {"c", Q(c)}, {"d", Q(d)}, {"p", Q("mu^2/3")}, {"lambda", Q(lambda)}};
  };
  int tc_found = any_contains(tc.varieties, pt("-mu^2/2", "0", "4*mu^6/3")) +
                 any_contains(tc.varieties, pt("-mu^2/2", "-mu^2/2", "256*mu^6/3")) +
                 any_contains(tc.varieties, pt("0", "-mu^2/2", "4*mu^6/3"));
  auto sc = solve_family(preset("kk7"), AnsatzSpec{Family::SinhCosh, std::nullopt});
  int sc_found = 0;
  for (auto [c, d] : std::vector<std::pair<const char*, const char*>>{{"0", "-1"}, {"0", "1"}, {"-I", "0"}, {"I", "0"}})
    sc_found += any_contains(sc.varieties, {{"c", Q(c)}, {"d", Q(d)}, {"kappa", Q("mu^2/4")}, {"p", Q("-mu^2/24")},
                                            {"lambda", Q("mu^6/48")}});
  bool family = false;
  for (const auto& v : sc.varieties)
    family |= v.free_parameters == std::vector<std::string>{"d"} && v.values.count("kappa") &&
              v.values.at("kappa") == Q("mu^2/4") && v.values.at("p") == Q("-mu^2/24") &&
              v.values.at("lambda") == Q("mu^6/48") && v.relations.size() == 1 &&
              content_normalize(v.relations[0]) == Q("c^2-d^2+1");
  // The two d-parametric bullets (c = +-sqrt(d^2 - 1)) are both the family.
  sc_found += family ? 2 : 0;
  const double secs = seconds_since(t0);
  report(3, tc_found == 3 && sc_found == 6 && secs < kAnsatzSeconds, "Ansatz reproduction",
         "tanh-coth " + std::to_string(tc_found) + "/3 sets, sinh-cosh " + std::to_string(sc_found) +
             "/6 sets (family c^2 - d^2 + 1 = 0 " + (family ? "found" : "missing") + ") in " + sci(secs) +
             " s (limit 300 s)");
}

void residuals() {
  const auto k = preset("kk7");
  int exact = 0, numeric = 0;
  HpFloat worst = 0;
  NumericOptions opts;
  opts.digits = kDigits;
  opts.samples = kSamples;
  const auto cat = catalog();
  for (const auto& s : cat) {
    exact += symbolically_exact(s, k);
    auto r = numeric_residual(s, k, opts);
    numeric += r.max_abs < HpFloat(kNumericTol);
    worst = std::max(worst, r.max_abs);
  }
  const bool printed_fails = !symbolic_residual(printed_one_soliton(), k).is_zero();
  report(4, exact == 19 && numeric == 19 && cat.size() == 19 && printed_fails, "Residual certification",
         std::to_string(exact) + "/19 symbolic zero, " + std::to_string(numeric) + "/19 numeric < 1e-40 (50 digits + " +
             std::to_string(opts.guard_digits) + " guard, 50 samples, worst " + worst.str(3, std::ios::scientific) +
             "), printed one-soliton " + (printed_fails ? "fails as expected" : "unexpectedly passes"));
}

void continuation() {
  int ok = 0;
  std::string bad;
  for (int n = 1; n <= 13; n += 2) {
    const std::string id = "u" + std::to_string(n), partner = "u" + std::to_string(n + 1);
    auto got = periodic_continue(catalog_entry(id));
    if (got.id == partner && got.expr == canonical(catalog_entry(partner).expr))
      ++ok;
    else
      bad += " " + id;
  }
  report(5, ok == 7, "Periodic continuation", std::to_string(ok) + "/7 structurally equal" + (bad.empty() ? "" : ", differ:" + bad));
}

void consistency() {
  bool eq = equivalence_check(catalog_entry("u0"), catalog_entry("u9"), {{"k", Expr::symbol("mu")}, {"delta", Expr(0)}});
  report(6, eq, "Cross-method consistency", std::string("u0 under k -> mu, delta -> 0 ") + (eq ? "equals" : "differs from") + " u9");
}

void conservation() {
  const auto k = preset("kk7");
  auto F = flux_decompose(k);
  bool identity = F && expand(differentiate(*F, "x")) == expand(build_pde(k) - u_t());
  bool none = !flux_decompose(make_coefficients(0, 1, 0, 0, 0, 0, 0)).has_value();
  report(7, identity && none, "Conservation structure",
         std::string("kk7 flux ") + (F ? "found" : "missing") + ", d/dx F = RHS " + (identity ? "holds" : "fails") +
             ", (0,1,0,0,0,0,0) " + (none ? "has no flux" : "unexpectedly has a flux"));
}

void simulation() {
  constexpr double L = 40;
  auto t0 = Clock::now();
  auto ref = closed_form_reference(catalog_entry("u9"), {{"mu", 1}}, L / 2);
  auto s0 = GridState::sample(256, L, [&](double x) { return ref(x, 0); });
  SimConfig cfg{preset("kk7"), 1e-7, 0.05, 2.5, TimeScheme::EtdRk4};
  auto s = integrate(s0, cfg);
  const double err = diagnostics(s, ref).max_error;
  const double m0 = diagnostics(s0).mass;
  const double drift = std::abs(diagnostics(s).mass - m0) / std::abs(m0);

  // Refinement on the same grid: errors against the exact translate at dt, dt/2 and a
  // dt/4 run that estimates the floor.
  SimConfig short_cfg = cfg;
  short_cfg.final_time = 2e-3;
  auto levels = refinement_study(s0, short_cfg, 3, ref);
  const double floor = levels.back().error;
  int qualifying = 0, order_ok = 0;
  for (std::size_t l = 0; l + 2 < levels.size(); ++l)
    if (levels[l].error > kAboveFloor * floor) {
      ++qualifying;
      order_ok += levels[l].error / levels[l + 1].error >= kOrderRatio;
    }

  // Same initial data on a 32-point grid, where the temporal error is above round-off.
  auto coarse0 = GridState::sample(32, L, [&](double x) { return ref(x, 0); });
  auto coarse = refinement_study(coarse0, SimConfig{preset("kk7"), 2.5e-3, 1, 2.5, TimeScheme::EtdRk4}, 3);
  double min_ratio = 1e300;
  for (std::size_t l = 1; l < coarse.size(); ++l) min_ratio = std::min(min_ratio, coarse[l - 1].error / coarse[l].error);

  const double secs = seconds_since(t0);
  const bool ok = err < kSimError && drift < kSimDrift && order_ok == qualifying && min_ratio >= kOrderRatio &&
                  secs < kSimSeconds;
  std::ostringstream d;
  d << "u9 n=256 L=40 dt=1e-7 T=0.05: max error " << sci(err) << " (< 1e-6), mass drift " << sci(drift)
    << " (< 1e-10); dt halving on this grid: errors " << sci(levels[0].error) << ", " << sci(levels[1].error)
    << ", floor " << sci(floor) << ", " << qualifying << " pair(s) above 10x floor";
  d << "; n=32 temporal ratios >= " << sci(min_ratio) << " (>= 8); " << sci(secs) << " s (limit 300 s)";
  report(8, ok, "Simulation", d.str());
}

void planted() {
  int recovered = 0, confirmed = 0, spurious = 0;
  const auto systems = oracle::planted_systems(20, 20261018);
  for (const auto& p : systems) {
    bool planted_ok = true;
    for (const auto& e : p.system.equations) planted_ok &= e.substitute(p.root).is_zero();
    confirmed += planted_ok;
    auto vs = solve_variety(p.system);
    recovered += any_contains(vs, p.root);
    for (const auto& v : vs)
      if (v.is_point())
        for (const auto& e : p.system.equations) spurious += !e.substitute(v.values).is_zero();
  }
  report(9, recovered == 20 && confirmed == 20 && spurious == 0, "Solver oracle equivalence",
         std::to_string(recovered) + "/20 planted roots recovered, oracle confirms " + std::to_string(confirmed) +
             "/20 plantings, " + std::to_string(spurious) + " recovered points fail substitution");
}

}  // namespace

int main() {
  const std::pair<int, void (*)()> criteria[] = {{1, cole_hopf},     {2, cole_hopf_system}, {3, ansatz_sets},
                                                 {4, residuals},     {5, continuation},     {6, consistency},
                                                 {7, conservation},  {8, simulation},       {9, planted}};
  for (const auto& [n, run] : criteria) {
    try {
      run();
    } catch (const std::exception& e) {
      report(n, false, "criterion", std::string("exception: ") + e.what());
    }
  }
  return failures == 0 ? 0 : 1;
}
