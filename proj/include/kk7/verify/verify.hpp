#pragma once

// Certification of closed-form solutions: exact residual through the exponential normal form,
// high-precision numeric residual through direct differentiation, continuation mu -> i mu,
// equivalence of two closed forms and JSON export.

#include "kk7/ansatz/ansatz.hpp"
#include "kk7/numeric/evaluate.hpp"
#include "kk7/solver/groebner.hpp"
#include "kk7/solver/solve.hpp"
#include "kk7/verify/catalog.hpp"

#include "json.hpp"

#include <algorithm>
#include <optional>
#include <random>
#include <regex>
#include <stdexcept>
#include <string>
#include <vector>

namespace kk7 {

/// Substitutes the unknown function (u or v) of `equation` and its derivatives by the
/// corresponding derivatives of `sol`.
inline Expr plug_in(const Expr& equation, const Expr& sol) {
  std::map<DerivOrders, Expr> memo;
  return expand(rebuild(equation, [&](const Expr& leaf) -> std::optional<Expr> {
    if (leaf.kind() != Kind::Func) return std::nullopt;
    const DerivOrders& orders = leaf.node().orders;
    auto it = memo.find(orders);
    if (it != memo.end()) return it->second;
    Expr d = sol;
    for (const auto& [var, n] : orders) d = differentiate(d, var, n);
    memo.emplace(orders, d);
    return d;
  }));
}

/// Laurent polynomial in zeta with zeta := exp(phase).
inline Expr laurent_to_expr(const LaurentPoly& p, const Expr& phase) {
  std::vector<Expr> terms;
  for (const auto& [k, c] : p.coefficients()) {
    Expr coeff = Expr::from_poly(c);
    terms.push_back(k == 0 ? coeff : coeff * Expr::apply(Fn::Exp, Expr(k) * phase));
  }
  return Expr::sum(std::move(terms));
}

inline Expr rational_to_expr(const RationalForm& r, const Expr& phase) {
  if (r.is_zero()) return Expr(0);
  Expr out = laurent_to_expr(r.numerator(), phase);
  for (const auto& [f, e] : r.factors()) out = out * laurent_to_expr(f, phase).pow(-e);
  return out;
}

namespace detail {

inline std::optional<GroebnerBasis> constraint_basis(const std::vector<MultiPoly>& constraints) {
  if (constraints.empty()) return std::nullopt;
  return groebner_basis(constraints);
}

}  // namespace detail

/// The PDE residual of `sol` as a rational form in zeta = exp(sol.phase), numerator
/// coefficients reduced modulo the solution's constraints.
inline RationalForm residual_rational_form(const ClosedFormSolution& sol, const PdeCoefficients& k) {
  RationalForm r = residual_form(build_pde(k), sol.expr, sol.phase);
  if (auto gb = detail::constraint_basis(sol.constraints))
    r = r.map_numerator([&](const MultiPoly& c) { return gb->reduce(c); });
  return r;
}

/// Canonical zero exactly when sol solves the equation with coefficients k.
inline Expr symbolic_residual(const ClosedFormSolution& sol, const PdeCoefficients& k) {
  return rational_to_expr(residual_rational_form(sol, k), sol.phase);
}

inline bool symbolically_exact(const ClosedFormSolution& sol, const PdeCoefficients& k) {
  return residual_rational_form(sol, k).is_zero();
}

struct NumericResidual {
  HpFloat max_abs = 0;
  int accepted = 0;
  int rejected = 0;
};

struct NumericOptions {
  int samples = 50;
  unsigned digits = 50;
  /// Extra working digits: within the pole guard the seventh derivative reaches
  /// |denominator|^-9 ~ 1e27, and the residual is a cancellation of terms that large.
  unsigned guard_digits = 30;
  double pole_guard = 1e-3;
  double box = 5;
  std::uint64_t seed = 7;
};

/// Maximum |residual| over pseudo-random samples (x, t) in [-box, box]^2, evaluated from the
/// symbolically differentiated expression in MPFR arithmetic. Samples where any denominator
/// drops below the pole guard are rejected.
inline NumericResidual numeric_residual(const ClosedFormSolution& sol, const PdeCoefficients& k,
                                        const std::map<std::string, GaussianRational>& params,
                                        const NumericOptions& opts = {}) {
  if (opts.digits < 30) throw std::invalid_argument("numeric_residual: precision below 30 digits");
  Expr residual = plug_in(build_pde(k), sol.expr);
  unsigned saved = HpFloat::default_precision();
  HpFloat::default_precision(opts.digits + opts.guard_digits);
  Env<HpFloat> env;
  for (const auto& [name, v] : params) env[name] = to_complex<HpFloat>(v);
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> coord(-opts.box, opts.box);
  NumericResidual out;
  const HpFloat guard(opts.pole_guard);
  for (int s = 0; s < opts.samples; ++s) {
    env["x"] = HpComplex(HpFloat(coord(rng)));
    env["t"] = HpComplex(HpFloat(coord(rng)));
    EvalGuard<HpFloat> g;
    HpComplex r = evaluate<HpFloat>(residual, env, &g);
    if (g.min_denominator < guard) {
      ++out.rejected;
      continue;
    }
    ++out.accepted;
    out.max_abs = std::max(out.max_abs, HpFloat(abs(r)));
  }
  HpFloat::default_precision(saved);
  if (out.accepted == 0) throw std::runtime_error("numeric_residual: every sample rejected by the pole guard");
  return out;
}

inline NumericResidual numeric_residual(const ClosedFormSolution& sol, const PdeCoefficients& k,
                                        const NumericOptions& opts = {}) {
  return numeric_residual(sol, k, sol.sample_values, opts);
}

namespace detail {

inline bool has_pole(const Expr& e) {
  if (e.kind() == Kind::Pow && e.node().exponent < 0) return true;
  if (e.kind() == Kind::Apply && (e.node().fn == Fn::Tan || e.node().fn == Fn::Cot || e.node().fn == Fn::Coth))
    return true;
  return std::any_of(e.children().begin(), e.children().end(), [](const Expr& c) { return has_pole(c); });
}

inline std::string partner_id(const std::string& id) {
  std::smatch m;
  static const std::regex pat("u([0-9]+)");
  if (std::regex_match(id, m, pat)) {
    int n = std::stoi(m[1]);
    if (n % 2 == 1) return "u" + std::to_string(n + 1);
  }
  return id + "-periodic";
}

}  // namespace detail

/// mu -> i mu followed by the rewrite to a real form (sinh(iz) = i sin z, cosh(iz) = cos z,
/// tanh(iz) = i tan z, coth(iz) = -i cot z are applied by the canonical builders). For the
/// d-family the amplitude c = sqrt(d^2 - 1) becomes c = -i s with s^2 = 1 - d^2.
inline ClosedFormSolution periodic_continue(const ClosedFormSolution& sol) {
  if (is_periodic(sol.kind)) throw std::invalid_argument("periodic_continue: " + sol.id + " is already periodic");
  std::map<std::string, Expr> rebind{{"mu", Expr::parse("I*mu")}};
  ClosedFormSolution out = sol;
  const MultiPoly circle = MultiPoly::parse("c^2 - d^2 + 1");
  bool on_circle = std::any_of(sol.constraints.begin(), sol.constraints.end(),
                               [&](const MultiPoly& p) { return content_normalize(p) == circle; });
  if (on_circle) {
    rebind["c"] = Expr::parse("-I*s");
    out.constraints = {MultiPoly::parse("s^2 + d^2 - 1")};
    std::replace(out.parameters.begin(), out.parameters.end(), std::string("c"), std::string("s"));
    GaussianRational c = out.sample_values.count("c") ? out.sample_values.at("c") : GaussianRational(0);
    out.sample_values.erase("c");
    out.sample_values["s"] = GaussianRational::i() * c;
  }
  auto apply = [&](const Expr& e) { return expand(substitute(e, rebind)); };
  out.expr = apply(sol.expr);
  out.phase = apply(sol.phase);
  for (auto& [name, v] : out.bindings) v = apply(v);
  if (contains_imaginary_unit(out.expr))
    throw std::domain_error("periodic_continue: " + sol.id + " has no real trigonometric form: " + out.expr.to_infix());
  out.id = detail::partner_id(sol.id);
  out.kind = detail::has_pole(out.expr) ? SolutionKind::SingularPeriodic : SolutionKind::Periodic;
  return out;
}

/// Canonical form used for structural comparison.
inline Expr canonical(const Expr& e) { return expand(e); }

namespace detail {

// x-slope of the first exponential, hyperbolic or trigonometric atom (trigonometric atoms
// count through i, matching the normalizer).
inline std::optional<MultiPoly> atom_frequency(const Expr& e, const std::string& var) {
  if (e.kind() == Kind::Apply && e.node().fn != Fn::Log) {
    MultiPoly slope = to_multipoly(expand(e.children()[0])).derivative(var);
    if (!slope.is_zero()) {
      Fn f = e.node().fn;
      bool trig = f == Fn::Sin || f == Fn::Cos || f == Fn::Tan || f == Fn::Cot;
      return trig ? slope.scaled(GaussianRational::i()) : slope;
    }
  }
  for (const auto& c : e.children())
    if (auto f = atom_frequency(c, var)) return f;
  return std::nullopt;
}

}  // namespace detail

/// True iff s1 (after the identification) and s2 agree as functions: their difference has
/// the zero exponential normal form, modulo the constraints of both.
inline bool equivalence_check(const ClosedFormSolution& s1, const ClosedFormSolution& s2,
                              const std::map<std::string, Expr>& identification = {}) {
  Expr diff = expand(substitute(s1.expr, identification) - s2.expr);
  if (diff.is_zero()) return true;
  auto freq = detail::atom_frequency(diff, "x");
  if (!freq) return false;  // a nonzero expression without atoms in x
  RationalForm r = exponential_normal_form(diff, "x", Expr::from_poly(*freq));
  std::vector<MultiPoly> constraints = s1.constraints;
  constraints.insert(constraints.end(), s2.constraints.begin(), s2.constraints.end());
  if (auto gb = detail::constraint_basis(constraints))
    r = r.map_numerator([&](const MultiPoly& c) { return gb->reduce(c); });
  return r.is_zero();
}

/// A pipeline parameter set as a closed form in x, t (relations become constraints).
inline ClosedFormSolution solution_from_variety(const AnsatzSpec& spec, const SolutionVariety& v, std::string id) {
  ClosedFormSolution s;
  s.id = std::move(id);
  s.family = family_name(spec.family);
  s.provenance = Provenance::DerivedByPipeline;
  for (const auto& [name, val] : v.values) s.bindings[name] = Expr::from_poly(val);
  s.constraints = v.relations;
  std::map<std::string, Expr> values = s.bindings;
  Expr ansatz = substitute(build_ansatz(spec), values);
  Expr phase = substitute(ansatz_phase(spec), values);
  if (spec.family == Family::ColeHopf) {
    s.speed_symbol = "omega";
    if (!s.bindings.count("omega")) s.bindings["omega"] = Expr::symbol("omega");
  } else {
    s.speed_symbol = "lambda";
    Expr speed = s.bindings.count("lambda") ? s.bindings.at("lambda") : Expr::symbol("lambda");
    if (!s.bindings.count("lambda")) s.bindings["lambda"] = speed;
    std::map<std::string, Expr> xi{{"xi", Expr::symbol("x") + speed * Expr::symbol("t")}};
    ansatz = substitute(ansatz, xi);
    phase = substitute(phase, xi);
  }
  s.expr = expand(ansatz);
  s.phase = expand(phase);
  for (const auto& name : free_symbols(s.expr))
    if (name != "x" && name != "t") s.parameters.push_back(name);
  s.kind = detail::has_pole(s.expr) ? SolutionKind::SingularHyperbolic : SolutionKind::Soliton;
  return s;
}

inline nlohmann::json to_json(const ClosedFormSolution& s) {
  nlohmann::json j;
  j["id"] = s.id;
  j["family"] = s.family;
  j["kind"] = kind_name(s.kind);
  j["provenance"] = provenance_name(s.provenance);
  nlohmann::json b = nlohmann::json::object();
  for (const auto& [name, v] : s.bindings)
    if (name != s.speed_symbol) b[name] = v.to_infix();
  j["bindings"] = b;
  j[s.speed_symbol] = s.bindings.count(s.speed_symbol) ? s.speed().to_infix() : s.speed_symbol;
  j["parameters"] = s.parameters;
  nlohmann::json c = nlohmann::json::array();
  for (const auto& p : s.constraints) c.push_back(p.to_string() + " = 0");
  j["constraints"] = c;
  j["expr"] = s.expr.to_infix();
  j["canonical"] = s.expr.serialize();
  return j;
}

inline nlohmann::json catalog_json(const std::vector<ClosedFormSolution>& sols) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& s : sols) out.push_back(to_json(s));
  return out;
}

}  // namespace kk7
