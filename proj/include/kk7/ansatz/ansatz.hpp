#pragma once

// The three ansatz families and the derivation of their algebraic systems:
//   cole-hopf   u = A d^2/dx^2 log(1 + exp(k x - omega t + delta)) + B
//   tanh-coth   v = p + a tanh(mu xi) + b coth(mu xi) + c tanh^2(mu xi) + d coth^2(mu xi)
//   sinh-cosh   v = p + kappa / (1 + c sinh(mu xi) + d cosh(mu xi))

#include "kk7/algebra/poly_system.hpp"
#include "kk7/model/kdv7.hpp"
#include "kk7/symbolic/normal_form.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace kk7 {

enum class Family { ColeHopf, TanhCoth, SinhCosh };

inline const char* family_name(Family f) {
  switch (f) {
    case Family::ColeHopf: return "cole-hopf";
    case Family::TanhCoth: return "tanh-coth";
    case Family::SinhCosh: return "sinh-cosh";
  }
  return "?";
}

inline Family family_from_name(std::string_view s) {
  if (s == "cole-hopf") return Family::ColeHopf;
  if (s == "tanh-coth") return Family::TanhCoth;
  if (s == "sinh-cosh") return Family::SinhCosh;
  throw std::invalid_argument("unknown ansatz family '" + std::string(s) + "'");
}

struct AnsatzSpec {
  Family family = Family::TanhCoth;
  /// Amplitudes kept free (tanh-coth: subset of a,b,c,d; sinh-cosh: subset of c,d).
  /// Unset means all of them; the others are fixed to zero.
  std::optional<std::vector<std::string>> amplitudes;

  static std::vector<std::string> all_amplitudes(Family f) {
    switch (f) {
      case Family::TanhCoth: return {"a", "b", "c", "d"};
      case Family::SinhCosh: return {"c", "d"};
      case Family::ColeHopf: return {};
    }
    return {};
  }

  std::vector<std::string> active_amplitudes() const {
    auto all = all_amplitudes(family);
    if (!amplitudes) return all;
    if (family == Family::ColeHopf) throw std::invalid_argument("cole-hopf has no amplitude restriction");
    if (amplitudes->empty()) throw std::invalid_argument("amplitude restriction is empty");
    for (const auto& a : *amplitudes)
      if (std::find(all.begin(), all.end(), a) == all.end())
        throw std::invalid_argument("unknown amplitude '" + a + "' for " + family_name(family));
    std::vector<std::string> out;
    for (const auto& a : all)
      if (std::find(amplitudes->begin(), amplitudes->end(), a) != amplitudes->end()) out.push_back(a);
    return out;
  }

  /// Unknowns of the algebraic system (the shape parameter k or mu is not among them).
  std::vector<std::string> unknowns() const {
    switch (family) {
      case Family::ColeHopf: return {"A", "B", "omega"};
      case Family::TanhCoth: {
        auto u = active_amplitudes();
        u.push_back("p");
        u.push_back("lambda");
        return u;
      }
      case Family::SinhCosh: {
        auto u = active_amplitudes();
        u.push_back("kappa");
        u.push_back("p");
        u.push_back("lambda");
        return u;
      }
    }
    return {};
  }

  /// Frequency-like symbol fixing the scale (k or mu).
  std::string scale_symbol() const { return family == Family::ColeHopf ? "k" : "mu"; }

  /// Weights rendering every derived equation weighted-homogeneous.
  std::map<std::string, int> weights() const {
    switch (family) {
      case Family::ColeHopf: return {{"k", 1}, {"A", 0}, {"B", 2}, {"omega", 7}};
      case Family::TanhCoth: return {{"mu", 1}, {"a", 2}, {"b", 2}, {"c", 2}, {"d", 2}, {"p", 2}, {"lambda", 6}};
      case Family::SinhCosh: return {{"mu", 1}, {"c", 0}, {"d", 0}, {"kappa", 2}, {"p", 2}, {"lambda", 6}};
    }
    return {};
  }
};

/// Phase theta with zeta = exp(theta).
inline Expr ansatz_phase(const AnsatzSpec& spec) {
  if (spec.family == Family::ColeHopf) return Expr::parse("k*x - omega*t + delta");
  return Expr::parse("mu*xi");
}

inline Expr build_ansatz(const AnsatzSpec& spec) {
  const auto active = spec.active_amplitudes();
  auto amp = [&](const char* name) {
    return std::find(active.begin(), active.end(), name) != active.end() ? Expr::symbol(name) : Expr(0);
  };
  switch (spec.family) {
    case Family::ColeHopf: {
      Expr log_term = Expr::apply(Fn::Log, Expr(1) + Expr::apply(Fn::Exp, ansatz_phase(spec)));
      return expand(Expr::symbol("A") * differentiate(log_term, "x", 2) + Expr::symbol("B"));
    }
    case Family::TanhCoth: {
      Expr th = Expr::parse("tanh(mu*xi)"), ct = Expr::parse("coth(mu*xi)");
      return Expr::symbol("p") + amp("a") * th + amp("b") * ct + amp("c") * th.pow(2) + amp("d") * ct.pow(2);
    }
    case Family::SinhCosh: {
      Expr den = Expr(1) + amp("c") * Expr::parse("sinh(mu*xi)") + amp("d") * Expr::parse("cosh(mu*xi)");
      return Expr::symbol("p") + Expr::symbol("kappa") / den;
    }
  }
  return Expr(0);
}

/// Substitutes `ansatz` for the unknown function of `equation` (u(x,t) or v(xi)) and rewrites
/// the residual as a rational function of zeta = exp(phase). Derivatives of the unknown use
/// d/dvar = (d phase/d var) zeta d/dzeta on the normal form of the ansatz.
inline RationalForm residual_form(const Expr& equation, const Expr& ansatz, const Expr& phase) {
  auto normalizer = ExponentialNormalizer::with_phase(phase);
  RationalForm base = normalizer(ansatz);
  MultiPoly theta = to_multipoly(expand(phase));
  std::map<DerivOrders, RationalForm> memo;
  auto hook = [&](const Expr& f) -> RationalForm {
    const DerivOrders& orders = f.node().orders;
    auto it = memo.find(orders);
    if (it != memo.end()) return it->second;
    RationalForm r = base;
    for (const auto& [var, n] : orders) {
      MultiPoly rate = theta.derivative(var);
      for (int j = 0; j < n; ++j) r = r.derivative(rate);
    }
    memo.emplace(orders, r);
    return r;
  };
  auto residual_normalizer = ExponentialNormalizer::with_phase(phase);
  residual_normalizer.set_func_hook(hook);
  return residual_normalizer(equation);
}

/// residual_form, denominators cleared, one equation per zeta power of the numerator.
inline PolySystem derive_system(const Expr& equation, const Expr& ansatz, const Expr& phase) {
  if (ansatz.is_zero()) throw std::invalid_argument("derive_system: empty ansatz");
  return laurent_collect(residual_form(equation, ansatz, phase));
}

inline PolySystem derive_system(const TravelingWaveOde& ode, const Expr& ansatz, const Expr& phase) {
  return derive_system(ode.residual, ansatz, phase);
}

/// Builds the ansatz of `spec`, derives its system for the equation with coefficients `k`
/// (cole-hopf against the PDE, the others against the traveling-wave ODE) and attaches the
/// unknowns and nondegeneracy conditions.
inline PolySystem derive_family_system(const PdeCoefficients& k, const AnsatzSpec& spec) {
  Expr pde = build_pde(k);
  Expr ansatz = build_ansatz(spec);
  PolySystem sys = spec.family == Family::ColeHopf ? derive_system(pde, ansatz, ansatz_phase(spec))
                                                   : derive_system(reduce_to_traveling_ode(pde), ansatz, ansatz_phase(spec));
  sys.unknowns = spec.unknowns();
  auto var = [](const std::string& s) { return MultiPoly::variable(s); };
  switch (spec.family) {
    case Family::ColeHopf:
      sys.nonzero = {var("A"), var("k")};
      break;
    case Family::TanhCoth: {
      sys.nonzero = {var("mu")};
      std::vector<MultiPoly> amps;
      for (const auto& a : spec.active_amplitudes()) amps.push_back(var(a));
      sys.nonzero_any.push_back(std::move(amps));
      break;
    }
    case Family::SinhCosh: {
      sys.nonzero = {var("mu"), var("kappa")};
      std::vector<MultiPoly> amps;
      for (const auto& a : spec.active_amplitudes()) amps.push_back(var(a));
      sys.nonzero_any.push_back(std::move(amps));
      break;
    }
  }
  return sys;
}

/// True when every term of p has the same total weight (unlisted names weigh 0).
inline bool weighted_homogeneous(const MultiPoly& p, const std::map<std::string, int>& weights) {
  std::optional<long> w0;
  for (const auto& t : p.terms()) {
    long w = 0;
    for (std::size_t k = 0; k < p.vars().size(); ++k) {
      auto it = weights.find(p.vars()[k]);
      if (it != weights.end()) w += static_cast<long>(it->second) * t.m.e[k];
    }
    if (!w0) w0 = w;
    if (*w0 != w) return false;
  }
  return true;
}

}  // namespace kk7
