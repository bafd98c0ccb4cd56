#pragma once

// Closed-form solutions of the Kaup-Kupershmidt member: the one-soliton u0 and the pairs
// u1..u18 (odd: hyperbolic form, even: the trigonometric partner from mu -> i mu).

#include "kk7/algebra/multipoly.hpp"
#include "kk7/symbolic/expr.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace kk7 {

enum class SolutionKind { Soliton, Periodic, SingularHyperbolic, SingularPeriodic };
enum class Provenance { PaperCatalog, DerivedByPipeline };

inline const char* kind_name(SolutionKind k) {
  switch (k) {
    case SolutionKind::Soliton: return "soliton";
    case SolutionKind::Periodic: return "periodic";
    case SolutionKind::SingularHyperbolic: return "singular-hyperbolic";
    case SolutionKind::SingularPeriodic: return "singular-periodic";
  }
  return "?";
}

inline bool is_periodic(SolutionKind k) { return k == SolutionKind::Periodic || k == SolutionKind::SingularPeriodic; }
inline bool is_singular(SolutionKind k) {
  return k == SolutionKind::SingularHyperbolic || k == SolutionKind::SingularPeriodic;
}

inline const char* provenance_name(Provenance p) {
  return p == Provenance::PaperCatalog ? "paper-catalog" : "derived-by-pipeline";
}

struct ClosedFormSolution {
  std::string id;
  std::string family;  // cole-hopf, tanh-coth or sinh-cosh
  Expr expr;           // u(x, t)
  /// zeta = exp(phase) renders every atom of expr a Laurent monomial.
  Expr phase;
  SolutionKind kind = SolutionKind::Soliton;
  Provenance provenance = Provenance::PaperCatalog;
  /// Ansatz parameter values (including the speed lambda or omega).
  std::map<std::string, Expr> bindings;
  std::string speed_symbol = "lambda";
  /// Symbols the expression may use besides x and t.
  std::vector<std::string> parameters;
  /// Algebraic side conditions on the parameters (e.g. c^2 - d^2 + 1 for c = sqrt(d^2 - 1)).
  std::vector<MultiPoly> constraints;
  /// Values for numeric checks (must satisfy the constraints).
  std::map<std::string, GaussianRational> sample_values;

  const Expr& speed() const { return bindings.at(speed_symbol); }
};

namespace detail {

inline ClosedFormSolution entry(std::string id, std::string family, const char* expr, const char* phase,
                                SolutionKind kind, std::map<std::string, const char*> bindings,
                                std::vector<std::string> parameters) {
  ClosedFormSolution s;
  s.id = std::move(id);
  s.family = std::move(family);
  s.expr = Expr::parse(expr);
  s.phase = Expr::parse(phase);
  s.kind = kind;
  for (const auto& [k, v] : bindings) s.bindings[k] = Expr::parse(v);
  if (s.family == "cole-hopf") s.speed_symbol = "omega";
  s.parameters = std::move(parameters);
  // Non-unit samples, so that a wrong power of the wave number shows up numerically.
  for (const auto& p : s.parameters) s.sample_values[p] = GaussianRational(6, 5);
  if (s.sample_values.count("delta")) s.sample_values["delta"] = GaussianRational(1, 3);
  return s;
}

}  // namespace detail

/// The printed closed form of the one-soliton, lacking k^2 in its second term. It fails
/// verification and is kept as a fixture, not as a catalog member.
inline ClosedFormSolution printed_one_soliton() {
  return detail::entry("u0-printed", "cole-hopf", "-k^2/24 + 1/(4*(1 + cosh(k*x + k^7/48*t + delta)))",
                       "k*x + k^7/48*t + delta", SolutionKind::Soliton,
                       {{"A", "1/2"}, {"B", "-k^2/24"}, {"omega", "-k^7/48"}}, {"k", "delta"});
}

/// The unsimplified one-soliton as a quotient of exponential polynomials.
inline ClosedFormSolution bracketed_one_soliton() {
  return detail::entry("u0-bracketed", "cole-hopf",
                       "-(1 - 10*exp(k^7/48*t + k*x + delta) + exp(k^7/24*t + 2*k*x + 2*delta))*k^2"
                       "/(24*(1 + exp(k^7/48*t + k*x + delta))^2)",
                       "k*x + k^7/48*t + delta", SolutionKind::Soliton,
                       {{"A", "1/2"}, {"B", "-k^2/24"}, {"omega", "-k^7/48"}}, {"k", "delta"});
}

inline std::vector<ClosedFormSolution> catalog() {
  using detail::entry;
  using K = SolutionKind;
  const std::vector<std::string> mu{"mu"};
  std::vector<ClosedFormSolution> out;

  out.push_back(entry("u0", "cole-hopf", "-k^2/24 + k^2/(4*(1 + cosh(k*x + k^7/48*t + delta)))",
                      "k*x + k^7/48*t + delta", K::Soliton,
                      {{"A", "1/2"}, {"B", "-k^2/24"}, {"omega", "-k^7/48"}}, {"k", "delta"}));

  // tanh-coth pairs
  const char* hyp43 = "mu*(x + 4*mu^6/3*t)";
  const char* trig43 = "I*mu*(x - 4*mu^6/3*t)";
  const char* hyp256 = "mu*(x + 256*mu^6/3*t)";
  const char* trig256 = "I*mu*(x - 256*mu^6/3*t)";
  out.push_back(entry("u1", "tanh-coth", "mu^2/3 - mu^2/2*coth(mu*(x + 4*mu^6/3*t))^2", hyp43, K::SingularHyperbolic,
                      {{"a", "0"}, {"b", "0"}, {"c", "0"}, {"d", "-mu^2/2"}, {"p", "mu^2/3"}, {"lambda", "4*mu^6/3"}},
                      mu));
  out.push_back(entry("u2", "tanh-coth", "-mu^2/3 - mu^2/2*cot(mu*(x - 4*mu^6/3*t))^2", trig43, K::SingularPeriodic,
                      {{"a", "0"}, {"b", "0"}, {"c", "0"}, {"d", "mu^2/2"}, {"p", "-mu^2/3"}, {"lambda", "-4*mu^6/3"}},
                      mu));
  out.push_back(entry("u3", "tanh-coth", "mu^2/3 - mu^2/2*tanh(mu*(x + 4*mu^6/3*t))^2", hyp43, K::Soliton,
                      {{"a", "0"}, {"b", "0"}, {"c", "-mu^2/2"}, {"d", "0"}, {"p", "mu^2/3"}, {"lambda", "4*mu^6/3"}},
                      mu));
  out.push_back(entry("u4", "tanh-coth", "-mu^2/3 - mu^2/2*tan(mu*(x - 4*mu^6/3*t))^2", trig43, K::SingularPeriodic,
                      {{"a", "0"}, {"b", "0"}, {"c", "mu^2/2"}, {"d", "0"}, {"p", "-mu^2/3"}, {"lambda", "-4*mu^6/3"}},
                      mu));
  out.push_back(entry("u5", "tanh-coth",
                      "mu^2/3 - mu^2/2*coth(mu*(x + 256*mu^6/3*t))^2 - mu^2/2*tanh(mu*(x + 256*mu^6/3*t))^2", hyp256,
                      K::SingularHyperbolic,
                      {{"a", "0"}, {"b", "0"}, {"c", "-mu^2/2"}, {"d", "-mu^2/2"}, {"p", "mu^2/3"},
                       {"lambda", "256*mu^6/3"}},
                      mu));
  out.push_back(entry("u6", "tanh-coth",
                      "-mu^2/3 - mu^2/2*cot(mu*(x - 256*mu^6/3*t))^2 - mu^2/2*tan(mu*(x - 256*mu^6/3*t))^2", trig256,
                      K::SingularPeriodic,
                      {{"a", "0"}, {"b", "0"}, {"c", "mu^2/2"}, {"d", "mu^2/2"}, {"p", "-mu^2/3"},
                       {"lambda", "-256*mu^6/3"}},
                      mu));

  // sinh-cosh pairs; the trigonometric bindings are those of the ansatz after mu -> i mu.
  const char* hyp48 = "mu*(x + mu^6/48*t)";
  const char* trig48 = "I*mu*(x - mu^6/48*t)";
  auto sc = [](const char* c, const char* d, bool trig) {
    std::map<std::string, const char*> b{{"c", c}, {"d", d}};
    b["kappa"] = trig ? "-mu^2/4" : "mu^2/4";
    b["p"] = trig ? "mu^2/24" : "-mu^2/24";
    b["lambda"] = trig ? "-mu^6/48" : "mu^6/48";
    return b;
  };
  out.push_back(entry("u7", "sinh-cosh", "-mu^2/24 + mu^2/(4*(1 - cosh(mu*(x + mu^6/48*t))))", hyp48,
                      K::SingularHyperbolic, sc("0", "-1", false), mu));
  out.push_back(entry("u8", "sinh-cosh", "mu^2/24 - mu^2/(4*(1 - cos(mu*(x - mu^6/48*t))))", trig48,
                      K::SingularPeriodic, sc("0", "-1", true), mu));
  out.push_back(entry("u9", "sinh-cosh", "-mu^2/24 + mu^2/(4*(1 + cosh(mu*(x + mu^6/48*t))))", hyp48, K::Soliton,
                      sc("0", "1", false), mu));
  out.push_back(entry("u10", "sinh-cosh", "mu^2/24 - mu^2/(4*(1 + cos(mu*(x - mu^6/48*t))))", trig48,
                      K::SingularPeriodic, sc("0", "1", true), mu));
  out.push_back(entry("u11", "sinh-cosh", "-mu^2/24 + mu^2/(4*(1 - I*sinh(mu*(x + mu^6/48*t))))", hyp48, K::Soliton,
                      sc("-I", "0", false), mu));
  out.push_back(entry("u12", "sinh-cosh", "mu^2/24 - mu^2/(4*(1 + sin(mu*(x - mu^6/48*t))))", trig48,
                      K::SingularPeriodic, sc("-I", "0", true), mu));
  out.push_back(entry("u13", "sinh-cosh", "-mu^2/24 + mu^2/(4*(1 + I*sinh(mu*(x + mu^6/48*t))))", hyp48, K::Soliton,
                      sc("I", "0", false), mu));
  out.push_back(entry("u14", "sinh-cosh", "mu^2/24 - mu^2/(4*(1 - sin(mu*(x - mu^6/48*t))))", trig48,
                      K::SingularPeriodic, sc("I", "0", true), mu));

  // The d-family: c stands for +sqrt(d^2 - 1), s for +sqrt(1 - d^2).
  const MultiPoly hyp_circle = MultiPoly::parse("c^2 - d^2 + 1"), trig_circle = MultiPoly::parse("s^2 + d^2 - 1");
  auto family = [&](const char* id, const char* expr, bool trig, const char* c) {
    auto s = entry(id, "sinh-cosh", expr, trig ? trig48 : hyp48, trig ? K::SingularPeriodic : K::Soliton,
                   sc(c, "d", trig), trig ? std::vector<std::string>{"mu", "d", "s"} : std::vector<std::string>{"mu", "d", "c"});
    s.constraints = {trig ? trig_circle : hyp_circle};
    if (trig) {
      s.sample_values["d"] = GaussianRational(3, 5);
      s.sample_values["s"] = GaussianRational(4, 5);
    } else {
      s.sample_values["d"] = GaussianRational(5, 4);
      s.sample_values["c"] = GaussianRational(3, 4);
    }
    return s;
  };
  out.push_back(family("u15", "-mu^2/24 + mu^2/(4*(1 + d*cosh(mu*(x + mu^6/48*t)) + c*sinh(mu*(x + mu^6/48*t))))",
                       false, "c"));
  out.push_back(family("u16", "mu^2/24 - mu^2/(4*(1 + d*cos(mu*(x - mu^6/48*t)) + s*sin(mu*(x - mu^6/48*t))))",
                       true, "-I*s"));
  out.push_back(family("u17", "-mu^2/24 + mu^2/(4*(1 + d*cosh(mu*(x + mu^6/48*t)) - c*sinh(mu*(x + mu^6/48*t))))",
                       false, "-c"));
  out.push_back(family("u18", "mu^2/24 - mu^2/(4*(1 + d*cos(mu*(x - mu^6/48*t)) - s*sin(mu*(x - mu^6/48*t))))",
                       true, "I*s"));
  return out;
}

inline ClosedFormSolution catalog_entry(const std::string& id) {
  for (auto& s : catalog())
    if (s.id == id) return s;
  if (id == "u0-printed") return printed_one_soliton();
  throw std::invalid_argument("no catalog entry '" + id + "'");
}

}  // namespace kk7
