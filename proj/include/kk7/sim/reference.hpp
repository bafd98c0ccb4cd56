#pragma once

// Closed-form solutions as initial data and exact references for the simulator.

#include "kk7/numeric/evaluate.hpp"
#include "kk7/sim/spectral.hpp"
#include "kk7/verify/catalog.hpp"

#include <stdexcept>

namespace kk7 {

/// u(x - shift, t), evaluated in 32-digit arithmetic and rounded once: the seventh derivative
/// amplifies sample noise by k_max^7 (about 1e9 on the default grid), so a few ulp of error in
/// a double evaluation of cosh and the quotient would already show at 1e-8.
/// Parameters not given default to the sample values.
inline Reference closed_form_reference(const ClosedFormSolution& sol, std::map<std::string, GaussianRational> params,
                                       double shift = 0) {
  if (is_singular(sol.kind)) throw std::invalid_argument("singular solution " + sol.id + " cannot be simulated");
  for (const auto& [name, v] : sol.sample_values) params.emplace(name, v);
  constexpr unsigned kDigits = 32;
  const unsigned saved = HpFloat::default_precision();
  HpFloat::default_precision(kDigits);
  Env<HpFloat> env;
  for (const auto& [name, v] : params) env[name] = to_complex<HpFloat>(v);
  HpFloat::default_precision(saved);
  Expr e = sol.expr;
  return [env, e, shift](double x, double t) mutable {
    const unsigned outer = HpFloat::default_precision();
    HpFloat::default_precision(kDigits);
    env["x"] = HpComplex(HpFloat(x) - HpFloat(shift));
    env["t"] = HpComplex(HpFloat(t));
    const double v = evaluate<HpFloat>(e, env).re.convert_to<double>();
    HpFloat::default_precision(outer);
    return v;
  };
}

/// Periodic extension of a localized profile: f(x) + sum_{0 < |j| <= images} (f(x + jL) - f_far),
/// with f_far the background value taken at distance (images + 1) L from `centre`.
inline Reference periodize(Reference f, double length, double centre, int images = 2) {
  return [f = std::move(f), length, centre, images](double x, double t) {
    const double far = f(centre + (images + 1) * length, t);
    double sum = f(x, t);
    for (int j = 1; j <= images; ++j) sum += f(x + j * length, t) + f(x - j * length, t) - 2 * far;
    return sum;
  };
}

}  // namespace kk7
