#pragma once

// Numeric evaluation of expressions, polynomials and rational forms.

#include "kk7/numeric/complex.hpp"
#include "kk7/symbolic/normal_form.hpp"

#include <functional>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>

namespace kk7 {

template <class T>
using Env = std::map<std::string, Complex<T>>;

/// Tracks the smallest magnitude of any denominator met during evaluation (reciprocal powers
/// and the implicit denominators of tanh, coth, tan, cot).
template <class T>
struct EvalGuard {
  T min_denominator = T(std::numeric_limits<double>::max());
  void see(const Complex<T>& d) {
    T a = abs(d);
    if (a < min_denominator) min_denominator = a;
  }
};

template <class T>
Complex<T> to_complex(const GaussianRational& c) {
  auto conv = [](const mpq_class& q) { return T(q.get_num().get_str()) / T(q.get_den().get_str()); };
  return {conv(c.re()), conv(c.im())};
}

template <>
inline Complex<double> to_complex<double>(const GaussianRational& c) {
  return {c.re().get_d(), c.im().get_d()};
}

template <class T>
Complex<T> evaluate(const Expr& e, const Env<T>& env, EvalGuard<T>* guard = nullptr,
                    const std::function<Complex<T>(const Expr&)>& func = {}) {
  auto rec = [&](const Expr& x) { return evaluate<T>(x, env, guard, func); };
  switch (e.kind()) {
    case Kind::Const: return to_complex<T>(e.value());
    case Kind::Symbol: {
      auto it = env.find(e.name());
      if (it == env.end()) throw std::invalid_argument("evaluate: unbound symbol " + e.name());
      return it->second;
    }
    case Kind::Func:
      if (!func) throw std::invalid_argument("evaluate: unknown function " + e.to_infix());
      return func(e);
    case Kind::Sum: {
      Complex<T> acc(0);
      for (const auto& c : e.children()) acc += rec(c);
      return acc;
    }
    case Kind::Product: {
      Complex<T> acc(1);
      for (const auto& c : e.children()) acc *= rec(c);
      return acc;
    }
    case Kind::Pow: {
      Complex<T> b = rec(e.children()[0]);
      if (e.node().exponent < 0 && guard) guard->see(b);
      return pow(b, e.node().exponent);
    }
    case Kind::Apply: {
      Complex<T> a = rec(e.children()[0]);
      switch (e.node().fn) {
        case Fn::Exp: return exp(a);
        case Fn::Log:
          if (guard) guard->see(a);
          return log(a);
        case Fn::Sinh: return sinh(a);
        case Fn::Cosh: return cosh(a);
        case Fn::Sin: return sin(a);
        case Fn::Cos: return cos(a);
        case Fn::Tanh:
        case Fn::Coth: {
          Complex<T> s = sinh(a), c = cosh(a);
          Complex<T> den = e.node().fn == Fn::Tanh ? c : s;
          if (guard) guard->see(den);
          return e.node().fn == Fn::Tanh ? s / c : c / s;
        }
        case Fn::Tan:
        case Fn::Cot: {
          Complex<T> s = sin(a), c = cos(a);
          Complex<T> den = e.node().fn == Fn::Tan ? c : s;
          if (guard) guard->see(den);
          return e.node().fn == Fn::Tan ? s / c : c / s;
        }
      }
    }
  }
  return Complex<T>(0);
}

template <class T>
Complex<T> evaluate(const MultiPoly& p, const Env<T>& env) {
  std::vector<Complex<T>> vals;
  for (const auto& v : p.vars()) {
    auto it = env.find(v);
    if (it == env.end()) throw std::invalid_argument("evaluate: unbound symbol " + v);
    vals.push_back(it->second);
  }
  Complex<T> acc(0);
  for (const auto& t : p.terms()) {
    Complex<T> term = to_complex<T>(t.c);
    for (std::size_t k = 0; k < vals.size(); ++k)
      if (t.m.e[k]) term *= pow(vals[k], static_cast<long>(t.m.e[k]));
    acc += term;
  }
  return acc;
}

template <class T>
Complex<T> evaluate(const LaurentPoly& p, const Env<T>& env, const Complex<T>& zeta) {
  Complex<T> acc(0);
  for (const auto& [k, c] : p.coefficients()) acc += evaluate<T>(c, env) * pow(zeta, static_cast<long>(k));
  return acc;
}

template <class T>
Complex<T> evaluate(const RationalForm& r, const Env<T>& env, const Complex<T>& zeta) {
  Complex<T> v = evaluate<T>(r.numerator(), env, zeta);
  for (const auto& [f, e] : r.factors()) v = v / pow(evaluate<T>(f, env, zeta), static_cast<long>(e));
  return v;
}

}  // namespace kk7
