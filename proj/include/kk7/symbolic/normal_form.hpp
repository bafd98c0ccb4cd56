#pragma once

// Exact rational functions of zeta = exp(theta) and the rewrite of exponential, hyperbolic and
// trigonometric atoms into that form.

#include "kk7/algebra/laurent_poly.hpp"
#include "kk7/algebra/poly_system.hpp"
#include "kk7/symbolic/expr.hpp"

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kk7 {

class NormalFormError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// numerator / prod(factor_i ^ e_i). Factors are stored normalized (lowest zeta power 0,
/// leading numeric coefficient 1) so that equal factors are recognised structurally; the
/// numerator is a Laurent polynomial, which keeps monomial factors out of the denominator.
class RationalForm {
 public:
  using Factor = std::pair<LaurentPoly, int>;

  RationalForm() = default;
  RationalForm(LaurentPoly num) : num_(std::move(num)) {}  // NOLINT(google-explicit-constructor)
  RationalForm(MultiPoly c) : num_(LaurentPoly(std::move(c))) {}  // NOLINT(google-explicit-constructor)

  static RationalForm fraction(const LaurentPoly& num, const LaurentPoly& den) {
    return RationalForm(num) * RationalForm(den).inverse();
  }

  const LaurentPoly& numerator() const { return num_; }
  const std::vector<Factor>& factors() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.empty(); }

  LaurentPoly denominator() const {
    LaurentPoly d(MultiPoly(1));
    for (const auto& [f, e] : den_) d *= f.pow(e);
    return d;
  }

  RationalForm operator-() const {
    RationalForm r = *this;
    r.num_ = -r.num_;
    return r;
  }

  friend RationalForm operator+(const RationalForm& a, const RationalForm& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    RationalForm r;
    r.den_ = a.den_;
    for (const auto& [f, e] : b.den_) {
      auto it = find(r.den_, f);
      if (it == r.den_.end()) {
        r.den_.emplace_back(f, e);
      } else {
        it->second = std::max(it->second, e);
      }
    }
    r.num_ = a.num_ * a.cofactor(r.den_) + b.num_ * b.cofactor(r.den_);
    if (r.num_.is_zero()) r.den_.clear();
    return r;
  }
  friend RationalForm operator-(const RationalForm& a, const RationalForm& b) { return a + (-b); }

  friend RationalForm operator*(const RationalForm& a, const RationalForm& b) {
    RationalForm r;
    r.num_ = a.num_ * b.num_;
    if (r.num_.is_zero()) return r;
    r.den_ = a.den_;
    for (const auto& [f, e] : b.den_) {
      auto it = find(r.den_, f);
      if (it == r.den_.end()) {
        r.den_.emplace_back(f, e);
      } else {
        it->second += e;
      }
    }
    return r;
  }
  RationalForm& operator+=(const RationalForm& o) { return *this = *this + o; }
  RationalForm& operator*=(const RationalForm& o) { return *this = *this * o; }

  RationalForm scaled(const MultiPoly& s) const {
    RationalForm r = *this;
    r.num_ = r.num_.scaled(s);
    if (r.num_.is_zero()) r.den_.clear();
    return r;
  }

  RationalForm inverse() const {
    if (num_.is_zero()) throw NormalFormError("rational form: zero denominator");
    RationalForm r;
    r.num_ = denominator();
    auto [shift, lead, f] = normalize_factor(num_);
    // num = zeta^-shift * lead * f
    r.num_ = r.num_.shifted(shift).scaled(MultiPoly(lead.inverse()));
    if (!is_trivial(f)) r.den_.emplace_back(std::move(f), 1);
    return r;
  }

  RationalForm pow(int n) const {
    if (n < 0) return inverse().pow(-n);
    RationalForm result(MultiPoly(1)), base(*this);
    while (n > 0) {
      if (n & 1) result *= base;
      n >>= 1;
      if (n > 0) base *= base;
    }
    return result;
  }

  /// zeta * d/dzeta
  RationalForm euler_derivative() const {
    RationalForm r;
    if (den_.empty()) {
      r.num_ = num_.euler_derivative();
      return r;
    }
    // (N / prod F^e)' = (N' prod F - N sum e_i F_i' prod_{j != i} F_j) / prod F^(e+1)
    LaurentPoly all(MultiPoly(1));
    for (const auto& [f, e] : den_) all *= f;
    LaurentPoly acc = num_.euler_derivative() * all;
    for (std::size_t i = 0; i < den_.size(); ++i) {
      LaurentPoly others(MultiPoly(1));
      for (std::size_t j = 0; j < den_.size(); ++j)
        if (j != i) others *= den_[j].first;
      acc = acc - num_ * den_[i].first.euler_derivative() * others.scaled(MultiPoly(static_cast<long>(den_[i].second)));
    }
    r.num_ = std::move(acc);
    if (r.num_.is_zero()) return r;
    r.den_ = den_;
    for (auto& [f, e] : r.den_) ++e;
    return r;
  }

  /// Derivative with respect to a variable v when zeta = exp(theta) and d theta / dv = rate.
  RationalForm derivative(const MultiPoly& rate) const { return euler_derivative().scaled(rate); }

  /// Applies f to every numerator coefficient (e.g. reduction modulo parameter relations).
  template <class F>
  RationalForm map_numerator(F&& f) const {
    RationalForm r = *this;
    r.num_ = num_.map_coefficients(std::forward<F>(f));
    if (r.num_.is_zero()) r.den_.clear();
    return r;
  }

  std::string to_string() const {
    std::string out = "(" + num_.to_string() + ")";
    for (const auto& [f, e] : den_) out += " / (" + f.to_string() + ")^" + std::to_string(e);
    return out;
  }

  /// zeta^-shift * lead * normalized == p
  static std::tuple<int, GaussianRational, LaurentPoly> normalize_factor(const LaurentPoly& p) {
    int shift = -p.min_power();
    LaurentPoly q = p.shifted(shift);
    GaussianRational lead = q.coefficient(q.max_power()).leading_term().c;
    return {shift, lead, q.scaled(MultiPoly(lead.inverse()))};
  }

 private:
  static bool is_trivial(const LaurentPoly& f) {
    return f.size() == 1 && f.max_power() == 0 && f.coefficient(0).is_constant();
  }

  static std::vector<Factor>::iterator find(std::vector<Factor>& fs, const LaurentPoly& f) {
    for (auto it = fs.begin(); it != fs.end(); ++it)
      if (it->first == f) return it;
    return fs.end();
  }

  LaurentPoly cofactor(const std::vector<Factor>& target) const {
    LaurentPoly c(MultiPoly(1));
    for (const auto& [f, e] : target) {
      int mine = 0;
      for (const auto& [g, k] : den_)
        if (g == f) mine = k;
      if (e > mine) c *= f.pow(e - mine);
    }
    return c;
  }

  LaurentPoly num_;
  std::vector<Factor> den_;
};

/// Rewrites an expression as a rational function of zeta.
///
/// Two ways to fix zeta: an explicit phase theta (zeta = exp(theta)); every atom argument must
/// be an integer multiple of theta. Or a variable and frequency: zeta = exp(frequency*var +
/// rho) where the constant offset rho is read off the first atom and absorbed into zeta.
/// Trigonometric atoms are rewritten through the imaginary unit (sin z = -i sinh(iz), ...).
class ExponentialNormalizer {
 public:
  using FuncHook = std::function<RationalForm(const Expr& func)>;

  static ExponentialNormalizer with_phase(const Expr& theta) {
    ExponentialNormalizer n;
    n.theta_ = to_multipoly(expand(theta));
    if (n.theta_.is_zero()) throw NormalFormError("exponential normal form: zero phase");
    return n;
  }

  static ExponentialNormalizer with_frequency(const std::string& var, const Expr& frequency) {
    ExponentialNormalizer n;
    n.var_ = var;
    n.freq_ = to_multipoly(expand(frequency));
    if (n.freq_.is_zero()) throw NormalFormError("exponential normal form: zero frequency");
    return n;
  }

  /// Names treated as independent variables; a bare occurrence outside an atom is rejected.
  void set_independent(std::set<std::string> vars) { independent_ = std::move(vars); }
  void set_func_hook(FuncHook hook) { hook_ = std::move(hook); }

  RationalForm operator()(const Expr& e) {
    switch (e.kind()) {
      case Kind::Const: return RationalForm(MultiPoly(e.value()));
      case Kind::Symbol:
        if (independent_.count(e.name()) || e.name() == var_)
          throw NormalFormError("exponential normal form: " + e.name() + " occurs outside an atom");
        return RationalForm(MultiPoly::variable(e.name()));
      case Kind::Func:
        if (!hook_) throw NormalFormError("exponential normal form: unknown function " + e.to_infix());
        return hook_(e);
      case Kind::Sum: {
        RationalForm acc;
        for (const auto& c : e.children()) acc += (*this)(c);
        return acc;
      }
      case Kind::Product: {
        RationalForm acc(MultiPoly(1));
        for (const auto& c : e.children()) acc *= (*this)(c);
        return acc;
      }
      case Kind::Pow: return (*this)(e.children()[0]).pow(e.node().exponent);
      case Kind::Apply: return atom(e);
    }
    return {};
  }

 private:
  ExponentialNormalizer() = default;

  RationalForm atom(const Expr& e) {
    auto it = atoms_.find(e);
    if (it != atoms_.end()) return it->second;
    const Expr& arg = e.children()[0];
    const GaussianRational I = GaussianRational::i();
    RationalForm r;
    switch (e.node().fn) {
      case Fn::Log: throw NormalFormError("exponential normal form: log atoms are not supported");
      case Fn::Exp: r = hyperbolic(Fn::Exp, arg); break;
      case Fn::Sinh:
      case Fn::Cosh:
      case Fn::Tanh:
      case Fn::Coth: r = hyperbolic(e.node().fn, arg); break;
      case Fn::Sin: r = hyperbolic(Fn::Sinh, Expr(I) * arg).scaled(MultiPoly(-I)); break;
      case Fn::Cos: r = hyperbolic(Fn::Cosh, Expr(I) * arg); break;
      case Fn::Tan: r = hyperbolic(Fn::Tanh, Expr(I) * arg).scaled(MultiPoly(-I)); break;
      case Fn::Cot: r = hyperbolic(Fn::Coth, Expr(I) * arg).scaled(MultiPoly(I)); break;
    }
    atoms_.emplace(e, r);
    return r;
  }

  static long integer_ratio(const MultiPoly& num, const MultiPoly& den, const std::string& what) {
    if (num.is_zero()) return 0;
    GaussianRational m = num.leading_term().c / den.leading_term().c;
    if (!(num == den.scaled(m)) || !m.is_integer())
      throw NormalFormError("exponential normal form: incommensurate frequency in " + what);
    if (!m.re().get_num().fits_slong_p()) throw NormalFormError("exponential normal form: multiple too large");
    return m.re().get_num().get_si();
  }

  long multiple(const Expr& arg) {
    MultiPoly beta = to_multipoly(expand(arg));
    const std::string what = arg.to_infix();
    if (var_.empty()) {
      long m = integer_ratio(beta, theta_, what);
      if (m == 0) throw NormalFormError("exponential normal form: constant atom argument " + what);
      return m;
    }
    MultiPoly slope = beta.derivative(var_);
    long m = integer_ratio(slope, freq_, what);
    if (m == 0) throw NormalFormError("exponential normal form: atom independent of " + var_ + ": " + what);
    MultiPoly rest = beta - (freq_ * MultiPoly::variable(var_)).scaled(GaussianRational(m));
    if (!offset_) offset_ = rest.scaled(GaussianRational(1, m));
    if (!(rest == offset_->scaled(GaussianRational(m))))
      throw NormalFormError("exponential normal form: inconsistent phase offset in " + what);
    return m;
  }

  RationalForm hyperbolic(Fn f, const Expr& arg) {
    long m = multiple(arg);
    const int mi = static_cast<int>(m);
    const LaurentPoly one(MultiPoly(1));
    const MultiPoly half(GaussianRational(1, 2));
    switch (f) {
      case Fn::Exp: return RationalForm(LaurentPoly::monomial(mi));
      case Fn::Sinh: return RationalForm((LaurentPoly::monomial(mi) - LaurentPoly::monomial(-mi)).scaled(half));
      case Fn::Cosh: return RationalForm((LaurentPoly::monomial(mi) + LaurentPoly::monomial(-mi)).scaled(half));
      case Fn::Tanh:
        return RationalForm::fraction(LaurentPoly::monomial(2 * mi) - one, LaurentPoly::monomial(2 * mi) + one);
      case Fn::Coth:
        return RationalForm::fraction(LaurentPoly::monomial(2 * mi) + one, LaurentPoly::monomial(2 * mi) - one);
      default: throw NormalFormError("exponential normal form: unexpected atom");
    }
  }

  MultiPoly theta_;
  std::string var_;
  MultiPoly freq_;
  std::optional<MultiPoly> offset_;
  std::set<std::string> independent_{"x", "t", "xi"};
  FuncHook hook_;
  std::map<Expr, RationalForm, ExprLess> atoms_;
};

/// zeta = exp(theta).
inline RationalForm exponential_normal_form(const Expr& e, const Expr& theta) {
  auto n = ExponentialNormalizer::with_phase(theta);
  return n(e);
}

/// zeta = exp(frequency * var + rho), rho a constant offset shared by all atoms.
inline RationalForm exponential_normal_form(const Expr& e, const std::string& var, const Expr& frequency) {
  auto n = ExponentialNormalizer::with_frequency(var, frequency);
  return n(e);
}

/// One equation per zeta power of the numerator, deduplicated up to constant factors.
inline PolySystem laurent_collect(const RationalForm& r) {
  PolySystem sys;
  for (const auto& [k, c] : r.numerator().coefficients()) sys.add_equation(c, k);
  return sys;
}

}  // namespace kk7
